"""Problem configuration, time-series containers, and boundary-data presets.

Everything in this package revolves around boundary traces of the cubic
Schrodinger field on the interval [0, L],

    i q_t + q_xx - 2*lam*|q|^2 q = 0,    q(x, 0) = 0,    lam = +1 or -1,

    g0(t) = q(0, t),   g1(t) = q_x(0, t),
    h0(t) = q(L, t),   h1(t) = q_x(L, t).

The trace representations and integral equations downstream need the data at
arbitrary quadrature times, so the internal representation is always "complex
samples on a uniform grid + cubic interpolation".  This module owns those
containers (`TimeSeries`, `BoundaryData`), the run configuration, the analytic
presets used by tests and the command line, CSV input/output, and a few small
time-integral helpers shared across modules (cumulative Simpson, the phase
integral Omega0, leading large-k coefficients of the boundary eigenfunctions).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicSpline

_GRID_RTOL = 1e-9  # relative tolerance for "is this grid uniform / shared"


def make_time_grid(T: float, nt: int) -> np.ndarray:
    """Uniform grid t_j = j*T/(nt-1), j = 0..nt-1."""
    if T <= 0:
        raise ValueError(f"final time must be positive, got T={T}")
    if nt < 2:
        raise ValueError(f"time grid needs at least 2 nodes, got nt={nt}")
    return np.linspace(0.0, float(T), int(nt))


@dataclass
class TimeSeries:
    """Complex samples on a uniform time grid starting at t=0.

    Treat instances as immutable after construction; they are shared
    read-only between the solver stages.  Calling the instance evaluates a
    cubic interpolant (natural for >=4 nodes, linear fallback below that).
    """

    t: np.ndarray
    values: np.ndarray
    _spline: Optional[CubicSpline] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.t.ndim != 1 or self.t.size < 2:
            raise ValueError("time grid must be 1-d with at least 2 nodes")
        if self.values.shape != self.t.shape:
            raise ValueError(
                f"values shape {self.values.shape} does not match grid {self.t.shape}"
            )
        if abs(self.t[0]) > _GRID_RTOL:
            raise ValueError(f"time grid must start at 0, got t[0]={self.t[0]}")
        dt = np.diff(self.t)
        if np.any(dt <= 0):
            raise ValueError("time grid must be strictly increasing")
        h = self.t[-1] / (self.t.size - 1)
        if not np.allclose(dt, h, rtol=100 * _GRID_RTOL, atol=100 * _GRID_RTOL * h):
            raise ValueError("time grid must be uniform")

    @property
    def nt(self) -> int:
        return self.t.size

    @property
    def T(self) -> float:
        return float(self.t[-1])

    @property
    def dt(self) -> float:
        return float(self.t[-1] / (self.t.size - 1))

    def __call__(self, tq):
        """Evaluate at arbitrary times by cubic interpolation."""
        if self._spline is None:
            if self.t.size >= 4:
                object.__setattr__(self, "_spline", CubicSpline(self.t, self.values))
            else:
                # too short for a cubic; degrade to linear
                object.__setattr__(
                    self,
                    "_spline",
                    lambda x: np.interp(x, self.t, self.values.real)
                    + 1j * np.interp(x, self.t, self.values.imag),
                )
        return self._spline(tq)

    def derivative(self) -> "TimeSeries":
        """Time derivative via the cubic interpolant, sampled on the same grid."""
        if self.t.size >= 4:
            return TimeSeries(self.t, CubicSpline(self.t, self.values)(self.t, 1))
        return TimeSeries(self.t, np.gradient(self.values, self.t))

    def conj(self) -> "TimeSeries":
        return TimeSeries(self.t, np.conj(self.values))

    @classmethod
    def zeros(cls, t: np.ndarray) -> "TimeSeries":
        t = np.asarray(t, dtype=float)
        return cls(t, np.zeros_like(t, dtype=complex))

    @classmethod
    def from_callable(cls, f: Callable, t: np.ndarray) -> "TimeSeries":
        t = np.asarray(t, dtype=float)
        return cls(t, np.asarray(f(t), dtype=complex))


@dataclass
class BoundaryData:
    """The four boundary traces (g0, g1, h0, h1) on a shared time grid."""

    g0: TimeSeries
    g1: TimeSeries
    h0: TimeSeries
    h1: TimeSeries

    def __post_init__(self):
        t0 = self.g0.t
        for name in ("g1", "h0", "h1"):
            ts = getattr(self, name)
            if ts.t.shape != t0.shape or not np.allclose(ts.t, t0, rtol=_GRID_RTOL):
                raise ValueError(f"{name} is not on the shared time grid")

    @property
    def t(self) -> np.ndarray:
        return self.g0.t

    @classmethod
    def from_arrays(cls, t, g0, g1, h0, h1) -> "BoundaryData":
        return cls(
            TimeSeries(t, g0), TimeSeries(t, g1), TimeSeries(t, h0), TimeSeries(t, h1)
        )


COMPATIBILITY_TOL = 1e-12


def check_compatibility(bd: BoundaryData, tol: float = COMPATIBILITY_TOL) -> list:
    """Corner-compatibility of boundary data with the vanishing initial state.

    With q(x,0) = 0 every trace must vanish at t = 0; returns a list of
    violation messages naming the offending corner values (empty when ok).
    """
    report = []
    for name in ("g0", "g1", "h0", "h1"):
        v0 = getattr(bd, name).values[0]
        if abs(v0) > tol:
            report.append(f"{name}(0) = {v0} exceeds compatibility tolerance {tol}")
    return report


@dataclass
class ProblemConfig:
    """Run-level configuration shared by all solver entry points.

    lam is the sign in front of the cubic term (+1 defocusing, -1 focusing).
    epsilon only matters for perturbative runs, where the supplied data are
    understood as the order-1 profiles and the physical data are eps*profile.
    contour_params is a ContourSpec (see nlsdtn.contour); None means module
    defaults chosen from (L, T).
    """

    lam: int = 1
    L: float = 1.0
    T: float = 1.0
    nt: int = 201
    problem_kind: str = "dirichlet"
    epsilon: float = 1.0
    contour_params: object = None

    def __post_init__(self):
        if self.lam not in (+1, -1):
            raise ValueError(f"lam must be +1 or -1, got {self.lam}")
        if self.L <= 0:
            raise ValueError(f"interval length must be positive, got L={self.L}")
        if self.T <= 0:
            raise ValueError(f"final time must be positive, got T={self.T}")
        if self.nt < 2:
            raise ValueError(f"nt must be >= 2, got {self.nt}")
        kind = str(self.problem_kind).lower()
        if kind not in ("dirichlet", "neumann"):
            raise ValueError(f"problem_kind must be Dirichlet or Neumann, got {self.problem_kind}")
        self.problem_kind = kind
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")

    @property
    def time_grid(self) -> np.ndarray:
        return make_time_grid(self.T, self.nt)


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

PRESET_NAMES = ("polynomial", "gaussian-ramp", "sine-ramp", "ramp-exp", "bump", "zero")


def preset_functions(name: str, amplitude: float = 1.0, rate: float = 1.0,
                     degree: int = 2):
    """Return (f, fdot) callables for a named boundary-data preset.

    All presets vanish at t = 0 so they are compatible with q(x,0) = 0:

      polynomial     a * t^m                      (m = degree >= 1)
      gaussian-ramp  a * t * exp(-b t^2)
      sine-ramp      a * sin(b t)
      ramp-exp       a * t * exp(-b t)
      bump           a * (4 t (1 - 2 t))^3 on [0, 1/2], 0 outside
      zero           0

    Derivatives are exact (the sine-series oracle differentiates the data).
    """
    a, b = float(amplitude), float(rate)
    if name == "polynomial":
        m = int(degree)
        if m < 1:
            raise ValueError("polynomial preset needs degree >= 1 to vanish at t=0")
        return (lambda t: a * np.asarray(t, float) ** m,
                lambda t: a * m * np.asarray(t, float) ** (m - 1))
    if name == "gaussian-ramp":
        return (lambda t: a * t * np.exp(-b * np.asarray(t, float) ** 2),
                lambda t: a * (1 - 2 * b * np.asarray(t, float) ** 2)
                * np.exp(-b * np.asarray(t, float) ** 2))
    if name == "sine-ramp":
        return (lambda t: a * np.sin(b * np.asarray(t, float)),
                lambda t: a * b * np.cos(b * np.asarray(t, float)))
    if name == "ramp-exp":
        return (lambda t: a * t * np.exp(-b * np.asarray(t, float)),
                lambda t: a * (1 - b * np.asarray(t, float))
                * np.exp(-b * np.asarray(t, float)))
    if name == "bump":
        def f(t):
            t = np.asarray(t, float)
            p = 4.0 * t * (1.0 - 2.0 * t)
            out = a * np.where((t > 0) & (t < 0.5), p, 0.0) ** 3
            return out

        def fdot(t):
            t = np.asarray(t, float)
            p = 4.0 * t * (1.0 - 2.0 * t)
            pd = 4.0 - 16.0 * t
            out = np.where((t > 0) & (t < 0.5), 3.0 * a * p ** 2 * pd, 0.0)
            return out

        return f, fdot
    if name == "zero":
        z = lambda t: np.zeros_like(np.asarray(t, float))
        return z, z
    raise ValueError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")


def preset_series(name: str, t: np.ndarray, amplitude: float = 1.0,
                  rate: float = 1.0, degree: int = 2) -> TimeSeries:
    f, _ = preset_functions(name, amplitude, rate, degree)
    return TimeSeries.from_callable(f, t)


# ---------------------------------------------------------------------------
# CSV input/output: header "t,re,im", strictly increasing t starting at 0
# ---------------------------------------------------------------------------

def read_timeseries_csv(path) -> TimeSeries:
    with open(path) as fh:
        header = fh.readline().strip()
    if [c.strip() for c in header.split(",")] != ["t", "re", "im"]:
        raise ValueError(f"{path}: expected header 't,re,im', got {header!r}")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != 3:
        raise ValueError(f"{path}: expected 3 columns, got {data.shape[1]}")
    t = data[:, 0]
    if t[0] != 0 or np.any(np.diff(t) <= 0):
        raise ValueError(f"{path}: t must be strictly increasing starting at 0")
    return TimeSeries(t, data[:, 1] + 1j * data[:, 2])


def write_timeseries_csv(path, ts: TimeSeries) -> None:
    arr = np.column_stack([ts.t, ts.values.real, ts.values.imag])
    np.savetxt(path, arr, delimiter=",", header="t,re,im", comments="", fmt="%.17g")


# ---------------------------------------------------------------------------
# shared time-integral helpers
# ---------------------------------------------------------------------------

def cumulative_integral(t: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Cumulative integral of samples y(t) from t[0], Simpson-accurate.

    Works along the last axis for stacked integrands (complex supported).
    """
    y = np.asarray(y)
    if np.iscomplexobj(y):
        return (cumulative_simpson(y.real, x=t, initial=0.0)
                + 1j * cumulative_simpson(y.imag, x=t, initial=0.0))
    return cumulative_simpson(y, x=t, initial=0.0)


def omega0(f0: TimeSeries, f1: TimeSeries, lam: int) -> np.ndarray:
    """The phase integral Omega0(t) = (lam/2) * int_0^t (conj(f0) f1 - f0 conj(f1)).

    Purely imaginary for any pair of traces; shows up as the 1/k coefficient
    of the second eigenfunction column and in the closed values of the
    k*M2hat-type contour integrals.
    """
    integrand = np.conj(f0.values) * f1.values - f0.values * np.conj(f1.values)
    w = 0.5 * lam * cumulative_integral(f0.t, integrand)
    return w


@dataclass
class AsymptoticCoeffs:
    """Leading large-k expansion coefficients of the boundary eigenfunctions.

    Phi1 ~ Phi1_1/k + Phi1_2/k^2 + ..., Phi2 ~ 1 + Phi2_1/k + ... along the
    directions where the exponential is bounded, and likewise phi* for the
    x = L column.  a_1 is the expansion coefficient contributed by the
    initial data; it is identically 0 here because q(x,0) = 0.
    """

    Phi1_1: TimeSeries
    Phi1_2: TimeSeries
    Phi2_1: TimeSeries
    phi1_1: TimeSeries
    phi1_2: TimeSeries
    phi2_1: TimeSeries
    a_1: complex = 0.0


def asymptotic_coeffs(bd: BoundaryData, lam: int) -> AsymptoticCoeffs:
    """Evaluate the expansion coefficients directly from the boundary data.

    Phi1_1 = g0/(2i)                     phi1_1 = h0/(2i)
    Phi1_2 = g1/4 + (g0/(2i)) * Omega0   phi1_2 = h1/4 + (h0/(2i)) * Omega0L
    Phi2_1 = Omega0                      phi2_1 = Omega0L
    """
    t = bd.t
    w0 = omega0(bd.g0, bd.g1, lam)
    wL = omega0(bd.h0, bd.h1, lam)
    half_i = 1.0 / (2.0j)
    return AsymptoticCoeffs(
        Phi1_1=TimeSeries(t, half_i * bd.g0.values),
        Phi1_2=TimeSeries(t, 0.25 * bd.g1.values + half_i * bd.g0.values * w0),
        Phi2_1=TimeSeries(t, w0),
        phi1_1=TimeSeries(t, half_i * bd.h0.values),
        phi1_2=TimeSeries(t, 0.25 * bd.h1.values + half_i * bd.h0.values * wL),
        phi2_1=TimeSeries(t, wL),
        a_1=0.0,
    )


def sup_norm(a: np.ndarray, b: np.ndarray = None) -> float:
    if b is None:
        return float(np.max(np.abs(a)))
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def rel_sup_norm(approx: np.ndarray, exact: np.ndarray) -> float:
    """sup |approx - exact| / sup |exact| (safe for identically-zero exact)."""
    scale = np.max(np.abs(exact))
    if scale == 0:
        return float(np.max(np.abs(approx)))
    return float(np.max(np.abs(np.asarray(approx) - np.asarray(exact))) / scale)
