"""Exponential multistep integrators for the boundary eigenfunction systems.

All the ODEs in this package have the shape

    y_i'(t) = d_i y_i(t) + sum_j A_ij(t) y_j(t)      (i = 1..m),

with a stiff-but-diagonal linear part d (d = -4ik^2 on the deformed contours,
so |Re(d h)| stays small while |Im(d h)| can be large) and smooth, slowly
varying coupling A(t) built from the boundary traces.  Treating d exactly via
Duhamel and interpolating only the coupling term gives

    y(t_{n+1}) = e^{d h} y(t_n) + h * sum_{j=0}^{3} W_j(d h) F(t_{n+1-j}),

with F = A y and weights W_j obtained by integrating the cubic interpolant of
F through t_{n+1}, t_n, t_{n-1}, t_{n-2} against the kernel e^{d(h-s)}: an
implicit exponential Adams-Moulton scheme of classical order 4.  The same
weights with known F(t) give an explicit exponential quadrature used for the
perturbative orders and for the Duhamel integrals G, H.

The weights reduce to moments N_m(z) = int_0^1 e^{z(1-a)} a^m da, evaluated
by a stable power series for small |z| and a two-term recurrence otherwise.

Start-up (no history at t_0, t_1) uses the two-node member of the same family
(exponential trapezoid) with enough substeps that the one-time O(h^3/m^2)
start error stays below the O(h^4) budget of the main scheme.
"""

from __future__ import annotations

import numpy as np

_NODES4 = (1.0, 0.0, -1.0, -2.0)
_NODES2 = (1.0, 0.0)

_SERIES_TERMS = 26  # z^p/(p+m+1)! below 1e-17 for |z| <= 0.5 well before p=26


def _moment_funcs(z: np.ndarray, mmax: int) -> np.ndarray:
    """N_m(z) = int_0^1 e^{z(1-a)} a^m da for m = 0..mmax, any complex z.

    Series branch: N_m(z) = m! * sum_p z^p / (p+m+1)!   (|z| small)
    Recurrence:    N_0 = expm1(z)/z, N_m = (m N_{m-1} - 1)/z   (|z| large)
    """
    z = np.asarray(z, dtype=complex)
    out = np.empty((mmax + 1,) + z.shape, dtype=complex)
    small = np.abs(z) < 0.5
    if np.any(small):
        zs = z[small]
        for m in range(mmax + 1):
            # Horner on m! sum_p z^p/(p+m+1)! = [1 + z/(m+2)(1 + z/(m+3)(...))]/(m+1)
            acc = np.ones_like(zs)
            for p in range(_SERIES_TERMS, 0, -1):
                acc = acc * zs / (p + m + 1) + 1.0
            out[m][small] = acc / (m + 1)
    if np.any(~small):
        zl = z[~small]
        n_prev = np.expm1(zl) / zl
        out[0][~small] = n_prev
        for m in range(1, mmax + 1):
            n_prev = (m * n_prev - 1.0) / zl
            out[m][~small] = n_prev
    return out


def _lagrange_matrix(nodes) -> np.ndarray:
    """C[j, m]: basis polynomial l_j(theta) = sum_m C[j, m] theta^m."""
    nodes = np.asarray(nodes, dtype=float)
    n = nodes.size
    C = np.empty((n, n))
    for j in range(n):
        others = np.delete(nodes, j)
        coeffs = np.poly(others)[::-1]  # ascending powers of theta, monic
        C[j] = coeffs / np.prod(nodes[j] - others)
    return C


def quadrature_weights(z: np.ndarray, nodes=_NODES4) -> np.ndarray:
    """W_j(z) = int_0^1 e^{z(1-theta)} l_j(theta) dtheta, shape (len(nodes),) + z.shape.

    W_j(0) recovers the classical Adams-Moulton weights of the family.
    """
    C = _lagrange_matrix(nodes)
    N = _moment_funcs(z, C.shape[1] - 1)
    return np.tensordot(C, N, axes=(1, 0))


def _substep_count(h: float) -> int:
    # one-time trapezoid start error ~ h^3/m^2; m ~ h^{-1/2} keeps it at h^4
    return max(8, int(np.ceil(1.5 / np.sqrt(h))))


def _row_scale(W, F):
    # weight row i of the forcing with W[i]; shapes (m,nk) * (m,nk)
    return W * F


def _implicit_step(rhs, hW0, A):
    """Solve (I - h*W0 row-scaled A) y = rhs for stacked columns.

    A has shape (m, m, nk); rhs, hW0 have shape (m, nk).  m = 2 is solved in
    closed form, anything else through batched LAPACK.
    """
    m = rhs.shape[0]
    if m == 2:
        b11 = 1.0 - hW0[0] * A[0, 0]
        b12 = -hW0[0] * A[0, 1]
        b21 = -hW0[1] * A[1, 0]
        b22 = 1.0 - hW0[1] * A[1, 1]
        det = b11 * b22 - b12 * b21
        y0 = (b22 * rhs[0] - b12 * rhs[1]) / det
        y1 = (b11 * rhs[1] - b21 * rhs[0]) / det
        return np.stack([y0, y1])
    nk = rhs.shape[1]
    B = np.broadcast_to(np.eye(m, dtype=complex)[:, :, None], (m, m, nk)).copy()
    B -= hW0[:, None, :] * A
    Bk = np.moveaxis(B, 2, 0)           # (nk, m, m)
    rk = np.moveaxis(rhs, 1, 0)[..., None]
    yk = np.linalg.solve(Bk, rk)[..., 0]
    return np.moveaxis(yk, 0, 1)


def _trapezoid_semilinear(t0, t1, nsub, d, A_fn, y):
    """Implicit exponential trapezoid from t0 to t1 in nsub substeps."""
    hs = (t1 - t0) / nsub
    W = quadrature_weights(d * hs, _NODES2)   # (2, m, nk)
    prop = np.exp(d * hs)
    F = _mat_apply(A_fn(t0), y)
    for s in range(nsub):
        A_next = A_fn(t0 + (s + 1) * hs)
        rhs = prop * y + hs * _row_scale(W[1], F)
        y = _implicit_step(rhs, hs * W[0], A_next)
        F = _mat_apply(A_next, y)
    return y, F


def _mat_apply(A, y):
    # (m,m,nk) @ (m,nk) -> (m,nk)
    return np.einsum("ijk,jk->ik", A, y)


def integrate_semilinear(t: np.ndarray, d: np.ndarray, A_fn, y0: np.ndarray,
                         keep_history: bool = True):
    """March y' = diag(d) y + A(t) y over the uniform grid t.

    d: (m, nk) stiff diagonal (constant in t); A_fn(tq) -> (m, m, nk) smooth
    coupling; y0: (m, nk) initial state.  Returns y with shape (nt, m, nk)
    (or just the final (m, nk) state when keep_history=False).
    """
    t = np.asarray(t, dtype=float)
    nt = t.size
    h = t[-1] / (nt - 1)
    d = np.asarray(d, dtype=complex)
    y = np.asarray(y0, dtype=complex)
    m, nk = y.shape
    hist = np.empty((nt, m, nk), dtype=complex) if keep_history else None
    if keep_history:
        hist[0] = y

    W = quadrature_weights(d * h, _NODES4)    # (4, m, nk)
    prop = np.exp(d * h)
    nsub = _substep_count(h)

    Fs = [_mat_apply(A_fn(t[0]), y)]          # will grow to [F_n, F_{n-1}, F_{n-2}]
    for n in (0, 1):
        if n + 1 >= nt:
            return hist if keep_history else y
        y, Fnew = _trapezoid_semilinear(t[n], t[n + 1], nsub, d, A_fn, y)
        Fs = [Fnew] + Fs
        if keep_history:
            hist[n + 1] = y

    for n in range(2, nt - 1):
        A_next = A_fn(t[n + 1])
        rhs = prop * y + h * (_row_scale(W[1], Fs[0])
                              + _row_scale(W[2], Fs[1])
                              + _row_scale(W[3], Fs[2]))
        y = _implicit_step(rhs, h * W[0], A_next)
        Fs = [_mat_apply(A_next, y)] + Fs[:2]
        if keep_history:
            hist[n + 1] = y
    return hist if keep_history else y


def integrate_forced(t: np.ndarray, mu: np.ndarray, F_fn, y0=None,
                     keep_history: bool = True):
    """March the scalar family y' = mu*y + F(t) with known forcing.

    mu: (nk,); F_fn(tq) -> (nk,).  Explicit: the Adams-Moulton weights are
    usable directly because F(t_{n+1}) is available.  Returns (nt, nk) or the
    final (nk,) state.
    """
    t = np.asarray(t, dtype=float)
    nt = t.size
    h = t[-1] / (nt - 1)
    mu = np.asarray(mu, dtype=complex)
    y = (np.zeros_like(mu) if y0 is None else np.asarray(y0, dtype=complex)).copy()
    hist = np.empty((nt, mu.size), dtype=complex) if keep_history else None
    if keep_history:
        hist[0] = y

    W = quadrature_weights(mu * h, _NODES4)
    prop = np.exp(mu * h)
    nsub = _substep_count(h)

    Fs = [F_fn(t[0])]
    for n in (0, 1):
        if n + 1 >= nt:
            return hist if keep_history else y
        # explicit trapezoid substeps (forcing known at substep times)
        hs = h / nsub
        Wt = quadrature_weights(mu * hs, _NODES2)
        props = np.exp(mu * hs)
        Fcur = F_fn(t[n])
        for s in range(nsub):
            Fnext = F_fn(t[n] + (s + 1) * hs)
            y = props * y + hs * (Wt[0] * Fnext + Wt[1] * Fcur)
            Fcur = Fnext
        Fs = [Fcur] + Fs
        if keep_history:
            hist[n + 1] = y

    for n in range(2, nt - 1):
        Fnext = F_fn(t[n + 1])
        y = prop * y + h * (W[0] * Fnext + W[1] * Fs[0]
                            + W[2] * Fs[1] + W[3] * Fs[2])
        Fs = [Fnext] + Fs[:2]
        if keep_history:
            hist[n + 1] = y
    return hist if keep_history else y
