"""Brute-force reference implementations used by tests and acceptance runs.

Everything here is deliberately slow and self-contained: dense matrices are
assembled straight from the operator definitions, and the smoothed-TV solver
below is plain first-order descent with its own roll-based operators, sharing
no code path with the FFT machinery it is used to check.
"""

from __future__ import annotations

import numpy as np

from .errors import NoConvergence, TooLarge

MAX_DENSE_N = 32


def _check_size(n: int) -> None:
    if n > MAX_DENSE_N:
        raise TooLarge(f"dense oracle limited to n <= {MAX_DENSE_N}, got {n}")


def dense_operator(kind: str, n: int, kernel: np.ndarray | None = None) -> np.ndarray:
    """Explicit matrix for D, D^T or K acting on row-major vectorized images.

    'D'  -> (2 n^2, n^2), dx rows stacked above dy rows;
    'Dt' -> exact transpose of 'D';
    'K'  -> (n^2, n^2) circular true convolution with the given kernel.
    """
    _check_size(n)
    if kind in ("D", "Dt"):
        eye = np.eye(n)
        shift = np.roll(eye, 1, axis=1)  # shift[a, (a+1) mod n] = 1
        c = shift - eye
        d = np.vstack([np.kron(eye, c), np.kron(c, eye)])
        return d.T.copy() if kind == "Dt" else d
    if kind == "K":
        if kernel is None:
            raise ValueError("kind 'K' requires a kernel")
        kernel = np.asarray(kernel, dtype=np.float64)
        m = kernel.shape[0]
        if m > n:
            raise ValueError(f"kernel side {m} exceeds n {n}")
        ctr = (m - 1) // 2
        mat = np.zeros((n * n, n * n))
        idx = np.arange(n * n)
        i, j = divmod(idx, n)
        for a in range(-ctr, ctr + 1):
            for b in range(-ctr, ctr + 1):
                src = ((i - a) % n) * n + (j - b) % n
                mat[idx, src] += kernel[ctr + a, ctr + b]
        return mat
    raise ValueError(f"unknown operator kind {kind!r}")


def reference_tv_solve(
    f: np.ndarray,
    kernel: np.ndarray,
    mu: float,
    epsilon: float = 1e-6,
    tv_variant: str = "iso",
    max_iters: int = 1_000_000,
) -> np.ndarray:
    """Minimize the epsilon-smoothed TV/L2 objective by descent.

    Objective (isotropic): sum_i sqrt(||D_i u||^2 + eps^2) + mu/2 ||Ku - f||^2,
    with K and D applied as explicit dense matrices.  Steepest descent with a
    spectral (Barzilai-Borwein) trial step, safeguarded by nonmonotone Armijo
    backtracking over a 10-step reference window; runs until the gradient
    2-norm drops below 1e-8 * n.  Deterministic given its inputs.

    Raises NoConvergence when the iteration cap is hit first.
    """
    n = f.shape[0]
    _check_size(n)
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if tv_variant not in ("iso", "aniso"):
        raise ValueError(f"unknown tv_variant {tv_variant!r}")
    eps2 = epsilon * epsilon
    n2 = n * n

    kmat = dense_operator("K", n, kernel)
    dmat = dense_operator("D", n)
    kmat_t = kmat.T.copy()
    dmat_t = dmat.T.copy()
    fvec = f.astype(np.float64).ravel()

    def residuals(u):
        return dmat @ u, kmat @ u - fvec

    def obj(d, r):
        dx, dy = d[:n2], d[n2:]
        if tv_variant == "iso":
            tv = np.sqrt(dx * dx + dy * dy + eps2).sum()
        else:
            tv = np.sqrt(dx * dx + eps2).sum() + np.sqrt(dy * dy + eps2).sum()
        return tv + 0.5 * mu * float(r @ r)

    def grad(d, r):
        dx, dy = d[:n2], d[n2:]
        if tv_variant == "iso":
            s = np.sqrt(dx * dx + dy * dy + eps2)
            rho = np.concatenate([dx / s, dy / s])
        else:
            rho = np.concatenate([dx / np.sqrt(dx * dx + eps2), dy / np.sqrt(dy * dy + eps2)])
        return dmat_t @ rho + mu * (kmat_t @ r)

    gtol = 1e-8 * n
    u = fvec.copy()
    d, r = residuals(u)
    fu = obj(d, r)
    g = grad(d, r)
    history = [fu]
    step = 1.0 / (mu + 8.0 / epsilon)
    u_prev = g_prev = None
    for it in range(max_iters):
        gnorm2 = float(g @ g)
        if np.sqrt(gnorm2) < gtol:
            return u.reshape(n, n)
        if u_prev is not None:
            s = u - u_prev
            y = g - g_prev
            sy = float(s @ y)
            if sy > 0:
                # alternate the two spectral step lengths
                step = float(s @ s) / sy if it % 2 == 0 else sy / float(y @ y)
        step = min(max(step, 1e-12), 1e12)
        t = step
        f_ref = max(history[-10:])
        u_try = u - t * g
        d, r = residuals(u_try)
        f_try = obj(d, r)
        backtracks = 0
        while f_try > f_ref - 1e-4 * t * gnorm2 and backtracks < 60:
            t *= 0.5
            backtracks += 1
            u_try = u - t * g
            d, r = residuals(u_try)
            f_try = obj(d, r)
        u_prev, g_prev = u, g
        u, fu = u_try, f_try
        history.append(fu)
        g = grad(d, r)
    raise NoConvergence(f"reference solver: gradient tolerance not reached in {max_iters} iterations")
