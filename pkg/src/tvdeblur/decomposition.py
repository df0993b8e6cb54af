"""Split an iterate into a piecewise-constant and a smooth component.

Any recorded iterate (u, w) can be read as the solution of a mixed model in
which w plays the role of the gradient of a piecewise-constant part u1 and
the leftover u2 = u - u1 carries the squared-gradient (Tikhonov) penalty.
The shrunk field w is generally not an exact discrete gradient, so u1 is
defined as its least-squares potential; the residual ||w - D u1|| measures
how far w is from integrability and is worth reporting next to the split.
"""

from __future__ import annotations

import numpy as np

from .grid_ops import DX, DY, forward_diff
from .spectral import SpectralCache


def decompose(u: np.ndarray, w: np.ndarray, cache: SpectralCache) -> tuple[np.ndarray, np.ndarray]:
    """Return (u1, u2) with u1 + u2 == u exactly.

    u1 is the zero-mean least-squares potential of w: the minimizer of
    sum_i ||D_i x - w_i||^2 over zero-mean images, obtained per frequency
    as (conj(eigDx) wx + conj(eigDy) wy) / eigDtD with the zero frequency
    pinned to 0.  u2 = u - u1 carries all of mean(u).
    """
    wx_hat = np.fft.fft2(w[..., DX])
    wy_hat = np.fft.fft2(w[..., DY])
    numer = np.conj(cache.eig_dx) * wx_hat + np.conj(cache.eig_dy) * wy_hat
    denom = cache.eig_dtd.copy()
    denom[0, 0] = 1.0  # zero frequency handled by convention below
    x_hat = numer / denom
    x_hat[0, 0] = 0.0
    u1 = np.fft.ifft2(x_hat).real
    u2 = u - u1
    return u1, u2


def gradient_residual(w: np.ndarray, u1: np.ndarray) -> float:
    """max over pixels of ||w_i - D_i u1||_2: how far w is from a gradient field."""
    diff = w - forward_diff(u1)
    return float(np.hypot(diff[..., DX], diff[..., DY]).max())


def tikhonov_energy(u2: np.ndarray) -> float:
    """sum_i ||D_i u2||_2^2; zero exactly for constant images."""
    g = forward_diff(u2)
    return float((g * g).sum())
