"""Frequency-domain diagonalization of the blur and difference operators.

Under periodic boundaries both the convolution K and the forward differences
Dx, Dy are circulant, so the 2-D DFT diagonalizes them.  The cache built here
holds their per-frequency eigenvalues and powers the closed-form u-subproblem
solve shared by both solvers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import KernelTooLarge, SingularSystem
from .grid_ops import DX, DY

SINGULAR_FLOOR = 1e-14


def stencil_transfer(taps: np.ndarray, n: int) -> np.ndarray:
    """Transfer function of a centre-anchored convolution stencil.

    Embeds the stencil into an n x n circulant: the tap at offset (a, b)
    from the anchor (the (h//2, w//2) entry) lands at index (a mod n,
    b mod n), accumulating where offsets wrap onto each other.  The 2-D
    DFT of that embedding diagonalizes the periodic convolution.
    """
    taps = np.asarray(taps, dtype=np.float64)
    h, w = taps.shape
    rows = (np.arange(h) - h // 2) % n
    cols = (np.arange(w) - w // 2) % n
    pad = np.zeros((n, n), dtype=np.float64)
    np.add.at(pad, (rows[:, None], cols[None, :]), taps)
    return np.fft.fft2(pad)


# Forward differences as true-convolution stencils: dx(i,j) = u(i,j+1) - u(i,j)
# puts tap +1 at column offset -1 and -1 at the anchor.
_DX_STENCIL = np.array([[1.0, -1.0, 0.0]])
_DY_STENCIL = _DX_STENCIL.T


@dataclass(frozen=True)
class SpectralCache:
    """Eigenvalues of K, Dx, Dy on an n x n periodic grid.

    Valid only for the (n, kernel) pair it was built from.  Arrays are never
    written after construction; the cache may be shared across threads.
    """

    n: int
    eig_k: np.ndarray
    eig_dx: np.ndarray
    eig_dy: np.ndarray
    eig_dtd: np.ndarray


def build_cache(kernel: np.ndarray, n: int) -> SpectralCache:
    """Diagonalize the kernel and the difference stencils on an n x n grid."""
    kernel = np.asarray(kernel, dtype=np.float64)
    if kernel.shape[0] > n or kernel.shape[1] > n:
        raise KernelTooLarge(f"kernel {kernel.shape} exceeds grid side {n}")
    eig_k = stencil_transfer(kernel, n)
    eig_dx = stencil_transfer(_DX_STENCIL, n)
    eig_dy = stencil_transfer(_DY_STENCIL, n)
    eig_dtd = np.abs(eig_dx) ** 2 + np.abs(eig_dy) ** 2
    return SpectralCache(n=n, eig_k=eig_k, eig_dx=eig_dx, eig_dy=eig_dy, eig_dtd=eig_dtd)


def apply_kernel(cache: SpectralCache, u: np.ndarray) -> np.ndarray:
    """Apply the blur K through the cache (spectral multiplication)."""
    return np.fft.ifft2(cache.eig_k * np.fft.fft2(u)).real


def solve_u(
    f: np.ndarray,
    w: np.ndarray,
    lam: np.ndarray | None,
    mu: float,
    beta: float,
    cache: SpectralCache,
) -> np.ndarray:
    """Exact minimizer of the quadratic u-subproblem.

    Solves (mu K^T K + beta D^T D) u = mu K^T f + D^T (beta w - lam) by
    per-frequency division.  ``lam`` may be None for the penalty solver,
    which carries no multipliers.

    Raises SingularSystem if the per-frequency denominator falls below
    1e-14 anywhere (possible only for zero-flux kernels).
    """
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu}")
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    denom = mu * np.abs(cache.eig_k) ** 2 + beta * cache.eig_dtd
    if denom.min() < SINGULAR_FLOOR:
        raise SingularSystem(
            f"frequency-domain denominator reaches {denom.min():.3e}; "
            "the kernel has (near-)zero flux"
        )
    if lam is None:
        rx = beta * w[..., DX]
        ry = beta * w[..., DY]
    else:
        rx = beta * w[..., DX] - lam[..., DX]
        ry = beta * w[..., DY] - lam[..., DY]
    rhs_hat = (
        mu * np.conj(cache.eig_k) * np.fft.fft2(f)
        + np.conj(cache.eig_dx) * np.fft.fft2(rx)
        + np.conj(cache.eig_dy) * np.fft.fft2(ry)
    )
    return np.fft.ifft2(rhs_hat / denom).real
