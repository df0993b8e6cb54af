"""Periodic-boundary difference and convolution operators on square images.

Conventions used throughout the package:

- an image is an (n, n) float64 array, n >= 2, row-major, indexed (row, col);
- a gradient field is an (n, n, 2) float64 array where [..., 0] holds the
  horizontal (column) forward difference dx and [..., 1] the vertical (row)
  forward difference dy;
- a kernel is an (m, m) float64 array with odd m, anchored at its centre tap;
- ``convolve_periodic`` is true convolution (kernel flipped) with circular
  wrap-around.

All functions are pure and never mutate their inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import BadSpec, KernelTooLarge

DX = 0
DY = 1


def validate_image(u: np.ndarray) -> np.ndarray:
    """Check the square-image invariants and return ``u`` as float64.

    Raises ValueError on non-square shapes, n < 2, or non-finite entries.
    """
    u = np.asarray(u, dtype=np.float64)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"image must be square 2-D, got shape {u.shape}")
    if u.shape[0] < 2:
        raise ValueError("image side must be at least 2 pixels")
    if not np.isfinite(u).all():
        raise ValueError("image contains NaN or Inf")
    return u


def forward_diff(u: np.ndarray) -> np.ndarray:
    """Forward differences with periodic wrap.

    dx(i, j) = u(i, (j+1) mod n) - u(i, j)
    dy(i, j) = u((i+1) mod n, j) - u(i, j)

    Returns an (n, n, 2) gradient field; [..., 0] is dx, [..., 1] is dy.
    """
    g = np.empty(u.shape + (2,), dtype=np.float64)
    g[..., DX] = np.roll(u, -1, axis=1) - u
    g[..., DY] = np.roll(u, -1, axis=0) - u
    return g


def divergence_adjoint(g: np.ndarray) -> np.ndarray:
    """Exact adjoint D^T of ``forward_diff``.

    Satisfies <forward_diff(u), g> == <u, divergence_adjoint(g)> for all
    u, g (this is the negative discrete divergence of the field).
    """
    gx = g[..., DX]
    gy = g[..., DY]
    return (np.roll(gx, 1, axis=1) - gx) + (np.roll(gy, 1, axis=0) - gy)


def convolve_periodic(u: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Circular 2-D convolution of ``u`` with an odd-sized centred kernel.

    out(i, j) = sum_{a,b} kernel[c+a, c+b] * u[(i-a) mod n, (j-b) mod n]
    with c = (m-1)//2, i.e. true convolution, anchor at the centre tap.
    """
    kernel = np.asarray(kernel, dtype=np.float64)
    m = kernel.shape[0]
    if kernel.ndim != 2 or kernel.shape[0] != kernel.shape[1]:
        raise BadSpec(f"kernel must be square, got shape {kernel.shape}")
    if m % 2 == 0:
        raise BadSpec(f"kernel side must be odd, got {m}")
    if m > u.shape[0]:
        raise KernelTooLarge(f"kernel side {m} exceeds image side {u.shape[0]}")
    return ndimage.convolve(u, kernel, mode="wrap")


@dataclass(frozen=True)
class KernelSpec:
    """Description of a blurring kernel: average(m), gaussian(m, sigma), delta."""

    kind: str
    size: int = 1
    sigma: float = 0.0

    @classmethod
    def average(cls, size: int) -> "KernelSpec":
        return cls("average", size)

    @classmethod
    def gaussian(cls, size: int, sigma: float) -> "KernelSpec":
        return cls("gaussian", size, sigma)

    @classmethod
    def delta(cls) -> "KernelSpec":
        return cls("delta", 1)

    @classmethod
    def from_string(cls, text: str) -> "KernelSpec":
        """Parse 'delta', 'average:M' or 'gaussian:M:SIGMA' (CLI syntax)."""
        parts = text.strip().split(":")
        kind = parts[0]
        try:
            if kind == "delta" and len(parts) == 1:
                return cls.delta()
            if kind == "average" and len(parts) == 2:
                return cls.average(int(parts[1]))
            if kind == "gaussian" and len(parts) == 3:
                return cls.gaussian(int(parts[1]), float(parts[2]))
        except ValueError as exc:
            raise BadSpec(f"cannot parse kernel spec {text!r}: {exc}") from exc
        raise BadSpec(f"unknown kernel spec {text!r}")

    def __str__(self) -> str:
        if self.kind == "delta":
            return "delta"
        if self.kind == "average":
            return f"average:{self.size}"
        return f"gaussian:{self.size}:{self.sigma:g}"


def make_kernel(spec: KernelSpec | str) -> np.ndarray:
    """Realize a KernelSpec as an (m, m) tap array.

    average(m): all taps 1/m^2; gaussian(m, s): sampled isotropic Gaussian
    renormalized to sum 1; delta: single unit tap.  Flux-1 by construction.
    """
    if isinstance(spec, str):
        spec = KernelSpec.from_string(spec)
    if spec.kind == "delta":
        return np.ones((1, 1), dtype=np.float64)
    m = spec.size
    if m % 2 == 0 or m < 1:
        raise BadSpec(f"kernel size must be odd and positive, got {m}")
    if spec.kind == "average":
        return np.full((m, m), 1.0 / (m * m), dtype=np.float64)
    if spec.kind == "gaussian":
        s = spec.sigma
        if not (s > 0) or not math.isfinite(s):
            raise BadSpec(f"gaussian width must be positive, got {s}")
        c = (m - 1) // 2
        offs = np.arange(m, dtype=np.float64) - c
        r2 = offs[:, None] ** 2 + offs[None, :] ** 2
        taps = np.exp(-r2 / (2.0 * s * s))
        return taps / taps.sum()
    raise BadSpec(f"unknown kernel kind {spec.kind!r}")
