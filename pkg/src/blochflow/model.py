"""Quantum torus two-band model: Bloch vector, energy bands, tangent frame.

The Hamiltonian is H(k) = h(k) . sigma for the real three-component map

    h(k) = (rho(ky) cos kx + c,  rho(ky) sin kx,  r sin ky),
    rho(ky) = sqrt(r^2 sin^2 ky + (R + r cos ky)^2),

whose image is a closed genus-1 surface: the distance of h(k) from the
vertical axis through (c, 0, 0) oscillates between R - r and R + r, so
the surface is an embedded (slightly sheared) torus shifted by c >= 0
along the first axis.  The bands are E = +-|h(k)|.

Everything is smooth and 2*pi-periodic in kx and ky.  Operations taking a
KPoint reduce it to the fundamental domain [-pi, pi)^2 before evaluating;
the ``*_components`` helpers broadcast over numpy arrays and are the
building blocks for the grid computations elsewhere in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import TextIO

import numpy as np

TWO_PI = 2.0 * math.pi


def reduce_angle(x):
    """Reduce an angle (scalar or array) into the half-open interval [-pi, pi)."""
    return (x + math.pi) % TWO_PI - math.pi


@dataclass(frozen=True)
class ModelParams:
    """Torus parameters: major radius R, tube radius r, axis shift c.

    Requires R > r > 0 so the image surface is embedded (never touches its
    own axis) and c >= 0.  c = 0 is a legal surface but makes the first
    velocity component vanish identically; the zero-mode census rejects it.
    """

    R: float
    r: float
    c: float = 0.0

    def __post_init__(self):
        if not self.r > 0.0:
            raise ValueError(f"tube radius r must be positive, got r={self.r}")
        if not self.R > self.r:
            raise ValueError(
                f"major radius must exceed tube radius (R > r), got R={self.R}, r={self.r}"
            )
        if self.c < 0.0:
            raise ValueError(f"axis shift c must be nonnegative, got c={self.c}")


@dataclass(frozen=True)
class KPoint:
    """A crystal-momentum point, kx and ky in radians."""

    kx: float
    ky: float

    def canonical(self) -> "KPoint":
        """Equivalent representative in the fundamental domain [-pi, pi)^2."""
        return KPoint(float(reduce_angle(self.kx)), float(reduce_angle(self.ky)))


class Band(Enum):
    UPPER = 1
    LOWER = -1

    @property
    def sign(self) -> int:
        return self.value


@dataclass(frozen=True)
class HVector:
    """Real Bloch vector (hx, hy, hz); its norm is the upper band energy."""

    hx: float
    hy: float
    hz: float

    @property
    def norm(self) -> float:
        return math.hypot(self.hx, self.hy, self.hz)

    def as_array(self) -> np.ndarray:
        return np.array([self.hx, self.hy, self.hz])


@dataclass(frozen=True, eq=False)
class Frame:
    """Tangent 3-vectors of the image surface along the kx and ky directions.

    For this model the two vectors are orthogonal at every k and their
    cross product never vanishes, so they form a regular frame.
    """

    d_kx: np.ndarray
    d_ky: np.ndarray


def axis_distance(ky, p: ModelParams):
    """Distance of h(k) from the shifted symmetry axis; depends on ky only.

    Equals sqrt(r^2 sin^2 ky + (R + r cos ky)^2) and is bounded below by
    R - r > 0 for valid parameters.
    """
    s = np.sin(ky)
    co = np.cos(ky)
    return np.sqrt((p.r * s) ** 2 + (p.R + p.r * co) ** 2)


def axis_distance_derivative(ky, p: ModelParams):
    """d/dky of axis_distance: -r R sin(ky) / axis_distance(ky)."""
    return -p.r * p.R * np.sin(ky) / axis_distance(ky, p)


def bloch_components(kx, ky, p: ModelParams):
    """Components (hx, hy, hz) of the Bloch vector; broadcasts over arrays."""
    rho = axis_distance(ky, p)
    return rho * np.cos(kx) + p.c, rho * np.sin(kx), p.r * np.sin(ky)


def bloch_vector(k: KPoint, p: ModelParams) -> HVector:
    """Bloch vector at a single k-point (reduced to the fundamental domain)."""
    k = k.canonical()
    hx, hy, hz = bloch_components(k.kx, k.ky, p)
    return HVector(float(hx), float(hy), float(hz))


def band_energy(k: KPoint, p: ModelParams, band: Band = Band.UPPER) -> float:
    """Signed band energy: band.sign * |h(k)|.

    The two bands mirror each other exactly (particle-hole symmetry).
    """
    return band.sign * bloch_vector(k, p).norm


def frame_components(kx, ky, p: ModelParams):
    """Tangent-frame components, broadcast over arrays.

    Returns (ax, ay, az, bx, by, bz) with (ax, ay, az) = dh/dkx and
    (bx, by, bz) = dh/dky.
    """
    rho = axis_distance(ky, p)
    drho = axis_distance_derivative(ky, p)
    sx = np.sin(kx)
    cx = np.cos(kx)
    ax = -rho * sx
    ay = rho * cx
    az = np.zeros_like(ax)
    bx = drho * cx
    by = drho * sx
    bz = p.r * np.cos(ky) * np.ones_like(ax)
    return ax, ay, az, bx, by, bz


def tangent_frame(k: KPoint, p: ModelParams) -> Frame:
    k = k.canonical()
    ax, ay, az, bx, by, bz = frame_components(k.kx, k.ky, p)
    return Frame(
        d_kx=np.array([float(ax), float(ay), float(az)]),
        d_ky=np.array([float(bx), float(by), float(bz)]),
    )


def frame_regularity(k: KPoint, p: ModelParams) -> float:
    """Norm of d_kx x d_ky; values near zero mean the frame degenerates.

    Callers decide their own threshold; for valid torus parameters the
    minimum over the zone is strictly positive.
    """
    f = tangent_frame(k, p)
    return float(np.linalg.norm(np.cross(f.d_kx, f.d_ky)))


def surface_sample(p: ModelParams, n: int) -> list:
    """Sample h and the velocity on an n x n uniform grid over [-pi, pi)^2.

    Returns a list of (KPoint, HVector, Velocity) rows ordered with ky as
    the slow index and kx as the fast one.  At a k where the bands touch
    the velocity entries are NaN (valid gapped parameters never hit this).
    """
    if n < 2:
        raise ValueError(f"grid size must be at least 2, got n={n}")
    from .field import Velocity, velocity_and_gap

    ticks = -math.pi + TWO_PI * np.arange(n) / n
    ky_grid, kx_grid = np.meshgrid(ticks, ticks, indexing="ij")
    hx, hy, hz = bloch_components(kx_grid, ky_grid, p)
    vx, vy, _ = velocity_and_gap(kx_grid, ky_grid, p)
    rows = []
    for i in range(n):
        for j in range(n):
            rows.append(
                (
                    KPoint(float(kx_grid[i, j]), float(ky_grid[i, j])),
                    HVector(float(hx[i, j]), float(hy[i, j]), float(hz[i, j])),
                    Velocity(float(vx[i, j]), float(vy[i, j])),
                )
            )
    return rows


SURFACE_CSV_HEADER = "kx,ky,hx,hy,hz,vx,vy"


def write_surface_csv(p: ModelParams, n: int, fh: TextIO) -> None:
    """Write the surface_sample grid as CSV with 17-significant-digit floats."""
    fh.write(SURFACE_CSV_HEADER + "\n")
    for k, h, v in surface_sample(p, n):
        row = (k.kx, k.ky, h.hx, h.hy, h.hz, v.vx, v.vy)
        fh.write(",".join(format(x, ".17g") for x in row) + "\n")
