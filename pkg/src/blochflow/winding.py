"""Generalized winding numbers of planar fields along closed loops.

The winding number is the accumulated angle of a nonvanishing planar
field along a closed loop, divided by 2*pi.  It is computed as the sum of
wrapped angle increments between consecutive samples, closing the loop
from the last sample back to the first; increments must stay below pi/2
or the sampling is declared too coarse (the caller, or the adapters here,
then densify and retry).

Adapters:

* Hermitian: the planar pair is the band velocity (vx, vy).  For a small
  loop around a nondegenerate zero the winding equals the zero's Poincare
  index (+1 sink/source, -1 saddle); a loop enclosing nothing gives 0.
* Non-Hermitian: a complex band energy carries a complex velocity
  v = grad Re(E) + i grad Im(E).  Both parts are 2-vectors, so the planar
  pair is chosen per axis: (Re dE/dk_axis, Im dE/dk_axis), x by default.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import GaplessPoint, InsufficientSampling, ZeroOnLoop
from .field import EPS_GAP, velocity_and_gap
from .model import TWO_PI, KPoint, ModelParams, reduce_angle

MIN_SAMPLES = 16
DEFAULT_SAMPLES = 256
MAX_SAMPLES = 4096
MAX_INCREMENT = math.pi / 2
NORM_FLOOR = 1e-12
_FD_STEP = 1e-6


@dataclass(frozen=True)
class LoopSpec:
    """A closed sampling loop in the zone: a circle or an explicit polyline."""

    center: KPoint | None = None
    radius: float = 0.0
    samples: int = DEFAULT_SAMPLES
    points: tuple | None = None

    @classmethod
    def circle(cls, center: KPoint, radius: float, samples: int = DEFAULT_SAMPLES) -> "LoopSpec":
        if radius <= 0.0:
            raise ValueError(f"loop radius must be positive, got {radius}")
        if samples < MIN_SAMPLES:
            raise ValueError(f"loop needs at least {MIN_SAMPLES} samples, got {samples}")
        return cls(center=center, radius=radius, samples=samples)

    @classmethod
    def polyline(cls, points) -> "LoopSpec":
        pts = tuple(points)
        if len(pts) < MIN_SAMPLES + 1:
            raise ValueError(f"polyline loop needs at least {MIN_SAMPLES + 1} points")
        first = pts[0].canonical()
        last = pts[-1].canonical()
        if math.hypot(
            reduce_angle(first.kx - last.kx), reduce_angle(first.ky - last.ky)
        ) > 1e-9:
            raise ValueError("polyline loop must be closed (first and last point coincide)")
        return cls(points=pts, samples=len(pts) - 1)

    def sample_points(self):
        """Loop sample coordinates as arrays (kx, ky), closure left implicit."""
        if self.points is not None:
            kx = np.array([q.kx for q in self.points[:-1]])
            ky = np.array([q.ky for q in self.points[:-1]])
            return kx, ky
        t = TWO_PI * np.arange(self.samples) / self.samples
        return self.center.kx + self.radius * np.cos(t), self.center.ky + self.radius * np.sin(t)

    def densified(self, factor: int) -> "LoopSpec | None":
        if self.points is not None:
            return None
        return LoopSpec(center=self.center, radius=self.radius, samples=self.samples * factor)


@dataclass(frozen=True)
class WindingResult:
    w: int
    total_angle: float
    min_field_norm: float
    samples: int


def winding_planar(field_samples) -> WindingResult:
    """Winding of a sampled planar field around its implicit closed loop.

    ``field_samples`` is a sequence of (a, b) pairs or an (N, 2) array.
    Raises ZeroOnLoop if any sample norm drops to the floor and
    InsufficientSampling if any wrapped increment reaches pi/2.
    """
    arr = np.asarray(field_samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 3:
        raise ValueError("expected at least 3 samples of shape (N, 2)")
    a, b = arr[:, 0], arr[:, 1]
    norms = np.hypot(a, b)
    min_norm = float(np.min(norms))
    if min_norm <= NORM_FLOOR:
        raise ZeroOnLoop(f"field norm {min_norm:.3e} on the loop is at or below {NORM_FLOOR:.1e}")
    angles = np.arctan2(b, a)
    incr = reduce_angle(np.diff(angles, append=angles[:1]))
    worst = float(np.max(np.abs(incr)))
    if worst >= MAX_INCREMENT:
        raise InsufficientSampling(
            f"angle increment {worst:.3f} rad >= pi/2; sample the loop more densely"
        )
    total = float(np.sum(incr))
    return WindingResult(int(round(total / TWO_PI)), total, min_norm, arr.shape[0])


def _with_densification(loop: LoopSpec, evaluate) -> WindingResult:
    """Run winding_planar on ``evaluate(loop)``, doubling circle sampling as needed."""
    current = loop
    while True:
        try:
            return winding_planar(evaluate(current))
        except InsufficientSampling:
            denser = current.densified(2)
            if denser is None or denser.samples > MAX_SAMPLES:
                raise
            current = denser


def winding_hermitian(loop: LoopSpec, p: ModelParams) -> WindingResult:
    """Winding of the band velocity along the loop.

    The loop must avoid zero modes (ZeroOnLoop otherwise) and band
    touchings (GaplessPoint).
    """

    def evaluate(spec: LoopSpec):
        kx, ky = spec.sample_points()
        vx, vy, gap = velocity_and_gap(kx, ky, p)
        g = float(np.min(gap))
        if g <= EPS_GAP:
            raise GaplessPoint(f"loop touches a gapless point (min |h| = {g:.3e})")
        return np.stack([vx, vy], axis=1)

    return _with_densification(loop, evaluate)


def winding_nonhermitian(
    loop: LoopSpec,
    band: Callable[[float, float], complex],
    component: str = "x",
    fd_step: float = _FD_STEP,
) -> WindingResult:
    """Winding of (Re dE/dk_axis, Im dE/dk_axis) for a complex band energy.

    ``band`` maps (kx, ky) to a complex energy; the derivative along the
    selected axis is taken by central differences.  With a purely real
    band the imaginary part vanishes identically and the angle is only
    defined while the real part keeps its sign; loops crossing its zero
    set raise ZeroOnLoop.
    """
    if component not in ("x", "y"):
        raise ValueError(f"component must be 'x' or 'y', got {component!r}")

    def evaluate(spec: LoopSpec):
        kx, ky = spec.sample_points()
        out = np.empty((kx.size, 2))
        for i in range(kx.size):
            if component == "x":
                d = band(kx[i] + fd_step, ky[i]) - band(kx[i] - fd_step, ky[i])
            else:
                d = band(kx[i], ky[i] + fd_step) - band(kx[i], ky[i] - fd_step)
            d = complex(d) / (2.0 * fd_step)
            out[i, 0] = d.real
            out[i, 1] = d.imag
        return out

    return _with_densification(loop, evaluate)


def winding_json(res: WindingResult) -> str:
    return json.dumps(
        {
            "w": res.w,
            "total_angle": res.total_angle,
            "min_field_norm": res.min_field_norm,
            "samples_used": res.samples,
        },
        indent=2,
    )
