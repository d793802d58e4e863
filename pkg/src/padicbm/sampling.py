"""Exact sampling of the time-t law: discrete radius, Haar-uniform direction.

The law of X_t is radially symmetric, so a draw factors into a norm level
(inverse CDF on the discrete radial law) and a direction that is Haar-uniform
on the sphere at that level.  A uniform draw from a ball has geometrically
distributed leading-digit depth, so all norm-level statistics can be sampled
without materializing digits; the object-level samplers below also produce
full digit windows for path arithmetic.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .core import DEFAULT_DIGITS, PadicScalar, PadicVector, zero, zero_vector
from .laws import (DEFAULT_TOL, ProcessParams, RadialLaw, SeriesTolerance,
                   adaptive_radial_law, radial_law)

# sentinel markers for inverse-CDF draws that fall outside the level window
TAIL_LOW = -(2**31)
TAIL_HIGH = 2**31

# level assigned to a draw that is zero to window depth (or resolved TAIL_LOW);
# deep enough that it is inside every ball under test
ZERO_LEVEL = -(2**30)


@dataclass
class RngStream:
    """Counter-based random stream; (seed, stream_id) fully determine outputs.

    Distinct stream_ids give statistically independent streams, so Monte-Carlo
    work can be partitioned deterministically across workers.  A stream is
    single-owner: do not share one instance between threads.
    """

    seed: int
    stream_id: int = 0
    gen: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        key = np.random.SeedSequence((self.seed, self.stream_id))
        self.gen = np.random.Generator(np.random.Philox(key))


def _boundaries(law: RadialLaw) -> np.ndarray:
    # cumulative right edges: below boundaries[0] is TAIL_LOW, at or above the
    # last is TAIL_HIGH; zero-mass levels collapse to an empty interval
    return law.lower_tail + np.concatenate(([0.0], np.cumsum(law.masses)))


def sample_radius(law: RadialLaw, rng: RngStream) -> int:
    """One norm level drawn from the radial law; may return TAIL_LOW/TAIL_HIGH."""
    idx = int(np.searchsorted(_boundaries(law), rng.gen.random(), side="right"))
    if idx == 0:
        return TAIL_LOW
    if idx > len(law.levels):
        return TAIL_HIGH
    return law.levels[idx - 1]


def sample_radius_levels(law: RadialLaw, rng: RngStream, size: int) -> np.ndarray:
    """Vector of norm levels; TAIL_LOW resolves to ZERO_LEVEL, TAIL_HIGH

    triggers a window extension and redraw of the affected entries.
    """
    edges = _boundaries(law)
    levels = np.asarray(law.levels, dtype=np.int64)
    idx = np.searchsorted(edges, rng.gen.random(size), side="right")
    out = np.empty(size, dtype=np.int64)
    low = idx == 0
    high = idx > len(levels)
    mid = ~(low | high)
    out[low] = ZERO_LEVEL
    out[mid] = levels[idx[mid] - 1]
    n_high = int(high.sum())
    if n_high:
        wider = radial_law(law.params, law.t, law.levels[0],
                           law.levels[-1] + 16)
        out[high] = sample_radius_levels(wider, rng, n_high)
    return out


def leading_offsets(rng: RngStream, size, prime: int,
                    width: int = DEFAULT_DIGITS) -> np.ndarray:
    """Depth of the leading digit of uniform ball draws: P(offset = m) = p^-m (1 - 1/p).

    Offsets at or beyond ``width`` mean the draw is zero to window depth.
    """
    return rng.gen.geometric(1.0 - 1.0 / prime, size=size) - 1


def sphere_coordinate_levels(radius_levels: np.ndarray, dim: int, prime: int,
                             rng: RngStream,
                             width: int = DEFAULT_DIGITS) -> np.ndarray:
    """Coordinate norm levels of vectors Haar-uniform on the sphere per row.

    Each coordinate of a uniform sphere draw is uniform on the ball with the
    row's radius, conditioned on at least one coordinate reaching it; this is
    realized by rejection on the leading-offset rows.
    """
    n = len(radius_levels)
    offsets = leading_offsets(rng, (n, dim), prime, width)
    bad = offsets.min(axis=1) > 0
    while bad.any():
        offsets[bad] = leading_offsets(rng, (int(bad.sum()), dim), prime, width)
        bad = offsets.min(axis=1) > 0
    levels = radius_levels[:, None] - offsets
    levels[offsets >= width] = ZERO_LEVEL
    levels[radius_levels == ZERO_LEVEL] = ZERO_LEVEL
    return levels


def uniform_ball_scalar(k: int, prime: int, rng: RngStream,
                        width: int = DEFAULT_DIGITS) -> PadicScalar:
    """Haar-uniform draw from the ball of radius p^k in Q_p.

    All digits at position -k and deeper are i.i.d. uniform; the result keeps
    ``width`` digits below its leading position.  Draws that are zero through
    the window come back as the zero scalar.
    """
    offset = int(leading_offsets(rng, (), prime, width))
    if offset >= width:
        return zero(prime, width)
    lead = int(rng.gen.integers(1, prime))
    rest = rng.gen.integers(0, prime, size=width - 1)
    return PadicScalar(prime, -k + offset, (lead, *map(int, rest)))


def uniform_sphere_vector(k: int, dim: int, prime: int, rng: RngStream,
                          width: int = DEFAULT_DIGITS) -> PadicVector:
    """Haar-uniform draw from the sphere of radius p^k in Q_p^dim, by rejection."""
    while True:
        coords = tuple(uniform_ball_scalar(k, prime, rng, width)
                       for _ in range(dim))
        if any(c.norm_level() == k for c in coords):
            return PadicVector(prime, coords)


@functools.lru_cache(maxsize=256)
def increment_law(params: ProcessParams, dt: float, tail_bound: float = 1e-12,
                  tol: SeriesTolerance = DEFAULT_TOL) -> RadialLaw:
    """Radial law of one increment, windowed so both tails are negligible."""
    return adaptive_radial_law(params, dt, tail_bound, tol)


def sample_increment(params: ProcessParams, dt: float, rng: RngStream,
                     width: int = DEFAULT_DIGITS,
                     tol: SeriesTolerance = DEFAULT_TOL) -> PadicVector:
    """One exact draw of X_dt: radius by inverse CDF, direction uniform on the sphere.

    A TAIL_LOW radius resolves to the zero vector (the process has not moved at
    window resolution); TAIL_HIGH extends the window and redraws.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    law = increment_law(params, dt, tol=tol)
    while True:
        k = sample_radius(law, rng)
        if k == TAIL_LOW:
            return zero_vector(params.prime, params.dim, width)
        if k == TAIL_HIGH:
            law = radial_law(params, dt, law.levels[0], law.levels[-1] + 16, tol)
            continue
        return uniform_sphere_vector(k, params.dim, params.prime, rng, width)
