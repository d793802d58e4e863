"""Path simulation and Monte-Carlo estimators for exit and conditional laws.

Paths are built by summing exact-law increments on a time grid.  For survival
events the ultrametric inequality makes the event "every partial sum stays in
the ball" identical to "every increment stays in the ball", so the default
estimator samples increment norm levels only; the partial-sum estimator that
actually adds p-adic vectors is kept as an independent route to the same law.
"""

from __future__ import annotations

import math
import warnings
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .core import DEFAULT_DIGITS, PadicVector, zero_vector
from .laws import (DEFAULT_TOL, ProcessParams, SeriesTolerance,
                   conditional_ball_probability, survival_maxnorm,
                   survival_product)
from .sampling import (ZERO_LEVEL, RngStream, increment_law, sample_increment,
                       sample_radius_levels, sphere_coordinate_levels)

_CHUNK = 16384

PROCESS_KINDS = ("maxnorm", "product")


@dataclass(frozen=True)
class PathSample:
    """A sampled path on a finite grid; the path starts at the origin."""

    params: ProcessParams
    times: tuple[float, ...]
    positions: tuple[PadicVector, ...]

    def __post_init__(self):
        if len(self.times) != len(self.positions):
            raise ValueError("times and positions length mismatch")
        if self.positions[0].max_norm_level() is not None:
            raise ValueError("paths must start at the origin")

    def max_level(self) -> int:
        """Largest norm level attained on the grid (ZERO_LEVEL if never moved)."""
        levels = [p.max_norm_level() for p in self.positions]
        return max((k for k in levels if k is not None), default=ZERO_LEVEL)


@dataclass(frozen=True)
class ExitEstimate:
    survival_estimate: float
    standard_error: float
    n_samples: int
    closed_form: float
    grid_size: int


@dataclass(frozen=True)
class CondEstimate:
    r: int
    R: int
    estimate: float
    standard_error: float
    n_conditioned: int
    closed_form: float
    low_statistics: bool = False


def _check_grid(grid) -> tuple[float, ...]:
    grid = tuple(float(t) for t in grid)
    if any(t <= 0 for t in grid):
        raise ValueError("grid times must be positive")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly increasing")
    return grid


def simulate_maxnorm_path(params: ProcessParams, grid, rng: RngStream,
                          width: int = DEFAULT_DIGITS,
                          tol: SeriesTolerance = DEFAULT_TOL) -> PathSample:
    """Sum independent max-norm increments over the grid (t=0 is prepended)."""
    grid = _check_grid(grid)
    pos = zero_vector(params.prime, params.dim, width)
    positions = [pos]
    prev = 0.0
    for t in grid:
        pos = pos + sample_increment(params, t - prev, rng, width, tol)
        positions.append(pos)
        prev = t
    return PathSample(params, (0.0, *grid), tuple(positions))


def simulate_product_path(params: ProcessParams, grid, rng: RngStream,
                          width: int = DEFAULT_DIGITS,
                          tol: SeriesTolerance = DEFAULT_TOL) -> PathSample:
    """Advance each coordinate by an independent one-dimensional increment."""
    grid = _check_grid(grid)
    one_d = replace(params, dim=1)
    pos = zero_vector(params.prime, params.dim, width)
    positions = [pos]
    prev = 0.0
    for t in grid:
        inc = PadicVector(params.prime,
                          tuple(sample_increment(one_d, t - prev, rng, width, tol).coords[0]
                                for _ in range(params.dim)))
        pos = pos + inc
        positions.append(pos)
        prev = t
    return PathSample(params, (0.0, *grid), tuple(positions))


def _split(n: int, workers: int) -> list[int]:
    if workers < 1:
        raise ValueError("workers must be >= 1")
    base, extra = divmod(n, workers)
    return [base + (1 if w < extra else 0) for w in range(workers)]


def _run_workers(task, n_samples: int, seed: int, workers: int):
    """Run task(stream, count) per worker; merge results in stream-id order."""
    counts = _split(n_samples, workers)
    if workers == 1:
        return [task(RngStream(seed, 0), counts[0])]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(task, RngStream(seed, w), counts[w])
                   for w in range(workers)]
        return [f.result() for f in futures]


def _binomial_se(successes: int, n: int) -> float:
    est = successes / n
    return math.sqrt(est * (1.0 - est) / n)


def estimate_exit_survival(process_kind: str, params: ProcessParams, T: float,
                           R: int, n_grid: int, n_samples: int, seed: int,
                           workers: int = 1, method: str = "increments",
                           width: int = DEFAULT_DIGITS,
                           tol: SeriesTolerance = DEFAULT_TOL) -> ExitEstimate:
    """Monte-Carlo estimate of P(max over the grid of ||X_t|| <= p^R).

    ``method="increments"`` counts samples whose every increment stays at level
    <= R (the same event as the partial-sum maximum, by the ultrametric
    inequality); ``method="partial_sums"`` genuinely accumulates positions.
    """
    if process_kind not in PROCESS_KINDS:
        raise ValueError(f"process_kind must be one of {PROCESS_KINDS}")
    if not T > 0:
        raise ValueError("T must be positive")
    if n_grid < 1 or n_samples < 1:
        raise ValueError("n_grid and n_samples must be >= 1")
    dt = T / n_grid

    if method == "increments":
        if process_kind == "maxnorm":
            law = increment_law(params, dt, tol=tol)
            draws_per_sample = n_grid
        else:
            law = increment_law(replace(params, dim=1), dt, tol=tol)
            draws_per_sample = n_grid * params.dim

        def task(stream: RngStream, count: int) -> int:
            survived = 0
            done = 0
            while done < count:
                chunk = min(_CHUNK, count - done)
                levels = sample_radius_levels(law, stream, chunk * draws_per_sample)
                levels = levels.reshape(chunk, draws_per_sample)
                survived += int((levels.max(axis=1) <= R).sum())
                done += chunk
            return survived

    elif method == "partial_sums":
        simulate = (simulate_maxnorm_path if process_kind == "maxnorm"
                    else simulate_product_path)
        grid = [dt * (j + 1) for j in range(n_grid)]

        def task(stream: RngStream, count: int) -> int:
            survived = 0
            for _ in range(count):
                path = simulate(params, grid, stream, width, tol)
                if path.max_level() <= R:
                    survived += 1
            return survived

    else:
        raise ValueError(f"unknown method {method!r}")

    survived = sum(_run_workers(task, n_samples, seed, workers))
    closed = (survival_maxnorm(params, T, R) if process_kind == "maxnorm"
              else survival_product(params, T, R))
    return ExitEstimate(survival_estimate=survived / n_samples,
                        standard_error=_binomial_se(survived, n_samples),
                        n_samples=n_samples, closed_form=closed,
                        grid_size=n_grid)


def _component_level_chunks(params: ProcessParams, t: float, stream: RngStream,
                            count: int, width: int, tol: SeriesTolerance):
    """Yield (count, dim) arrays of coordinate norm levels of exact X_t draws."""
    law = increment_law(params, t, tol=tol)
    done = 0
    while done < count:
        chunk = min(_CHUNK, count - done)
        radii = sample_radius_levels(law, stream, chunk)
        yield sphere_coordinate_levels(radii, params.dim, params.prime,
                                       stream, width)
        done += chunk


def estimate_conditional(params: ProcessParams, t: float, r: int, R: int,
                         n_samples: int, seed: int, workers: int = 1,
                         width: int = DEFAULT_DIGITS,
                         tol: SeriesTolerance = DEFAULT_TOL) -> CondEstimate:
    """Estimate P(X_t^(1) in B(r) | remaining components on S_{d-1}(R)).

    Full vectors are drawn from the exact law; draws whose trailing d-1
    components miss the sphere are rejected.  Fewer than 100 accepted samples
    triggers a low-statistics warning.
    """
    if params.dim < 2:
        raise ValueError("conditional estimation needs d >= 2")
    if r > R:
        raise ValueError("conditional law requires r <= R")
    if not t > 0:
        raise ValueError("t must be positive")

    def task(stream: RngStream, count: int) -> tuple[int, int]:
        accepted = hits = 0
        for levels in _component_level_chunks(params, t, stream, count, width, tol):
            keep = levels[:, 1:].max(axis=1) == R
            accepted += int(keep.sum())
            hits += int((levels[keep, 0] <= r).sum())
        return accepted, hits

    results = _run_workers(task, n_samples, seed, workers)
    accepted = sum(a for a, _ in results)
    hits = sum(h for _, h in results)
    closed = conditional_ball_probability(params, r, R, t, tol)
    low = accepted < 100
    if low:
        warnings.warn(f"only {accepted} samples met the conditioning event; "
                      "standard error is unreliable", stacklevel=2)
    if accepted == 0:
        return CondEstimate(r, R, math.nan, math.nan, 0, closed, True)
    return CondEstimate(r, R, hits / accepted, _binomial_se(hits, accepted),
                        accepted, closed, low)


def marginal_radial_histogram(params: ProcessParams, t: float, n_samples: int,
                              seed: int, component: int = 1, workers: int = 1,
                              k_range: tuple[int, int] | None = None,
                              width: int = DEFAULT_DIGITS,
                              tol: SeriesTolerance = DEFAULT_TOL) -> Counter:
    """Histogram of the norm level of one component over exact X_t draws.

    Returns level -> count; draws that are zero to window depth appear under
    ZERO_LEVEL.  With ``k_range=(lo, hi)`` levels are clipped into
    [lo-1, hi+1], the edges meaning "below" and "above".
    """
    if not 1 <= component <= params.dim:
        raise ValueError(f"component must be in 1..{params.dim}")
    if not t > 0:
        raise ValueError("t must be positive")

    def task(stream: RngStream, count: int) -> Counter:
        counts: Counter = Counter()
        for levels in _component_level_chunks(params, t, stream, count, width, tol):
            values, freq = np.unique(levels[:, component - 1], return_counts=True)
            counts.update(dict(zip(values.tolist(), freq.tolist())))
        return counts

    total: Counter = Counter()
    for c in _run_workers(task, n_samples, seed, workers):
        total.update(c)
    if k_range is not None:
        lo, hi = k_range
        clipped: Counter = Counter()
        for level, n in total.items():
            clipped[min(max(level, lo - 1), hi + 1)] += n
        total = clipped
    return total
