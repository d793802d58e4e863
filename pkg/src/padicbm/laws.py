"""Closed-form laws of Brownian motion on Q_p^d.

The time-t law of the max-norm process with diffusion constant sigma and
diffusion exponent b has the radially symmetric density

    rho_d(t, x) = sum_r (exp(-sigma t p^{rb}) - exp(-sigma t p^{(r+1)b}))
                  * p^{dr} * [||x|| <= p^{-r}],

from which everything here follows: ball probabilities, the discrete radial
law of ||X_t||, conditional component probabilities given a sphere event, and
the first-exit survival functions for both the max-norm process and the
product of d independent one-dimensional processes.

Measures and the character integral are exact rationals; series evaluation is
IEEE double with certified truncation bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import _check_prime


class SeriesConvergenceError(RuntimeError):
    """A series failed to meet its tolerance within the term budget."""


@dataclass(frozen=True)
class ProcessParams:
    """Parameters (p, d, b, sigma) of one Brownian-motion law on Q_p^d."""

    prime: int
    dim: int
    b: float
    sigma: float

    def __post_init__(self):
        _check_prime(self.prime)
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if not self.b > 0:
            raise ValueError("diffusion exponent b must be positive")
        if not self.sigma > 0:
            raise ValueError("diffusion constant sigma must be positive")

    def pow_b(self, j: float) -> float:
        # p^{j b}; b need not be an integer
        return math.exp(j * self.b * math.log(self.prime))


@dataclass(frozen=True)
class SeriesTolerance:
    epsilon: float = 1e-15
    max_terms: int = 10000

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")


DEFAULT_TOL = SeriesTolerance()


def _pow(p: int, e: int) -> Fraction:
    return Fraction(p) ** e


def ball_measure(k: int, d: int, prime: int) -> Fraction:
    """Haar measure of a radius-p^k ball in Q_p^d: exactly p^{kd}."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return _pow(prime, k * d)


def sphere_measure(k: int, d: int, prime: int) -> Fraction:
    """Haar measure of the radius-p^k sphere: p^{kd} (1 - p^{-d})."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return _pow(prime, k * d) * (1 - Fraction(1, prime**d))


def character_ball_integral(m: int, n: int, d: int, prime: int) -> Fraction:
    """Double character integral over B_d(m) x B_d(n): exactly p^{d(n + min(-n, m))}."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return _pow(prime, d * (n + min(-n, m)))


def _exp_diff(params: ProcessParams, t: float, j: int) -> float:
    # exp(-sigma t p^{jb}) - exp(-sigma t p^{(j+1)b}), written to keep
    # ~full precision at very small t (direct subtraction cancels)
    u = params.sigma * t * params.pow_b(j)
    return math.exp(-u) * (-math.expm1(-u * (params.pow_b(1) - 1.0)))


def tail_sum(params: ProcessParams, level: int, t: float,
             dim: int | None = None, tol: SeriesTolerance = DEFAULT_TOL) -> float:
    """Weighted lower tail of the jump-scale series:

        sum_{j <= -level} (exp(-sigma t p^{jb}) - exp(-sigma t p^{(j+1)b})) p^{dim*j}

    ``dim`` defaults to ``params.dim``; the conditional law needs it at dim-1.
    Each term is bounded by sigma*t*p^{(j+1)b} p^{dim*j}, so the remainder
    beyond j0 is below sigma*t*p^b*p^{(b+dim)j0} / (1 - p^{-(b+dim)}); the sum
    stops once that certified bound drops under ``tol.epsilon``.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0.0:
        return 0.0
    dd = params.dim if dim is None else dim
    if dd < 1:
        raise ValueError("dim must be >= 1")
    p = params.prime
    log_p = math.log(p)
    rate = (params.b + dd) * log_p
    tail_coeff = params.sigma * t * params.pow_b(1) / (1.0 - math.exp(-rate))
    total = 0.0
    j = -level
    for _ in range(tol.max_terms):
        total += _exp_diff(params, t, j) * math.exp(dd * j * log_p)
        j -= 1
        # certified geometric remainder for everything at or below j
        if tail_coeff * math.exp(rate * j) < tol.epsilon:
            return total
    raise SeriesConvergenceError(
        f"tail sum did not converge within {tol.max_terms} terms")


def density_at_level(params: ProcessParams, t: float, level: int,
                     tol: SeriesTolerance = DEFAULT_TOL) -> float:
    """Density of X_t at any point of norm p^level (constant on spheres)."""
    if not t > 0:
        raise ValueError("t must be positive")
    return tail_sum(params, level, t, tol=tol)


def density_at_origin(params: ProcessParams, t: float,
                      tol: SeriesTolerance = DEFAULT_TOL) -> float:
    """Density of X_t at 0: the full two-sided jump-scale series."""
    if not t > 0:
        raise ValueError("t must be positive")
    p = params.prime
    # upper direction: stop once exp(-sigma t p^{rb}) itself is below epsilon;
    # the remaining differences telescope underneath that bound
    r = 0
    for _ in range(tol.max_terms):
        if math.exp(-params.sigma * t * params.pow_b(r)) < tol.epsilon:
            break
        r += 1
    else:
        raise SeriesConvergenceError("upper series did not converge")
    upper = 0.0
    for j in range(-r, r + 1):
        upper += _exp_diff(params, t, j) * float(p) ** (params.dim * j)
    return upper + tail_sum(params, r + 1, t, tol=tol)


def density(params: ProcessParams, t: float, x, tol: SeriesTolerance = DEFAULT_TOL) -> float:
    """Density rho_d(t, x) for a PadicVector x (or anything with max_norm_level)."""
    if x.dim != params.dim or x.prime != params.prime:
        raise ValueError("point does not match the process parameters")
    level = x.max_norm_level()
    if level is None:
        return density_at_origin(params, t, tol)
    return density_at_level(params, t, level, tol)


def ball_probability(params: ProcessParams, t: float, R: int,
                     tol: SeriesTolerance = DEFAULT_TOL) -> float:
    """P(||X_t|| <= p^R) = exp(-sigma t p^{(-R+1)b}) + p^{dR} * tail_sum(R)."""
    if not t > 0:
        raise ValueError("t must be positive")
    head = math.exp(-params.sigma * t * params.pow_b(-R + 1))
    value = head + float(params.prime) ** (params.dim * R) * tail_sum(params, R, t, tol=tol)
    return min(value, 1.0)


@dataclass(frozen=True)
class RadialLaw:
    """Discrete law of the norm level of X_t with explicit tail accounting.

    ``levels[i]`` carries mass ``masses[i]`` = P(||X_t|| = p^levels[i]);
    lower_tail and upper_tail hold the mass outside the window.
    """

    params: ProcessParams
    t: float
    levels: tuple[int, ...]
    masses: tuple[float, ...]
    lower_tail: float
    upper_tail: float

    def __post_init__(self):
        if len(self.levels) != len(self.masses):
            raise ValueError("levels and masses length mismatch")
        if any(m < 0 for m in self.masses):
            raise ValueError("negative mass")
        total = math.fsum(self.masses) + self.lower_tail + self.upper_tail
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"radial law masses sum to {total}, not 1")

    def mass_at(self, k: int) -> float:
        try:
            return self.masses[self.levels.index(k)]
        except ValueError:
            return 0.0

    def total_mass(self) -> float:
        return math.fsum(self.masses) + self.lower_tail + self.upper_tail


def radial_law(params: ProcessParams, t: float, k_min: int, k_max: int,
               tol: SeriesTolerance = DEFAULT_TOL) -> RadialLaw:
    """Radial law over levels [k_min, k_max] from ball-probability differences."""
    if k_min > k_max:
        raise ValueError("k_min must be <= k_max")
    balls = [ball_probability(params, t, k, tol) for k in range(k_min - 1, k_max + 1)]
    masses = tuple(max(balls[i + 1] - balls[i], 0.0) for i in range(len(balls) - 1))
    return RadialLaw(params, t,
                     levels=tuple(range(k_min, k_max + 1)),
                     masses=masses,
                     lower_tail=balls[0],
                     upper_tail=max(1.0 - balls[-1], 0.0))


def adaptive_radial_law(params: ProcessParams, t: float, tail_bound: float = 1e-12,
                        tol: SeriesTolerance = DEFAULT_TOL) -> RadialLaw:
    """Radial law windowed so both tails fall below ``tail_bound``."""
    k_max = 0
    while 1.0 - ball_probability(params, t, k_max, tol) >= tail_bound:
        k_max += 1
        if k_max > 4096:
            raise SeriesConvergenceError("upper tail never met the bound")
    k_min = k_max
    while ball_probability(params, t, k_min - 1, tol) >= tail_bound:
        k_min -= 1
        if k_min < -4096:
            raise SeriesConvergenceError("lower tail never met the bound")
    return radial_law(params, t, k_min, k_max, tol)


def conditional_profile(params: ProcessParams, R: int, t: float,
                        tol: SeriesTolerance = DEFAULT_TOL) -> float:
    """The r-free factor of the conditional component law:

        tail_sum(R, dim=d, t) / tail_sum(R, dim=d-1, t).

    Multiplying by p^r gives P(X_t^(i) in B(r, a) | the other components lie
    on the (d-1)-sphere of radius p^R), for any r <= R and any a in B(R).
    """
    if params.dim < 2:
        raise ValueError("conditional law needs d >= 2")
    if not t > 0:
        raise ValueError("t must be positive")
    num = tail_sum(params, R, t, dim=params.dim, tol=tol)
    den = tail_sum(params, R, t, dim=params.dim - 1, tol=tol)
    return num / den


def conditional_ball_probability(params: ProcessParams, r: int, R: int, t: float,
                                 tol: SeriesTolerance = DEFAULT_TOL) -> float:
    """P(X_t^(i) in B(r, a) | remaining components on S_{d-1}(R)), r <= R."""
    if r > R:
        raise ValueError("conditional law requires r <= R")
    return float(params.prime) ** r * conditional_profile(params, R, t, tol)


def conditional_uniformity_constant(params: ProcessParams) -> float:
    """The constant (p^{b+d} - p) / (p^{b+d+1} - p) in (0, 1)."""
    p = params.prime
    s = params.b + params.dim
    if float(params.b).is_integer():
        return float(Fraction(p ** (int(s)) - p, p ** (int(s) + 1) - p))
    ps = math.exp(s * math.log(p))
    return (ps - p) / (ps * p - p)


def exit_rate_factor(params: ProcessParams, dim: int | None = None) -> float:
    """Rate factor 1 - (p^b - 1)/(p^{b+d} - 1) of the exponential exit law."""
    dd = params.dim if dim is None else dim
    if dd < 1:
        raise ValueError("dim must be >= 1")
    p = params.prime
    if float(params.b).is_integer():
        bi = int(params.b)
        return float(1 - Fraction(p**bi - 1, p ** (bi + dd) - 1))
    return 1.0 - (math.exp(params.b * math.log(p)) - 1.0) / (
        math.exp((params.b + dd) * math.log(p)) - 1.0)


def survival_maxnorm(params: ProcessParams, T: float, R: int) -> float:
    """P(sup_{t <= T} ||X_t|| <= p^R) = exp(-sigma alpha_d T p^{-Rb})."""
    if not T > 0:
        raise ValueError("T must be positive")
    rate = params.sigma * exit_rate_factor(params) * params.pow_b(-R)
    return math.exp(-rate * T)


def survival_product(params: ProcessParams, T: float, R: int) -> float:
    """Survival of d independent one-dimensional motions: exp(-d sigma alpha_1 T p^{-Rb})."""
    if not T > 0:
        raise ValueError("T must be positive")
    rate = params.dim * params.sigma * exit_rate_factor(params, dim=1) * params.pow_b(-R)
    return math.exp(-rate * T)
