"""Finite-precision elements of Q_p and Q_p^d: digit windows, norms, balls.

A nonzero p-adic number x is stored as its leading exponent (the valuation v,
so |x| = p^-v) together with a window of base-p digits a(v), a(v+1), ... read
upward from the leading position.  Digits beyond the window are zero, so every
scalar is an exact rational of the form p^v * u.  Zero is a distinguished
state rather than a digit pattern.

Only the additive structure and the norm are implemented; the jump-process
simulation needs nothing else.
"""

from __future__ import annotations

from dataclasses import dataclass, field

DEFAULT_DIGITS = 48
MAX_LEVEL = 64
MIN_LEVEL = -64


class PrecisionError(ValueError):
    """Raised when a value cannot be represented inside the level clamp."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _check_prime(p: int) -> None:
    if not _is_prime(p):
        raise ValueError(f"prime must be a prime number, got {p}")


@dataclass(frozen=True)
class PadicScalar:
    """One element of Q_p at fixed digit precision.

    ``digits[0]`` is the digit at position ``valuation`` and is nonzero unless
    ``is_zero``.  ``truncated`` records that digits beyond the window were
    dropped by arithmetic; it does not participate in equality.
    """

    prime: int
    valuation: int
    digits: tuple[int, ...]
    is_zero: bool = False
    truncated: bool = field(default=False, compare=False)

    def __post_init__(self):
        _check_prime(self.prime)
        if any(d < 0 or d >= self.prime for d in self.digits):
            raise ValueError("digits must lie in [0, p-1]")
        if self.is_zero:
            if any(self.digits):
                raise ValueError("zero must carry all-zero digits")
        else:
            if not self.digits or self.digits[0] == 0:
                raise ValueError("leading digit of a nonzero scalar must be nonzero")
            if not MIN_LEVEL <= self.valuation <= MAX_LEVEL:
                raise PrecisionError(f"valuation {self.valuation} outside clamp")

    @property
    def width(self) -> int:
        return len(self.digits)

    def norm_level(self) -> int | None:
        """Integer k with |x| = p^k, or None for zero."""
        return None if self.is_zero else -self.valuation

    def norm(self) -> float:
        return 0.0 if self.is_zero else float(self.prime) ** (-self.valuation)

    def significand(self) -> int:
        """The digit window read as an integer, so x = p^valuation * significand."""
        n = 0
        for d in reversed(self.digits):
            n = n * self.prime + d
        return n

    def __add__(self, other: "PadicScalar") -> "PadicScalar":
        return add(self, other)

    def __neg__(self) -> "PadicScalar":
        return negate(self)

    def __sub__(self, other: "PadicScalar") -> "PadicScalar":
        return add(self, negate(other))

    def __str__(self) -> str:
        return render_scalar(self)


def zero(prime: int, width: int = DEFAULT_DIGITS) -> PadicScalar:
    return PadicScalar(prime, 0, (0,) * width, is_zero=True)


def _strip(n: int, p: int) -> tuple[int, int]:
    # n != 0; returns (p-adic valuation of n, unit part)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def _expand(n: int, p: int, width: int) -> tuple[int, ...]:
    digits = []
    for _ in range(width):
        n, r = divmod(n, p)
        digits.append(r)
    return tuple(digits)


def from_significand(prime: int, valuation: int, significand: int,
                     width: int = DEFAULT_DIGITS, truncated: bool = False) -> PadicScalar:
    """Build the scalar p^valuation * significand, normalized and truncated to width."""
    if significand == 0:
        return PadicScalar(prime, 0, (0,) * width, is_zero=True, truncated=truncated)
    shift, unit = _strip(significand, prime)
    v = valuation + shift
    if v > MAX_LEVEL:
        # norm below the representable range: flagged underflow to zero
        return PadicScalar(prime, 0, (0,) * width, is_zero=True, truncated=True)
    lost = unit >= prime ** width
    return PadicScalar(prime, v, _expand(unit, prime, width),
                       truncated=truncated or lost)


def from_int(n: int, prime: int, width: int = DEFAULT_DIGITS) -> PadicScalar:
    """Embed an integer into Q_p (negative values get the wraparound window)."""
    if n == 0:
        return zero(prime, width)
    v, unit = _strip(abs(n), prime)
    if n < 0:
        unit = prime ** width - unit  # additive inverse modulo the window
        return from_significand(prime, v, unit, width, truncated=True)
    return from_significand(prime, v, unit, width)


def add(a: PadicScalar, b: PadicScalar) -> PadicScalar:
    """Digitwise base-p addition with carry, truncated to the common window."""
    if a.prime != b.prime:
        raise ValueError(f"prime mismatch: {a.prime} != {b.prime}")
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    p = a.prime
    v = min(a.valuation, b.valuation)
    top = min(a.valuation + a.width, b.valuation + b.width)
    total = (a.significand() * p ** (a.valuation - v)
             + b.significand() * p ** (b.valuation - v))
    keep = p ** (top - v)
    kept = total % keep
    dropped = (total != kept) or a.truncated or b.truncated
    if kept == 0:
        # all digits inside the common window cancelled
        return PadicScalar(p, 0, (0,) * max(a.width, b.width),
                           is_zero=True, truncated=dropped)
    shift, unit = _strip(kept, p)
    return from_significand(p, v + shift, unit, width=top - (v + shift),
                            truncated=dropped)


def negate(a: PadicScalar) -> PadicScalar:
    """Additive inverse on the digit window (the true inverse has digits beyond it)."""
    if a.is_zero:
        return a
    p = a.prime
    inv = p ** a.width - a.significand()
    return from_significand(p, a.valuation, inv, width=a.width, truncated=True)


@dataclass(frozen=True)
class PadicVector:
    """Element of Q_p^d with the max-norm; coordinates share prime and window."""

    prime: int
    coords: tuple[PadicScalar, ...]

    def __post_init__(self):
        if not self.coords:
            raise ValueError("vector needs at least one coordinate")
        if any(c.prime != self.prime for c in self.coords):
            raise ValueError("coordinate prime mismatch")
        widths = {c.width for c in self.coords}
        if len(widths) != 1:
            raise ValueError("coordinates must share the digit-window length")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def max_norm_level(self) -> int | None:
        """Integer k with ||x|| = p^k, or None for the zero vector."""
        levels = [c.norm_level() for c in self.coords if not c.is_zero]
        return max(levels) if levels else None

    def max_norm(self) -> float:
        k = self.max_norm_level()
        return 0.0 if k is None else float(self.prime) ** k

    def __add__(self, other: "PadicVector") -> "PadicVector":
        if self.prime != other.prime or self.dim != other.dim:
            raise ValueError("vector shape mismatch")
        return PadicVector(self.prime,
                           tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "PadicVector":
        return PadicVector(self.prime, tuple(-c for c in self.coords))

    def __sub__(self, other: "PadicVector") -> "PadicVector":
        return self + (-other)


def zero_vector(prime: int, dim: int, width: int = DEFAULT_DIGITS) -> PadicVector:
    return PadicVector(prime, tuple(zero(prime, width) for _ in range(dim)))


@dataclass(frozen=True)
class Ball:
    """Points y with ||y - center|| <= p^level (center None means the origin)."""

    level: int
    dim: int = 1
    center: PadicVector | None = None

    def contains(self, x: PadicVector) -> bool:
        y = x if self.center is None else x - self.center
        k = y.max_norm_level()
        return k is None or k <= self.level


@dataclass(frozen=True)
class Sphere:
    """Points y with ||y - center|| = p^level exactly."""

    level: int
    dim: int = 1
    center: PadicVector | None = None

    def contains(self, x: PadicVector) -> bool:
        y = x if self.center is None else x - self.center
        return y.max_norm_level() == self.level


def in_ball(x: PadicVector, k: int) -> bool:
    """||x|| <= p^k, by exact level comparison."""
    level = x.max_norm_level()
    return level is None or level <= k


def in_sphere(x: PadicVector, k: int) -> bool:
    """||x|| = p^k exactly."""
    return x.max_norm_level() == k


def render_scalar(s: PadicScalar) -> str:
    """Render as ``p^v * (d0 d1 d2 ...)``; zero renders as ``p^0 * (0)``."""
    if s.is_zero:
        return f"{s.prime}^0 * (0)"
    body = " ".join(str(d) for d in s.digits)
    return f"{s.prime}^{s.valuation} * ({body})"


def parse_scalar(text: str) -> PadicScalar:
    """Parse the format produced by :func:`render_scalar`."""
    try:
        head, body = text.split("*")
        p_str, v_str = head.strip().split("^")
        p, v = int(p_str), int(v_str)
        digits = tuple(int(tok) for tok in body.strip().strip("()").split())
    except (ValueError, AttributeError) as exc:
        raise ValueError(f"malformed p-adic scalar {text!r}") from exc
    if all(d == 0 for d in digits):
        return zero(p, max(len(digits), 1))
    if digits[0] == 0:
        shift = next(i for i, d in enumerate(digits) if d != 0)
        v += shift
        digits = digits[shift:]
    return PadicScalar(p, v, digits)
