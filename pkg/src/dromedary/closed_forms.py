"""Closed-form distance formulas: bounds, exact optima, and jeep values.

All functions are pure, exact, and raise DomainError outside the range a
formula is valid on (no silent clamping or extrapolation).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .core import DomainError, Rational, as_rational

_F = Fraction


def pl_pow(back: int, x: Rational) -> Fraction:
    """Piecewise-linear interpolation of (1 + 2/back)**x at integer knots.

    Exact for all rational x, including negative x (the knot floor(x) may
    be negative).  Strictly increasing in x.
    """
    if back < 1:
        raise DomainError("back capacity must be a positive integer")
    x = as_rational(x)
    knot = x.numerator // x.denominator
    base = 1 + _F(2, back)
    return base**knot * (1 + _F(2, back) * (x - knot))


def pl_pow_inv(back: int, y: Rational) -> Fraction:
    """Inverse of pl_pow: the unique x with pl_pow(back, x) == y.

    Defined for y > 0 only (pl_pow is positive everywhere).
    """
    if back < 1:
        raise DomainError("back capacity must be a positive integer")
    y = as_rational(y)
    if y <= 0:
        raise DomainError("pl_pow is positive; no preimage for y <= 0")
    base = 1 + _F(2, back)
    knot = 0
    scale = _F(1)
    if y >= 1:
        while scale * base <= y:
            scale *= base
            knot += 1
    else:
        while scale > y:
            scale /= base
            knot -= 1
    # scale = base**knot and scale <= y < scale*base
    return knot + (y / scale - 1) * _F(back, 2)


@dataclass(frozen=True)
class BoundsResult:
    """A lower/upper bound pair, with the exact value when it is known."""

    lower: Fraction
    upper: Fraction
    exact: Optional[Fraction] = None

    def __post_init__(self) -> None:
        if self.lower > self.upper:
            raise ValueError("lower bound exceeds upper bound")
        if self.exact is not None and not (self.lower == self.exact == self.upper):
            raise ValueError("exact value must coincide with both bounds")


def one_way_upper(back: int, bananas: Rational) -> Fraction:
    """One-way upper bound for the stomach-2 camel, valid for N >= B + 1."""
    n = as_rational(bananas)
    if back < 1:
        raise DomainError("back capacity must be a positive integer")
    if n < back + 1:
        raise DomainError(f"one-way upper bound needs N >= B + 1 = {back + 1}")
    return pl_pow_inv(back, (2 * n - 2 - back) / back) + back + 1


def round_trip_upper(back: int, bananas: Rational) -> Fraction:
    """Round-trip upper bound for the stomach-2 camel, valid for N >= B."""
    n = as_rational(bananas)
    if back < 1:
        raise DomainError("back capacity must be a positive integer")
    if n < back:
        raise DomainError(f"round-trip upper bound needs N >= B = {back}")
    return pl_pow_inv(back, n / back) + _F(back, 2)


def b2_round_trip_jeep_upper(bananas: Rational) -> Fraction:
    """Refined B=2 round-trip upper bound from jeep-style reasoning.

    Piecewise on [4, 8]; both pieces agree (7/3) at N = 6.
    """
    n = as_rational(bananas)
    if not (4 <= n <= 8):
        raise DomainError("jeep-reasoning bound is stated for 4 <= N <= 8")
    if n <= 6:
        return (n - 4) / 6 + 2
    return (n - 5) / 3 + 2


def b1_one_way_exact(bananas: Rational) -> Fraction:
    """Exact optimal one-way distance for B=1, stomach 2; N >= 2."""
    n = as_rational(bananas)
    if n < 2:
        raise DomainError("B=1 one-way optimum is stated for N >= 2")
    return pl_pow_inv(1, 2 * n - 3) + 2


def b1_round_trip_exact(bananas: Rational) -> Fraction:
    """Exact optimal round-trip distance for B=1, stomach 2; N >= 1."""
    n = as_rational(bananas)
    if n < 1:
        raise DomainError("B=1 round-trip optimum is stated for N >= 1")
    return pl_pow_inv(1, n) + _F(1, 2)


def _b2_level(bananas: Fraction) -> Tuple[int, Fraction]:
    """Doubling level for the B=2 round-trip recursion: the k with
    2**k < N <= 2**(k+1) (N > 4)."""
    k = 2
    while bananas > 2 ** (k + 1):
        k += 1
    return k, _F(2**k)


def b2_round_trip_branch(bananas: Rational) -> Tuple[int, Fraction, str, Fraction]:
    """Constructive B=2 round-trip decomposition: (k, 2**k, branch, leg).

    branch "base" means 2 <= N <= 4 (distance N/2, leg unused).  Otherwise
    the camel hauls 2**k bananas to position ``leg`` and recurses:
      - "drained": stomach empty after the haul, gain leg/2 (N <= 2**k + 2);
      - "saved":   one banana kept in the stomach, gain leg (N >= 2**k + 2,
        the better branch on the overlap, ties included).
    """
    n = as_rational(bananas)
    if n < 2:
        raise DomainError("B=2 round-trip results are stated for N >= 2")
    if n <= 4:
        return 1, _F(2), "base", _F(0)
    k, pow2 = _b2_level(n)
    if n >= pow2 + 2:
        return k, pow2, "saved", (n - 1 - pow2) / (pow2 - 1)
    return k, pow2, "drained", (n - pow2) / (pow2 - 1)


def b2_round_trip_lower(bananas: Rational) -> Fraction:
    """Best constructive B=2 round-trip distance (recursive halving)."""
    n = as_rational(bananas)
    k, pow2, branch, leg = b2_round_trip_branch(n)
    if branch == "base":
        return n / 2
    gain = leg if branch == "saved" else leg / 2
    return k + gain


def b2_round_trip_bounds(bananas: Rational) -> BoundsResult:
    """B=2 round-trip bounds; exact when 2 <= N <= 8 or N is a power of 2.

    Guarantees upper - lower < 1/(N-1).
    """
    n = as_rational(bananas)
    if n < 2:
        raise DomainError("B=2 round-trip results are stated for N >= 2")
    upper = pl_pow_inv(2, n)
    lower = b2_round_trip_lower(n)
    exact: Optional[Fraction] = None
    is_pow2 = n.denominator == 1 and n.numerator & (n.numerator - 1) == 0
    if n <= 8 or is_pow2:
        exact = lower
        if n <= 4 or is_pow2:
            # attainable cases where the potential bound itself is tight
            assert lower == upper
            upper = lower
        else:
            upper = min(upper, b2_round_trip_jeep_upper(n))
            assert upper == lower
    return BoundsResult(lower=lower, upper=upper, exact=exact)


def original_upper(bananas: Rational) -> Fraction:
    """Upper bound for the classic one-banana-stomach problem; N >= 3."""
    n = as_rational(bananas)
    if n < 3:
        raise DomainError("classic-problem upper bound needs N >= 3")
    return pl_pow_inv(2, _F(2, 3) * (n - 1)) / 2 + _F(13, 6)


def original_exact(k: int, f: Rational) -> Fraction:
    """Exact optimum for the classic problem with N = 2**k + f bananas,
    k >= 1 and 0 <= f <= 2."""
    f = as_rational(f)
    if k < 1:
        raise DomainError("need k >= 1")
    if not (0 <= f <= 2):
        raise DomainError("need 0 <= f <= 2")
    return _F(k, 2) + _F(11, 6) + (f - 1) / (3 * 2 ** (k - 1))


def jeep_one_way(fuel_cap: Rational, fuel: Rational) -> Fraction:
    """Classic jeep one-way optimum: tank size F, total fuel N."""
    cap = as_rational(fuel_cap)
    n = as_rational(fuel)
    if cap <= 0 or n <= 0:
        raise DomainError("tank size and fuel must be positive")
    trips = int(n / cap)
    total = sum((cap / (2 * i - 1) for i in range(1, trips + 1)), _F(0))
    return total + (n - cap * trips) / (2 * trips + 1)


def jeep_round_trip(fuel_cap: Rational, fuel: Rational) -> Fraction:
    """Classic jeep round-trip optimum: tank size F, total fuel N."""
    cap = as_rational(fuel_cap)
    n = as_rational(fuel)
    if cap <= 0 or n <= 0:
        raise DomainError("tank size and fuel must be positive")
    trips = int(n / cap)
    total = sum((cap / (2 * i) for i in range(1, trips + 1)), _F(0))
    return total + (n - cap * trips) / (2 * trips + 2)
