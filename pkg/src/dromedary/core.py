"""Exact numeric foundation and problem-instance description.

Every position, fuel level and distance in this package is a
``fractions.Fraction``; no floating point is used anywhere.  Rationals
serialize as ``"num/den"`` (``"k"`` for integers) in all text output.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]


class DomainError(ValueError):
    """An argument lies outside the domain a formula or rule is valid on."""


def rational(num: int, den: int = 1) -> Fraction:
    """Build a normalized rational with positive denominator.

    Raises DomainError on a zero denominator.
    """
    if den == 0:
        raise DomainError("zero denominator")
    return Fraction(num, den)


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or string ("p/q" or exact decimal) to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise DomainError(f"not an exact rational: {value!r}")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", an integer, or a finite decimal string, exactly.

    Decimal strings convert as p/10^k; anything not exactly representable
    (floats in scientific notation, inf, nan) is rejected.
    """
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/")
            return rational(int(num), int(den))
        if "." in text:
            whole, frac_part = text.split(".")
            if not frac_part.isdigit():
                raise ValueError
            sign = -1 if whole.lstrip().startswith("-") else 1
            base = int(whole) if whole not in ("", "-", "+") else 0
            return Fraction(base) + sign * Fraction(int(frac_part), 10 ** len(frac_part))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"not an exact rational: {text!r}") from None


def format_rational(value: Fraction) -> str:
    """Canonical text form: "num/den", or just "num" for integers."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Variant(enum.Enum):
    """Trip objective."""

    ONE_WAY = "one-way"
    ROUND_TRIP = "round-trip"
    DELIVERY = "delivery"


class Accounting(enum.Enum):
    """How consumed fuel is counted at the finish."""

    COUNT_ALL = "count-all"
    CREDIT_FINAL_STOMACH = "credit-final-stomach"


@dataclass(frozen=True)
class ProblemSpec:
    """A problem instance: capacities, banana budget and objective.

    back_capacity: whole bananas the animal can carry.
    stomach_capacity: max stomach fuel; 2 for the flexible-diet problem,
        1 for the classic one-banana-at-a-time problem.
    bananas: total budget N > 0; fractional N starts with the fractional
        part already in the stomach.
    delivery_target: required (and only allowed) for the delivery variant.
    """

    back_capacity: int
    stomach_capacity: int
    bananas: Fraction
    variant: Variant = Variant.ONE_WAY
    accounting: Accounting = Accounting.COUNT_ALL
    delivery_target: Optional[Fraction] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "bananas", as_rational(self.bananas))
        if self.back_capacity < 1:
            raise DomainError("back capacity must be a positive integer")
        if self.stomach_capacity not in (1, 2):
            raise DomainError("stomach capacity must be 1 or 2")
        if self.bananas <= 0:
            raise DomainError("banana budget must be positive")
        if self.variant is Variant.DELIVERY:
            if self.stomach_capacity != 2 or self.back_capacity not in (1, 2):
                raise DomainError("delivery runs require stomach 2 and back capacity 1 or 2")
            if self.delivery_target is None or self.delivery_target < 0:
                raise DomainError("delivery runs need a nonnegative target position")
            object.__setattr__(self, "delivery_target", as_rational(self.delivery_target))
        elif self.delivery_target is not None:
            raise DomainError("delivery_target only applies to the delivery variant")
        if self.accounting is Accounting.CREDIT_FINAL_STOMACH and self.variant is not Variant.ROUND_TRIP:
            raise DomainError("stomach credit only applies to round trips")


@dataclass(frozen=True)
class WorldState:
    """Snapshot of the desert: camel position, stomach fuel, load, caches.

    ``caches`` maps position -> whole-banana count; entries are always >= 1
    (empty positions are removed).  Instances are immutable; transitions
    make copies.
    """

    camel_pos: Fraction
    stomach: Fraction
    load: int
    caches: Mapping[Fraction, int] = field(default_factory=dict)

    def cache_at(self, pos: Fraction) -> int:
        return self.caches.get(pos, 0)

    def cache_total(self) -> int:
        return sum(self.caches.values())


def initial_state(spec: ProblemSpec) -> WorldState:
    """Starting state: whole bananas cached at the border, fractional part
    of the budget already in the stomach, nothing on the camel's back."""
    whole = int(spec.bananas)  # floor; bananas > 0
    stomach = spec.bananas - whole
    caches = {Fraction(0): whole} if whole else {}
    return WorldState(camel_pos=Fraction(0), stomach=stomach, load=0, caches=caches)
