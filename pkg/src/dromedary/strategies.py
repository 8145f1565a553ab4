"""Constructive itinerary generators.

Every generator returns a fully concrete event list that the simulator
accepts and that reaches the matching closed-form distance exactly.  The
common building block is a haul: move a set of banana packs one leg
forward, fueled entirely by whole bananas eaten at the leg's base (plus
whatever fraction is already in the stomach).  The fuel budget of a haul
is exact, which forces every mile to do useful work; the planner tracks a
mirror of the world state and distributes the slack of each meal over
round trips, staged packs, and short staging launches so that the final
meal closes the books exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .closed_forms import (
    b1_one_way_exact,
    b1_round_trip_exact,
    b2_round_trip_branch,
    b2_round_trip_lower,
    original_exact,
    pl_pow_inv,
)
from .core import Accounting, DomainError, ProblemSpec, Rational, Variant, as_rational
from .desert_sim import Drop, Eat, Event, Move, Pickup

_F = Fraction


@dataclass(frozen=True)
class StrategyOutcome:
    """An itinerary together with the distance it is claimed to achieve."""

    itinerary: Tuple[Event, ...]
    claimed_distance: Fraction
    spec: ProblemSpec


class _Cursor:
    """Event emitter with a running mirror of position and stomach level.

    The mirror only guards the generator's own bookkeeping; the simulator
    remains the authority on validity.
    """

    def __init__(self, stomach: Fraction, cap: int):
        self.events: List[Event] = []
        self.sigma = _F(stomach)
        self.pos = _F(0)
        self.cap = cap

    def move(self, delta: Fraction) -> None:
        delta = _F(delta)
        if delta == 0:
            return
        assert self.sigma >= abs(delta), "planner emitted an underfueled move"
        assert self.pos + delta >= 0, "planner emitted a move past the border"
        self.events.append(Move(delta))
        self.sigma -= abs(delta)
        self.pos += delta

    def eat(self) -> None:
        assert self.sigma <= self.cap - 1, "planner emitted an eat on a full stomach"
        self.events.append(Eat())
        self.sigma += 1

    def pickup(self, count: int) -> None:
        self.events.append(Pickup(count))

    def drop(self, count: int) -> None:
        self.events.append(Drop(count))


def _haul(cur: _Cursor, pack: int, units: int, x: Fraction, s0: Fraction,
          pre_staged: Sequence[Fraction] = ()) -> None:
    """Move ``units`` packs of ``pack`` bananas from the camel's position to
    x miles ahead, eating whole bananas only at the base.

    Entry: stomach == s0, the packs plus all fuel cached at the base.
    Exit: camel x miles ahead with stomach exactly 1 and every pack there.
    ``pre_staged`` lists packs already parked part-way (paid for upstream).
    """
    assert cur.sigma == s0
    x = _F(x)
    if x == 0:
        top_up = 1 - s0
        assert top_up.denominator == 1 and top_up >= 0
        for _ in range(int(top_up)):
            cur.eat()
        return
    assert 0 < x <= 1
    staged = sorted(_F(u) for u in pre_staged if _F(u) < x)
    delivered = sum(1 for u in pre_staged if _F(u) == x)
    cache = units - len(staged) - delivered
    walk_total = (2 * units - 1) * x - 2 * sum(staged) - 2 * delivered * x
    whole_fuel = walk_total + 1 - s0
    assert whole_fuel.denominator == 1 and whole_fuel >= 0
    eats_total = int(whole_fuel)
    first_eats = eats_total % 2
    meals: List[Tuple[int, Fraction]] = []
    if s0 + first_eats > 0:
        meals.append((first_eats, s0 + first_eats))
    meals.extend((2, _F(2)) for _ in range((eats_total - first_eats) // 2))
    assert meals and sum(fuel for _, fuel in meals) == walk_total + 1

    def plain_trip() -> None:
        cur.pickup(pack)
        cur.move(x)
        cur.drop(pack)
        cur.move(-x)

    for index, (eats, fuel) in enumerate(meals):
        last = index == len(meals) - 1
        for _ in range(eats):
            cur.eat()
        assert cur.sigma == fuel
        walk = fuel - (1 if last else 0)
        if last:
            trips = cache - 1
            assert trips >= 0, "haul planner ran out of launches"
            slack = (walk - (2 * trips + 1) * x) / 2
            need = sum((x - u for u in staged), _F(0))
            assert slack == need, "haul planner books do not balance"
            for _ in range(trips):
                plain_trip()
                delivered += 1
            cur.pickup(pack)
            cur.move(x)
            cur.drop(pack)
            delivered += 1
            cache = 0
            at = x
            for u in sorted(staged, reverse=True):
                cur.move(u - at)
                cur.pickup(pack)
                cur.move(x - u)
                cur.drop(pack)
                delivered += 1
                at = x
            staged = []
            assert cur.sigma == 1 and delivered == units
        else:
            trips = min(int(walk // (2 * x)), cache - 1)
            slack = walk / 2 - trips * x
            zigzags: List[Tuple[Fraction, Fraction]] = []
            if trips >= 1:
                for u in staged:
                    if slack == 0:
                        break
                    step = min(slack, x - u)
                    zigzags.append((u, step))
                    slack -= step
            launches: List[Fraction] = []
            reserve = cache - 1 - trips
            while slack > 0:
                assert reserve >= 1, "haul planner exhausted its launch reserve"
                step = min(slack, x)
                launches.append(step)
                reserve -= 1
                slack -= step
            if trips >= 1:
                cur.pickup(pack)
                cur.move(x)
                cur.drop(pack)
                delivered += 1
                at = x
                for u, step in sorted(zigzags, reverse=True):
                    cur.move(u - at)
                    cur.pickup(pack)
                    cur.move(step)
                    cur.drop(pack)
                    at = u + step
                cur.move(-at)
                cache -= 1
                for _ in range(trips - 1):
                    plain_trip()
                    delivered += 1
                    cache -= 1
                for u, step in zigzags:
                    staged.remove(u)
                    if u + step < x:
                        staged.append(u + step)
                    else:
                        delivered += 1
                staged.sort()
            for step in launches:
                cur.pickup(pack)
                cur.move(step)
                cur.drop(pack)
                cur.move(-step)
                cache -= 1
                if step < x:
                    staged.append(step)
                else:
                    delivered += 1
            staged.sort()
            assert cur.sigma == 0


def _b1_legs(bananas: Fraction) -> List[Tuple[int, Fraction]]:
    """Leg decomposition of a B=1 one-way run: (packs hauled, leg length)
    from the outermost leg inward, ending at the two-banana dash."""
    legs: List[Tuple[int, Fraction]] = []
    n = bananas
    while n > 2:
        k = 0
        while n > _F(3 ** (k + 1) + 3, 2):
            k += 1
        units = (3**k + 1) // 2
        legs.append((units, (n - units - 1) / (2 * units - 1)))
        n = _F(units + 1)
    return legs


def _b1_one_way_core(cur: _Cursor, bananas: Fraction, s0: Fraction,
                     pre_staged: Sequence[Fraction] = (),
                     bend_home_to: Optional[Fraction] = None) -> Fraction:
    """Emit a B=1 one-way run (budget ``bananas`` >= 2) from the cursor's
    position; returns the farthest point reached.

    With ``bend_home_to`` set, the final two-mile dash is bent so the camel
    lands on that (absolute) position with an empty stomach.
    """
    for units, x in _b1_legs(bananas):
        _haul(cur, 1, units, x, s0, pre_staged)
        pre_staged = ()
        s0 = _F(1)
    if s0 == 0:
        cur.eat()
        cur.eat()
    else:
        assert s0 == 1
        cur.eat()
    if bend_home_to is None:
        cur.move(2)
        return cur.pos
    turn = (2 + bend_home_to - cur.pos) / 2
    assert turn >= 0
    farthest = cur.pos + turn
    cur.move(turn)
    cur.move(-(farthest - bend_home_to))
    return farthest


def b1_one_way_strategy(bananas: Rational) -> StrategyOutcome:
    """Optimal one-way itinerary for B=1, stomach 2; N >= 2."""
    n = as_rational(bananas)
    if n < 2:
        raise DomainError("B=1 one-way strategy needs N >= 2")
    spec = ProblemSpec(1, 2, n, Variant.ONE_WAY)
    frac = n - int(n)
    cur = _Cursor(frac, cap=2)
    farthest = _b1_one_way_core(cur, n, frac)
    claimed = b1_one_way_exact(n)
    assert farthest == claimed
    return StrategyOutcome(tuple(cur.events), claimed, spec)


def _deliver(cur: _Cursor, target: int, boundary: int) -> None:
    """Park one banana ``target`` miles ahead and come back.

    Entry and exit stomach are both ``boundary`` (0 or 1); the run consumes
    3**target bananas cached at the start, one of which is the delivery.
    """
    if target == 0:
        return
    _haul(cur, 1, 3 ** (target - 1), _F(1), _F(boundary))
    _deliver(cur, target - 1, 1)
    cur.move(-1)
    if boundary == 1:
        cur.eat()


def b1_delivery_strategy(target: int) -> StrategyOutcome:
    """Deliver one banana ``target`` miles out and return, on 3**target bananas."""
    if target < 0:
        raise DomainError("delivery target must be a nonnegative integer")
    spec = ProblemSpec(1, 2, _F(3**target), Variant.DELIVERY, delivery_target=_F(target))
    cur = _Cursor(_F(0), cap=2)
    _deliver(cur, target, 0)
    return StrategyOutcome(tuple(cur.events), _F(target), spec)


def b1_round_trip_strategy(bananas: Rational) -> StrategyOutcome:
    """Optimal round-trip itinerary for B=1, stomach 2; N >= 1.

    Parks one banana on each of the first few mile marks, runs a bent
    one-way trip, and eats its way home along the parked bananas.
    """
    n = as_rational(bananas)
    if n < 1:
        raise DomainError("B=1 round-trip strategy needs N >= 1")
    spec = ProblemSpec(1, 2, n, Variant.ROUND_TRIP)
    frac = n - int(n)
    cur = _Cursor(frac, cap=2)
    claimed = b1_round_trip_exact(n)
    if n < 2:
        cur.eat()
        cur.move(n / 2)
        cur.move(-n / 2)
        assert cur.sigma == 0
        return StrategyOutcome(tuple(cur.events), claimed, spec)
    marks = 0
    while n >= 2 * 3 ** (marks + 1):
        marks += 1
    main_budget = n - _F(3 ** (marks + 1) - 3, 2)
    assert main_budget >= 2
    pre: List[Fraction] = []
    s0 = frac
    if frac > 0 and marks >= 1:
        # burn the fractional stomach content staging bananas for the main
        # run, so every delivery starts on an empty stomach
        first_leg = _b1_legs(main_budget)[0][1]
        remaining = frac
        while remaining > 0:
            step = min(remaining / 2, first_leg)
            cur.pickup(1)
            cur.move(step)
            cur.drop(1)
            cur.move(-step)
            pre.append(step)
            remaining -= 2 * step
        s0 = _F(0)
    for mark in range(1, marks + 1):
        _deliver(cur, mark, 0)
    farthest = _b1_one_way_core(cur, main_budget, s0, pre, bend_home_to=_F(marks))
    for _ in range(marks):
        cur.eat()
        cur.move(-1)
    assert cur.pos == 0 and cur.sigma == 0
    assert farthest == claimed
    return StrategyOutcome(tuple(cur.events), claimed, spec)


def _b2_round_trip_fresh(cur: _Cursor, bananas: Fraction, hold_back: Fraction, s0: Fraction) -> None:
    """B=2 round trip from a cold start: out and home again, turning
    ``hold_back / 2`` short of the unconstrained turnaround so the camel
    arrives back with ``hold_back`` fuel still in its stomach."""
    level, pow2, branch, leg = b2_round_trip_branch(bananas)
    if branch == "base":
        whole = int(bananas)
        first = 2 if s0 == 0 else 1
        for _ in range(min(first, whole)):
            cur.eat()
        carry = whole - min(first, whole)
        assert 0 <= carry <= 2
        if carry:
            cur.pickup(carry)
        start = cur.pos
        turn = (bananas - hold_back) / 2
        while carry > 0 and (cur.pos - start) + (cur.sigma - 1) < turn:
            cur.move(cur.sigma - 1)
            cur.eat()
            carry -= 1
        cur.move(turn - (cur.pos - start))
        while carry > 0:
            cur.move(-(cur.sigma - 1))
            cur.eat()
            carry -= 1
        cur.move(-(cur.pos - start))
        assert cur.sigma == hold_back
        return
    if branch == "saved":
        _haul(cur, 2, pow2 // 2, leg, s0)
        _g_round_trip_joined(cur, pow2, hold_back)
        cur.eat()
        cur.move(-leg)
        return
    # branch == "drained": eat the surplus up front, walk the packs forward
    # on stomach fuel alone, then recurse from the staging point
    eats = int(bananas) - pow2.numerator
    for _ in range(eats):
        cur.eat()
    assert cur.sigma == bananas - pow2
    trips = pow2.numerator // 2
    for i in range(trips):
        cur.pickup(2)
        cur.move(leg)
        cur.drop(2)
        if i < trips - 1:
            cur.move(-leg)
    assert cur.sigma == 0
    _b2_round_trip_fresh(cur, pow2, hold_back + leg, _F(0))
    cur.move(-leg)


def _g_round_trip_joined(cur: _Cursor, count: int, hold_back: Fraction) -> None:
    """B=2 round trip with ``count`` (a power of two) bananas cached at the
    camel's position and one unit already in the stomach.  Returns with
    stomach >= hold_back, leaving one banana unconsumed for the caller."""
    if count == 2:
        cur.eat()
        turn = (2 - hold_back) / 2
        cur.move(turn)
        cur.move(-turn)
        return
    _haul(cur, 2, count // 4, _F(1), _F(1))
    _g_round_trip_joined(cur, count // 2, hold_back)
    cur.eat()
    cur.move(-1)


def b2_round_trip_strategy(bananas: Rational) -> StrategyOutcome:
    """Best known round-trip itinerary for B=2, stomach 2; N >= 2."""
    n = as_rational(bananas)
    if n < 2:
        raise DomainError("B=2 round-trip strategy needs N >= 2")
    spec = ProblemSpec(2, 2, n, Variant.ROUND_TRIP)
    frac = n - int(n)
    cur = _Cursor(frac, cap=2)
    _b2_round_trip_fresh(cur, n, _F(0), frac)
    assert cur.pos == 0
    claimed = b2_round_trip_lower(n)
    return StrategyOutcome(tuple(cur.events), claimed, spec)


def b2_stomach_credit_strategy(bananas: Rational) -> StrategyOutcome:
    """B=2 round trip that meets the potential upper bound exactly when the
    fuel left in the stomach at the finish is refunded.

    The camel physically starts with N + 2 - N/2**k bananas and comes home
    with the surplus still aboard, so N bananas are counted.
    """
    n = as_rational(bananas)
    if n < 2:
        raise DomainError("stomach-credit strategy needs N >= 2")
    level = 1
    while n >= 2 ** (level + 1):
        level += 1
    pow2 = _F(2**level)
    leg = (n - pow2) / pow2
    physical = n + 2 - n / pow2
    spec = ProblemSpec(2, 2, physical, Variant.ROUND_TRIP, Accounting.CREDIT_FINAL_STOMACH)
    frac = physical - int(physical)
    cur = _Cursor(frac, cap=2)
    _haul(cur, 2, pow2.numerator // 2, leg, frac)
    _g_round_trip_joined(cur, pow2.numerator, _F(0))
    cur.eat()
    cur.move(-leg)
    assert cur.pos == 0 and cur.sigma == 2 - n / pow2
    claimed = pl_pow_inv(2, n)
    return StrategyOutcome(tuple(cur.events), claimed, spec)


def _classic_two_mile_dash(cur: _Cursor) -> None:
    # two bananas at the camel's feet buy exactly two more miles
    cur.eat()
    cur.pickup(1)
    cur.move(1)
    cur.eat()
    cur.move(1)


def _classic_fetch(cur: _Cursor, forward: Fraction, back: Fraction) -> None:
    # carry a banana `forward`, then fetch the one parked `back` behind
    cur.pickup(1)
    cur.move(forward)
    cur.drop(1)
    if back > 0:
        cur.move(-back)
        cur.pickup(1)
        cur.move(back)
        cur.drop(1)


def original_one_way_strategy(k: int, f: Rational) -> StrategyOutcome:
    """Optimal one-way itinerary for the classic one-banana-stomach problem
    with N = 2**k + f bananas, k >= 1 and 0 <= f <= 2."""
    f = as_rational(f)
    if k < 1:
        raise DomainError("need k >= 1")
    if not (0 <= f <= 2):
        raise DomainError("need 0 <= f <= 2")
    n = 2**k + f
    spec = ProblemSpec(1, 1, n, Variant.ONE_WAY)
    frac = n - int(n)
    cur = _Cursor(frac, cap=1)

    if k == 1:
        if f <= 1:
            if f == 1:
                cur.eat()
            reach = f / 3
            if reach > 0:
                cur.pickup(1)
                cur.move(reach)
                cur.drop(1)
                cur.move(-reach)
                cur.pickup(1)
                cur.move(reach)
                cur.drop(1)
            _classic_two_mile_dash(cur)
        else:
            park = (f - 1) / 2
            if frac == 0:
                cur.eat()
            cur.pickup(1)
            cur.move(park)
            cur.drop(1)
            cur.move(-park)
            cur.eat()
            reach = f / 3
            _classic_fetch(cur, reach, reach - park)
            _classic_two_mile_dash(cur)
        claimed = original_exact(k, f)
        assert cur.pos == claimed
        return StrategyOutcome(tuple(cur.events), claimed, spec)

    # k >= 2: park two bananas at y = f/4 and return empty, then walk the
    # halving recursion inward
    y = f / 4
    if f == 0:
        pass
    elif f <= 1:
        if f == 1:
            cur.eat()
        for _ in range(2):
            cur.pickup(1)
            cur.move(y)
            cur.drop(1)
            cur.move(-y)
    else:
        park = (f - 1) / 2
        if frac == 0:
            cur.eat()
        cur.pickup(1)
        cur.move(park)
        cur.drop(1)
        cur.move(-park)
        cur.eat()
        _classic_fetch(cur, y, y - park)
        cur.move(-y)

    level = k
    pair_pos = y  # position of the parked pair, relative to the current base
    while level >= 3:
        shuttles = 2 ** (level - 1) - 2
        for _ in range(shuttles):
            cur.eat()
            cur.pickup(1)
            cur.move(_F(1, 2))
            cur.drop(1)
            cur.move(-_F(1, 2))
        mid = pair_pos / 2 + _F(1, 2)
        cur.eat()
        cur.pickup(1)
        cur.move(mid)
        cur.drop(1)
        cur.move(-(mid - pair_pos))
        cur.eat()
        cur.pickup(1)
        cur.move(mid + _F(1, 8) - pair_pos)
        cur.drop(1)
        cur.move(-_F(1, 8))
        cur.pickup(1)
        cur.move(_F(1, 8))
        cur.drop(1)
        cur.move(-(mid + _F(1, 8) - _F(1, 2)))
        pair_pos = pair_pos / 2 + _F(1, 8)
        level -= 1

    mid = pair_pos / 2 + _F(1, 2)
    cur.eat()
    cur.pickup(1)
    cur.move(mid)
    cur.drop(1)
    cur.move(-(mid - pair_pos))
    cur.eat()
    reach = (2 * pair_pos + 2) / 3
    _classic_fetch(cur, reach - pair_pos, reach - mid)
    _classic_two_mile_dash(cur)

    claimed = original_exact(k, f)
    assert cur.pos == claimed
    return StrategyOutcome(tuple(cur.events), claimed, spec)
