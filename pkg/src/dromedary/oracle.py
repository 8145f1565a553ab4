"""Independent brute-force optimum over a discretized position grid.

Moves and drop positions are restricted to multiples of 1/q.  The search
result is therefore an exact lower bound on the continuous optimum, equal
to it whenever an optimal itinerary happens to lie on the grid.  States are
memoized at move boundaries; between moves the camel's eats and a single
pickup or drop batch are enumerated as one compound step, which keeps the
state graph acyclic (every cycle would have to regain stomach fuel).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .core import DomainError, ProblemSpec, Rational, Variant, WorldState, as_rational, initial_state
from .desert_sim import Drop, Eat, Event, Move, Pickup

_F = Fraction

DEFAULT_STATE_BUDGET = 2_000_000
STATE_BUDGET_ENV = "DROMEDARY_STATE_BUDGET"


class BudgetExceeded(RuntimeError):
    """The search hit its state budget before finishing."""


@dataclass(frozen=True)
class GridConfig:
    """Search grid: positions are multiples of 1/denominator, capped at
    max_position (defaults to the banana budget, which total fuel cannot
    outrun)."""

    denominator: int
    max_position: Optional[Rational] = None

    def __post_init__(self) -> None:
        if self.denominator < 1:
            raise DomainError("grid denominator must be a positive integer")
        if self.max_position is not None:
            object.__setattr__(self, "max_position", as_rational(self.max_position))
            if self.max_position < 0:
                raise DomainError("max_position must be nonnegative")


@dataclass(frozen=True)
class SearchResult:
    best_distance: Fraction
    witness: Tuple[Event, ...]
    states_explored: int


def _grid_units(value: Fraction, q: int, what: str) -> int:
    scaled = value * q
    if scaled.denominator != 1:
        raise DomainError(f"{what} {value} is not a multiple of 1/{q}")
    return scaled.numerator


def canonical_key(state: WorldState, farthest: Rational, grid: GridConfig) -> Tuple:
    """Injective encoding of a grid state (plus farthest-so-far) for
    memoization: cache entries sorted, all coordinates as grid integers."""
    q = grid.denominator
    caches = tuple(sorted((_grid_units(pos, q, "cache position"), count) for pos, count in state.caches.items()))
    return (
        _grid_units(state.camel_pos, q, "camel position"),
        _grid_units(state.stomach, q, "stomach level"),
        state.load,
        caches,
        _grid_units(as_rational(farthest), q, "farthest"),
    )


# Internal node: (pos_units, stomach_units, load, caches) with caches a
# sorted tuple of (pos_units, count).
_Node = Tuple[int, int, int, Tuple[Tuple[int, int], ...]]


class _Search:
    def __init__(self, spec: ProblemSpec, grid: GridConfig, budget: int):
        self.spec = spec
        self.q = grid.denominator
        max_pos = grid.max_position if grid.max_position is not None else spec.bananas
        self.max_units = int(max_pos * self.q)  # floor
        self.budget = budget
        self.memo: Dict[_Node, Tuple[Optional[Fraction], Tuple]] = {}
        self.target_units: Optional[int] = None
        if spec.variant is Variant.DELIVERY:
            self.target_units = _grid_units(spec.delivery_target, self.q, "delivery target")

    def initial_node(self) -> _Node:
        state = initial_state(self.spec)
        stomach = state.stomach * self.q
        if stomach.denominator != 1:
            raise DomainError(f"initial stomach {state.stomach} is not a multiple of 1/{self.q}")
        caches = tuple(sorted((int(p * self.q), c) for p, c in state.caches.items()))
        return (0, stomach.numerator, 0, caches)

    def _stop_value(self, node: _Node) -> Optional[Fraction]:
        pos, _, _, caches = node
        variant = self.spec.variant
        if variant is Variant.ONE_WAY:
            return _F(pos, self.q)
        if pos != 0:
            return None
        if variant is Variant.ROUND_TRIP:
            return _F(0)
        # delivery: value is the farthest cached banana at the finish
        if self.target_units is not None:
            if any(p == self.target_units for p, _ in caches):
                return _F(self.target_units, self.q)
            return None
        return max((_F(p, self.q) for p, _ in caches), default=None)

    def _compounds(self, node: _Node) -> List[Tuple[Tuple[int, str, int], _Node]]:
        """All (eats, pickup-or-drop) batches applicable at this position."""
        q, spec = self.q, self.spec
        results: List[Tuple[Tuple[int, str, int], _Node]] = []
        eat_cap = (spec.stomach_capacity - 1) * q
        current = node
        eats = 0
        while True:
            pos, stomach, load, caches = current
            here = dict(caches).get(pos, 0)
            variants: List[Tuple[str, int, _Node]] = [("", 0, current)]
            for take in range(1, min(spec.back_capacity - load, here) + 1):
                variants.append(("p", take, self._adjust(current, -take, take)))
            for give in range(1, load + 1):
                variants.append(("d", give, self._adjust(current, give, -give)))
            for kind, count, result in variants:
                results.append(((eats, kind, count), result))
            # try one more eat (cache first, then load)
            if stomach > eat_cap:
                break
            if here > 0:
                current = self._adjust(current, -1, 0, stomach_delta=q)
            elif load > 0:
                current = (pos, stomach + q, load - 1, caches)
            else:
                break
            eats += 1
        return results

    @staticmethod
    def _adjust(node: _Node, cache_delta: int, load_delta: int, stomach_delta: int = 0) -> _Node:
        pos, stomach, load, caches = node
        table = dict(caches)
        table[pos] = table.get(pos, 0) + cache_delta
        if table[pos] == 0:
            del table[pos]
        return (pos, stomach + stomach_delta, load + load_delta, tuple(sorted(table.items())))

    def value(self, node: _Node) -> Tuple[Optional[Fraction], Tuple]:
        hit = self.memo.get(node)
        if hit is not None:
            return hit
        if len(self.memo) >= self.budget:
            raise BudgetExceeded(f"state budget of {self.budget} exceeded")
        self.memo[node] = (None, ("stop",))  # placeholder; graph is acyclic
        pos, _, _, _ = node
        here = _F(pos, self.q)
        best: Optional[Fraction] = None
        best_action: Tuple = ("stop",)
        for action, mid in self._compounds(node):
            stop = self._stop_value(mid)
            if stop is not None and (best is None or stop > best):
                best, best_action = stop, action + (None,)
            m_pos, m_stomach, m_load, m_caches = mid
            if m_stomach < 1:
                continue
            for direction in (1, -1):
                new_pos = m_pos + direction
                if not (0 <= new_pos <= self.max_units):
                    continue
                child = (new_pos, m_stomach - 1, m_load, m_caches)
                child_value, _ = self.value(child)
                if child_value is None:
                    continue
                if self.spec.variant is not Variant.DELIVERY:
                    child_value = max(here, child_value)
                if best is None or child_value > best:
                    best, best_action = child_value, action + (direction,)
        self.memo[node] = (best, best_action)
        return best, best_action

    def witness(self, node: _Node) -> List[Event]:
        events: List[Event] = []
        while True:
            _, action = self.memo[node]
            if action == ("stop",):
                return events
            eats, kind, count, direction = action
            for _ in range(eats):
                events.append(Eat())
                pos, stomach, load, caches = node
                if dict(caches).get(pos, 0) > 0:
                    node = self._adjust(node, -1, 0, stomach_delta=self.q)
                else:
                    node = (pos, stomach + self.q, load - 1, caches)
            if kind == "p":
                events.append(Pickup(count))
                node = self._adjust(node, -count, count)
            elif kind == "d":
                events.append(Drop(count))
                node = self._adjust(node, count, -count)
            if direction is None:
                return events
            events.append(Move(_F(direction, self.q)))
            pos, stomach, load, caches = node
            node = (pos + direction, stomach - 1, load, caches)


def optimal(spec: ProblemSpec, grid: GridConfig) -> SearchResult:
    """Exact optimum over all itineraries on the grid.

    Guards: whole-banana count at most 5 and q * max_position at most 24;
    the state budget (DROMEDARY_STATE_BUDGET overrides the default) caps
    memo size regardless.
    """
    if int(spec.bananas) > 5:
        raise DomainError("oracle instances are limited to floor(N) <= 5")
    max_pos = grid.max_position if grid.max_position is not None else spec.bananas
    if grid.denominator * max_pos > 24:
        raise DomainError("oracle instances are limited to q * max_position <= 24")
    budget = int(os.environ.get(STATE_BUDGET_ENV, DEFAULT_STATE_BUDGET))
    search = _Search(spec, grid, budget)
    root = search.initial_node()
    best, _ = search.value(root)
    if best is None:
        raise DomainError("no feasible itinerary satisfies the variant's finish condition")
    return SearchResult(
        best_distance=best,
        witness=tuple(search.witness(root)),
        states_explored=len(search.memo),
    )
