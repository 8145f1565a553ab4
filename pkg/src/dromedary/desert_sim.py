"""Rules engine: applies itinerary events, rejects illegal behavior, and
computes the stomach-level-1 potential trace.

Movement costs one stomach unit per mile and is checked continuously (a
move is legal iff the stomach holds at least its length).  Eating is legal
iff the stomach is at least one unit below capacity; it consumes a whole
banana from the cache at the camel's position first, else from the load.
Positions live in [0, inf); whole bananas may be dropped and picked up at
arbitrary rational positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .closed_forms import pl_pow
from .core import Accounting, ProblemSpec, Rational, Variant, WorldState, format_rational, initial_state, parse_rational

_F = Fraction


class RuleViolation(ValueError):
    """An event is illegal in the current state."""


class ItineraryError(RuleViolation):
    """A RuleViolation annotated with the offending event index."""

    def __init__(self, index: int, reason: str):
        super().__init__(f"event {index}: {reason}")
        self.index = index
        self.reason = reason


@dataclass(frozen=True)
class Move:
    delta: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "delta", _F(self.delta))
        if self.delta == 0:
            raise RuleViolation("zero-length move")


@dataclass(frozen=True)
class Eat:
    pass


@dataclass(frozen=True)
class Pickup:
    count: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise RuleViolation("pickup count must be a positive integer")


@dataclass(frozen=True)
class Drop:
    count: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise RuleViolation("drop count must be a positive integer")


Event = Union[Move, Eat, Pickup, Drop]


def apply_event(spec: ProblemSpec, state: WorldState, event: Event) -> WorldState:
    """Apply one event, returning the successor state or raising RuleViolation."""
    pos, stomach, load = state.camel_pos, state.stomach, state.load
    if isinstance(event, Move):
        cost = abs(event.delta)
        if stomach < cost:
            raise RuleViolation(
                f"insufficient fuel: stomach {format_rational(stomach)} < move length {format_rational(cost)}"
            )
        new_pos = pos + event.delta
        if new_pos < 0:
            raise RuleViolation("cannot move below the desert border")
        return WorldState(new_pos, stomach - cost, load, state.caches)
    if isinstance(event, Eat):
        if stomach > spec.stomach_capacity - 1:
            raise RuleViolation(f"stomach too full to eat: {format_rational(stomach)}")
        caches = dict(state.caches)
        if caches.get(pos, 0) > 0:
            caches[pos] -= 1
            if caches[pos] == 0:
                del caches[pos]
            return WorldState(pos, stomach + 1, load, caches)
        if load > 0:
            return WorldState(pos, stomach + 1, load - 1, state.caches)
        raise RuleViolation("nothing to eat here")
    if isinstance(event, Pickup):
        here = state.cache_at(pos)
        if here < event.count:
            raise RuleViolation(f"only {here} bananas cached here, cannot pick up {event.count}")
        if load + event.count > spec.back_capacity:
            raise RuleViolation(f"back capacity {spec.back_capacity} exceeded")
        caches = dict(state.caches)
        caches[pos] -= event.count
        if caches[pos] == 0:
            del caches[pos]
        return WorldState(pos, stomach, load + event.count, caches)
    if isinstance(event, Drop):
        if load < event.count:
            raise RuleViolation(f"carrying only {load}, cannot drop {event.count}")
        caches = dict(state.caches)
        caches[pos] = caches.get(pos, 0) + event.count
        return WorldState(pos, stomach, load - event.count, caches)
    raise RuleViolation(f"unknown event {event!r}")


@dataclass(frozen=True)
class SimReport:
    """Outcome of a full run."""

    farthest: Fraction
    final_state: WorldState
    bananas_eaten: int
    returned: bool
    counted_consumption: Fraction
    successful: bool


def run(spec: ProblemSpec, itinerary: Sequence[Event]) -> SimReport:
    """Run an itinerary from the initial state.

    Raises ItineraryError at the first illegal event.  The report's
    ``successful`` flag reflects the variant's finish condition: round
    trips must end at the border, deliveries must additionally leave an
    unconsumed banana at the target.
    """
    state = initial_state(spec)
    whole = int(spec.bananas)
    initial_stomach = state.stomach
    farthest = state.camel_pos
    eaten = 0
    for index, event in enumerate(itinerary):
        try:
            state = apply_event(spec, state, event)
        except RuleViolation as exc:
            raise ItineraryError(index, str(exc)) from exc
        if isinstance(event, Eat):
            eaten += 1
        farthest = max(farthest, state.camel_pos)
        assert state.load + state.cache_total() + eaten == whole, "banana conservation violated"
    returned = state.camel_pos == 0
    consumed = initial_stomach + eaten
    if spec.accounting is Accounting.CREDIT_FINAL_STOMACH:
        consumed -= state.stomach
    if spec.variant is Variant.ONE_WAY:
        successful = True
    elif spec.variant is Variant.ROUND_TRIP:
        successful = returned
    else:
        successful = returned and state.cache_at(spec.delivery_target) >= 1
    return SimReport(
        farthest=farthest,
        final_state=state,
        bananas_eaten=eaten,
        returned=returned,
        counted_consumption=consumed,
        successful=successful,
    )


@dataclass(frozen=True)
class PotentialTrace:
    """Checkpoints (position, potential) taken whenever the stomach holds
    exactly one unit of fuel."""

    checkpoints: Tuple[Tuple[Fraction, Fraction], ...]


def _potential(back: int, state: WorldState) -> Fraction:
    total = _F(0)
    for pos, count in state.caches.items():
        total += count * pl_pow(back, pos)
    total += state.load * pl_pow(back, state.camel_pos)
    return total - _F(back, 2) * pl_pow(back, state.camel_pos)


def potential_trace(spec: ProblemSpec, itinerary: Sequence[Event]) -> PotentialTrace:
    """Trace the potential at every stomach-level-1 instant.

    Checkpoints fire after an Eat landing exactly at level 1 and at the
    (interpolated) position where a Move crosses level 1 downward.  A level
    reached by Eat and immediately departed by Move is one instant, hence
    one checkpoint.  Only defined for stomach capacity 2.
    """
    if spec.stomach_capacity != 2:
        raise RuleViolation("potential traces are defined for the stomach-2 camel only")
    state = initial_state(spec)
    checkpoints: List[Tuple[Fraction, Fraction]] = []
    emitted_at_one = False  # checkpoint already taken for the current level-1 episode

    for index, event in enumerate(itinerary):
        if isinstance(event, Move):
            start_stomach = state.stomach
            sign = 1 if event.delta > 0 else -1
            try:
                new_state = apply_event(spec, state, event)
            except RuleViolation as exc:
                raise ItineraryError(index, str(exc)) from exc
            if start_stomach == 1:
                if not emitted_at_one:
                    checkpoints.append((state.camel_pos, _potential(spec.back_capacity, state)))
                emitted_at_one = False
            elif start_stomach > 1 >= new_state.stomach:
                cross_pos = state.camel_pos + sign * (start_stomach - 1)
                crossing = WorldState(cross_pos, _F(1), state.load, state.caches)
                checkpoints.append((cross_pos, _potential(spec.back_capacity, crossing)))
                emitted_at_one = new_state.stomach == 1
            state = new_state
        else:
            try:
                state = apply_event(spec, state, event)
            except RuleViolation as exc:
                raise ItineraryError(index, str(exc)) from exc
            if isinstance(event, Eat):
                if state.stomach == 1:
                    checkpoints.append((state.camel_pos, _potential(spec.back_capacity, state)))
                    emitted_at_one = True
                else:
                    emitted_at_one = False
            # pickups/drops keep the stomach level, and move bananas to/from
            # the camel's own position: the potential is unchanged.
    return PotentialTrace(checkpoints=tuple(checkpoints))


def assert_monotone(trace: PotentialTrace) -> bool:
    """True iff the checkpoint values never increase."""
    values = [value for _, value in trace.checkpoints]
    return all(a >= b for a, b in zip(values, values[1:]))


def format_itinerary(itinerary: Iterable[Event]) -> str:
    """Line-oriented text form: MOVE <rational> | EAT | PICKUP n | DROP n."""
    lines = []
    for event in itinerary:
        if isinstance(event, Move):
            lines.append(f"MOVE {format_rational(event.delta)}")
        elif isinstance(event, Eat):
            lines.append("EAT")
        elif isinstance(event, Pickup):
            lines.append(f"PICKUP {event.count}")
        elif isinstance(event, Drop):
            lines.append(f"DROP {event.count}")
        else:
            raise RuleViolation(f"unknown event {event!r}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_itinerary(text: str) -> List[Event]:
    """Parse the text form; '#' starts a comment, blank lines are skipped."""
    events: List[Event] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        word = parts[0].upper()
        try:
            if word == "MOVE" and len(parts) == 2:
                events.append(Move(parse_rational(parts[1])))
            elif word == "EAT" and len(parts) == 1:
                events.append(Eat())
            elif word == "PICKUP" and len(parts) == 2:
                events.append(Pickup(int(parts[1])))
            elif word == "DROP" and len(parts) == 2:
                events.append(Drop(int(parts[1])))
            else:
                raise ValueError(f"unrecognized event line: {raw!r}")
        except (ValueError, RuleViolation) as exc:
            raise RuleViolation(f"line {lineno}: {exc}") from exc
    return events


def report_to_json(report: SimReport) -> Dict[str, object]:
    """JSON-friendly dict with rationals as canonical strings."""
    return {
        "farthest": format_rational(report.farthest),
        "returned": report.returned,
        "successful": report.successful,
        "bananas_eaten": report.bananas_eaten,
        "counted_consumption": format_rational(report.counted_consumption),
        "final_position": format_rational(report.final_state.camel_pos),
        "final_stomach": format_rational(report.final_state.stomach),
        "final_load": report.final_state.load,
        "caches": {
            format_rational(pos): count
            for pos, count in sorted(report.final_state.caches.items())
        },
    }
