"""Shared remote-lab timetabling as a box-bounded minimization problem.

Time is split into slots of ``slot_length`` minutes.  A rig of capacity C
hosts up to C concurrent sessions.  When a session ends, its seat stays
blocked for ``threshold_gap`` slots of changeover, so at every slot the
number of sessions in ``[start, end + threshold_gap)`` on a rig may not
exceed its capacity.  A user holds at most one rig at a time and sessions
run for contiguous slots.

The per-slot cost is the unused capacity of occupied rigs::

    f(t) = sum over rigs r with P_r(t) > 0 of (C_r - P_r(t))

An idle rig costs nothing.  Over a whole schedule the cost is the sum of
f(t) plus a penalty of ``max capacity * horizon`` per unassigned request.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core import ObjectiveProblem, StructuralError


class FeasibilityError(ValueError):
    def __init__(self, constraint: str, detail: str):
        self.constraint = constraint
        super().__init__(f"{constraint}: {detail}")


class InstanceParseError(ValueError):
    pass


@dataclass(frozen=True)
class Rig:
    id: str
    capacity: int

    def __post_init__(self):
        if int(self.capacity) < 1:
            raise StructuralError(f"rig {self.id}: capacity must be at least 1")


@dataclass(frozen=True)
class RigType:
    id: str
    rigs: Tuple[Rig, ...]

    def __post_init__(self):
        object.__setattr__(self, "rigs", tuple(self.rigs))
        if not self.rigs:
            raise StructuralError(f"rig type {self.id} has no rigs")


@dataclass(frozen=True)
class Request:
    """One user's request for a session on some rig of ``rig_type``.

    ``arrival`` is the slot the user asks to start at; only the
    first-come-first-served decoding uses it.
    """

    user: str
    rig_type: str
    duration: int
    max_session: int
    arrival: int = 0


@dataclass(frozen=True)
class TimetableInstance:
    rig_types: Tuple[RigType, ...]
    horizon: int
    requests: Tuple[Request, ...]
    slot_length: float = 5.0
    threshold_gap: int = 1
    name: str = "timetable"

    def __post_init__(self):
        object.__setattr__(self, "rig_types", tuple(self.rig_types))
        object.__setattr__(self, "requests", tuple(self.requests))
        if self.horizon < 1:
            raise StructuralError("horizon must be at least one slot")
        if self.threshold_gap < 0:
            raise StructuralError("threshold_gap must be non-negative")
        seen = set()
        for rt in self.rig_types:
            for rig in rt.rigs:
                if rig.id in seen:
                    raise StructuralError(f"duplicate rig id {rig.id}")
                seen.add(rig.id)
        types = {rt.id for rt in self.rig_types}
        for k, req in enumerate(self.requests):
            if req.rig_type not in types:
                raise StructuralError(f"request {k}: unknown rig type {req.rig_type}")
            if not 1 <= req.duration <= req.max_session <= self.horizon:
                raise StructuralError(
                    f"request {k}: need 1 <= duration <= max_session <= horizon "
                    f"(got {req.duration}, {req.max_session}, {self.horizon})"
                )
            if not 0 <= req.arrival < self.horizon:
                raise StructuralError(f"request {k}: arrival outside the horizon")

    def rigs_of(self, rig_type: str) -> Tuple[Rig, ...]:
        for rt in self.rig_types:
            if rt.id == rig_type:
                return rt.rigs
        raise KeyError(rig_type)

    @property
    def rigs(self) -> List[Rig]:
        return [rig for rt in self.rig_types for rig in rt.rigs]

    def rig(self, rig_id: str) -> Rig:
        for rig in self.rigs:
            if rig.id == rig_id:
                return rig
        raise KeyError(rig_id)

    def type_of(self, rig_id: str) -> str:
        for rt in self.rig_types:
            if any(r.id == rig_id for r in rt.rigs):
                return rt.id
        raise KeyError(rig_id)

    @property
    def unassigned_penalty(self) -> float:
        return float(max(r.capacity for r in self.rigs) * self.horizon)


@dataclass(frozen=True)
class Assignment:
    rig: str
    start: int


@dataclass
class Schedule:
    """Per-request assignment (``None`` = unassigned)."""

    assignments: List[Optional[Assignment]] = field(default_factory=list)

    @property
    def unassigned(self) -> int:
        return sum(a is None for a in self.assignments)


def threshold_slots(threshold_minutes: float, slot_length: float) -> int:
    if slot_length <= 0:
        raise StructuralError("slot_length must be positive")
    return int(math.ceil(threshold_minutes / slot_length - 1e-12)) if threshold_minutes > 0 else 0


# -- occupancy and feasibility ---------------------------------------------------

def occupancy(instance: TimetableInstance, schedule: Schedule) -> Dict[str, np.ndarray]:
    """Number of users on each rig at each slot (the P matrix)."""
    load = {rig.id: np.zeros(instance.horizon, dtype=int) for rig in instance.rigs}
    for req, a in zip(instance.requests, schedule.assignments):
        if a is not None:
            load[a.rig][a.start:a.start + req.duration] += 1
    return load


def check_feasibility(instance: TimetableInstance, schedule: Schedule) -> None:
    """Raise :class:`FeasibilityError` naming the first violated constraint."""
    if len(schedule.assignments) != len(instance.requests):
        raise FeasibilityError("structure", "one assignment per request required")
    h, gap = instance.horizon, instance.threshold_gap
    busy: Dict[str, np.ndarray] = {}
    hold = {rig.id: np.zeros(h, dtype=int) for rig in instance.rigs}
    for k, (req, a) in enumerate(zip(instance.requests, schedule.assignments)):
        if a is None:
            continue
        if a.rig not in hold:
            raise FeasibilityError("rig", f"request {k} assigned to unknown rig {a.rig}")
        if instance.type_of(a.rig) != req.rig_type:
            raise FeasibilityError("rig-type", f"request {k} wants {req.rig_type}, got rig {a.rig}")
        if a.start < 0 or a.start + req.duration > h:
            raise FeasibilityError("horizon", f"request {k} runs outside [0, {h})")
        if req.duration > req.max_session:
            raise FeasibilityError("session-cap", f"request {k} exceeds its session cap")
        mask = busy.setdefault(req.user, np.zeros(h, dtype=bool))
        span = slice(a.start, a.start + req.duration)
        if mask[span].any():
            raise FeasibilityError("one-rig-per-user", f"user {req.user} double-booked by request {k}")
        mask[span] = True
        hold[a.rig][a.start:min(h, a.start + req.duration + gap)] += 1
    load = occupancy(instance, schedule)
    for rig in instance.rigs:
        if (load[rig.id] > rig.capacity).any():
            t = int(np.argmax(load[rig.id] > rig.capacity))
            raise FeasibilityError("capacity", f"rig {rig.id} over capacity at slot {t}")
        if (hold[rig.id] > rig.capacity).any():
            t = int(np.argmax(hold[rig.id] > rig.capacity))
            raise FeasibilityError("threshold-gap", f"rig {rig.id} reused before changeover at slot {t}")


# -- objective ----------------------------------------------------------------

def _slot_costs(instance: TimetableInstance, schedule: Schedule) -> np.ndarray:
    load = occupancy(instance, schedule)
    costs = np.zeros(instance.horizon)
    for rig in instance.rigs:
        p = load[rig.id]
        costs += np.where(p > 0, rig.capacity - p, 0)
    return costs


def objective(instance: TimetableInstance, schedule: Schedule, slot: int) -> float:
    """Unused capacity summed over the rigs in use at ``slot``."""
    check_feasibility(instance, schedule)
    if not 0 <= slot < instance.horizon:
        raise StructuralError(f"slot {slot} outside horizon {instance.horizon}")
    return float(_slot_costs(instance, schedule)[slot])


def objective_trace(instance: TimetableInstance, schedule: Schedule) -> List[Tuple[int, float]]:
    check_feasibility(instance, schedule)
    return [(t, float(c)) for t, c in enumerate(_slot_costs(instance, schedule))]


def total_objective(instance: TimetableInstance, schedule: Schedule, check: bool = True) -> float:
    if check:
        check_feasibility(instance, schedule)
    return float(_slot_costs(instance, schedule).sum() + instance.unassigned_penalty * schedule.unassigned)


# -- decoding -----------------------------------------------------------------

class _Placer:
    """Incremental first-fit placement with the feasibility bookkeeping."""

    def __init__(self, instance: TimetableInstance):
        self.instance = instance
        h = instance.horizon
        self.hold = {rig.id: np.zeros(h, dtype=int) for rig in instance.rigs}
        self.capacity = {rig.id: rig.capacity for rig in instance.rigs}
        self.busy: Dict[str, np.ndarray] = {}

    def fits(self, req: Request, rig_id: str, start: int) -> bool:
        end = start + req.duration
        busy = self.busy.get(req.user)
        if busy is not None and busy[start:end].any():
            return False
        window = self.hold[rig_id][start:min(self.instance.horizon, end + self.instance.threshold_gap)]
        return bool((window < self.capacity[rig_id]).all())

    def place(self, req: Request, rig_id: str, start: int) -> Assignment:
        end = start + req.duration
        self.busy.setdefault(req.user, np.zeros(self.instance.horizon, dtype=bool))[start:end] = True
        self.hold[rig_id][start:min(self.instance.horizon, end + self.instance.threshold_gap)] += 1
        return Assignment(rig_id, start)

    def first_fit(self, req: Request, rig_id: str, start: int) -> Optional[Assignment]:
        for s in range(start, self.instance.horizon - req.duration + 1):
            if self.fits(req, rig_id, s):
                return self.place(req, rig_id, s)
        return None


def decode_choices(instance: TimetableInstance, choices: Sequence[Tuple[int, int]]) -> Schedule:
    """Place requests in order at ``(rig index within type, desired start)``.

    A request that does not fit at its desired start is shifted forward to
    the first feasible slot on the same rig; if none exists it stays
    unassigned.
    """
    if len(choices) != len(instance.requests):
        raise StructuralError("one (rig, start) choice per request required")
    placer = _Placer(instance)
    out: List[Optional[Assignment]] = []
    for req, (rig_index, start) in zip(instance.requests, choices):
        rigs = instance.rigs_of(req.rig_type)
        rig_index = min(max(int(rig_index), 0), len(rigs) - 1)
        start = min(max(int(start), 0), instance.horizon - req.duration)
        out.append(placer.first_fit(req, rigs[rig_index].id, start))
    return Schedule(out)


def decode(instance: TimetableInstance, vector) -> Schedule:
    """Map a real vector ``[rig_0, start_0, rig_1, start_1, ...]`` to a schedule.

    Rig coordinates are floored, start coordinates rounded half up.
    """
    vector = np.asarray(vector, dtype=float)
    if vector.size != 2 * len(instance.requests):
        raise StructuralError(f"expected {2 * len(instance.requests)} coordinates, got {vector.size}")
    choices = [(math.floor(vector[2 * k]), math.floor(vector[2 * k + 1] + 0.5))
               for k in range(len(instance.requests))]
    return decode_choices(instance, choices)


def first_come_first_served(instance: TimetableInstance) -> Schedule:
    """Serve requests in order on the first rig of their type from their arrival slot."""
    return decode_choices(instance, [(0, req.arrival) for req in instance.requests])


def encode(instance: TimetableInstance) -> ObjectiveProblem:
    """Expose ``instance`` as a ``2 * len(requests)``-dimensional problem."""
    lower, upper = [], []
    for req in instance.requests:
        lower += [0.0, 0.0]
        upper += [float(len(instance.rigs_of(req.rig_type))), float(instance.horizon - req.duration)]

    def cost(x):
        return total_objective(instance, decode(instance, x), check=False)

    return ObjectiveProblem(f"timetable:{instance.name}", np.array(lower), np.array(upper), cost)


# -- built-in scenario and I/O ---------------------------------------------------

def lab_scenario() -> TimetableInstance:
    """Three rig types with one capacity-3 rig each and four users.

    Users 1-3 arrive one slot apart at rig type 1.  User 4 gets type 2
    straight away, then has to queue for type 1 until a seat is released
    and the 5-minute changeover has elapsed.
    """
    types = tuple(RigType(f"type{i}", (Rig(f"rig{i}", 3),)) for i in (1, 2, 3))
    requests = (
        Request("user1", "type1", 4, 6, arrival=0),
        Request("user2", "type1", 4, 6, arrival=1),
        Request("user3", "type1", 4, 6, arrival=2),
        Request("user4", "type2", 1, 6, arrival=3),
        Request("user4", "type1", 4, 6, arrival=3),
    )
    return TimetableInstance(types, horizon=16, requests=requests, slot_length=5.0,
                             threshold_gap=threshold_slots(5.0, 5.0), name="remote-lab")


def instance_from_dict(doc: dict) -> TimetableInstance:
    """Build an instance from its document form (threshold given in minutes)."""
    try:
        slot_length = float(doc.get("slot_length", 5.0))
        types = tuple(
            RigType(str(rt["id"]), tuple(Rig(str(r["id"]), int(r["capacity"])) for r in rt["rigs"]))
            for rt in doc["rig_types"]
        )
        requests = tuple(
            Request(str(r["user"]), str(r["rig_type"]), int(r["duration"]),
                    int(r.get("max_session", r["duration"])), int(r.get("arrival", 0)))
            for r in doc["requests"]
        )
        return TimetableInstance(
            types,
            horizon=int(doc["horizon"]),
            requests=requests,
            slot_length=slot_length,
            threshold_gap=threshold_slots(float(doc.get("threshold_gap", 0.0)), slot_length),
            name=str(doc.get("name", "timetable")),
        )
    except KeyError as exc:
        raise InstanceParseError(f"missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise InstanceParseError(str(exc)) from None


def instance_to_dict(instance: TimetableInstance) -> dict:
    return {
        "name": instance.name,
        "horizon": instance.horizon,
        "slot_length": instance.slot_length,
        "threshold_gap": instance.threshold_gap * instance.slot_length,
        "rig_types": [
            {"id": rt.id, "rigs": [{"id": r.id, "capacity": r.capacity} for r in rt.rigs]}
            for rt in instance.rig_types
        ],
        "requests": [
            {"user": r.user, "rig_type": r.rig_type, "duration": r.duration,
             "max_session": r.max_session, "arrival": r.arrival}
            for r in instance.requests
        ],
    }


def load_instance(path) -> TimetableInstance:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return instance_from_dict(doc)
    except (InstanceParseError, StructuralError) as exc:
        raise InstanceParseError(f"{path}: {exc}") from None


def schedule_rows(instance: TimetableInstance, schedule: Schedule) -> List[dict]:
    rows = []
    for k, (req, a) in enumerate(zip(instance.requests, schedule.assignments)):
        rows.append({
            "request": k,
            "user": req.user,
            "rig_type": req.rig_type,
            "rig": "" if a is None else a.rig,
            "start": "" if a is None else a.start,
            "end": "" if a is None else a.start + req.duration,
        })
    return rows
