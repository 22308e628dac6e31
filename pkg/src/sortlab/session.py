"""Deterministic room state machine for the shared lab session.

A room is a value: applying an action yields a new room. The server is
the single writer; it validates each request against the current state
(exactly one member holds control at any time), assigns the next log
sequence number, and broadcasts the applied action. Replicas that apply
the same action stream in seq order reach bit-identical state digests,
which is what keeps every participant looking at the same experiment.

``handle`` performs validation and enrichment; ``apply_action`` is the
pure, replayable transition used by both the server and replay tools.
Derived data (traces, battle results) is never stored in the room value;
it is recomputed on demand from (algorithm, input) or the battle config,
memoized, and embedded into broadcast actions so thin clients need no
engine of their own.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Mapping, Sequence, Union

from .algorithms import catalog_doc, generate_trace, get_algorithm
from .battle import (
    LEFT,
    RIGHT,
    Arrangement,
    BattleConfig,
    apply_score,
    make_arrangement,
    result_to_doc,
    run_battle,
)
from .canon import digest_doc
from .errors import CorruptSnapshot, SizeOutOfRange, SortLabError, UnknownAlgorithm
from .trace import trace_to_doc
from . import wire

DEFAULT_CAPACITY = 8

# rejection reasons
NOT_CONTROLLER = "not_controller"
NOT_MEMBER = "not_member"
ALREADY_JOINED = "already_joined"
ROOM_FULL = "room_full"
BAD_PHASE = "bad_phase"
UNKNOWN_ALGORITHM = "unknown_algorithm"
OUT_OF_RANGE = "out_of_range"
SIZE_OUT_OF_RANGE = "size_out_of_range"
ALREADY_REQUESTED = "already_requested"
IS_CONTROLLER = "is_controller"
NO_SUCCESSOR = "no_successor"
BAD_ACTION = "bad_action"

GUESSING = "guessing"
RACING = "racing"
FINISHED = "finished"

CONTROLLER_ONLY = frozenset(
    {
        "enter_detail",
        "step_forward",
        "step_backward",
        "seek",
        "select_algorithm",
        "enter_battle",
        "start_race",
        "advance_race",
        "exit_to_lobby",
        "grant_control",
        "release_control",
    }
)
MEMBER_ACTIONS = frozenset({"submit_guess", "request_control", "leave"})
ACTION_KINDS = CONTROLLER_ONLY | MEMBER_ACTIONS | {"join"}

_trace_for = lru_cache(maxsize=64)(generate_trace)
_battle_for = lru_cache(maxsize=32)(run_battle)


@dataclass(frozen=True, slots=True)
class Member:
    user_id: str
    name: str
    join_seq: int


@dataclass(frozen=True, slots=True)
class LobbyView:
    kind: str = "lobby"


@dataclass(frozen=True, slots=True)
class DetailView:
    kind: str
    algorithm_id: str
    initial: tuple[int, ...]
    position: int

    def trace(self):
        return _trace_for(self.algorithm_id, self.initial)


@dataclass(frozen=True, slots=True)
class BattleView:
    kind: str
    config: BattleConfig
    phase: str
    position: int
    guesses: Mapping[str, str]  # user_id -> side, copy-on-write

    def input_values(self) -> tuple[int, ...]:
        return make_arrangement(self.config.arrangement, self.config.size)

    def result(self):
        return _battle_for(self.config)


View = Union[LobbyView, DetailView, BattleView]


@dataclass(frozen=True, slots=True)
class RoomState:
    room_id: str
    capacity: int
    members: tuple[Member, ...]
    controller: str | None
    view: View
    log_seq: int
    pending_control: tuple[str, ...]
    scoreboard: Mapping[str, int]
    next_join_seq: int

    def member(self, user_id: str) -> Member | None:
        for m in self.members:
            if m.user_id == user_id:
                return m
        return None

    def member_ids(self) -> tuple[str, ...]:
        return tuple(m.user_id for m in self.members)


def create_room(room_id: str, capacity: int = DEFAULT_CAPACITY) -> RoomState:
    if capacity < 1:
        raise ValueError("capacity must be at least 1")
    return RoomState(
        room_id=room_id,
        capacity=capacity,
        members=(),
        controller=None,
        view=LobbyView(),
        log_seq=0,
        pending_control=(),
        scoreboard={},
        next_join_seq=1,
    )


# --- canonical documents and digest -------------------------------------


def _view_doc(view: View) -> dict:
    if isinstance(view, LobbyView):
        return {"kind": "lobby"}
    if isinstance(view, DetailView):
        return {
            "kind": "detail",
            "algorithm": view.algorithm_id,
            "initial": list(view.initial),
            "position": view.position,
        }
    return {
        "kind": "battle",
        "config": view.config.to_doc(),
        "phase": view.phase,
        "position": view.position,
        "guesses": dict(view.guesses),
    }


def room_core_doc(room: RoomState) -> dict:
    """Authoritative state only; derived caches are excluded so that a
    recomputing replica can never diverge from an embedding one."""
    return {
        "room_id": room.room_id,
        "members": [[m.user_id, m.name, m.join_seq] for m in room.members],
        "controller": room.controller,
        "view": _view_doc(room.view),
        "log_seq": room.log_seq,
        "pending_control": list(room.pending_control),
        "scoreboard": dict(room.scoreboard),
        "next_join_seq": room.next_join_seq,
    }


def state_digest(room: RoomState) -> str:
    return digest_doc(room_core_doc(room))


def snapshot(room: RoomState) -> dict:
    doc = {"type": "snapshot", "v": wire.PROTOCOL_VERSION, "capacity": room.capacity}
    doc.update(room_core_doc(room))
    if isinstance(room.view, DetailView):
        doc["derived"] = {"trace": trace_to_doc(room.view.trace())}
    elif isinstance(room.view, BattleView):
        derived: dict = {"input": list(room.view.input_values())}
        if room.view.phase != GUESSING:
            derived["result"] = result_to_doc(room.view.result())
        doc["derived"] = derived
    return doc


def restore(doc: Mapping) -> RoomState:
    try:
        members = tuple(Member(str(u), str(n), int(j)) for u, n, j in doc["members"])
        view_doc = doc["view"]
        view_kind = view_doc["kind"]
        view: View
        if view_kind == "lobby":
            view = LobbyView()
        elif view_kind == "detail":
            view = DetailView(
                "detail",
                view_doc["algorithm"],
                tuple(int(v) for v in view_doc["initial"]),
                int(view_doc["position"]),
            )
        elif view_kind == "battle":
            view = BattleView(
                "battle",
                BattleConfig.from_doc(view_doc["config"]),
                view_doc["phase"],
                int(view_doc["position"]),
                {str(u): str(s) for u, s in view_doc["guesses"].items()},
            )
        else:
            raise CorruptSnapshot(f"unknown view kind {view_kind!r}")
        room = RoomState(
            room_id=str(doc["room_id"]),
            capacity=int(doc.get("capacity", DEFAULT_CAPACITY)),
            members=members,
            controller=doc["controller"],
            view=view,
            log_seq=int(doc["log_seq"]),
            pending_control=tuple(str(u) for u in doc["pending_control"]),
            scoreboard={str(u): int(p) for u, p in doc["scoreboard"].items()},
            next_join_seq=int(doc["next_join_seq"]),
        )
    except CorruptSnapshot:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptSnapshot(f"malformed snapshot: {exc}") from exc
    _check_invariants(room)
    return room


def _check_invariants(room: RoomState) -> None:
    ids = room.member_ids()
    if len(set(ids)) != len(ids):
        raise CorruptSnapshot("duplicate member ids")
    # controller None with members present is allowed: it is the transient
    # state between a controller's leave and the synthesized succession
    # grant, and a snapshot may legitimately cut between the two actions.
    if room.controller is not None and room.controller not in ids:
        raise CorruptSnapshot("controller is not a member")
    if len(set(room.pending_control)) != len(room.pending_control):
        raise CorruptSnapshot("duplicate pending control requests")
    if room.controller in room.pending_control:
        raise CorruptSnapshot("controller may not be pending")
    for user in room.pending_control:
        if user not in ids:
            raise CorruptSnapshot("pending requester is not a member")
    if isinstance(room.view, DetailView):
        try:
            trace = room.view.trace()
        except SortLabError as exc:
            raise CorruptSnapshot(f"detail view is not reproducible: {exc}") from exc
        if not 0 <= room.view.position <= len(trace.steps):
            raise CorruptSnapshot("detail position out of range")
    if isinstance(room.view, BattleView):
        if room.view.phase not in (GUESSING, RACING, FINISHED):
            raise CorruptSnapshot(f"unknown battle phase {room.view.phase!r}")
        for user, side in room.view.guesses.items():
            if user not in ids or side not in (LEFT, RIGHT):
                raise CorruptSnapshot("invalid guess entry")
        try:
            make_arrangement(room.view.config.arrangement, room.view.config.size)
            get_algorithm(room.view.config.left)
            get_algorithm(room.view.config.right)
        except SortLabError as exc:
            raise CorruptSnapshot(f"battle view is not reproducible: {exc}") from exc
        if room.view.phase != GUESSING:
            if not 0 <= room.view.position <= len(room.view.result().timeline):
                raise CorruptSnapshot("race position out of range")
    if any(p < 0 for p in room.scoreboard.values()):
        raise CorruptSnapshot("negative score")


# --- pure transition -----------------------------------------------------


def apply_action(room: RoomState, action: Mapping) -> RoomState:
    """Apply one already-validated action; used by the server and by
    replicas/replay. Raises ValueError when the action cannot possibly
    apply to this state (seq gap, wrong view), which a replayer reports
    as divergence."""
    seq = action["seq"]
    if seq != room.log_seq + 1:
        raise ValueError(f"action seq {seq} does not follow log_seq {room.log_seq}")
    actor = action["actor"]
    body = action["body"]
    kind = body["kind"]
    room = replace(room, log_seq=seq)

    if kind == "join":
        member = Member(actor, body["name"], room.next_join_seq)
        scoreboard = dict(room.scoreboard)
        restored = body.get("restored_points", 0)
        if restored:
            scoreboard[actor] = restored
        return replace(
            room,
            members=room.members + (member,),
            controller=room.controller or actor,
            next_join_seq=room.next_join_seq + 1,
            scoreboard=scoreboard,
        )

    if kind == "leave":
        members = tuple(m for m in room.members if m.user_id != actor)
        controller = room.controller if room.controller != actor else None
        pending = tuple(u for u in room.pending_control if u != actor)
        view = room.view
        if isinstance(view, BattleView) and actor in view.guesses:
            guesses = dict(view.guesses)
            del guesses[actor]
            view = replace(view, guesses=guesses)
        return replace(
            room, members=members, controller=controller, pending_control=pending, view=view
        )

    if kind == "request_control":
        return replace(room, pending_control=room.pending_control + (actor,))

    if kind == "grant_control":
        to = body["to"]
        return replace(
            room,
            controller=to,
            pending_control=tuple(u for u in room.pending_control if u != to),
        )

    if kind == "release_control":
        successor = _release_successor(room, actor)
        if successor is None:
            return room
        return replace(
            room,
            controller=successor,
            pending_control=tuple(u for u in room.pending_control if u != successor),
        )

    if kind == "enter_detail":
        initial = make_arrangement(Arrangement.from_doc(body["arrangement"]), body["size"])
        get_algorithm(body["algorithm"])
        return replace(room, view=DetailView("detail", body["algorithm"], initial, 0))

    if kind == "select_algorithm":
        view = _expect_view(room, DetailView, kind)
        get_algorithm(body["algorithm"])
        return replace(room, view=replace(view, algorithm_id=body["algorithm"], position=0))

    if kind == "step_forward":
        view = _expect_view(room, DetailView, kind)
        return replace(room, view=replace(view, position=view.position + 1))

    if kind == "step_backward":
        view = _expect_view(room, DetailView, kind)
        return replace(room, view=replace(view, position=view.position - 1))

    if kind == "seek":
        view = _expect_view(room, DetailView, kind)
        return replace(room, view=replace(view, position=body["position"]))

    if kind == "enter_battle":
        config = BattleConfig.from_doc(body["config"])
        get_algorithm(config.left)
        get_algorithm(config.right)
        make_arrangement(config.arrangement, config.size)  # bounds check
        return replace(room, view=BattleView("battle", config, GUESSING, 0, {}))

    if kind == "submit_guess":
        view = _expect_view(room, BattleView, kind)
        guesses = dict(view.guesses)
        guesses[actor] = body["side"]
        return replace(room, view=replace(view, guesses=guesses))

    if kind == "start_race":
        view = _expect_view(room, BattleView, kind)
        return replace(room, view=replace(view, phase=RACING, position=0))

    if kind == "advance_race":
        view = _expect_view(room, BattleView, kind)
        timeline_len = len(view.result().timeline)
        position = min(view.position + body["ticks"], timeline_len)
        if position >= timeline_len:
            winner = view.result().winner
            scoreboard: Mapping[str, int] = room.scoreboard
            for user, side in view.guesses.items():
                scoreboard = apply_score(scoreboard, user, side == winner)
            return replace(
                room,
                view=replace(view, phase=FINISHED, position=timeline_len),
                scoreboard=scoreboard,
            )
        return replace(room, view=replace(view, position=position))

    if kind == "exit_to_lobby":
        return replace(room, view=LobbyView())

    raise ValueError(f"unknown action kind {kind!r}")


def _expect_view(room: RoomState, view_type: type, kind: str):
    if not isinstance(room.view, view_type):
        raise ValueError(f"action {kind} does not apply to {room.view.kind} view")
    return room.view


def _release_successor(room: RoomState, releasing: str) -> str | None:
    if room.pending_control:
        return room.pending_control[0]
    others = [m for m in room.members if m.user_id != releasing]
    if not others:
        return None
    return min(others, key=lambda m: m.join_seq).user_id


def _leave_successor(room: RoomState) -> str | None:
    if not room.members:
        return None
    return min(room.members, key=lambda m: m.join_seq).user_id


# --- validated handling ---------------------------------------------------

Outbound = list[tuple[tuple[str, ...], dict]]


def handle(room: RoomState, actor: str, body: Mapping) -> tuple[RoomState, Outbound, list[dict]]:
    """Validate a request, apply it, and produce addressed messages.

    Returns (room', outbound, applied) where outbound pairs a recipient
    set with a message document and applied lists the action documents
    appended to the log (zero on rejection, two when a leave triggers
    controller succession).
    """
    body = dict(body)
    kind = body.get("kind")

    def reject(reason: str) -> tuple[RoomState, Outbound, list[dict]]:
        return room, [((actor,), wire.rejected(reason, body))], []

    if kind not in ACTION_KINDS:
        return reject(BAD_ACTION)

    if kind == "join":
        if room.member(actor) is not None:
            return reject(ALREADY_JOINED)
        if len(room.members) >= room.capacity:
            return reject(ROOM_FULL)
        name = body.get("name")
        if not isinstance(name, str) or not name.strip():
            return reject(BAD_ACTION)
        body.setdefault("restored_points", 0)
        prior = room.member_ids()
        action = {"seq": room.log_seq + 1, "actor": actor, "body": body}
        room2 = apply_action(room, action)
        outbound: Outbound = [
            ((actor,), wire.welcome(actor, snapshot(room2), catalog_doc())),
        ]
        if prior:
            outbound.append((prior, wire.action_applied(action)))
            outbound.append((prior, wire.room_event("joined", actor, name)))
        return room2, outbound, [action]

    if room.member(actor) is None:
        return reject(NOT_MEMBER)

    if kind == "leave":
        return member_leave(room, actor)

    if kind in CONTROLLER_ONLY and actor != room.controller:
        return reject(NOT_CONTROLLER)

    error = _validate(room, actor, kind, body)
    if error is not None:
        return reject(error)

    _enrich(room, kind, body)
    action = {"seq": room.log_seq + 1, "actor": actor, "body": body}
    room2 = apply_action(room, action)
    everyone = room2.member_ids()
    outbound = [(everyone, wire.action_applied(action))]
    if kind == "request_control" and room2.controller is not None:
        outbound.append(((room2.controller,), wire.control_requested(actor)))
    if _race_just_finished(room, room2):
        outbound.append((everyone, wire.score_update(room2.scoreboard)))
    return room2, outbound, [action]


def _validate(room: RoomState, actor: str, kind: str, body: Mapping) -> str | None:
    view = room.view
    if kind == "enter_detail":
        try:
            get_algorithm(body["algorithm"])
            make_arrangement(Arrangement.from_doc(body["arrangement"]), body["size"])
        except UnknownAlgorithm:
            return UNKNOWN_ALGORITHM
        except SizeOutOfRange:
            return SIZE_OUT_OF_RANGE
        except (KeyError, TypeError, ValueError):
            return BAD_ACTION
        return None

    if kind == "select_algorithm":
        if not isinstance(view, DetailView):
            return BAD_PHASE
        try:
            get_algorithm(body.get("algorithm"))
        except UnknownAlgorithm:
            return UNKNOWN_ALGORITHM
        return None

    if kind in ("step_forward", "step_backward", "seek"):
        if not isinstance(view, DetailView):
            return BAD_PHASE
        limit = len(view.trace().steps)
        if kind == "step_forward":
            return OUT_OF_RANGE if view.position >= limit else None
        if kind == "step_backward":
            return OUT_OF_RANGE if view.position <= 0 else None
        position = body.get("position")
        if not isinstance(position, int) or isinstance(position, bool):
            return BAD_ACTION
        return OUT_OF_RANGE if not 0 <= position <= limit else None

    if kind == "enter_battle":
        try:
            config = BattleConfig.from_doc(body["config"])
            get_algorithm(config.left)
            get_algorithm(config.right)
            make_arrangement(config.arrangement, config.size)
        except UnknownAlgorithm:
            return UNKNOWN_ALGORITHM
        except SizeOutOfRange:
            return SIZE_OUT_OF_RANGE
        except (KeyError, TypeError, ValueError):
            return BAD_ACTION
        return None

    if kind == "submit_guess":
        if not isinstance(view, BattleView) or view.phase != GUESSING:
            return BAD_PHASE  # guesses lock when the race starts
        if body.get("side") not in (LEFT, RIGHT):
            return BAD_ACTION
        return None

    if kind == "start_race":
        if not isinstance(view, BattleView) or view.phase != GUESSING:
            return BAD_PHASE
        return None

    if kind == "advance_race":
        if not isinstance(view, BattleView) or view.phase != RACING:
            return BAD_PHASE
        ticks = body.get("ticks")
        if not isinstance(ticks, int) or isinstance(ticks, bool) or ticks < 1:
            return OUT_OF_RANGE
        return None

    if kind == "exit_to_lobby":
        return BAD_PHASE if isinstance(view, LobbyView) else None

    if kind == "request_control":
        if actor == room.controller:
            return IS_CONTROLLER
        if actor in room.pending_control:
            return ALREADY_REQUESTED
        return None

    if kind == "grant_control":
        to = body.get("to")
        if room.member(to) is None:
            return NOT_MEMBER
        if to == room.controller:
            return IS_CONTROLLER
        return None

    if kind == "release_control":
        if _release_successor(room, actor) is None:
            return NO_SUCCESSOR
        return None

    return None


def _enrich(room: RoomState, kind: str, body: dict) -> None:
    """Attach derived payloads so engine-free clients can render the
    applied action. Replicas recompute instead of trusting these."""
    if kind == "enter_detail":
        initial = make_arrangement(Arrangement.from_doc(body["arrangement"]), body["size"])
        body["trace"] = trace_to_doc(_trace_for(body["algorithm"], initial))
    elif kind == "select_algorithm" and isinstance(room.view, DetailView):
        body["trace"] = trace_to_doc(_trace_for(body["algorithm"], room.view.initial))
    elif kind == "enter_battle":
        config = BattleConfig.from_doc(body["config"])
        body["input"] = list(make_arrangement(config.arrangement, config.size))
    elif kind == "start_race" and isinstance(room.view, BattleView):
        body["result"] = result_to_doc(room.view.result())
    elif kind == "release_control":
        body["to"] = _release_successor(room, room.controller)


def _race_just_finished(before: RoomState, after: RoomState) -> bool:
    return (
        isinstance(after.view, BattleView)
        and after.view.phase == FINISHED
        and isinstance(before.view, BattleView)
        and before.view.phase != FINISHED
    )


def member_leave(room: RoomState, user_id: str) -> tuple[RoomState, Outbound, list[dict]]:
    """Remove a member (voluntary leave or dropped connection). If the
    controller leaves, the longest-tenured remaining member succeeds via
    a synthesized grant_control action."""
    member = room.member(user_id)
    if member is None:
        return room, [((user_id,), wire.rejected(NOT_MEMBER, {"kind": "leave"}))], []
    leave_action = {"seq": room.log_seq + 1, "actor": user_id, "body": {"kind": "leave"}}
    room2 = apply_action(room, leave_action)
    applied = [leave_action]
    remaining = room2.member_ids()
    outbound: Outbound = []
    if remaining:
        outbound.append((remaining, wire.action_applied(leave_action)))
        outbound.append((remaining, wire.room_event("left", user_id, member.name)))
    if room2.controller is None and room2.members:
        successor = _leave_successor(room2)
        grant = {
            "seq": room2.log_seq + 1,
            "actor": successor,
            "body": {"kind": "grant_control", "to": successor},
        }
        room2 = apply_action(room2, grant)
        applied.append(grant)
        outbound.append((remaining, wire.action_applied(grant)))
    return room2, outbound, applied
