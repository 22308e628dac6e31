"""Connection and room management behind the websocket layer.

The hub is transport-agnostic: a connection is just a send callback plus
a close callback, so tests drive it directly and the websocket endpoint
adapts real sockets onto it. All hub entry points run under one lock;
events for a room are therefore applied one at a time in arrival order,
which is exactly the per-room serialization the session layer needs.

Responsibilities: hello/join routing (first hello for an unknown room id
creates the room), fan-out of addressed messages, heartbeat reaping,
scoreboard persistence per room, and optional action logs (one applied
action per line, with the state digest after it) for offline replay.
"""

from __future__ import annotations

import json
import logging
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from . import session, wire
from .session import RoomState

logger = logging.getLogger(__name__)

MAX_VIOLATIONS = 3

# server-level rejection reasons (session-level ones pass through)
NOT_JOINED = "not_joined"
MALFORMED = "malformed"
MAX_ROOMS = "max_rooms"


@dataclass
class ServerConfig:
    bind: str = "127.0.0.1"
    port: int = 8765
    max_rooms: int = 64
    room_capacity: int = 8
    heartbeat_interval: float = 10.0
    heartbeat_timeout: float = 30.0
    scoreboard_dir: str | None = None
    ui_dir: str | None = None
    action_log_dir: str | None = None

    def __post_init__(self):
        if not self.heartbeat_interval > 0:
            raise ValueError("heartbeat_interval must be positive")
        if not self.heartbeat_timeout > self.heartbeat_interval:
            raise ValueError("heartbeat_timeout must exceed heartbeat_interval")
        if self.room_capacity < 1 or self.max_rooms < 1:
            raise ValueError("capacities must be at least 1")


@dataclass
class ConnectionRecord:
    conn_id: int
    send: Callable[[dict], None]
    close: Callable[[], None]
    last_heartbeat: float
    user_id: str | None = None
    room_id: str | None = None
    violations: int = 0


@dataclass
class _RoomBinding:
    state: RoomState
    user_conns: dict[str, int] = field(default_factory=dict)
    restore_points: dict[str, int] = field(default_factory=dict)
    user_counter: int = 0


class Hub:
    def __init__(self, config: ServerConfig, clock: Callable[[], float] = time.monotonic):
        self.config = config
        self._clock = clock
        self._lock = threading.RLock()
        self._rooms: dict[str, _RoomBinding] = {}
        self._conns: dict[int, ConnectionRecord] = {}
        self._next_conn_id = 1

    # --- connection lifecycle ------------------------------------------

    def connect(self, send: Callable[[dict], None], close: Callable[[], None]) -> int:
        with self._lock:
            conn_id = self._next_conn_id
            self._next_conn_id += 1
            self._conns[conn_id] = ConnectionRecord(conn_id, send, close, self._clock())
            return conn_id

    def disconnect(self, conn_id: int) -> None:
        with self._lock:
            conn = self._conns.pop(conn_id, None)
            if conn is None:
                return
            self._depart(conn)

    def reap(self, now: float | None = None) -> list[int]:
        """Close connections whose last heartbeat is older than the
        configured timeout; returns the closed connection ids."""
        with self._lock:
            now = self._clock() if now is None else now
            stale = [
                c.conn_id
                for c in self._conns.values()
                if now - c.last_heartbeat > self.config.heartbeat_timeout
            ]
            for conn_id in stale:
                conn = self._conns.pop(conn_id)
                self._depart(conn)
                conn.close()
            return stale

    def _depart(self, conn: ConnectionRecord) -> None:
        if conn.room_id is None or conn.user_id is None:
            return
        binding = self._rooms.get(conn.room_id)
        if binding is None:
            return
        self._persist_scoreboard(conn.room_id, binding)
        before = binding.state
        binding.state, outbound, applied = session.member_leave(binding.state, conn.user_id)
        binding.user_conns.pop(conn.user_id, None)
        self._log_actions(conn.room_id, before, applied)
        self._deliver(binding, outbound)
        if not binding.state.members:
            self._rooms.pop(conn.room_id, None)
        conn.room_id = None
        conn.user_id = None

    # --- inbound --------------------------------------------------------

    def receive(self, conn_id: int, text: str | bytes) -> None:
        with self._lock:
            conn = self._conns.get(conn_id)
            if conn is None:
                return
            conn.last_heartbeat = self._clock()
            try:
                doc = wire.parse(text)
            except wire.MalformedMessage:
                self._violation(conn, {})
                return
            msg_type = doc["type"]
            if msg_type == "ping":
                conn.send(wire.pong())
            elif msg_type == "hello":
                self._hello(conn, doc)
            elif msg_type == "action":
                self._action(conn, doc)
            else:
                self._violation(conn, doc)

    def _violation(self, conn: ConnectionRecord, doc: dict) -> None:
        conn.violations += 1
        conn.send(wire.rejected(MALFORMED, doc.get("body")))
        if conn.violations >= MAX_VIOLATIONS:
            self._conns.pop(conn.conn_id, None)
            self._depart(conn)
            conn.close()

    def _hello(self, conn: ConnectionRecord, doc: dict) -> None:
        name = doc.get("name")
        room_id = doc.get("room")
        if not isinstance(name, str) or not name.strip() or not isinstance(room_id, str) or not room_id:
            self._violation(conn, doc)
            return
        if conn.room_id is not None:
            conn.send(wire.rejected(session.ALREADY_JOINED, {"room": room_id}))
            return
        binding = self._rooms.get(room_id)
        if binding is None:
            if len(self._rooms) >= self.config.max_rooms:
                conn.send(wire.rejected(MAX_ROOMS, {"room": room_id}))
                return
            binding = _RoomBinding(
                state=session.create_room(room_id, self.config.room_capacity),
                restore_points=self._load_scoreboard(room_id),
            )
            self._rooms[room_id] = binding
        binding.user_counter += 1
        user_id = f"u{binding.user_counter}"
        body = {
            "kind": "join",
            "name": name,
            "restored_points": binding.restore_points.get(name, 0),
        }
        before = binding.state
        binding.state, outbound, applied = session.handle(binding.state, user_id, body)
        if not applied:  # room full: the connection may retry another room
            binding.user_counter -= 1
            self._deliver_to_conn(conn, outbound, user_id)
            if not binding.state.members:
                self._rooms.pop(room_id, None)
            return
        conn.user_id = user_id
        conn.room_id = room_id
        binding.user_conns[user_id] = conn.conn_id
        self._log_actions(room_id, before, applied)
        self._deliver(binding, outbound)

    def _action(self, conn: ConnectionRecord, doc: dict) -> None:
        if conn.room_id is None or conn.user_id is None:
            conn.send(wire.rejected(NOT_JOINED, doc.get("body")))
            return
        body = doc.get("body")
        if not isinstance(body, dict):
            self._violation(conn, doc)
            return
        binding = self._rooms[conn.room_id]
        room_id = conn.room_id
        if body.get("kind") == "leave":
            self._persist_scoreboard(room_id, binding)
        before = binding.state
        binding.state, outbound, applied = session.handle(binding.state, conn.user_id, body)
        self._log_actions(room_id, before, applied)
        if applied and body.get("kind") == "leave":
            binding.user_conns.pop(conn.user_id, None)
            conn.user_id = None
            conn.room_id = None
        self._deliver(binding, outbound)
        if any(msg["type"] == "score_update" for _, msg in outbound):
            self._persist_scoreboard(room_id, binding)
        if not binding.state.members:
            self._rooms.pop(room_id, None)

    # --- outbound -------------------------------------------------------

    def _deliver(self, binding: _RoomBinding, outbound: session.Outbound) -> None:
        for recipients, msg in outbound:
            for user_id in recipients:
                conn_id = binding.user_conns.get(user_id)
                conn = self._conns.get(conn_id) if conn_id is not None else None
                if conn is not None:
                    conn.send(msg)

    def _deliver_to_conn(
        self, conn: ConnectionRecord, outbound: session.Outbound, user_id: str
    ) -> None:
        for recipients, msg in outbound:
            if user_id in recipients:
                conn.send(msg)

    # --- persistence and logs --------------------------------------------

    def _scoreboard_path(self, room_id: str) -> Path | None:
        if self.config.scoreboard_dir is None:
            return None
        return Path(self.config.scoreboard_dir) / f"{room_id}.json"

    def _load_scoreboard(self, room_id: str) -> dict[str, int]:
        path = self._scoreboard_path(room_id)
        if path is None or not path.exists():
            return {}
        try:
            doc = json.loads(path.read_text("utf-8"))
            points = doc["points"]
            return {str(name): int(p) for name, p in points.items()}
        except (ValueError, TypeError, KeyError) as exc:
            logger.warning("corrupt scoreboard file %s: %s", path, exc)
            return {}

    def _persist_scoreboard(self, room_id: str, binding: _RoomBinding) -> None:
        path = self._scoreboard_path(room_id)
        if path is None:
            return
        names = {m.user_id: m.name for m in binding.state.members}
        merged = dict(self._load_scoreboard(room_id))
        for user_id, points in binding.state.scoreboard.items():
            name = names.get(user_id)
            if name is None:
                continue  # departed members were flushed when they left
            merged[name] = max(merged.get(name, 0), points)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(
                wire.encode({"type": "scoreboard", "v": wire.PROTOCOL_VERSION,
                             "room": room_id, "points": merged}),
                "utf-8",
            )
        except OSError as exc:
            logger.warning("could not persist scoreboard for %s: %s", room_id, exc)
        binding.restore_points = merged

    def _log_actions(self, room_id: str, before: RoomState, applied: list[dict]) -> None:
        if self.config.action_log_dir is None or not applied:
            return
        path = Path(self.config.action_log_dir) / f"{room_id}.log"
        state = before
        lines = []
        for action in applied:
            state = session.apply_action(state, action)
            lines.append(
                wire.encode(
                    {
                        "type": "action_applied",
                        "v": wire.PROTOCOL_VERSION,
                        "room": room_id,
                        "action": action,
                        "digest": session.state_digest(state),
                    }
                )
            )
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with path.open("a", encoding="utf-8") as fh:
                fh.write("\n".join(lines) + "\n")
        except OSError as exc:
            logger.warning("could not append action log for %s: %s", room_id, exc)

    # --- introspection (tests, tooling) -----------------------------------

    def room_state(self, room_id: str) -> RoomState | None:
        with self._lock:
            binding = self._rooms.get(room_id)
            return binding.state if binding else None

    def room_ids(self) -> list[str]:
        with self._lock:
            return list(self._rooms)

    def connection_count(self) -> int:
        with self._lock:
            return len(self._conns)
