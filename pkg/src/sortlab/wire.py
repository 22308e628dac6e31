"""Wire message documents.

Every message is one JSON object per transport frame, UTF-8, with a
"type" tag and a "v" version field. Consumers ignore unknown fields.
Client to server: hello, action, ping. Server to client: welcome,
action_applied, rejected, control_requested, room_event, score_update,
pong. See docs/protocol.md for the full grammar with examples.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

PROTOCOL_VERSION = 1

CLIENT_TYPES = frozenset({"hello", "action", "ping"})
SERVER_TYPES = frozenset(
    {
        "welcome",
        "action_applied",
        "rejected",
        "control_requested",
        "room_event",
        "score_update",
        "pong",
    }
)


class MalformedMessage(ValueError):
    pass


def _msg(msg_type: str, **fields: Any) -> dict:
    doc = {"type": msg_type, "v": PROTOCOL_VERSION}
    doc.update(fields)
    return doc


# client -> server

def hello(name: str, room_id: str) -> dict:
    return _msg("hello", name=name, room=room_id)


def action_request(body: Mapping) -> dict:
    return _msg("action", body=dict(body))


def ping() -> dict:
    return _msg("ping")


# server -> client

def welcome(user_id: str, snapshot_doc: Mapping, catalog: list[dict]) -> dict:
    return _msg("welcome", user_id=user_id, snapshot=dict(snapshot_doc), catalog=catalog)


def action_applied(action: Mapping) -> dict:
    return _msg("action_applied", action=dict(action))


def rejected(reason: str, body: Mapping | None = None) -> dict:
    return _msg("rejected", reason=reason, body=dict(body) if body else {})


def control_requested(by: str) -> dict:
    return _msg("control_requested", by=by)


def room_event(event: str, user_id: str, name: str) -> dict:
    return _msg("room_event", event=event, user_id=user_id, name=name)


def score_update(scoreboard: Mapping[str, int]) -> dict:
    return _msg("score_update", scoreboard=dict(scoreboard))


def pong() -> dict:
    return _msg("pong")


def encode(doc: Mapping) -> str:
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=False)


def parse(text: str | bytes) -> dict:
    """Parse and shape-check one inbound frame; unknown fields survive."""
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedMessage(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedMessage("message must be a JSON object")
    msg_type = doc.get("type")
    if not isinstance(msg_type, str):
        raise MalformedMessage("missing type tag")
    if not isinstance(doc.get("v"), int):
        raise MalformedMessage("missing protocol version")
    return doc
