#!/usr/bin/env python3
"""Scripted three-member session against an in-process hub.

Shows the collaboration protocol without any network: alice creates the
room and drives a detail run, bob and carol guess in a battle, alice
disconnects and control passes on. Prints the message flow per client
and verifies that all replicas converge to the server's state digest.

Usage: python scripts/simulate_room.py
"""

from __future__ import annotations

from sortlab import session, wire
from sortlab.hub import Hub, ServerConfig


class Client:
    def __init__(self, hub: Hub, label: str):
        self.hub = hub
        self.label = label
        self.inbox: list[dict] = []
        self.replica: session.RoomState | None = None
        self.conn_id = hub.connect(self._receive, lambda: None)

    def _receive(self, doc: dict) -> None:
        self.inbox.append(doc)
        if doc["type"] == "welcome":
            self.replica = session.restore(doc["snapshot"])
        elif doc["type"] == "action_applied" and self.replica is not None:
            action = doc["action"]
            if action["seq"] > self.replica.log_seq:
                self.replica = session.apply_action(self.replica, action)
        body = doc.get("action", {}).get("body", {})
        detail = body.get("kind") or doc.get("reason") or doc.get("event") or ""
        print(f"  -> {self.label:<6} {doc['type']:<17} {detail}")

    def send(self, doc: dict) -> None:
        print(f"{self.label} sends {doc['type']}: {doc.get('body', {}).get('kind', '')}")
        self.hub.receive(self.conn_id, wire.encode(doc))


def main() -> None:
    hub = Hub(ServerConfig(heartbeat_interval=5, heartbeat_timeout=15))
    alice, bob, carol = (Client(hub, n) for n in ("alice", "bob", "carol"))

    for client in (alice, bob, carol):
        client.send(wire.hello(client.label, "demo"))

    alice.send(wire.action_request(
        {"kind": "enter_detail", "algorithm": "insertion",
         "arrangement": {"kind": "random", "seed": 3}, "size": 6}))
    for _ in range(4):
        alice.send(wire.action_request({"kind": "step_forward"}))

    bob.send(wire.action_request({"kind": "request_control"}))
    alice.send(wire.action_request(
        {"kind": "enter_battle",
         "config": {"left": "insertion", "right": "merge",
                    "arrangement": {"kind": "sorted"}, "size": 100}}))
    bob.send(wire.action_request({"kind": "submit_guess", "side": "left"}))
    carol.send(wire.action_request({"kind": "submit_guess", "side": "right"}))
    alice.send(wire.action_request({"kind": "start_race"}))
    alice.send(wire.action_request({"kind": "advance_race", "ticks": 10**9}))

    print("\nalice disconnects (controller hand-off)")
    hub.disconnect(alice.conn_id)

    state = hub.room_state("demo")
    print(f"\nscoreboard: {dict(state.scoreboard)}")
    print(f"controller: {state.controller}")
    digest = session.state_digest(state)
    print(f"server digest  {digest}")
    for client in (bob, carol):
        assert client.replica is not None
        replica_digest = session.state_digest(client.replica)
        marker = "ok" if replica_digest == digest else "DIVERGED"
        print(f"{client.label} replica  {replica_digest}  {marker}")


if __name__ == "__main__":
    main()
