"""Hub behavior with fake connections: routing, reaping, persistence."""

from __future__ import annotations

import json

import pytest

from sortlab import session, wire
from sortlab.hub import Hub, ServerConfig


class FakeClient:
    def __init__(self, hub: Hub):
        self.hub = hub
        self.inbox: list[dict] = []
        self.closed = False
        self.conn_id = hub.connect(self.inbox.append, self._close)

    def _close(self):
        self.closed = True

    def send(self, doc: dict):
        self.hub.receive(self.conn_id, wire.encode(doc))

    def hello(self, name: str, room: str):
        self.send(wire.hello(name, room))

    def action(self, body: dict):
        self.send(wire.action_request(body))

    def of_type(self, msg_type: str) -> list[dict]:
        return [m for m in self.inbox if m["type"] == msg_type]

    @property
    def user_id(self) -> str:
        return self.of_type("welcome")[0]["user_id"]


class Clock:
    def __init__(self):
        self.now = 0.0

    def __call__(self) -> float:
        return self.now


@pytest.fixture
def clock():
    return Clock()


@pytest.fixture
def hub(tmp_path, clock):
    config = ServerConfig(
        heartbeat_interval=5,
        heartbeat_timeout=15,
        scoreboard_dir=str(tmp_path / "scores"),
        action_log_dir=str(tmp_path / "logs"),
    )
    return Hub(config, clock=clock)


class TestHello:
    def test_first_hello_creates_room_and_controls(self, hub):
        alice = FakeClient(hub)
        alice.hello("alice", "r1")
        welcome = alice.of_type("welcome")[0]
        assert welcome["user_id"] == "u1"
        assert welcome["snapshot"]["controller"] == "u1"
        assert hub.room_ids() == ["r1"]

    def test_second_hello_joins(self, hub):
        alice, bob = FakeClient(hub), FakeClient(hub)
        alice.hello("alice", "r1")
        bob.hello("bob", "r1")
        snap = bob.of_type("welcome")[0]["snapshot"]
        assert [m[1] for m in snap["members"]] == ["alice", "bob"]
        assert snap["controller"] == "u1"
        assert [e["user_id"] for e in alice.of_type("room_event")] == ["u2"]
        assert alice.of_type("action_applied")[0]["action"]["body"]["kind"] == "join"

    def test_full_room_rejected_but_conn_usable(self, tmp_path, clock):
        hub = Hub(ServerConfig(room_capacity=1, heartbeat_interval=1, heartbeat_timeout=5), clock)
        alice, bob = FakeClient(hub), FakeClient(hub)
        alice.hello("alice", "r1")
        bob.hello("bob", "r1")
        assert bob.of_type("rejected")[0]["reason"] == session.ROOM_FULL
        bob.hello("bob", "r2")
        assert bob.of_type("welcome")[0]["snapshot"]["room_id"] == "r2"

    def test_max_rooms(self, tmp_path, clock):
        hub = Hub(ServerConfig(max_rooms=1, heartbeat_interval=1, heartbeat_timeout=5), clock)
        alice, bob = FakeClient(hub), FakeClient(hub)
        alice.hello("alice", "r1")
        bob.hello("bob", "r2")
        assert bob.of_type("rejected")[0]["reason"] == "max_rooms"

    def test_double_hello_rejected(self, hub):
        alice = FakeClient(hub)
        alice.hello("alice", "r1")
        alice.hello("alice", "r2")
        assert alice.of_type("rejected")[0]["reason"] == session.ALREADY_JOINED

    def test_blank_name_is_violation(self, hub):
        alice = FakeClient(hub)
        alice.hello("   ", "r1")
        assert alice.of_type("rejected")[0]["reason"] == "malformed"


class TestRouting:
    def test_action_broadcast_in_seq_order(self, hub):
        alice, bob = FakeClient(hub), FakeClient(hub)
        alice.hello("alice", "r1")
        bob.hello("bob", "r1")
        alice.action(
            {"kind": "enter_detail", "algorithm": "insertion",
             "arrangement": {"kind": "random", "seed": 1}, "size": 6}
        )
        for _ in range(3):
            alice.action({"kind": "step_forward"})
        for client in (alice, bob):
            seqs = [m["action"]["seq"] for m in client.of_type("action_applied")]
            assert seqs == sorted(seqs)
            assert seqs[-1] == 6  # 2 joins + enter + 3 steps
        assert hub.room_state("r1").view.position == 3

    def test_action_without_hello(self, hub):
        ghost = FakeClient(hub)
        ghost.action({"kind": "step_forward"})
        assert ghost.of_type("rejected")[0]["reason"] == "not_joined"

    def test_ping_pong(self, hub):
        c = FakeClient(hub)
        c.send(wire.ping())
        assert c.of_type("pong")

    def test_rejection_goes_to_sender_only(self, hub):
        alice, bob = FakeClient(hub), FakeClient(hub)
        alice.hello("alice", "r1")
        bob.hello("bob", "r1")
        bob.action({"kind": "step_forward"})
        assert bob.of_type("rejected")[0]["reason"] == session.NOT_CONTROLLER
        assert not alice.of_type("rejected")

    def test_room_isolation(self, hub):
        a1, a2, b1 = FakeClient(hub), FakeClient(hub), FakeClient(hub)
        a1.hello("ann", "A")
        a2.hello("amy", "A")
        b1.hello("ben", "B")
        before = len(b1.inbox)
        a1.action(
            {"kind": "enter_detail", "algorithm": "bubble",
             "arrangement": {"kind": "sorted"}, "size": 4}
        )
        assert len(b1.inbox) == before
        assert a2.of_type("action_applied")[-1]["action"]["body"]["kind"] == "enter_detail"

    def test_voluntary_leave_frees_connection(self, hub):
        alice, bob = FakeClient(hub), FakeClient(hub)
        alice.hello("alice", "r1")
        bob.hello("bob", "r1")
        bob.action({"kind": "leave"})
        assert hub.room_state("r1").member_ids() == ("u1",)
        bob.hello("bob", "r1")
        assert len(bob.of_type("welcome")) == 2

    def test_malformed_frames_close_after_three(self, hub):
        c = FakeClient(hub)
        for _ in range(3):
            self_hub_garbage = "{not json"
            hub.receive(c.conn_id, self_hub_garbage)
        assert len(c.of_type("rejected")) == 3
        assert c.closed
        assert hub.connection_count() == 0


class TestReap:
    def test_silent_connection_reaped_with_succession(self, hub, clock):
        alice, bob = FakeClient(hub), FakeClient(hub)
        alice.hello("alice", "r1")
        bob.hello("bob", "r1")
        clock.now = 16.0
        bob.send(wire.ping())  # bob stays fresh
        closed = hub.reap()
        assert closed == [alice.conn_id]
        assert alice.closed and not bob.closed
        state = hub.room_state("r1")
        assert state.member_ids() == ("u2",)
        assert state.controller == "u2"
        kinds = [m["action"]["body"]["kind"] for m in bob.of_type("action_applied")]
        assert kinds[-2:] == ["leave", "grant_control"]

    def test_active_connection_untouched(self, hub, clock):
        alice = FakeClient(hub)
        alice.hello("alice", "r1")
        clock.now = 10.0
        assert hub.reap() == []
        assert not alice.closed

    def test_last_member_reaped_destroys_room(self, hub, clock, tmp_path):
        alice = FakeClient(hub)
        alice.hello("alice", "r1")
        clock.now = 100.0
        hub.reap()
        assert hub.room_ids() == []
        assert (tmp_path / "scores" / "r1.json").exists()


def play_winning_guess(hub, controller: FakeClient, guesser: FakeClient):
    controller.action(
        {"kind": "enter_battle",
         "config": {"left": "insertion", "right": "merge",
                    "arrangement": {"kind": "sorted"}, "size": 100}}
    )
    guesser.action({"kind": "submit_guess", "side": "left"})
    controller.action({"kind": "start_race"})
    controller.action({"kind": "advance_race", "ticks": 10**9})


class TestPersistence:
    def test_scoreboard_round_trip(self, hub, tmp_path):
        alice, bob = FakeClient(hub), FakeClient(hub)
        alice.hello("alice", "r1")
        bob.hello("bob", "r1")
        play_winning_guess(hub, alice, bob)
        assert bob.of_type("score_update")[0]["scoreboard"] == {"u2": 1}
        path = tmp_path / "scores" / "r1.json"
        doc = json.loads(path.read_text())
        assert doc["points"] == {"bob": 1}

    def test_returning_name_restores_points(self, hub):
        alice, bob = FakeClient(hub), FakeClient(hub)
        alice.hello("alice", "r1")
        bob.hello("bob", "r1")
        play_winning_guess(hub, alice, bob)
        bob.action({"kind": "leave"})
        bob2 = FakeClient(hub)
        bob2.hello("bob", "r1")
        state = hub.room_state("r1")
        assert state.scoreboard[bob2.user_id] == 1

    def test_points_survive_room_destruction(self, hub, clock):
        alice, bob = FakeClient(hub), FakeClient(hub)
        alice.hello("alice", "r1")
        bob.hello("bob", "r1")
        play_winning_guess(hub, alice, bob)
        clock.now = 1000.0
        hub.reap()
        assert hub.room_ids() == []
        carol = FakeClient(hub)
        carol.hello("bob", "r1")  # same display name returns
        state = hub.room_state("r1")
        assert state.scoreboard == {"u1": 1}

    def test_missing_file_means_empty(self, hub):
        alice = FakeClient(hub)
        alice.hello("alice", "fresh-room")
        assert hub.room_state("fresh-room").scoreboard == {}

    def test_corrupt_file_means_empty_with_warning(self, hub, tmp_path, caplog):
        scores = tmp_path / "scores"
        scores.mkdir(parents=True, exist_ok=True)
        (scores / "bad.json").write_text("{broken")
        alice = FakeClient(hub)
        with caplog.at_level("WARNING"):
            alice.hello("alice", "bad")
        assert hub.room_state("bad").scoreboard == {}
        assert any("corrupt scoreboard" in r.message for r in caplog.records)

    def test_never_read_back_lower_than_flushed(self, hub, tmp_path):
        alice, bob = FakeClient(hub), FakeClient(hub)
        alice.hello("alice", "r1")
        bob.hello("bob", "r1")
        play_winning_guess(hub, alice, bob)
        path = tmp_path / "scores" / "r1.json"
        first = json.loads(path.read_text())["points"]["bob"]
        play_winning_guess(hub, alice, bob)
        second = json.loads(path.read_text())["points"]["bob"]
        assert second >= first >= 1


class TestActionLog:
    def test_log_replays_to_matching_digests(self, hub, tmp_path):
        alice, bob = FakeClient(hub), FakeClient(hub)
        alice.hello("alice", "r1")
        bob.hello("bob", "r1")
        play_winning_guess(hub, alice, bob)
        bob.action({"kind": "leave"})
        lines = (tmp_path / "logs" / "r1.log").read_text().splitlines()
        room = session.create_room("r1")
        for line in lines:
            record = json.loads(line)
            room = session.apply_action(room, record["action"])
            assert session.state_digest(room) == record["digest"]
        assert session.state_digest(room) == session.state_digest(hub.room_state("r1"))
