"""End-to-end websocket transport: real frames through the ASGI app."""

from __future__ import annotations

import json

import pytest
from starlette.testclient import TestClient

from sortlab import session, wire
from sortlab.errors import BindFailure
from sortlab.hub import Hub, ServerConfig
from sortlab.server import bind_socket, build_app


@pytest.fixture
def config(tmp_path):
    return ServerConfig(
        heartbeat_interval=1,
        heartbeat_timeout=5,
        scoreboard_dir=str(tmp_path / "scores"),
    )


@pytest.fixture
def hub(config):
    return Hub(config)


@pytest.fixture
def client(hub):
    with TestClient(build_app(hub)) as client:
        yield client


def send(ws, doc):
    ws.send_text(wire.encode(doc))


def recv(ws):
    return json.loads(ws.receive_text())


def recv_until(ws, msg_type):
    while True:
        doc = recv(ws)
        if doc["type"] == msg_type:
            return doc


class TestWebsocketProtocol:
    def test_hello_welcome_round_trip(self, client):
        with client.websocket_connect("/ws") as ws:
            send(ws, wire.hello("alice", "r1"))
            welcome = recv(ws)
            assert welcome["type"] == "welcome"
            assert welcome["snapshot"]["controller"] == welcome["user_id"]

    def test_two_clients_share_actions(self, client, hub):
        with client.websocket_connect("/ws") as a, client.websocket_connect("/ws") as b:
            send(a, wire.hello("alice", "r1"))
            recv_until(a, "welcome")
            send(b, wire.hello("bob", "r1"))
            recv_until(b, "welcome")
            recv_until(a, "room_event")

            send(a, wire.action_request(
                {"kind": "enter_detail", "algorithm": "bubble",
                 "arrangement": {"kind": "reversed"}, "size": 4}))
            action_a = recv_until(a, "action_applied")["action"]
            action_b = recv_until(b, "action_applied")["action"]
            assert action_a == action_b
            assert action_a["body"]["kind"] == "enter_detail"
            assert action_a["body"]["trace"]["initial"] == [4, 3, 2, 1]

    def test_non_controller_rejected_over_wire(self, client):
        with client.websocket_connect("/ws") as a, client.websocket_connect("/ws") as b:
            send(a, wire.hello("alice", "r1"))
            recv_until(a, "welcome")
            send(b, wire.hello("bob", "r1"))
            recv_until(b, "welcome")
            send(b, wire.action_request({"kind": "step_forward"}))
            rejection = recv_until(b, "rejected")
            assert rejection["reason"] == session.NOT_CONTROLLER

    def test_ping_pong(self, client):
        with client.websocket_connect("/ws") as ws:
            send(ws, wire.ping())
            assert recv(ws)["type"] == "pong"

    def test_disconnect_triggers_leave(self, client, hub):
        with client.websocket_connect("/ws") as a:
            send(a, wire.hello("alice", "r1"))
            recv_until(a, "welcome")
            with client.websocket_connect("/ws") as b:
                send(b, wire.hello("bob", "r1"))
                recv_until(b, "welcome")
                joined = recv_until(a, "room_event")
                assert joined["event"] == "joined"
            # context exit closed bob's socket
            left = recv_until(a, "room_event")
            assert left["event"] == "left"
        assert hub.room_ids() == []  # alice's close destroyed the room


class TestStaticUi:
    def test_serves_bundle_when_configured(self, tmp_path, config):
        ui = tmp_path / "ui"
        ui.mkdir()
        (ui / "index.html").write_text("<html><body>sortlab</body></html>")
        (ui / "app.js").write_text("console.log('hi')")
        app = build_app(Hub(config), ui_dir=str(ui))
        with TestClient(app) as client:
            assert "sortlab" in client.get("/").text
            assert client.get("/app.js").status_code == 200
            # websocket still reachable alongside the mount
            with client.websocket_connect("/ws") as ws:
                send(ws, wire.ping())
                assert recv(ws)["type"] == "pong"


class TestBindFailure:
    def test_occupied_port(self, config):
        first = bind_socket(config_with_port(config, 0))
        taken = first.getsockname()[1]
        with pytest.raises(BindFailure):
            bind_socket(config_with_port(config, taken))
        first.close()


def config_with_port(config: ServerConfig, port: int) -> ServerConfig:
    return ServerConfig(
        bind=config.bind,
        port=port,
        max_rooms=config.max_rooms,
        room_capacity=config.room_capacity,
        heartbeat_interval=config.heartbeat_interval,
        heartbeat_timeout=config.heartbeat_timeout,
        scoreboard_dir=config.scoreboard_dir,
    )
