"""CLI contract: output formats, exit codes, determinism, replay."""

from __future__ import annotations

import json
import socket
import subprocess
import sys
import time
from pathlib import Path

import pytest

from sortlab import wire
from sortlab.cli import main
from sortlab.hub import Hub, ServerConfig

GOLDEN = Path(__file__).parent / "golden"


def run_cli(*argv: str, capsys) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestTraceCommand:
    def test_bubble_machine_format(self, capsys):
        code, out, _ = run_cli("trace", "--algo", "bubble", "--input", "2,1",
                               "--format", "lines", capsys=capsys)
        assert code == 0
        assert out == "bubble 2 2 1\n0 compare 0,1,G 5 1\n1 swap 0,1 6 2\n"

    def test_singleton_header_only(self, capsys):
        code, out, _ = run_cli("trace", "--algo", "insertion", "--input", "1",
                               "--format", "lines", capsys=capsys)
        assert code == 0
        assert out == "insertion 1 1\n"

    def test_unknown_algorithm_names_flag(self, capsys):
        code, _, err = run_cli("trace", "--algo", "nosuch", capsys=capsys)
        assert code == 2
        assert "--algo" in err and "unknown algorithm" in err

    def test_bad_input_names_flag(self, capsys):
        code, _, err = run_cli("trace", "--algo", "bubble", "--input", "1,1", capsys=capsys)
        assert code == 2
        assert "--input" in err

    def test_text_format_shows_pseudo_code(self, capsys):
        code, out, _ = run_cli("trace", "--algo", "bubble", "--input", "2,1", capsys=capsys)
        assert code == 0
        assert "swap A[i] and A[i + 1]" in out

    def test_seeded_default_is_deterministic(self, capsys):
        a = run_cli("trace", "--algo", "quick", "--seed", "9", "--format", "lines", capsys=capsys)
        b = run_cli("trace", "--algo", "quick", "--seed", "9", "--format", "lines", capsys=capsys)
        assert a == b and a[0] == 0


class TestGoldenDumps:
    @pytest.mark.parametrize("path", sorted(GOLDEN.glob("*.txt")), ids=lambda p: p.stem)
    def test_regenerated_trace_matches_golden(self, path, capsys):
        header = path.read_text("utf-8").splitlines()[0].split(" ")
        algo, values = header[0], ",".join(header[2:])
        args = ["trace", "--algo", algo, "--format", "lines"]
        if values:
            args += ["--input", values]
        else:
            args += ["--size", "0"]
        code, out, _ = run_cli(*args, capsys=capsys)
        assert code == 0
        assert out == path.read_text("utf-8")

    def test_fixture_set_is_complete(self):
        assert len(list(GOLDEN.glob("*.txt"))) == 18  # 9 algorithms x 2 inputs


class TestBattleCommand:
    def test_sorted_battle_winner(self, capsys):
        code, out, _ = run_cli("battle", "--left", "insertion", "--right", "merge",
                               "--arrangement", "sorted", "--size", "100", capsys=capsys)
        assert code == 0
        assert "winner: left" in out
        assert "insertion (cost 99)" in out

    def test_mirror_match_draws(self, capsys):
        code, out, _ = run_cli("battle", "--left", "merge", "--right", "merge",
                               "--arrangement", "reversed", capsys=capsys)
        assert code == 0
        assert "winner: draw" in out

    def test_deterministic_with_seed(self, capsys):
        args = ("battle", "--left", "merge", "--right", "radix",
                "--arrangement", "random", "--seed", "7")
        assert run_cli(*args, capsys=capsys) == run_cli(*args, capsys=capsys)

    def test_out_document(self, tmp_path, capsys):
        out_file = tmp_path / "result.json"
        code, _, _ = run_cli("battle", "--left", "bubble", "--right", "heap",
                             "--arrangement", "random", "--seed", "3", "--size", "16",
                             "--out", str(out_file), capsys=capsys)
        assert code == 0
        doc = json.loads(out_file.read_text())
        assert doc["type"] == "battle_result" and doc["v"] == 1
        assert doc["winner"] in ("left", "right", "draw")
        assert len(doc["input"]) == 16
        assert doc["timeline"]

    def test_usage_errors(self, capsys):
        code, _, err = run_cli("battle", "--left", "nosuch", "--right", "merge", capsys=capsys)
        assert code == 2 and "--left" in err
        code, _, err = run_cli("battle", "--left", "merge", "--right", "merge",
                               "--size", "1", capsys=capsys)
        assert code == 2 and "--size" in err


class TestTasksCommand:
    def test_three_battles_third_sorted(self, capsys):
        code, out, _ = run_cli("tasks", capsys=capsys)
        assert code == 0
        rows = [line for line in out.splitlines() if line and line.split()[0] in ("merge", "insertion")]
        assert len(rows) == 3
        assert rows[0].startswith("merge") and "insertion" in rows[0]
        assert rows[1].startswith("merge") and "radix" in rows[1]
        assert rows[2].startswith("insertion") and "sorted" in rows[2]
        assert rows[2].split()[-1] == "insertion"  # sorted input favors insertion

    def test_repeatable(self, capsys):
        assert run_cli("tasks", "--seed", "5", capsys=capsys) == run_cli(
            "tasks", "--seed", "5", capsys=capsys
        )


@pytest.fixture
def server_log(tmp_path):
    """Drive a hub session with action logging and return the log path."""
    config = ServerConfig(
        heartbeat_interval=1, heartbeat_timeout=5, action_log_dir=str(tmp_path / "logs")
    )
    hub = Hub(config)
    sent: list[dict] = []
    a = hub.connect(sent.append, lambda: None)
    b = hub.connect(sent.append, lambda: None)
    hub.receive(a, wire.encode(wire.hello("alice", "room9")))
    hub.receive(b, wire.encode(wire.hello("bob", "room9")))
    hub.receive(a, wire.encode(wire.action_request(
        {"kind": "enter_detail", "algorithm": "shell",
         "arrangement": {"kind": "random", "seed": 2}, "size": 8})))
    for _ in range(4):
        hub.receive(a, wire.encode(wire.action_request({"kind": "step_forward"})))
    hub.receive(b, wire.encode(wire.action_request({"kind": "request_control"})))
    hub.receive(a, wire.encode(wire.action_request({"kind": "grant_control", "to": "u2"})))
    hub.disconnect(b)
    return tmp_path / "logs" / "room9.log"


class TestReplayCommand:
    def test_server_log_verifies(self, server_log, capsys):
        code, out, _ = run_cli("replay", "--log", str(server_log), "--verify", capsys=capsys)
        assert code == 0
        assert "replayed" in out

    def test_tampered_payload_detected(self, server_log, capsys):
        lines = server_log.read_text().splitlines()
        record = json.loads(lines[4])
        record["action"]["body"]["kind"] = "step_backward"
        lines[4] = wire.encode(record)
        tampered = server_log.with_name("tampered.log")
        tampered.write_text("\n".join(lines) + "\n")
        code, out, _ = run_cli("replay", "--log", str(tampered), "--verify", capsys=capsys)
        assert code == 1
        assert f"divergence at seq {record['action']['seq']}" in out

    def test_empty_log(self, tmp_path, capsys):
        empty = tmp_path / "empty.log"
        empty.write_text("")
        code, out, _ = run_cli("replay", "--log", str(empty), "--verify", capsys=capsys)
        assert code == 0
        assert "fresh room digest" in out

    def test_garbage_log(self, tmp_path, capsys):
        bad = tmp_path / "bad.log"
        bad.write_text("this is not json\n")
        code, _, err = run_cli("replay", "--log", str(bad), capsys=capsys)
        assert code == 2
        assert "malformed" in err

    def test_missing_file(self, capsys):
        code, _, err = run_cli("replay", "--log", "/nonexistent/x.log", capsys=capsys)
        assert code == 2


class TestServeCommand:
    def test_ephemeral_port_prints_address(self):
        proc = subprocess.Popen(
            [sys.executable, "-m", "sortlab.cli", "serve", "--port", "0"],
            stdout=subprocess.PIPE, stderr=subprocess.STDOUT, text=True,
        )
        try:
            line = proc.stdout.readline()
            assert "listening on 127.0.0.1:" in line
        finally:
            proc.terminate()
            proc.wait(timeout=10)

    def test_occupied_port_exits_one(self):
        blocker = socket.create_server(("127.0.0.1", 0))
        port = blocker.getsockname()[1]
        try:
            proc = subprocess.run(
                [sys.executable, "-m", "sortlab.cli", "serve", "--port", str(port)],
                capture_output=True, text=True, timeout=30,
            )
            assert proc.returncode == 1
            assert "cannot bind" in proc.stderr
        finally:
            blocker.close()

    def test_bad_ui_dir(self, capsys):
        code, _, err = run_cli("serve", "--ui-dir", "/nonexistent/ui", capsys=capsys)
        assert code == 2
        assert "--ui-dir" in err
