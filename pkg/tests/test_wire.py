"""Wire frame grammar: tagging, versioning, tolerance, rejection."""

from __future__ import annotations

import pytest

from sortlab import wire


class TestFrames:
    def test_every_message_is_tagged_and_versioned(self):
        docs = [
            wire.hello("alice", "r1"),
            wire.action_request({"kind": "step_forward"}),
            wire.ping(),
            wire.welcome("u1", {"room_id": "r1"}, []),
            wire.action_applied({"seq": 1, "actor": "u1", "body": {"kind": "join"}}),
            wire.rejected("not_controller", {"kind": "seek"}),
            wire.control_requested("u2"),
            wire.room_event("joined", "u2", "bob"),
            wire.score_update({"u1": 3}),
            wire.pong(),
        ]
        for doc in docs:
            assert doc["v"] == 1
            assert doc["type"] in wire.CLIENT_TYPES | wire.SERVER_TYPES

    def test_encode_parse_round_trip(self):
        doc = wire.action_request({"kind": "seek", "position": 4})
        assert wire.parse(wire.encode(doc)) == doc

    def test_unknown_fields_survive(self):
        parsed = wire.parse('{"type":"ping","v":1,"future_field":[1,2,3]}')
        assert parsed["future_field"] == [1, 2, 3]

    def test_unicode_names(self):
        doc = wire.hello("Øyvind 学生", "r1")
        assert wire.parse(wire.encode(doc))["name"] == "Øyvind 学生"

    @pytest.mark.parametrize(
        "frame",
        [
            "not json",
            "[1,2,3]",
            '"just a string"',
            '{"v":1}',
            '{"type":"ping"}',
            '{"type":7,"v":1}',
            '{"type":"ping","v":"one"}',
        ],
    )
    def test_malformed_frames_rejected(self, frame):
        with pytest.raises(wire.MalformedMessage):
            wire.parse(frame)
