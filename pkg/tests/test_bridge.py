"""Tests for the external-policy wire protocol and bridge sessions."""

import asyncio
import shlex
import sys

import numpy as np
import pytest

from src.evaluation import NavigationEnv, RunSpec, plan_jobs, run_episode, serve_bridge
from src.metrics import EpisodeCause
from src.policy import ProtocolViolation, StraightPolicy
from src.policy.bridge import (
    EchoResponder,
    SubprocessTransport,
    act_message,
    bridge_session,
    decode_message,
    decode_observation,
    encode_message,
    encode_observation,
    memory_pair,
    open_tcp,
    parse_action,
    serve_transport,
)
from src.policy.bridge.transport import STREAM_LIMIT
from src.sim import Action


class TestProtocol:

    def test_observation_survives_the_wire(self):
        tensor = np.arange(3 * 4 * 5, dtype=np.uint8).reshape(3, 4, 5) % 7
        assert np.array_equal(decode_observation(encode_observation(tensor)), tensor)

    def test_observation_must_be_uint8(self):
        with pytest.raises(ValueError):
            encode_observation(np.zeros((3, 4, 5), dtype=np.int32))

    def test_truncated_observation(self):
        payload = encode_observation(np.zeros((3, 4, 5), dtype=np.uint8))
        with pytest.raises(ProtocolViolation):
            decode_observation(payload[:-8])

    def test_messages_are_canonical(self):
        line = encode_message({"type": "act", "kind": "noop", "alpha_sign": 0})
        assert line == b'{"alpha_sign":0,"kind":"noop","type":"act"}\n'
        assert decode_message(line)["kind"] == "noop"

    @pytest.mark.parametrize("line", [b"", b"{oops\n", b"[1, 2]\n", b'{"kind": "noop"}\n'])
    def test_bad_lines(self, line):
        with pytest.raises(ProtocolViolation):
            decode_message(line)

    def test_parse_actions(self):
        assert parse_action(act_message(Action.noop()), 35.0) == Action.noop()
        assert parse_action({"type": "act", "kind": "turn", "alpha_sign": -1}, 35.0) == Action.turn(-35.0)

    @pytest.mark.parametrize("message", [
        {"type": "obs"},
        {"type": "act", "kind": "jump", "alpha_sign": 0},
        {"type": "act", "kind": "turn", "alpha_sign": 0},
        {"type": "act", "kind": "noop", "alpha_sign": 1},
        {"type": "act", "kind": "turn", "alpha_sign": True},
    ])
    def test_invalid_actions(self, message):
        with pytest.raises(ProtocolViolation):
            parse_action(message, 35.0)


class TestEchoResponder:

    def test_replies_noop_until_done(self):
        responder = EchoResponder()
        assert responder.respond({"type": "reset"}) == act_message(Action.noop())
        assert responder.respond({"type": "obs", "done": False}) == act_message(Action.noop())
        assert responder.respond({"type": "obs", "done": True}) is None
        assert responder.episodes == 1

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            EchoResponder("random")


def _bridge_env(config, settings) -> NavigationEnv:
    return NavigationEnv(config, seed=3, settings=settings, needs_observation=True, needs_privileged=False)


class TestSession:

    @pytest.mark.asyncio
    async def test_matches_in_process_policy(self, straight_road, settings):
        sim_side, policy_side = memory_pair()
        peer = asyncio.create_task(serve_transport(policy_side, EchoResponder()))
        record = await bridge_session(sim_side, _bridge_env(straight_road, settings), timeout=5.0)
        await sim_side.close()
        assert await peer == 1

        expected = run_episode(NavigationEnv(straight_road, seed=3, settings=settings), StraightPolicy())
        assert record.cause == expected.cause == EpisodeCause.SUCCESS
        assert record.steps == expected.steps
        assert record.path_length == expected.path_length

    @pytest.mark.asyncio
    async def test_invalid_reply_aborts(self, straight_road, settings):
        sim_side, policy_side = memory_pair()
        peer = asyncio.create_task(serve_transport(policy_side, EchoResponder("invalid")))
        record = await bridge_session(sim_side, _bridge_env(straight_road, settings), timeout=5.0)
        await sim_side.close()
        await peer
        assert record.cause == EpisodeCause.PROTOCOL_ERROR
        assert not record.counts_for_metrics
        assert record.steps == 0

    @pytest.mark.asyncio
    async def test_silent_peer_times_out(self, straight_road, settings):
        sim_side, _ = memory_pair()
        record = await bridge_session(sim_side, _bridge_env(straight_road, settings), timeout=0.05)
        assert record.cause == EpisodeCause.PROTOCOL_ERROR

    @pytest.mark.asyncio
    async def test_peer_hangup(self, straight_road, settings):
        sim_side, policy_side = memory_pair()
        await policy_side.close()
        record = await bridge_session(sim_side, _bridge_env(straight_road, settings), timeout=5.0)
        assert record.cause == EpisodeCause.PROTOCOL_ERROR

    @pytest.mark.asyncio
    async def test_oversized_reply_aborts(self, straight_road, settings):
        script = (
            "import sys\n"
            "sys.stdin.buffer.readline()\n"
            f"sys.stdout.buffer.write(b\"x\" * {STREAM_LIMIT + 1024} + b\"\\n\")\n"
            "sys.stdout.buffer.flush()\n"
        )
        transport = await SubprocessTransport.spawn(f"{shlex.quote(sys.executable)} -c {shlex.quote(script)}")
        record = await bridge_session(transport, _bridge_env(straight_road, settings), timeout=30.0)
        await transport.close()
        assert record.cause == EpisodeCause.PROTOCOL_ERROR
        assert record.steps == 0


class TestTcpEndpoint:

    @pytest.mark.asyncio
    async def test_first_client_runs_every_job(self, straight_road, settings):
        spec = RunSpec.build(scenario="straight", policy="bridge:external", episodes=2, seeds=(1,))
        jobs = plan_jobs([spec], [straight_road])
        port: asyncio.Future[int] = asyncio.get_running_loop().create_future()
        server = asyncio.create_task(serve_bridge(jobs, settings, on_listening=port.set_result))

        transport = await open_tcp("127.0.0.1", await port)
        episodes = await serve_transport(transport, EchoResponder())
        records = await server
        await transport.close()

        assert episodes == 2
        assert [r.cause for r in records] == [EpisodeCause.SUCCESS] * 2
        assert [r.seed for r in records] == [job.seed for job in jobs]
