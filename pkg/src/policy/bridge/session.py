"""
Bridge Session
==============
Runs one episode against an external policy over a BridgeTransport.

Message order: reset -> act -> (obs -> act)* -> terminal obs. Any malformed,
out-of-sequence or late reply aborts the episode; the record then carries
``protocol_error`` and is excluded from metrics.
"""

import asyncio
from typing import TYPE_CHECKING, Optional

import numpy as np
import structlog

from ...sim import Action
from ..errors import BridgeTimeoutError, PolicyError, ProtocolViolation
from .protocol import decode_message, encode_message, obs_message, parse_action, reset_message
from .transport import BridgeTransport

if TYPE_CHECKING:
    from ...evaluation.env import NavigationEnv
    from ...metrics import EpisodeRecord

logger = structlog.get_logger(__name__)

BRIDGE_POLICY = "bridge"


async def receive_action(transport: BridgeTransport, alpha: float, timeout: float) -> Action:
    """
    Wait for the next ``act`` reply.

    Raises:
        BridgeTimeoutError: If no line arrives within ``timeout`` seconds
        ProtocolViolation: If the line is not a valid action or overruns the stream limit
    """
    try:
        line = await asyncio.wait_for(transport.receive(), timeout=timeout)
    except asyncio.TimeoutError:
        raise BridgeTimeoutError(f"no action within {timeout:g} s", BRIDGE_POLICY) from None
    except (ValueError, asyncio.LimitOverrunError, asyncio.IncompleteReadError) as e:
        raise ProtocolViolation(f"unreadable reply line: {e}", BRIDGE_POLICY) from e
    return parse_action(decode_message(line), alpha)


def _tensor(env: "NavigationEnv") -> np.ndarray:
    stack = env.observation
    if stack is None:
        raise PolicyError("bridge episodes need rendered observations", BRIDGE_POLICY)
    return stack.to_tensor()


async def bridge_session(
    transport: BridgeTransport,
    env: "NavigationEnv",
    timeout: float = 10.0,
) -> "EpisodeRecord":
    """
    Drive ``env`` for one episode with actions from the external policy.

    Args:
        transport: Connected transport
        env: Environment rendering observations (``needs_observation=True``)
        timeout: Seconds allowed per action

    Returns:
        The finished EpisodeRecord
    """
    config = env.config
    alpha = config.alpha_deg
    env.reset()

    step_count = 0
    try:
        await transport.send(encode_message(reset_message(config.scenario_id, env.seed, _tensor(env))))
        while True:
            action = await receive_action(transport, alpha, timeout)
            _, outcome = env.step(action)
            step_count += 1
            cause: Optional[str] = outcome.cause.value if outcome.cause is not None else None
            message = obs_message(step_count, _tensor(env), outcome.reward, outcome.terminated, cause)
            await transport.send(encode_message(message))
            if outcome.terminated:
                break
    except (ProtocolViolation, BridgeTimeoutError, ConnectionError) as e:
        logger.warning(
            "bridge_protocol_violation",
            scenario_id=config.scenario_id,
            seed=env.seed,
            step=step_count,
            error=str(e),
        )
        env.abort()
        await _send_abort(transport, step_count, env)

    record = env.record()
    logger.debug("bridge_episode_finished", scenario_id=config.scenario_id, seed=env.seed,
                 cause=record.cause.value, steps=record.steps)
    return record


async def _send_abort(transport: BridgeTransport, step_count: int, env: "NavigationEnv") -> None:
    """Best-effort terminal message so a live peer can move on."""
    try:
        message = obs_message(step_count, _tensor(env), 0.0, True, "protocol_error")
        await transport.send(encode_message(message))
    except (ConnectionError, BrokenPipeError, PolicyError):
        pass


async def run_bridge_episodes(
    transport: BridgeTransport,
    envs: list["NavigationEnv"],
    timeout: float = 10.0,
) -> list["EpisodeRecord"]:
    """Run several episodes in order over one connection."""
    return [await bridge_session(transport, env, timeout) for env in envs]
