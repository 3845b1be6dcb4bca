"""
Bridge Wire Protocol
====================
Newline-delimited JSON between the simulator and an external policy.

Simulator -> policy:
    {"type": "reset", "version": "vf/1", "scenario": ..., "seed": ..., "obs": ...}
    {"type": "obs", "step": ..., "obs": ..., "reward": ..., "done": ..., "cause": ...}
Policy -> simulator (after reset and after every obs with done = false):
    {"type": "act", "kind": "noop" | "turn", "alpha_sign": -1 | 0 | 1}

``obs`` is base64 of a 16-byte header (four little-endian uint32: frames,
height, width, bytes per pixel) followed by the row-major class-id tensor.
Messages are written with sorted keys and compact separators so equal
messages are byte-identical.
"""

import base64
import binascii
import json
from typing import Any, Optional

import numpy as np

from ...sim import Action
from ..errors import ProtocolViolation

PROTOCOL_VERSION = "vf/1"
HEADER_DTYPE = np.dtype("<u4")
HEADER_FIELDS = 4

Message = dict[str, Any]


def encode_observation(tensor: np.ndarray) -> str:
    """Base64 of header + row-major class ids of a (frames, height, width) uint8 tensor."""
    if tensor.ndim != 3 or tensor.dtype != np.uint8:
        raise ValueError(f"observation must be a 3D uint8 tensor, got {tensor.shape} {tensor.dtype}")
    frames, height, width = tensor.shape
    header = np.array([frames, height, width, 1], dtype=HEADER_DTYPE).tobytes()
    return base64.b64encode(header + np.ascontiguousarray(tensor).tobytes()).decode("ascii")


def decode_observation(payload: str) -> np.ndarray:
    """
    Inverse of ``encode_observation``.

    Raises:
        ProtocolViolation: If the payload is not valid base64 or the body does
            not match the header
    """
    try:
        raw = base64.b64decode(payload.encode("ascii"), validate=True)
    except (binascii.Error, UnicodeEncodeError, AttributeError) as e:
        raise ProtocolViolation(f"observation is not valid base64: {e}") from e

    header_size = HEADER_FIELDS * HEADER_DTYPE.itemsize
    if len(raw) < header_size:
        raise ProtocolViolation("observation shorter than its header")
    frames, height, width, depth = (int(v) for v in np.frombuffer(raw[:header_size], dtype=HEADER_DTYPE))
    if depth != 1:
        raise ProtocolViolation(f"unsupported bytes per pixel: {depth}")
    body = raw[header_size:]
    if len(body) != frames * height * width:
        raise ProtocolViolation(f"observation body has {len(body)} bytes, header says {frames}x{height}x{width}")
    return np.frombuffer(body, dtype=np.uint8).reshape(frames, height, width).copy()


def encode_message(message: Message) -> bytes:
    """One JSON line, canonical form."""
    return (json.dumps(message, sort_keys=True, separators=(",", ":")) + "\n").encode("utf-8")


def decode_message(line: bytes) -> Message:
    """
    Parse one JSON line.

    Raises:
        ProtocolViolation: On EOF, invalid JSON, or a non-object message
    """
    if not line:
        raise ProtocolViolation("connection closed by peer")
    try:
        message = json.loads(line.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ProtocolViolation(f"malformed message: {e}") from e
    if not isinstance(message, dict) or "type" not in message:
        raise ProtocolViolation("message must be a JSON object with a 'type'")
    return message


def reset_message(scenario_id: str, seed: int, obs: np.ndarray) -> Message:
    return {
        "type": "reset",
        "version": PROTOCOL_VERSION,
        "scenario": scenario_id,
        "seed": seed,
        "obs": encode_observation(obs),
    }


def obs_message(step: int, obs: np.ndarray, reward: float, done: bool, cause: Optional[str]) -> Message:
    return {
        "type": "obs",
        "step": step,
        "obs": encode_observation(obs),
        "reward": reward,
        "done": done,
        "cause": cause,
    }


def act_message(action: Action) -> Message:
    return {"type": "act", "kind": action.kind.value, "alpha_sign": action.alpha_sign}


def parse_action(message: Message, alpha: float) -> Action:
    """
    Turn an ``act`` reply into an Action with the scenario's alpha magnitude.

    Raises:
        ProtocolViolation: On a wrong type, unknown kind or inconsistent sign
    """
    if message.get("type") != "act":
        raise ProtocolViolation(f"expected 'act', got '{message.get('type')}'")
    kind = message.get("kind")
    sign = message.get("alpha_sign", 0)
    if isinstance(sign, bool) or not isinstance(sign, int):
        raise ProtocolViolation(f"alpha_sign must be an integer, got {sign!r}")
    if kind == "noop":
        if sign != 0:
            raise ProtocolViolation("noop carries alpha_sign 0")
        return Action.noop()
    if kind == "turn":
        if sign not in (-1, 1):
            raise ProtocolViolation(f"turn needs alpha_sign -1 or 1, got {sign}")
        return Action.turn(sign * alpha)
    raise ProtocolViolation(f"invalid action kind {kind!r}")
