"""
External-policy bridge: newline-delimited JSON over local sockets or
standard streams.
"""

from .echo import EchoResponder, serve_transport
from .protocol import (
    PROTOCOL_VERSION,
    act_message,
    decode_message,
    decode_observation,
    encode_message,
    encode_observation,
    obs_message,
    parse_action,
    reset_message,
)
from .session import bridge_session, receive_action, run_bridge_episodes
from .transport import (
    BridgeTransport,
    QueueTransport,
    StreamTransport,
    SubprocessTransport,
    memory_pair,
    open_tcp,
)

__all__ = [
    "BridgeTransport",
    "EchoResponder",
    "PROTOCOL_VERSION",
    "QueueTransport",
    "StreamTransport",
    "SubprocessTransport",
    "act_message",
    "bridge_session",
    "decode_message",
    "decode_observation",
    "encode_message",
    "encode_observation",
    "memory_pair",
    "obs_message",
    "open_tcp",
    "parse_action",
    "receive_action",
    "reset_message",
    "run_bridge_episodes",
    "serve_transport",
]
