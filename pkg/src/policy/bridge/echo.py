"""
Reference external policy: answers every observation with NOOP.

Speaks the bridge protocol over standard streams (default) or a TCP
connection to ``vfnav bridge-serve``. ``--reply invalid`` sends a malformed
action instead, for conformance testing.
"""

import argparse
import socket
import sys
from typing import IO, Optional

from ...sim import Action
from .protocol import Message, act_message, decode_message, encode_message
from .transport import BridgeTransport

INVALID_REPLY: Message = {"type": "act", "kind": "jump", "alpha_sign": 0}


class EchoResponder:
    """Decides the reply to each simulator message."""

    def __init__(self, reply: str = "noop"):
        if reply not in ("noop", "invalid"):
            raise ValueError(f"unknown reply mode '{reply}'")
        self.reply = reply
        self.episodes = 0

    def respond(self, message: Message) -> Optional[Message]:
        """Reply for ``message``, or None when no reply is expected."""
        kind = message.get("type")
        if kind == "reset":
            self.episodes += 1
        elif kind != "obs" or message.get("done"):
            return None
        if self.reply == "invalid":
            return dict(INVALID_REPLY)
        return act_message(Action.noop())


def serve_lines(reader: IO[bytes], writer: IO[bytes], responder: EchoResponder) -> int:
    """Blocking loop over file objects until EOF; returns the episodes seen."""
    for line in iter(reader.readline, b""):
        reply = responder.respond(decode_message(line))
        if reply is not None:
            writer.write(encode_message(reply))
            writer.flush()
    return responder.episodes


async def serve_transport(transport: BridgeTransport, responder: EchoResponder) -> int:
    """Async variant for in-process peers; stops on EOF."""
    while True:
        line = await transport.receive()
        if not line:
            return responder.episodes
        reply = responder.respond(decode_message(line))
        if reply is not None:
            await transport.send(encode_message(reply))


def _parse_endpoint(value: str) -> tuple[str, int]:
    host, _, port = value.rpartition(":")
    if not host or not port.isdigit():
        raise argparse.ArgumentTypeError(f"expected host:port, got '{value}'")
    return host, int(port)


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(prog="vfnav-echo-policy", description="NOOP reference policy")
    parser.add_argument("--connect", type=_parse_endpoint, help="host:port of a bridge-serve endpoint")
    parser.add_argument("--reply", choices=["noop", "invalid"], default="noop")
    args = parser.parse_args(argv)

    responder = EchoResponder(args.reply)
    if args.connect is None:
        serve_lines(sys.stdin.buffer, sys.stdout.buffer, responder)
        return 0

    with socket.create_connection(args.connect) as sock:
        with sock.makefile("rb") as reader, sock.makefile("wb") as writer:
            serve_lines(reader, writer, responder)
    return 0


if __name__ == "__main__":
    sys.exit(main())
