"""
Bridge Transports

Line-oriented byte channels to an external policy: asyncio streams (local
TCP socket or a subprocess's standard streams) and an in-memory pair for
in-process clients.
"""

import asyncio
import shlex
from abc import ABC, abstractmethod
from typing import Optional

import structlog

logger = structlog.get_logger(__name__)

# JSON lines carry a full observation tensor
STREAM_LIMIT = 4 * 1024 * 1024


class BridgeTransport(ABC):
    """One line in, one line out."""

    @abstractmethod
    async def send(self, line: bytes) -> None:
        pass

    @abstractmethod
    async def receive(self) -> bytes:
        """Next line including its newline; b"" at end of stream."""
        pass

    @abstractmethod
    async def close(self) -> None:
        pass


class StreamTransport(BridgeTransport):
    """asyncio reader/writer pair."""

    def __init__(self, reader: asyncio.StreamReader, writer: asyncio.StreamWriter):
        self._reader = reader
        self._writer = writer

    async def send(self, line: bytes) -> None:
        self._writer.write(line)
        await self._writer.drain()

    async def receive(self) -> bytes:
        return await self._reader.readline()

    async def close(self) -> None:
        self._writer.close()
        try:
            await self._writer.wait_closed()
        except (ConnectionError, BrokenPipeError):
            pass


class SubprocessTransport(BridgeTransport):
    """External policy spawned as a child process talking over stdin/stdout."""

    def __init__(self, process: asyncio.subprocess.Process):
        assert process.stdin is not None and process.stdout is not None
        self.process = process
        self._stdin = process.stdin
        self._stdout = process.stdout

    @classmethod
    async def spawn(cls, command: str) -> "SubprocessTransport":
        argv = shlex.split(command)
        if not argv:
            raise ValueError("empty bridge command")
        process = await asyncio.create_subprocess_exec(
            *argv,
            stdin=asyncio.subprocess.PIPE,
            stdout=asyncio.subprocess.PIPE,
            limit=STREAM_LIMIT,
        )
        logger.info("bridge_process_started", command=command, pid=process.pid)
        return cls(process)

    async def send(self, line: bytes) -> None:
        self._stdin.write(line)
        await self._stdin.drain()

    async def receive(self) -> bytes:
        return await self._stdout.readline()

    async def close(self) -> None:
        if self._stdin.can_write_eof():
            self._stdin.write_eof()
        try:
            await asyncio.wait_for(self.process.wait(), timeout=5.0)
        except asyncio.TimeoutError:
            self.process.kill()
            await self.process.wait()
        logger.info("bridge_process_exited", pid=self.process.pid, returncode=self.process.returncode)


class QueueTransport(BridgeTransport):
    """One end of an in-memory channel."""

    def __init__(self, inbox: "asyncio.Queue[bytes]", outbox: "asyncio.Queue[bytes]"):
        self._inbox = inbox
        self._outbox = outbox
        self._closed = False

    async def send(self, line: bytes) -> None:
        if self._closed:
            raise ConnectionError("transport closed")
        await self._outbox.put(line)

    async def receive(self) -> bytes:
        return await self._inbox.get()

    async def close(self) -> None:
        if not self._closed:
            self._closed = True
            await self._outbox.put(b"")


def memory_pair() -> tuple[QueueTransport, QueueTransport]:
    """Connected (simulator side, policy side) transports."""
    a: "asyncio.Queue[bytes]" = asyncio.Queue()
    b: "asyncio.Queue[bytes]" = asyncio.Queue()
    return QueueTransport(a, b), QueueTransport(b, a)


async def open_tcp(host: str, port: int, limit: Optional[int] = STREAM_LIMIT) -> StreamTransport:
    reader, writer = await asyncio.open_connection(host, port, limit=limit or STREAM_LIMIT)
    return StreamTransport(reader, writer)
