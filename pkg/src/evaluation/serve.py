"""
TCP bridge endpoint: the first external policy to connect runs every planned
episode in order, then the server shuts down.
"""

import asyncio
from typing import Callable, Optional, Sequence

import structlog

from ..config import Settings
from ..metrics import EpisodeRecord
from ..policy.bridge import StreamTransport, bridge_session
from ..policy.bridge.transport import STREAM_LIMIT
from .runner import EpisodeJob, make_env

logger = structlog.get_logger(__name__)


async def serve_bridge(
    jobs: Sequence[EpisodeJob],
    settings: Settings,
    host: str = "127.0.0.1",
    port: int = 0,
    log_steps: bool = False,
    on_listening: Optional[Callable[[int], None]] = None,
) -> list[EpisodeRecord]:
    """
    Listen on ``host:port`` and run ``jobs`` against the first client.

    Args:
        jobs: Planned episodes (bridge specs)
        settings: Resolved settings
        host: Bind address, localhost by default
        port: TCP port, 0 picks a free one
        log_steps: Keep per-step logs in the records
        on_listening: Called with the bound port once the server accepts connections

    Returns:
        Records in job order
    """
    loop = asyncio.get_running_loop()
    finished: asyncio.Future[list[EpisodeRecord]] = loop.create_future()
    busy = False

    async def handle(reader: asyncio.StreamReader, writer: asyncio.StreamWriter) -> None:
        nonlocal busy
        transport = StreamTransport(reader, writer)
        if busy:
            logger.warning("bridge_client_rejected", peer=str(writer.get_extra_info("peername")))
            await transport.close()
            return
        busy = True
        logger.info("bridge_client_connected", peer=str(writer.get_extra_info("peername")), episodes=len(jobs))
        try:
            records = []
            for job in jobs:
                env = make_env(job, settings, log_steps)
                records.append(await bridge_session(transport, env, settings.policy.bridge_timeout))
            if not finished.done():
                finished.set_result(records)
        except Exception as e:
            if not finished.done():
                finished.set_exception(e)
        finally:
            await transport.close()

    server = await asyncio.start_server(handle, host, port, limit=STREAM_LIMIT)
    bound = server.sockets[0].getsockname()[1]
    logger.info("bridge_listening", host=host, port=bound)
    if on_listening is not None:
        on_listening(bound)
    async with server:
        return await finished
