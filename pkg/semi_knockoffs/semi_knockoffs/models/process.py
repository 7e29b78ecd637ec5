# Copyright 2026 The semi_knockoffs Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Child-process plumbing for the external model bridge.

Children run in their own session so a model server that forks workers is
stopped as a whole.
"""

from __future__ import annotations

import asyncio
import logging
import os
import signal
from typing import Optional, Sequence

logger = logging.getLogger(__name__)

# one prediction reply can hold many floats on a single line
STREAM_LIMIT = 64 * 1024 * 1024

_SIGNAL_STEPS = (signal.SIGTERM, signal.SIGKILL)


async def spawn_pgrp(cmd: Sequence[str]) -> asyncio.subprocess.Process:
    """Spawn *cmd* with piped stdin/stdout in a new session (pgid == pid).

    The child's stderr is inherited so its diagnostics reach the user.
    """
    return await asyncio.create_subprocess_exec(
        *cmd,
        stdin=asyncio.subprocess.PIPE,
        stdout=asyncio.subprocess.PIPE,
        stderr=None,
        start_new_session=True,
        limit=STREAM_LIMIT,
    )


def _signal_group(pid: int, sig: int) -> None:
    try:
        os.killpg(pid, sig)
    except ProcessLookupError:
        pass
    except OSError as e:
        logger.warning(f"could not send {signal.Signals(sig).name} to process group {pid}: {e}")


async def _say_goodbye(proc: asyncio.subprocess.Process, farewell: bytes, timeout: float) -> None:
    stdin = proc.stdin
    if stdin is None or stdin.is_closing():
        return
    try:
        stdin.write(farewell)
        await asyncio.wait_for(stdin.drain(), timeout=timeout)
    except (asyncio.TimeoutError, BrokenPipeError, ConnectionResetError):
        pass
    finally:
        stdin.close()


async def stop_child(
    proc: asyncio.subprocess.Process,
    *,
    farewell: bytes,
    timeout: float,
) -> Optional[int]:
    """Stop a bridge child, escalating only when it does not exit in *timeout* seconds.

    The child first gets *farewell* on stdin followed by EOF, then SIGTERM on
    its process group, then SIGKILL. Returns the exit code, or None when the
    child outlives every step.
    """
    if proc.returncode is not None:
        return proc.returncode

    await _say_goodbye(proc, farewell, timeout)
    for sig in (None,) + _SIGNAL_STEPS:
        if sig is not None:
            logger.warning(f"model process {proc.pid} still running; sending {signal.Signals(sig).name}")
            _signal_group(proc.pid, sig)
        try:
            return await asyncio.wait_for(proc.wait(), timeout=timeout)
        except asyncio.TimeoutError:
            continue
    logger.error(f"model process {proc.pid} survived SIGKILL, giving up")
    return None
