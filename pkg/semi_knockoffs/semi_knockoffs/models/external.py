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

"""Bridge to an external pre-trained model running as a child process.

The child speaks newline-delimited JSON on its standard streams::

    -> {"type": "hello", "n_features": p}      <- {"type": "ready"}
    -> {"type": "predict", "inputs": [[...]]}  <- {"type": "predictions", "values": [...]}
    -> {"type": "bye"}

Requests are strictly serial. A timeout, a malformed reply or a wrong
number of predictions ends the session.
"""

from __future__ import annotations

import asyncio
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..core.model import PredictiveModel
from ..exceptions import (
    BridgeClosedError,
    BridgeError,
    BridgeLengthMismatchError,
    BridgeProtocolError,
    BridgeTimeoutError,
    DimensionMismatchError,
)
from .process import spawn_pgrp, stop_child

logger = logging.getLogger(__name__)

DEFAULT_REQUEST_TIMEOUT = 30.0
_SHUTDOWN_TIMEOUT = 2.0


@dataclass(frozen=True)
class ExternalModelHandle:
    executable_path: Path
    startup_args: Tuple[str, ...] = ()
    request_timeout: float = DEFAULT_REQUEST_TIMEOUT

    def __post_init__(self) -> None:
        object.__setattr__(self, "executable_path", Path(self.executable_path))
        object.__setattr__(self, "startup_args", tuple(str(a) for a in self.startup_args))
        if not self.request_timeout > 0:
            raise BridgeError(f"request timeout must be positive, got {self.request_timeout}")

    def command(self) -> Tuple[str, ...]:
        """Python scripts run under the current interpreter; anything else is executed directly."""
        if self.executable_path.suffix == ".py":
            return (sys.executable, str(self.executable_path)) + self.startup_args
        return (str(self.executable_path),) + self.startup_args


@dataclass(eq=False)
class ExternalModel(PredictiveModel):
    """PredictiveModel backed by one bridge session."""

    handle: ExternalModelHandle
    n_features: int
    _loop: asyncio.AbstractEventLoop = field(init=False, repr=False)
    _proc: Optional[asyncio.subprocess.Process] = field(default=None, init=False, repr=False)
    _failed: Optional[str] = field(default=None, init=False, repr=False)

    concurrent_safe = False

    def __post_init__(self) -> None:
        self._loop = asyncio.new_event_loop()

    @classmethod
    def open(cls, handle: ExternalModelHandle, n_features: int) -> "ExternalModel":
        """Start the child process and complete the handshake."""
        model = cls(handle, int(n_features))
        try:
            model._run(model._start())
        except BaseException:
            model.close()
            raise
        return model

    @property
    def identifier(self) -> str:
        return f"external:{self.handle.executable_path}"

    @property
    def is_open(self) -> bool:
        return self._proc is not None and self._failed is None

    def __enter__(self) -> "ExternalModel":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    def _run(self, coro):
        return self._loop.run_until_complete(coro)

    async def _start(self) -> None:
        cmd = self.handle.command()
        try:
            self._proc = await spawn_pgrp(cmd)
        except OSError as e:
            raise BridgeError(f"cannot start external model {cmd[0]}: {e}") from e
        logger.info(f"Started external model pid={self._proc.pid}: {' '.join(cmd)}")
        await self._send({"type": "hello", "n_features": self.n_features})
        reply = await self._receive()
        if reply.get("type") != "ready":
            raise BridgeProtocolError(f"expected a 'ready' reply to hello, got {reply!r}")

    async def _send(self, message: Dict[str, Any]) -> None:
        assert self._proc is not None and self._proc.stdin is not None
        try:
            self._proc.stdin.write((json.dumps(message) + "\n").encode("utf-8"))
            await asyncio.wait_for(self._proc.stdin.drain(), timeout=self.handle.request_timeout)
        except asyncio.TimeoutError as e:
            raise BridgeTimeoutError(
                f"external model did not accept a request within {self.handle.request_timeout}s"
            ) from e
        except (BrokenPipeError, ConnectionResetError) as e:
            raise BridgeClosedError(f"external model closed its input: {e}") from e

    async def _receive(self) -> Dict[str, Any]:
        assert self._proc is not None and self._proc.stdout is not None
        try:
            line = await asyncio.wait_for(self._proc.stdout.readline(), timeout=self.handle.request_timeout)
        except asyncio.TimeoutError as e:
            raise BridgeTimeoutError(f"external model did not reply within {self.handle.request_timeout}s") from e
        except ValueError as e:
            raise BridgeProtocolError(f"external model reply exceeds the line limit: {e}") from e
        if not line:
            raise BridgeClosedError("external model exited without replying")
        try:
            message = json.loads(line.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as e:
            raise BridgeProtocolError(f"malformed reply from external model: {line[:200]!r}") from e
        if not isinstance(message, dict):
            raise BridgeProtocolError(f"external model reply is not a JSON object: {message!r}")
        return message

    async def _predict(self, batch: np.ndarray) -> np.ndarray:
        await self._send({"type": "predict", "inputs": batch.tolist()})
        reply = await self._receive()
        if reply.get("type") != "predictions" or not isinstance(reply.get("values"), list):
            raise BridgeProtocolError(f"expected a 'predictions' reply, got type {reply.get('type')!r}")
        values = reply["values"]
        if len(values) != batch.shape[0]:
            raise BridgeLengthMismatchError(f"external model returned {len(values)} values for {batch.shape[0]} rows")
        try:
            return np.array(values, dtype=float)
        except (TypeError, ValueError) as e:
            raise BridgeProtocolError(f"external model returned non-numeric predictions: {e}") from e

    def predict(self, inputs: np.ndarray) -> np.ndarray:
        """external_predict: one request, one prediction per row in order."""
        if self._failed is not None:
            raise BridgeClosedError(f"bridge session is no longer usable: {self._failed}")
        if self._proc is None:
            raise BridgeClosedError("bridge session is closed")
        batch = np.asarray(inputs, dtype=float)
        if batch.ndim != 2 or batch.shape[1] != self.n_features:
            raise DimensionMismatchError(f"external model expects {self.n_features} columns, got shape {batch.shape}")
        try:
            return self._run(self._predict(batch))
        except BridgeError as e:
            self._failed = str(e)
            self.close()
            raise

    async def _shutdown(self) -> None:
        proc = self._proc
        if proc is None:
            return
        await stop_child(proc, farewell=b'{"type": "bye"}\n', timeout=_SHUTDOWN_TIMEOUT)
        logger.debug(f"external model pid={proc.pid} exited with {proc.returncode}")

    def close(self) -> None:
        """Send bye and reap the child. Safe to call more than once."""
        if self._loop.is_closed():
            return
        try:
            self._run(self._shutdown())
        finally:
            self._proc = None
            self._loop.close()
