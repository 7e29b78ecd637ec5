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

"""Process-wide settings for semi_knockoffs runs."""

import logging
import os
from dataclasses import dataclass
from typing import Optional

from .exceptions import ConfigurationError
from .utils.logging_utils import configure_split_stream_logging, resolve_level

SEED_ENV = "SEMIKNOCK_SEED"


def available_parallelism() -> int:
    """Number of CPUs this process may use."""
    if hasattr(os, "sched_getaffinity"):
        return max(1, len(os.sched_getaffinity(0)))
    return max(1, os.cpu_count() or 1)


def _env_int(name: str) -> Optional[int]:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return None
    try:
        return int(raw, 0)
    except ValueError as exc:
        raise ConfigurationError(f"environment variable {name} must be an integer, got {raw!r}") from exc


@dataclass
class RunSettings:
    """Settings shared by the library and the CLI."""

    log_level: str = "INFO"
    print_level: str = "WARNING"
    seed: Optional[int] = None
    workers: int = 1

    @classmethod
    def from_env(cls) -> "RunSettings":
        """Create settings from SEMIKNOCK_* environment variables."""
        workers = _env_int("SEMIKNOCK_WORKERS")
        return cls(
            log_level=os.getenv("SEMIKNOCK_LOG_LEVEL", "INFO"),
            print_level=os.getenv("SEMIKNOCK_PRINT_LEVEL", "WARNING"),
            seed=_env_int(SEED_ENV),
            workers=workers if workers is not None else available_parallelism(),
        )

    def set_logging(self) -> logging.Logger:
        """Install split-stream logging at the configured levels."""
        level = resolve_level(self.log_level, logging.INFO)
        stderr_level = resolve_level(self.print_level, logging.WARNING)
        configure_split_stream_logging(level=level, stderr_level=stderr_level)
        return logging.getLogger("semi_knockoffs")

