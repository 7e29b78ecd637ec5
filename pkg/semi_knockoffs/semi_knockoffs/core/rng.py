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

"""Reproducible random streams.

A stream is identified by a root seed and an integer path such as
(feature, permutation, replicate). Generators are Philox (counter-based)
instances keyed by numpy's SeedSequence, so a given (root, path) yields the
same draws on every platform and distinct paths are independent.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..exceptions import ConfigurationError

logger = logging.getLogger(__name__)

_SEED_LIMIT = 2**64


@dataclass(frozen=True)
class RngStream:
    root_seed: int
    stream_path: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not 0 <= int(self.root_seed) < _SEED_LIMIT:
            raise ConfigurationError(f"root seed must be a 64-bit unsigned integer, got {self.root_seed}")
        path = tuple(int(step) for step in self.stream_path)
        if any(step < 0 for step in path):
            raise ConfigurationError(f"stream path entries must be non-negative, got {path}")
        object.__setattr__(self, "root_seed", int(self.root_seed))
        object.__setattr__(self, "stream_path", path)

    def seed_sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(entropy=self.root_seed, spawn_key=self.stream_path)

    def generator(self) -> np.random.Generator:
        """A fresh generator positioned at the start of this stream."""
        return np.random.Generator(np.random.Philox(self.seed_sequence()))


def derive_stream(root: RngStream, extension: int) -> RngStream:
    """Child stream of *root* one level deeper, at *extension*."""
    return RngStream(root.root_seed, root.stream_path + (int(extension),))


def stream_from_seed(seed: Optional[int]) -> RngStream:
    """Root stream for *seed*; a fresh OS-entropy seed is drawn and logged when None."""
    if seed is None:
        seed = int(np.random.SeedSequence().entropy) % _SEED_LIMIT
        logger.info(f"No seed given; using seed {seed}")
    return RngStream(seed)
