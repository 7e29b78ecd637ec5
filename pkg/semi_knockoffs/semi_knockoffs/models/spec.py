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

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from contextlib import contextmanager
from typing import Iterator, Optional

from ..core.dataset import TabularDataset
from ..core.model import PredictiveModel
from ..core.rng import RngStream
from ..exceptions import ConfigurationError
from .constant import ConstantModel
from .external import DEFAULT_REQUEST_TIMEOUT, ExternalModel, ExternalModelHandle
from .linear import fit_linear
from .stumps import DEFAULT_LEARNING_RATE, DEFAULT_ROUNDS, fit_boosted_stumps

logger = logging.getLogger(__name__)

DEFAULT_RIDGE_LAMBDA = 0.1


class ModelKind(str, Enum):
    LINEAR = "linear"
    BOOSTED_STUMPS = "boosted_stumps"
    CONSTANT = "constant"
    EXTERNAL = "external"


@dataclass(frozen=True)
class ModelSpec:
    """A model choice as written on the command line.

    Accepted forms: linear, boosted_stumps, constant:<value>
    and external:<path>.
    """

    kind: ModelKind
    constant_value: float = 0.0
    external_path: Optional[Path] = None
    rounds: int = DEFAULT_ROUNDS
    learning_rate: float = DEFAULT_LEARNING_RATE
    ridge_lambda: float = DEFAULT_RIDGE_LAMBDA
    request_timeout: float = DEFAULT_REQUEST_TIMEOUT

    @classmethod
    def parse(cls, text: str, **options) -> "ModelSpec":
        name, _, argument = str(text).partition(":")
        try:
            kind = ModelKind(name.strip())
        except ValueError as exc:
            choices = ", ".join(["linear", "boosted_stumps", "constant:<value>", "external:<path>"])
            raise ConfigurationError(f"unknown model '{text}' (choose from {choices})") from exc

        if kind is ModelKind.EXTERNAL:
            if not argument:
                raise ConfigurationError("external model needs a path: external:<path>")
            return cls(kind, external_path=Path(argument), **options)
        if kind is ModelKind.CONSTANT:
            try:
                value = float(argument) if argument else 0.0
            except ValueError as exc:
                raise ConfigurationError(f"constant model value '{argument}' is not a number") from exc
            return cls(kind, constant_value=value, **options)
        if argument:
            raise ConfigurationError(f"model '{name}' takes no argument")
        return cls(kind, **options)

    def __str__(self) -> str:
        if self.kind is ModelKind.EXTERNAL:
            return f"external:{self.external_path}"
        if self.kind is ModelKind.CONSTANT:
            return f"constant:{self.constant_value:g}"
        return self.kind.value

    def build(self, data: TabularDataset, rng: RngStream) -> PredictiveModel:
        """Fit a built-in model on *data*, or open a session to the external one.

        External sessions must be closed by the caller.
        """
        if self.kind is ModelKind.LINEAR:
            return fit_linear(data, self.ridge_lambda)
        if self.kind is ModelKind.BOOSTED_STUMPS:
            return fit_boosted_stumps(data, self.rounds, self.learning_rate, rng)
        if self.kind is ModelKind.CONSTANT:
            return ConstantModel(self.constant_value)
        if not self.external_path.is_file():
            raise ConfigurationError(f"external model not found: {self.external_path}")
        handle = ExternalModelHandle(self.external_path, request_timeout=self.request_timeout)
        return ExternalModel.open(handle, data.n_features)

    @contextmanager
    def session(self, data: TabularDataset, rng: RngStream) -> Iterator[PredictiveModel]:
        """build() as a context manager that closes external sessions on exit."""
        model = self.build(data, rng)
        try:
            yield model
        finally:
            if isinstance(model, ExternalModel):
                model.close()

    @property
    def concurrent_safe(self) -> bool:
        return self.kind is not ModelKind.EXTERNAL
