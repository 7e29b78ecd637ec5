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

from .draws import (
    SemiKnockoffDraw,
    draw_batch,
    draw_oracle_semi_knockoff,
    draw_semi_knockoff,
    draw_with_permutations,
    oracle_pair,
)

__all__ = [
    "SemiKnockoffDraw",
    "draw_batch",
    "draw_oracle_semi_knockoff",
    "draw_semi_knockoff",
    "draw_with_permutations",
    "oracle_pair",
]
