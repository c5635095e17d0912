# Copyright 2026 The pulsenet Authors
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
"""Quantum pulses through cascaded virtual-cavity networks."""

from ._core import (
    AccuracyError,
    CaptureIncomplete,
    CausalityViolation,
    ConfigError,
    DivergenceError,
    Error,
    ExperimentConfig,
    PulseShape,
    TruncationError,
    UnsupportedConfiguration,
    __version__,
    count_interior_extrema,
    format_number,
    fringe_spacing,
    g_absorber,
    g_source,
    mirror_asymmetry,
    normalized_cross_correlation,
    run_delay_demo,
    run_intensity_scan,
    run_oracle_compare,
    run_ramsey_scan,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
