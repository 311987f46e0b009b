# Copyright 2026 The rydeit Authors
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

"""Multi-level Rydberg EIT spectra with two RF fields.

All frequencies are angular (rad/s) unless a name says otherwise; use
:func:`mhz` and :func:`to_mhz` at the edges.
"""

import math

from ._core import (
    AnalysisError,
    Error,
    InvalidInput,
    NumericalError,
    ParseError,
    Scheme,
    SteadyState,
    StructuralError,
    __version__,
    bell_features,
    calibrate_cell_factor,
    doppler_rho21,
    evolve,
    fit_peak_location,
    fit_slope,
    horn_rabi,
    infer_rf2_field,
    optical_rabi,
    peak_trace,
    preset_names,
    spectrum,
    steady_state,
    thermal_speed,
    vapor_density,
)


def mhz(f_mhz):
    """Angular frequency in rad/s for a cyclic frequency in MHz."""
    return 2.0 * math.pi * 1e6 * f_mhz


def to_mhz(omega):
    """Cyclic frequency in MHz for an angular frequency in rad/s."""
    return omega / (2.0 * math.pi * 1e6)


__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
