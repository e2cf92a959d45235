# Copyright 2026 The stkernels Authors
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

"""Space-time covariance kernels with spectral oracles, simulation and fitting.

Models are plain dicts in the same JSON layout the command-line tool reads
and writes.
"""

import json

import numpy as np

from . import _core
from ._core import ConfigError, NumericalError

__all__ = [
    "ConfigError",
    "NumericalError",
    "checks",
    "fit_field",
    "interaction_ratio",
    "kernel",
    "oracle",
    "predict",
    "preset",
    "preset_names",
    "simulate",
    "variance",
]


def _dump(model):
    return model if isinstance(model, str) else json.dumps(model)


def preset_names():
    return list(_core.preset_names())


def preset(name):
    """Return a built-in model as a dict."""
    return json.loads(_core.preset(name))


def kernel(model, r, tau):
    """Evaluate C(r, tau); r and tau broadcast against each other."""
    r, tau = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(tau, dtype=float))
    out = _core.kernel(_dump(model), np.ascontiguousarray(r), np.ascontiguousarray(tau))
    return out if out.ndim else float(out)


def variance(model):
    return _core.variance(_dump(model))


def oracle(model, r, tau):
    """Spectral quadrature value and its error estimate."""
    return _core.oracle(_dump(model), float(r), float(tau))


def interaction_ratio(model, r, tau):
    """C(0,0) C(r,tau) / (C_S(r) C_T(tau)); NaN where a marginal vanishes."""
    return _core.interaction_ratio(_dump(model), float(r), float(tau))


def simulate(model, n, ds, nt, dt, seed=0):
    """Gaussian field on a regular grid, shape (nt, *n)."""
    n = [int(v) for v in np.atleast_1d(n)]
    ds = [float(v) for v in np.atleast_1d(ds)]
    return _core.simulate(_dump(model), n, ds, int(nt), float(dt), int(seed))


def fit_field(values, ds, dt, family="ldho", dispersion="quadratic"):
    """Two-stage variogram fit of a gridded field with time on axis 0."""
    ds = [float(v) for v in np.atleast_1d(ds)]
    return json.loads(_core.fit_field(np.asarray(values, dtype=float), ds, float(dt), family, dispersion))


def predict(model, points, values, query, mean=0.0):
    """Conditional mean and variance; rows of points and query are (s..., t)."""
    return _core.predict(
        _dump(model),
        np.atleast_2d(np.asarray(points, dtype=float)),
        np.asarray(values, dtype=float).ravel(),
        np.atleast_2d(np.asarray(query, dtype=float)),
        float(mean),
    )


def checks(model, seed=0):
    return json.loads(_core.checks(_dump(model), int(seed)))
