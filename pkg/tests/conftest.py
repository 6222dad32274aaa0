"""Shared fixtures: one dense pole/state build reused across the suite.

The reference configuration lam=100, a=1 is built once per session at
truncation 160; smaller truncations are prefixes of the same ordered list,
which is exactly what truncating the expansion means.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from deltashell.evolution import lifetime, overlap_matrix
from deltashell.expansion import build_states
from deltashell.model import InitialState, ModelParams
from deltashell.poles import find_poles
from deltashell.quadrature import QuadratureSpec, integrate_oscillatory_real_line

LAM = 100.0
A = 1.0

_ORACLE_SPEC = QuadratureSpec(abs_tolerance=1e-10, rel_tolerance=1e-10)


def moshinsky_integral_oracle(x: float, kappa: complex, t: float) -> complex:
    """Defining contour integral (i/2pi) int e^{i(kx - k^2 t)}/(k - kappa) dk."""

    def f(k):
        return np.exp(1j * (k * x - k**2 * t)) / (k - kappa)

    result = integrate_oscillatory_real_line(
        f, _ORACLE_SPEC, t, x, pole_abscissa=abs(kappa.real)
    )
    return 1j / (2.0 * math.pi) * result.value


@pytest.fixture(scope="session")
def model() -> ModelParams:
    return ModelParams(LAM, A)


@pytest.fixture(scope="session")
def initial(model) -> InitialState:
    return InitialState(a=model.a)


@pytest.fixture(scope="session")
def states160(model):
    return build_states(model, find_poles(model, 160))


@pytest.fixture(scope="session")
def states40(states160):
    return states160[:40]


@pytest.fixture(scope="session")
def overlaps160(model, states160):
    return overlap_matrix(model, states160)


@pytest.fixture(scope="session")
def tau(states160) -> float:
    return lifetime(states160)
