"""Pole search: seeds, Newton refinement, ordering, and failure modes."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deltashell.model import ModelParams, jost_plus
from deltashell.poles import (
    NonConvergenceError,
    PoleSearchError,
    SolverConfig,
    find_poles,
    refine_pole,
    seed_pole,
    seed_poles,
)

KAPPA_1 = 3.110526827213918 - 0.0009561455878319645j


def test_seed_pole_frozen(model):
    seed = seed_pole(model, 1)
    assert seed.real == pytest.approx(3.1101767270538954, rel=1e-14)
    assert -seed.imag == pytest.approx(0.0009869604401089359, rel=1e-14)
    # asymptotic scaling: alpha ~ n pi (1 - 1/(lam a)), beta ~ (n pi / lam a)^2
    seed9 = seed_pole(model, 9)
    assert seed9.real == pytest.approx(9.0 * math.pi * 0.99, rel=1e-12)
    assert -seed9.imag == pytest.approx((9.0 * math.pi / 100.0) ** 2, rel=1e-12)


def test_seed_rejects_free_limit(model):
    with pytest.raises(PoleSearchError):
        seed_pole(ModelParams(0.0, 1.0), 1)
    with pytest.raises(PoleSearchError):
        find_poles(ModelParams(0.0, 1.0), 3)


def test_weak_shell_warns():
    weak = ModelParams(4.0, 1.0)
    with pytest.warns(UserWarning):
        seed_poles(weak, 2)


def test_refine_first_pole(model):
    refined = refine_pole(model, 1, seed_pole(model, 1))
    assert refined.kappa == pytest.approx(KAPPA_1, rel=1e-12)
    assert refined.jost_residual < 1e-10
    assert abs(jost_plus(model, refined.kappa)) < 1e-10


def test_find_poles_suite(model):
    poles = find_poles(model, 50)
    assert len(poles) == 50
    assert [p.n for p in poles] == list(range(1, 51))
    moduli = [abs(p.kappa) for p in poles]
    assert all(a < b for a, b in zip(moduli, moduli[1:]))
    assert all(p.kappa.real > 0 and p.kappa.imag < 0 for p in poles)
    assert max(p.jost_residual for p in poles) < 1e-10
    # widths grow monotonically with n in this regime
    betas = [p.beta for p in poles]
    assert all(a < b for a, b in zip(betas, betas[1:]))


def test_truncation_is_a_prefix(model, states160):
    # a shorter search returns exactly the head of a longer one
    short = find_poles(model, 8)
    for lhs, rhs in zip(short, states160[:8]):
        assert lhs.kappa == pytest.approx(rhs.pole.kappa, rel=1e-13)


def test_solver_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(max_iterations=0)
    with pytest.raises(ValueError):
        SolverConfig(step_tolerance=0.0)
    with pytest.raises(ValueError):
        SolverConfig(max_poles=0)


def test_nonconvergence_raises(model):
    starved = SolverConfig(max_iterations=1, warmup_iterations=0)
    with pytest.raises(PoleSearchError):
        refine_pole(model, 1, seed_pole(model, 1) + 0.5j, config=starved)


def test_max_poles_cap(model):
    capped = SolverConfig(max_poles=10)
    with pytest.raises(PoleSearchError):
        find_poles(model, 11, config=capped)


@settings(max_examples=12, deadline=None)
@given(
    lam=st.floats(min_value=30.0, max_value=300.0),
    a=st.floats(min_value=0.5, max_value=2.0),
)
def test_poles_valid_across_parameters(lam, a):
    local = ModelParams(lam, a)
    for pole in find_poles(local, 4):
        assert pole.kappa.real > 0 and pole.kappa.imag < 0
        assert pole.jost_residual < 1e-9
