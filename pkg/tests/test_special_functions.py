"""Faddeeva wrapper and propagation kernel against references and identities."""

from __future__ import annotations

import cmath
import math
import pathlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import moshinsky_integral_oracle
from deltashell.special_functions import faddeeva, moshinsky_m

FIXTURE = pathlib.Path(__file__).parent / "fixtures" / "faddeeva_reference.txt"

KAPPA_1 = 3.110526827213918 - 0.0009561455878319645j


def load_fixture():
    rows = []
    for line in FIXTURE.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        zr, zi, wr, wi = map(float, line.split())
        rows.append((complex(zr, zi), complex(wr, wi)))
    return rows


def test_fixture_has_thirty_entries():
    assert len(load_fixture()) == 30


def test_faddeeva_against_reference_table():
    worst = 0.0
    for z, ref in load_fixture():
        got = faddeeva(z)
        worst = max(worst, abs(got - ref) / max(abs(ref), 1e-300))
    assert worst < 1e-13


def test_faddeeva_known_point():
    # w(i) = e * erfc(1)
    assert faddeeva(1j) == pytest.approx(0.4275835761558070, abs=1e-13)
    assert faddeeva(0.0) == pytest.approx(1.0, abs=1e-15)


def test_faddeeva_vectorized_matches_scalar():
    zs = np.array([0.3 + 0.2j, -1.0 + 0.5j, 2.0 - 0.001j])
    vec = faddeeva(zs)
    for i, z in enumerate(zs):
        assert vec[i] == faddeeva(complex(z))


def test_faddeeva_rejects_nonfinite_input():
    with pytest.raises(ValueError):
        faddeeva(complex(math.nan, 0.0))


def test_faddeeva_overflow_raises():
    # deep lower half-plane: 2 exp(-z^2) exceeds double range
    with pytest.raises(OverflowError):
        faddeeva(-40.0j)


@settings(max_examples=60, deadline=None)
@given(
    x=st.floats(min_value=-8.0, max_value=8.0),
    y=st.floats(min_value=0.01, max_value=8.0),
)
def test_faddeeva_reflection_identities(x, y):
    z = complex(x, y)
    # mirror symmetry across the imaginary axis
    assert abs(faddeeva(-z.conjugate()) - faddeeva(z).conjugate()) < 1e-13
    # w(z) + w(-z) = 2 exp(-z^2), benign in the upper half-plane
    lhs = faddeeva(z) + faddeeva(-z)
    rhs = 2.0 * cmath.exp(-(z**2))
    assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(rhs))


def test_moshinsky_rejects_nonpositive_time():
    with pytest.raises(ValueError):
        moshinsky_m(0.0, KAPPA_1, 0.0)
    with pytest.raises(ValueError):
        moshinsky_m(0.0, KAPPA_1, -1.0)


def test_moshinsky_frozen_values():
    cases = [
        (0.0, KAPPA_1, 1.0, -1.0298539757316418 + 0.18603598782291592j),
        (0.5, KAPPA_1, 2.0, 0.44145463147607206 + 0.8122364751625168j),
        (0.0, -KAPPA_1.conjugate(), 1.0, 0.06686747258076904 + 0.06043321831098043j),
        (1.5, 2.0 - 0.5j, 0.25, -0.2186567159352302 + 0.20258270459272307j),
    ]
    for x, kappa, t, expected in cases:
        assert moshinsky_m(x, kappa, t) == pytest.approx(expected, rel=1e-12)


def test_moshinsky_vectorized_over_kappa():
    kappas = np.array([KAPPA_1, -KAPPA_1.conjugate(), 2.0 - 0.5j])
    vec = moshinsky_m(0.3, kappas, 1.7)
    for i, kappa in enumerate(kappas):
        # array and scalar paths may differ by FMA contraction only
        assert vec[i] == pytest.approx(moshinsky_m(0.3, complex(kappa), 1.7), rel=1e-14)


MORACLE_GRID = [
    # (x, kappa, t): exponential regime, post-exponential, mirrors, generic;
    # kappa stays in the lower half-plane, where the defining contour passes
    # above the pole and the closed form equals the real-line integral
    (0.0, KAPPA_1, 0.5),
    (0.0, KAPPA_1, 1.0),
    (0.0, KAPPA_1, 5.0),
    (0.0, KAPPA_1, 50.0),
    (0.5, KAPPA_1, 2.0),
    (1.0, KAPPA_1, 10.0),
    (0.0, -KAPPA_1.conjugate(), 1.0),
    (0.0, -KAPPA_1.conjugate(), 20.0),
    (0.5, -KAPPA_1.conjugate(), 5.0),
    (0.0, 6.263747838572196 - 0.0038340279585613j, 1.0),
    (0.0, 6.263747838572196 - 0.0038340279585613j, 10.0),
    (1.0, 6.263747838572196 - 0.0038340279585613j, 3.0),
    (1.5, 2.0 - 0.5j, 0.25),
    (2.0, 0.5 - 1.0j, 0.8),
    (0.0, 0.5 - 1.0j, 2.0),
    (0.3, 1.0 - 0.05j, 4.0),
    (0.0, 9.4 - 0.009j, 0.5),
    (0.7, 9.4 - 0.009j, 2.0),
    (0.0, -2.0 - 0.3j, 1.5),
    (1.2, -6.26 - 0.004j, 0.9),
]


def test_moshinsky_matches_defining_integral_on_grid():
    assert len(MORACLE_GRID) == 20
    worst = 0.0
    for x, kappa, t in MORACLE_GRID:
        oracle = moshinsky_integral_oracle(x, kappa, t)
        closed = moshinsky_m(x, kappa, t)
        worst = max(worst, abs(oracle - closed))
    assert worst < 1e-8


@settings(max_examples=40, deadline=None)
@given(
    alpha=st.floats(min_value=0.5, max_value=12.0),
    beta=st.floats(min_value=1e-4, max_value=1.0),
    t=st.floats(min_value=0.05, max_value=50.0),
)
def test_moshinsky_pair_reflection_identity(alpha, beta, t):
    # M(0, kappa, t) + M(0, -kappa, t) = e^{-i kappa^2 t}
    kappa = complex(alpha, -beta)
    lhs = moshinsky_m(0.0, kappa, t) + moshinsky_m(0.0, -kappa, t)
    rhs = cmath.exp(-1j * kappa**2 * t)
    assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(rhs))


def test_moshinsky_exponential_regime_band(tau):
    # |M(0, kappa_1, t) - e^{-i kappa_1^2 t}| stays in the first-correction
    # band 1/(2 sqrt(pi) |kappa_1| sqrt(t)) over the exponential window
    devs = [
        abs(moshinsky_m(0.0, KAPPA_1, t) - cmath.exp(-1j * KAPPA_1**2 * t))
        for t in np.linspace(0.5 * tau, 3.0 * tau, 21)
    ]
    assert 5e-3 < min(devs) and max(devs) < 1.5e-2


def test_moshinsky_longtime_power_decay():
    # t^{1/2} M(0, kappa, t) approaches the constant -i/(2 sqrt(pi i) kappa)
    kappa = KAPPA_1
    limit = -1j / (2.0 * cmath.sqrt(1j * math.pi) * kappa)
    for t in (1e4, 4e4, 1.6e5):
        scaled = moshinsky_m(0.0, kappa, t) * math.sqrt(t)
        assert abs(scaled - limit) < 5.0 / t
