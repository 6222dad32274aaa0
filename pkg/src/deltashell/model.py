"""Closed-form quantities of the delta-shell potential V(r) = lam * delta(r - a).

Everything here is exact arithmetic on analytic formulas: the Jost function
and S-matrix, continuum scattering states, the momentum overlap C(k) of the
confined initial state, and the per-pole resonance-state package (complex
normalization, boundary value, overlap, interior norm).

Units are hbar = 2m = 1; momenta are 1/length, energies are momentum
squared, and the s-wave radial problem lives on r >= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

__all__ = [
    "ModelParams",
    "InitialState",
    "ResonancePole",
    "ResonanceStateData",
    "snc",
    "jost_plus",
    "jost_plus_prime",
    "s_matrix",
    "continuum_wavefunction",
    "born_coefficient_continuum",
    "resonance_state",
    "normalization_constant",
    "overlap_cn",
    "interior_norm_in",
    "resonance_state_data",
    "normalization_residual",
    "width_identity_residual",
    "sin_product_integral",
]

_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
# below this the direct sin(z)/z loses digits to cancellation
_SNC_SERIES_CUT = 1e-4


@dataclass(frozen=True)
class ModelParams:
    """Potential intensity and shell radius.

    lam = 0 is admitted as the free-particle limit used by tests; the
    resonance-dominated regime of interest has lam * a >> 1.
    """

    lam: float
    a: float

    def __post_init__(self) -> None:
        if self.a <= 0:
            raise ValueError("shell radius a must be positive")
        if self.lam < 0:
            raise ValueError("intensity lam must be nonnegative")

    @property
    def s(self) -> float:
        """Wavenumber pi/a of the confined initial state."""
        return math.pi / self.a


@dataclass(frozen=True)
class InitialState:
    """Real, unit-norm state confined to [0, a].

    The built-in state is the infinite-box ground state
    sqrt(2/a) * sin(pi*r/a).  A custom real function can be supplied through
    ``fn``; overlaps then fall back to numerical quadrature.
    """

    a: float
    label: str = "box-ground"
    fn: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if self.fn is not None:
            vals = np.where((r >= 0) & (r <= self.a), self.fn(r), 0.0)
        else:
            vals = np.where(
                (r >= 0) & (r <= self.a),
                math.sqrt(2.0 / self.a) * np.sin(math.pi * r / self.a),
                0.0,
            )
        return vals if vals.ndim else float(vals)

    def norm_residual(self) -> float:
        """|integral of psi^2 over [0,a] minus 1|, Gauss-Legendre check."""
        x, w = np.polynomial.legendre.leggauss(128)
        r = 0.5 * self.a * (x + 1.0)
        return abs(0.5 * self.a * np.sum(w * self(r) ** 2) - 1.0)


@dataclass(frozen=True)
class ResonancePole:
    """A refined fourth-quadrant zero of the Jost function.

    kappa = alpha - i*beta with alpha, beta > 0; energy = kappa**2.  The
    third-quadrant mirror -conj(kappa) is never stored, always derived.
    """

    n: int
    kappa: complex
    jost_residual: float

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("pole index must be >= 1")
        if not (self.kappa.real > 0 and self.kappa.imag < 0):
            raise ValueError("pole must lie in the open fourth quadrant")

    @property
    def alpha(self) -> float:
        return self.kappa.real

    @property
    def beta(self) -> float:
        return -self.kappa.imag

    @property
    def energy(self) -> complex:
        return self.kappa**2

    @property
    def decay_rate(self) -> float:
        """Single-pole survival decay rate, -2*Im(kappa**2) = 4*alpha*beta."""
        return -2.0 * (self.kappa**2).imag


@dataclass(frozen=True)
class ResonanceStateData:
    """Per-pole package feeding every expansion.

    Fields
    ------
    pole : ResonancePole
    a_n : complex
        Normalization constant of u_n(r) = a_n * sin(kappa_n * r).
    u_a : complex
        Boundary value u_n(a).
    c_n, c_bar_n : complex
        Overlaps of the initial state with u_n and with its conjugate
        partner; equal for a real initial state.
    i_n : float
        Interior norm integral of |u_n|^2 over [0, a].
    """

    pole: ResonancePole
    a_n: complex
    u_a: complex
    c_n: complex
    c_bar_n: complex
    i_n: float


def snc(z):
    """sin(z)/z, complex-safe, with a series branch near z = 0.

    The 5-term Taylor series takes over for |z| < 1e-4 where the direct
    quotient loses accuracy; the switch is continuous to ~1e-26.
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    zv = np.atleast_1d(z)
    out = np.empty_like(zv)
    small = np.abs(zv) < _SNC_SERIES_CUT
    zs = zv[small]
    z2 = zs * zs
    out[small] = 1.0 - z2 / 6.0 * (1.0 - z2 / 20.0 * (1.0 - z2 / 42.0))
    zb = zv[~small]
    out[~small] = np.sin(zb) / zb
    return complex(out[0]) if scalar else out


def _expm1c(z):
    """exp(z) - 1 for complex z without cancellation near zero."""
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    zv = np.atleast_1d(z)
    out = np.exp(zv) - 1.0
    small = np.abs(zv) < _SNC_SERIES_CUT
    zs = zv[small]
    out[small] = zs * (1.0 + zs / 2.0 * (1.0 + zs / 3.0 * (1.0 + zs / 4.0)))
    return complex(out[0]) if scalar else out


def jost_plus(model: ModelParams, k):
    """Jost function J(k) = 2ik + lam * (exp(2ika) - 1).

    Entire in k; its fourth-quadrant zeros are the resonance poles.  Note
    J(0) = 0 for every lam, so k = 0 is excluded from any division by J.
    """
    k = np.asarray(k, dtype=complex)
    out = 2j * k + model.lam * _expm1c(2j * k * model.a)
    return out if out.ndim else complex(out)


def jost_plus_prime(model: ModelParams, k):
    """Exact derivative dJ/dk = 2i + 2i*a*lam*exp(2ika)."""
    k = np.asarray(k, dtype=complex)
    out = 2j + 2j * model.a * model.lam * np.exp(2j * k * model.a)
    return out if out.ndim else complex(out)


def s_matrix(model: ModelParams, k):
    """Unitary S-matrix on the real momentum axis.

    S(k) = [2ik - lam*(exp(-2ika) - 1)] / J(k); the numerator equals
    -conj(J(k)) for real k, so |S| = 1 identically.

    Raises
    ------
    ValueError
        For k = 0, where J vanishes for every lam and S is not defined by
        this quotient.
    """
    k = np.asarray(k, dtype=float)
    if np.any(k == 0.0):
        raise ValueError("S-matrix undefined at k = 0 (Jost zero)")
    kc = k.astype(complex)
    num = 2j * kc - model.lam * _expm1c(-2j * kc * model.a)
    out = num / jost_plus(model, kc)
    return out if out.ndim else complex(out)


def continuum_wavefunction(model: ModelParams, k, r):
    """Delta-normalized scattering state psi+(k, r), k > 0 real.

    Interior (r < a): sqrt(2/pi) * 2ik * sin(kr) / J(k).
    Exterior (r >= a): sqrt(2/pi) * (i/2) * [exp(-ikr) - S(k) exp(ikr)].
    The 2ik interior factor is what makes the two branches agree at r = a
    and the states unit-normalized in the Dirac sense.
    """
    k = np.asarray(k, dtype=float)
    r = np.asarray(r, dtype=float)
    if np.any(k <= 0):
        raise ValueError("continuum momentum must be positive")
    kc, rb = np.broadcast_arrays(k.astype(complex), r)
    inner = _SQRT_2_OVER_PI * 2j * kc * np.sin(kc * rb) / jost_plus(model, kc)
    s = s_matrix(model, np.broadcast_arrays(k, r)[0])
    outer = (
        _SQRT_2_OVER_PI
        * 0.5j
        * (np.exp(-1j * kc * rb) - s * np.exp(1j * kc * rb))
    )
    out = np.where(rb < model.a, inner, outer)
    return out if out.ndim else complex(out)


def born_coefficient_continuum(model: ModelParams, k, state: Optional[InitialState] = None):
    """Momentum amplitude C(k) of the initial state over psi+(k, .).

    For the built-in box ground state the overlap integral is closed form:

        C(k) = conj(2ik / J(k)) * sqrt(a/pi)
               * [snc((s-k)a) - snc((s+k)a)],   s = pi/a.

    |C(k)|^2 dk is the probability of measuring momentum in [k, k+dk]; the
    removable singularity at k = s is handled by the snc series branch.
    A custom ``state`` falls back to Gauss-Legendre quadrature of the
    overlap against the interior wave function.
    """
    k = np.asarray(k, dtype=float)
    if np.any(k <= 0):
        raise ValueError("continuum momentum must be positive")
    kc = k.astype(complex)
    if state is not None and state.fn is not None:
        x, w = np.polynomial.legendre.leggauss(256)
        r = 0.5 * model.a * (x + 1.0)
        psi = continuum_wavefunction(model, kc[..., None].real, r)
        out = 0.5 * model.a * np.sum(w * np.conj(psi) * state(r), axis=-1)
        return out if out.ndim else complex(out)
    s = model.s
    bracket = snc((s - kc) * model.a) - snc((s + kc) * model.a)
    out = (
        np.conj(2j * kc / jost_plus(model, kc))
        * math.sqrt(model.a / math.pi)
        * bracket
    )
    return out if out.ndim else complex(out)


def normalization_constant(model: ModelParams, kappa: complex) -> complex:
    """Complex normalization A_n with u_n(r) = A_n sin(kappa_n r).

    Closed form A_n = [2*lam / (lam*a + exp(-2i*kappa_n*a))]**(1/2)
    (principal branch), which enforces the non-Hermitian normalization
    integral of u_n^2 plus its boundary term to equal one.
    """
    return complex(
        np.sqrt(2.0 * model.lam / (model.lam * model.a + np.exp(-2j * kappa * model.a)))
    )


def resonance_state(model: ModelParams, data: ResonanceStateData, r):
    """Resonance state u_n(r): A_n sin(kappa r) inside, outgoing outside.

    The exterior branch u_n(a) * exp(i*kappa*(r-a)) grows with r, as an
    outgoing-only boundary condition with complex momentum must.
    """
    r = np.asarray(r, dtype=float)
    kap = data.pole.kappa
    inner = data.a_n * np.sin(kap * r.astype(complex))
    outer = data.u_a * np.exp(1j * kap * (r - model.a))
    out = np.where(r <= model.a, inner, outer)
    return out if out.ndim else complex(out)


def sin_product_integral(p, q, a: float):
    """Closed form of int_0^a sin(p r) sin(q r) dr for complex p, q."""
    p = np.asarray(p, dtype=complex)
    q = np.asarray(q, dtype=complex)
    return 0.5 * a * (snc((p - q) * a) - snc((p + q) * a))


def overlap_cn(model: ModelParams, pole: ResonancePole, state: Optional[InitialState] = None) -> complex:
    """Overlap C_n of the initial state with u_n over [0, a].

    Closed form for the box ground state:
    C_n = A_n * sqrt(2/a) * sin_product_integral(s, kappa_n, a).
    The conjugate-partner overlap equals C_n for any real initial state.
    """
    a_n = normalization_constant(model, pole.kappa)
    if state is not None and state.fn is not None:
        x, w = np.polynomial.legendre.leggauss(256)
        r = 0.5 * model.a * (x + 1.0)
        u = a_n * np.sin(pole.kappa * r.astype(complex))
        return complex(0.5 * model.a * np.sum(w * state(r) * u))
    val = a_n * math.sqrt(2.0 / model.a) * sin_product_integral(
        model.s, pole.kappa, model.a
    )
    return complex(val)


def interior_norm_in(model: ModelParams, pole: ResonancePole, a_n: Optional[complex] = None) -> float:
    """Interior norm I_n = int_0^a |u_n|^2 dr, closed form.

    With kappa = alpha - i*beta:
    I_n = (|A_n|^2 / 4) * [sinh(2*beta*a)/beta - sin(2*alpha*a)/alpha].
    Slightly above 1 in the strong-shell regime, approaching 1 as the shell
    closes (lam -> inf).
    """
    if a_n is None:
        a_n = normalization_constant(model, pole.kappa)
    alpha, beta = pole.alpha, pole.beta
    val = (abs(a_n) ** 2 / 4.0) * (
        math.sinh(2.0 * beta * model.a) / beta
        - math.sin(2.0 * alpha * model.a) / alpha
    )
    return float(val)


def resonance_state_data(model: ModelParams, pole: ResonancePole, state: Optional[InitialState] = None) -> ResonanceStateData:
    """Assemble the full per-pole package used by every expansion."""
    a_n = normalization_constant(model, pole.kappa)
    u_a = a_n * np.sin(pole.kappa * model.a)
    c_n = overlap_cn(model, pole, state)
    return ResonanceStateData(
        pole=pole,
        a_n=a_n,
        u_a=complex(u_a),
        c_n=c_n,
        c_bar_n=c_n,
        i_n=interior_norm_in(model, pole, a_n),
    )


def normalization_residual(model: ModelParams, data: ResonanceStateData) -> float:
    """Residual of the non-Hermitian normalization condition.

    |int_0^a u_n^2 dr + i*u_n(a)^2/(2*kappa_n) - 1|; the interior integral
    is A_n^2 * (a/2) * (1 - snc(2*kappa_n*a)).
    """
    kap = data.pole.kappa
    interior = data.a_n**2 * 0.5 * model.a * (1.0 - snc(2.0 * kap * model.a))
    return abs(interior + 1j * data.u_a**2 / (2.0 * kap) - 1.0)


def width_identity_residual(data: ResonanceStateData) -> float:
    """Residual of the width identity beta_n = |u_n(a)|^2 / (2*I_n)."""
    return abs(data.pole.beta - abs(data.u_a) ** 2 / (2.0 * data.i_n))
