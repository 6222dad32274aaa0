"""Time evolution of the confined state in both bases.

The resonance route propagates each quasinormal term with the closed-form
propagator factor M(x, kappa, t); the continuum route integrates
C(k) psi+(k, r) exp(-i k^2 t) over momentum with the adaptive engine and
serves as the oracle.  Survival amplitude, non-escape probability, and the
exponential / power-law asymptotics all live here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .expansion import (
    _full_boundary,
    _full_interior,
    _full_overlaps,
    _full_poles,
    _mirrored,
)
from .model import (
    InitialState,
    ModelParams,
    ResonanceStateData,
    born_coefficient_continuum,
    continuum_wavefunction,
    sin_product_integral,
)
from .quadrature import (
    Integrand,
    QuadratureResult,
    QuadratureSpec,
    fsum_complex,
    gk_nodes_weights,
    integrate_semi_infinite,
    panel_edges,
)
from .special_functions import moshinsky_m

__all__ = [
    "EvolutionSample",
    "OverlapMatrix",
    "wavefunction_resonance",
    "wavefunction_continuum",
    "survival_amplitude",
    "survival_asymptotic",
    "nonescape_probability",
    "overlap_matrix",
    "born_norm_quadrature",
    "lifetime",
    "fit_exponential_rate",
    "survival_loglog_slope",
    "crossover_time",
    "regime_tag",
    "default_time_grid",
]

_BASES = ("resonance", "continuum", "asymptotic")

# Good defaults for the oscillatory momentum integrals; absolute-error
# driven because late-time amplitudes are tiny.
_SURVIVAL_SPEC = QuadratureSpec(abs_tolerance=1e-8, rel_tolerance=1e-8)
_WAVE_SPEC = QuadratureSpec(abs_tolerance=1e-6, rel_tolerance=1e-6)


@dataclass(frozen=True)
class EvolutionSample:
    """One evaluated point of an evolution curve.

    Probabilities from a truncated expansion can exceed 1 by a few parts in
    1e6 at t = 0 (the truncation excess of the reconstructed state); the
    value is stored raw, never clipped.
    """

    t: float
    value: complex
    basis: str
    r: Optional[float] = None

    def __post_init__(self) -> None:
        if self.t < 0:
            raise ValueError("time must be nonnegative")
        if self.basis not in _BASES:
            raise ValueError(f"basis must be one of {_BASES}")


@dataclass(frozen=True, eq=False)
class OverlapMatrix:
    """Interior overlap matrix over the mirrored pole set.

    i_nl[n, l] = int_0^a u_n(r) conj(u_l(r)) dr, ordered with the stored
    fourth-quadrant poles first and their mirrors after, so the first N
    diagonal entries are the interior norms I_n.
    """

    i_nl: np.ndarray

    @property
    def hermiticity_residual(self) -> float:
        return float(np.max(np.abs(self.i_nl - self.i_nl.conj().T)))

    @property
    def diagonal(self) -> np.ndarray:
        return np.real(np.diag(self.i_nl))


def overlap_matrix(model: ModelParams, states: Sequence[ResonanceStateData]) -> OverlapMatrix:
    """Closed-form overlap matrix I_nl for the mirrored pole set.

    Each entry is A_n conj(A_l) times the sine-product integral of
    sin(kappa_n r) sin(conj(kappa_l) r) over the interior; Hermitian by
    construction, with diagonal equal to the interior norms.
    """
    if not states:
        raise ValueError("states must be non-empty")
    kf = _full_poles(states)
    af = _mirrored([s.a_n for s in states], negate=True)
    sp = sin_product_integral(kf[:, None], np.conj(kf)[None, :], model.a)
    return OverlapMatrix(i_nl=np.outer(af, np.conj(af)) * sp)


def wavefunction_resonance(
    model: ModelParams,
    states: Sequence[ResonanceStateData],
    r: float,
    t: float,
) -> complex:
    """Resonance-sum wave function Psi(r, t) for t > 0, any r >= 0.

    Interior points use C_n u_n(r) M(0, kappa_n, t); exterior points use
    the boundary value and the shifted argument, C_n u_n(a)
    M(r - a, kappa_n, t).  The two branches agree at r = a identically.
    """
    if t <= 0:
        raise ValueError("resonance-sum evolution requires t > 0")
    if r < 0:
        raise ValueError("radius must be nonnegative")
    kf = _full_poles(states)
    cf = _full_overlaps(states)
    if r < model.a:
        u = _full_interior(states, r)
        m = moshinsky_m(0.0, kf, t)
    else:
        u = _full_boundary(states)
        m = moshinsky_m(r - model.a, kf, t)
    return fsum_complex(cf * u * m)


def _born_density_integrand(model: ModelParams, t: float) -> Integrand:
    """|C(k)|^2 exp(-i k^2 t) with its analytic tail and panel metadata."""
    s, lam, a = model.s, model.lam, model.a
    b0 = 4.0 * s * s / (math.pi * a)

    def f(k):
        c = born_coefficient_continuum(model, k)
        dens = c.real**2 + c.imag**2
        if t == 0.0:
            return dens
        return dens * np.exp(-1j * k * k * t)

    # |C|^2 <= b0 * (lam+k)^2 / (k^2 (k^2-s^2)^2) for k well above s,
    # from |J| >= sqrt(lam^2+4k^2) - lam = 4k^2/(sqrt(lam^2+4k^2)+lam)
    # and the exact bracket identity |bracket| <= (2s/a)/(k^2-s^2).
    def envelope(k: float) -> float:
        if k <= 1.5 * s:
            return math.inf
        return b0 * (lam + k) ** 2 / (k**2 * (k**2 - s**2) ** 2)

    def envelope_integral(kc: float) -> float:
        if kc <= 1.5 * s:
            return math.inf
        guard = 1.0 / (1.0 - (s / kc) ** 2) ** 2
        return b0 * guard * (
            lam**2 / (5.0 * kc**5) + lam / (2.0 * kc**4) + 1.0 / (3.0 * kc**3)
        )

    credit = None
    if t > 0.0:
        # one integration by parts against the quadratic phase
        credit = lambda kc: envelope(kc) / (kc * t)

    return Integrand(
        f=f,
        tail_envelope=envelope,
        tail_envelope_integral=envelope_integral,
        oscillation_credit=credit,
        width_hint=_born_width_hint(model, t, x=0.0),
        sharp_features=_born_sharp_features(model),
    )


def _born_width_hint(model: ModelParams, t: float, x: float):
    # between-peak trig scale, tightened by the chirp period where relevant
    base = math.pi / (6.0 * model.a)

    def hint(k):
        k = np.asarray(k, dtype=float)
        w = np.full_like(k, base)
        if t > 0.0:
            chirp = 1.5 * math.pi / (
                np.abs(x - 2.0 * t * k) + 2.0 * math.sqrt(t)
            )
            w = np.minimum(w, chirp)
        return w

    return hint


def _born_sharp_features(model: ModelParams):
    """Near-axis resonance peaks of |C|^2: centers and Lorentzian widths."""
    lam, a = model.lam, model.a

    def features(lo: float, hi: float):
        if lam * a < 2.0:
            return np.empty(0), np.empty(0)
        spacing = (math.pi / a) * (1.0 - 1.0 / (lam * a))
        n_hi = int(hi / spacing) + 1
        n = np.arange(1, max(n_hi + 1, 2))
        centers = n * spacing
        widths = np.clip(centers**2 / (a * lam**2) / 2.0, 1e-9, spacing / 6.0)
        keep = (centers > lo) & (centers < hi)
        return centers[keep], widths[keep]

    return features


def _wave_integrand(model: ModelParams, r: float, t: float) -> Integrand:
    """C(k) psi+(k, r) exp(-i k^2 t) with tail metadata."""
    s, lam, a = model.s, model.lam, model.a
    b1 = 2.0 * math.sqrt(2.0) * s / (math.pi * math.sqrt(a))

    def f(k):
        c = born_coefficient_continuum(model, k)
        psi = continuum_wavefunction(model, k, r)
        out = c * psi
        if t > 0.0:
            out = out * np.exp(-1j * k * k * t)
        return out

    # |C psi| <= b1 (lam+k)^2 / (k^2 (k^2-s^2)); decays only like 1/k^2,
    # so the tail is controlled through oscillation, not raw magnitude
    def envelope(k: float) -> float:
        if k <= 1.5 * s:
            return math.inf
        return b1 * (lam + k) ** 2 / (k**2 * (k**2 - s**2))

    def envelope_integral(kc: float) -> float:
        if kc <= 1.5 * s:
            return math.inf
        guard = 1.0 / (1.0 - (s / kc) ** 2)
        return b1 * guard * (
            lam**2 / (3.0 * kc**3) + lam / kc**2 + 1.0 / kc
        )

    if t > 0.0:
        credit = lambda kc: envelope(kc) / (kc * t)
    else:
        # trig-only credit: slowest surviving beat frequency is |a - r|
        # against the shell phase; useless when r sits on the shell
        freq = abs(a - r)
        if freq < 0.05 * a:
            credit = None
        else:
            credit = lambda kc: 2.0 * envelope(kc) / freq

    return Integrand(
        f=f,
        tail_envelope=envelope,
        tail_envelope_integral=envelope_integral,
        oscillation_credit=credit,
        width_hint=_born_width_hint(model, t, x=0.0),
        sharp_features=_born_sharp_features(model),
    )


def wavefunction_continuum(
    model: ModelParams,
    r: float,
    t: float,
    spec: QuadratureSpec = _WAVE_SPEC,
) -> complex:
    """Continuum-basis wave function: int_0^inf C(k) psi+(k, r) e^{-ik^2 t} dk.

    The oracle for the resonance form.  Cost grows roughly like K^2 t with
    the chirp, so late times are expensive; tolerances come from ``spec``.

    Raises
    ------
    QuadratureFailure
        If the tolerance cannot be met within the panel budget.
    """
    if t < 0:
        raise ValueError("time must be nonnegative")
    if r < 0:
        raise ValueError("radius must be nonnegative")
    result = integrate_semi_infinite(_wave_integrand(model, r, t), spec)
    return complex(result.value)


def survival_amplitude(
    model: ModelParams,
    states: Sequence[ResonanceStateData],
    t: float,
    basis: str = "resonance",
    spec: QuadratureSpec = _SURVIVAL_SPEC,
) -> complex:
    """Survival amplitude A(t) of the initial state.

    resonance basis: sum over +-n of C_n Cbar_n M(0, kappa_n, t), with the
    exact limit M -> 1/2 applied at t = 0.  continuum basis:
    int_0^inf |C(k)|^2 e^{-ik^2 t} dk.  Both start at 1 up to the
    truncation (resonance) or quadrature (continuum) error.
    """
    if t < 0:
        raise ValueError("time must be nonnegative")
    if basis == "resonance":
        cf = _full_overlaps(states)
        cbarf = _mirrored([s.c_bar_n for s in states])
        if t == 0.0:
            return fsum_complex(0.5 * cf * cbarf)
        m = moshinsky_m(0.0, _full_poles(states), t)
        return fsum_complex(cf * cbarf * m)
    if basis == "continuum":
        result = integrate_semi_infinite(_born_density_integrand(model, t), spec)
        return complex(result.value)
    raise ValueError(f"unknown basis {basis!r} for survival amplitude")


def born_norm_quadrature(
    model: ModelParams,
    spec: QuadratureSpec = _SURVIVAL_SPEC,
) -> QuadratureResult:
    """Adaptive check of int_0^inf |C(k)|^2 dk = 1 with the analytic tail."""
    return integrate_semi_infinite(_born_density_integrand(model, 0.0), spec)


def survival_asymptotic(
    model: ModelParams,
    states: Sequence[ResonanceStateData],
    t: float,
) -> complex:
    """Two-regime asymptotic survival amplitude.

    Exponential part: sum over stored poles of C_n Cbar_n e^{-i kappa_n^2 t}
    (each term decays, mirrors are excluded because their exponentials would
    grow).  Long-time part: -i/(2 sqrt(pi i)) Im{sum C_n Cbar_n / kappa_n^3}
    times t^(-3/2), the leading surviving term of the large-argument
    expansion of M after mirror cancellation removes the t^(-1/2) order.
    """
    if t <= 0:
        raise ValueError("asymptotic form requires t > 0")
    exp_part, power_part = _asymptotic_parts(states, t)
    return exp_part + power_part


def _asymptotic_parts(states: Sequence[ResonanceStateData], t: float):
    cc = np.array([s.c_n * s.c_bar_n for s in states])
    kap = np.array([s.pole.kappa for s in states])
    exp_part = fsum_complex(cc * np.exp(-1j * kap**2 * t))
    coeff = _powerlaw_coefficient(states)
    return exp_part, coeff * t**-1.5


def _powerlaw_coefficient(states: Sequence[ResonanceStateData]) -> complex:
    im3 = fsum_complex(
        [s.c_n * s.c_bar_n / s.pole.kappa**3 for s in states]
    ).imag
    return -1j / (2.0 * np.sqrt(np.pi * 1j)) * im3


def nonescape_probability(
    model: ModelParams,
    states: Sequence[ResonanceStateData],
    overlaps: Optional[OverlapMatrix],
    t: float,
    basis: str = "resonance",
    k_max: float = 20.0,
    r_nodes: int = 64,
) -> float:
    """Probability of remaining inside the shell, P(t) = int_0^a |Psi|^2 dr.

    resonance basis: the quadratic form v(t)^dagger I v(t) with
    v_n = C_n M(0, kappa_n, t) over the mirrored set and I the overlap
    matrix; exact Cauchy-Schwarz gives P >= |A|^2 at equal truncation.
    continuum basis: oracle-grade fixed composite momentum rule resolving
    peaks and chirp, then a Gauss-Legendre radial integral; accuracy is
    limited by k_max (momentum mass above it is dropped).
    """
    if t < 0:
        raise ValueError("time must be nonnegative")
    if basis == "resonance":
        if overlaps is None:
            overlaps = overlap_matrix(model, states)
        cf = _full_overlaps(states)
        if t == 0.0:
            v = 0.5 * cf
        else:
            v = cf * moshinsky_m(0.0, _full_poles(states), t)
        table = np.outer(v, np.conj(v)) * overlaps.i_nl
        return fsum_complex(table.ravel()).real
    if basis == "continuum":
        integrand = _born_density_integrand(model, t)
        edges = panel_edges(
            0.0,
            k_max,
            width_hint=integrand.width_hint,
            sharp_features=integrand.sharp_features,
        )
        k, w = gk_nodes_weights(edges)
        c = born_coefficient_continuum(model, k)
        phase = np.exp(-1j * k * k * t) if t > 0 else 1.0
        x, gw = np.polynomial.legendre.leggauss(r_nodes)
        r = 0.5 * model.a * (x + 1.0)
        psi = continuum_wavefunction(model, k[None, :], r[:, None])
        amp = psi @ (w * c * phase)
        return float(0.5 * model.a * np.sum(gw * np.abs(amp) ** 2))
    raise ValueError(f"unknown basis {basis!r} for nonescape probability")


def lifetime(states: Sequence[ResonanceStateData]) -> float:
    """1 / decay rate of the slowest stored pole (the natural time unit)."""
    return 1.0 / min(s.pole.decay_rate for s in states)


def fit_exponential_rate(
    model: ModelParams,
    states: Sequence[ResonanceStateData],
    t_lo: float,
    t_hi: float,
    points: int = 33,
) -> float:
    """Least-squares decay rate of S(t) = |A(t)|^2 on [t_lo, t_hi]."""
    ts = np.linspace(t_lo, t_hi, points)
    logs = [
        math.log(abs(survival_amplitude(model, states, float(t))) ** 2)
        for t in ts
    ]
    return -float(np.polyfit(ts, logs, 1)[0])


def survival_loglog_slope(
    model: ModelParams,
    states: Sequence[ResonanceStateData],
    t_lo: float,
    t_hi: float,
    points: int = 25,
) -> float:
    """Log-log slope of S(t) from the asymptotic form on [t_lo, t_hi]."""
    ts = np.geomspace(t_lo, t_hi, points)
    logs = [
        math.log(abs(survival_asymptotic(model, states, float(t))) ** 2)
        for t in ts
    ]
    return float(np.polyfit(np.log(ts), logs, 1)[0])


def crossover_time(
    model: ModelParams,
    states: Sequence[ResonanceStateData],
    bracket: Optional[tuple] = None,
) -> float:
    """Time where the exponential and power-law survival terms cross.

    Solved in log magnitude so the exponential never underflows; the
    leading pole dominates the exponential part well before the crossing,
    making the bracketed root unique.
    """
    tau = lifetime(states)
    if bracket is None:
        bracket = (3.0 * tau, 1e6 * tau)
    cc = np.array([s.c_n * s.c_bar_n for s in states])
    kap = np.array([s.pole.kappa for s in states])
    k1 = min(kap, key=lambda z: -2.0 * (z**2).imag)
    gamma1 = -2.0 * (k1**2).imag
    pw = abs(_powerlaw_coefficient(states))
    if pw == 0.0:
        raise ValueError("power-law coefficient vanished; no crossover")

    def gap(t: float) -> float:
        # log |sum cc e^{-i kap^2 t}| with the leading decay factored out
        rel = fsum_complex(cc * np.exp(-1j * (kap**2 - k1**2) * t))
        log_exp = math.log(abs(rel)) - 0.5 * gamma1 * t
        return log_exp - (math.log(pw) - 1.5 * math.log(t))

    return float(brentq(gap, bracket[0], bracket[1], xtol=1e-6, rtol=1e-12))


def regime_tag(t: float, tau: float, t_star: float) -> str:
    """early (< 0.1 tau), exponential, or powerlaw (>= crossover)."""
    if t < 0.1 * tau:
        return "early"
    if t >= t_star:
        return "powerlaw"
    return "exponential"


def default_time_grid(
    tau: float,
    decades_lo: float = -3.0,
    decades_hi: float = 6.0,
    per_decade: int = 40,
) -> np.ndarray:
    """Geometric time grid in units of tau, 40 points per decade default."""
    n = int(round((decades_hi - decades_lo) * per_decade)) + 1
    return tau * np.logspace(decades_lo, decades_hi, n)
