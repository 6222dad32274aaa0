"""Resonance-pole expansions of the momentum density and related identities.

Every sum here runs over the stored fourth-quadrant poles plus their
third-quadrant mirrors, generated on the fly from the single stored set:

    kappa_{-n} = -conj(kappa_n),  u_{-n}(r) = conj(u_n(r)) for real r,
    C_{-n} = conj(C_n).

All pole sums use exact compensated summation, so results are bitwise
independent of the ordering of the state list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .model import (
    InitialState,
    ModelParams,
    ResonancePole,
    ResonanceStateData,
    born_coefficient_continuum,
    resonance_state_data,
)
from .quadrature import fsum_complex

__all__ = [
    "Truncation",
    "BornSpectrumPoint",
    "PoleHitError",
    "build_states",
    "continuum_wavefunction_resonance",
    "born_coefficient_resonance",
    "born_density_decomposition",
    "born_norm_identity",
    "strength_sum",
    "closure_reconstruct",
    "sum_rule_residual",
    "greens_resonance",
]

_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


@dataclass(frozen=True)
class Truncation:
    """Number of fourth-quadrant poles kept (mirrors always implied)."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("truncation must keep at least one pole")

    def apply(self, states: Sequence[ResonanceStateData]) -> List[ResonanceStateData]:
        if self.n > len(states):
            raise ValueError(
                f"truncation {self.n} exceeds the {len(states)} available states"
            )
        return list(states[: self.n])


@dataclass(frozen=True)
class BornSpectrumPoint:
    """Momentum density at one k, split into its resonance-sum parts.

    density_resonance is the modulus squared of the truncated amplitude;
    lorentz_direct and lorentz_mirror are the diagonal Lorentzians centered
    at +alpha_n and -alpha_n, and interference is the off-diagonal double
    sum.  The three parts recombine to density_resonance to roundoff by
    construction of the expansion, not by fiat; the truncated density may
    dip microscopically negative between distant peaks.
    """

    k: float
    density_continuum: float
    density_resonance: float
    lorentz_direct: float
    lorentz_mirror: float
    interference: float

    @property
    def decomposition_residual(self) -> float:
        """|parts sum - density_resonance|, should sit at roundoff."""
        return abs(
            self.lorentz_direct
            + self.lorentz_mirror
            + self.interference
            - self.density_resonance
        )

    @property
    def abs_deviation(self) -> float:
        return abs(self.density_resonance - self.density_continuum)


class PoleHitError(ValueError):
    """Requested momentum sits on (or numerically at) a pole."""


def build_states(
    model: ModelParams,
    poles: Sequence[ResonancePole],
    state: Optional[InitialState] = None,
) -> List[ResonanceStateData]:
    """Assemble the per-pole data packages for a pole list."""
    return [resonance_state_data(model, p, state) for p in poles]


def _mirrored(values: Sequence[complex], conjugate: bool = True, negate: bool = False):
    arr = np.asarray(values, dtype=complex)
    mirror = np.conj(arr) if conjugate else arr.copy()
    if negate:
        mirror = -mirror
    return np.concatenate([arr, mirror])


def _full_poles(states: Sequence[ResonanceStateData]) -> np.ndarray:
    kappas = [s.pole.kappa for s in states]
    return _mirrored(kappas, conjugate=True, negate=True)


def _full_boundary(states: Sequence[ResonanceStateData]) -> np.ndarray:
    return _mirrored([s.u_a for s in states])


def _full_overlaps(states: Sequence[ResonanceStateData]) -> np.ndarray:
    return _mirrored([s.c_n for s in states])


def _full_interior(states: Sequence[ResonanceStateData], r: float) -> np.ndarray:
    vals = [s.a_n * np.sin(s.pole.kappa * r) for s in states]
    return _mirrored(vals)


def _check_interior(model: ModelParams, r: float, name: str = "r") -> None:
    if not 0.0 <= r < model.a:
        raise ValueError(f"{name} = {r} outside the interior [0, a)")


def continuum_wavefunction_resonance(
    model: ModelParams,
    states: Sequence[ResonanceStateData],
    k,
    r: float,
):
    """Pole expansion of the scattering state psi+(k, r) for r inside.

    -sqrt(2/pi) * (1/2) * exp(-ika) * sum over +-n of
    u_n(a) u_n(r) / (k - kappa_n).  Valid only inside the shell; the
    closed-form state is the oracle it converges to as the truncation grows.
    """
    _check_interior(model, r)
    k = np.asarray(k, dtype=float)
    if np.any(k <= 0):
        raise ValueError("continuum momentum must be positive")
    kf = _full_poles(states)
    weights = _full_boundary(states) * _full_interior(states, r)
    kc = k.astype(complex)
    terms = weights / (kc[..., None] - kf)
    prefac = -_SQRT_2_OVER_PI * 0.5 * np.exp(-1j * kc * model.a)
    if k.ndim == 0:
        return complex(prefac * fsum_complex(terms))
    return prefac * np.array([fsum_complex(row) for row in terms])


def born_coefficient_resonance(
    model: ModelParams,
    states: Sequence[ResonanceStateData],
    k,
):
    """Pole expansion of the momentum amplitude C(k).

    -conj[ sqrt(2/pi) * (1/2) * exp(-ika) * sum over +-n of
    Cbar_n u_n(a) / (k - kappa_n) ].  This is the module's ground-truth
    resonance form; the Lorentzian decomposition must reproduce its
    modulus squared.
    """
    k = np.asarray(k, dtype=float)
    if np.any(k <= 0):
        raise ValueError("continuum momentum must be positive")
    kf = _full_poles(states)
    weights = _mirrored([s.c_bar_n for s in states]) * _full_boundary(states)
    kc = k.astype(complex)
    terms = weights / (kc[..., None] - kf)
    prefac = _SQRT_2_OVER_PI * 0.5 * np.exp(-1j * kc * model.a)
    if k.ndim == 0:
        return complex(np.conj(-prefac * fsum_complex(terms)))
    return np.conj(
        -prefac * np.array([fsum_complex(row) for row in terms])
    )


def born_density_decomposition(
    model: ModelParams,
    states: Sequence[ResonanceStateData],
    k: float,
) -> BornSpectrumPoint:
    """Split |C_res(k)|^2 into direct, mirror, and interference parts.

    With g_n = C_n u_n(a), the squared amplitude is the double sum
    (1/2pi) sum_{n,m} g_n conj(g_m) / [(k - kappa_n)(k - conj(kappa_m))].
    Diagonal n = m terms collapse through the width identity
    |u_n(a)|^2 = 2 I_n beta_n into the Lorentzians
    (1/pi) |C_n|^2 I_n beta_n / ((k -+ alpha_n)^2 + beta_n^2); everything
    off-diagonal is reported as interference, computed independently so the
    recombination is a real consistency check.
    """
    k = float(k)
    if k <= 0:
        raise ValueError("continuum momentum must be positive")
    amp = born_coefficient_resonance(model, states, k)
    density_res = abs(amp) ** 2

    direct_terms = []
    mirror_terms = []
    for s in states:
        alpha, beta = s.pole.alpha, s.pole.beta
        scale = abs(s.c_n) ** 2 * s.i_n / math.pi
        direct_terms.append(scale * beta / ((k - alpha) ** 2 + beta**2))
        mirror_terms.append(scale * beta / ((k + alpha) ** 2 + beta**2))
    lorentz_direct = math.fsum(direct_terms)
    lorentz_mirror = math.fsum(mirror_terms)

    kf = _full_poles(states)
    g = _full_overlaps(states) * _full_boundary(states)
    resolvent = g / (k - kf)
    cross = np.outer(resolvent, np.conj(resolvent))
    np.fill_diagonal(cross, 0.0)
    interference = fsum_complex(cross.ravel()).real / (2.0 * math.pi)

    density_cont = abs(born_coefficient_continuum(model, k)) ** 2
    return BornSpectrumPoint(
        k=k,
        density_continuum=density_cont,
        density_resonance=density_res,
        lorentz_direct=lorentz_direct,
        lorentz_mirror=lorentz_mirror,
        interference=interference,
    )


def born_norm_identity(model: ModelParams, states: Sequence[ResonanceStateData]) -> dict:
    """Integrated momentum-density budget of the truncated expansion.

    The truncated density is even in k, so its half-line integral has the
    exact residue form

        total = (i/2) sum_{n,m} g_n conj(g_m) / (conj(kappa_m) - kappa_n)

    over the full mirrored index set.  Diagonal terms reduce to
    direct_sum = sum |C_n|^2 I_n; interference is reported with the sign
    convention total = direct_sum - interference.  total -> 1 with growing
    truncation while direct_sum alone stays above 1.
    """
    if not states:
        raise ValueError("states must be non-empty")
    kf = _full_poles(states)
    g = _full_overlaps(states) * _full_boundary(states)
    denom = np.conj(kf)[None, :] - kf[:, None]
    table = 0.5j * np.outer(g, np.conj(g)) / denom
    total = fsum_complex(table.ravel()).real
    direct_sum = math.fsum(abs(s.c_n) ** 2 * s.i_n for s in states)
    return {
        "direct_sum": direct_sum,
        "interference": direct_sum - total,
        "total": total,
    }


def strength_sum(model: ModelParams, states: Sequence[ResonanceStateData]) -> float:
    """Re sum_{n=1..N} C_n Cbar_n, the expansion-strength identity.

    The complex products C_n Cbar_n are not probabilities, but their real
    parts sum to 1 for a unit-norm initial state as the truncation grows.
    """
    if not states:
        raise ValueError("states must be non-empty")
    return fsum_complex([s.c_n * s.c_bar_n for s in states]).real


def closure_reconstruct(
    model: ModelParams,
    states: Sequence[ResonanceStateData],
    r: float,
    state: Optional[InitialState] = None,
) -> float:
    """Residual of rebuilding the initial state from resonance states.

    |Psi(r, 0) - (1/2) sum over +-n of C_n u_n(r)| at an interior point;
    decreases with truncation, slowest near the shell where the expansion
    must manufacture the kink.
    """
    _check_interior(model, r)
    if state is None:
        state = InitialState(a=model.a)
    terms = _full_overlaps(states) * _full_interior(states, r)
    rebuilt = 0.5 * fsum_complex(terms)
    return abs(state(r) - rebuilt)


def sum_rule_residual(
    model: ModelParams,
    states: Sequence[ResonanceStateData],
    r: float,
    r_prime: float,
) -> complex:
    """Truncated value of (1/2) sum over +-n of u_n(r) u_n(r') / kappa_n.

    The infinite sum vanishes identically on the validity region (both
    points inside the shell, or one exactly on it); the returned complex
    number is therefore a pure truncation residual.  Mirror terms carry an
    odd power of kappa, so the result is purely imaginary up to roundoff.
    """
    _validity_region(model, r, r_prime)
    kf = _full_poles(states)
    terms = _full_interior(states, r) * _full_interior(states, r_prime) / kf
    return 0.5 * fsum_complex(terms)


def greens_resonance(
    model: ModelParams,
    states: Sequence[ResonanceStateData],
    k: complex,
    r: float,
    r_prime: float,
    pole_hit_tolerance: float = 1e-8,
) -> complex:
    """Pole expansion of the outgoing Green's function G+(r, r'; k).

    (1/2k) sum over +-n of u_n(r) u_n(r') / (k - kappa_n), symmetric in
    (r, r') term by term.  Multiplying by -sqrt(2/pi) k exp(-ika) at
    r' = a reproduces the continuum state, which is how this expansion is
    validated against the closed form.

    Raises
    ------
    PoleHitError
        If k is within pole_hit_tolerance of any stored or mirror pole,
        or k = 0 where the prefactor diverges.
    """
    _validity_region(model, r, r_prime)
    k = complex(k)
    if abs(k) < pole_hit_tolerance:
        raise PoleHitError("Green's function prefactor 1/2k diverges at k = 0")
    kf = _full_poles(states)
    gaps = np.abs(k - kf)
    if np.any(gaps < pole_hit_tolerance):
        nearest = kf[int(np.argmin(gaps))]
        raise PoleHitError(f"k = {k} within {pole_hit_tolerance} of pole {nearest}")
    u_r = _full_interior(states, r) if r < model.a else _full_boundary(states)
    u_rp = _full_interior(states, r_prime) if r_prime < model.a else _full_boundary(states)
    terms = u_r * u_rp / (k - kf)
    return fsum_complex(terms) / (2.0 * k)


def _validity_region(model: ModelParams, r: float, r_prime: float) -> None:
    # both points must sit inside the shell, or one exactly on it
    if r < 0 or r_prime < 0 or r > model.a or r_prime > model.a:
        raise ValueError("both radii must lie in [0, a]")
    if r == model.a and r_prime == model.a:
        raise ValueError("at most one radius may sit on the shell")
