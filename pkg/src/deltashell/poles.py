"""Locate the fourth-quadrant resonance zeros of the Jost function.

Strategy per pole index n: start from the strong-shell asymptotic seed,
pull it into the basin with a few fixed-point sweeps of the exact relation
kappa = n*pi/a + Log(1 - 2i*kappa/lam)/(2ia), then polish with Newton on
the analytic Jost function and its exact derivative.  The fixed-point
warm-up is not cosmetic: raw Newton from the bare seed can jump across the
real axis for mid-range n at moderate lam*a.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import List, Sequence

from .model import ModelParams, ResonancePole, jost_plus, jost_plus_prime

__all__ = [
    "SolverConfig",
    "PoleSearchError",
    "WrongQuadrantError",
    "NonConvergenceError",
    "DuplicateCollapseError",
    "seed_pole",
    "seed_poles",
    "refine_pole",
    "find_poles",
]


class PoleSearchError(RuntimeError):
    """Base class for pole-search failures."""


class WrongQuadrantError(PoleSearchError):
    """Iteration left the open fourth quadrant and could not be recovered."""


class NonConvergenceError(PoleSearchError):
    """Newton failed both the step and residual criteria within budget."""


class DuplicateCollapseError(PoleSearchError):
    """Two seeds refined to the same root even after perturbation retries."""


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and budgets for the pole search.

    Defaults are calibrated for lam*a in the tens-to-hundreds range where
    the first several hundred poles refine to residuals near 1e-14.
    """

    max_iterations: int = 80
    warmup_iterations: int = 4
    step_tolerance: float = 1e-13
    residual_tolerance: float = 1e-10
    dedupe_radius: float = 1e-6
    perturbation_points: int = 8
    max_poles: int = 500

    def __post_init__(self) -> None:
        if self.max_iterations < 1 or self.warmup_iterations < 0:
            raise ValueError("iteration budgets must be positive")
        if self.step_tolerance <= 0 or self.residual_tolerance <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_poles < 1:
            raise ValueError("max_poles must be >= 1")


def seed_pole(model: ModelParams, n: int) -> complex:
    """Strong-shell asymptotic seed for the n-th pole.

    kappa_n ~ (n*pi/a) * (1 - 1/(lam*a)) - (i/a) * (n*pi/(lam*a))**2.
    Relative error is O(1/(lam*a)) and grows with n; the warm-up sweep in
    refine_pole absorbs both.
    """
    if n < 1:
        raise ValueError("pole index must be >= 1")
    if model.lam <= 0:
        raise PoleSearchError("no resonance poles exist for lam <= 0")
    la = model.lam * model.a
    x = n * math.pi / model.a
    return complex(x * (1.0 - 1.0 / la), -(n * math.pi / la) ** 2 / model.a)


def seed_poles(model: ModelParams, count: int) -> List[complex]:
    """Seeds for n = 1..count, with a reliability warning for weak shells."""
    if model.lam * model.a < 10.0:
        warnings.warn(
            "lam*a < 10: asymptotic seeds are unreliable this close to the "
            "free limit; expect refinement failures",
            stacklevel=2,
        )
    return [seed_pole(model, n) for n in range(1, count + 1)]


def _warm_start(model: ModelParams, n: int, kappa: complex, sweeps: int) -> complex:
    # exact rearrangement of J(kappa) = 0 around the n-th branch of Log
    for _ in range(sweeps):
        kappa = n * math.pi / model.a + cmath.log(
            1.0 - 2j * kappa / model.lam
        ) / (2j * model.a)
    return kappa


def refine_pole(
    model: ModelParams,
    n: int,
    seed: complex,
    config: SolverConfig = SolverConfig(),
) -> ResonancePole:
    """Refine one seed to a ResonancePole via warm-up plus Newton.

    Convergence demands both a relative step below step_tolerance and a
    Jost residual below residual_tolerance; either alone can be met by a
    stalled iterate near a crowded branch.

    Raises
    ------
    WrongQuadrantError
        If the converged root is outside the open fourth quadrant.
    NonConvergenceError
        If the budget is exhausted first.
    """
    kappa = _warm_start(model, n, seed, config.warmup_iterations)
    for _ in range(config.max_iterations):
        f = jost_plus(model, kappa)
        step = f / jost_plus_prime(model, kappa)
        kappa -= step
        if abs(step) < config.step_tolerance * (1.0 + abs(kappa)):
            residual = abs(jost_plus(model, kappa))
            if residual < config.residual_tolerance:
                if not (kappa.real > 1e-8 and kappa.imag < 0):
                    raise WrongQuadrantError(
                        f"pole {n}: root {kappa} not in fourth quadrant"
                    )
                return ResonancePole(n=n, kappa=kappa, jost_residual=residual)
    raise NonConvergenceError(
        f"pole {n}: no convergence in {config.max_iterations} Newton steps "
        f"from seed {seed}"
    )


def _perturbation_circle(seed: complex, radius: float, count: int) -> Sequence[complex]:
    return [
        seed + radius * cmath.exp(2j * math.pi * j / count) for j in range(count)
    ]


def find_poles(
    model: ModelParams,
    count: int,
    config: SolverConfig = SolverConfig(),
) -> List[ResonancePole]:
    """First ``count`` resonance poles, ordered by increasing |kappa|.

    Each seed is refined independently; collisions within dedupe_radius
    trigger retries from a small circle around the colliding seed (radius
    pi/(2*lam*a^2), half the asymptotic pole spacing error scale) before
    giving up.

    Raises
    ------
    DuplicateCollapseError
        If a collision survives every perturbation retry.
    PoleSearchError
        For lam <= 0, or count beyond the configured max_poles.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if count > config.max_poles:
        raise PoleSearchError(
            f"requested {count} poles exceeds configured cap {config.max_poles}"
        )
    seeds = seed_poles(model, count)
    found: List[ResonancePole] = []
    for n, seed in enumerate(seeds, start=1):
        pole = refine_pole(model, n, seed, config)
        if _collides(pole.kappa, found, config.dedupe_radius):
            radius = math.pi / (2.0 * model.lam * model.a**2)
            for trial in _perturbation_circle(seed, radius, config.perturbation_points):
                try:
                    pole = refine_pole(model, n, trial, config)
                except PoleSearchError:
                    continue
                if not _collides(pole.kappa, found, config.dedupe_radius):
                    break
            else:
                raise DuplicateCollapseError(
                    f"pole {n}: every retry collapsed onto an existing root"
                )
        found.append(pole)
    found.sort(key=lambda p: abs(p.kappa))
    return found


def _collides(kappa: complex, found: List[ResonancePole], radius: float) -> bool:
    return any(abs(kappa - p.kappa) < radius for p in found)
