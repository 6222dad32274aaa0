"""Faddeeva function and the Moshinsky propagation kernel.

The kernel M carries the entire time dependence of every pole term in the
resonance expansions: for a complex momentum ``kappa`` below the real axis
it interpolates between the resonance exponential ``exp(-i*kappa**2*t)`` at
intermediate times and a ``t**-3/2`` power tail at long times.

Units are hbar = 2m = 1 throughout, so momenta square to energies and the
free propagator phase is ``exp(-i*k**2*t)``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import wofz

__all__ = ["faddeeva", "moshinsky_m"]

_SQRT_HALF = math.sqrt(0.5)
# exp(-i*pi/4), the rotation taking the quadratic phase into a real Gaussian
_ROT = complex(_SQRT_HALF, -_SQRT_HALF)


def faddeeva(z):
    """Faddeeva function w(z) = exp(-z**2) * erfc(-i*z).

    Parameters
    ----------
    z : complex or ndarray
        Any finite argument.  All four quadrants are supported; in the lower
        half plane the reflection w(-z) = 2*exp(-z**2) - w(z) is applied
        internally by the backend, so accuracy is uniform as long as the
        result is representable.

    Returns
    -------
    complex or ndarray
        w(z), relative accuracy better than 1e-13 for |z| <= 10.

    Raises
    ------
    OverflowError
        If |w(z)| exceeds double range (possible deep in the lower half
        plane where w grows like exp(|z|**2)); no non-finite value escapes.
    """
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise ValueError("faddeeva requires finite arguments")
    w = wofz(z)
    if not np.all(np.isfinite(w)):
        raise OverflowError("faddeeva result exceeds double range")
    return w if w.ndim else complex(w)


def moshinsky_m(x, kappa, t):
    """Propagation kernel M(x, kappa, t).

    Closed form of the contour integral
    ``(i/2pi) * int dk exp(i*k*x) * exp(-i*k**2*t) / (k - kappa)``
    over the real line:

        M = (1/2) * exp(i*x**2/(4t)) * w(i*y),
        y = exp(-i*pi/4) * (x - 2*kappa*t) / (2*sqrt(t)).

    The constants were calibrated once against adaptive quadrature of the
    defining integral and are frozen by a regression fixture.

    Parameters
    ----------
    x : float
        Spatial offset (0 inside the interaction region, r - a outside).
    kappa : complex or ndarray
        Pole momentum; either a fourth-quadrant resonance momentum or its
        third-quadrant mirror.
    t : float
        Time, strictly positive.  The t -> 0+ limits (1/2 for x = 0, 0 for
        x > 0) are taken by the callers that need them, not here.

    Returns
    -------
    complex or ndarray
        Kernel value(s), finite for every valid input.
    """
    if t <= 0:
        raise ValueError("moshinsky_m requires t > 0")
    kappa = np.asarray(kappa, dtype=complex)
    y = _ROT * (x - 2.0 * kappa * t) / (2.0 * math.sqrt(t))
    # For fourth-quadrant kappa the argument i*y lands where w is evaluated
    # through the reflection formula; |exp(-(iy)**2)| = |exp(-i*kappa**2*t)|
    # <= 1 there, so no overflow is possible for physical poles.
    m = 0.5 * np.exp(1j * x * x / (4.0 * t)) * wofz(1j * y)
    if not np.all(np.isfinite(m)):
        raise OverflowError("moshinsky kernel overflowed; kappa not physical")
    return m if m.ndim else complex(m)
