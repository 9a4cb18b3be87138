"""Curvature-indexed trigonometric functions.

For a curvature parameter ``kappa`` these interpolate between circular
(``kappa > 0``), linear (``kappa = 0``) and hyperbolic (``kappa < 0``)
behaviour.  Every bound formula in :mod:`trivopt.bounds` is assembled
from them.
"""

from __future__ import annotations

import math

from .errors import DomainError

# Below this size of kappa * t**2 the closed forms lose digits to
# cancellation, so a short Taylor expansion is used instead; it is exact
# to double precision there and keeps the functions continuous in kappa
# across kappa = 0.
_SERIES_CUTOFF = 1e-8


def sn(kappa: float, t: float) -> float:
    """Solution of ``x'' + kappa x = 0`` with ``x(0) = 0``, ``x'(0) = 1``.

    Equals ``sin(sqrt(kappa) t)/sqrt(kappa)`` for positive curvature,
    ``t`` for zero curvature and ``sinh(sqrt(-kappa) t)/sqrt(-kappa)``
    for negative curvature.  Requires ``t >= 0``.
    """
    if t < 0:
        raise DomainError(f"sn requires t >= 0, got t={t}")
    z = kappa * t * t
    if abs(z) < _SERIES_CUTOFF:
        return t * (1.0 - z / 6.0 + z * z / 120.0)
    if kappa > 0:
        rk = math.sqrt(kappa)
        return math.sin(rk * t) / rk
    rk = math.sqrt(-kappa)
    return math.sinh(rk * t) / rk


def sn_prime(kappa: float, t: float) -> float:
    """Derivative of :func:`sn` in ``t`` (cos / 1 / cosh profile)."""
    if t < 0:
        raise DomainError(f"sn_prime requires t >= 0, got t={t}")
    z = kappa * t * t
    if abs(z) < _SERIES_CUTOFF:
        return 1.0 - z / 2.0 + z * z / 24.0
    if kappa > 0:
        return math.cos(math.sqrt(kappa) * t)
    return math.cosh(math.sqrt(-kappa) * t)


def pi_kappa(kappa: float) -> float:
    """First positive zero of ``sn(kappa, .)``: ``pi/sqrt(kappa)``, or infinity for ``kappa <= 0``."""
    if kappa > 0:
        return math.pi / math.sqrt(kappa)
    return math.inf


def ct(kappa: float, t: float) -> float:
    """Generalized cotangent ``sn_prime / sn``, defined on ``0 < t < pi_kappa``."""
    if not 0.0 < t < pi_kappa(kappa):
        raise DomainError(
            f"ct requires 0 < t < pi_kappa={pi_kappa(kappa)}, got t={t} at kappa={kappa}"
        )
    return sn_prime(kappa, t) / sn(kappa, t)


def zeta1(kappa: float, r: float) -> float:
    """Convexity envelope ``max(1, r * ct(kappa, r))``; equals 1 for ``kappa >= 0``."""
    if r <= 0:
        raise DomainError(f"zeta1 requires r > 0, got r={r}")
    if kappa >= 0:
        # r * ct <= 1 on the whole domain, and the envelope extends past
        # pi_kappa as the constant 1.
        return 1.0
    return max(1.0, r * ct(kappa, r))


def zeta2(kappa: float, r: float) -> float:
    """Concavity envelope ``min(1, r * ct(kappa, r))``; equals 1 for ``kappa <= 0``."""
    if r <= 0:
        raise DomainError(f"zeta2 requires r > 0, got r={r}")
    if kappa <= 0:
        return 1.0
    return min(1.0, r * ct(kappa, r))
