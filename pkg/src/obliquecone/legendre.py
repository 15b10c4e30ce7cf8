"""Legendre functions of real degree on the cut, orders 0 and 1.

This module is the single source of truth for P_a(z), P^1_a(z), their
z-derivatives and finite-difference degree-derivatives.  Everything else in
the package evaluates Legendre functions through it.

Evaluation uses the Gauss hypergeometric series

    P_a(z) = 2F1(-a, a + 1; 1; (1 - z)/2),

truncated once the running term drops below 1e-16 times the partial sum,
with a hard cap of 20000 terms.  The argument (1 - z)/2 lies in [0, 1) on
the accepted domain, so convergence is geometric; it degrades as z -> -1,
which is why the domain is cut off at z > -1 + 1e-3.

An independent quadrature oracle (`legendre_p_quadrature`) is provided for
cross-validation only; nothing in the evaluation path depends on it.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .errors import DomainError, NonConvergence

#: Lower cutoff for the argument: z must satisfy z > -1 + Z_CUTOFF.
Z_CUTOFF = 1e-3

#: Relative size at which the running series term is considered negligible.
SERIES_TOL = 1e-16

#: Hard cap on the number of series terms.
SERIES_CAP = 20000

#: Default step for finite-difference degree-derivatives.
DEGREE_STEP = 1e-5


def _check_args(alpha: float, z: float) -> None:
    if not (math.isfinite(alpha) and alpha >= -1.0):
        raise DomainError(f"degree must be finite and >= -1, got {alpha}")
    if not (-1.0 + Z_CUTOFF < z <= 1.0):
        raise DomainError(
            f"argument must lie in (-1 + {Z_CUTOFF}, 1], got {z}"
        )


def legendre_p(alpha: float, z: float) -> float:
    """Legendre function P_a(z) of real degree a >= -1, z in (-1+1e-3, 1].

    Raises DomainError outside the accepted domain and NonConvergence if
    the series does not meet its tolerance within the term cap.
    """
    _check_args(alpha, z)
    x = 0.5 * (1.0 - z)
    if x == 0.0:
        return 1.0
    term = 1.0
    total = 1.0
    for k in range(SERIES_CAP):
        term *= (k - alpha) * (k + alpha + 1.0) / ((k + 1.0) * (k + 1.0)) * x
        total += term
        if abs(term) <= SERIES_TOL * abs(total):
            return total
    raise NonConvergence(
        f"series for P_{alpha}({z}) did not converge in {SERIES_CAP} terms"
    )


def legendre_p_many(alphas: np.ndarray, z: float) -> np.ndarray:
    """Vectorized `legendre_p` over an array of degrees at a fixed argument.

    Used by the root-scan paths; term recurrence and stopping rule match the
    scalar evaluation element by element.
    """
    alphas = np.asarray(alphas, dtype=float)
    if alphas.size == 0:
        return np.zeros(0)
    if not (np.all(np.isfinite(alphas)) and np.all(alphas >= -1.0)):
        raise DomainError("degrees must be finite and >= -1")
    if not (-1.0 + Z_CUTOFF < z <= 1.0):
        raise DomainError(f"argument must lie in (-1 + {Z_CUTOFF}, 1], got {z}")
    x = 0.5 * (1.0 - z)
    total = np.ones_like(alphas)
    if x == 0.0:
        return total
    term = np.ones_like(alphas)
    active = np.ones(alphas.shape, dtype=bool)
    for k in range(SERIES_CAP):
        term[active] *= (
            (k - alphas[active])
            * (k + alphas[active] + 1.0)
            / ((k + 1.0) * (k + 1.0))
            * x
        )
        total[active] += term[active]
        active &= np.abs(term) > SERIES_TOL * np.abs(total)
        if not active.any():
            return total
    raise NonConvergence(
        f"series did not converge in {SERIES_CAP} terms for {int(active.sum())} degrees"
    )


def legendre_dp_dz(alpha: float, z: float) -> float:
    """dP_a/dz via the identity P_a'(z) = (a+1)(z P_a(z) - P_{a+1}(z))/(1-z^2).

    The denominator vanishes at z = 1, so that point is rejected.
    """
    if z == 1.0:
        raise DomainError("derivative identity is singular at z = 1")
    _check_args(alpha, z)
    return (alpha + 1.0) * (z * legendre_p(alpha, z) - legendre_p(alpha + 1.0, z)) / (
        1.0 - z * z
    )


def legendre_p1(alpha: float, z: float) -> float:
    """Associated Legendre function P^1_a(z) = -(1-z^2)^(1/2) dP_a/dz.

    At z = 1 the square-root factor vanishes faster than the derivative
    grows, so 0 is returned by continuity.
    """
    _check_args(alpha, z)
    if z == 1.0:
        return 0.0
    return -math.sqrt(1.0 - z * z) * legendre_dp_dz(alpha, z)


def legendre_dp1_dz(alpha: float, z: float) -> float:
    """d/dz of P^1_a via (P^1_a)'(z) = (-a P^1_{a+1}(z) + (a+1) z P^1_a(z))/(1-z^2)."""
    if z == 1.0:
        raise DomainError("derivative identity is singular at z = 1")
    _check_args(alpha, z)
    return (
        -alpha * legendre_p1(alpha + 1.0, z) + (alpha + 1.0) * z * legendre_p1(alpha, z)
    ) / (1.0 - z * z)


def legendre_dp_dalpha(alpha: float, z: float, h: float = DEGREE_STEP) -> float:
    """Central finite difference of P_a(z) in the degree, error O(h^2).

    Requires alpha - h >= -1 so both stencil points stay in the domain.
    """
    if h <= 0.0:
        raise DomainError(f"degree step must be positive, got {h}")
    if alpha - h < -1.0:
        raise DomainError(
            f"degree step {h} leaves the domain: alpha - h = {alpha - h} < -1"
        )
    return (legendre_p(alpha + h, z) - legendre_p(alpha - h, z)) / (2.0 * h)


def legendre_p_quadrature(alpha: float, z: float) -> float:
    """Quadrature oracle for P_a(z), independent of the series evaluation.

    For z >= 0 this is the Laplace integral

        P_a(cos t0) = (1/pi) * int_0^pi Re (cos t0 + i sin t0 cos t)^a dt.

    That representation needs Re(z) > 0; for z < 0 the principal branch of
    the integrand crosses its cut and the formula breaks down, so the
    Mehler-Dirichlet integral

        P_a(cos t0) = (sqrt(2)/pi) * int_0^t0 cos((a+1/2) t) / sqrt(cos t - cos t0) dt

    is used instead, with the substitution t = t0 - u^2 removing the
    endpoint singularity.  Both are evaluated adaptively to ~1e-12.
    """
    _check_args(alpha, z)
    if z == 1.0:
        return 1.0
    theta = math.acos(z)
    with warnings.catch_warnings():
        # the requested tolerance sits at the roundoff floor by design
        warnings.simplefilter("ignore", IntegrationWarning)
        if z >= 0.0:

            def laplace_integrand(t: float) -> float:
                w = complex(z, math.sin(theta) * math.cos(t))
                return (w ** alpha).real

            val, _ = quad(
                laplace_integrand, 0.0, math.pi, epsabs=1e-13, epsrel=1e-13, limit=400
            )
            return val / math.pi

        c = alpha + 0.5

        def md_integrand(u: float) -> float:
            t = theta - u * u
            # cos t - cos theta = 2 sin(theta - u^2/2) sin(u^2/2), cancellation-free
            den = math.sin(theta - 0.5 * u * u) * math.sin(0.5 * u * u)
            if den <= 0.0:
                return math.cos(c * theta) * math.sqrt(2.0 / math.sin(theta))
            return math.cos(c * t) * u / math.sqrt(den)

        val, _ = quad(
            md_integrand, 0.0, math.sqrt(theta), epsabs=1e-13, epsrel=1e-13, limit=400
        )
        return val * 2.0 / math.pi
