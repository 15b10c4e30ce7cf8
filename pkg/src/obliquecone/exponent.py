"""Critical exponents and regime classification for oblique problems on cones.

The separable harmonic u_a(r, theta) = r^a P_a(cos theta) satisfies the
homogeneous oblique condition beta0 . Du = 0 on the lateral boundary exactly
when the boundary mismatch

    B(theta0, a, s) = cos(s) U1(theta0, a) + sin(s) U2(theta0, a)

vanishes, where U1, U2 are the angular factors of the two Cartesian gradient
components.  B(theta0, 0, s) = 0 always; a root in (0, 1) yields a Hoelder
but not C^1 solution, and its existence is governed by the slope
V(theta0, s) = dB/da at a = 0 and the endpoint value B(theta0, 1, s) = cos s.
This module evaluates these functions, root-finds critical exponents and
critical oblique angles, and classifies the regularity regime of a given
(theta0, s) pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import BracketError, DomainError
from .geometry import THETA0_MAX, ConeGeometry, ObliqueBC
from .legendre import legendre_dp1_dz, legendre_p, legendre_p1, legendre_p_many

#: Lower edge of the exponent search window; excludes the trivial root a = 0.
ALPHA_MIN = 1e-3

#: Number of sign-scan points on the exponent search window.
SCAN_POINTS = 2000

#: Bisection interval-width target for exponent roots.
ROOT_XTOL = 1e-12

# Regime labels
REGULAR_BARRIER = "REGULAR_BARRIER"
IRREGULAR = "IRREGULAR"
AXIS_CONTINUOUS = "AXIS_CONTINUOUS"
UNKNOWN = "UNKNOWN"


def _check_theta_alpha(theta: float, alpha: float) -> None:
    if not (0.0 < theta < THETA0_MAX):
        raise DomainError(f"polar angle must lie in (0, {THETA0_MAX:.4f}), got {theta}")
    if not (0.0 <= alpha <= 2.0):
        raise DomainError(f"degree must lie in [0, 2], got {alpha}")


def u1(theta: float, alpha: float) -> float:
    """Angular factor of d(u_a)/dy1: (2a+1) cos t P_a(cos t) - (a+1) P_{a+1}(cos t)."""
    _check_theta_alpha(theta, alpha)
    z = math.cos(theta)
    return (2.0 * alpha + 1.0) * z * legendre_p(alpha, z) - (alpha + 1.0) * legendre_p(
        alpha + 1.0, z
    )


def u2(theta: float, alpha: float) -> float:
    """Angular factor of d(u_a)/dy2.

    sin t (a - (a+1) cos^2 t / sin^2 t) P_a(cos t) + (a+1) (cos t / sin t) P_{a+1}(cos t).
    """
    _check_theta_alpha(theta, alpha)
    z, st = math.cos(theta), math.sin(theta)
    return (
        st * (alpha - (alpha + 1.0) * z * z / (st * st)) * legendre_p(alpha, z)
        + (alpha + 1.0) * (z / st) * legendre_p(alpha + 1.0, z)
    )


def boundary_mismatch(geom: ConeGeometry, alpha: float, s: float) -> float:
    """B(theta0, a, s) = cos(s) U1 + sin(s) U2 at the lateral boundary.

    Zero means u_a satisfies beta0 . Du = 0 on the cone edge.
    """
    return math.cos(s) * u1(geom.theta0, alpha) + math.sin(s) * u2(geom.theta0, alpha)


def _mismatch_profile(geom: ConeGeometry, s: float, alphas: np.ndarray) -> np.ndarray:
    """Vectorized B(theta0, ., s) over an array of degrees."""
    z, st = geom.z0, math.sin(geom.theta0)
    alphas = np.asarray(alphas, dtype=float)
    p = legendre_p_many(alphas, z)
    p_next = legendre_p_many(alphas + 1.0, z)
    u1v = (2.0 * alphas + 1.0) * z * p - (alphas + 1.0) * p_next
    u2v = st * (alphas - (alphas + 1.0) * z * z / (st * st)) * p + (
        alphas + 1.0
    ) * (z / st) * p_next
    return math.cos(s) * u1v + math.sin(s) * u2v


def slope_at_zero(geom: ConeGeometry, s: float) -> float:
    """Closed form of dB/da at a = 0:  V(theta0, s) = cos s + sin s (1 - cos theta0)/sin theta0."""
    lo, hi = geom.admissible_s_interval()
    if not (lo <= s <= hi):
        raise DomainError(f"oblique angle {s} outside [{lo:.6f}, {hi:.6f}]")
    return math.cos(s) + math.sin(s) * (1.0 - geom.z0) / math.sin(geom.theta0)


def critical_angle_s0(geom: ConeGeometry, xtol: float = 1e-12) -> float:
    """The unique root s0 of V(theta0, .) on the admissible interval.

    Found by bisection on [-pi + theta0, 0], where V runs from -1 to 1.
    """
    lo, hi = -math.pi + geom.theta0, 0.0
    flo, fhi = slope_at_zero(geom, lo), slope_at_zero(geom, hi)
    if flo == 0.0:
        return lo
    if flo * fhi > 0.0:
        raise BracketError(
            f"no sign change of the slope on [{lo:.6f}, {hi:.6f}] for theta0 = {geom.theta0}"
        )
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        fmid = slope_at_zero(geom, mid)
        if fmid == 0.0:
            return mid
        if flo * fmid < 0.0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def _bisect(f, lo: float, hi: float, flo: float, xtol: float) -> float:
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if flo * fmid < 0.0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def _scan_roots(profile: np.ndarray, alphas: np.ndarray, f) -> tuple[list[float], int]:
    """Sign-scan helper: bisect every sign change of f located by the profile."""
    roots: list[float] = []
    count = 0
    for i in range(len(alphas) - 1):
        a, b = profile[i], profile[i + 1]
        if a == 0.0:
            roots.append(float(alphas[i]))
            count += 1
        elif a * b < 0.0:
            roots.append(_bisect(f, float(alphas[i]), float(alphas[i + 1]), a, ROOT_XTOL))
            count += 1
    if len(profile) and profile[-1] == 0.0:
        roots.append(float(alphas[-1]))
        count += 1
    return roots, count


def critical_exponent_scan(
    geom: ConeGeometry, bc: ObliqueBC
) -> tuple[Optional[float], int]:
    """Smallest root of B(theta0, ., s) on (ALPHA_MIN, 1] plus the sign-change count.

    Returns (None, 0) when the scan finds no sign change; the trivial root at
    a = 0 is excluded by ALPHA_MIN.
    """
    alphas = np.linspace(ALPHA_MIN, 1.0, SCAN_POINTS)
    profile = _mismatch_profile(geom, bc.s, alphas)
    roots, count = _scan_roots(
        profile, alphas, lambda a: boundary_mismatch(geom, a, bc.s)
    )
    if not roots:
        return None, 0
    return min(roots), count


def critical_exponent(geom: ConeGeometry, bc: ObliqueBC) -> Optional[float]:
    """Smallest exponent a in (0, 1) with B(theta0, a, s) = 0, or None if absent."""
    root, _ = critical_exponent_scan(geom, bc)
    return root


def neumann_mismatch(geom: ConeGeometry, alpha: float) -> float:
    """W(theta0, a) = (P^1_a)'(cos theta0), via the order-1 derivative identity.

    Zero means the first non-axisymmetric separable mode satisfies the
    homogeneous Neumann condition on the lateral boundary.
    """
    if not (0.0 <= alpha <= 1.0 + 1e-12):
        raise DomainError(f"degree must lie in [0, 1], got {alpha}")
    return legendre_dp1_dz(alpha, geom.z0)


def _neumann_profile(geom: ConeGeometry, alphas: np.ndarray) -> np.ndarray:
    """Vectorized W(theta0, .), written out in terms of P at three degrees."""
    z = geom.z0
    alphas = np.asarray(alphas, dtype=float)
    p0 = legendre_p_many(alphas, z)
    p1 = legendre_p_many(alphas + 1.0, z)
    p2 = legendre_p_many(alphas + 2.0, z)
    one_m_z2 = 1.0 - z * z
    return (
        alphas * (alphas + 2.0) * (z * p1 - p2)
        - (alphas + 1.0) ** 2 * z * (z * p0 - p1)
    ) / one_m_z2 ** 1.5


def neumann_exponent(geom: ConeGeometry, endpoint_tol: float = 1e-12) -> float:
    """Smallest root of W(theta0, .) in (ALPHA_MIN, 1].

    The slope of W at a = 0 is positive; for theta0 >= pi/2 the endpoint
    value W(theta0, 1) = cot theta0 <= 0 guarantees a sign change.  An exact
    endpoint root at a = 1 (half-space Neumann) is accepted via endpoint_tol.
    For theta0 < pi/2 a root is not guaranteed; BracketError is raised when
    the scan finds no sign change.
    """
    alphas = np.linspace(ALPHA_MIN, 1.0, SCAN_POINTS)
    profile = _neumann_profile(geom, alphas)
    roots, _ = _scan_roots(profile, alphas, lambda a: neumann_mismatch(geom, a))
    if roots:
        return min(roots)
    if abs(profile[-1]) <= endpoint_tol:
        return 1.0
    raise BracketError(
        f"no sign change of the Neumann mismatch on ({ALPHA_MIN}, 1] for "
        f"theta0 = {geom.theta0}"
    )


@dataclass(frozen=True)
class SeparableSolution:
    """Separable harmonic r^a P^m_a(cos theta) (times an azimuthal factor for m=1).

    For m = 0 the solution is axisymmetric; for m = 1 the azimuthal factor is
    C sin(phi) + D cos(phi).  alpha in (0, 1] keeps the solution continuous
    and non-C^1 at the vertex.
    """

    alpha: float
    m: int = 0
    c: float = 0.0
    d: float = 1.0

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha <= 1.0):
            raise DomainError(f"degree must lie in (0, 1], got {self.alpha}")
        if self.m not in (0, 1):
            raise DomainError(f"azimuthal mode must be 0 or 1, got {self.m}")

    def azimuthal(self, phi: float) -> float:
        if self.m == 0:
            return 1.0
        return self.c * math.sin(phi) + self.d * math.cos(phi)

    def profile(self, theta: float) -> float:
        """Angular profile P^m_a(cos theta)."""
        z = math.cos(theta)
        if self.m == 0:
            return legendre_p(self.alpha, z)
        return legendre_p1(self.alpha, z)

    def profile_array(self, thetas: np.ndarray) -> np.ndarray:
        return np.array([self.profile(float(t)) for t in np.asarray(thetas)])


def separable_eval(
    sol: SeparableSolution, point: tuple[float, float, float] | tuple[float, float]
) -> tuple[float, tuple[float, float]]:
    """Value and (y1, y2)-gradient of the separable solution at (r, theta[, phi]).

    For m = 0 the gradient components are r^(a-1) U1(theta, a) and
    r^(a-1) U2(theta, a); the second tends to 0 on the axis.  For m = 1 the
    in-plane gradient of the profile is returned, scaled by the azimuthal
    factor.
    """
    r, theta = float(point[0]), float(point[1])
    phi = float(point[2]) if len(point) > 2 else 0.0
    if r <= 0.0:
        raise DomainError(f"radius must be positive, got {r}")
    if not (0.0 <= theta < THETA0_MAX):
        raise DomainError(f"polar angle must lie in [0, {THETA0_MAX:.4f}), got {theta}")
    a = sol.alpha
    az = sol.azimuthal(phi)
    if sol.m == 0:
        value = r ** a * legendre_p(a, math.cos(theta))
        if theta == 0.0:
            # U1(0, a) = (2a+1) - (a+1) = a and U2 -> 0 on the axis
            return value, (a * r ** (a - 1.0), 0.0)
        return value, (r ** (a - 1.0) * u1(theta, a), r ** (a - 1.0) * u2(theta, a))
    z = math.cos(theta)
    g = legendre_p1(a, z)
    value = r ** a * g * az
    if theta == 0.0:
        # d/dtheta of P^1_a(cos theta) at 0 equals -P_a'(1) = -a(a+1)/2
        gp = -a * (a + 1.0) / 2.0
        return 0.0, (0.0, r ** (a - 1.0) * gp * az)
    gp = -math.sin(theta) * legendre_dp1_dz(a, z)
    g1 = r ** (a - 1.0) * (a * math.cos(theta) * g - math.sin(theta) * gp) * az
    g2 = r ** (a - 1.0) * (a * math.sin(theta) * g + math.cos(theta) * gp) * az
    return value, (g1, g2)


@dataclass(frozen=True)
class RegimeReport:
    """Classification of a (theta0, s) pair with its numeric witnesses."""

    label: str
    critical_exponent: Optional[float]
    s0: float
    witnesses: tuple[tuple[str, float, float], ...] = field(default_factory=tuple)

    def witness(self, name: str) -> Optional[float]:
        for wname, value, _tol in self.witnesses:
            if wname == name:
                return value
        return None


def classify_regime(geom: ConeGeometry, bc: ObliqueBC) -> RegimeReport:
    """Classify the regularity regime of (theta0, s).

    IRREGULAR when a critical exponent exists (attached); REGULAR_BARRIER
    when cos(s) sin(s) > 0 and no root is found; AXIS_CONTINUOUS exactly at
    s = 0; UNKNOWN otherwise.  A root together with cos(s) sin(s) > 0 is a
    numerical inconsistency and yields UNKNOWN with both witnesses attached.
    """
    root, count = critical_exponent_scan(geom, bc)
    s0 = critical_angle_s0(geom)
    slope = slope_at_zero(geom, bc.s)
    cs = math.cos(bc.s) * math.sin(bc.s)
    witnesses: list[tuple[str, float, float]] = [
        ("slope_at_zero", slope, 0.0),
        ("critical_angle_s0", s0, 1e-10),
        ("cos_s_sin_s", cs, 0.0),
        ("sign_change_count", float(count), 0.0),
    ]
    if root is not None:
        witnesses.append(("critical_exponent", root, ROOT_XTOL))
        witnesses.append(
            ("boundary_mismatch_at_root", boundary_mismatch(geom, root, bc.s), 1e-10)
        )
    barrier_regime = cs > 0.0
    if root is not None and barrier_regime:
        label = UNKNOWN
    elif root is not None:
        label = IRREGULAR
    elif barrier_regime:
        label = REGULAR_BARRIER
    elif bc.s == 0.0:
        label = AXIS_CONTINUOUS
    else:
        label = UNKNOWN
    return RegimeReport(
        label=label,
        critical_exponent=root,
        s0=s0,
        witnesses=tuple(witnesses),
    )
