"""Isotropic barrier construction and the tilted boundary operators.

The barrier is v_a = r^a F_a(theta) with F_a(theta) = P_a(cos theta); for
the Laplacian this is exactly harmonic, hence the sharpest supersolution
available, and it satisfies c* r^a <= v_a <= r^a with c* = F_a(theta0) as
long as a stays below the positivity threshold alpha0(theta0).

The boundary operators evaluated here act on v_a along the lateral boundary:

    M(t) v = beta0 . Dv + q(t) (a22~/a11~) tau . Dv
             - (1/eps) (q(t) / a11~) (beta1 / (beta2 - t beta1)) (b21 / y2) v,
    q(t) = (nu1 + t nu2) / (beta2 - t beta1),

where t = 0 gives the untilted operator and t > 0 the tilted one used to
control a second derivative direction.  Both scale as r^(a-1) on the
boundary; the functions below return that coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateBC,
    InvalidAlpha,
    InvalidOperator,
    InvalidTilt,
    NoAdmissibleTilt,
)
from .geometry import ConeGeometry, ObliqueBC
from .legendre import legendre_dp_dz, legendre_p, legendre_p_many

#: Floor of the dyadic tilt search.
TILT_FLOOR = 1e-6


@dataclass(frozen=True)
class MillerBarrier:
    """Barrier v_a = r^a F_a(theta) with F_a = P_a(cos .), certified on build."""

    alpha: float
    theta0: float
    cstar: float

    def profile(self, theta: float) -> float:
        """F_a(theta) = P_a(cos theta)."""
        return legendre_p(self.alpha, math.cos(theta))

    def profile_deriv(self, theta: float) -> float:
        """F_a'(theta) = -sin(theta) P_a'(cos theta); 0 at theta = 0."""
        if theta == 0.0:
            return 0.0
        return -math.sin(theta) * legendre_dp_dz(self.alpha, math.cos(theta))

    def value(self, r: float, theta: float) -> float:
        return r ** self.alpha * self.profile(theta)

    def gradient(self, r: float, theta: float) -> tuple[float, float]:
        """(y1, y2)-gradient of v_a."""
        a = self.alpha
        f = self.profile(theta)
        fp = self.profile_deriv(theta)
        ct, st = math.cos(theta), math.sin(theta)
        return (
            r ** (a - 1.0) * (a * ct * f - st * fp),
            r ** (a - 1.0) * (a * st * f + ct * fp),
        )


def alpha0(geom: ConeGeometry, scan_points: int = 400, xtol: float = 1e-10) -> float:
    """Positivity threshold: smallest a in (0, 1] with P_a(cos theta0) = 0, else 1.

    P_0 = 1 > 0 and a -> P_a(cos theta0) is continuous, so the first zero is
    bracketed by a sign scan and pinned by bisection.
    """
    z = geom.z0
    alphas = np.linspace(1e-6, 1.0, scan_points)
    vals = legendre_p_many(alphas, z)
    for i in range(scan_points - 1):
        if vals[i] == 0.0:
            return float(alphas[i])
        if vals[i] * vals[i + 1] < 0.0:
            lo, hi, flo = float(alphas[i]), float(alphas[i + 1]), float(vals[i])
            while hi - lo > xtol:
                mid = 0.5 * (lo + hi)
                fmid = legendre_p(mid, z)
                if fmid == 0.0:
                    return mid
                if flo * fmid < 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fmid
            return 0.5 * (lo + hi)
    return 1.0


def build_barrier(
    geom: ConeGeometry, alpha: float, check_points: int = 500
) -> MillerBarrier:
    """Construct the barrier for 0 < alpha < alpha0(geom) and certify it.

    Verifies on a check_points theta-grid that c* <= F_a <= 1 with
    c* = F_a(theta0) > 0, that F_a' < 0 on (0, theta0], and that
    F_a'(0) = 0 to 1e-8 by a one-sided difference.  Raises InvalidAlpha if
    alpha is out of range or any certification fails.
    """
    if not (0.0 < alpha < 1.0):
        raise InvalidAlpha(f"barrier degree must lie in (0, 1), got {alpha}")
    a0 = alpha0(geom)
    if alpha >= a0:
        raise InvalidAlpha(
            f"degree {alpha} is not below the positivity threshold {a0:.12g}"
        )
    barrier = MillerBarrier(alpha=alpha, theta0=geom.theta0, cstar=legendre_p(alpha, geom.z0))
    if not (0.0 < barrier.cstar <= 1.0):
        raise InvalidAlpha(f"boundary value c* = {barrier.cstar} not in (0, 1]")
    thetas = np.linspace(0.0, geom.theta0, check_points)
    values = np.array([barrier.profile(float(t)) for t in thetas])
    if values.min() < barrier.cstar - 1e-12 or values.max() > 1.0 + 1e-12:
        raise InvalidAlpha(
            f"profile leaves [c*, 1]: range [{values.min()}, {values.max()}]"
        )
    derivs = np.array([barrier.profile_deriv(float(t)) for t in thetas[1:]])
    if derivs.max() >= 0.0:
        raise InvalidAlpha("profile derivative is not strictly negative on (0, theta0]")
    h = 1e-7
    one_sided = (barrier.profile(h) - 1.0) / h
    if abs(one_sided) > 1e-8:
        raise InvalidAlpha(f"profile derivative at 0 is {one_sided}, not 0 to 1e-8")
    return barrier


@dataclass(frozen=True)
class RotatedCoefficients:
    """Plane coefficients expressed in the (beta0, tau) frame.

    atilde = J a0 J^T with J rows beta0 and tau; b21 is the singular-term
    coefficient of the reduced operator.
    """

    atilde: np.ndarray
    obliqueness: float
    b21: float

    @property
    def a11(self) -> float:
        return float(self.atilde[0, 0])

    @property
    def a22(self) -> float:
        return float(self.atilde[1, 1])


def rotate_coefficients(
    a0: np.ndarray,
    bc: ObliqueBC,
    b21: float = 1.0,
    lam: float | None = None,
    Lam: float | None = None,
) -> RotatedCoefficients:
    """Rotate 2x2 plane coefficients into the (beta0, tau) frame.

    Computes atilde = J a0 J^T for J = [[beta1, beta2], [nu2, -nu1]].  Since
    both rows of J are unit vectors, the diagonal entries satisfy
    lam <= a11~, a22~ <= Lam <= Lam / eps^2; the bracket is asserted.
    b21 defaults to 1, the reduced Laplacian in R^3.

    Raises InvalidOperator on a non-symmetric or indefinite a0 or a failed
    bracket.
    """
    a0 = np.asarray(a0, dtype=float)
    if a0.shape != (2, 2):
        raise InvalidOperator(f"plane coefficients must be 2x2, got shape {a0.shape}")
    if abs(a0[0, 1] - a0[1, 0]) > 1e-12 * max(1.0, np.abs(a0).max()):
        raise InvalidOperator("plane coefficients are not symmetric")
    eigs = np.linalg.eigvalsh(a0)
    if eigs.min() <= 0.0:
        raise InvalidOperator(f"plane coefficients not positive definite: {eigs}")
    lam = float(eigs.min()) if lam is None else float(lam)
    Lam = float(eigs.max()) if Lam is None else float(Lam)
    if b21 <= 0.0:
        raise InvalidOperator(f"singular-term coefficient must be positive, got {b21}")
    b1, b2 = bc.beta0
    t1, t2 = bc.tau
    J = np.array([[b1, b2], [t1, t2]])
    atilde = J @ a0 @ J.T
    eps = bc.obliqueness
    hi = Lam / (eps * eps)
    for entry in (atilde[0, 0], atilde[1, 1]):
        if not (lam * (1.0 - 1e-12) <= entry <= hi * (1.0 + 1e-12)):
            raise InvalidOperator(
                f"rotated diagonal {entry} outside the ellipticity bracket "
                f"[{lam}, {hi}]"
            )
    return RotatedCoefficients(atilde=atilde, obliqueness=eps, b21=b21)


def _m_coefficient(
    barrier: MillerBarrier, bc: ObliqueBC, rc: RotatedCoefficients, tilt: float
) -> float:
    b1, b2 = bc.beta0
    n1, n2 = bc.nu
    t1, t2 = bc.tau
    eps = bc.obliqueness
    a = barrier.alpha
    theta0 = bc.theta0
    f = barrier.profile(theta0)
    fp = barrier.profile_deriv(theta0)
    beta_dot_tau = b1 * t1 + b2 * t2
    q = (n1 + tilt * n2) / (b2 - tilt * b1)
    ratio = rc.a22 / rc.a11
    # beta0 . Dv = r^(a-1) (-a F beta0.tau - eps F'); tau . Dv = -a F r^(a-1);
    # the zero-order term carries 1/y2 = 1/(r sin theta0) on the boundary
    return (
        f * (-a * beta_dot_tau - a * q * ratio)
        - eps * fp
        - (1.0 / eps) * q * (b1 / rc.a11) * rc.b21 * f / math.sin(theta0)
    )


def m1_coefficient(
    barrier: MillerBarrier, bc: ObliqueBC, rc: RotatedCoefficients
) -> float:
    """Coefficient c with M(0) v_a = c r^(a-1) on the lateral boundary.

    Negative c certifies the untilted boundary inequality; that sign holds
    for small degrees whenever beta1 and beta2 share a sign.
    """
    if bc.beta0[1] == 0.0:
        raise DegenerateBC("beta2 = 0: the boundary operator is degenerate")
    return _m_coefficient(barrier, bc, rc, 0.0)


def m2_coefficient(
    barrier: MillerBarrier, bc: ObliqueBC, rc: RotatedCoefficients, tilt: float
) -> float:
    """Coefficient of the tilted operator M(tilt) v_a, in units of r^(a-1).

    Preconditions: tilt >= 0, nu1 + tilt nu2 > 0, and beta2 - tilt beta1
    keeps the sign of beta2.  tilt = 0 reduces to `m1_coefficient` exactly
    (same code path).
    """
    if bc.beta0[1] == 0.0:
        raise DegenerateBC("beta2 = 0: the boundary operator is degenerate")
    if tilt < 0.0:
        raise InvalidTilt(f"tilt must be nonnegative, got {tilt}")
    b1, b2 = bc.beta0
    n1, n2 = bc.nu
    if tilt > 0.0:
        if n1 + tilt * n2 <= 0.0:
            raise InvalidTilt(f"nu1 + tilt nu2 = {n1 + tilt * n2} is not positive")
        if (b2 - tilt * b1) * b2 <= 0.0:
            raise InvalidTilt(
                f"beta2 - tilt beta1 = {b2 - tilt * b1} changes the sign of beta2"
            )
    return _m_coefficient(barrier, bc, rc, tilt)


def max_admissible_tilt(
    bc: ObliqueBC, barrier: MillerBarrier, rc: RotatedCoefficients
) -> float:
    """Largest dyadic tilt in (0, 1] whose tilted coefficient stays negative.

    Halves from 1 until the tilt preconditions hold and M(tilt) v_a < 0;
    requires the untilted coefficient to be negative.  Raises
    NoAdmissibleTilt when even the floor fails.
    """
    if m1_coefficient(barrier, bc, rc) >= 0.0:
        raise NoAdmissibleTilt("untilted coefficient is not negative")
    tilt = 1.0
    while tilt >= TILT_FLOOR:
        try:
            if m2_coefficient(barrier, bc, rc, tilt) < 0.0:
                return tilt
        except InvalidTilt:
            pass
        tilt *= 0.5
    raise NoAdmissibleTilt(
        f"no admissible tilt above the floor {TILT_FLOOR} for s = {bc.s}"
    )
