"""Cone geometry, oblique boundary vectors, and the axisymmetric reduction."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidOperator
from .legendre import Z_CUTOFF

#: Largest admissible opening angle (series accuracy degrades as theta0 -> pi).
THETA0_MAX = math.pi - 0.045


@dataclass(frozen=True)
class ConeGeometry:
    """Circular cone of opening angle theta0 and outer radius R in R^n.

    theta0 is the polar angle of the lateral boundary measured from the
    symmetry axis; the axisymmetric reduction works on the plane sector
    {(r, theta): 0 < r < R, 0 <= theta < theta0}.
    """

    theta0: float
    R: float = 1.0
    n: int = 3

    def __post_init__(self) -> None:
        if not (0.0 < self.theta0 < THETA0_MAX):
            raise DomainError(
                f"opening angle must lie in (0, {THETA0_MAX:.4f}), got {self.theta0}"
            )
        if math.cos(self.theta0) < -1.0 + Z_CUTOFF:
            raise DomainError(
                f"cos(theta0) = {math.cos(self.theta0)} below the kernel cutoff"
            )
        if not self.R > 0.0:
            raise DomainError(f"outer radius must be positive, got {self.R}")
        if not (isinstance(self.n, int) and self.n >= 3):
            raise DomainError(f"ambient dimension must be an integer >= 3, got {self.n}")

    @property
    def z0(self) -> float:
        """cos(theta0), the Legendre argument of the lateral boundary."""
        return math.cos(self.theta0)

    def admissible_s_interval(self) -> tuple[float, float]:
        """Open interval of oblique angles pointing into the cone."""
        return (-math.pi + self.theta0, self.theta0)


@dataclass(frozen=True)
class ObliqueBC:
    """Constant oblique boundary vector beta0 = (cos s, sin s) on the cone edge.

    s is measured in the (y1, y2) symmetry plane; admissibility
    s in (-pi + theta0, theta0) is exactly the inward-pointing condition,
    and the obliqueness is eps = beta0 . nu = sin(theta0 - s) > 0.
    """

    s: float
    theta0: float

    def __post_init__(self) -> None:
        lo, hi = -math.pi + self.theta0, self.theta0
        if not (lo < self.s < hi):
            raise DomainError(
                f"oblique angle s = {self.s} outside the admissible interval "
                f"({lo:.6f}, {hi:.6f}) for theta0 = {self.theta0}"
            )
        if self.obliqueness <= 0.0:
            raise DomainError(f"obliqueness {self.obliqueness} is not positive")

    @classmethod
    def for_cone(cls, geom: ConeGeometry, s: float) -> "ObliqueBC":
        return cls(s=s, theta0=geom.theta0)

    @property
    def beta0(self) -> tuple[float, float]:
        return (math.cos(self.s), math.sin(self.s))

    @property
    def nu(self) -> tuple[float, float]:
        """Inward unit normal of the lateral boundary."""
        return (math.sin(self.theta0), -math.cos(self.theta0))

    @property
    def tau(self) -> tuple[float, float]:
        """Unit tangent (nu2, -nu1) of the lateral boundary."""
        n1, n2 = self.nu
        return (n2, -n1)

    @property
    def obliqueness(self) -> float:
        """eps = beta0 . nu = sin(theta0 - s)."""
        b1, b2 = math.cos(self.s), math.sin(self.s)
        n1, n2 = math.sin(self.theta0), -math.cos(self.theta0)
        return b1 * n1 + b2 * n2


def reduce_to_axisymmetric(
    A: np.ndarray,
    lam: float | None = None,
    Lam: float | None = None,
    rtol: float = 1e-12,
) -> tuple[np.ndarray, float]:
    """Reduce constant principal coefficients A (n x n, vertex values) to the plane.

    For an operator that is symmetric and invariant under rotations about the
    axis (last coordinate), the axisymmetric reduction produces 2x2 plane
    coefficients and one singular first-order coefficient:

        a11 = A[n-1, n-1],      a12 = a21 = sum_i A[i, n-1] x_i / y2 = 0,
        a22 = kappa (the common in-plane diagonal),
        b21 = sum_{i<n} A[i, i] - kappa = (n - 2) kappa.

    Returns (a0, b21) where a0 is the reduced 2x2 matrix.  The bracket
    (n-2) lam <= b21 <= (n-2) Lam is asserted against the supplied (or
    eigenvalue-derived) ellipticity bounds.

    Raises InvalidOperator on failed symmetry, invariance or ellipticity.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidOperator(f"coefficient matrix must be square, got shape {A.shape}")
    n = A.shape[0]
    if n < 3:
        raise InvalidOperator(f"ambient dimension must be >= 3, got {n}")
    scale = max(np.abs(A).max(), 1.0)
    if not np.allclose(A, A.T, atol=rtol * scale):
        raise InvalidOperator("coefficient matrix is not symmetric")

    block = A[: n - 1, : n - 1]
    kappa = block[0, 0]
    # rotational invariance about the axis: in-plane block = kappa * I, no mixing
    if not np.allclose(block, kappa * np.eye(n - 1), atol=rtol * scale):
        raise InvalidOperator("in-plane block is not a multiple of the identity")
    if not np.allclose(A[: n - 1, n - 1], 0.0, atol=rtol * scale):
        raise InvalidOperator("axis-mixing entries A[i, n-1] must vanish")

    eigs = np.linalg.eigvalsh(A)
    if eigs.min() <= 0.0:
        raise InvalidOperator(f"matrix is not positive definite (min eig {eigs.min()})")
    lam = float(eigs.min()) if lam is None else float(lam)
    Lam = float(eigs.max()) if Lam is None else float(Lam)
    if not (0.0 < lam <= Lam):
        raise InvalidOperator(f"invalid ellipticity bounds ({lam}, {Lam})")

    a0 = np.array([[A[n - 1, n - 1], 0.0], [0.0, kappa]])
    b21 = float(np.trace(block) - kappa)
    lo, hi = (n - 2) * lam, (n - 2) * Lam
    if not (lo - rtol * scale <= b21 <= hi + rtol * scale):
        raise InvalidOperator(
            f"singular-term coefficient {b21} outside [{lo}, {hi}]"
        )
    return a0, b21
