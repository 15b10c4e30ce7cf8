"""Discrete weighted Hoelder seminorms and the product/interpolation checks.

Seminorms are evaluated exactly over a finite sample set: for points x1, x2
with distances d_x = |x| to the vertex and d_{x1,x2} = min(d_x1, d_x2),

    [u]_{k,a}^{(b)} = max over pairs of
        d_{x1,x2}^{max(k+a+b, 0)} |D^k u(x1) - D^k u(x2)| / |x1 - x2|^a,

and the weighted sup part is sum_j sup_x d_x^{max(j+b, 0)} |D^j u(x)|.
These are lower bounds of the continuum suprema; all trend assertions about
them are phrased under sample refinement, never as continuum claims.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, HypothesisError


@dataclass(frozen=True)
class HolderSpec:
    """Seminorm order k, exponent alpha, weight exponent beta.

    The distance weight is d^(max(k + alpha + beta, 0)); beta = -(k + alpha)
    gives the plain unweighted seminorm.
    """

    k: int
    alpha: float
    beta: float = 0.0

    def __post_init__(self) -> None:
        if self.k not in (0, 1):
            raise DomainError(f"seminorm order must be 0 or 1, got {self.k}")
        if not (0.0 < self.alpha <= 1.0):
            raise DomainError(f"exponent must lie in (0, 1], got {self.alpha}")

    @property
    def weight_exponent(self) -> float:
        return max(self.k + self.alpha + self.beta, 0.0)


@dataclass(frozen=True)
class HolderSamples:
    """Point-value samples in the (y1, y2) plane, with optional derivatives."""

    points: np.ndarray
    values: np.ndarray
    gradients: Optional[np.ndarray] = None
    hessians: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] != vals.shape[0]:
            raise DomainError("points must be (N, 2) with matching values")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)
        if self.gradients is not None:
            g = np.asarray(self.gradients, dtype=float)
            if g.shape != (pts.shape[0], 2):
                raise DomainError("gradients must be (N, 2)")
            object.__setattr__(self, "gradients", g)
        if self.hessians is not None:
            h = np.asarray(self.hessians, dtype=float)
            if h.shape != (pts.shape[0], 2, 2):
                raise DomainError("hessians must be (N, 2, 2)")
            object.__setattr__(self, "hessians", h)

    def __len__(self) -> int:
        return self.points.shape[0]

    def vertex_distances(self) -> np.ndarray:
        return np.hypot(self.points[:, 0], self.points[:, 1])

    def derivative_magnitudes(self, order: int) -> np.ndarray:
        """|D^j u| per sample: value, gradient 2-norm, Hessian Frobenius norm."""
        if order == 0:
            return np.abs(self.values)
        if order == 1:
            if self.gradients is None:
                raise DomainError("gradient samples required for order 1")
            return np.hypot(self.gradients[:, 0], self.gradients[:, 1])
        if order == 2:
            if self.hessians is None:
                raise DomainError("hessian samples required for order 2")
            return np.sqrt((self.hessians ** 2).sum(axis=(1, 2)))
        raise DomainError(f"derivative order {order} not supported")

    def derivative_table(self, order: int) -> np.ndarray:
        """Flattened D^j u rows used for pairwise differences."""
        if order == 0:
            return self.values[:, None]
        if order == 1:
            if self.gradients is None:
                raise DomainError("gradient samples required for order 1")
            return self.gradients
        if order == 2:
            if self.hessians is None:
                raise DomainError("hessian samples required for order 2")
            return self.hessians.reshape(len(self), 4)
        raise DomainError(f"derivative order {order} not supported")


def samples_from_function(
    fn: Callable[[float, float], float],
    points: np.ndarray,
    derivatives: int = 0,
    fd_scale: float = 1e-6,
) -> HolderSamples:
    """Sample fn (and optionally FD derivatives) at the given (y1, y2) points.

    Derivative samples use central differences with steps proportional to
    the distance to the vertex, adequate for the reported-constant checks.
    """
    pts = np.asarray(points, dtype=float)
    vals = np.array([fn(float(p[0]), float(p[1])) for p in pts])
    grads = hess = None
    if derivatives >= 1:
        grads = np.empty((len(pts), 2))
        for idx, p in enumerate(pts):
            h = fd_scale * math.hypot(p[0], p[1])
            grads[idx, 0] = (fn(p[0] + h, p[1]) - fn(p[0] - h, p[1])) / (2 * h)
            grads[idx, 1] = (fn(p[0], p[1] + h) - fn(p[0], p[1] - h)) / (2 * h)
    if derivatives >= 2:
        hess = np.empty((len(pts), 2, 2))
        for idx, p in enumerate(pts):
            h = (fd_scale ** 0.5) * math.hypot(p[0], p[1])
            f00 = fn(p[0], p[1])
            hess[idx, 0, 0] = (fn(p[0] + h, p[1]) - 2 * f00 + fn(p[0] - h, p[1])) / (h * h)
            hess[idx, 1, 1] = (fn(p[0], p[1] + h) - 2 * f00 + fn(p[0], p[1] - h)) / (h * h)
            mixed = (
                fn(p[0] + h, p[1] + h)
                - fn(p[0] + h, p[1] - h)
                - fn(p[0] - h, p[1] + h)
                + fn(p[0] - h, p[1] - h)
            ) / (4 * h * h)
            hess[idx, 0, 1] = hess[idx, 1, 0] = mixed
    return HolderSamples(points=pts, values=vals, gradients=grads, hessians=hess)


def sector_sample_points(
    theta0: float,
    r_min: float,
    r_max: float = 1.0,
    per_decade: int = 6,
    n_theta: int = 7,
) -> np.ndarray:
    """Vertex-clustered (y1, y2) sample points: geometric shells times rays."""
    if not (0.0 < r_min < r_max):
        raise DomainError(f"need 0 < r_min < r_max, got ({r_min}, {r_max})")
    n_shells = max(2, int(round(per_decade * math.log10(r_max / r_min))) + 1)
    radii = np.geomspace(r_min, r_max, n_shells)
    thetas = np.linspace(0.0, theta0, n_theta)
    pts = np.empty((n_shells * n_theta, 2))
    idx = 0
    for r in radii:
        for t in thetas:
            pts[idx] = (r * math.cos(t), r * math.sin(t))
            idx += 1
    return pts


def _pair_quotients(samples: HolderSamples, k: int, alpha: float, wexp: float) -> np.ndarray:
    table = samples.derivative_table(k)
    pts = samples.points
    iu, ju = np.triu_indices(len(samples), 1)
    sep = np.hypot(pts[iu, 0] - pts[ju, 0], pts[iu, 1] - pts[ju, 1])
    diff = np.sqrt(((table[iu] - table[ju]) ** 2).sum(axis=1))
    d = samples.vertex_distances()
    dmin = np.minimum(d[iu], d[ju])
    if wexp == 0.0:
        return diff / sep ** alpha
    return dmin ** wexp * diff / sep ** alpha


def holder_seminorm(samples: HolderSamples, spec: HolderSpec) -> float:
    """Exact weighted Hoelder seminorm over the finite sample set."""
    if len(samples) < 2:
        return 0.0
    return float(_pair_quotients(samples, spec.k, spec.alpha, spec.weight_exponent).max())


def _seminorm_raw(samples: HolderSamples, k: int, alpha: float, beta: float) -> float:
    if len(samples) < 2:
        return 0.0
    wexp = max(k + alpha + beta, 0.0)
    return float(_pair_quotients(samples, k, alpha, wexp).max())


def weighted_sup_norm(samples: HolderSamples, k: int, beta: float) -> float:
    """sum_{j<=k} sup_x d_x^(max(j+beta,0)) |D^j u(x)|."""
    d = samples.vertex_distances()
    total = 0.0
    for j in range(k + 1):
        wexp = max(j + beta, 0.0)
        mags = samples.derivative_magnitudes(j)
        total += float((d ** wexp * mags).max() if wexp > 0.0 else mags.max())
    return total


def weighted_norm(samples: HolderSamples, k: int, alpha: float, beta: float) -> float:
    """Full weighted norm: sup part plus the order-k seminorm."""
    return weighted_sup_norm(samples, k, beta) + _seminorm_raw(samples, k, alpha, beta)


@dataclass(frozen=True)
class ProductCheckReport:
    lhs: float
    rhs: float
    holds: bool
    beta: float


def holder_product_check(
    u: HolderSamples,
    v: HolderSamples,
    alpha: float,
    beta1: float,
    beta2: float,
    beta1p: float,
    beta2p: float,
) -> ProductCheckReport:
    """Product inequality on the discrete estimator:

        [uv]_{0,a}^(b) <= [u]_{0,a}^(b1) ||v||_0^(b2) + ||u||_0^(b1') [v]_{0,a}^(b2')

    with b = b1 + b2 = b1' + b2'.  The hypothesis bookkeeping requires
    b >= -a, b1 >= -a, b2' >= -a, b2 >= 0, b1' >= 0.  The inequality is a
    pointwise-pair bound, so it holds exactly over any finite sample set; it
    is still evaluated two-sided and reported.
    """
    if not (0.0 < alpha <= 1.0):
        raise HypothesisError(f"exponent must lie in (0, 1], got {alpha}")
    beta = beta1 + beta2
    if abs(beta - (beta1p + beta2p)) > 1e-12:
        raise HypothesisError(
            f"weight splits disagree: {beta1}+{beta2} != {beta1p}+{beta2p}"
        )
    if beta < -alpha or beta1 < -alpha or beta2p < -alpha:
        raise HypothesisError("a weight exponent falls below -alpha")
    if beta2 < 0.0 or beta1p < 0.0:
        raise HypothesisError("sup-norm weight exponents must be nonnegative")
    if u.points.shape != v.points.shape or not np.allclose(u.points, v.points):
        raise HypothesisError("u and v must be sampled on the same points")
    product = HolderSamples(points=u.points, values=u.values * v.values)
    lhs = _seminorm_raw(product, 0, alpha, beta)
    rhs = _seminorm_raw(u, 0, alpha, beta1) * weighted_sup_norm(v, 0, beta2)
    rhs += weighted_sup_norm(u, 0, beta1p) * _seminorm_raw(v, 0, alpha, beta2p)
    holds = lhs <= rhs * (1.0 + 1e-12) + 1e-300
    return ProductCheckReport(lhs=lhs, rhs=rhs, holds=holds, beta=beta)


@dataclass(frozen=True)
class InterpolationCheckReport:
    lhs: float
    rhs_first: float
    rhs_second: float
    theta: float
    k: int
    alpha: float
    beta: float
    empirical_constant: float


def holder_interpolation_check(
    samples: HolderSamples,
    first: tuple[int, float, float],
    second: tuple[int, float, float],
    theta: float,
) -> InterpolationCheckReport:
    """Interpolation inequality on the discrete estimator:

        ||u||_{k,a}^(b) <= C (||u||_{k1,a1}^(b1))^theta (||u||_{k2,a2}^(b2))^(1-theta),

    with k + a = theta (k1 + a1) + (1-theta)(k2 + a2) and
    b = theta b1 + (1-theta) b2.  The constant is not specified, so the check
    evaluates both sides and reports the empirical ratio.
    """
    if not (0.0 < theta < 1.0):
        raise HypothesisError(f"interpolation parameter must lie in (0, 1), got {theta}")
    for k_j, a_j, b_j in (first, second):
        if not (0.0 < a_j <= 1.0):
            raise HypothesisError(f"exponent {a_j} outside (0, 1]")
        if k_j + a_j + b_j < 0.0:
            raise HypothesisError(f"tuple ({k_j}, {a_j}, {b_j}) has negative k+a+b")
    if max(
        first[0] + first[1] + first[2], second[0] + second[1] + second[2]
    ) <= 0.0:
        raise HypothesisError("at least one tuple must have k + a + b > 0")
    total = theta * (first[0] + first[1]) + (1.0 - theta) * (second[0] + second[1])
    k = int(math.ceil(total)) - 1
    alpha = total - k
    if k < 0:
        raise HypothesisError(f"derived smoothness k + a = {total} is below 1")
    beta = theta * first[2] + (1.0 - theta) * second[2]
    lhs = weighted_norm(samples, k, alpha, beta)
    rhs1 = weighted_norm(samples, first[0], first[1], first[2])
    rhs2 = weighted_norm(samples, second[0], second[1], second[2])
    rhs = (rhs1 ** theta) * (rhs2 ** (1.0 - theta))
    constant = lhs / rhs if rhs > 0.0 else math.inf
    return InterpolationCheckReport(
        lhs=lhs,
        rhs_first=rhs1,
        rhs_second=rhs2,
        theta=theta,
        k=k,
        alpha=alpha,
        beta=beta,
        empirical_constant=constant,
    )
