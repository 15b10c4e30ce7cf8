"""Graded polar grids on the annular sector and nodal fields on them."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .geometry import THETA0_MAX

#: Default radial grading ratio of the vertex-clustered grid.
DEFAULT_GRADING = 1.05

#: Default inner-radius fraction of the vertex-clustered grid.
DEFAULT_RMIN_FRACTION = 1e-3

_FLOAT_FMT = "{:.17g}"


@dataclass(frozen=True)
class SectorGrid:
    """Tensor grid on the annular sector [r_min, r_max] x [0, theta0].

    Radial steps grow geometrically away from r_min by the factor `grading`
    (grading = 1 gives uniform spacing); theta nodes are uniform.  The mode
    m selects the azimuthal behaviour of fields living on the grid: m = 0 is
    axisymmetric, m = 1 carries a sin/cos azimuthal factor and vanishes on
    the axis.
    """

    r_min: float
    r_max: float
    n_r: int
    n_theta: int
    theta0: float
    grading: float = 1.0
    m: int = 0
    r: np.ndarray = field(init=False, repr=False, compare=False)
    theta: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not (0.0 < self.r_min < self.r_max):
            raise DomainError(
                f"need 0 < r_min < r_max, got ({self.r_min}, {self.r_max})"
            )
        if self.n_r < 3 or self.n_theta < 3:
            raise DomainError(
                f"need at least 3 nodes per direction, got ({self.n_r}, {self.n_theta})"
            )
        if not (0.0 < self.theta0 < THETA0_MAX):
            raise DomainError(f"opening angle {self.theta0} out of range")
        if self.grading < 1.0:
            raise DomainError(f"grading must be >= 1, got {self.grading}")
        if self.m not in (0, 1):
            raise DomainError(f"mode must be 0 or 1, got {self.m}")
        if self.grading == 1.0:
            r = np.linspace(self.r_min, self.r_max, self.n_r)
        else:
            steps = self.grading ** np.arange(self.n_r - 1)
            steps *= (self.r_max - self.r_min) / steps.sum()
            r = self.r_min + np.concatenate(([0.0], np.cumsum(steps)))
            r[-1] = self.r_max
        object.__setattr__(self, "r", r)
        object.__setattr__(
            self, "theta", np.linspace(0.0, self.theta0, self.n_theta)
        )

    @classmethod
    def default(
        cls,
        theta0: float,
        r_max: float = 1.0,
        n_r: int = 64,
        n_theta: int = 48,
        m: int = 0,
    ) -> "SectorGrid":
        """Vertex-clustered default: r_min = 1e-3 r_max, grading 1.05."""
        return cls(
            r_min=DEFAULT_RMIN_FRACTION * r_max,
            r_max=r_max,
            n_r=n_r,
            n_theta=n_theta,
            theta0=theta0,
            grading=DEFAULT_GRADING,
            m=m,
        )

    def refined(self, factor: int = 2) -> "SectorGrid":
        """Same sector, node counts scaled by `factor` (intervals multiplied)."""
        return SectorGrid(
            r_min=self.r_min,
            r_max=self.r_max,
            n_r=(self.n_r - 1) * factor + 1,
            n_theta=(self.n_theta - 1) * factor + 1,
            theta0=self.theta0,
            grading=self.grading,
            m=self.m,
        )

    @property
    def h_theta(self) -> float:
        return self.theta0 / (self.n_theta - 1)

    @property
    def h_max(self) -> float:
        """Largest step of either direction, the refinement-study mesh size."""
        return max(float(np.diff(self.r).max()), self.h_theta)

    def index(self, i: int, j: int) -> int:
        return i * self.n_theta + j

    def node_count(self) -> int:
        return self.n_r * self.n_theta

    def to_csv(self, path) -> None:
        """Write the node table (r, theta) in row-major order, LF endings."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("r,theta\n")
            for ri in self.r:
                for tj in self.theta:
                    fh.write(
                        _FLOAT_FMT.format(ri) + "," + _FLOAT_FMT.format(tj) + "\n"
                    )


@dataclass(frozen=True)
class DiscreteField:
    """Nodal values on a SectorGrid, shape (n_r, n_theta)."""

    grid: SectorGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n_r, self.grid.n_theta):
            raise DomainError(
                f"values shape {values.shape} does not match grid "
                f"({self.grid.n_r}, {self.grid.n_theta})"
            )
        if not np.all(np.isfinite(values)):
            raise DomainError("field values must be finite at every node")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, grid: SectorGrid, fn) -> "DiscreteField":
        """Sample fn(r, theta) at the nodes."""
        vals = np.empty((grid.n_r, grid.n_theta))
        for i, ri in enumerate(grid.r):
            for j, tj in enumerate(grid.theta):
                vals[i, j] = fn(float(ri), float(tj))
        return cls(grid=grid, values=vals)

    def max_norm(self) -> float:
        return float(np.abs(self.values).max())

    def to_csv(self, path) -> None:
        """Write (r, theta, value) rows in row-major node order, LF endings."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("r,theta,value\n")
            for i, ri in enumerate(self.grid.r):
                for j, tj in enumerate(self.grid.theta):
                    fh.write(
                        _FLOAT_FMT.format(ri)
                        + ","
                        + _FLOAT_FMT.format(tj)
                        + ","
                        + _FLOAT_FMT.format(self.values[i, j])
                        + "\n"
                    )
