"""Finite-difference harness: grids, residuals, solves, fits."""

import math

import numpy as np
import pytest

from obliquecone.errors import DegenerateFit, DomainError
from obliquecone.exponent import SeparableSolution, critical_exponent, neumann_exponent
from obliquecone.geometry import ConeGeometry, ObliqueBC
from obliquecone.grids import DiscreteField, SectorGrid
from obliquecone.solver import (
    check_m_matrix,
    fit_exponent,
    laplacian_residual,
    residual_convergence,
    solve_dirichlet,
)

THETA0 = 2 * math.pi / 3


def annulus_grids(theta0, sizes=(25, 49, 97), m=0):
    return [
        SectorGrid(r_min=0.25, r_max=1.0, n_r=n, n_theta=n, theta0=theta0, m=m)
        for n in sizes
    ]


class TestSectorGrid:
    def test_uniform_nodes(self):
        g = SectorGrid(r_min=0.1, r_max=1.0, n_r=10, n_theta=5, theta0=1.5)
        assert g.r[0] == 0.1 and g.r[-1] == 1.0
        np.testing.assert_allclose(np.diff(g.r), np.diff(g.r)[0])
        assert g.theta[0] == 0.0 and g.theta[-1] == 1.5

    def test_geometric_grading(self):
        g = SectorGrid(r_min=0.01, r_max=1.0, n_r=20, n_theta=5, theta0=1.5, grading=1.05)
        steps = np.diff(g.r)
        np.testing.assert_allclose(steps[1:] / steps[:-1], 1.05, rtol=1e-12)
        assert g.r[-1] == 1.0

    def test_default_grid(self):
        g = SectorGrid.default(2.0)
        assert g.r_min == pytest.approx(1e-3)
        assert g.grading == 1.05

    def test_refined_doubles_intervals(self):
        g = SectorGrid(r_min=0.25, r_max=1.0, n_r=25, n_theta=25, theta0=1.5)
        fine = g.refined()
        assert (fine.n_r, fine.n_theta) == (49, 49)
        assert fine.h_max == pytest.approx(g.h_max / 2)

    def test_validation(self):
        with pytest.raises(DomainError):
            SectorGrid(r_min=0.0, r_max=1.0, n_r=5, n_theta=5, theta0=1.0)
        with pytest.raises(DomainError):
            SectorGrid(r_min=0.1, r_max=1.0, n_r=2, n_theta=5, theta0=1.0)
        with pytest.raises(DomainError):
            SectorGrid(r_min=0.1, r_max=1.0, n_r=5, n_theta=5, theta0=1.0, grading=0.9)
        with pytest.raises(DomainError):
            SectorGrid(r_min=0.1, r_max=1.0, n_r=5, n_theta=5, theta0=1.0, m=2)

    def test_csv_roundtrip(self, tmp_path):
        g = SectorGrid(r_min=0.1, r_max=1.0, n_r=4, n_theta=3, theta0=1.0)
        field = DiscreteField.from_function(g, lambda r, t: r * math.cos(t))
        path = tmp_path / "field.csv"
        field.to_csv(path)
        raw = path.read_bytes()
        assert b"\r" not in raw
        lines = raw.decode().strip().split("\n")
        assert lines[0] == "r,theta,value"
        assert len(lines) == 1 + 4 * 3
        r0, t0, v0 = (float(x) for x in lines[1].split(","))
        assert (r0, t0) == (0.1, 0.0)
        assert v0 == pytest.approx(0.1 * math.cos(0.0))
        gpath = tmp_path / "grid.csv"
        g.to_csv(gpath)
        assert gpath.read_text().splitlines()[0] == "r,theta"


class TestLaplacianResidual:
    def test_residual_field_masks_boundary_ring(self):
        grid = annulus_grids(THETA0, sizes=(25,))[0]
        field, norm = laplacian_residual(SeparableSolution(alpha=0.5, m=0), grid)
        assert norm > 0.0
        assert field.max_norm() == norm
        np.testing.assert_array_equal(field.values[0, :], 0.0)
        np.testing.assert_array_equal(field.values[-1, :], 0.0)
        np.testing.assert_array_equal(field.values[:, -1], 0.0)

    @pytest.mark.parametrize("alpha,m", [(1.0, 0), (0.6, 0)])
    def test_axisymmetric_orders(self, alpha, m):
        study = residual_convergence(
            SeparableSolution(alpha=alpha, m=m), annulus_grids(THETA0, m=m)
        )
        assert 1.7 <= study.observed_order <= 2.3

    def test_m1_order(self):
        geom = ConeGeometry(theta0=THETA0)
        root = neumann_exponent(geom)
        study = residual_convergence(
            SeparableSolution(alpha=root, m=1), annulus_grids(THETA0, m=1)
        )
        assert 1.7 <= study.observed_order <= 2.3

    def test_residual_ratio_near_four_for_smooth_solution(self):
        study = residual_convergence(
            SeparableSolution(alpha=1.0, m=0), annulus_grids(THETA0)
        )
        for lo, hi in zip(study.residuals[1:], study.residuals[:-1]):
            assert 3.2 <= hi / lo <= 4.9

    def test_mode_mismatch_rejected(self):
        grid = annulus_grids(THETA0, sizes=(25,), m=1)[0]
        with pytest.raises(DomainError):
            laplacian_residual(SeparableSolution(alpha=0.5, m=0), grid)


class TestSolveDirichlet:
    def test_constant_solution_exact(self):
        grid = SectorGrid.default(THETA0, n_r=24, n_theta=20)
        field = solve_dirichlet(grid, {"r_min": 2.0, "r_max": 2.0, "cone": 2.0})
        assert np.abs(field.values - 2.0).max() <= 1e-10

    def test_manufactured_quadratic_with_source(self):
        # u = r^2 solves L u = 6 exactly for the discrete operator too:
        # 3-point stencils are exact on quadratics and the angular part
        # annihilates theta-independent fields
        grid = SectorGrid(
            r_min=0.05, r_max=1.0, n_r=30, n_theta=12, theta0=THETA0, grading=1.05
        )
        exact = lambda r, t: r * r
        field = solve_dirichlet(
            grid, {"r_min": exact, "r_max": exact, "cone": exact}, rhs=6.0
        )
        expected = np.outer(grid.r ** 2, np.ones(grid.n_theta))
        assert np.abs(field.values - expected).max() <= 1e-9

    def test_oblique_solve_converges_at_order_two(self):
        theta0, s = THETA0, 1.8
        geom = ConeGeometry(theta0=theta0)
        root = critical_exponent(geom, ObliqueBC.for_cone(geom, s))
        sol = SeparableSolution(alpha=root, m=0)
        errs, hs = [], []
        for n in (17, 33, 65):
            grid = SectorGrid(r_min=0.05, r_max=1.0, n_r=n, n_theta=n, theta0=theta0)
            exact = np.outer(grid.r ** root, sol.profile_array(grid.theta))
            data = lambda r, t: r ** root * sol.profile(t)
            field = solve_dirichlet(grid, {"r_min": data, "r_max": data}, oblique_s=s)
            errs.append(np.abs(field.values - exact).max())
            hs.append(grid.h_max)
        slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
        assert 1.7 <= slope <= 2.3

    def test_m1_dirichlet_solve_converges_at_order_two(self):
        geom = ConeGeometry(theta0=THETA0)
        root = neumann_exponent(geom)
        sol = SeparableSolution(alpha=root, m=1)
        errs, hs = [], []
        for n in (17, 33, 65):
            grid = SectorGrid(r_min=0.25, r_max=1.0, n_r=n, n_theta=n, theta0=THETA0, m=1)
            exact = np.outer(grid.r ** root, sol.profile_array(grid.theta))
            data = lambda r, t: r ** root * sol.profile(t)
            field = solve_dirichlet(grid, {"r_min": data, "r_max": data, "cone": data})
            errs.append(np.abs(field.values - exact).max())
            hs.append(grid.h_max)
        slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
        assert 1.7 <= slope <= 2.3

    def test_discrete_maximum_principle(self):
        grid = SectorGrid.default(THETA0, n_r=40, n_theta=32)
        data = lambda r, t: abs(math.sin(3 * r) * math.cos(t)) + 0.05
        field = solve_dirichlet(grid, {"r_min": data, "r_max": data, "cone": data})
        assert field.values.min() >= -1e-12

    def test_maximum_principle_with_oblique_edge(self):
        theta0, s = math.pi / 3, -1.3
        geom = ConeGeometry(theta0=theta0)
        root = critical_exponent(geom, ObliqueBC.for_cone(geom, s))
        sol = SeparableSolution(alpha=root, m=0)
        grid = SectorGrid(r_min=0.02, r_max=1.0, n_r=48, n_theta=32, theta0=theta0)
        assert check_m_matrix(grid, oblique_s=s).passed
        data = lambda r, t: r ** root * sol.profile(t)
        field = solve_dirichlet(grid, {"r_min": data, "r_max": data}, oblique_s=s)
        assert field.values.min() >= -1e-12

    def test_solve_is_bit_stable(self):
        grid = SectorGrid.default(THETA0, n_r=20, n_theta=16)
        data = lambda r, t: math.cos(2 * r) + t
        first = solve_dirichlet(grid, {"r_min": data, "r_max": data, "cone": data})
        second = solve_dirichlet(grid, {"r_min": data, "r_max": data, "cone": data})
        np.testing.assert_array_equal(first.values, second.values)

    def test_missing_edge_data(self):
        grid = SectorGrid.default(THETA0, n_r=12, n_theta=8)
        with pytest.raises(DomainError):
            solve_dirichlet(grid, {"r_min": 0.0})

    def test_inadmissible_oblique_angle(self):
        grid = SectorGrid.default(THETA0, n_r=12, n_theta=8)
        with pytest.raises(DomainError):
            solve_dirichlet(grid, {"r_min": 0.0, "r_max": 0.0}, oblique_s=THETA0 + 0.1)


class TestMMatrix:
    def test_default_grids_pass(self):
        for m in (0, 1):
            grid = SectorGrid.default(THETA0, n_r=36, n_theta=28, m=m)
            assert check_m_matrix(grid).passed

    def test_radial_stress_grid_reports_violations(self):
        grid = SectorGrid(
            r_min=1e-6, r_max=1.0, n_r=8, n_theta=8, theta0=THETA0, grading=2.0
        )
        report = check_m_matrix(grid)
        assert not report.passed
        assert any(v.kind == "positive_offdiagonal" for v in report.violations)

    def test_coarse_theta_near_pi_reports_violations_m1(self):
        grid = SectorGrid(r_min=0.3, r_max=1.0, n_r=8, n_theta=10, theta0=3.05, m=1)
        report = check_m_matrix(grid)
        assert not report.passed
        # violations sit at the last interior angular node where the
        # transport coefficient is largest
        assert {v.j for v in report.violations} == {grid.n_theta - 2}


class TestFitExponent:
    def test_pure_power_callable(self):
        slope, diag = fit_exponent(lambda r, t: 3.0 * r ** 1.0, 0.4, (1e-3, 1e-1))
        assert slope == pytest.approx(1.0, abs=1e-8)
        assert diag.n_samples >= 10

    def test_separable_solution_exact_samples(self):
        geom = ConeGeometry(theta0=THETA0)
        root = critical_exponent(geom, ObliqueBC.for_cone(geom, 1.8))
        sol = SeparableSolution(alpha=root, m=0)
        slope, _ = fit_exponent(
            lambda r, t: r ** root * sol.profile(t), THETA0 / 2, (1e-3, 1e-1)
        )
        assert slope == pytest.approx(root, abs=1e-3)

    def test_discrete_field_path(self):
        grid = SectorGrid(
            r_min=1e-3, r_max=1.0, n_r=60, n_theta=10, theta0=1.2, grading=1.1
        )
        field = DiscreteField.from_function(grid, lambda r, t: r ** 0.42)
        slope, diag = fit_exponent(field, 0.6, (2e-3, 0.5))
        assert slope == pytest.approx(0.42, abs=1e-6)
        assert diag.n_samples >= 10

    def test_sign_change_rejected(self):
        with pytest.raises(DegenerateFit):
            fit_exponent(lambda r, t: math.sin(40.0 * r), 0.4, (1e-2, 1.0))

    def test_too_few_samples_rejected(self):
        grid = SectorGrid(r_min=0.1, r_max=1.0, n_r=5, n_theta=5, theta0=1.2)
        field = DiscreteField.from_function(grid, lambda r, t: r)
        with pytest.raises(DegenerateFit):
            fit_exponent(field, 0.6, (0.1, 0.3))

    def test_bad_window(self):
        with pytest.raises(DomainError):
            fit_exponent(lambda r, t: r, 0.4, (0.5, 0.1))
