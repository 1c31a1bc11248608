import math

import numpy as np
import pytest

from eigenbound.eigensolvers import (
    GridOperator1D,
    aligned_grid,
    construct_radial_3d,
    grid_eigensolve_1d,
    mode_function_f,
    radial_determinant,
    radial_grid_eigensolve,
    radial_length,
    residual_check_analytic_1d,
    richardson,
    solve_square_well_1d,
    square_well_grid_eigenvalue,
    square_well_length,
    winding_number,
)
from eigenbound.errors import DomainError, PoleError, ValidationError
from eigenbound.potentials import GridSpec, RadialStep3D, SquareWell1D

# matching condition z cos(kR) = i k sin(kR) solved with mpmath.findroot at 50 digits
WELL_EPS01 = dict(
    R=66.051701859880914,
    k_in=-1.0103571913118745 + 0.021236796613512719j,
    V0=-0.030370652505216097 + 0.24291350035778048j,
)
# z2 = -i z1 cot(z1 R) with z1 = 1/2 + 0.05 i, mpmath at 50 digits
RADIAL_EPS005 = dict(
    R=23.561944901923449,
    z2=-0.50049032671550524 + 0.044826698118496555j,
    V0=0.00098113427158635489 - 0.094870657573807329j,
)
# real wells, brentq on the even / s-wave matching conditions
REAL_WELL_1D = -0.4537531658603282  # V = -1 on [-1, 1]
REAL_S_WAVE = -0.10177537091032784  # V = -1 on B(0, 2)


def test_winding_number_counts_zeros():
    f = lambda k: (k - 0.1) * (k + 0.2j) * (k - 3)
    assert winding_number(f, 0, 1) == 2
    assert winding_number(f, 3, 0.5) == 1
    assert winding_number(lambda k: np.exp(k), 0, 2) == 0


def test_square_well_length():
    eps = 0.1
    assert square_well_length(eps) == pytest.approx((1 - math.log(eps)) / (0.5 * eps))
    assert square_well_length(eps) == pytest.approx(WELL_EPS01["R"], rel=1e-14)


def test_square_well_root_matches_reference():
    sol = solve_square_well_1d(0.1)
    assert sol.R == pytest.approx(WELL_EPS01["R"], rel=1e-14)
    assert sol.k_in == pytest.approx(WELL_EPS01["k_in"], rel=1e-10)
    assert sol.V0 == pytest.approx(WELL_EPS01["V0"], rel=1e-9)
    assert sol.E == pytest.approx((1 + 0.1j) ** 2)
    assert sol.winding == 1
    assert sol.residual < 1e-10
    assert sol.k_in.imag > 0


def test_square_well_record_is_flat():
    rec = solve_square_well_1d(0.1).record()
    assert rec["V0_re"] == pytest.approx(WELL_EPS01["V0"].real, rel=1e-8)
    assert all(not isinstance(v, complex) for v in rec.values())


def test_square_well_domain():
    with pytest.raises(DomainError):
        solve_square_well_1d(0.3)
    with pytest.raises(DomainError):
        solve_square_well_1d(0.1, C=3.0)
    with pytest.raises(DomainError):
        solve_square_well_1d(0.1, rho=1.0)


def test_mode_function_pole():
    eps = 0.1
    R = square_well_length(eps)
    with pytest.raises(PoleError):
        mode_function_f(eps, R, 1 + math.pi / (2 * R))
    assert np.isfinite(mode_function_f(eps, R, 0.3 + 0.1j))


def test_square_well_grid_eigenvalue_agrees():
    sol = solve_square_well_1d(0.1)
    extrap, coarse, fine = square_well_grid_eigenvalue(sol, h=0.05)
    assert abs(extrap - sol.E) < 1e-5
    assert abs(extrap - sol.E) < abs(fine - sol.E)


def test_analytic_residual_second_order():
    sol = solve_square_well_1d(0.1)
    r1 = residual_check_analytic_1d(sol, h=0.04)
    r2 = residual_check_analytic_1d(sol, h=0.02)
    assert r1 / r2 == pytest.approx(4, abs=0.6)


def test_aligned_grid_puts_edges_on_nodes():
    g = aligned_grid(2.3, 0.1, 1.0)
    x = g.axes[0]
    assert np.min(np.abs(x - 2.3)) < 1e-12 and np.min(np.abs(x + 2.3)) < 1e-12
    assert g.spacing[0] <= 0.1


def test_real_well_grid_eigenvalue():
    L = 15.0
    vals = []
    for h in (0.02, 0.01):
        grid = GridSpec(1, (L,), (int(round(2 * L / h)) + 1,))
        lam, res = grid_eigensolve_1d(GridOperator1D(grid, SquareWell1D(-1.0, 1.0)), -0.5)[0]
        assert res < 1e-8
        vals.append(lam)
    assert richardson(*vals) == pytest.approx(REAL_WELL_1D, abs=1e-6)


def test_grid_spacing_guard():
    grid = GridSpec(1, (5.0,), (11,))
    with pytest.raises(DomainError):
        grid_eigensolve_1d(GridOperator1D(grid, SquareWell1D(-1.0, 1.0)), -0.5)


def test_radial_length_rounding():
    eps, delta = 0.1, 0.5
    target = -math.log(1.5 * eps) / (2 * eps)
    R = radial_length(eps, delta)
    assert math.sin(R) == pytest.approx(-1)
    assert R <= target
    assert radial_length(eps, delta, "nearest") == pytest.approx(R + 2 * math.pi)
    with pytest.raises(DomainError):
        radial_length(eps, delta, "ceil")


def test_radial_construction_matches_reference():
    sol = construct_radial_3d(0.05)
    assert sol.R == pytest.approx(RADIAL_EPS005["R"], rel=1e-14)
    assert sol.z2 == pytest.approx(RADIAL_EPS005["z2"], rel=1e-10)
    assert sol.V0 == pytest.approx(RADIAL_EPS005["V0"], rel=1e-9)
    assert abs(radial_determinant(sol.z1, sol.z2, sol.R)) < 1e-12
    assert sol.z2.imag >= sol.delta * sol.eps / 4


def test_radial_nearest_rounding_fails_validation():
    with pytest.raises(ValidationError):
        construct_radial_3d(0.1, rounding="nearest")
    with pytest.raises(DomainError):
        construct_radial_3d(0.2)


def test_radial_grid_eigenvalue_real():
    lam, res = radial_grid_eigensolve(RadialStep3D(-1.0, 2.0), -0.1, h=0.02, r_max=30.0)
    assert lam.real == pytest.approx(REAL_S_WAVE, abs=1e-6)
    assert res < 1e-8


def test_radial_grid_eigenvalue_complex():
    sol = construct_radial_3d(0.1)
    lam, _ = radial_grid_eigensolve(sol.potential, sol.E, h=0.02)
    assert abs(lam - sol.E) < 1e-5
