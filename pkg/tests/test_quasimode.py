import math

import numpy as np
import pytest

from eigenbound.errors import RangeError
from eigenbound.quasimode import (
    check_proposition_condition,
    gaussian_quasimode,
    quasimode_bound_lhs,
    quasimode_norms,
    residual_analytic,
    stencil_residual_error,
    truncated_quasimode,
    truncation_delta,
    truncation_radius,
    y_integral,
)

# ||(-Laplace - 1 - i eps + V) psi||_2 in d = 2 by FFT differentiation on a
# periodic box of half-widths 10/eps, 10/sqrt(eps) with 1024 x 512 points
G_NORM_D2 = {0.3: 1.2609050329685632, 0.1: 0.40748239028021893}
# same oracle for the residual restricted to |y| > 1.5 at eps = 0.3, 4096 x 2048 points
G_NORM_D2_TRUNCATED = 0.5261070063416616


@pytest.mark.parametrize("d", [1, 2, 3])
def test_psi_normalisation(d):
    assert gaussian_quasimode(0.2, d).psi_norm2_sq == pytest.approx(math.pi ** (d / 2), rel=1e-12)


def test_y_integral_moment():
    # int |y|^2 e^{-|y|^2} dy = (d/2) pi^{d/2}
    val = y_integral(lambda y: np.sum(y * y, -1), 3)
    assert val == pytest.approx(1.5 * math.pi**1.5, rel=1e-12)
    assert y_integral(lambda y: np.ones(len(y)), 2, r_lo=math.inf) == 0.0


def test_coordinates_roundtrip():
    qm = gaussian_quasimode(0.1, 3)
    x = np.array([[1.0, 2.0, -3.0]])
    assert np.allclose(qm.x(qm.y(x)), x)
    assert np.allclose(qm.y(x), [[0.1, 2 * math.sqrt(0.1), -3 * math.sqrt(0.1)]])


@pytest.mark.parametrize("eps", list(G_NORM_D2))
def test_residual_norm_against_fft(eps):
    assert gaussian_quasimode(eps, 2).g_norm2 == pytest.approx(G_NORM_D2[eps], rel=1e-10)


def test_truncated_residual_against_fft():
    qm = truncated_quasimode(0.3, 4, d=2, M=1.5)
    assert qm.g_norm2 == pytest.approx(G_NORM_D2_TRUNCATED, rel=1e-3)


def test_potential_weighted_norm_closed_form():
    eps = 0.05
    qm = gaussian_quasimode(eps, 3)
    assert qm.Vhalf_psi_norm2 == pytest.approx(math.sqrt(eps) * (2 * math.pi / 3) ** 0.75, rel=1e-12)


def test_residual_is_order_eps():
    g = [gaussian_quasimode(e, 3).g_norm2 for e in (0.2, 0.1, 0.05)]
    assert g[0] / g[1] == pytest.approx(2, rel=0.05)
    assert g[1] / g[2] == pytest.approx(2, rel=0.05)


def test_stencil_matches_analytic_residual():
    qm = gaussian_quasimode(0.4, 2)
    e1 = stencil_residual_error(qm, 0.2)
    e2 = stencil_residual_error(qm, 0.1)
    assert e1 / e2 == pytest.approx(4, rel=0.1)
    x = np.zeros((1, 2))
    assert residual_analytic(qm, x)[0] == pytest.approx(qm.free_multiplier(qm.y(x))[0] * qm.psi(x)[0])


def test_norms_and_condition():
    qm = gaussian_quasimode(0.1, 3)
    g2, Vq, Vpsi = quasimode_norms(qm, 4)
    assert Vq == pytest.approx(qm.V.lq_norm(4))
    cond = check_proposition_condition(qm, 4)
    assert cond == pytest.approx(0.1 ** (4 / 16 - 1) * math.sqrt(Vq) * g2 / Vpsi)
    with pytest.raises(RangeError):
        quasimode_norms(qm, 2)


def test_truncation_parameters():
    assert truncation_delta(4, 3) == pytest.approx(0.5)
    assert truncation_radius(0.01, 4, 3) == pytest.approx(0.01 ** (-0.5 / (2 * 2.75)))
    assert quasimode_bound_lhs(0.01, 3, 4) == pytest.approx(0.1)
    with pytest.raises(RangeError):
        truncation_delta(2, 3)


def test_truncated_residual_decreases_with_radius():
    g = [truncated_quasimode(0.1, 4, M=M).g_norm2 for M in (1.0, 2.0, 3.0)]
    assert g[0] > g[1] > g[2] > 0
    full = truncated_quasimode(0.1, 4, M=math.inf)
    assert full.g_norm2 == 0.0
    assert check_proposition_condition(full, 4) == 0.0


def test_eps_range():
    with pytest.raises(RangeError):
        gaussian_quasimode(0.6)
