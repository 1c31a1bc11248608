import math

import numpy as np
import pytest

from eigenbound.errors import DimensionMismatchError, DivergentError, DomainError, RangeError
from eigenbound.potentials import (
    GaussianQuasimodePotential,
    GridSpec,
    IonescuJerison,
    RadialStep3D,
    RectangularWell,
    Sampled,
    SquareWell1D,
    TruncatedQuasimodePotential,
    ball_ball_volume,
    ball_box_volume,
    default_perturbation,
    ij_local_norm_leading,
    ij_local_norm_model,
    local_ball_norm,
    perturbed_ij,
    rectangular_well_norm,
    spherical_integral,
)

# sqrt of int_{B(0, R)} (n + |x_1| + |x'|^2)^{-2} dx, scipy dblquad in cylindrical coordinates
IJ_LOCAL_REFERENCE = {
    (10, 100): 3.857604085680074,
    (10, 1000): 5.382530139576217,
    (100, 1000): 3.87822933948736,
    (100, 10000): 5.384638474687744,
}


def test_gridspec_nodes_and_spacing():
    g = GridSpec(2, (1.0, 2.0), (3, 5))
    assert np.allclose(g.spacing, [1.0, 1.0])
    assert g.size == 15
    nodes = g.nodes()
    assert nodes.shape == (15, 2)
    assert np.allclose(nodes[0], [-1, -2]) and np.allclose(nodes[-1], [1, 2])
    assert g.scaled(2).half_extent == (2.0, 4.0)
    with pytest.raises(DomainError):
        GridSpec(1, 1.0, 1)


def test_ball_ball_lens_volume():
    # two unit balls at distance 1 share a lens of volume 5 pi / 12
    assert ball_ball_volume([0, 0, 0], 1, [1, 0, 0], 1, 3) == pytest.approx(5 * math.pi / 12, rel=1e-14)
    assert ball_ball_volume([0, 0], 1, [0.2, 0], 3, 2) == pytest.approx(math.pi)
    assert ball_ball_volume([0], 1, [1.5], 1, 1) == pytest.approx(0.5)
    assert ball_ball_volume([0, 0, 0], 1, [3, 0, 0], 1, 3) == 0.0


def test_ball_box_volume_against_grid_count():
    center, r, hw = np.array([0.7, -0.2, 0.4]), 1.3, np.array([1.0, 0.8, 0.6])
    n = 240
    axes = [np.linspace(-a, a, n, endpoint=False) + a / n for a in hw]
    X = np.stack(np.meshgrid(*axes, indexing="ij"), -1)
    inside = np.sum((X - center) ** 2, -1) <= r * r
    count = inside.mean() * np.prod(2 * hw)
    assert ball_box_volume(center, r, hw) == pytest.approx(count, rel=2e-3)


def test_ball_box_volume_low_dimensions():
    assert ball_box_volume([0.5], 1.0, [1.0]) == pytest.approx(1.5)
    # a disc inside a square
    assert ball_box_volume([0, 0], 0.5, [1, 1]) == pytest.approx(math.pi / 4)
    # the square inside a disc
    assert ball_box_volume([0, 0], 2.0, [1, 1]) == pytest.approx(4.0)


def test_spherical_integral_polynomial():
    val = spherical_integral(lambda x: np.sum(x * x, -1), np.zeros(3), 2.0, 3)
    assert val == pytest.approx(4 * math.pi * 2**5 / 5, rel=1e-10)


def test_constant_box_norms():
    V = RectangularWell(1, 4, 3)
    assert V.lq_norm(2) == pytest.approx(math.sqrt(128))
    assert rectangular_well_norm(1, 4, 3, 2) == pytest.approx(V.lq_norm(2))
    assert V.sup_abs() == 1
    assert V([0, 0, 0]) == 1 and V([4.5, 0, 0]) == 0
    with pytest.raises(RangeError):
        V.lq_norm(0.5)


def test_square_well_and_rescaling():
    V = SquareWell1D(2 + 1j, 3.0)
    assert V.V0 == 2 + 1j and V.R == 3.0
    assert V.lq_norm(1) == pytest.approx(abs(2 + 1j) * 6)
    W = V.rescaled(2.0, 0.25)
    assert isinstance(W, SquareWell1D)
    assert W.R == 6.0 and W.V0 == pytest.approx((2 + 1j) / 4)


def test_radial_step_weighted_integral_closed_form():
    V = RadialStep3D(2.0, 1.5)
    s = 0.7
    # 4 pi int_0^R r^2 e^{-s r} dr, integrated by parts
    R = 1.5
    exact = 4 * math.pi * (2 / s**3 - math.exp(-s * R) * (R * R / s + 2 * R / s**2 + 2 / s**3))
    assert V.weighted_power_integral(1, [0, 0, 0], s) == pytest.approx(2 * exact, rel=1e-12)
    # off-centre value goes through the lens-volume formula
    off = V.weighted_power_integral(1, [0.5, 0, 0], s)
    assert 0 < off < V.weighted_power_integral(1, [0, 0, 0], s)


def test_generic_ball_integral_matches_step_formula():
    V = RadialStep3D(1.0, 1.0)
    generic = super(RadialStep3D, V).ball_power_integral(1, np.array([0.5, 0, 0]), 1.0)
    exact = V.ball_power_integral(1, [0.5, 0, 0], 1.0)
    assert generic == pytest.approx(exact, rel=2e-2)


def test_ionescu_jerison_closed_form():
    # d = 1: int (n + |x|)^{-q} dx = 2 n^{1-q} / (q - 1)
    V = IonescuJerison(2, 1)
    assert V.lq_norm(2) ** 2 == pytest.approx(2 * 2 ** (1 - 2) / (2 - 1))
    # d = 3: polar coordinates in x' and u = |x'|^2 give 2 pi n^{2-q} / ((q - 1)(q - 2))
    n, q = 4, 3
    V3 = IonescuJerison(n, 3)
    assert V3.abs_power_integral(q) == pytest.approx(2 * math.pi * n ** (2 - q) / ((q - 1) * (q - 2)))
    with pytest.raises(DivergentError):
        V3.lq_norm(2)


def test_ionescu_jerison_scaling_bracket():
    vals = [IonescuJerison(n, 3).lq_norm(3) * n ** (1 - 4 / 6) for n in (10, 100, 1000)]
    assert max(vals) / min(vals) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("key", list(IJ_LOCAL_REFERENCE))
def test_ionescu_jerison_local_norm(key):
    n, R = key
    V = IonescuJerison(n, 3)
    assert local_ball_norm(V, 2, np.zeros(3), R) == pytest.approx(IJ_LOCAL_REFERENCE[key], rel=1e-8)


def test_ionescu_jerison_local_norm_leading_term():
    # the local norm depends on R / n only and approaches the leading form
    for (n, R), ref in IJ_LOCAL_REFERENCE.items():
        assert ij_local_norm_leading(n, R) == pytest.approx(ref, rel=0.1)
    assert ij_local_norm_model(10, 100) == pytest.approx(0.1 * math.log(10))


def test_sampled_roundtrip_and_interpolation():
    grid = GridSpec(2, (1.0, 1.0), (5, 5))
    S = Sampled.from_function(lambda x: x[:, 0] + 2j * x[:, 1], grid)
    T = Sampled.from_text(S.to_text())
    assert np.array_equal(S.values, T.values)
    assert S([0.25, 0.5]) == pytest.approx(0.25 + 1j)
    assert S([2.0, 0.0]) == 0
    with pytest.raises(DomainError):
        Sampled.from_text("1 3 1.0\n0 0\n")
    with pytest.raises(DimensionMismatchError):
        S(np.zeros(3))


def test_perturbed_ij():
    W = default_perturbation(3, 4.0, 17)
    V = perturbed_ij(10, 0.1j, W)
    assert V([0, 0, 0]) == pytest.approx(0.1 + 0.1j)
    assert V.lq_norm(3) == pytest.approx(IonescuJerison(10, 3).lq_norm(3), rel=0.05)
    with pytest.raises(RangeError):
        perturbed_ij(10, 1.5)


def test_gaussian_quasimode_potential_norm():
    eps, d, q = 0.2, 3, 4
    V = GaussianQuasimodePotential(eps, d)
    assert V.lq_norm(q) == pytest.approx(eps ** (1 - (d + 1) / (2 * q)) * (2 * math.pi / q) ** (d / (2 * q)))
    assert V([0, 0, 0]) == eps
    with pytest.raises(DomainError):
        GaussianQuasimodePotential(eps, d, chi="lorentzian")


def test_truncated_quasimode_potential():
    V = TruncatedQuasimodePotential(0.1, 1.5, 3)
    hw = V.support_halfwidths()
    assert hw[0] == pytest.approx(15.0) and hw[1] == pytest.approx(1.5 / math.sqrt(0.1))
    assert V([20.0, 0, 0]) == 0
    assert math.isinf(TruncatedQuasimodePotential(0.1, math.inf, 3).lq_norm(4))
    assert V.lq_norm(4) > 0
