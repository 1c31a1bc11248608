"""Gaussian quasimodes concentrated along a ray.

With the anisotropic coordinates y = (eps x_1, sqrt(eps) x') the quasimode

    psi(x) = N^{-1/2} e^{i x_1} exp(-|y|^2 / 2),   N = eps^{-(d+1)/2},

satisfies (-Laplace - 1 - i eps) psi = (eps A(y) + eps^2 B(y)) psi with the
polynomial multipliers A, B of :func:`potentials.quasimode_multipliers`.
Since |psi|^2 dx = exp(-|y|^2) dy, every norm below is an integral in y
against a Gaussian and is computed in polar coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import RangeError
from .potentials import (
    GaussianQuasimodePotential,
    Potential,
    TruncatedQuasimodePotential,
    _angular_rule,
    quasimode_multipliers,
)

# exp(-r^2) is below 1e-60 past this radius
_Y_CUTOFF = 12.0


@dataclass(frozen=True)
class Quasimode:
    eps: float
    d: int
    V: Potential
    M: float = math.inf  # radius in y outside which the residual is not cancelled

    @property
    def N(self) -> float:
        return self.eps ** (-(self.d + 1) / 2)

    def y(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = x.copy()
        y[..., 0] = self.eps * x[..., 0]
        y[..., 1:] = math.sqrt(self.eps) * x[..., 1:]
        return y

    def x(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        x = y.copy()
        x[..., 0] = y[..., 0] / self.eps
        x[..., 1:] = y[..., 1:] / math.sqrt(self.eps)
        return x

    def psi(self, x):
        x = np.asarray(x, dtype=float)
        y = self.y(x)
        return self.N**-0.5 * np.exp(1j * x[..., 0] - 0.5 * np.sum(y * y, axis=-1))

    def free_multiplier(self, y):
        """(-Laplace - 1 - i eps) psi / psi as a function of y."""
        first, second = quasimode_multipliers(np.asarray(y, float), self.d)
        return self.eps * first + self.eps**2 * second

    def g_multiplier(self, y):
        """g / psi with g = (-Laplace - 1 - i eps + V) psi."""
        return self.free_multiplier(y) + self.V(self.x(y))

    @property
    def psi_norm2_sq(self) -> float:
        return y_integral(lambda y: np.ones(len(y)), self.d)

    @property
    def g_norm2(self) -> float:
        if not isinstance(self.V, TruncatedQuasimodePotential):
            return math.sqrt(y_integral(lambda y: np.abs(self.g_multiplier(y)) ** 2, self.d))
        # inside |y| <= M the residual is cancelled exactly
        tail = y_integral(lambda y: np.abs(self.free_multiplier(y)) ** 2, self.d, r_lo=self.M)
        return math.sqrt(tail)

    @property
    def Vhalf_psi_norm2(self) -> float:
        breaks = (self.M,) if np.isfinite(self.M) else ()
        return math.sqrt(y_integral(lambda y: np.abs(self.V(self.x(y))), self.d, breaks=breaks))


def y_integral(func, d, r_lo=0.0, r_hi=_Y_CUTOFF, breaks=(), n_r=96, n_ang=12) -> float:
    """Integral of func(y) exp(-|y|^2) over r_lo <= |y| <= r_hi."""
    if not np.isfinite(r_lo) or r_lo >= r_hi:
        return 0.0
    edges = sorted({r_lo, r_hi, *[b for b in breaks if r_lo < b < r_hi]})
    dirs, wa = _angular_rule(d, n_ang)
    t, wt = np.polynomial.legendre.leggauss(n_r)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        r = (b - a) / 2 * t + (a + b) / 2
        wr = (b - a) / 2 * wt * r ** (d - 1) * np.exp(-r * r)
        pts = r[:, None, None] * dirs[None, :, :]
        vals = np.asarray(func(pts.reshape(-1, d))).reshape(len(r), -1)
        total += float(np.real(wr @ vals @ wa))
    return total


def gaussian_quasimode(eps, d=3, chi="gaussian") -> Quasimode:
    """Quasimode with V = eps exp(-|y|^2 / 2)."""
    if not (0 < eps <= 0.5):
        raise RangeError("eps must lie in (0, 0.5]")
    return Quasimode(eps, d, GaussianQuasimodePotential(eps, d, chi))


def residual_analytic(qm: Quasimode, x):
    """(-Laplace - 1 - i eps) psi at x."""
    x = np.asarray(x, dtype=float)
    return qm.free_multiplier(qm.y(x)) * qm.psi(x)


def stencil_residual_error(qm: Quasimode, h, half_extent=None) -> float:
    """Max deviation of the finite-difference (-Laplace - 1 - i eps) psi from the exact residual.

    Uses the standard (2d+1)-point Laplacian on a box covering a few widths
    of the quasimode in each direction.
    """
    d, eps = qm.d, qm.eps
    if half_extent is None:
        half_extent = [3 / eps] + [3 / math.sqrt(eps)] * (d - 1)
    axes = [np.arange(-L, L + h / 2, h) for L in half_extent]
    X = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    psi = qm.psi(X)
    lap = -2 * d * psi
    for ax in range(d):
        lap = lap + np.roll(psi, 1, axis=ax) + np.roll(psi, -1, axis=ax)
    lap = lap / h**2
    inner = tuple(slice(1, -1) for _ in range(d))
    fd = (-lap - (1 + 1j * eps) * psi)[inner]
    exact = residual_analytic(qm, X[inner])
    return float(np.max(np.abs(fd - exact)))


def quasimode_norms(qm: Quasimode, q: float):
    """(||g||_2, ||V||_q, ||V^{1/2} psi||_2)."""
    if q <= (qm.d + 1) / 2:
        raise RangeError(f"q must exceed {(qm.d + 1) / 2}")
    return qm.g_norm2, qm.V.lq_norm(q), qm.Vhalf_psi_norm2


def check_proposition_condition(qm: Quasimode, q: float) -> float:
    """eps^{(d+1)/(4q) - 1} ||V||_q^{1/2} ||g||_2 / ||V^{1/2} psi||_2.

    Zero when the residual vanishes, whatever the norm of V.
    """
    g2, Vq, Vpsi2 = quasimode_norms(qm, q)
    if g2 == 0:
        return 0.0
    return qm.eps ** ((qm.d + 1) / (4 * q) - 1) * math.sqrt(Vq) * g2 / Vpsi2


def quasimode_bound_lhs(eps, d, q) -> float:
    """eps^{1 - (d+1)/(2q)}, the size forced on ||V||_q by the imaginary part eps."""
    return eps ** (1 - (d + 1) / (2 * q))


def truncation_delta(q, d) -> float:
    """delta with q = (d+1) / (2 (1 - delta))."""
    if q <= (d + 1) / 2:
        raise RangeError(f"q must exceed {(d + 1) / 2}")
    return 1 - (d + 1) / (2 * q)


def truncation_radius(eps, q, d) -> float:
    """M = eps^{-delta / (2 (2 + d/q))}."""
    return eps ** (-truncation_delta(q, d) / (2 * (2 + d / q)))


def truncated_quasimode(eps, q, d=3, M=None) -> Quasimode:
    """Quasimode whose potential cancels the residual on |y| <= M.

    The remaining residual lives where exp(-|y|^2 / 2) is small, so
    ||g||_2 is of order eps exp(-M^2 / 2) up to powers of M.
    """
    M = truncation_radius(eps, q, d) if M is None else M
    return Quasimode(eps, d, TruncatedQuasimodePotential(eps, M, d), M=M)
