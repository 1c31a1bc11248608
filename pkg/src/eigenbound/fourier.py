"""Free resolvent on a periodic box as a Fourier multiplier.

A periodic box [-L, L)^d with n points per axis stands in for R^d.  The
resolvent near the positive axis is applied as the multiplier
1 / (|xi|^2 - lam^2 - i eps lam) on the lattice xi in (pi / L) Z^d, and its
L^2 -> L^{p_c} norm is probed from below with Knapp-type wave packets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import fft

from .errors import DomainError, ResolutionError, ResonanceError
from .potentials import GridSpec
from .sweep import SlopeFit, fit_slope


def critical_exponent(d: int) -> float:
    """p_c = 2 (d+1) / (d-1)."""
    if d < 2:
        raise DomainError("critical exponent needs d >= 2")
    return 2 * (d + 1) / (d - 1)


def periodic_axes(grid: GridSpec):
    """Nodes -L + j * 2L/n, j = 0..n-1, per axis."""
    return [-L + (2 * L / n) * np.arange(n) for L, n in zip(grid.half_extent, grid.points)]


def periodic_spacing(grid: GridSpec) -> np.ndarray:
    return np.array([2 * L / n for L, n in zip(grid.half_extent, grid.points)])


def frequencies(grid: GridSpec):
    return [2 * np.pi * fft.fftfreq(n, d=h) for n, h in zip(grid.points, periodic_spacing(grid))]


def nyquist(grid: GridSpec) -> float:
    return float(np.min(np.pi / periodic_spacing(grid)))


@dataclass
class PeriodicField:
    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex).reshape(self.grid.points)

    @classmethod
    def from_function(cls, func, grid: GridSpec) -> "PeriodicField":
        mesh = np.meshgrid(*periodic_axes(grid), indexing="ij")
        return cls(grid, func(*mesh))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(periodic_spacing(self.grid)))


@dataclass(frozen=True)
class ResolventQuery:
    lam: float
    eps: float

    def __post_init__(self):
        if self.lam <= 0 or self.eps < 0:
            raise DomainError("need lam > 0 and eps >= 0")

    @property
    def z(self) -> complex:
        return (self.lam + 1j * self.eps) ** 2

    @property
    def shift(self) -> complex:
        """lam^2 + i eps lam, the spectral parameter in the multiplier."""
        return self.lam**2 + 1j * self.eps * self.lam

    @property
    def in_lemma_range(self) -> bool:
        return 1 / self.lam <= self.eps <= 1


def _xi_squared(grid: GridSpec) -> np.ndarray:
    ks = np.meshgrid(*frequencies(grid), indexing="ij", sparse=True)
    return sum(k * k for k in ks)


def symbol(grid: GridSpec, rq: ResolventQuery) -> np.ndarray:
    """|xi|^2 - lam^2 - i eps lam on the frequency lattice."""
    return _xi_squared(grid) - rq.shift


def apply_free_resolvent(f: PeriodicField, rq: ResolventQuery) -> PeriodicField:
    if nyquist(f.grid) < 4 * rq.lam * (1 - 1e-12):
        raise ResolutionError(f"Nyquist frequency {nyquist(f.grid):.4g} below 4 lam = {4 * rq.lam:.4g}")
    sym = symbol(f.grid, rq)
    if rq.eps == 0 and np.any(sym == 0):
        raise ResonanceError("a lattice frequency sits exactly on the sphere |xi| = lam")
    return PeriodicField(f.grid, fft.ifftn(fft.fftn(f.values) / sym))


def apply_shifted_laplacian(f: PeriodicField, rq: ResolventQuery) -> PeriodicField:
    """(-Laplace - lam^2 - i eps lam) f by spectral differentiation."""
    return PeriodicField(f.grid, fft.ifftn(fft.fftn(f.values) * symbol(f.grid, rq)))


def lp_grid_norm(f: PeriodicField, p: float) -> float:
    """(sum |f|^p h^d)^{1/p}."""
    if p < 1:
        raise DomainError("p must be >= 1")
    a = np.abs(f.values)
    if math.isinf(p):
        return float(a.max())
    return float((np.sum(a**p) * f.cell_volume) ** (1 / p))


def stein_tomas_grid(lam, d=3, n=128) -> GridSpec:
    """Periodic grid with Nyquist frequency exactly 4 lam."""
    L = math.pi * n / (8 * lam)
    return GridSpec(d, L, n)


def knapp_packet(grid: GridSpec, lam, eps, a=1.0, b=1.0) -> PeriodicField:
    """e^{i lam x_1} exp(-(a eps x_1)^2 / 2 - b eps lam |x'|^2 / 2).

    In frequency this is a cap on the sphere |xi| = lam of angular width
    sqrt(eps / lam) and radial thickness of order eps.
    """
    def func(*x):
        xp2 = sum(c * c for c in x[1:])
        return np.exp(1j * lam * x[0] - (a * eps * x[0]) ** 2 / 2 - b * eps * lam * xp2 / 2)

    return PeriodicField.from_function(func, grid)


def random_field(grid: GridSpec, rng: np.random.Generator) -> PeriodicField:
    shape = grid.points
    return PeriodicField(grid, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


KNAPP_SHAPES = tuple((a, b) for a in (0.5, 1.0, 2.0) for b in (0.5, 1.0, 2.0))


@dataclass(frozen=True)
class ScalingRecord:
    eps: float
    estimate: float
    knapp_best: float
    random_best: float


def resolvent_ratio(f: PeriodicField, rq: ResolventQuery, p: float) -> float:
    u = apply_free_resolvent(f, rq)
    return lp_grid_norm(u, p) / lp_grid_norm(f, 2)


def measure_2pc_scaling(lam, eps_list, d=3, trials=KNAPP_SHAPES, n=128, n_random=1, seed=0):
    """Lower estimates of ||(-Laplace - z)^{-1}||_{2 -> p_c} and their eps-slope.

    For each eps the estimate is the best ratio over the Knapp packets with
    the given (a, b) shapes and ``n_random`` white-noise fields.  Returns
    (SlopeFit, list of ScalingRecord).
    """
    if d not in (2, 3):
        raise DomainError("d must be 2 or 3")
    p = critical_exponent(d)
    grid = stein_tomas_grid(lam, d, n)
    rng = np.random.default_rng(seed)
    records = []
    for eps in eps_list:
        rq = ResolventQuery(lam, eps)
        knapp = max(resolvent_ratio(knapp_packet(grid, lam, eps, a, b), rq, p) for a, b in trials)
        rand = max((resolvent_ratio(random_field(grid, rng), rq, p) for _ in range(n_random)), default=0.0)
        records.append(ScalingRecord(eps, max(knapp, rand), knapp, rand))
    fit: SlopeFit = fit_slope([(r.eps, r.estimate) for r in records])
    return fit, records
