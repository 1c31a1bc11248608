"""Potential families with pointwise evaluation and L^q norms.

Step potentials (constant on a box or a ball) get exact norms and exact
ball-intersection volumes, so every functional built from them reduces to
one-dimensional quadrature.  Smooth potentials fall back on a spherical
product rule around the requested center.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import integrate, interpolate, special

from .errors import DimensionMismatchError, DivergentError, DomainError, RangeError

# ---------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class GridSpec:
    """Tensor grid on [-L_1, L_1] x ... x [-L_d, L_d], endpoints included."""

    d: int
    half_extent: tuple
    points: tuple

    def __post_init__(self):
        he = tuple(float(v) for v in np.broadcast_to(self.half_extent, (self.d,)))
        pts = tuple(int(v) for v in np.broadcast_to(self.points, (self.d,)))
        if any(v <= 0 for v in he):
            raise DomainError("half extents must be positive")
        if any(p < 2 for p in pts):
            raise DomainError("need at least two points per axis")
        object.__setattr__(self, "half_extent", he)
        object.__setattr__(self, "points", pts)

    @property
    def spacing(self) -> np.ndarray:
        return np.array([2 * L / (n - 1) for L, n in zip(self.half_extent, self.points)])

    @property
    def axes(self) -> list:
        return [np.linspace(-L, L, n) for L, n in zip(self.half_extent, self.points)]

    @property
    def size(self) -> int:
        return int(np.prod(self.points))

    def nodes(self) -> np.ndarray:
        """All grid points as an (N, d) array in row-major order."""
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def scaled(self, lam: float) -> "GridSpec":
        return GridSpec(self.d, tuple(lam * L for L in self.half_extent), self.points)


def _as_points(x, d):
    x = np.asarray(x, dtype=float)
    if d == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        x = x[..., None]
    if x.shape[-1] != d:
        raise DimensionMismatchError(f"expected points of dimension {d}, got shape {x.shape}")
    return x


# ---------------------------------------------------------------------------
# geometry of balls, boxes and their intersections


def unit_ball_volume(d: int) -> float:
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


def sphere_area(d: int) -> float:
    """Surface area of the unit sphere in R^d."""
    return 2 * math.pi ** (d / 2) / math.gamma(d / 2)


def _interval_overlap(a0, a1, b0, b1):
    return np.maximum(0.0, np.minimum(a1, b1) - np.maximum(a0, b0))


def _half_chord_primitive(x, r):
    # int_0^x sqrt(r^2 - t^2) dt, with x clipped to [-r, r]
    x = np.clip(x, -r, r)
    return 0.5 * (x * np.sqrt(np.maximum(r * r - x * x, 0.0)) + r * r * np.arcsin(x / r))


def _disc_strip(a, b, Y, r):
    """Area of {x^2 + y^2 <= r^2, a <= x <= b, y <= Y}."""
    if r <= 0 or b <= a:
        return 0.0
    full = _half_chord_primitive(b, r) - _half_chord_primitive(a, r)
    if Y >= r:
        return 2 * full
    if Y <= -r:
        return 0.0
    xs = math.sqrt(r * r - Y * Y)
    lo, hi = max(a, -xs), min(b, xs)
    inner_len = max(0.0, hi - lo)
    inner = (_half_chord_primitive(hi, r) - _half_chord_primitive(lo, r)) if hi > lo else 0.0
    if Y >= 0:
        return full + Y * inner_len + (full - inner)
    return inner + Y * inner_len


def disc_rectangle_area(center, r, lo, hi) -> float:
    """Area of the disc B(center, r) intersected with the rectangle [lo, hi]."""
    cx, cy = center
    x0, x1 = lo[0] - cx, hi[0] - cx
    y0, y1 = lo[1] - cy, hi[1] - cy
    return _disc_strip(x0, x1, y1, r) - _disc_strip(x0, x1, y0, r)


def ball_box_volume(center, r, half_widths) -> float:
    """Volume of B(center, r) intersected with the centered box prod [-a_i, a_i]."""
    a = np.asarray(half_widths, dtype=float)
    c = np.asarray(center, dtype=float).reshape(-1)
    d = a.size
    if r <= 0:
        return 0.0
    if d == 1:
        return float(_interval_overlap(c[0] - r, c[0] + r, -a[0], a[0]))
    if d == 2:
        return disc_rectangle_area(c, r, -a, a)
    if d != 3:
        raise DomainError("ball/box volumes implemented for d <= 3")
    lo, hi = max(-a[0], c[0] - r), min(a[0], c[0] + r)
    if hi <= lo:
        return 0.0
    if np.all(np.abs(c) + r <= a):
        return 4 / 3 * math.pi * r**3

    def slice_area(x):
        rho = math.sqrt(max(r * r - (x - c[0]) ** 2, 0.0))
        return disc_rectangle_area(c[1:], rho, -a[1:], a[1:])

    # kinks where the slice disc starts touching an edge or a corner
    breaks = []
    for dy in (a[1] - c[1], a[1] + c[1]):
        for dz in (a[2] - c[2], a[2] + c[2], 0.0):
            for rho in (abs(dy), abs(dz), math.hypot(dy, dz)):
                if rho < r:
                    t = math.sqrt(r * r - rho * rho)
                    breaks += [c[0] - t, c[0] + t]
    pts = sorted({b for b in breaks if lo < b < hi})
    val, _ = integrate.quad(slice_area, lo, hi, points=pts or None, limit=200, epsabs=0, epsrel=1e-11)
    return val


def ball_ball_volume(center1, r1, center2, r2, d: int) -> float:
    """Volume of the intersection of two balls in R^d, d <= 3."""
    D = float(np.linalg.norm(np.asarray(center1, float) - np.asarray(center2, float)))
    if r1 <= 0 or r2 <= 0 or D >= r1 + r2:
        return 0.0
    small = min(r1, r2)
    if D <= abs(r1 - r2):
        return unit_ball_volume(d) * small**d
    if d == 1:
        return float(_interval_overlap(-r1, r1, D - r2, D + r2))
    if d == 2:
        c1 = np.clip((D * D + r1 * r1 - r2 * r2) / (2 * D * r1), -1, 1)
        c2 = np.clip((D * D + r2 * r2 - r1 * r1) / (2 * D * r2), -1, 1)
        k = (-D + r1 + r2) * (D + r1 - r2) * (D - r1 + r2) * (D + r1 + r2)
        return r1 * r1 * math.acos(c1) + r2 * r2 * math.acos(c2) - 0.5 * math.sqrt(max(k, 0.0))
    if d == 3:
        return (
            math.pi
            * (r1 + r2 - D) ** 2
            * (D * D + 2 * D * r2 - 3 * r2 * r2 + 2 * D * r1 + 6 * r1 * r2 - 3 * r1 * r1)
            / (12 * D)
        )
    raise DomainError("ball intersections implemented for d <= 3")


# ---------------------------------------------------------------------------
# spherical product rule for smooth integrands


def _angular_rule(d: int, n: int):
    if d == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if d == 2:
        phi = 2 * np.pi * np.arange(4 * n) / (4 * n)
        return np.stack([np.cos(phi), np.sin(phi)], -1), np.full(phi.size, 2 * np.pi / phi.size)
    # Gauss-Legendre in cos(theta), split at the equator, times trapezoid in phi
    t, wt = np.polynomial.legendre.leggauss(n)
    mu = np.concatenate([(t - 1) / 2, (t + 1) / 2])
    wmu = np.concatenate([wt, wt]) / 2
    phi = 2 * np.pi * np.arange(2 * n) / (2 * n)
    M, P = np.meshgrid(mu, phi, indexing="ij")
    s = np.sqrt(1 - M**2)
    dirs = np.stack([M.ravel(), (s * np.cos(P)).ravel(), (s * np.sin(P)).ravel()], -1)
    w = (wmu[:, None] * np.full(phi.size, 2 * np.pi / phi.size)[None, :]).ravel()
    return dirs, w


def _radial_panels(radius: float, inner: float):
    # one panel on [0, inner], then geometrically growing panels
    edges = [0.0]
    e = min(inner, radius)
    while e < radius:
        edges.append(e)
        e *= 2
    edges.append(radius)
    return list(zip(edges[:-1], edges[1:]))


def spherical_integral(func, center, radius, d, weight=None, inner=1.0, rtol=1e-7, max_level=3):
    """Integral of ``func(x) * weight(|x - center|)`` over B(center, radius).

    ``func`` takes an (M, d) array.  Node counts are doubled until two
    successive levels agree to ``rtol``.
    """
    center = np.asarray(center, dtype=float).reshape(d)
    panels = _radial_panels(radius, inner)
    prev = None
    for level in range(max_level + 1):
        n = 12 * 2**level
        dirs, wa = _angular_rule(d, n // 2 if d > 1 else 1)
        t, wt = np.polynomial.legendre.leggauss(n)
        total = 0.0
        for a, b in panels:
            r = (b - a) / 2 * t + (a + b) / 2
            wr = (b - a) / 2 * wt * r ** (d - 1)
            if weight is not None:
                wr = wr * weight(r)
            for i in range(0, n, 4):
                pts = center + r[i : i + 4, None, None] * dirs[None, :, :]
                vals = func(pts.reshape(-1, d)).reshape(-1, dirs.shape[0])
                total += float(np.real(wr[i : i + 4] @ vals @ wa))
        if prev is not None and abs(total - prev) <= rtol * abs(total):
            return total
        prev = total
    return prev


# ---------------------------------------------------------------------------
# potentials


class Potential:
    """Base class.  Subclasses provide ``__call__`` and ``abs_power_integral``."""

    d: int
    kind = "potential"
    # True when |V| is symmetric and nonincreasing in each coordinate about
    # the origin; translation functionals are then maximized at y = 0
    centered_unimodal = False
    # True for potentials with constant modulus on a box or ball
    is_step = False

    def __call__(self, x):
        raise NotImplementedError

    def support_halfwidths(self):
        """Half widths of a centered box containing the support, or None."""
        return None

    def abs_power_integral(self, q: float) -> float:
        raise NotImplementedError

    def lq_norm(self, q: float) -> float:
        if q < 1:
            raise RangeError("q must be >= 1")
        return self.abs_power_integral(q) ** (1 / q)

    def sup_abs(self) -> float:
        raise NotImplementedError

    def rescaled(self, lam: float, factor: complex = 1.0) -> "Potential":
        """The potential x -> factor * V(x / lam)."""
        return Transformed(self, lam, factor)

    def ball_power_integral(self, q, center, radius) -> float:
        """int over B(center, radius) of |V|^q."""
        return spherical_integral(lambda x: np.abs(self(x)) ** q, center, radius, self.d,
                                  inner=min(radius, self._length_scale()))

    def weighted_power_integral(self, q, center, s) -> float:
        """int |V(x)|^q exp(-s |x - center|) dx."""
        cut = self._exp_cutoff(q, s)
        return spherical_integral(lambda x: np.abs(self(x)) ** q, center, cut, self.d,
                                  weight=lambda r: np.exp(-s * r), inner=min(cut, self._length_scale()))

    def _length_scale(self) -> float:
        hw = self.support_halfwidths()
        return float(np.min(hw)) / 4 if hw is not None else 1.0

    def _exp_cutoff(self, q, s) -> float:
        hw = self.support_halfwidths()
        if hw is not None:
            return float(np.linalg.norm(hw)) * 2
        if s <= 0:
            raise DivergentError("unbounded support needs s > 0")
        # tail of e^{-s r} r^{d-1} below 1e-9 of its total
        r = 1.0 / s
        total = math.gamma(self.d) / s**self.d
        while special.gammaincc(self.d, s * r) * total > 1e-9 * total:
            r *= 1.5
        return r

    def describe(self) -> str:
        return self.kind


def _step_weighted_integral(volume, vol_total, r_far, s):
    # int_S e^{-s|x-y|} dx = s int_0^rfar e^{-s r} |B(y,r) cap S| dr + e^{-s rfar} |S|
    if s == 0:
        return vol_total
    val, _ = integrate.quad(lambda r: math.exp(-s * r) * volume(r), 0, r_far,
                            limit=200, epsabs=0, epsrel=1e-10)
    return s * val + math.exp(-s * r_far) * vol_total


@dataclass(frozen=True)
class ConstantBox(Potential):
    """alpha times the indicator of the centered box prod [-a_i, a_i]."""

    alpha: complex
    half_widths: tuple
    kind = "constant-box"
    centered_unimodal = True
    is_step = True

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "half_widths", tuple(float(v) for v in np.atleast_1d(self.half_widths)))

    @property
    def d(self) -> int:
        return len(self.half_widths)

    def __call__(self, x):
        x = _as_points(x, self.d)
        inside = np.all(np.abs(x) <= np.asarray(self.half_widths), axis=-1)
        return np.where(inside, self.alpha, 0j)

    def support_halfwidths(self):
        return np.asarray(self.half_widths)

    @property
    def volume(self) -> float:
        return float(np.prod(2 * np.asarray(self.half_widths)))

    def abs_power_integral(self, q):
        return abs(self.alpha) ** q * self.volume

    def sup_abs(self):
        return abs(self.alpha)

    def rescaled(self, lam, factor=1.0):
        return ConstantBox(self.alpha * factor, tuple(lam * a for a in self.half_widths))

    def ball_power_integral(self, q, center, radius):
        return abs(self.alpha) ** q * ball_box_volume(center, radius, self.half_widths)

    def weighted_power_integral(self, q, center, s):
        c = np.asarray(center, float).reshape(self.d)
        far = float(np.linalg.norm(np.abs(c) + np.asarray(self.half_widths)))
        vol = lambda r: ball_box_volume(c, r, self.half_widths)
        return abs(self.alpha) ** q * _step_weighted_integral(vol, self.volume, far, s)


def RectangularWell(alpha, R, d) -> ConstantBox:
    """alpha on [-R, R] x [-sqrt(R), sqrt(R)]^{d-1}."""
    return ConstantBox(alpha, (R,) + (math.sqrt(R),) * (d - 1))


def rectangular_well_norm(alpha, R, d, q) -> float:
    """Closed form |alpha| 2^{d/q} R^{(d+1)/(2q)}."""
    return abs(alpha) * 2 ** (d / q) * R ** ((d + 1) / (2 * q))


class SquareWell1D(ConstantBox):
    """V0 on [-R, R] in one dimension."""

    kind = "square-well-1d"

    def __init__(self, V0, R):
        ConstantBox.__init__(self, V0, (R,))

    @property
    def V0(self) -> complex:
        return self.alpha

    @property
    def R(self) -> float:
        return self.half_widths[0]

    def rescaled(self, lam, factor=1.0):
        return SquareWell1D(self.V0 * factor, lam * self.R)


@dataclass(frozen=True)
class RadialStep3D(Potential):
    """V0 on the ball of radius R in R^3."""

    V0: complex
    R: float
    kind = "radial-step-3d"
    centered_unimodal = True
    is_step = True
    d = 3

    def __post_init__(self):
        object.__setattr__(self, "V0", complex(self.V0))
        object.__setattr__(self, "R", float(self.R))

    def __call__(self, x):
        x = _as_points(x, 3)
        return np.where(np.sum(x * x, axis=-1) <= self.R**2, self.V0, 0j)

    def support_halfwidths(self):
        return np.full(3, self.R)

    @property
    def volume(self) -> float:
        return 4 / 3 * math.pi * self.R**3

    def abs_power_integral(self, q):
        return abs(self.V0) ** q * self.volume

    def sup_abs(self):
        return abs(self.V0)

    def rescaled(self, lam, factor=1.0):
        return RadialStep3D(self.V0 * factor, lam * self.R)

    def ball_power_integral(self, q, center, radius):
        return abs(self.V0) ** q * ball_ball_volume(center, radius, np.zeros(3), self.R, 3)

    def weighted_power_integral(self, q, center, s):
        c = np.asarray(center, float).reshape(3)
        a = abs(self.V0) ** q
        if not np.any(c):
            # 4 pi int_0^R r^2 e^{-s r} dr
            if s == 0:
                return a * self.volume
            return a * 4 * math.pi * 2 / s**3 * special.gammainc(3, s * self.R)
        far = float(np.linalg.norm(c)) + self.R
        vol = lambda r: ball_ball_volume(c, r, np.zeros(3), self.R, 3)
        return a * _step_weighted_integral(vol, self.volume, far, s)


@dataclass(frozen=True)
class IonescuJerison(Potential):
    """(n + |x_1| + |x'|^2)^{-1}, positive and at most 1/n everywhere."""

    n: float
    d: int = 3
    kind = "ionescu-jerison"
    centered_unimodal = True

    def __call__(self, x):
        x = _as_points(x, self.d)
        rest = np.sum(x[..., 1:] ** 2, axis=-1)
        return 1.0 / (self.n + np.abs(x[..., 0]) + rest) + 0j

    def sup_abs(self):
        return 1.0 / self.n

    def abs_power_integral(self, q):
        d, n = self.d, self.n
        if q <= (d + 1) / 2:
            raise DivergentError(f"not in L^{q}: need q > {(d + 1) / 2}")
        # integrate out x' (a Beta integral), then x_1
        if d == 1:
            return 2 * n ** (1 - q) / (q - 1)
        m = d - 1
        transverse = sphere_area(m) * 0.5 * special.beta(m / 2, q - m / 2)
        return transverse * 2 * n ** ((d + 1) / 2 - q) / (q - (d + 1) / 2)

    def _length_scale(self):
        return math.sqrt(self.n)

    def ball_power_integral(self, q, center, radius):
        c = np.asarray(center, float).reshape(self.d)
        if self.d != 3 or np.any(c):
            return super().ball_power_integral(q, center, radius)
        n = self.n

        def inner(x1):
            # int over the disc |x'| <= sqrt(R^2 - x1^2) of (a + |x'|^2)^{-q}
            a = n + abs(x1)
            T = radius * radius - x1 * x1
            if q == 1:
                return math.pi * math.log1p(T / a)
            return math.pi * (a ** (1 - q) - (a + T) ** (1 - q)) / (q - 1)

        pts = [0.0] if radius > 0 else None
        val, _ = integrate.quad(inner, -radius, radius, points=pts, limit=400, epsabs=0, epsrel=1e-10)
        return val


def ij_local_norm_model(n, R, d=3) -> float:
    """Model curve (1/n) max(1, ln(R/n)) for the local norm of the IJ potential."""
    return (1.0 / n) * max(1.0, math.log(R / n))


def ij_local_norm_leading(n, R, d=3) -> float:
    """Leading large-R behaviour of the L^{(d+1)/2}(B(0,R)) norm of the IJ potential.

    The norm is dilation invariant at this exponent, so it depends on R/n
    only:  (|S^{d-2}| * 2 ln(1 + R/n) / (d-1))^{2/(d+1)}.
    """
    q = (d + 1) / 2
    return (sphere_area(d - 1) * 2 * math.log1p(R / n) / (d - 1)) ** (1 / q)


@dataclass(frozen=True)
class Sampled(Potential):
    """Grid samples with multilinear interpolation, zero outside the grid."""

    grid: GridSpec
    values: np.ndarray = field(compare=False)
    kind = "sampled"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex).reshape(self.grid.points)
        object.__setattr__(self, "values", v)

    @property
    def d(self) -> int:
        return self.grid.d

    @cached_property
    def _interp(self):
        return interpolate.RegularGridInterpolator(self.grid.axes, self.values, method="linear",
                                                   bounds_error=False, fill_value=0.0)

    def __call__(self, x):
        x = _as_points(x, self.d)
        shape = x.shape[:-1]
        return self._interp(x.reshape(-1, self.d)).reshape(shape)

    def support_halfwidths(self):
        return np.asarray(self.grid.half_extent)

    def trapezoid_weights(self) -> np.ndarray:
        w = np.ones(self.grid.points)
        for ax, (n, h) in enumerate(zip(self.grid.points, self.grid.spacing)):
            wa = np.full(n, h)
            wa[[0, -1]] = h / 2
            shape = [1] * self.d
            shape[ax] = n
            w = w * wa.reshape(shape)
        return w

    def abs_power_integral(self, q):
        return float(np.sum(self.trapezoid_weights() * np.abs(self.values) ** q))

    def sup_abs(self):
        return float(np.max(np.abs(self.values)))

    def weighted_power_integral(self, q, center, s):
        nodes = self.grid.nodes()
        r = np.linalg.norm(nodes - np.asarray(center, float).reshape(self.d), axis=-1)
        w = self.trapezoid_weights().ravel()
        return float(np.sum(w * np.abs(self.values.ravel()) ** q * np.exp(-s * r)))

    def to_text(self) -> str:
        g = self.grid
        head = " ".join([str(g.d)] + [str(n) for n in g.points] + [repr(float(L)) for L in g.half_extent])
        body = "\n".join(f"{float(v.real)!r} {float(v.imag)!r}" for v in self.values.ravel())
        return head + "\n" + body + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Sampled":
        lines = text.strip().splitlines()
        head = lines[0].split()
        d = int(head[0])
        points = tuple(int(v) for v in head[1 : 1 + d])
        half = tuple(float(v) for v in head[1 + d : 1 + 2 * d])
        data = np.array([[float(t) for t in ln.split()] for ln in lines[1:]])
        if data.shape != (int(np.prod(points)), 2):
            raise DomainError("sample count does not match the header")
        return cls(GridSpec(d, half, points), data[:, 0] + 1j * data[:, 1])

    @classmethod
    def from_function(cls, func, grid: GridSpec) -> "Sampled":
        return cls(grid, np.asarray(func(grid.nodes()), dtype=complex))


def default_perturbation(d=3, half_extent=6.0, points=49) -> Sampled:
    """Gaussian e^{-|x|^2/2} sampled on a cube."""
    grid = GridSpec(d, (half_extent,) * d, (points,) * d)
    return Sampled.from_function(lambda x: np.exp(-0.5 * np.sum(x * x, axis=-1)), grid)


@dataclass(frozen=True)
class Perturbed(Potential):
    """base + kappa_c * W with W a sampled potential."""

    base: Potential
    kappa_c: complex
    W: Sampled
    kind = "perturbed"

    @property
    def d(self) -> int:
        return self.base.d

    def __call__(self, x):
        return self.base(x) + self.kappa_c * self.W(x)

    def sup_abs(self):
        return self.base.sup_abs() + abs(self.kappa_c) * self.W.sup_abs()

    def abs_power_integral(self, q):
        # exact base contribution outside the W grid, trapezoid sums inside
        nodes = self.W.grid.nodes()
        w = self.W.trapezoid_weights().ravel()
        b = self.base(nodes)
        inside_base = float(np.sum(w * np.abs(b) ** q))
        inside_sum = float(np.sum(w * np.abs(b + self.kappa_c * self.W.values.ravel()) ** q))
        return self.base.abs_power_integral(q) - inside_base + inside_sum


def perturbed_ij(n, kappa_c, W: Sampled | None = None, d=3) -> Perturbed:
    if abs(kappa_c) >= 1:
        raise RangeError("coupling must satisfy |kappa_c| < 1")
    return Perturbed(IonescuJerison(n, d), complex(kappa_c), W if W is not None else default_perturbation(d))


def _quasimode_coords(x, eps, d):
    x = _as_points(x, d)
    y = np.empty_like(x)
    y[..., 0] = eps * x[..., 0]
    y[..., 1:] = math.sqrt(eps) * x[..., 1:]
    return y


@dataclass(frozen=True)
class GaussianQuasimodePotential(Potential):
    """eps * exp(-|y|^2 / 2) with y = (eps x_1, sqrt(eps) x')."""

    eps: float
    d: int = 3
    chi: str = "gaussian"
    kind = "gaussian-quasimode"
    centered_unimodal = True

    def __post_init__(self):
        if self.chi != "gaussian":
            raise DomainError(f"unknown envelope {self.chi!r}")

    def __call__(self, x):
        y = _quasimode_coords(x, self.eps, self.d)
        return self.eps * np.exp(-0.5 * np.sum(y * y, axis=-1)) + 0j

    @property
    def jacobian(self) -> float:
        return self.eps ** (-(self.d + 1) / 2)

    def sup_abs(self):
        return self.eps

    def abs_power_integral(self, q):
        return self.eps**q * self.jacobian * (2 * math.pi / q) ** (self.d / 2)

    def _length_scale(self):
        return 1.0 / self.eps


def quasimode_multipliers(y, d):
    """First- and second-order residual multipliers of the Gaussian quasimode."""
    yp2 = np.sum(y[..., 1:] ** 2, axis=-1)
    first = d - 1 - yp2 + 2j * y[..., 0] - 1j
    second = 1 - y[..., 0] ** 2
    return first, second


@dataclass(frozen=True)
class TruncatedQuasimodePotential(Potential):
    """-(eps A(y) + eps^2 B(y)) on the ellipsoid |y| <= M, zero outside.

    A and B are the residual multipliers of the Gaussian quasimode, so the
    quasimode solves the eigenvalue equation exactly inside the ellipsoid.
    ``M = inf`` gives the untruncated multiplier.
    """

    eps: float
    M: float
    d: int = 3
    kind = "truncated-quasimode"
    centered_unimodal = False

    def __call__(self, x):
        y = _quasimode_coords(x, self.eps, self.d)
        first, second = quasimode_multipliers(y, self.d)
        inside = np.sum(y * y, axis=-1) <= self.M**2
        return np.where(inside, -(self.eps * first + self.eps**2 * second), 0j)

    def support_halfwidths(self):
        if not np.isfinite(self.M):
            return None
        return np.array([self.M / self.eps] + [self.M / math.sqrt(self.eps)] * (self.d - 1))

    def sup_abs(self):
        if not np.isfinite(self.M):
            return math.inf
        best = 0.0
        dirs, _ = _angular_rule(self.d, 32)
        for rr in np.linspace(0, self.M, 65):
            first, second = quasimode_multipliers(rr * dirs, self.d)
            best = max(best, float(np.max(np.abs(self.eps * first + self.eps**2 * second))))
        return best

    def abs_power_integral(self, q):
        if not np.isfinite(self.M):
            return math.inf
        # change of variables to y; the ellipsoid becomes the ball |y| <= M
        def f(y):
            first, second = quasimode_multipliers(y, self.d)
            return np.abs(self.eps * first + self.eps**2 * second) ** q

        inner = spherical_integral(f, np.zeros(self.d), self.M, self.d, inner=self.M, rtol=1e-10)
        return self.eps ** (-(self.d + 1) / 2) * inner


@dataclass(frozen=True)
class Transformed(Potential):
    """factor * base(x / lam)."""

    base: Potential
    lam: float
    factor: complex = 1.0
    kind = "transformed"

    @property
    def d(self) -> int:
        return self.base.d

    @property
    def centered_unimodal(self):
        return self.base.centered_unimodal

    def __call__(self, x):
        x = _as_points(x, self.d)
        return self.factor * self.base(x / self.lam)

    def support_halfwidths(self):
        hw = self.base.support_halfwidths()
        return None if hw is None else self.lam * hw

    def sup_abs(self):
        return abs(self.factor) * self.base.sup_abs()

    def abs_power_integral(self, q):
        return abs(self.factor) ** q * self.lam**self.d * self.base.abs_power_integral(q)

    def ball_power_integral(self, q, center, radius):
        c = np.asarray(center, float) / self.lam
        return abs(self.factor) ** q * self.lam**self.d * self.base.ball_power_integral(q, c, radius / self.lam)

    def weighted_power_integral(self, q, center, s):
        c = np.asarray(center, float) / self.lam
        return abs(self.factor) ** q * self.lam**self.d * self.base.weighted_power_integral(q, c, s * self.lam)


# ---------------------------------------------------------------------------
# functional interface


def eval_potential(V: Potential, x):
    return V(x)


def lq_norm(V: Potential, q: float) -> float:
    return V.lq_norm(q)


def local_ball_norm(V: Potential, q: float, center, radius: float) -> float:
    """(int_{B(center, radius)} |V|^q)^{1/q}."""
    if radius <= 0:
        raise DomainError("radius must be positive")
    center = np.asarray(center, dtype=float).reshape(V.d)
    return max(V.ball_power_integral(q, center, radius), 0.0) ** (1 / q)
