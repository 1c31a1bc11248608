"""Square-root branch, the order-zero Hankel function and free resolvent kernels.

The free resolvent (-Laplace - E)^{-1} on R^d has a radial kernel that is
elementary in one and three dimensions and a Hankel function in two.  All
kernels use the wavenumber ``kappa`` with ``kappa**2 == E`` and
``Im kappa >= 0``, so they decay like ``exp(-Im kappa * r)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from .errors import BranchError, DomainError, RangeError, UnsupportedError

EULER_GAMMA = 0.57721566490153286061

# crossover between the power series and the large-argument representation
SERIES_RADIUS = 10.0
# the series loses about exp(|w| + Im w) / 2 in relative accuracy, so in the
# upper half-plane it is only trusted while |w| + Im w stays below this
SERIES_GROWTH_LIMIT = 10.0

_SERIES_TERMS = 64
_LAGUERRE_NODES = 64


def sqrt_upper(E):
    """Square root with nonnegative imaginary part.

    On [0, inf) this is the nonnegative real root.  Elsewhere the result is
    continuous and lies strictly in the upper half-plane.
    """
    E = np.asarray(E, dtype=complex)
    k = np.sqrt(E)
    k = np.where(k.imag < 0, -k, k)
    # sqrt(x - 0j) for x > 0 carries a negative zero imaginary part
    k = np.where((E.imag == 0) & (E.real >= 0), np.sqrt(np.abs(E.real)) + 0j, k)
    return k[()] if k.ndim == 0 else k


@dataclass(frozen=True)
class SpectralPoint:
    """Spectral parameter ``E`` together with its upper square root."""

    E: complex
    kappa: complex
    d: int

    @classmethod
    def from_energy(cls, E, d: int) -> "SpectralPoint":
        if d not in (1, 2, 3):
            raise UnsupportedError(f"dimension {d} not supported")
        E = complex(E)
        return cls(E=E, kappa=complex(sqrt_upper(E)), d=d)

    @classmethod
    def from_wavenumber(cls, kappa, d: int) -> "SpectralPoint":
        kappa = complex(kappa)
        if kappa.imag < 0:
            raise BranchError("wavenumber must have Im kappa >= 0")
        return cls(E=kappa * kappa, kappa=kappa, d=d)

    @property
    def on_spectrum(self) -> bool:
        return self.E.imag == 0 and self.E.real >= 0


def _check_resolvent_point(sp: SpectralPoint) -> None:
    if sp.on_spectrum:
        raise DomainError(f"E = {sp.E} lies on the spectrum [0, inf)")
    if sp.kappa.imag <= 0:
        raise BranchError(f"kappa = {sp.kappa} is not in the upper half-plane")


# ---------------------------------------------------------------------------
# Hankel function of the first kind, order zero


def hankel0_series(w):
    """H0^(1)(w) = J0(w) + i Y0(w) from the ascending power series.

    Uses the principal logarithm, so the branch cut is the negative real
    axis.  Accurate to about 1e-16 * exp(|w| + max(Im w, 0)) relative.
    """
    w = np.asarray(w, dtype=complex)
    if np.any(w == 0):
        raise DomainError("H0 has a logarithmic singularity at w = 0")
    x = -0.25 * w * w
    term = np.ones_like(w)
    j0 = np.ones_like(w)
    tail = np.zeros_like(w)
    harmonic = 0.0
    for k in range(1, _SERIES_TERMS):
        term = term * x / (k * k)
        harmonic += 1.0 / k
        j0 = j0 + term
        tail = tail + harmonic * term
    y0 = (2.0 / np.pi) * ((np.log(0.5 * w) + EULER_GAMMA) * j0 - tail)
    out = j0 + 1j * y0
    return out[()] if out.ndim == 0 else out


@lru_cache(maxsize=None)
def _laguerre_rule():
    nodes, weights = special.roots_genlaguerre(_LAGUERRE_NODES, -0.5)
    return nodes, weights


def _hankel0_integral(w):
    # H0(w) = sqrt(2/(pi w)) e^{i(w - pi/4)} / sqrt(pi)
    #         * int_0^inf e^{-u} u^{-1/2} (1 + i u / (2 w))^{-1/2} du,
    # valid for -pi/2 <= arg w <= pi.  Below arg w = -pi/4 the singular
    # point u = 2 i w approaches the positive axis, so the ray is rotated.
    nodes, weights = _laguerre_rule()
    phi = np.angle(w)
    theta = np.where(phi < -np.pi / 4, 0.5 * phi + np.pi / 8, 0.0)
    c = np.cos(theta)
    rot = np.exp(1j * theta) / c
    u = nodes[None, :] * rot[:, None]
    f = np.exp(-1j * nodes[None, :] * np.tan(theta)[:, None])
    f = f * (1 + 1j * u / (2 * w[:, None])) ** -0.5
    integral = np.sqrt(rot) * (f @ weights)
    return np.sqrt(2 / (np.pi * w)) * np.exp(1j * (w - np.pi / 4)) * integral / np.sqrt(np.pi)


def hankel0_asymptotic(w):
    """H0^(1)(w) from its large-argument integral representation.

    The Laplace-type integral behind the asymptotic expansion is summed by
    generalized Gauss-Laguerre quadrature instead of truncating the
    divergent series.  For arg w < -pi/2 the connection formula
    H0(w) = 2 H0(-w) + conj(H0(conj(-w))) maps the point back into the
    sector where the integral converges.  Intended for |w| >= 6.
    """
    w = np.asarray(w, dtype=complex)
    if np.any(w == 0):
        raise DomainError("H0 has a logarithmic singularity at w = 0")
    flat = np.atleast_1d(w).ravel()
    out = np.empty_like(flat)
    low = np.angle(flat) < -np.pi / 2
    if np.any(~low):
        out[~low] = _hankel0_integral(flat[~low])
    if np.any(low):
        m = -flat[low]
        out[low] = 2 * _hankel0_integral(m) + np.conj(_hankel0_integral(np.conj(m)))
    out = out.reshape(w.shape)
    return out[()] if out.ndim == 0 else out


def hankel0_h1(w):
    """Hankel function of the first kind of order zero, principal branch.

    The power series is used for |w| <= 10 unless the argument is far
    enough into the upper half-plane that cancellation between J0 and
    i*Y0 would spoil it; everything else goes through
    :func:`hankel0_asymptotic`.
    """
    w = np.asarray(w, dtype=complex)
    if np.any(w == 0):
        raise DomainError("H0 has a logarithmic singularity at w = 0")
    flat = np.atleast_1d(w).ravel()
    a = np.abs(flat)
    use_series = (a <= SERIES_RADIUS) & (a + np.maximum(flat.imag, 0.0) <= SERIES_GROWTH_LIMIT)
    out = np.empty_like(flat)
    if np.any(use_series):
        out[use_series] = hankel0_series(flat[use_series])
    if np.any(~use_series):
        out[~use_series] = hankel0_asymptotic(flat[~use_series])
    out = out.reshape(w.shape)
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# free resolvent kernels


def kernel_from_kappa(kappa: complex, d: int, r):
    """Free resolvent kernel as a function of distance, no validation."""
    r = np.asarray(r, dtype=float)
    if d == 1:
        return 1j * np.exp(1j * kappa * r) / (2 * kappa)
    if d == 3:
        return np.exp(1j * kappa * r) / (4 * np.pi * r)
    if d == 2:
        return 0.25j * hankel0_h1(kappa * r)
    raise UnsupportedError(f"dimension {d} not supported")


def free_resolvent_kernel(sp: SpectralPoint, r):
    """Kernel of (-Laplace - E)^{-1} at distance ``r``.

    d = 1: i e^{i kappa r} / (2 kappa)
    d = 2: (i/4) H0^(1)(kappa r)
    d = 3: e^{i kappa r} / (4 pi r)
    """
    _check_resolvent_point(sp)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("distance must be nonnegative")
    if sp.d >= 2 and np.any(r == 0):
        raise DomainError(f"kernel is singular at r = 0 in d = {sp.d}")
    return kernel_from_kappa(sp.kappa, sp.d, r)


def fractional_kernel_d3(sp: SpectralPoint, zeta, r):
    """Kernel of (-Laplace - E)^{-zeta} in three dimensions.

    Only the powers with closed or semi-closed forms are supported:
    zeta = 1 (the free kernel), zeta = 2 (its E-derivative) and
    zeta = 3/2, which is K0(-i kappa r) / (2 pi^2) = (i / 4 pi) H0(kappa r).
    """
    if sp.d != 3:
        raise UnsupportedError("fractional kernels are implemented for d = 3 only")
    _check_resolvent_point(sp)
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("distance must be positive")
    kappa = sp.kappa
    if zeta == 1:
        return np.exp(1j * kappa * r) / (4 * np.pi * r)
    if zeta == 2:
        return 1j * np.exp(1j * kappa * r) / (8 * np.pi * kappa)
    if zeta == 1.5:
        return 0.25j / np.pi * hankel0_h1(kappa * r)
    raise UnsupportedError(f"zeta = {zeta} not supported (use 1, 3/2 or 2)")


def pointwise_bound_rhs(sp: SpectralPoint, zeta, r, C):
    """Envelope C e^{-Im kappa r} r^{zeta - (d+1)/2} for |E| = 1."""
    if abs(abs(sp.E) - 1) > 1e-12:
        raise DomainError(f"bound is stated for |E| = 1, got |E| = {abs(sp.E)}")
    d = sp.d
    if not (min(1.0, d / 2) <= zeta <= (d + 1) / 2):
        raise RangeError(f"zeta = {zeta} outside [{min(1.0, d / 2)}, {(d + 1) / 2}]")
    r = np.asarray(r, dtype=float)
    return C * np.exp(-sp.kappa.imag * r) * r ** (zeta - (d + 1) / 2)


def apply_resolvent_radial(sp: SpectralPoint, f, r, nodes=200, cutoff=None):
    """(-Laplace - E)^{-1} f at radius r for a radial f, by quadrature of the kernel.

    d = 1 (f even): u(x) = int K(|x - y|) f(|y|) dy.
    d = 3: after the angular integration,
        u(r) = (2 pi / r) int_0^inf s f(s) int_{|r-s|}^{r+s} K(rho) rho drho ds,
    where K(rho) rho is bounded, so both integrals are smooth apart from the
    kinks at s = r and at the origin, which are used as panel breaks.  ``f`` must decay fast
    enough that it is negligible beyond ``cutoff``.
    """
    _check_resolvent_point(sp)
    if sp.d not in (1, 3):
        raise UnsupportedError("radial quadrature is implemented for d = 1 and d = 3")
    r = np.atleast_1d(np.asarray(r, dtype=float))
    cutoff = float(np.max(r)) + 12.0 if cutoff is None else cutoff
    t, w = np.polynomial.legendre.leggauss(nodes)
    kappa = sp.kappa
    out = np.empty(r.shape, dtype=complex)
    for i, ri in enumerate(r):
        total = 0j
        if sp.d == 1:
            # y on [-cutoff, cutoff], broken at y = x and at the origin
            edges = sorted({-cutoff, 0.0, ri, cutoff})
            for a, b in zip(edges[:-1], edges[1:]):
                y = (b - a) / 2 * t + (a + b) / 2
                total += (b - a) / 2 * np.sum(w * kernel_from_kappa(kappa, 1, np.abs(ri - y)) * f(np.abs(y)))
        else:
            for a, b in ((0.0, ri), (ri, cutoff)):
                s = (b - a) / 2 * t + (a + b) / 2
                lo, hi = np.abs(ri - s), ri + s
                rho = (hi - lo)[:, None] / 2 * t[None, :] + (hi + lo)[:, None] / 2
                inner = (hi - lo) / 2 * ((np.exp(1j * kappa * rho) / (4 * np.pi)) @ w)
                total += (b - a) / 2 * np.sum(w * s * f(s) * inner)
            total *= 2 * np.pi / ri
        out[i] = total
    return out[0] if out.size == 1 else out
