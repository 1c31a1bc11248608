"""Exact complex eigenvalue constructions and finite-difference cross-checks.

Two explicit examples are built here:

* a complex square well V0 on [-R, R] in one dimension with the eigenvalue
  (1 + i eps)^2, found by solving the transcendental matching condition
  i k tan(k R) = 1 + i eps for the interior wavenumber k, and
* a radial step V0 on the ball of radius R in three dimensions with the
  eigenvalue z2^2, where z2 follows in closed form from the interior
  wavenumber z1 = 1/2 + i eps.

Both are validated independently by a second-order finite-difference
eigensolver on a truncated Dirichlet box.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (
    DomainError,
    MultiRootError,
    NoConvergenceError,
    NoRootError,
    PoleError,
    ValidationError,
)
from .potentials import ConstantBox, GridSpec, Potential, RadialStep3D, SquareWell1D

# ---------------------------------------------------------------------------
# argument principle


def winding_number(f, center, radius, n=256, max_points=1 << 16) -> int:
    """Number of zeros minus poles of ``f`` inside the circle.

    The contour is refined until no phase increment between neighbouring
    samples exceeds pi/4.
    """
    while True:
        t = 2 * np.pi * np.arange(n + 1) / n
        vals = f(center + radius * np.exp(1j * t))
        if np.any(vals == 0) or not np.all(np.isfinite(vals)):
            raise DomainError("function vanishes or blows up on the contour")
        dphi = np.angle(vals[1:] / vals[:-1])
        if np.max(np.abs(dphi)) < np.pi / 4 or n >= max_points:
            return int(round(np.sum(dphi) / (2 * np.pi)))
        n *= 2


# ---------------------------------------------------------------------------
# one-dimensional complex square well


@dataclass
class SquareWellSolution1D:
    eps: float
    R: float
    k_in: complex
    V0: complex
    E: complex
    residual: float
    rho: float = 0.5
    C: float = 1.0
    winding: int = 1
    f_root: complex | None = None

    @property
    def potential(self) -> SquareWell1D:
        return SquareWell1D(self.V0, self.R)

    @property
    def z(self) -> complex:
        return 1 + 1j * self.eps

    def record(self) -> dict:
        out = {}
        for k, v in asdict(self).items():
            if isinstance(v, complex):
                out[k + "_re"], out[k + "_im"] = v.real, v.imag
            else:
                out[k] = v
        return out


def mode_function_f(eps, R, omega):
    """i eps + omega (1 - e^{2i(omega-1)R}) / (1 + e^{2i(omega-1)R}).

    A rescaled form of the even matching condition; its zeros near
    omega = -i eps approximate 1 + k for the interior wavenumber k.
    """
    e = np.exp(2j * (np.asarray(omega) - 1) * R)
    den = 1 + e
    if np.any(np.abs(den) < 1e-12):
        raise PoleError("1 + exp(2i(omega-1)R) vanishes")
    return 1j * eps + omega * (1 - e) / den


def square_well_length(eps, rho=0.5, C=1.0) -> float:
    """R with (1 - rho) eps R = C + |ln eps|."""
    return (C - math.log(eps)) / ((1 - rho) * eps)


def _matching(k, z, R):
    # z cos(kR) - i k sin(kR); zero iff i k tan(kR) = z.  Even in k.
    return z * np.cos(k * R) - 1j * k * np.sin(k * R)


def _matching_prime(k, z, R):
    return -z * R * np.sin(k * R) - 1j * np.sin(k * R) - 1j * k * R * np.cos(k * R)


def _log_lambert(a, iters=80):
    # solve t + log t = a on the principal log branch
    t = a - np.log(a) if abs(a) > 1 else complex(a) + 0.5
    for _ in range(iters):
        step = (t + np.log(t) - a) / (1 + 1 / t)
        t -= step
        if abs(step) < 1e-15 * abs(t):
            break
    return t


def _newton(f, df, k, tol=1e-15, maxit=100):
    for _ in range(maxit):
        step = f(k) / df(k)
        k = k - step
        if abs(step) <= tol * abs(k):
            return k, True
    return k, False


def solve_square_well_1d(eps, rho=0.5, C=1.0, n_starts=8) -> SquareWellSolution1D:
    """Complex square well with the eigenvalue (1 + i eps)^2.

    R is fixed by (1 - rho) eps R = C + |ln eps|.  The matching condition
    z cos(kR) = i k sin(kR), z = 1 + i eps, has a comb of roots spaced by
    about pi / R near k = z.  Writing k = z + t / (2 i R) turns it into
    t + log t = log(4 i z R) - 2 i z R + 2 pi i m up to O(1/R) terms, whose
    solutions on neighbouring branches m seed Newton's method.  The root
    with the smallest |V0| is returned, its simplicity is checked with the
    argument principle, and the root of :func:`mode_function_f` is stored
    for comparison.
    """
    if not (0 < eps <= 0.2):
        raise DomainError("eps must lie in (0, 0.2]")
    if not (0 < rho < 1):
        raise DomainError("rho must lie in (0, 1)")
    if not (0 < C < -math.log(eps)):
        raise DomainError("C must lie in (0, |ln eps|)")
    z = 1 + 1j * eps
    R = square_well_length(eps, rho, C)
    f = lambda k: _matching(k, z, R)
    df = lambda k: _matching_prime(k, z, R)

    log_x = np.log(4j * z * R) - 2j * z * R
    m0 = int(round(-log_x.imag / (2 * np.pi)))
    roots = []
    for m in range(m0 - n_starts // 2, m0 + n_starts // 2):
        t = _log_lambert(log_x + 2j * np.pi * m)
        k, ok = _newton(f, df, z + t / (2j * R))
        if ok and np.isfinite(k):
            roots.append(k)
    if not roots:
        raise NoRootError("Newton failed from every seed")
    k = min(roots, key=lambda k: abs(z * z - k * k))
    # the interior wavefunction cos(kx) is even in k; report Im k > 0
    k_in = -k if k.imag < 0 else k
    V0 = z * z - k_in * k_in
    residual = abs(1j * k_in * np.tan(k_in * R) - z)

    radius = math.pi / (4 * R)
    count = winding_number(f, k_in, radius)
    if count != 1:
        raise MultiRootError(f"contour around the root encloses {count} zeros")

    # zero of the rescaled function near -i eps, if Newton finds one
    g = lambda w: mode_function_f(eps, R, w)
    dg = lambda w, h=1e-7: (g(w + h) - g(w - h)) / (2 * h)
    f_root = None
    for seed in (-1j * eps, 1 + k_in):
        w, ok = _newton(g, dg, seed, tol=1e-14)
        if ok and abs(w) < 0.5:
            f_root = complex(w)
            break

    return SquareWellSolution1D(eps=eps, R=R, k_in=complex(k_in), V0=complex(V0), E=z * z,
                                residual=float(residual), rho=rho, C=C, winding=count, f_root=f_root)


# ---------------------------------------------------------------------------
# three-dimensional radial step


@dataclass
class RadialSolution3D:
    eps: float
    delta: float
    C: float
    R: float
    z1: complex
    z2: complex
    V0: complex
    E: complex
    residual: float

    @property
    def potential(self) -> RadialStep3D:
        return RadialStep3D(self.V0, self.R)

    def record(self) -> dict:
        out = {}
        for k, v in asdict(self).items():
            if isinstance(v, complex):
                out[k + "_re"], out[k + "_im"] = v.real, v.imag
            else:
                out[k] = v
        return out


def radial_determinant(z1, z2, R):
    """-i z2 sin(z1 R) + z1 cos(z1 R); zero iff the s-wave matches at R."""
    return -1j * z2 * np.sin(z1 * R) + z1 * np.cos(z1 * R)


def radial_length(eps, delta, rounding="floor") -> float:
    """Ball radius with sin R = -1 near C / (2 eps), C = -ln((1 + delta) eps).

    ``floor`` takes the largest admissible R not exceeding C / (2 eps),
    which keeps exp(-2 eps R) >= (1 + delta) eps; ``nearest`` rounds to the
    closest admissible R.
    """
    C = -math.log((1 + delta) * eps)
    target = C / (2 * eps)
    base = 1.5 * math.pi
    if rounding == "floor":
        m = max(0, math.floor((target - base) / (2 * math.pi)))
    elif rounding == "nearest":
        m = max(0, round((target - base) / (2 * math.pi)))
    else:
        raise DomainError(f"unknown rounding {rounding!r}")
    return base + 2 * math.pi * m


def construct_radial_3d(eps, delta=0.5, rounding="floor", eps_max=0.1) -> RadialSolution3D:
    """Radial step potential on B(0, R) with the eigenvalue z2^2.

    With z1 = 1/2 + i eps inside the ball, the outgoing exterior wavenumber
    is z2 = -i z1 cot(z1 R) and V0 = z2^2 - z1^2.
    """
    if not (0 < eps <= eps_max):
        raise DomainError(f"eps must lie in (0, {eps_max}]")
    if not (0 < delta <= 0.5):
        raise DomainError("delta must lie in (0, 0.5]")
    C = -math.log((1 + delta) * eps)
    R = radial_length(eps, delta, rounding)
    z1 = 0.5 + 1j * eps
    z2 = -1j * z1 * np.cos(z1 * R) / np.sin(z1 * R)
    V0 = z2 * z2 - z1 * z1
    res = abs(radial_determinant(z1, z2, R))
    sol = RadialSolution3D(eps=eps, delta=delta, C=C, R=R, z1=complex(z1), z2=complex(z2),
                           V0=complex(V0), E=complex(z2 * z2), residual=float(res))
    if z2.imag < delta / 4 * eps:
        raise ValidationError(f"Im z2 = {z2.imag:.3e} below delta eps / 4 = {delta * eps / 4:.3e}")
    return sol


# ---------------------------------------------------------------------------
# finite differences


def _cell_average_1d(V: Potential, x, h):
    """Average of V over [x - h/2, x + h/2]; exact for step potentials."""
    if isinstance(V, ConstantBox) and V.d == 1:
        a = V.half_widths[0]
        frac = np.clip(np.minimum(x + h / 2, a) - np.maximum(x - h / 2, -a), 0, None) / h
        return V.alpha * frac
    t, w = np.polynomial.legendre.leggauss(4)
    return sum(wi / 2 * V(x + ti * h / 2) for ti, wi in zip(t, w))


def _radial_cell_average(V: RadialStep3D, r, h):
    frac = np.clip(np.minimum(r + h / 2, V.R) - (r - h / 2), 0, h) / h
    return V.V0 * frac


@dataclass(frozen=True)
class GridOperator1D:
    """-d^2/dx^2 + V on the interior nodes of a Dirichlet grid."""

    grid: GridSpec
    V: Potential
    boundary: str = "dirichlet"

    def __post_init__(self):
        if self.grid.d != 1:
            raise DomainError("one-dimensional grid required")
        if self.boundary != "dirichlet":
            raise DomainError("only Dirichlet boundaries are supported")

    @property
    def h(self) -> float:
        return float(self.grid.spacing[0])

    @property
    def x(self) -> np.ndarray:
        return self.grid.axes[0][1:-1]

    def potential_values(self) -> np.ndarray:
        return np.asarray(_cell_average_1d(self.V, self.x, self.h), dtype=complex)

    def matrix(self) -> sp.csc_matrix:
        n = self.x.size
        h2 = self.h**2
        main = 2.0 / h2 + self.potential_values()
        off = np.full(n - 1, -1.0 / h2)
        return sp.diags([off, main, off], [-1, 0, 1], format="csc", dtype=complex)


def _nearest_eigenpairs(H, target, count):
    n = H.shape[0]
    if n <= 400:
        w, v = np.linalg.eig(H.toarray())
        idx = np.argsort(np.abs(w - target))[:count]
        return w[idx], v[:, idx]
    try:
        w, v = spla.eigs(H, k=count, sigma=target, which="LM", tol=1e-13, maxiter=5000)
    except spla.ArpackNoConvergence as exc:
        raise NoConvergenceError(str(exc)) from exc
    idx = np.argsort(np.abs(w - target))
    return w[idx], v[:, idx]


def grid_eigensolve_1d(op: GridOperator1D, target, count=1, max_h=0.05):
    """Eigenvalues of the finite-difference operator nearest ``target``.

    Returns a list of (eigenvalue, residual) with residual
    ||(H - lambda) v|| / ||v||.
    """
    if op.h > max_h * (1 + 1e-12):
        raise DomainError(f"grid spacing {op.h} exceeds {max_h}")
    H = op.matrix()
    w, v = _nearest_eigenpairs(H, complex(target), count)
    out = []
    for lam, vec in zip(w, v.T):
        r = np.linalg.norm(H @ vec - lam * vec) / np.linalg.norm(vec)
        out.append((complex(lam), float(r)))
    return out


def richardson(coarse, fine, order=2):
    """Extrapolate two values computed at h and h/2."""
    return fine + (fine - coarse) / (2**order - 1)


def square_well_grid_eigenvalue(sol: SquareWellSolution1D, h=0.05, pad_decay=20.0):
    """Finite-difference eigenvalue nearest (1 + i eps)^2, Richardson extrapolated.

    Returns (extrapolated, coarse, fine).
    """
    L = sol.R + pad_decay / sol.eps
    vals = []
    for hh in (h, h / 2):
        n = math.ceil(2 * L / hh - 1e-9) + 1
        grid = GridSpec(1, (L,), (n,))
        lam, _ = grid_eigensolve_1d(GridOperator1D(grid, sol.potential), sol.E, max_h=h)[0]
        vals.append(lam)
    return richardson(*vals), vals[0], vals[1]


def aligned_grid(R, h, pad) -> GridSpec:
    """Symmetric grid with spacing <= h on which x = +-R are nodes."""
    per = math.ceil(R / h - 1e-9)
    hh = R / per
    m = math.ceil(pad / hh)
    L = R + m * hh
    return GridSpec(1, (L,), (2 * (per + m) + 1,))


def residual_check_analytic_1d(sol: SquareWellSolution1D, h=0.01, pad=None) -> float:
    """Relative finite-difference residual of the exact eigenfunction.

    The grid is aligned so that the jumps of V sit on nodes, where the cell
    average assigns V0 / 2; the residual then decays like h^2 until the
    O(h^{3/2}) interface term takes over.
    """
    pad = 20 / sol.eps if pad is None else pad
    grid = aligned_grid(sol.R, h, pad)
    op = GridOperator1D(grid, sol.potential)
    x = grid.axes[0]
    k, z, R = sol.k_in, sol.z, sol.R
    inside = np.abs(x) <= R
    psi = np.where(inside, np.cos(k * x), np.cos(k * R) * np.exp(1j * z * (np.abs(x) - R)))
    lap = (psi[2:] - 2 * psi[1:-1] + psi[:-2]) / op.h**2
    res = -lap + (op.potential_values() - sol.E) * psi[1:-1]
    return float(np.linalg.norm(res) / np.linalg.norm(psi[1:-1]))


def radial_operator(V: RadialStep3D, h, r_max) -> sp.csc_matrix:
    """-d^2/dr^2 + V on u = r psi, Dirichlet at 0 and r_max."""
    n = int(round(r_max / h)) - 1
    r = h * np.arange(1, n + 1)
    main = 2.0 / h**2 + _radial_cell_average(V, r, h)
    off = np.full(n - 1, -1.0 / h**2)
    return sp.diags([off, main, off], [-1, 0, 1], format="csc", dtype=complex)


def radial_grid_eigensolve(V: RadialStep3D, target, h=0.02, r_max=None, extrapolate=True, max_h=0.02):
    """s-wave eigenvalue nearest ``target`` of the radial operator.

    Returns (eigenvalue, residual).  With ``extrapolate`` the value is the
    Richardson combination of spacings h and h/2, and the residual is the
    one at h/2.
    """
    if h > max_h * (1 + 1e-12):
        raise DomainError(f"grid spacing {h} exceeds {max_h}")
    if r_max is None:
        kappa = np.sqrt(complex(target))
        kappa = kappa if kappa.imag > 0 else -kappa
        r_max = V.R + 20 / max(kappa.imag, 1e-3)
    out = []
    for hh in ((h, h / 2) if extrapolate else (h,)):
        H = radial_operator(V, hh, r_max)
        w, v = _nearest_eigenpairs(H, complex(target), 1)
        vec = v[:, 0]
        res = float(np.linalg.norm(H @ vec - w[0] * vec) / np.linalg.norm(vec))
        out.append((complex(w[0]), res))
    if extrapolate:
        return richardson(out[0][0], out[1][0]), out[1][1]
    return out[0]
