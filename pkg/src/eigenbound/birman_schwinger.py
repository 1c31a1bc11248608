"""Discretized Birman-Schwinger operators |V|^{1/2} (-Laplace - z)^{-1} |V|^{1/2}.

The operator is sampled on a uniform tensor grid with rectangle-rule
weights.  Off the diagonal the matrix entries are kernel values; on the
diagonal the weakly singular kernel is replaced by its average over a ball
with the cell's volume.  Because the grid is uniform, the kernel part is a
Toeplitz convolution and products are done with FFTs, so grids far beyond
dense-matrix sizes stay cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import fft, special

from .bounds import BoundCertificate, davies_nath_F, dist_to_ray, make_certificate
from .errors import DegenerateError, DomainError, NoConvergenceError, ResolutionError
from .kernels import SpectralPoint, kernel_from_kappa
from .potentials import GridSpec, Potential

DENSE_LIMIT = 4000
SVD_LIMIT = 500
SUBSAMPLES = 4


def bs_grid(V: Potential, points, pad=0.0) -> GridSpec:
    """Cell-centred grid on the support box of V (optionally padded).

    The box is cut into ``points`` cells per axis and the nodes are the cell
    centres, so cell boundaries fall on the edges of box-shaped supports.
    """
    hw = V.support_halfwidths()
    if hw is None:
        raise DomainError("potential has no compact support; pass an explicit grid")
    hw = np.asarray(hw, float) + pad
    pts = np.broadcast_to(points, hw.shape).astype(int)
    h = 2 * hw / pts
    return GridSpec(V.d, tuple(hw - h / 2), tuple(pts))


def cell_average(V, grid: GridSpec, func=np.abs, sub=SUBSAMPLES) -> np.ndarray:
    """Mean of func(V) over each grid cell, by a sub x ... x sub midpoint rule."""
    h = grid.spacing
    offs = (np.arange(sub) + 0.5) / sub - 0.5
    nodes = grid.nodes()
    acc = np.zeros(len(nodes), dtype=complex if func is None else float)
    mesh = np.meshgrid(*([offs] * grid.d), indexing="ij")
    shifts = np.stack([m.ravel() for m in mesh], axis=-1) * h
    for s in shifts:
        vals = np.asarray(V(nodes + s))
        acc = acc + (vals if func is None else func(vals))
    return acc / len(shifts)


def self_interaction(kappa, d, h) -> complex:
    """Average of the free kernel over a ball with the cell's volume."""
    vol = float(np.prod(h))
    if d == 1:
        return kernel_from_kappa(kappa, 1, 0.0)
    if d == 2:
        a = math.sqrt(vol / math.pi)
        # int_0^a H0(kappa r) r dr = a H1(kappa a) / kappa + 2i / (pi kappa^2)
        radial = a * special.hankel1(1, kappa * a) / kappa + 2j / (math.pi * kappa**2)
        return 0.25j * 2 * math.pi * radial / vol
    if d == 3:
        a = (3 * vol / (4 * math.pi)) ** (1 / 3)
        c = 1j * kappa
        # int_0^a r e^{c r} dr
        radial = np.exp(c * a) * (a / c - 1 / c**2) + 1 / c**2
        return radial / vol
    raise DomainError(f"dimension {d} not supported")


def check_resolution(grid: GridSpec, kappa) -> None:
    h = float(np.max(grid.spacing))
    limit = 1 / (4 * abs(kappa))
    if h > limit * (1 + 1e-12):
        raise ResolutionError(f"grid spacing {h:.4g} exceeds 1/(4|kappa|) = {limit:.4g}")


class ConvolutionKernel:
    """Kernel values K(|x_j - x_k|) on a uniform grid, applied by FFT."""

    def __init__(self, grid: GridSpec, kappa, d, absolute=False):
        self.shape = grid.points
        h = grid.spacing
        axes = [np.arange(-(n - 1), n) * hh for n, hh in zip(self.shape, h)]
        mesh = np.meshgrid(*axes, indexing="ij")
        r = np.sqrt(sum(m * m for m in mesh))
        centre = tuple(n - 1 for n in self.shape)
        r[centre] = 1.0
        table = np.asarray(kernel_from_kappa(kappa, d, r), dtype=complex)
        table[centre] = self_interaction(kappa, d, h)
        if absolute:
            table = np.abs(table).astype(complex)
        self.table = table
        self.fft_shape = tuple(fft.next_fast_len(2 * n - 1) for n in self.shape)
        self._khat = fft.fftn(table, self.fft_shape)

    def __call__(self, u: np.ndarray) -> np.ndarray:
        u = u.reshape(self.shape)
        out = fft.ifftn(fft.fftn(u, self.fft_shape) * self._khat)
        sl = tuple(slice(n - 1, 2 * n - 1) for n in self.shape)
        return out[sl].ravel()

    def dense(self) -> np.ndarray:
        idx = np.indices(self.shape).reshape(len(self.shape), -1)
        diff = idx[:, :, None] - idx[:, None, :] + np.array([n - 1 for n in self.shape])[:, None, None]
        return self.table[tuple(diff)]


@dataclass
class BSDiscretization:
    """Weighted kernel operator  diag(left) K diag(right).

    For the Birman-Schwinger operator left = right = sqrt(w) |V|^{1/2}.
    """

    d: int
    z: SpectralPoint
    grid: GridSpec
    left: np.ndarray
    right: np.ndarray
    kernel: ConvolutionKernel = field(repr=False)

    @property
    def N(self) -> int:
        return self.grid.size

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes()

    @property
    def weights(self) -> np.ndarray:
        return np.full(self.N, float(np.prod(self.grid.spacing)))

    def matvec(self, u):
        return self.left * self.kernel(self.right * u)

    def rmatvec(self, u):
        # K is symmetric, so K^H y = conj(K conj(y))
        return np.conj(self.right * self.kernel(self.left * np.conj(u)))

    @cached_property
    def matrix(self) -> np.ndarray:
        if self.N > DENSE_LIMIT:
            raise DomainError(f"dense matrix with N = {self.N} > {DENSE_LIMIT} not materialized")
        return self.left[:, None] * self.kernel.dense() * self.right[None, :]


def discretize_bs(V: Potential, z: SpectralPoint, grid: GridSpec) -> BSDiscretization:
    """Birman-Schwinger operator of V at z on ``grid``."""
    if z.on_spectrum:
        raise DomainError(f"z = {z.E} lies on [0, inf)")
    if grid.d != V.d or z.d != V.d:
        raise DomainError("dimension mismatch between V, z and grid")
    check_resolution(grid, z.kappa)
    w = float(np.prod(grid.spacing))
    a = np.sqrt(w * cell_average(V, grid)).astype(complex)
    return BSDiscretization(V.d, z, grid, a, a, ConvolutionKernel(grid, z.kappa, V.d))


# ---------------------------------------------------------------------------
# norms


@dataclass
class NormEstimate:
    value: float
    method: str
    iterations: int
    residual: float


def _as_operator(B):
    if isinstance(B, BSDiscretization):
        return B.matvec, B.rmatvec, B.N, (B.matrix if B.N <= SVD_LIMIT else None)
    M = np.asarray(B, dtype=complex)
    return (lambda u: M @ u), (lambda u: M.conj().T @ u), M.shape[1], M


def operator_norm(B, tol=1e-8, max_iter=10_000, block=6, seed=0, method="power-iteration") -> NormEstimate:
    """Largest singular value.

    Block power iteration on the Gram operator B^H B with Rayleigh-Ritz
    extraction; converged once ||G v - mu v|| <= tol * mu for the top Ritz
    pair, and the reported residual is that quantity divided by sqrt(mu).
    ``method="full-svd"`` uses a dense SVD instead (N <= 500).
    """
    matvec, rmatvec, n, dense = _as_operator(B)
    if method == "full-svd":
        if dense is None:
            raise DomainError(f"full SVD limited to N <= {SVD_LIMIT}")
        return NormEstimate(float(np.linalg.svd(dense, compute_uv=False)[0]), "full-svd", 0, 0.0)
    rng = np.random.default_rng(seed)
    b = min(block, n)
    X = rng.standard_normal((n, b)) + 1j * rng.standard_normal((n, b))
    X, _ = np.linalg.qr(X)

    def gram(Y):
        return np.stack([rmatvec(matvec(Y[:, j])) for j in range(Y.shape[1])], axis=1)

    for it in range(1, max_iter + 1):
        GX = gram(X)
        if not np.any(GX):
            return NormEstimate(0.0, "power-iteration", it, 0.0)
        H = X.conj().T @ GX
        mu, W = np.linalg.eigh((H + H.conj().T) / 2)
        v, Gv, top = X @ W[:, -1], GX @ W[:, -1], mu[-1]
        res = np.linalg.norm(Gv - top * v)
        if res <= tol * top:
            sigma = math.sqrt(max(top, 0.0))
            return NormEstimate(sigma, "power-iteration", it, float(res / sigma))
        X, _ = np.linalg.qr(GX @ W[:, ::-1])
    raise NoConvergenceError(f"power iteration did not converge in {max_iter} iterations")


def schur_bound(B: BSDiscretization, V: Potential, q: float) -> float:
    """Weighted Schur test bound with rho(x, y) = (|V(x)| / |V(y)|)^{q/2}.

    Uses (sup_j sum_k |B_jk| / rho_jk)^{1/2} (sup_k sum_j |B_jk| rho_jk)^{1/2}
    over nodes where V is nonzero.
    """
    absV = cell_average(V, B.grid)
    live = absV > 0
    if not np.any(live):
        return 0.0
    if absV[live].min() < 1e-12 * absV[live].max():
        raise DegenerateError("|V| is not bounded below on its support; truncate it first")
    absK = ConvolutionKernel(B.grid, B.z.kappa, B.d, absolute=True)
    a = np.abs(B.left)
    p = np.where(live, absV, 1.0) ** (q / 2)
    rows = a / p * absK(a * p).real
    cols = a * p * absK(a / p).real
    return float(math.sqrt(rows[live].max() * cols[live].max()))


def verify_bs_scaling(V: Potential, z: SpectralPoint, lam: float, grid: GridSpec) -> float:
    """Relative change of the discrete norm under the dilation x -> x / lam.

    Nodes and weights are mapped exactly, the potential becomes
    lam^2 V(lam x) and z becomes lam^2 z, so the two discrete operators
    coincide entry by entry.
    """
    if lam <= 0:
        raise DomainError("lam must be positive")
    n1 = operator_norm(discretize_bs(V, z, grid)).value
    V2 = V.rescaled(1 / lam, lam**2)
    z2 = SpectralPoint.from_wavenumber(lam * z.kappa, z.d)
    n2 = operator_norm(discretize_bs(V2, z2, grid.scaled(1 / lam))).value
    return abs(n1 - n2) / n1 if n1 else abs(n2)


def cert_bs_bound(V: Potential, z: SpectralPoint, q, C, grid: GridSpec | None = None, points=24) -> BoundCertificate:
    """||BS(V, z)|| <= C |z|^{d/(2q) - 1} F_V^q(Im sqrt z)."""
    grid = bs_grid(V, points) if grid is None else grid
    lhs = operator_norm(discretize_bs(V, z, grid)).value
    rhs = abs(z.E) ** (V.d / (2 * q) - 1) * davies_nath_F(V, q, z.kappa.imag)
    return make_certificate("birman-schwinger", lhs, rhs, C, q=q, d=V.d, z=z.E, N=grid.size)


def trivial_bs_bound(V: Potential, z: SpectralPoint) -> float:
    """sup |V| / dist(z, [0, inf))."""
    return V.sup_abs() / dist_to_ray(z.E)


def weighted_resolvent_norm(f: Potential, g_weight: Potential, z: SpectralPoint, grid: GridSpec) -> float:
    """Discrete operator norm of f (-Laplace - z)^{-1} g."""
    if z.on_spectrum:
        raise DomainError(f"z = {z.E} lies on [0, inf)")
    check_resolution(grid, z.kappa)
    w = float(np.prod(grid.spacing))
    left = math.sqrt(w) * cell_average(f, grid, func=None)
    right = math.sqrt(w) * cell_average(g_weight, grid, func=None)
    if not (np.any(left) and np.any(right)):
        return 0.0
    B = BSDiscretization(grid.d, z, grid, left, right, ConvolutionKernel(grid, z.kappa, grid.d))
    return operator_norm(B).value
