"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import cmath
import math
import time

import numpy as np
from scipy import integrate

from eigenbound import bounds, cli, eigensolvers, fourier, quasimode
from eigenbound.kernels import (
    SpectralPoint,
    apply_resolvent_radial,
    fractional_kernel_d3,
    free_resolvent_kernel,
    hankel0_asymptotic,
    hankel0_series,
    pointwise_bound_rhs,
)
from eigenbound.potentials import IonescuJerison, ij_local_norm_model
from eigenbound.sweep import fit_slope, log_correct

WELL_EPS = (0.1, 0.05, 0.02)


def _order(coarse, fine):
    return math.log2(coarse / fine)


def _radial_fd_residual(d, h):
    """Max of |-u'' - (d-1)/r u' + u - f| for u = R(-1) f, f = exp(-r^2), on [0.5, 4].

    In d = 3 the stencil acts on v = r u, which satisfies -v'' + v = r f.
    """
    sp = SpectralPoint.from_energy(-1, d)
    f = lambda s: np.exp(-s * s)
    r = np.arange(0.5 - h, 4 + h + 1e-12, h)
    u = apply_resolvent_radial(sp, f, r, cutoff=12.0)
    v, rhs = (u * r, r * f(r)) if d == 3 else (u, f(r))
    lap = (v[2:] - 2 * v[1:-1] + v[:-2]) / h**2
    return float(np.max(np.abs(-lap + v[1:-1] - rhs[1:-1])))


def test_criterion_01_resolvent_identity(criterion):
    t0 = time.perf_counter()
    orders = {}
    for d in (1, 3):
        e = [_radial_fd_residual(d, h) for h in (0.1, 0.05, 0.025)]
        orders[d] = _order(e[1], e[2])
    elapsed = time.perf_counter() - t0
    ok = all(abs(o - 2) <= 0.2 for o in orders.values()) and elapsed < 5
    criterion(1, ok, f"orders d=1 {orders[1]:.3f}, d=3 {orders[3]:.3f}; {elapsed:.2f} s")


def _k0_quadrature(x):
    return integrate.quad(lambda t: math.exp(-x * math.cosh(t)), 0, 40, epsabs=0, epsrel=1e-13, limit=200)[0]


def test_criterion_02_hankel(criterion):
    worst, where = 0.0, None
    for rad in np.linspace(8, 12, 5):
        for phi in np.linspace(-math.pi, math.pi, 100, endpoint=False):
            w = cmath.rect(rad, phi)
            a, b = hankel0_series(w), hankel0_asymptotic(w)
            rel = abs(a - b) / abs(b)
            if rel > worst:
                worst, where = rel, w
    sp = SpectralPoint.from_energy(-1, 2)
    k0_err = max(abs(free_resolvent_kernel(sp, x) * 2 * math.pi / _k0_quadrature(x) - 1)
                 for x in (0.05, 0.3, 1.0, 3.0, 8.0))
    ok = worst <= 1e-10 and k0_err <= 1e-9
    criterion(2, ok, f"series vs asymptotic max rel {worst:.2e} at w = {where:.3f}; K0 rel {k0_err:.2e}")


def test_criterion_03_pointwise_bound(criterion):
    r = np.geomspace(1e-2, 50, 50)
    worst1 = worst2 = 0.0
    for phase in np.linspace(0.05, 2 * math.pi - 0.05, 12):
        sp = SpectralPoint.from_energy(cmath.exp(1j * phase), 3)
        k1 = np.abs(free_resolvent_kernel(sp, r))
        worst1 = max(worst1, float(np.max(np.abs(k1 / pointwise_bound_rhs(sp, 1, r, 1 / (4 * np.pi)) - 1))))
        k2 = np.abs(fractional_kernel_d3(sp, 2, r))
        worst2 = max(worst2, float(np.max(np.abs(k2 / (np.exp(-sp.kappa.imag * r) / (8 * np.pi)) - 1))))
    ok = worst1 <= 1e-12 and worst2 <= 1e-10
    criterion(3, ok, f"zeta=1 equality rel {worst1:.1e}; zeta=2 rel {worst2:.1e}")


def test_criterion_04_bs_scaling(criterion):
    cfg = cli.build_config("bs-scaling")
    rows, summary, _ = cli.run_bs_scaling(cfg)
    pots = {r["potential"] for r in rows}
    zs = {(r["z_re"], r["z_im"]) for r in rows}
    lams = {r["lam"] for r in rows}
    ok = summary["max_rel_diff"] <= 1e-8 and len(pots) == 2 and len(zs) == 2 and lams == {0.5, 2.0}
    criterion(4, ok, f"max relative identity error {summary['max_rel_diff']:.1e} over {len(rows)} cases")


def test_criterion_05_davies_nath_1d(criterion):
    dn, aad = [], []
    for eps in WELL_EPS:
        sol = eigensolvers.solve_square_well_1d(eps)
        dn.append(bounds.cert_davies_nath_1d(sol.potential, sol.E))
        aad.append(bounds.cert_aad_1d(sol.potential, sol.E))
    ok = all(c.satisfied and c.constant_used == 0.5 and c.ratio >= 0.05 for c in dn)
    detail = ", ".join(f"eps={e}: DN {c.ratio:.3f} AAD {a.ratio:.3f}" for e, c, a in zip(WELL_EPS, dn, aad))
    criterion(5, ok, detail)


def test_criterion_06_square_well_scaling(criterion):
    sols = [eigensolvers.solve_square_well_1d(eps) for eps in WELL_EPS]
    slopes = {}
    for q in (1, 2):
        pts = [(s.eps, s.potential.lq_norm(q)) for s in sols]
        slopes[q] = fit_slope(log_correct(pts, 1 / q)).slope
    res = max(s.residual for s in sols)
    windings = [s.winding for s in sols]
    ok = all(abs(slopes[q] - (1 - 1 / q)) <= 0.15 for q in (1, 2)) and res <= 1e-12 and windings == [1, 1, 1]
    criterion(6, ok, f"slope q=1 {slopes[1]:.3f} (0), q=2 {slopes[2]:.3f} (0.5); residual {res:.1e}; windings {windings}")


def test_criterion_07_grid_cross_validation(criterion):
    t0 = time.perf_counter()
    well = eigensolvers.solve_square_well_1d(0.1)
    lam1, _, _ = eigensolvers.square_well_grid_eigenvalue(well, h=0.05)
    t1 = time.perf_counter() - t0
    t0 = time.perf_counter()
    radial = eigensolvers.construct_radial_3d(0.1)
    lam3, _ = eigensolvers.radial_grid_eigensolve(radial.potential, radial.E, h=0.02)
    t3 = time.perf_counter() - t0
    e1, e3 = abs(lam1 - well.E), abs(lam3 - radial.E)
    ok = e1 <= 1e-3 and e3 <= 1e-3 and t1 < 60 and t3 < 60
    criterion(7, ok, f"1D error {e1:.1e} ({t1:.2f} s), 3D radial error {e3:.1e} ({t3:.2f} s)")


def test_criterion_08_radial_construction(criterion):
    sols = [eigensolvers.construct_radial_3d(eps, 0.5) for eps in WELL_EPS]
    im_ok = all(s.z2.imag >= 0.5 / 4 * s.eps for s in sols)
    det = max(abs(eigensolvers.radial_determinant(s.z1, s.z2, s.R)) for s in sols)
    slope = fit_slope(log_correct([(s.eps, s.potential.lq_norm(4)) for s in sols], 3 / 4)).slope
    ratios = [bounds.ls_ratio(s.potential, s.E, 3.5) for s in sols]
    increasing = all(b > a for a, b in zip(ratios, ratios[1:]))
    ok = im_ok and det <= 1e-12 and abs(slope - 0.25) <= 0.15 and increasing
    criterion(8, ok, f"Im z2 bound {im_ok}; det {det:.1e}; slope q=4 {slope:.3f} (0.25); "
                     f"ls_ratio q=3.5 {', '.join(f'{r:.3g}' for r in ratios)} increasing={increasing}")


def test_criterion_09_certificate_stability(criterion):
    parts = []
    ok = True
    for name, runner in (("thm1", cli.run_thm1), ("cor1", cli.run_cor1), ("frank", cli.run_frank)):
        rows, summary, _ = runner(cli.build_config(name))
        second = rows[len(rows) // 2:]
        stable = abs(summary["stability"] - 1) <= 0.1
        ok &= all(r["satisfied"] for r in second) and stable
        parts.append(f"{name} stability {summary['stability']:.3f}")
    exp0 = bounds.corollary1_exponent(3, 2.0)
    ok &= exp0 == 0
    criterion(9, ok, "; ".join(parts) + f"; exponent at q=(d+1)/2 {exp0}")


def test_criterion_10_localized_bound(criterion):
    rows, summary, _ = cli.run_cor2(cli.build_config("cor2"))
    sat = all(r["satisfied"] for r in rows)
    absorbed = all(r["absorbed"] for r in rows)
    cfg = cli.build_config("cor2")
    split_ok = True
    for _, sol in cli._radial_pairs(cfg):
        M = bounds.corollary2_M(sol.potential, cfg.q, sol.E, summary["constant"])
        F, local, tail, _ = bounds.corollary2_split(sol.potential, cfg.q, sol.E, M)
        split_ok &= F <= (local + tail) * (1 + 1e-9)
    ok = sat and absorbed and split_ok
    criterion(10, ok, f"C_d {summary['constant']:.4g}; satisfied {sat}; tail absorbed {absorbed}; split {split_ok}")


def test_criterion_11_quasimode(criterion):
    d, q = 3, 4.0
    eps_list = (0.4, 0.2, 0.1, 0.05)
    qms = [quasimode.gaussian_quasimode(e, d) for e in eps_list]
    norm_err = max(abs(m.psi_norm2_sq - math.pi ** (d / 2)) for m in qms)
    s1 = quasimode.stencil_residual_error(quasimode.gaussian_quasimode(0.4, d), 0.2)
    s2 = quasimode.stencil_residual_error(quasimode.gaussian_quasimode(0.4, d), 0.1)
    order = _order(s1, s2)
    norms = [quasimode.quasimode_norms(m, q) for m in qms]
    g_slope = fit_slope([(e, n[0]) for e, n in zip(eps_list, norms)]).slope
    v_slope = fit_slope([(e, n[1]) for e, n in zip(eps_list, norms)]).slope
    v_exact = 1 - (d + 1) / (2 * q)
    cond = [quasimode.check_proposition_condition(m, q) for m in qms]
    c_slope = fit_slope(list(zip(eps_list, cond))).slope
    trunc = [quasimode.truncated_quasimode(e, q, d) for e in (0.3, 0.2, 0.1)]
    scaled = [m.g_norm2 / (m.eps * math.exp(-m.M**2 / 4)) for m in trunc]
    bracket = max(scaled) / min(scaled)
    ok = (norm_err <= 1e-8 and abs(order - 2) <= 0.2 and abs(g_slope - 1) <= 0.1
          and abs(v_slope - v_exact) <= 1e-12 and abs(c_slope - 0.5) <= 0.1 and bracket <= 4)
    criterion(11, ok, f"norm err {norm_err:.1e}; stencil order {order:.3f}; slopes g {g_slope:.3f}, "
                      f"V {v_slope:.4f} ({v_exact}), condition {c_slope:.3f} (0.5); truncated bracket {bracket:.3f}")


def test_criterion_12_stein_tomas(criterion):
    t0 = time.perf_counter()
    fit, _ = fourier.measure_2pc_scaling(1.0, (0.4, 0.2, 0.1, 0.05), d=3, n=128)
    elapsed = time.perf_counter() - t0
    ok = abs(fit.slope + 0.5) <= 0.1 and elapsed < 180
    criterion(12, ok, f"slope {fit.slope:.3f} (-0.5); {elapsed:.1f} s")


def test_criterion_13_ionescu_jerison(criterion):
    ratios = []
    for n in (10, 100):
        V = IonescuJerison(n, 3)
        for k in (10, 100):
            val = bounds.sup_local_norm(V, 2, k * n)
            ratios.append(val / ij_local_norm_model(n, k * n, 3))
    local_ok = all(0.5 <= r <= 2 for r in ratios)
    lq = [IonescuJerison(n, 3).lq_norm(3) * n ** (1 - 4 / 6) for n in (10, 100, 1000)]
    bracket = max(lq) / min(lq)
    ok = local_ok and bracket <= 1.25
    criterion(13, ok, f"local/model ratios {', '.join(f'{r:.3g}' for r in ratios)}; lq bracket {bracket:.4f}")


def test_criterion_14_determinism(criterion, tmp_path):
    same = []
    for name, extra in (("squarewell1d", []), ("stein-tomas", ["--eps", "0.4", "0.2", "0.1"])):
        outs = []
        for tag in ("a", "b"):
            cfg = tmp_path / f"{name}.json"
            cfg.write_text('{"grid": {"points": 32}}' if name == "stein-tomas" else "{}")
            out = tmp_path / tag
            assert cli.main([name, "--config", str(cfg), "--out", str(out), "--seed", "7", *extra]) == 0
            outs.append((out / f"{name}.csv").read_bytes())
        same.append(outs[0] == outs[1])
    criterion(14, all(same), f"identical CSV bytes: squarewell1d {same[0]}, stein-tomas {same[1]}")
