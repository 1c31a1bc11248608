"""Command-line runner for the experiment suites.

    eigenbound <experiment> [--config file.json] [--out dir] [--eps ...] [--q Q] [--seed N]
    eigenbound list

Each run writes ``<out>/<experiment>.csv`` and ``<out>/<experiment>.summary.json``.
Exit status is 0 on completion, 1 on a configuration error and 2 when a
certificate evaluated with a fixed (not fitted) constant fails.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, field
from importlib import metadata
from pathlib import Path

import numpy as np

from . import bounds, eigensolvers, fourier, quasimode
from .birman_schwinger import bs_grid, verify_bs_scaling
from .kernels import SpectralPoint
from .potentials import IonescuJerison, RadialStep3D, ij_local_norm_model
from .sweep import fit_constant, fit_slope, log_correct

log = logging.getLogger("eigenbound")

RADIAL_EPS = (0.1, 0.08, 0.06, 0.05, 0.04, 0.03, 0.025, 0.02)
WELL_EPS = (0.1, 0.05, 0.02)

EXPERIMENTS = {
    "dn1d": "Davies-Nath bound in one dimension, with the Abramov-Aslanyan-Davies bound for contrast",
    "thm1": "Davies-Nath type bound in higher dimensions on the radial step family",
    "cor1": "Hoelder corollary |z|^{1/(d+1)} (Im sqrt z)^{...} <= C ||V||_q",
    "cor2": "localized bound with the absorbed exponential tail",
    "frank": "Frank's bound in terms of dist(z, [0, inf))",
    "bs-scaling": "dilation invariance of the Birman-Schwinger norm",
    "squarewell1d": "complex square well with eigenvalue (1 + i eps)^2",
    "radial3d": "radial step in three dimensions with eigenvalue z2^2",
    "quasimode": "Gaussian quasimode norms and the perturbative condition",
    "quasimode-trunc": "quasimode with exponentially small residual",
    "stein-tomas": "L^2 -> L^{p_c} resolvent growth, p_c = 2(d+1)/(d-1)",
    "ij-norms": "Ionescu-Jerison potential norms",
    "lower-bound": "local L^{(d+1)/2} mass on balls of radius A |ln eps| / eps",
    "ls-ratio": "Laptev-Safronov ratio |z|^{q-d/2} / ||V||_q^q",
}

DEFAULTS = {
    "dn1d": dict(d=1, q=1.0, eps_list=WELL_EPS),
    "thm1": dict(d=3, q=2.0, eps_list=RADIAL_EPS),
    "cor1": dict(d=3, q=4.0, eps_list=RADIAL_EPS),
    "cor2": dict(d=3, q=4.0, eps_list=RADIAL_EPS),
    "frank": dict(d=3, q=4.0, eps_list=RADIAL_EPS),
    "bs-scaling": dict(d=3, q=2.0, eps_list=(0.3,)),
    "squarewell1d": dict(d=1, q=1.0, eps_list=WELL_EPS),
    "radial3d": dict(d=3, q=4.0, eps_list=WELL_EPS),
    "quasimode": dict(d=3, q=4.0, eps_list=(0.4, 0.2, 0.1, 0.05)),
    "quasimode-trunc": dict(d=3, q=4.0, eps_list=(0.3, 0.2, 0.1)),
    "stein-tomas": dict(d=3, q=4.0, eps_list=(0.4, 0.2, 0.1, 0.05)),
    "ij-norms": dict(d=3, q=3.0, eps_list=(0.1,)),
    "lower-bound": dict(d=1, q=1.0, eps_list=WELL_EPS),
    "ls-ratio": dict(d=3, q=3.5, eps_list=WELL_EPS),
}

CONSTANT_KEYS = ("C_dq", "C_d_prime", "C_d", "A", "delta", "rho", "C")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    experiment: str
    d: int
    q: float
    eps_list: tuple
    constants: dict = field(default_factory=dict)
    grid: dict = field(default_factory=dict)
    out: str = "."
    seed: int = 0

    def constant(self, key, default=None):
        v = self.constants.get(key, default)
        return None if v in (None, "fit") else float(v)


def build_config(experiment, file_data=None, eps=None, q=None, out=None, seed=None) -> ExperimentConfig:
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {experiment!r}; valid: {', '.join(EXPERIMENTS)}")
    data = dict(DEFAULTS[experiment])
    file_data = dict(file_data or {})
    unknown = set(file_data) - {"experiment", "d", "q", "eps_list", "constants", "grid", "out", "seed"}
    if unknown:
        raise ConfigError(f"unknown config field(s): {', '.join(sorted(unknown))}")
    if file_data.get("experiment", experiment) != experiment:
        raise ConfigError(f"field 'experiment': config names {file_data['experiment']!r}")
    file_data.pop("experiment", None)
    data.update(file_data)
    for key, val in (("eps_list", eps), ("q", q), ("out", out), ("seed", seed)):
        if val is not None:
            data[key] = val
    try:
        eps_list = tuple(sorted((float(e) for e in data["eps_list"]), reverse=True))
        cfg = ExperimentConfig(experiment, int(data["d"]), float(data["q"]), eps_list,
                               dict(data.get("constants", {})), dict(data.get("grid", {})),
                               str(data.get("out", ".")), int(data.get("seed", 0)))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    if not cfg.eps_list:
        raise ConfigError("field 'eps_list': must not be empty")
    if any(not (0 < e <= 0.5) for e in cfg.eps_list):
        raise ConfigError("field 'eps_list': entries must lie in (0, 0.5]")
    bad = set(cfg.constants) - set(CONSTANT_KEYS)
    if bad:
        raise ConfigError(f"field 'constants': unknown key(s) {', '.join(sorted(bad))}")
    return cfg


# ---------------------------------------------------------------------------
# experiments; each returns (rows, summary, fixed_constant_failure)


def _cplx(prefix, z):
    return {f"{prefix}_re": float(np.real(z)), f"{prefix}_im": float(np.imag(z))}


def _cert_row(c: bounds.BoundCertificate, eps):
    return dict(name=c.name, eps=eps, q=c.meta.get("q"), d=c.meta.get("d"), lhs=c.lhs, rhs=c.rhs,
                constant=c.constant_used, ratio=c.ratio, satisfied=c.satisfied)


def _radial_pairs(cfg):
    delta = cfg.constant("delta", 0.5)
    return [(eps, eigensolvers.construct_radial_3d(eps, delta)) for eps in cfg.eps_list]


def _well_pairs(cfg):
    rho, C = cfg.constant("rho", 0.5), cfg.constant("C", 1.0)
    return [(eps, eigensolvers.solve_square_well_1d(eps, rho, C)) for eps in cfg.eps_list]


def _certificate_suite(cfg, make, key):
    """Evaluate ``make(V, z, C)`` over the radial sweep, fitting C on the first half if unset."""
    pairs = _radial_pairs(cfg)
    fixed = cfg.constant(key)
    units = [make(sol.potential, sol.E, 1.0) for _, sol in pairs]
    half = max(1, len(units) // 2)
    first = fit_constant([(c.lhs, c.rhs_unit) for c in units[:half]]).value
    full = fit_constant([(c.lhs, c.rhs_unit) for c in units]).value
    C = first if fixed is None else fixed
    certs = [make(sol.potential, sol.E, C) for _, sol in pairs]
    rows = [_cert_row(c, eps) for (eps, _), c in zip(pairs, certs)]
    summary = dict(constant=C, fitted=fixed is None, first_half_constant=first, full_constant=full,
                   stability=full / first, all_satisfied=all(c.satisfied for c in certs))
    return rows, summary, fixed is not None and not summary["all_satisfied"]


def run_dn1d(cfg):
    rows = []
    for eps, sol in _well_pairs(cfg):
        for cert in (bounds.cert_davies_nath_1d(sol.potential, sol.E), bounds.cert_aad_1d(sol.potential, sol.E)):
            rows.append(_cert_row(cert, eps))
    failed = any(not r["satisfied"] for r in rows)
    dn = [r for r in rows if r["name"] == "davies-nath"]
    return rows, dict(min_dn_ratio=min(r["ratio"] for r in dn), all_satisfied=not failed), failed


def run_thm1(cfg):
    return _certificate_suite(cfg, lambda V, z, C: bounds.cert_theorem1(V, z, cfg.q, C), "C_dq")


def run_cor1(cfg):
    return _certificate_suite(cfg, lambda V, z, C: bounds.cert_corollary1(V, z, cfg.q, C), "C_dq")


def run_frank(cfg):
    return _certificate_suite(cfg, lambda V, z, C: bounds.cert_frank(V, z, cfg.q, C), "C_dq")


def run_cor2(cfg):
    pairs = _radial_pairs(cfg)
    fixed = cfg.constant("C_d")
    cases = [(sol.potential, cfg.q, sol.E) for _, sol in pairs]
    Cd = bounds.fit_corollary2_constant(cases) if fixed is None else fixed
    rows = []
    for (eps, _), (V, q, z) in zip(pairs, cases):
        c = bounds.cert_corollary2(V, q, z, Cd)
        row = _cert_row(c, eps)
        row.update(M=c.meta["M"], tail=c.meta["tail"], absorbed=c.meta["absorbed"])
        rows.append(row)
    ok = all(r["satisfied"] and r["absorbed"] for r in rows)
    return rows, dict(constant=Cd, fitted=fixed is None, all_satisfied=ok), fixed is not None and not ok


def run_bs_scaling(cfg):
    n = int(cfg.grid.get("points", 12))
    well = eigensolvers.SquareWell1D(1.0, 1.0)
    step = RadialStep3D(1.0, 1.0)
    cases = [("square-well-1d", well, (-1.0, -1 + cfg.eps_list[0] * 1j)),
             ("radial-step-3d", step, (-1.0, -1 + cfg.eps_list[0] * 1j))]
    rows = []
    for name, V, zs in cases:
        grid = bs_grid(V, 8 * n if V.d == 1 else n)
        for E in zs:
            z = SpectralPoint.from_energy(E, V.d)
            for lam in (0.5, 2.0):
                diff = verify_bs_scaling(V, z, lam, grid)
                rows.append(dict(potential=name, d=V.d, lam=lam, **_cplx("z", E), rel_diff=diff))
    worst = max(r["rel_diff"] for r in rows)
    return rows, dict(max_rel_diff=worst, passed=worst <= 1e-8), worst > 1e-8


def run_squarewell1d(cfg):
    rows = []
    for eps, sol in _well_pairs(cfg):
        V = sol.potential
        dn = bounds.cert_davies_nath_1d(V, sol.E)
        rows.append(dict(eps=eps, R=sol.R, **_cplx("V0", sol.V0), normL1=V.lq_norm(1), ratio_DN=dn.ratio,
                         residual=sol.residual, winding=sol.winding))
    out = {}
    if len(rows) >= 3:
        for q in (1, 2):
            pts = [(sol.eps, sol.potential.lq_norm(q)) for _, sol in _well_pairs(cfg)]
            out[f"slope_q{q}"] = fit_slope(log_correct(pts, 1 / q)).slope
    return rows, out, False


def run_radial3d(cfg):
    rows, pts = [], []
    for eps, sol in _radial_pairs(cfg):
        Vq = sol.potential.lq_norm(cfg.q)
        pts.append((eps, Vq))
        rows.append(dict(eps=eps, R=sol.R, **_cplx("z2", sol.z2), **_cplx("V0", sol.V0),
                         im_z2_over_eps=sol.z2.imag / eps, normLq=Vq, residual=sol.residual))
    out = {}
    if len(pts) >= 3:
        out["slope_logcorrected"] = fit_slope(log_correct(pts, 3 / cfg.q)).slope
    return rows, out, False


def run_quasimode(cfg):
    rows = []
    for eps in cfg.eps_list:
        qm = quasimode.gaussian_quasimode(eps, cfg.d)
        g2, Vq, Vpsi2 = quasimode.quasimode_norms(qm, cfg.q)
        rows.append(dict(eps=eps, q=cfg.q, d=cfg.d, g2=g2, Vq=Vq, Vpsi2=Vpsi2,
                         condition_quantity=quasimode.check_proposition_condition(qm, cfg.q)))
    out = {}
    if len(rows) >= 3:
        for key in ("g2", "Vq", "Vpsi2", "condition_quantity"):
            out[f"slope_{key}"] = fit_slope([(r["eps"], r[key]) for r in rows]).slope
    return rows, out, False


def run_quasimode_trunc(cfg):
    rows = []
    for eps in cfg.eps_list:
        qm = quasimode.truncated_quasimode(eps, cfg.q, cfg.d)
        g2 = qm.g_norm2
        rows.append(dict(eps=eps, q=cfg.q, d=cfg.d, M=qm.M, g2=g2, g2_scaled=g2 / (eps * math.exp(-qm.M**2 / 4)),
                         Vq=qm.V.lq_norm(cfg.q)))
    scaled = [r["g2_scaled"] for r in rows]
    return rows, dict(bracket=max(scaled) / min(scaled)), False


def run_stein_tomas(cfg):
    n = int(cfg.grid.get("points", 128))
    lam = float(cfg.grid.get("lam", 1.0))
    fit, recs = fourier.measure_2pc_scaling(lam, cfg.eps_list, cfg.d, n=n, seed=cfg.seed)
    rows = [dict(eps=r.eps, estimate=r.estimate, knapp=r.knapp_best, random=r.random_best) for r in recs]
    return rows, dict(slope=fit.slope, intercept=fit.intercept, max_residual=fit.max_residual), False


def run_ij_norms(cfg):
    d, q = cfg.d, cfg.q
    rows = []
    for n in (10, 100, 1000):
        V = IonescuJerison(n, d)
        rows.append(dict(kind="lq", n=n, R=None, value=V.lq_norm(q) * n ** (1 - (d + 1) / (2 * q)), model=None))
    for n in (10, 100):
        V = IonescuJerison(n, d)
        for k in (10, 100):
            val = bounds.sup_local_norm(V, (d + 1) / 2, k * n)
            rows.append(dict(kind="local", n=n, R=k * n, value=val, model=ij_local_norm_model(n, k * n, d)))
    lq = [r["value"] for r in rows if r["kind"] == "lq"]
    ratios = [r["value"] / r["model"] for r in rows if r["kind"] == "local"]
    return rows, dict(lq_bracket=max(lq) / min(lq), local_model_ratio_range=[min(ratios), max(ratios)]), False


def run_lower_bound(cfg):
    A = cfg.constant("A", 1.0)
    rows = []
    for eps, sol in _well_pairs(cfg):
        rows.append(dict(eps=eps, A=A, value=bounds.lower_bound_functional(sol.potential, eps, A)))
    vals = [r["value"] for r in rows]
    return rows, dict(bracket=[min(vals), max(vals)]), False


def run_ls_ratio(cfg):
    rows = [dict(eps=eps, q=cfg.q, ratio=bounds.ls_ratio(sol.potential, sol.E, cfg.q))
            for eps, sol in _radial_pairs(cfg)]
    r = [row["ratio"] for row in rows]
    return rows, dict(increasing=all(b > a for a, b in zip(r, r[1:]))), False


RUNNERS = {
    "dn1d": run_dn1d, "thm1": run_thm1, "cor1": run_cor1, "cor2": run_cor2, "frank": run_frank,
    "bs-scaling": run_bs_scaling, "squarewell1d": run_squarewell1d, "radial3d": run_radial3d,
    "quasimode": run_quasimode, "quasimode-trunc": run_quasimode_trunc, "stein-tomas": run_stein_tomas,
    "ij-norms": run_ij_norms, "lower-bound": run_lower_bound, "ls-ratio": run_ls_ratio,
}


def list_experiments() -> str:
    width = max(map(len, EXPERIMENTS))
    return "\n".join(f"{name:<{width}}  {anchor}" for name, anchor in EXPERIMENTS.items())


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


def _write_csv(path: Path, rows):
    cols = []
    for r in rows:
        cols += [k for k in r if k not in cols]
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: ("" if r.get(k) is None else r.get(k)) for k in cols})


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def run(cfg: ExperimentConfig) -> int:
    rows, summary, failed = RUNNERS[cfg.experiment](cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / f"{cfg.experiment}.csv", rows)
    record = dict(config=asdict(cfg), version=_version(), rows=len(rows), **summary)
    (out / f"{cfg.experiment}.summary.json").write_text(json.dumps(_jsonable(record), indent=2, sort_keys=True) + "\n")
    log.info("%s: %d rows written to %s", cfg.experiment, len(rows), out)
    return 2 if failed else 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="eigenbound", description="Run eigenvalue-bound experiment suites.")
    parser.add_argument("experiment", help="experiment name, or 'list'")
    parser.add_argument("--config", type=Path, help="JSON config file")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--eps", type=float, nargs="*", help="override eps_list")
    parser.add_argument("--q", type=float, help="override q")
    parser.add_argument("--seed", type=int, help="random seed")
    parser.add_argument("-v", "--verbose", action="store_true")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")

    if args.experiment == "list":
        print(list_experiments())
        return 0
    try:
        data = None
        if args.config is not None:
            try:
                data = json.loads(args.config.read_text())
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{args.config}: line {exc.lineno}: {exc.msg}") from exc
            except OSError as exc:
                raise ConfigError(str(exc)) from exc
            if not isinstance(data, dict):
                raise ConfigError(f"{args.config}: top level must be an object")
        cfg = build_config(args.experiment, data, args.eps, args.q, args.out, args.seed)
    except ConfigError as exc:
        print(f"eigenbound: {exc}", file=sys.stderr)
        return 1
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
