"""Named experiments: configuration, dispatch and self-describing reports."""

import os
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .cauchy import cauchy_eps, cauchy_pv
from .errors import DomainError
from .geometry import covering_trial
from .hz import HZParams, verify_not_generated, verify_orthogonality, g_alpha_zeros, interior_zero_exists
from .io import load_measure, write_csv
from .p2space import gram, point_eval_norm, sub_gram, wandering_dim
from .plemelj import default_tol, plemelj_scan

COMMANDS = ("cauchy-eval", "plemelj-scan", "bpe-map", "p2-wandering", "hz-verify", "covering-test")
OUTPUT_DIR_ENV = "NTLIMITS_OUTPUT_DIR"


@dataclass
class ExperimentConfig:
    command: str
    measure_path: str = None
    params: dict = field(default_factory=dict)
    output_path: str = None
    seed: int = 0

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise DomainError("seed must be an unsigned integer")


def default_output_dir():
    return os.environ.get(OUTPUT_DIR_ENV) or None


def _check(name, value, tol, ok, oracle=""):
    return {"name": name, "value": value, "tolerance": tol, "oracle": oracle, "pass": bool(ok)}


def run_experiment(cfg):
    """Run one experiment; the report echoes the config and lists every check.

    Reports are deterministic for a fixed config. Wall time is recorded only
    when ``params["timing"]`` is true.
    """
    start = time.perf_counter()
    runner = _RUNNERS[cfg.command]
    results, checks = runner(cfg)
    report = {
        "ntlimits_version": __version__,
        "config": asdict(cfg),
        "results": results,
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
    }
    if cfg.params.get("timing"):
        report["wall_time_s"] = time.perf_counter() - start
    return report


def _measure(cfg):
    if not cfg.measure_path:
        raise DomainError(f"{cfg.command} needs a measure spec")
    return load_measure(cfg.measure_path)


def _run_cauchy_eval(cfg):
    mu = _measure(cfg)
    z = complex(cfg.params["z"])
    eps = cfg.params.get("eps")
    val = cauchy_pv(mu, z) if eps is None else cauchy_eps(mu, z, float(eps))
    results = {"z": z, "eps": eps, "value": val.value, "method": val.method, "est_error": val.est_error}
    bound = 1e-13 if val.method == "closed_form" else 1e-6
    checks = [_check("error_estimate", val.est_error, bound, val.est_error <= bound, "internal error budget")]
    return results, checks


def _run_plemelj_scan(cfg):
    mu = _measure(cfg)
    p = cfg.params
    zeta = complex(np.exp(1j * float(p.get("zeta", 0.0))))
    tol = p.get("tol") or default_tol(mu)
    rep = plemelj_scan(mu, zeta, float(p.get("r", 0.5)), p.get("deltas", [1e-2, 1e-3, 1e-4]), tol)
    records = []
    checks = []
    target = rep.h_at_zeta * np.conj(zeta)
    for rec in rep.records:
        records.append({
            "delta": rec.delta, "inner_fit": rec.inner_fit, "outer_fit": rec.outer_fit,
            "pv_at_zeta": rec.pv_at_zeta, "predicted_inner": rec.predicted_inner,
            "predicted_outer": rec.predicted_outer, "agree_fraction": rec.agree_fraction,
            "flagged_points": rec.flagged_points, "cover_proxy": rec.cover_proxy,
        })
        checks.append(_check(f"inner_limit[delta={rec.delta:g}]", abs(rec.inner_fit - rec.predicted_inner),
                             10 * tol, abs(rec.inner_fit - rec.predicted_inner) <= 10 * tol,
                             "C(nu)(zeta) + h(zeta) conj(zeta) / 2"))
        checks.append(_check(f"outer_limit[delta={rec.delta:g}]", abs(rec.outer_fit - rec.predicted_outer),
                             10 * tol, abs(rec.outer_fit - rec.predicted_outer) <= 10 * tol,
                             "C(nu)(zeta) - h(zeta) conj(zeta) / 2"))
        checks.append(_check(f"jump[delta={rec.delta:g}]", abs(rec.jump - target), 10 * tol,
                             abs(rec.jump - target) <= 10 * tol, "h(zeta) conj(zeta)"))
    results = {"zeta": zeta, "r": rep.r, "tol": tol, "h_at_zeta": rep.h_at_zeta,
               "delta_list": rep.delta_list, "records": records}
    return results, checks


def parse_grid(spec):
    """``"x0:x1:nx,y0:y1:ny"`` -> flattened complex grid (row-major in y then x)."""
    try:
        xs, ys = spec.split(",")
        x0, x1, nx = xs.split(":")
        y0, y1, ny = ys.split(":")
        gx = np.linspace(float(x0), float(x1), int(nx))
        gy = np.linspace(float(y0), float(y1), int(ny))
    except ValueError:
        raise DomainError(f"grid spec must look like x0:x1:nx,y0:y1:ny, got {spec!r}") from None
    return (gx[None, :] + 1j * gy[:, None]).ravel()


def _run_bpe_map(cfg):
    mu = _measure(cfg)
    p = cfg.params
    nmax = int(p.get("nmax", 40))
    n_list = [int(n) for n in p.get("n_list", [n for n in (10, 20, 40) if n <= nmax] or [nmax])]
    grid = parse_grid(p.get("grid", "-0.9:0.9:7,-0.9:0.9:7"))
    big = gram(mu, max(n_list))
    table = {f"k_{n}": point_eval_norm(sub_gram(big, n), grid) for n in n_list}
    mono = all(np.all(table[f"k_{b}"] >= table[f"k_{a}"] * (1 - 1e-8)) for a, b in zip(n_list, n_list[1:]))
    results = {"n_list": n_list, "points": grid, **table}
    checks = [_check("k_n_nondecreasing", None, 1e-8, mono, "nested spans")]
    return results, checks


def _run_p2_wandering(cfg):
    mu = _measure(cfg)
    p = cfg.params
    a = complex(p.get("a", 0.0))
    svtol = float(p.get("svtol", 1e-8))
    n = int(p.get("n", 10))
    res = wandering_dim(gram(mu, n), a, svtol)
    results = {"a": a, "n": n, "dim": res.dim, "singular_values": res.singular_values,
               "wandering_vector": res.vector}
    return results, [_check("wandering_dim", res.dim, 1, res.dim == 1, "dim(M / zM) = 1")]


def _run_hz_verify(cfg):
    p = cfg.params
    hp = HZParams(complex(p.get("a", 0.9)), int(p.get("alpha", 5)), float(p.get("c", 0.3)))
    n = int(p.get("n", 20))
    orth = verify_orthogonality(hp, min(n, 10))
    checks = []
    for fam, vals in orth.families.items():
        worst = max(vals, default=0.0)
        tol = orth.tolerances[fam]
        checks.append(_check(f"orthogonality_{fam}", worst, tol, worst < tol, "harmonic-measure mean value"))
    results = {"params": {"a": hp.a, "alpha": hp.alpha, "c": hp.c},
               "zeros": g_alpha_zeros(hp) if hp.a != 0 else [],
               "interior_zero_exists": interior_zero_exists(hp),
               "orthogonality": orth.families}
    if interior_zero_exists(hp):
        n_list = sorted({5, 10, n, 2 * n})
        ng = verify_not_generated(hp, n_list, (10, 20, 30))
        results["not_generated"] = {"n_list": ng.n_list, "d1": ng.d1, "d2": ng.d2, "d2_bound": ng.d2_bound,
                                    "wandering_dim": ng.wandering, "cosine": ng.cosine, "z1": ng.z1}
        for name, ok in ng.checks().items():
            checks.append(_check(name, None, None, ok, "cyclicity evidence"))
    return results, checks


def _run_covering(cfg):
    p = cfg.params
    rng = np.random.default_rng(cfg.seed)
    n_inst = int(p.get("instances", 100))
    n_disks = int(p.get("disks", 200))
    n_bdry = int(p.get("boundary_points", 1000))
    outcomes = [covering_trial(rng, n_disks, n_bdry) for _ in range(n_inst)]
    dis = sum(d for d, _ in outcomes)
    cov = sum(c for _, c in outcomes)
    results = {"instances": n_inst, "disjoint": dis, "covered": cov}
    checks = [_check("pairwise_disjoint", dis, n_inst, dis == n_inst, "exact predicate"),
              _check("tripled_cover", cov, n_inst, cov == n_inst, "exact predicate")]
    return results, checks


_RUNNERS = {
    "cauchy-eval": _run_cauchy_eval,
    "plemelj-scan": _run_plemelj_scan,
    "bpe-map": _run_bpe_map,
    "p2-wandering": _run_p2_wandering,
    "hz-verify": _run_hz_verify,
    "covering-test": _run_covering,
}


SCAN_COLUMNS = ["delta", "inner_fit_re", "inner_fit_im", "outer_fit_re", "outer_fit_im", "agree_fraction"]


def emit_plot_data(report, out_dir):
    """Write one CSV per scan or map section of ``report``; returns the written paths."""
    os.makedirs(out_dir, exist_ok=True)
    cmd = report["config"]["command"]
    res = report.get("results", {})
    paths = []
    if cmd == "plemelj-scan":
        rows = [[r["delta"], complex(r["inner_fit"]).real, complex(r["inner_fit"]).imag,
                 complex(r["outer_fit"]).real, complex(r["outer_fit"]).imag, r["agree_fraction"]]
                for r in res.get("records", [])]
        paths.append(write_csv(os.path.join(out_dir, "plemelj_scan.csv"), SCAN_COLUMNS, rows,
                               "delta; fitted inner/outer limits (re, im); fraction of unflagged samples"))
    elif cmd == "bpe-map":
        n_list = res.get("n_list", [])
        cols = ["re", "im"] + [f"k_{n}" for n in n_list]
        pts = res.get("points", [])
        rows = [[complex(z).real, complex(z).imag] + [float(res[f"k_{n}"][i]) for n in n_list]
                for i, z in enumerate(pts)]
        paths.append(write_csv(os.path.join(out_dir, "bpe_map.csv"), cols, rows,
                               "re, im of lambda; k_n(lambda) = sup |p(lambda)| / ||p|| over deg p <= n"))
    return paths
