"""Experiment orchestration: the ``regfactor`` command-line interface.

Subcommands: enumerate, sample, factors, reduce, variance-report,
trace-stats, proofcheck, verify-identities.  All randomness is keyed by
(seed, chain index); samples are partitioned over a fixed number of
chains independent of the worker thread count, so outputs depend only on
the configuration.  Exit status: 0 success, 2 validation error, 3
numeric failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import evaluate, expand_subgraph_count, expr_to_text, gamma_expr, reduce_full
from .ensemble import EnsembleSpec, enumerate_regular, sample_stream
from .errors import IoFailure, RegfactorError
from .factors import EdgeField, gamma, normalization_constants, trace_stat
from .graphs import (
    Graph,
    count_subgraphs,
    cycle_graph,
    graph_to_text,
    parse_graph_stream,
    path_graph,
    shape_from_name,
)
from .proofcheck import LEMMA_IDS, run_battery
from .rng import mix_seed
from .stats import (
    MomentAccumulator,
    four_cycle_count,
    ks_normal_distance,
    normality_report,
    predicted_variance,
    triangle_count,
)

log = logging.getLogger("regfactor")

NUM_CHAINS = 8


@dataclass
class ExperimentConfig:
    subcommand: str
    n_list: list[int] = field(default_factory=list)
    d: int | None = None
    d_rule: str = "fixed"
    shapes: list[str] = field(default_factory=list)
    samples: int = 0
    seed: int = 0
    threads: int = 1
    out: str | None = None
    format: str = "csv"
    count: int = 1
    burn_in: int | None = None
    thin: int | None = None
    trials: int = 1_000_000
    lemma: str = "all"
    graph_file: str | None = None
    shape_edges: str | None = None
    l_list: list[int] = field(default_factory=lambda: [3, 4, 5])


def resolve_degree(n: int, rule: str, d: int | None) -> int:
    if rule == "fixed":
        if d is None:
            raise ValueError("--d is required with --d-rule fixed")
        return d  # infeasible fixed degrees are a validation error downstream
    if rule == "half":
        dd = n // 2
    elif rule == "n-over-log":
        dd = max(1, round(n / math.log(n)))
    else:
        raise ValueError(f"unknown d-rule {rule!r}")
    if (n * dd) % 2:
        log.warning("adjusting d from %d to %d to keep n*d even", dd, dd - 1)
        dd -= 1
    return dd


# ---------------------------------------------------------------------------
# deterministic parallel sample farming


def farm_samples(n: int, d: int, total: int, seed: int, threads: int,
                 per_sample, burn_in: int | None = None,
                 thin: int | None = None) -> list:
    """Apply ``per_sample`` to ``total`` graphs split over NUM_CHAINS
    chains keyed by (seed, chain index, n, d); results come back in chain
    order, so the output is independent of the thread count."""
    counts = [total // NUM_CHAINS + (1 if c < total % NUM_CHAINS else 0)
              for c in range(NUM_CHAINS)]

    def run_chain(c: int) -> list:
        if counts[c] == 0:
            return []
        spec = EnsembleSpec(n=n, d=d, seed=mix_seed(seed, c, n, d),
                            burn_in_swaps=burn_in, thinning_swaps=thin)
        return [per_sample(g) for g in sample_stream(spec, counts[c])]

    if threads <= 1:
        chunks = [run_chain(c) for c in range(NUM_CHAINS)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(run_chain, range(NUM_CHAINS)))
    return [row for chunk in chunks for row in chunk]


# ---------------------------------------------------------------------------
# report emission


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def emit_report(rows: list[dict], fmt: str, path: str | None):
    """Write rows as CSV (fixed column order from the first row) or JSON."""
    try:
        if fmt == "csv":
            cols = list(rows[0].keys()) if rows else []
            lines = [",".join(cols)]
            for r in rows:
                lines.append(",".join(_fmt(r[c]) for c in cols))
            text = "\n".join(lines) + "\n"
        elif fmt == "json":
            text = json.dumps(
                [{k: (format(v, ".17g") if isinstance(v, float) else v)
                  for k, v in r.items()} for r in rows],
                indent=1) + "\n"
        else:
            raise ValueError(f"unknown format {fmt!r}")
        if path:
            Path(path).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def parse_report(text: str) -> list[dict]:
    """Inverse of csv emit_report (values come back as strings)."""
    lines = [ln for ln in text.splitlines() if ln]
    cols = lines[0].split(",")
    return [dict(zip(cols, ln.split(","))) for ln in lines[1:]]


def write_manifest(path: str, cfg_args: dict, t0: float):
    manifest = {
        "version": __version__,
        "config": cfg_args,
        "wall_clock_seconds": round(time.time() - t0, 3),
    }
    Path(path + ".manifest.json").write_text(
        json.dumps(manifest, indent=1, default=str) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# subcommand implementations


def _cmd_enumerate(cfg: ExperimentConfig) -> int:
    n, d = cfg.n_list[0], resolve_degree(cfg.n_list[0], cfg.d_rule, cfg.d)
    records = [graph_to_text(g) for g in enumerate_regular(n, d)]
    text = "".join(records)
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_sample(cfg: ExperimentConfig) -> int:
    n, d = cfg.n_list[0], resolve_degree(cfg.n_list[0], cfg.d_rule, cfg.d)
    spec = EnsembleSpec(n=n, d=d, seed=cfg.seed, burn_in_swaps=cfg.burn_in,
                        thinning_swaps=cfg.thin)
    text = "".join(graph_to_text(g) for g in sample_stream(spec, cfg.count))
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_factors(cfg: ExperimentConfig) -> int:
    if not cfg.graph_file:
        raise ValueError("--graph FILE is required")
    if cfg.d is None:
        raise ValueError("--d is required")
    graphs = parse_graph_stream(Path(cfg.graph_file).read_text(encoding="utf-8"))
    rows = []
    for gi, g in enumerate(graphs):
        if not isinstance(g, Graph):
            raise ValueError("factor evaluation needs simple graphs")
        fld = EdgeField(g, d=cfg.d)
        for name in cfg.shapes:
            h = shape_from_name(name)
            fv = gamma(g, h, field=fld)
            row = {"graph": gi, "shape": name, "raw": fv.raw_float}
            try:
                row["normalized"] = fv.normalized
            except RegfactorError:
                row["normalized"] = ""
            rows.append(row)
    emit_report(rows, cfg.format, cfg.out)
    return 0


def _parse_edge_list(text: str) -> Graph:
    """'0-1,1-2' or a named shape like C4."""
    try:
        return shape_from_name(text)
    except ValueError:
        pass
    edges = []
    for part in text.replace(";", ",").split(","):
        u, v = part.split("-")
        edges.append((int(u), int(v)))
    return Graph(max(x for e in edges for x in e) + 1, edges)


def _cmd_reduce(cfg: ExperimentConfig) -> int:
    if not cfg.shape_edges:
        raise ValueError("--shape EDGELIST is required")
    h = _parse_edge_list(cfg.shape_edges)
    text = expr_to_text(reduce_full(gamma_expr(h)))
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _count_stat(h: Graph, name: str):
    if name == "C3":
        return triangle_count
    if name == "C4":
        return four_cycle_count
    return lambda g: count_subgraphs(g, h)


def _cmd_variance_report(cfg: ExperimentConfig) -> int:
    if len(cfg.shapes) != 1:
        raise ValueError("variance-report takes exactly one --shape")
    name = cfg.shapes[0]
    h = shape_from_name(name)
    stat = _count_stat(h, name)
    rows = []
    for n in cfg.n_list:
        d = resolve_degree(n, cfg.d_rule, cfg.d)
        xs = np.array(farm_samples(n, d, cfg.samples, cfg.seed, cfg.threads,
                                   stat, cfg.burn_in, cfg.thin), dtype=np.float64)
        pred = predicted_variance(h, n, d)
        emp = float(xs.var(ddof=1))
        acc = MomentAccumulator(1, max_degree=4)
        for v in xs:
            acc.add([v])
        rep = normality_report(acc, xs[:, None], min_samples=2)
        rows.append({
            "n": n, "d": d, "p": d / (n - 1),
            "empirical_var": emp,
            "predicted_var": pred.leading_value,
            "ratio": emp / pred.leading_value,
            "ks_distance": rep.ks_distance[0],
            "skew": rep.skewness[0],
            "ex_kurtosis": rep.ex_kurtosis[0],
        })
    emit_report(rows, cfg.format, cfg.out)
    return 0


def _cmd_trace_stats(cfg: ExperimentConfig) -> int:
    n = cfg.n_list[0]
    d = resolve_degree(n, cfg.d_rule, cfg.d)
    ells = cfg.l_list

    def per_sample(g: Graph) -> dict:
        a = g.adjacency_matrix(dtype=np.float64)
        fld = EdgeField(g, d=d)
        out = {}
        for ell in ells:
            out[f"tr_A{ell}"] = float(np.trace(np.linalg.matrix_power(a, ell)))
            out[f"trace_stat{ell}"] = trace_stat(g, ell, field=fld)
        return out

    recs = farm_samples(n, d, cfg.samples, cfg.seed, cfg.threads,
                        per_sample, cfg.burn_in, cfg.thin)
    rows = [{"sample": i, **r} for i, r in enumerate(recs)]
    emit_report(rows, cfg.format, cfg.out)
    return 0


def _cmd_proofcheck(cfg: ExperimentConfig) -> int:
    lemmas = LEMMA_IDS if cfg.lemma == "all" else (cfg.lemma,)
    rows = []
    ok = True
    for lemma in lemmas:
        r = run_battery(lemma, trials=cfg.trials, seed=cfg.seed)
        rows.append({"lemma": r.lemma, "trials": r.trials,
                     "worst_slack": r.worst_slack,
                     "violations": r.violations,
                     "status": "pass" if r.passed else "FAIL"})
        ok = ok and r.passed
    emit_report(rows, cfg.format, cfg.out)
    return 0 if ok else 3


def _cmd_verify_identities(cfg: ExperimentConfig) -> int:
    """Quick oracle-backed identity battery; prints one line per check."""
    failures = 0

    def report(name: str, passed: bool):
        nonlocal failures
        print(f"{'PASS' if passed else 'FAIL'}  {name}")
        failures += 0 if passed else 1

    gs = list(enumerate_regular(6, 3))
    fe = [EdgeField(g, d=3) for g in gs]
    k2 = path_graph(2)
    p3 = path_graph(3)
    vals = [gamma(g, k2, field=f).raw_float for g, f in zip(gs, fe)]
    report("gamma_K2 == 0 on G(6,3)", max(abs(v) for v in vals) < 1e-9)
    vals = [gamma(g, p3, field=f).raw_float for g, f in zip(gs, fe)]
    report("gamma_P3 == -n(n-1)/2 on G(6,3)", max(abs(v + 15.0) for v in vals) < 1e-9)

    expr = expand_subgraph_count(cycle_graph(3))
    ok = all(abs(evaluate(expr, g, d=3) - triangle_count(g)) < 1e-9 for g in gs)
    report("expansion X_C3 == direct count on G(6,3)", ok)

    red = reduce_full(gamma_expr(path_graph(4)))
    ok = True
    for g, f in zip(gs[:20], fe[:20]):
        lhs = gamma(g, path_graph(4), field=f).raw_float
        ok = ok and abs(lhs - evaluate(red, g, d=3)) < 1e-9
    report("reduce_full(gamma_P4) identity on G(6,3)", ok)

    from .factors import walk_types
    table = walk_types(4)
    report("walk table C4 coefficient == 8", table.cycle_coefficient() == 8)
    return 0 if failures == 0 else 3


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--config", type=str, default=None,
                   help="flat key=value or JSON file; flags override")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="regfactor")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("enumerate", help="list every graph of G(n,d)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("sample", help="draw graphs from the swap chain")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--burn-in", type=int, default=None)
    p.add_argument("--thin", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("factors", help="evaluate graph factors on stored graphs")
    p.add_argument("--graph", type=str, required=True)
    p.add_argument("--shapes", type=str, required=True)
    p.add_argument("--d", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("reduce", help="reduce a factor to the connected min-degree-2 basis")
    p.add_argument("--shape", type=str, required=True,
                   help="edge list like 0-1,1-2 or a name like P4")
    _add_common(p)

    p = sub.add_parser("variance-report", help="empirical vs predicted Var[X_H]")
    p.add_argument("--shape", type=str, required=True)
    p.add_argument("--n-list", type=str, required=True)
    p.add_argument("--d-rule", choices=("fixed", "half", "n-over-log"), default="half")
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--burn-in", type=int, default=None)
    p.add_argument("--thin", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("trace-stats", help="adjacency trace statistics per sample")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--d-rule", choices=("fixed", "half", "n-over-log"), default="fixed")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--l-list", type=str, default="3,4,5")
    p.add_argument("--burn-in", type=int, default=None)
    p.add_argument("--thin", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("proofcheck", help="inequality validation batteries")
    p.add_argument("--lemma", type=str, default="all")
    p.add_argument("--trials", type=int, default=1_000_000)
    _add_common(p)

    p = sub.add_parser("verify-identities", help="fast oracle identity battery")
    _add_common(p)
    return ap


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    merged: dict = {}
    if getattr(args, "config", None):
        text = Path(args.config).read_text(encoding="utf-8")
        if text.lstrip().startswith("{"):
            merged.update(json.loads(text))
        else:
            for line in text.splitlines():
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                k, _, v = line.partition("=")
                merged[k.strip()] = v.strip()
    for k, v in vars(args).items():
        if v is not None and k != "config":
            merged[k] = v

    def geti(key, default=None):
        v = merged.get(key, default)
        return None if v is None else int(v)

    threads = geti("threads")
    env_threads = os.environ.get("REGFACTOR_THREADS")
    if threads is None:
        threads = int(env_threads) if env_threads else 1

    cfg = ExperimentConfig(subcommand=merged["subcommand"])
    cfg.seed = geti("seed", 0)
    cfg.threads = threads
    cfg.out = merged.get("out")
    cfg.format = merged.get("format", "csv")
    if "n" in merged:
        cfg.n_list = [int(merged["n"])]
    if "n_list" in merged:
        cfg.n_list = [int(x) for x in str(merged["n_list"]).split(",")]
    cfg.d = geti("d")
    cfg.d_rule = merged.get("d_rule", "fixed" if cfg.d is not None else "half")
    if "shapes" in merged:
        cfg.shapes = [s.strip() for s in str(merged["shapes"]).split(",")]
    if "shape" in merged:
        val = str(merged["shape"])
        if cfg.subcommand == "reduce":
            cfg.shape_edges = val
        else:
            cfg.shapes = [val]
    cfg.samples = geti("samples", 0)
    cfg.count = geti("count", 1)
    cfg.burn_in = geti("burn_in")
    cfg.thin = geti("thin")
    cfg.trials = geti("trials", 1_000_000)
    cfg.lemma = str(merged.get("lemma", "all"))
    cfg.graph_file = merged.get("graph")
    if "l_list" in merged:
        cfg.l_list = [int(x) for x in str(merged["l_list"]).split(",")]
    return cfg


_DISPATCH = {
    "enumerate": _cmd_enumerate,
    "sample": _cmd_sample,
    "factors": _cmd_factors,
    "reduce": _cmd_reduce,
    "variance-report": _cmd_variance_report,
    "trace-stats": _cmd_trace_stats,
    "proofcheck": _cmd_proofcheck,
    "verify-identities": _cmd_verify_identities,
}


def run_experiment(cfg: ExperimentConfig, cfg_dict: dict | None = None) -> int:
    t0 = time.time()
    status = _DISPATCH[cfg.subcommand.replace("_", "-")](cfg)
    if cfg.out:
        write_manifest(cfg.out, cfg_dict or cfg.__dict__, t0)
    return status


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        cfg = _config_from_args(args)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        log.error("invalid configuration: %s", exc)
        return 2
    try:
        return run_experiment(cfg, vars(args))
    except RegfactorError as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return 2
    except (ValueError, OSError) as exc:
        log.error("%s", exc)
        return 2
    except (ArithmeticError, AssertionError) as exc:
        log.error("numeric failure: %s", exc)
        return 3


if __name__ == "__main__":
    sys.exit(main())
