"""Command-line interface.

Each subcommand writes its data products plus a ``config.json`` that re-runs
it exactly: ``somrel <command> --config out/config.json --out elsewhere``.

Exit status: 0 success, 2 configuration error, 3 data error, 1 anything else.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import reports
from .bootstrap import (
    ReplicateSet,
    derive_seed,
    load_replicate_set,
    run_replicates,
    save_replicate_set,
    shared_initial_codebook,
)
from .config import RunConfig
from .datasets import GENERATORS, save_csv
from .errors import ConfigError, DataFormatError, DegenerateDistortionError, InvalidArgumentError
from .reliability import (
    all_pairs,
    b_sufficiency,
    cv_sweep,
    neighborhood_spec,
    pair_stabilities,
    sample_pairs,
    significant_fraction,
    stab_histogram,
)
from .som import MapTopology, best_matching_units, ss_intra, train_som

log = logging.getLogger("somrel")

EXIT_OK, EXIT_INTERNAL, EXIT_CONFIG, EXIT_DATA = 0, 1, 2, 3

_TRAIN_KEY = 3


# ------------------------------------------------------------------ parsing


def _int_list(text: str) -> list[int]:
    """``0,1,2`` or ``20:200:20`` (inclusive stop)."""
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else 1
            return list(range(start, stop + 1, step))
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers like '0,1,2' or '20:200:20', got {text!r}")


def parse_sizes(text: str) -> list[str]:
    """``string:3-15`` / ``grid:4-9`` ranges, or a comma list of topologies."""
    text = text.strip()
    if "-" in text and "," not in text:
        kind, _, span = text.partition(":")
        try:
            lo, hi = (int(v) for v in span.split("-"))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad size range {text!r}") from None
        if kind == "string":
            return [f"string:{k}" for k in range(lo, hi + 1)]
        if kind == "grid":
            return [f"grid:{k}x{k}" for k in range(lo, hi + 1)]
        raise argparse.ArgumentTypeError(f"bad size range {text!r}")
    return [s.strip() for s in text.split(",") if s.strip()]


def _columns(text: str) -> list:
    return [int(c) if c.strip().lstrip("-").isdigit() else c.strip() for c in text.split(",")]


def _add_common(p: argparse.ArgumentParser):
    S = argparse.SUPPRESS
    g = p.add_argument_group("run")
    g.add_argument("--config", default=S, help="resolved config.json from an earlier run")
    g.add_argument("--out", default=S, help="output directory (default: somrel-out)")
    g.add_argument("--workers", type=int, default=S, help="threads for replicate training")
    g.add_argument("--cache", default=S, help="directory caching trained replicates")
    g.add_argument("-v", "--verbose", action="store_true", default=S)

    g = p.add_argument_group("dataset")
    g.add_argument("--data", default=S, choices=sorted(GENERATORS), help="synthetic generator")
    g.add_argument("--csv", default=S, help="numeric CSV file")
    g.add_argument("--n", type=int, default=S, help="generator size (per cluster for gauss*)")
    g.add_argument("--data-seed", type=int, default=S)
    g.add_argument("--delimiter", default=S)
    g.add_argument("--no-header", action="store_true", default=S)
    g.add_argument("--columns", type=_columns, default=S, help="comma list of indices or names")
    g.add_argument("--label-column", default=S, help="column of row labels (e.g. country names)")
    g.add_argument("--zscore", action="store_true", default=S)

    g = p.add_argument_group("map and training")
    g.add_argument("--topology", default=S, help="string:L or grid:RxC (default grid:7x7)")
    g.add_argument("--steps", type=int, default=S, help="total training steps")
    g.add_argument("--steps-per-obs", type=float, default=S, help="training steps per observation")
    g.add_argument("--alpha-start", type=float, default=S)
    g.add_argument("--alpha-end", type=float, default=S)
    g.add_argument("--radius-start", type=int, default=S)
    g.add_argument("--radius-end", type=int, default=S)

    g = p.add_argument_group("bootstrap")
    g.add_argument("-B", "--replicates", type=int, default=S, dest="B")
    g.add_argument("--mode", choices=["CB", "LB", "LPB"], default=S)
    g.add_argument("--perturbation", type=float, default=S, help="LPB noise, fraction of column std")
    g.add_argument("--seed", type=int, default=S, help="master seed")
    g.add_argument("--ss-target", choices=["bootstrap", "original"], default=S)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="somrel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    S = argparse.SUPPRESS

    p = sub.add_parser("train", help="train one map on the full dataset")
    _add_common(p)

    p = sub.add_parser("cv-sweep", help="CV of the distortion across map sizes")
    _add_common(p)
    p.add_argument("--sizes", type=parse_sizes, default=S, help="e.g. string:3-15 or grid:4-9")

    for name, helptext in (("stab", "pair stability table with verdicts"),
                           ("stab-hist", "stability histograms against the unorganized map")):
        p = sub.add_parser(name, help=helptext)
        _add_common(p)
        p.add_argument("--radii", type=_int_list, default=S, help="e.g. 0,1,2")
        p.add_argument("--subsample", type=int, default=S, dest="pair_subsample",
                       help="number of random pairs instead of all pairs")
        p.add_argument("--pair-seed", type=int, default=S)
        if name == "stab":
            p.add_argument("--pairs", default=S, help="'all' or a list like 0-1,5-9")
            p.add_argument("--level", type=float, default=S)
            p.add_argument("--edge-corrected", action="store_true", default=S,
                           help="test against the border-corrected null probability")
        else:
            p.add_argument("--bins", type=int, default=S)

    p = sub.add_parser("b-sufficiency", help="spread of the CV estimate versus B")
    _add_common(p)
    p.add_argument("--b-values", type=_int_list, default=S, help="e.g. 20:200:20")
    p.add_argument("--repeats", type=int, default=S, help="independent estimates per B")

    p = sub.add_parser("generate", help="write a synthetic dataset to CSV")
    _add_common(p)
    return parser


_DATA_KEYS = {
    "data": "generator", "csv": "csv", "n": "n", "data_seed": "seed", "delimiter": "delimiter",
    "columns": "columns", "label_column": "label_column", "zscore": "zscore",
}
_SCHED_KEYS = {
    "steps": "total_steps", "steps_per_obs": "steps_per_obs", "alpha_start": "alpha_start",
    "alpha_end": "alpha_end", "radius_start": "radius_start", "radius_end": "radius_end",
}
_RUN_KEYS = {"config", "out", "workers", "cache", "verbose"}


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Start from ``--config`` (if any) and apply every flag given explicitly."""
    given = vars(args)
    cfg = RunConfig.load(given["config"]) if "config" in given else RunConfig()
    cfg.command = args.command
    for key, value in given.items():
        if key in _RUN_KEYS or key == "command":
            continue
        if key in _DATA_KEYS:
            setattr(cfg.data, _DATA_KEYS[key], value)
            if key == "data":
                cfg.data.csv = None
            elif key == "csv":
                cfg.data.generator = None
        elif key == "no_header":
            cfg.data.header = False
        elif key in _SCHED_KEYS:
            setattr(cfg.schedule, _SCHED_KEYS[key], value)
            if key == "steps":
                cfg.schedule.steps_per_obs = None
        elif key == "perturbation":
            cfg.perturbation_scale = value
        elif key == "seed":
            cfg.master_seed = value
        else:
            setattr(cfg, key, value)
    cfg.validate()
    return cfg


# ----------------------------------------------------------------- commands


def _replicates(cfg: RunConfig, data, cache: str | None, workers: int) -> ReplicateSet:
    top = cfg.map_topology()
    sched = cfg.schedule.resolve(top, data.n)
    plan = cfg.plan()
    if cache and (Path(cache) / "manifest.json").exists():
        rset = load_replicate_set(cache, data)
        if (rset.topology, rset.schedule, rset.plan) != (top, sched, plan):
            raise ConfigError(f"cache {cache} was built with different settings; use another directory")
        log.info("loaded %d cached replicates from %s", rset.B, cache)
        return rset
    rset = run_replicates(data, top, sched, plan, workers)
    if cache:
        save_replicate_set(rset, cache)
    return rset


def cmd_train(cfg: RunConfig, out: Path, workers: int, cache):
    data = cfg.data.load()
    top = cfg.map_topology()
    sched = cfg.schedule.resolve(top, data.n)
    init = shared_initial_codebook(data, top, cfg.master_seed)
    train_seed = derive_seed(cfg.master_seed, _TRAIN_KEY)
    codebook = train_som(data, init, sched, train_seed)
    bmu = best_matching_units(codebook, data)
    coords = top.coordinates

    dims = [f"x{k}" for k in range(data.dim)]
    save_csv(data, out / "data.csv")
    reports.write_tsv(
        out / "codebook.csv", ["unit", "row", "col"] + dims,
        ([u, coords[u, 0], coords[u, 1], *codebook.centroids[u]] for u in range(top.n_units)),
        delimiter=",",
    )
    reports.write_tsv(
        out / "assignments.csv", ["obs", "unit", "row", "col"],
        ([i, u, coords[u, 0], coords[u, 1]] for i, u in enumerate(bmu)),
        delimiter=",",
    )
    value = ss_intra(codebook, data)
    reports.write_json(out / "train.json", "train", {
        "topology": str(top),
        "n": data.n,
        "dim": data.dim,
        "schedule": sched.to_dict(),
        "init_seed": derive_seed(cfg.master_seed, 0),
        "train_seed": train_seed,
        "ss_intra": value,
        "mse": value / data.n,
    })
    print(f"ss_intra\t{value!r}")


def cmd_cv_sweep(cfg: RunConfig, out: Path, workers: int, cache):
    data = cfg.data.load()
    sizes = cfg.map_sizes() or [cfg.map_topology()]
    plan = cfg.plan()
    points = cv_sweep(data, sizes, lambda top, n: cfg.schedule.resolve(top, n), plan, workers)
    reports.write_tsv(out / "cv_sweep.tsv", reports.CV_SWEEP_COLUMNS, reports.cv_sweep_rows(points))
    reports.write_json(out / "cv_sweep.json", "cv-sweep", {
        "config": cfg.to_dict(),
        "plan": plan.to_dict(),
        "replicate_seeds": list(points[0].seeds),
        "points": [
            {"topology": str(p.topology), "units": p.n_units,
             "schedule": cfg.schedule.resolve(p.topology, data.n).to_dict(), **p.report.to_dict()}
            for p in points
        ],
    })
    for p in points:
        print(f"{p.topology}\t{p.cv:.3f}")


def _parse_pairs(text: str, n: int) -> np.ndarray:
    out = []
    for item in text.split(","):
        a, sep, b = item.strip().partition("-")
        if not sep:
            raise ConfigError(f"bad pair {item!r}; expected i-j")
        try:
            out.append((int(a), int(b)))
        except ValueError:
            raise ConfigError(f"bad pair {item!r}; expected i-j") from None
    pairs = np.array(out, dtype=np.int64)
    if pairs.min() < 0 or pairs.max() >= n or np.any(pairs[:, 0] == pairs[:, 1]):
        raise ConfigError(f"pairs must be distinct observations in [0, {n})")
    return pairs


def _select_pairs(cfg: RunConfig, n: int) -> np.ndarray:
    if cfg.pairs != "all":
        return _parse_pairs(cfg.pairs, n)
    if cfg.pair_subsample is not None:
        return sample_pairs(n, cfg.pair_subsample, cfg.pair_seed)
    return all_pairs(n)


def _check_radii(cfg: RunConfig, edge_corrected: bool):
    top = cfg.map_topology()
    for r in cfg.radii:
        spec = neighborhood_spec(top, r)
        if (spec.p_edge if edge_corrected else spec.p_plain) >= 1:
            raise ConfigError(f"radius {r} covers the whole {top} map; nothing to test against")


def cmd_stab(cfg: RunConfig, out: Path, workers: int, cache):
    _check_radii(cfg, cfg.edge_corrected)
    data = cfg.data.load()
    rset = _replicates(cfg, data, cache, workers)
    pairs = _select_pairs(cfg, data.n)
    table = pair_stabilities(rset, cfg.radii, pairs)
    by_radius, summary = {}, []
    for r in cfg.radii:
        spec = neighborhood_spec(rset.topology, r)
        p = float(spec.p_edge if cfg.edge_corrected else spec.p_plain)
        by_radius[r] = table.records(r, p, cfg.level)
        summary.append({"r": r, "v": spec.v, "p": p, **significant_fraction(by_radius[r])})
    labels = None
    if cfg.data.label_column is not None and data.labels is not None:
        labels = [str(v) for v in data.labels]
    reports.write_tsv(
        out / "stab.tsv", reports.stab_table_header(cfg.radii),
        reports.stab_table_rows(by_radius, labels),
    )
    reports.write_json(out / "stab.json", "stab", {
        "config": cfg.to_dict(),
        "replicate_seeds": rset.seeds(),
        "pairs": int(len(pairs)),
        "radii": summary,
    })
    for s in summary:
        print(f"r={s['r']}\tmarked={s['marked']:.1f}%")


def cmd_stab_hist(cfg: RunConfig, out: Path, workers: int, cache):
    _check_radii(cfg, True)
    data = cfg.data.load()
    rset = _replicates(cfg, data, cache, workers)
    if cfg.pair_subsample is not None:
        U = rset.topology.n_units
        if cfg.pair_subsample < 10 * U:
            log.warning("pair subsample %d is small relative to %d map units", cfg.pair_subsample, U)
        pairs = sample_pairs(data.n, cfg.pair_subsample, cfg.pair_seed)
    else:
        pairs = all_pairs(data.n)
    table = pair_stabilities(rset, cfg.radii, pairs)
    hists = [stab_histogram(rset, r, cfg.bins, pair_subsample=cfg.pair_subsample, table=table)
             for r in cfg.radii]
    reports.write_tsv(out / "stab_hist.tsv", reports.STAB_HIST_COLUMNS, reports.stab_hist_rows(hists))
    payload = []
    for h in hists:
        d = h.to_dict()
        for k in ("edges", "counts", "cumulative", "reference"):
            d.pop(k)
        payload.append(d)
    reports.write_json(out / "stab_hist.json", "stab-hist", {
        "config": cfg.to_dict(),
        "replicate_seeds": rset.seeds(),
        "histograms": payload,
    })
    for h in hists:
        print(f"r={h.r}\tks={h.ks:.4f}")


def cmd_b_sufficiency(cfg: RunConfig, out: Path, workers: int, cache):
    data = cfg.data.load()
    top = cfg.map_topology()
    points = b_sufficiency(
        data, top, cfg.schedule.resolve(top, data.n), cfg.b_values, cfg.repeats,
        plan=cfg.plan(), workers=workers,
    )
    reports.write_tsv(out / "b_sufficiency.tsv", reports.B_SUFFICIENCY_COLUMNS,
                      reports.b_sufficiency_rows(points))
    reports.write_json(out / "b_sufficiency.json", "b-sufficiency", {
        "config": cfg.to_dict(),
        "points": [{"B": p.B, "std_cv": p.std_cv, "cvs": p.cvs} for p in points],
    })
    for p in points:
        print(f"B={p.B}\tstd_cv={p.std_cv:.4f}")


def cmd_generate(cfg: RunConfig, out: Path, workers: int, cache):
    data = cfg.data.load()
    save_csv(data, out / "data.csv")
    print(f"wrote {data.n} rows to {out / 'data.csv'}")


COMMANDS = {
    "train": cmd_train,
    "cv-sweep": cmd_cv_sweep,
    "stab": cmd_stab,
    "stab-hist": cmd_stab_hist,
    "b-sufficiency": cmd_b_sufficiency,
    "generate": cmd_generate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    given = vars(args)
    logging.basicConfig(
        level=logging.INFO if given.get("verbose") else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = resolve_config(args)
        out = Path(given.get("out", "somrel-out"))
        out.mkdir(parents=True, exist_ok=True)
        cfg.dump(out / "config.json")
        COMMANDS[cfg.command](cfg, out, int(given.get("workers", 1)), given.get("cache"))
    except ConfigError as exc:
        print(f"somrel: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataFormatError, InvalidArgumentError, DegenerateDistortionError, OSError) as exc:
        print(f"somrel: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception:  # noqa: BLE001
        log.exception("internal failure")
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
