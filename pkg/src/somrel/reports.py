"""TSV and JSON renderings of reliability results.

TSV files are tab-delimited with one header row; floats are written with
``repr`` so values round-trip exactly.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .reliability import PairStability, StabHistogram, SufficiencyPoint, SweepPoint, Verdict

SCHEMA_VERSION = 1

CV_SWEEP_COLUMNS = ("topology", "units", "mean_ss_intra", "std_ss_intra", "cv")
STAB_HIST_COLUMNS = ("r", "bin", "lower", "upper", "count", "organized", "reference")
B_SUFFICIENCY_COLUMNS = ("B", "std_cv", "mean_cv")


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (np.integer,)):
        return str(int(v))
    return str(v)


def write_tsv(path, header: Sequence[str], rows: Iterable[Sequence], delimiter: str = "\t"):
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def read_tsv(path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        return list(csv.DictReader(fh, delimiter="\t"))


def write_json(path, kind: str, payload: dict):
    doc = {"schema": f"somrel.{kind}/{SCHEMA_VERSION}", **payload}
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n")


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, Verdict):
        return o.value
    raise TypeError(f"cannot serialize {type(o).__name__}")


def cv_sweep_rows(points: Sequence[SweepPoint]):
    for pt in points:
        yield (str(pt.topology), pt.n_units, pt.report.mean, pt.report.std, pt.cv)


def stab_cell(rec: PairStability) -> str:
    """``0.510*1`` style cell: stability to three decimals plus the verdict marker."""
    if rec.stab is None:
        return "NA"
    return f"{rec.stab:.3f}{rec.verdict.marker if rec.verdict.significant else ''}"


def stab_table_header(radii: Sequence[int]) -> list[str]:
    return ["pair", "i", "j", "b_ij"] + [f"r={r}" for r in radii]


def stab_table_rows(by_radius: dict[int, list[PairStability]], labels: Sequence[str] | None = None):
    """One row per pair, one column per radius (pair order taken from the first radius)."""
    radii = list(by_radius)
    first = by_radius[radii[0]]
    for k, rec in enumerate(first):
        name = (
            f"{labels[rec.i]} - {labels[rec.j]}" if labels is not None else f"{rec.i}-{rec.j}"
        )
        yield [name, rec.i, rec.j, rec.b_ij] + [stab_cell(by_radius[r][k]) for r in radii]


def stab_hist_rows(hists: Sequence[StabHistogram]):
    for h in hists:
        for b in range(h.counts.shape[0]):
            yield (h.r, b, float(h.edges[b]), float(h.edges[b + 1]), int(h.counts[b]),
                   float(h.cumulative[b]), float(h.reference[b]))


def b_sufficiency_rows(points: Sequence[SufficiencyPoint]):
    for pt in points:
        yield (pt.B, pt.std_cv, float(np.mean(pt.cvs)))
