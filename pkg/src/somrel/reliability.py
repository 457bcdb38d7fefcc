"""Reliability statistics computed from a set of bootstrap replicates.

Quantization: coefficient of variation of the distortion across replicates,
swept over map sizes or over the number of replicates.

Neighbourhood: for a pair of observations, how often they land within radius
r of each other on the map (restricted to replicates containing both), a
binomial test against an unorganized map, and histograms of that stability
over many pairs compared with the unorganized-map reference.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import stats

from .bootstrap import (
    BootstrapPlan,
    Replicate,
    ReplicateSet,
    derive_seed,
    draw_bootstrap_sample,
    run_replicates,
)
from .errors import DegenerateDistortionError, InvalidArgumentError
from .som import Dataset, MapTopology, TrainingSchedule

__all__ = [
    "CvReport",
    "cv_ss_intra",
    "SweepPoint",
    "cv_sweep",
    "SufficiencyPoint",
    "b_sufficiency",
    "Verdict",
    "NeighborhoodSpec",
    "neighborhood_spec",
    "edge_corrected_p",
    "gaussian_conditions",
    "gaussian_thresholds",
    "significance",
    "significance_codes",
    "neigh",
    "PairStability",
    "stab",
    "StabTable",
    "pair_stabilities",
    "pair_counts",
    "unorganized_assignments",
    "all_pairs",
    "sample_pairs",
    "StabHistogram",
    "stab_histogram",
    "histogram_from_table",
    "reference_histogram",
    "bin_index",
    "ks_distance",
    "significant_fraction",
    "gaussian_branch_codes",
    "exact_branch_codes",
    "verdict_of_code",
]

_KEY_BSUFF = 2


# ---------------------------------------------------------------- quantization


@dataclass(frozen=True, eq=False)
class CvReport:
    values: np.ndarray
    mean: float
    std: float
    cv: float

    def to_dict(self) -> dict:
        return {
            "B": int(self.values.shape[0]),
            "mean": self.mean,
            "std": self.std,
            "cv": self.cv,
            "values": [float(v) for v in self.values],
        }


def cv_ss_intra(values) -> CvReport:
    """Coefficient of variation (percent) of distortion values, sample std (n-1)."""
    v = np.asarray(values, dtype=float).reshape(-1)
    if v.shape[0] < 2:
        raise InvalidArgumentError("need at least two distortion values")
    if np.any(v < 0) or not np.all(np.isfinite(v)):
        raise InvalidArgumentError("distortion values must be finite and nonnegative")
    mu = float(v.mean())
    if mu == 0.0:
        raise DegenerateDistortionError("all replicates reached zero distortion; CV undefined")
    sd = float(v.std(ddof=1))
    return CvReport(v, mu, sd, 100.0 * sd / mu)


ScheduleLike = TrainingSchedule | Callable[[MapTopology, int], TrainingSchedule] | None


def _schedule_for(schedule: ScheduleLike, topology: MapTopology, n: int) -> TrainingSchedule:
    if schedule is None:
        return TrainingSchedule.default_for(topology, n)
    if isinstance(schedule, TrainingSchedule):
        return schedule
    return schedule(topology, n)


@dataclass(frozen=True, eq=False)
class SweepPoint:
    topology: MapTopology
    report: CvReport
    seeds: tuple[int, ...]

    @property
    def n_units(self) -> int:
        return self.topology.n_units

    @property
    def cv(self) -> float:
        return self.report.cv


def cv_sweep(
    data: Dataset,
    sizes: Sequence[MapTopology],
    schedule: ScheduleLike,
    plan: BootstrapPlan,
    workers: int = 1,
) -> list[SweepPoint]:
    """CV of the distortion for each map in ``sizes``, in the given order.

    ``schedule`` may be a fixed schedule, a callable ``(topology, n) ->
    schedule``, or None for the per-topology defaults.
    """
    if not sizes:
        raise InvalidArgumentError("need at least one map size")
    out = []
    for top in sizes:
        rset = run_replicates(data, top, _schedule_for(schedule, top, data.n), plan, workers)
        out.append(SweepPoint(top, cv_ss_intra(rset.ss_values()), tuple(rset.seeds())))
    return out


@dataclass(frozen=True, eq=False)
class SufficiencyPoint:
    B: int
    std_cv: float
    cvs: np.ndarray


def b_sufficiency(
    data: Dataset,
    topology: MapTopology,
    schedule: ScheduleLike,
    B_values: Sequence[int],
    M: int = 30,
    plan: BootstrapPlan | None = None,
    seeds: Sequence[int] | None = None,
    workers: int = 1,
) -> list[SufficiencyPoint]:
    """Spread of the CV estimate as a function of the number of replicates.

    For each of ``M`` master seeds one replicate set of ``max(B_values)`` is
    trained; the estimate for a given B uses its first B replicates, which is
    exactly what a plan with that B would have produced.
    """
    if M < 2:
        raise InvalidArgumentError("need M >= 2 repeats")
    if not B_values or min(B_values) < 2:
        raise InvalidArgumentError("B values must be >= 2")
    plan = plan or BootstrapPlan()
    if seeds is None:
        seeds = [derive_seed(plan.master_seed, _KEY_BSUFF, m) for m in range(M)]
    elif len(seeds) != M:
        raise InvalidArgumentError(f"expected {M} seeds, got {len(seeds)}")
    sched = _schedule_for(schedule, topology, data.n)
    B_max = max(B_values)
    ss = np.empty((M, B_max))
    for m, seed in enumerate(seeds):
        rset = run_replicates(data, topology, sched, plan.with_(B=B_max, master_seed=int(seed)), workers)
        ss[m] = rset.ss_values()
    out = []
    for B in B_values:
        cvs = np.array([cv_ss_intra(ss[m, :B]).cv for m in range(M)])
        out.append(SufficiencyPoint(int(B), float(cvs.std(ddof=1)), cvs))
    return out


# ------------------------------------------------------- null model / testing


class Verdict(str, enum.Enum):
    NEIGHBOR = "*1"
    NON_NEIGHBOR = "*0"
    NOT_SIGNIFICANT = "ns"
    UNDETERMINED = "?"

    @property
    def marker(self) -> str:
        return {"*1": "*1", "*0": "*0", "ns": "", "?": "?"}[self.value]

    @property
    def significant(self) -> bool:
        return self in (Verdict.NEIGHBOR, Verdict.NON_NEIGHBOR)


# integer codes used by the vectorised paths
_CODES = (Verdict.NOT_SIGNIFICANT, Verdict.NEIGHBOR, Verdict.NON_NEIGHBOR, Verdict.UNDETERMINED)
_NS, _NB, _NN, _UD = 0, 1, 2, 3


def neighborhood_size(topology: MapTopology, r: int) -> int:
    """Unclipped neighbourhood size: 2r+1 on a string, (2r+1)^2 on a grid."""
    if r < 0:
        raise InvalidArgumentError("radius must be >= 0")
    side = 2 * int(r) + 1
    return side if topology.kind == "string" else side * side


def _axis_counts_sum(length: int, r: int) -> int:
    return sum(min(k + r, length - 1) - max(k - r, 0) + 1 for k in range(length))


def edge_corrected_p(topology: MapTopology, r: int) -> Fraction:
    """Probability that two independent uniform placements fall within radius r.

    Equals the mean exact neighbourhood size (border units have clipped
    neighbourhoods) divided by U. Returned as an exact fraction.
    """
    if r < 0:
        raise InvalidArgumentError("radius must be >= 0")
    r = int(r)
    # Chebyshev balls factor per axis, so the sum over units factors too
    total = _axis_counts_sum(topology.rows, r) * _axis_counts_sum(topology.cols, r)
    return Fraction(total, topology.n_units ** 2)


@dataclass(frozen=True)
class NeighborhoodSpec:
    r: int
    v: int
    p_plain: Fraction
    p_edge: Fraction


def neighborhood_spec(topology: MapTopology, r: int) -> NeighborhoodSpec:
    v = neighborhood_size(topology, r)
    U = topology.n_units
    return NeighborhoodSpec(int(r), v, Fraction(min(v, U), U), edge_corrected_p(topology, r))


def _check_p(p) -> float:
    p = float(p)
    if not 0.0 < p < 1.0:
        raise InvalidArgumentError(f"null probability must lie in (0, 1), got {p}")
    return p


def gaussian_conditions(B_ij: int, p) -> bool:
    """Whether Binomial(B_ij, p) may be replaced by its normal approximation."""
    p = _check_p(p)
    return B_ij > 30 and B_ij * p > 10 and B_ij * (1 - p) > 10


def gaussian_thresholds(p) -> dict:
    """Smallest trial counts satisfying each normal-approximation condition.

    Exact for rational ``p`` (pass a Fraction).
    """
    q = Fraction(p) if not isinstance(p, float) else Fraction(p).limit_denominator(10**12)
    if not 0 < q < 1:
        raise InvalidArgumentError("p must lie in (0, 1)")
    first = math.floor(10 / q) + 1       # B * p > 10
    second = math.floor(10 / (1 - q)) + 1  # B * (1 - p) > 10
    return {"B_times_p": first, "B_times_1mp": second, "overall": max(31, first, second)}


def _z(level: float) -> float:
    return float(stats.norm.ppf(1.0 - level / 2.0))


def gaussian_branch_codes(Y, B_ij, p, level: float = 0.05) -> np.ndarray:
    """Verdict codes from the normal-approximation rejection bounds alone."""
    Y, n = np.broadcast_arrays(np.asarray(Y, dtype=np.int64), np.asarray(B_ij, dtype=np.int64))
    mean = n * p
    half = _z(level) * np.sqrt(n * p * (1 - p))
    codes = np.full(Y.shape, _NS, dtype=np.int8)
    codes[Y < mean - half] = _NN
    codes[Y > mean + half] = _NB
    return codes


def exact_branch_codes(Y, B_ij, p, level: float = 0.05) -> np.ndarray:
    """Verdict codes from the equal-tail exact binomial test alone."""
    Y, n = np.broadcast_arrays(np.asarray(Y, dtype=np.int64), np.asarray(B_ij, dtype=np.int64))
    lower = stats.binom.cdf(Y, n, p)     # P(X <= Y)
    upper = stats.binom.sf(Y - 1, n, p)  # P(X >= Y)
    codes = np.full(Y.shape, _NS, dtype=np.int8)
    codes[(Y < n * p) & (lower <= level / 2)] = _NN
    codes[(Y > n * p) & (upper <= level / 2)] = _NB
    return codes


def significance_codes(Y, B_ij, p, level: float = 0.05) -> np.ndarray:
    """Vectorised form of :func:`significance`; returns integer verdict codes."""
    p = _check_p(p)
    Y = np.asarray(Y, dtype=np.int64)
    n = np.asarray(B_ij, dtype=np.int64)
    Y, n = np.broadcast_arrays(Y, n)
    if np.any(Y < 0) or np.any(Y > n):
        raise InvalidArgumentError("need 0 <= Y <= B_ij")
    codes = np.full(Y.shape, _UD, dtype=np.int8)
    gauss = (n > 30) & (n * p > 10) & (n * (1 - p) > 10)
    exact = ~gauss & (n > 0)
    if np.any(gauss):
        codes[gauss] = gaussian_branch_codes(Y[gauss], n[gauss], p, level)
    if np.any(exact):
        codes[exact] = exact_branch_codes(Y[exact], n[exact], p, level)
    return codes


def significance(Y: int, B_ij: int, p, level: float = 0.05) -> Verdict:
    """Test H0 "the pair is only randomly neighbours" from Y successes in B_ij trials.

    Normal approximation when :func:`gaussian_conditions` holds, otherwise an
    exact two-sided equal-tail binomial test. The direction of a rejection
    follows the sign of ``Y - B_ij * p``.
    """
    if B_ij < 0 or not 0 <= Y <= B_ij:
        raise InvalidArgumentError("need 0 <= Y <= B_ij")
    return _CODES[int(significance_codes(Y, B_ij, p, level))]


def verdict_of_code(code: int) -> Verdict:
    return _CODES[int(code)]


def _codes_to_verdicts(codes) -> list[Verdict]:
    return [_CODES[int(c)] for c in codes]


# ------------------------------------------------------------ pair stability


def _check_pair(n: int, i: int, j: int):
    for k in (i, j):
        if not 0 <= k < n:
            raise InvalidArgumentError(f"observation index {k} outside [0, {n})")
    if i == j:
        raise InvalidArgumentError("a pair needs two distinct observations")


def neigh(replicate: Replicate, topology: MapTopology, i: int, j: int, r: int) -> int | None:
    """1 if i and j map within radius r in this replicate, 0 if not, None if either is absent."""
    _check_pair(replicate.assignments.shape[0], i, j)
    if r < 0:
        raise InvalidArgumentError("radius must be >= 0")
    a, b = replicate.bmu(i), replicate.bmu(j)
    if a is None or b is None:
        return None
    return int(topology.distance_matrix[a, b] <= r)


@dataclass(frozen=True)
class PairStability:
    i: int
    j: int
    r: int
    b_ij: int
    successes: int
    verdict: Verdict

    @property
    def stab(self) -> float | None:
        """Fraction of shared replicates with the pair within radius r; None if none shared."""
        return None if self.b_ij == 0 else self.successes / self.b_ij


def _null_p(rset: ReplicateSet, r: int, p, edge_corrected: bool) -> float:
    if p is not None:
        return float(p)
    spec = neighborhood_spec(rset.topology, r)
    return float(spec.p_edge if edge_corrected else spec.p_plain)


def stab(
    rset: ReplicateSet,
    i: int,
    j: int,
    r: int,
    level: float = 0.05,
    p=None,
    edge_corrected: bool = False,
) -> PairStability:
    """Neighbourhood stability of one pair, with its significance verdict.

    The null probability defaults to v/U; ``edge_corrected=True`` uses the
    exact border-aware value instead, and ``p`` overrides both.
    """
    _check_pair(rset.n, i, j)
    b_ij = y = 0
    for rep in rset.replicates:
        nb = neigh(rep, rset.topology, i, j, r)
        if nb is not None:
            b_ij += 1
            y += nb
    if b_ij == 0:
        verdict = Verdict.UNDETERMINED
    else:
        verdict = significance(y, b_ij, _null_p(rset, r, p, edge_corrected), level)
    return PairStability(int(i), int(j), int(r), b_ij, y, verdict)


def all_pairs(n: int) -> np.ndarray:
    """(P, 2) array of every unordered pair i < j."""
    i, j = np.triu_indices(n, k=1)
    return np.column_stack([i, j]).astype(np.int64)


def _decode_pairs(k: np.ndarray, n: int) -> np.ndarray:
    # row-major enumeration of the strict upper triangle
    rows = np.arange(n - 1, dtype=np.int64)
    starts = rows * (2 * n - rows - 1) // 2
    i = np.searchsorted(starts, k, side="right") - 1
    j = k - starts[i] + i + 1
    return np.column_stack([i, j])


def sample_pairs(n: int, size: int, seed: int) -> np.ndarray:
    """``size`` distinct unordered pairs drawn uniformly without replacement."""
    total = n * (n - 1) // 2
    if total == 0:
        raise InvalidArgumentError("need at least two observations to form pairs")
    if size >= total:
        return all_pairs(n)
    k = np.sort(np.random.default_rng(seed).choice(total, size=int(size), replace=False))
    return _decode_pairs(k.astype(np.int64), n)


@dataclass(frozen=True, eq=False)
class StabTable:
    """Shared-replicate counts and successes for many pairs and radii."""

    pairs: np.ndarray
    radii: tuple[int, ...]
    b_ij: np.ndarray
    successes: np.ndarray  # (len(radii), P)

    def stab(self, r: int) -> np.ndarray:
        """Stability per pair at radius r; NaN where no replicate holds both."""
        y = self.successes[self.radii.index(r)]
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(self.b_ij > 0, y / np.maximum(self.b_ij, 1), np.nan)

    def codes(self, r: int, p, level: float = 0.05) -> np.ndarray:
        return significance_codes(self.successes[self.radii.index(r)], self.b_ij, p, level)

    def records(self, r: int, p, level: float = 0.05) -> list[PairStability]:
        k = self.radii.index(r)
        verdicts = _codes_to_verdicts(self.codes(r, p, level))
        return [
            PairStability(int(i), int(j), int(r), int(b), int(y), v)
            for (i, j), b, y, v in zip(self.pairs, self.b_ij, self.successes[k], verdicts)
        ]


def pair_counts(assignments, topology: MapTopology, radii: Iterable[int], pairs=None) -> StabTable:
    """Pair counts from a (B, N) assignment matrix holding ``-1`` for absent observations."""
    A = np.asarray(assignments, dtype=np.int64)
    if A.ndim != 2:
        raise InvalidArgumentError("assignments must be a (B, N) matrix")
    n = A.shape[1]
    radii = tuple(int(r) for r in radii)
    if not radii or min(radii) < 0:
        raise InvalidArgumentError("need one or more radii >= 0")
    pairs = all_pairs(n) if pairs is None else np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if pairs.size and (pairs.min() < 0 or pairs.max() >= n or np.any(pairs[:, 0] == pairs[:, 1])):
        raise InvalidArgumentError("pairs must hold distinct in-range observation indices")
    I, J = pairs[:, 0], pairs[:, 1]
    dist = topology.distance_matrix
    b_ij = np.zeros(len(pairs), dtype=np.int64)
    succ = np.zeros((len(radii), len(pairs)), dtype=np.int64)
    for a in A:
        ai, aj = a[I], a[J]
        both = (ai >= 0) & (aj >= 0)
        b_ij += both
        d = dist[np.where(both, ai, 0), np.where(both, aj, 0)]
        for k, r in enumerate(radii):
            succ[k] += both & (d <= r)
    return StabTable(pairs, radii, b_ij, succ)


def pair_stabilities(rset: ReplicateSet, radii: Iterable[int], pairs=None) -> StabTable:
    """Vectorised pair counts over all replicates for one or more radii.

    ``pairs`` defaults to every unordered pair of observations.
    """
    return pair_counts(rset.assignment_matrix(), rset.topology, radii, pairs)


def unorganized_assignments(n: int, topology: MapTopology, B: int, seed: int) -> np.ndarray:
    """Null-model (B, N) assignments: bootstrap presence, uniformly random units.

    Replicate b draws its sample from ``derive_seed(seed, 0, b)`` and its
    units from ``derive_seed(seed, 1, b)``.
    """
    if B < 1 or n < 1:
        raise InvalidArgumentError("need B >= 1 and n >= 1")
    A = np.full((B, n), -1, dtype=np.int64)
    for b in range(B):
        drawn = np.unique(draw_bootstrap_sample(n, derive_seed(seed, 0, b)))
        rng = np.random.default_rng(derive_seed(seed, 1, b))
        A[b, drawn] = rng.integers(0, topology.n_units, drawn.size)
    return A


def significant_fraction(pairs: Sequence[PairStability]) -> dict:
    """Percentages of pairs marked significant, excluding undetermined pairs."""
    pairs = list(pairs)
    if not pairs:
        raise InvalidArgumentError("no pairs given")
    if len({p.r for p in pairs}) != 1:
        raise InvalidArgumentError("all pairs must share one radius")
    counts = {v: 0 for v in Verdict}
    for p in pairs:
        counts[p.verdict] += 1
    determined = len(pairs) - counts[Verdict.UNDETERMINED]
    if determined == 0:
        raise InvalidArgumentError("every pair is undetermined")
    pct = lambda c: 100.0 * c / determined
    return {
        "r": pairs[0].r,
        "pairs": len(pairs),
        "undetermined": counts[Verdict.UNDETERMINED],
        "marked": pct(counts[Verdict.NEIGHBOR] + counts[Verdict.NON_NEIGHBOR]),
        "neighbor": pct(counts[Verdict.NEIGHBOR]),
        "non_neighbor": pct(counts[Verdict.NON_NEIGHBOR]),
        "not_significant": pct(counts[Verdict.NOT_SIGNIFICANT]),
    }


# ---------------------------------------------------------------- histograms


def bin_index(k, n, bins: int) -> np.ndarray:
    """Bin of the ratio k/n on ``bins`` equal right-closed bins over [0, 1].

    Integer arithmetic, so ratios falling on an edge are binned exactly:
    bin b covers (b/bins, (b+1)/bins], and bin 0 also holds 0.
    """
    k = np.asarray(k, dtype=np.int64)
    n = np.asarray(n, dtype=np.int64)
    return np.maximum(0, (k * bins + n - 1) // n - 1)


def reference_histogram(B_bar: float, p, bins: int = 51) -> np.ndarray:
    """Cumulative curve of Binomial(round(B_bar), p) / round(B_bar) on the bin grid."""
    if not B_bar >= 1 or bins < 1:
        raise InvalidArgumentError("need B_bar >= 1 and bins >= 1")
    p = _check_p(p)
    n = int(math.floor(B_bar + 0.5))
    k = np.arange(n + 1)
    mass = np.bincount(bin_index(k, n, bins), weights=stats.binom.pmf(k, n, p), minlength=bins)
    return np.cumsum(mass) / mass.sum()


def ks_distance(a, b) -> float:
    """Largest absolute gap between two cumulative curves on the same grid."""
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


@dataclass(frozen=True, eq=False)
class StabHistogram:
    r: int
    edges: np.ndarray
    counts: np.ndarray
    cumulative: np.ndarray
    reference: np.ndarray
    n_pairs: int
    n_undetermined: int
    mean_b_ij: float
    reference_trials: int
    reference_p: float
    pair_subsample_size: int | None

    @property
    def ks(self) -> float:
        return ks_distance(self.cumulative, self.reference)

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "bins": int(self.counts.shape[0]),
            "pairs": self.n_pairs,
            "undetermined": self.n_undetermined,
            "pair_subsample_size": self.pair_subsample_size,
            "mean_b_ij": self.mean_b_ij,
            "reference_trials": self.reference_trials,
            "reference_p": self.reference_p,
            "ks_distance": self.ks,
            "edges": self.edges.tolist(),
            "counts": self.counts.tolist(),
            "cumulative": self.cumulative.tolist(),
            "reference": self.reference.tolist(),
        }


def stab_histogram(
    rset: ReplicateSet,
    r: int,
    bins: int = 51,
    pair_subsample: int | None = None,
    seed: int = 0,
    table: StabTable | None = None,
) -> StabHistogram:
    """Histogram of pair stabilities at radius r against the unorganized-map curve.

    Uses every pair unless ``pair_subsample`` is given, in which case that
    many distinct pairs are drawn with ``seed``. A precomputed ``table``
    (containing r) may be passed to avoid recounting.
    """
    if bins < 1:
        raise InvalidArgumentError("bins must be >= 1")
    U = rset.topology.n_units
    if table is None:
        if pair_subsample is not None:
            if pair_subsample < 10 * U:
                warnings.warn(
                    f"pair subsample of {pair_subsample} is small relative to {U} map units",
                    stacklevel=2,
                )
            pairs = sample_pairs(rset.n, pair_subsample, seed)
        else:
            pairs = all_pairs(rset.n)
        table = pair_stabilities(rset, [r], pairs)
    return histogram_from_table(table, rset.topology, r, bins, pair_subsample is not None)


def histogram_from_table(
    table: StabTable, topology: MapTopology, r: int, bins: int = 51, subsampled: bool = False
) -> StabHistogram:
    """Stability histogram and unorganized reference from precomputed pair counts."""
    if bins < 1:
        raise InvalidArgumentError("bins must be >= 1")
    if r not in table.radii:
        raise InvalidArgumentError(f"radius {r} not in precomputed table")
    determined = table.b_ij > 0
    if not np.any(determined):
        raise InvalidArgumentError("no pair shares a replicate; nothing to histogram")
    y = table.successes[table.radii.index(r)][determined]
    n = table.b_ij[determined]
    counts = np.bincount(bin_index(y, n, bins), minlength=bins)
    cumulative = np.cumsum(counts) / counts.sum()
    mean_b = float(n.mean())
    p_edge = edge_corrected_p(topology, r)
    if p_edge >= 1:
        raise InvalidArgumentError(f"radius {r} covers the whole map; no unorganized reference")
    reference = reference_histogram(mean_b, p_edge, bins)
    return StabHistogram(
        r=int(r),
        edges=np.linspace(0.0, 1.0, bins + 1),
        counts=counts,
        cumulative=cumulative,
        reference=reference,
        n_pairs=int(len(table.pairs)),
        n_undetermined=int((~determined).sum()),
        mean_b_ij=mean_b,
        reference_trials=int(math.floor(mean_b + 0.5)),
        reference_p=float(p_edge),
        pair_subsample_size=int(len(table.pairs)) if subsampled else None,
    )
