"""Bootstrap resampling and replicate SOM training.

Every replicate draws its randomness from seeds derived only from
``(master_seed, b)``, so a replicate set does not depend on execution order or
on how many worker threads trained it.
"""

from __future__ import annotations

import enum
import hashlib
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidArgumentError
from .som import (
    Codebook,
    Dataset,
    MapTopology,
    TrainingSchedule,
    best_matching_units,
    init_codebook,
    ss_intra,
    train_som,
)

__all__ = [
    "BootstrapMode",
    "BootstrapPlan",
    "Replicate",
    "ReplicateSet",
    "derive_seed",
    "draw_bootstrap_sample",
    "run_replicate",
    "run_replicates",
    "shared_initial_codebook",
    "save_replicate_set",
    "load_replicate_set",
]

log = logging.getLogger(__name__)

MANIFEST_SCHEMA = "somrel.replicates/1"

# spawn-key prefixes for derived seeds
_KEY_SHARED_INIT = 0
_KEY_REPLICATE = 1
_SUB_SAMPLE, _SUB_TRAIN, _SUB_INIT = 0, 1, 2


class BootstrapMode(str, enum.Enum):
    COMMON = "CB"
    LOCAL = "LB"
    LOCAL_PERTURBED = "LPB"

    @classmethod
    def parse(cls, value) -> BootstrapMode:
        if isinstance(value, cls):
            return value
        text = str(value).strip().upper()
        aliases = {"COMMON": "CB", "LOCAL": "LB", "LOCAL_PERTURBED": "LPB", "PERTURBED": "LPB"}
        try:
            return cls(aliases.get(text, text))
        except ValueError:
            raise InvalidArgumentError(f"unknown bootstrap mode {value!r} (use CB, LB or LPB)") from None


SS_TARGETS = ("bootstrap", "original")


@dataclass(frozen=True)
class BootstrapPlan:
    """How many replicates to train and how each one is initialised.

    ``ss_target`` selects the data on which each replicate's distortion is
    evaluated: its own bootstrap sample (default) or the original dataset.
    """

    B: int = 100
    mode: BootstrapMode = BootstrapMode.LOCAL
    perturbation_scale: float = 0.0
    master_seed: int = 0
    ss_target: str = "bootstrap"

    def __post_init__(self):
        object.__setattr__(self, "mode", BootstrapMode.parse(self.mode))
        if int(self.B) < 1:
            raise InvalidArgumentError("B must be >= 1")
        if not self.perturbation_scale >= 0:
            raise InvalidArgumentError("perturbation_scale must be >= 0")
        if self.ss_target not in SS_TARGETS:
            raise InvalidArgumentError(f"ss_target must be one of {SS_TARGETS}")

    def with_(self, **changes) -> BootstrapPlan:
        params = self.to_dict()
        params.update(changes)
        return BootstrapPlan(**params)

    def to_dict(self) -> dict:
        return {
            "B": int(self.B),
            "mode": self.mode.value,
            "perturbation_scale": float(self.perturbation_scale),
            "master_seed": int(self.master_seed),
            "ss_target": self.ss_target,
        }


def derive_seed(master_seed: int, *keys: int) -> int:
    """Deterministic 64-bit seed for the stream identified by ``keys``."""
    ss = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def replicate_seed(master_seed: int, b: int) -> int:
    return derive_seed(master_seed, _KEY_REPLICATE, b)


def draw_bootstrap_sample(n: int, seed: int) -> np.ndarray:
    """``n`` indices drawn uniformly with replacement from ``range(n)``."""
    if int(n) < 1:
        raise InvalidArgumentError("bootstrap sample size must be >= 1")
    return np.random.default_rng(seed).integers(0, n, size=int(n))


@dataclass(frozen=True, eq=False)
class Replicate:
    """One trained bootstrap replicate.

    ``assignments`` has one entry per original observation: its best matching
    unit if the observation was drawn into this replicate, ``-1`` otherwise.
    """

    index: int
    seed: int
    sample_indices: np.ndarray
    initial: Codebook
    codebook: Codebook
    ss_intra_value: float
    assignments: np.ndarray

    @property
    def present(self) -> np.ndarray:
        return self.assignments >= 0

    def bmu(self, i: int) -> int | None:
        """Best matching unit of original observation ``i``, or None if not drawn."""
        if not 0 <= i < self.assignments.shape[0]:
            raise InvalidArgumentError(f"observation index {i} out of range")
        a = int(self.assignments[i])
        return a if a >= 0 else None


@dataclass(frozen=True, eq=False)
class ReplicateSet:
    data: Dataset
    topology: MapTopology
    schedule: TrainingSchedule
    plan: BootstrapPlan
    replicates: tuple[Replicate, ...]
    initial_codebook: Codebook | None

    @property
    def B(self) -> int:
        return len(self.replicates)

    @property
    def n(self) -> int:
        return self.data.n

    def ss_values(self) -> np.ndarray:
        return np.array([r.ss_intra_value for r in self.replicates])

    def assignment_matrix(self) -> np.ndarray:
        """(B, N) matrix of unit assignments, ``-1`` where absent."""
        return np.stack([r.assignments for r in self.replicates])

    def seeds(self) -> list[int]:
        return [r.seed for r in self.replicates]

    def head(self, B: int) -> ReplicateSet:
        """The first ``B`` replicates, as if the plan had asked for ``B``."""
        if not 1 <= B <= self.B:
            raise InvalidArgumentError(f"cannot take {B} of {self.B} replicates")
        return ReplicateSet(
            self.data, self.topology, self.schedule, self.plan.with_(B=B),
            self.replicates[:B], self.initial_codebook,
        )


def shared_initial_codebook(data: Dataset, topology: MapTopology, master_seed: int) -> Codebook:
    """The initialisation held fixed across replicates under LB and LPB."""
    return init_codebook(data, topology, derive_seed(master_seed, _KEY_SHARED_INIT))


def _column_std(data: Dataset) -> np.ndarray:
    if data.n < 2:
        return np.zeros(data.dim)
    return data.observations.std(axis=0, ddof=1)


def run_replicate(
    data: Dataset,
    topology: MapTopology,
    schedule: TrainingSchedule,
    plan: BootstrapPlan,
    b: int,
    shared_init: Codebook | None = None,
) -> Replicate:
    """Train replicate ``b`` of ``plan``; depends only on the inputs and ``(master_seed, b)``."""
    if not 0 <= b < plan.B:
        raise InvalidArgumentError(f"replicate index {b} outside [0, {plan.B})")
    seed = replicate_seed(plan.master_seed, b)
    sample = draw_bootstrap_sample(data.n, derive_seed(seed, _SUB_SAMPLE))

    if plan.mode is BootstrapMode.COMMON:
        init = init_codebook(data, topology, derive_seed(seed, _SUB_INIT))
    else:
        if shared_init is None:
            shared_init = shared_initial_codebook(data, topology, plan.master_seed)
        init = shared_init
        if plan.mode is BootstrapMode.LOCAL_PERTURBED and plan.perturbation_scale > 0:
            rng = np.random.default_rng(derive_seed(seed, _SUB_INIT))
            scale = plan.perturbation_scale * _column_std(data)
            noise = rng.standard_normal(init.centroids.shape) * scale
            init = Codebook(topology, init.centroids + noise)

    boot = data.subset(sample)
    codebook = train_som(boot, init, schedule, derive_seed(seed, _SUB_TRAIN))
    target = boot if plan.ss_target == "bootstrap" else data
    ss = ss_intra(codebook, target)

    assignments = np.full(data.n, -1, dtype=np.int64)
    drawn = np.unique(sample)
    assignments[drawn] = best_matching_units(codebook, data.observations[drawn])
    sample.setflags(write=False)
    assignments.setflags(write=False)
    return Replicate(b, seed, sample, init, codebook, ss, assignments)


def run_replicates(
    data: Dataset,
    topology: MapTopology,
    schedule: TrainingSchedule,
    plan: BootstrapPlan,
    workers: int = 1,
) -> ReplicateSet:
    """Train all ``plan.B`` replicates, optionally on a thread pool."""
    if data.dim < 1:
        raise InvalidArgumentError("dataset has no columns")
    shared = None
    if plan.mode is not BootstrapMode.COMMON:
        shared = shared_initial_codebook(data, topology, plan.master_seed)

    def job(b):
        return run_replicate(data, topology, schedule, plan, b, shared)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reps = list(pool.map(job, range(plan.B)))
    else:
        reps = [job(b) for b in range(plan.B)]
    log.debug("trained %d replicates on %s (%s)", plan.B, topology, plan.mode.value)
    return ReplicateSet(data, topology, schedule, plan, tuple(reps), shared)


def dataset_fingerprint(data: Dataset) -> str:
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(data.observations, dtype="<f8").tobytes())
    h.update(repr(data.observations.shape).encode())
    return h.hexdigest()


def save_replicate_set(rset: ReplicateSet, directory) -> Path:
    """Write ``manifest.json`` plus one ``.npz`` per replicate into ``directory``."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    np.save(out / "data.npy", rset.data.observations)
    if rset.initial_codebook is not None:
        np.save(out / "initial.npy", rset.initial_codebook.centroids)
    entries = []
    for rep in rset.replicates:
        name = f"replicate_{rep.index:04d}.npz"
        np.savez(
            out / name,
            sample_indices=rep.sample_indices,
            initial=rep.initial.centroids,
            centroids=rep.codebook.centroids,
            assignments=rep.assignments,
        )
        entries.append({
            "index": rep.index,
            "seed": rep.seed,
            "ss_intra": rep.ss_intra_value,
            "file": name,
        })
    manifest = {
        "schema": MANIFEST_SCHEMA,
        "topology": str(rset.topology),
        "schedule": rset.schedule.to_dict(),
        "plan": rset.plan.to_dict(),
        "dataset": {
            "file": "data.npy",
            "n": rset.data.n,
            "dim": rset.data.dim,
            "sha256": dataset_fingerprint(rset.data),
        },
        "initial_codebook": None if rset.initial_codebook is None else "initial.npy",
        "replicates": entries,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return out


def load_replicate_set(directory, data: Dataset | None = None) -> ReplicateSet:
    """Read a replicate set written by :func:`save_replicate_set`.

    When ``data`` is given it must match the stored dataset fingerprint; its
    metadata (labels, standardization) is then kept.
    """
    src = Path(directory)
    manifest = json.loads((src / "manifest.json").read_text())
    if manifest.get("schema") != MANIFEST_SCHEMA:
        raise InvalidArgumentError(f"{src}: unsupported manifest schema {manifest.get('schema')!r}")
    stored = Dataset(np.load(src / manifest["dataset"]["file"]))
    if data is None:
        data = stored
    elif dataset_fingerprint(data) != manifest["dataset"]["sha256"]:
        raise InvalidArgumentError(f"{src}: cached replicates were trained on a different dataset")
    topology = MapTopology.parse(manifest["topology"])
    schedule = TrainingSchedule(**manifest["schedule"])
    plan = BootstrapPlan(**manifest["plan"])
    initial = None
    if manifest["initial_codebook"]:
        initial = Codebook(topology, np.load(src / manifest["initial_codebook"]))
    reps = []
    for entry in manifest["replicates"]:
        with np.load(src / entry["file"]) as z:
            sample = z["sample_indices"]
            assignments = z["assignments"]
            sample.setflags(write=False)
            assignments.setflags(write=False)
            reps.append(Replicate(
                int(entry["index"]), int(entry["seed"]), sample,
                Codebook(topology, z["initial"]), Codebook(topology, z["centroids"]),
                float(entry["ss_intra"]), assignments,
            ))
    return ReplicateSet(data, topology, schedule, plan, tuple(reps), initial)
