"""Self-organizing map primitives: topology, codebooks, training and distortion."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ._kernels import online_som
from .errors import InvalidArgumentError

__all__ = [
    "MapTopology",
    "Codebook",
    "TrainingSchedule",
    "Dataset",
    "grid_distance",
    "best_matching_unit",
    "best_matching_units",
    "ss_intra",
    "init_codebook",
    "train_som",
]


def _frozen_array(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class MapTopology:
    """A string (1-D) or rectangular grid (2-D) of map units.

    Units are numbered row-major; a string is stored as a single row.
    """

    kind: str
    rows: int
    cols: int

    def __post_init__(self):
        if self.kind not in ("string", "grid"):
            raise InvalidArgumentError(f"unknown topology kind {self.kind!r}")
        if self.rows < 1 or self.cols < 1:
            raise InvalidArgumentError("topology needs at least one unit per axis")
        if self.kind == "string" and self.rows != 1:
            raise InvalidArgumentError("a string topology has exactly one row")

    @classmethod
    def string(cls, length: int) -> MapTopology:
        return cls("string", 1, int(length))

    @classmethod
    def grid(cls, rows: int, cols: int) -> MapTopology:
        return cls("grid", int(rows), int(cols))

    @classmethod
    def parse(cls, text: str) -> MapTopology:
        """Parse ``string:9`` or ``grid:7x7``."""
        m = re.fullmatch(r"\s*(string|grid)\s*:\s*(\d+)(?:\s*x\s*(\d+))?\s*", text)
        if m is None:
            raise InvalidArgumentError(
                f"cannot parse topology {text!r}; expected 'string:L' or 'grid:RxC'"
            )
        kind, a, b = m.groups()
        if kind == "string":
            if b is not None:
                raise InvalidArgumentError(f"string topology takes one size: {text!r}")
            return cls.string(int(a))
        if b is None:
            raise InvalidArgumentError(f"grid topology needs RxC: {text!r}")
        return cls.grid(int(a), int(b))

    def __str__(self) -> str:
        if self.kind == "string":
            return f"string:{self.cols}"
        return f"grid:{self.rows}x{self.cols}"

    @property
    def n_units(self) -> int:
        return self.rows * self.cols

    @property
    def max_extent(self) -> int:
        """Largest Chebyshev distance between any two units."""
        return max(self.rows, self.cols) - 1

    def coords(self, u: int) -> tuple[int, int]:
        self._check_unit(u)
        return divmod(int(u), self.cols)

    def index(self, row: int, col: int) -> int:
        if not (0 <= row < self.rows and 0 <= col < self.cols):
            raise InvalidArgumentError(f"coordinates ({row}, {col}) outside {self}")
        return row * self.cols + col

    @cached_property
    def coordinates(self) -> np.ndarray:
        """(U, 2) integer array of (row, col) per unit."""
        u = np.arange(self.n_units)
        return _frozen_array(np.stack([u // self.cols, u % self.cols], axis=1), dtype=np.int64)

    @cached_property
    def distance_matrix(self) -> np.ndarray:
        """(U, U) Chebyshev distances between units."""
        c = self.coordinates
        d = np.abs(c[:, None, :] - c[None, :, :]).max(axis=2)
        return _frozen_array(d, dtype=np.int64)

    def _check_unit(self, u):
        if not (0 <= int(u) < self.n_units):
            raise InvalidArgumentError(f"unit index {u} outside [0, {self.n_units})")


def grid_distance(topology: MapTopology, u: int, v: int) -> int:
    """Chebyshev distance between units ``u`` and ``v`` on the map."""
    ru, cu = topology.coords(u)
    rv, cv = topology.coords(v)
    return max(abs(ru - rv), abs(cu - cv))


@dataclass(frozen=True, eq=False)
class Codebook:
    """Centroids attached to the units of a map."""

    topology: MapTopology
    centroids: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.centroids, dtype=float)
        if c.ndim != 2 or c.shape[1] < 1:
            raise InvalidArgumentError("centroids must be a (U, d) array with d >= 1")
        if c.shape[0] != self.topology.n_units:
            raise InvalidArgumentError(
                f"{c.shape[0]} centroids for a topology with {self.topology.n_units} units"
            )
        if not np.all(np.isfinite(c)):
            raise InvalidArgumentError("centroids must be finite")
        object.__setattr__(self, "centroids", _frozen_array(c))

    @property
    def dim(self) -> int:
        return self.centroids.shape[1]

    @property
    def n_units(self) -> int:
        return self.centroids.shape[0]

    def equals(self, other: Codebook) -> bool:
        """Bit-identical comparison (same topology, same centroid values)."""
        return self.topology == other.topology and np.array_equal(self.centroids, other.centroids)


@dataclass(frozen=True, eq=False)
class Dataset:
    """N observations in d dimensions.

    ``means``/``stds`` are set when the data was z-scored; ``labels`` is optional
    side information from synthetic generators and is never used for training.
    """

    observations: np.ndarray
    means: np.ndarray | None = None
    stds: np.ndarray | None = None
    labels: np.ndarray | None = None
    columns: tuple[str, ...] | None = field(default=None)

    def __post_init__(self):
        x = np.asarray(self.observations, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        if x.ndim != 2 or x.shape[0] < 1 or x.shape[1] < 1:
            raise InvalidArgumentError("a dataset needs at least one observation of dimension >= 1")
        if not np.all(np.isfinite(x)):
            raise InvalidArgumentError("observations must be finite")
        object.__setattr__(self, "observations", _frozen_array(x))
        if (self.means is None) != (self.stds is None):
            raise InvalidArgumentError("means and stds are recorded together")
        if self.means is not None:
            object.__setattr__(self, "means", _frozen_array(self.means))
            object.__setattr__(self, "stds", _frozen_array(self.stds))
        if self.labels is not None:
            labels = np.asarray(self.labels)
            if labels.shape != (x.shape[0],):
                raise InvalidArgumentError("one label per observation expected")
            object.__setattr__(self, "labels", _frozen_array(labels, dtype=labels.dtype))
        if self.columns is not None:
            cols = tuple(str(c) for c in self.columns)
            if len(cols) != x.shape[1]:
                raise InvalidArgumentError("one column name per dimension expected")
            object.__setattr__(self, "columns", cols)

    @property
    def n(self) -> int:
        return self.observations.shape[0]

    @property
    def dim(self) -> int:
        return self.observations.shape[1]

    @property
    def standardized(self) -> bool:
        return self.means is not None

    def subset(self, indices) -> Dataset:
        """Rows at ``indices`` (repeats allowed), keeping labels and standardization info."""
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(
            self.observations[idx],
            means=self.means,
            stds=self.stds,
            labels=None if self.labels is None else self.labels[idx],
            columns=self.columns,
        )


@dataclass(frozen=True)
class TrainingSchedule:
    """Learning-rate and radius schedule for online training.

    The rate falls linearly from ``alpha_start`` to ``alpha_end`` over
    ``total_steps``. The radius steps down one unit at a time from
    ``radius_start`` to ``radius_end``; the first half of training is split into
    equal phases, one per radius level, so ``radius_end`` is reached before the
    midpoint and kept until the end.
    """

    total_steps: int
    alpha_start: float = 0.1
    alpha_end: float = 0.01
    radius_start: int = 1
    radius_end: int = 0

    def __post_init__(self):
        if int(self.total_steps) < 1:
            raise InvalidArgumentError("total_steps must be >= 1")
        if not (0.0 <= self.alpha_end <= self.alpha_start <= 1.0):
            raise InvalidArgumentError("need 0 <= alpha_end <= alpha_start <= 1")
        if self.radius_end < 0 or self.radius_start < self.radius_end:
            raise InvalidArgumentError("need 0 <= radius_end <= radius_start")

    @classmethod
    def default_for(cls, topology: MapTopology, n_obs: int, **overrides) -> TrainingSchedule:
        """Defaults: 50 steps per observation, rate 0.1 -> 0.01, radius from half the map.

        With a hard neighbourhood, every unit inside the radius receives the
        same update, so a large starting rate collapses the map onto a point
        and unfolding it becomes a coin toss; 0.1 avoids that.
        """
        params = dict(
            total_steps=50 * int(n_obs),
            alpha_start=0.1,
            alpha_end=0.01,
            radius_start=math.ceil(max(topology.rows, topology.cols) / 2),
            radius_end=0,
        )
        params.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**params)

    def learning_rates(self) -> np.ndarray:
        t = np.arange(self.total_steps, dtype=float)
        if self.total_steps == 1:
            return np.full(1, float(self.alpha_start))
        return self.alpha_start + (self.alpha_end - self.alpha_start) * t / (self.total_steps - 1)

    def radii(self) -> np.ndarray:
        T = self.total_steps
        levels = self.radius_start - self.radius_end + 1
        t = np.arange(T, dtype=np.int64)
        phase = np.minimum((2 * t * levels) // T, levels - 1)
        return (self.radius_start - phase).astype(np.int64)

    def to_dict(self) -> dict:
        return {
            "total_steps": int(self.total_steps),
            "alpha_start": float(self.alpha_start),
            "alpha_end": float(self.alpha_end),
            "radius_start": int(self.radius_start),
            "radius_end": int(self.radius_end),
        }


def _check_dim(codebook: Codebook, dim: int):
    if dim != codebook.dim:
        raise InvalidArgumentError(
            f"dimension mismatch: codebook has d={codebook.dim}, data has d={dim}"
        )


def _squared_distances(x: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    diff = x[:, None, :] - centroids[None, :, :]
    return np.einsum("nuk,nuk->nu", diff, diff)


def best_matching_unit(codebook: Codebook, x) -> int:
    """Index of the nearest centroid to ``x`` (lowest index wins ties)."""
    x = np.asarray(x, dtype=float).reshape(-1)
    _check_dim(codebook, x.shape[0])
    return int(best_matching_units(codebook, x[None, :])[0])


def best_matching_units(codebook: Codebook, data) -> np.ndarray:
    """Vectorised BMU search for an (N, d) array or a Dataset."""
    x = data.observations if isinstance(data, Dataset) else np.atleast_2d(np.asarray(data, float))
    _check_dim(codebook, x.shape[1])
    # np.argmin returns the first minimum, i.e. the lowest unit index
    return np.argmin(_squared_distances(x, codebook.centroids), axis=1)


def ss_intra(codebook: Codebook, data) -> float:
    """Empirical distortion: sum over observations of the squared distance to the nearest centroid."""
    x = data.observations if isinstance(data, Dataset) else np.atleast_2d(np.asarray(data, float))
    _check_dim(codebook, x.shape[1])
    return float(_squared_distances(x, codebook.centroids).min(axis=1).sum())


def init_codebook(data: Dataset, topology: MapTopology, seed: int) -> Codebook:
    """Pick U observations as initial centroids.

    Sampling is without replacement unless the dataset has fewer rows than
    the map has units.
    """
    if data.n < 1:
        raise InvalidArgumentError("cannot initialise from an empty dataset")
    rng = np.random.default_rng(seed)
    U = topology.n_units
    rows = rng.choice(data.n, size=U, replace=data.n < U)
    return Codebook(topology, data.observations[rows])


def train_som(data: Dataset, initial: Codebook, schedule: TrainingSchedule, seed: int) -> Codebook:
    """Online Kohonen training with a hard neighbourhood.

    Each step presents one observation drawn uniformly with replacement
    (seeded), finds its best matching unit and pulls every unit within the
    current radius toward it by the current learning rate.
    """
    _check_dim(initial, data.dim)
    rng = np.random.default_rng(seed)
    order = rng.integers(0, data.n, size=schedule.total_steps)
    weights = np.array(initial.centroids, dtype=float, copy=True)
    online_som(
        np.ascontiguousarray(data.observations),
        weights,
        order,
        schedule.learning_rates(),
        schedule.radii(),
        np.ascontiguousarray(initial.topology.distance_matrix),
    )
    return Codebook(initial.topology, weights)
