"""Synthetic benchmark distributions, CSV input/output and z-scoring."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DataFormatError, InvalidArgumentError
from .som import Dataset

__all__ = [
    "GaussCluster",
    "GaussSpec",
    "HorseshoeSpec",
    "gauss1_spec",
    "gauss2_spec",
    "gauss3_spec",
    "gen_gauss",
    "gen_horseshoe",
    "horseshoe_residual",
    "gen_uniform_cube",
    "load_csv",
    "load_abalone",
    "save_csv",
    "zscore",
    "unstandardize",
    "GENERATORS",
    "make_dataset",
]


@dataclass(frozen=True)
class GaussCluster:
    center: tuple[float, ...]
    std: float | tuple[float, ...]
    count: int


@dataclass(frozen=True)
class GaussSpec:
    clusters: tuple[GaussCluster, ...]

    def __post_init__(self):
        if not self.clusters:
            raise InvalidArgumentError("a Gaussian mixture needs at least one cluster")
        dims = {len(c.center) for c in self.clusters}
        if len(dims) != 1 or 0 in dims:
            raise InvalidArgumentError("all cluster centers must share one dimension >= 1")
        d = dims.pop()
        for c in self.clusters:
            std = np.broadcast_to(np.asarray(c.std, dtype=float), (d,))
            if np.any(std <= 0) or not np.all(np.isfinite(std)):
                raise InvalidArgumentError("cluster standard deviations must be > 0")
            if int(c.count) < 1:
                raise InvalidArgumentError("cluster point counts must be >= 1")

    @property
    def dim(self) -> int:
        return len(self.clusters[0].center)


def gauss1_spec(count: int = 500) -> GaussSpec:
    """One isotropic cluster at the origin."""
    return GaussSpec((GaussCluster((0.0, 0.0), 1.0, count),))


def gauss2_spec(count: int = 500) -> GaussSpec:
    """Three equal-variance clusters 4 sigma apart (overlapping tails)."""
    h = 4.0 * math.sqrt(3.0) / 2.0
    return GaussSpec((
        GaussCluster((0.0, 0.0), 1.0, count),
        GaussCluster((4.0, 0.0), 1.0, count),
        GaussCluster((2.0, h), 1.0, count),
    ))


def gauss3_spec(count: int = 500) -> GaussSpec:
    """Three well separated clusters with standard deviations 1:2:3.

    Centers form a 30-40-50 right triangle, so every pair of centers is
    exactly ``10 * (sigma_i + sigma_j)`` apart.
    """
    return GaussSpec((
        GaussCluster((0.0, 0.0), 1.0, count),
        GaussCluster((30.0, 0.0), 2.0, count),
        GaussCluster((0.0, 40.0), 3.0, count),
    ))


def gen_gauss(spec: GaussSpec, seed: int) -> Dataset:
    """Sample each cluster in turn; cluster ids are kept as labels."""
    rng = np.random.default_rng(seed)
    d = spec.dim
    blocks, labels = [], []
    for k, c in enumerate(spec.clusters):
        std = np.broadcast_to(np.asarray(c.std, dtype=float), (d,))
        blocks.append(np.asarray(c.center, dtype=float) + rng.standard_normal((c.count, d)) * std)
        labels.append(np.full(c.count, k, dtype=np.int64))
    return Dataset(np.concatenate(blocks), labels=np.concatenate(labels))


@dataclass(frozen=True)
class HorseshoeSpec:
    """A U-folded sheet in 3-space.

    The cross-section in the x-z plane is a half circle of ``radius`` centred
    at the origin (z <= 0) with two vertical flanks of height ``flank`` rising
    from its ends at x = -radius and x = +radius. The sheet extends ``width``
    along y. ``noise`` is the standard deviation of displacement along the
    surface normal.
    """

    n: int = 1000
    radius: float = 1.0
    flank: float = 1.5
    width: float = 5.0
    noise: float = 0.0

    def __post_init__(self):
        if int(self.n) < 1:
            raise InvalidArgumentError("horseshoe needs n >= 1")
        if self.radius <= 0 or self.flank < 0 or self.width <= 0 or self.noise < 0:
            raise InvalidArgumentError("horseshoe needs radius > 0, width > 0, flank >= 0, noise >= 0")

    @property
    def profile_length(self) -> float:
        return 2.0 * self.flank + math.pi * self.radius


def gen_horseshoe(spec: HorseshoeSpec, seed: int) -> Dataset:
    """Uniform points on the folded sheet (uniform in arc length and y)."""
    rng = np.random.default_rng(seed)
    s = rng.random(spec.n) * spec.profile_length
    y = rng.random(spec.n) * spec.width
    R, h = spec.radius, spec.flank

    x = np.empty(spec.n)
    z = np.empty(spec.n)
    nx = np.empty(spec.n)
    nz = np.zeros(spec.n)

    left = s < h
    arc = (s >= h) & (s < h + math.pi * R)
    right = ~(left | arc)

    x[left], z[left], nx[left] = -R, h - s[left], 1.0
    theta = (s[arc] - h) / R
    x[arc] = -R * np.cos(theta)
    z[arc] = -R * np.sin(theta)
    nx[arc], nz[arc] = x[arc] / R, z[arc] / R
    x[right], z[right], nx[right] = R, s[right] - h - math.pi * R, 1.0

    if spec.noise > 0:
        eps = rng.standard_normal(spec.n) * spec.noise
        x = x + eps * nx
        z = z + eps * nz
    return Dataset(np.column_stack([x, y, z]), columns=("x", "y", "z"))


def horseshoe_residual(points, spec: HorseshoeSpec) -> np.ndarray:
    """Distance from each point to the noiseless horseshoe surface (ignoring the y extent)."""
    p = np.atleast_2d(np.asarray(points, dtype=float))
    x, z = p[:, 0], p[:, 2]
    R = spec.radius
    below = np.abs(np.hypot(x, z) - R)
    flanks = np.minimum(np.abs(x + R), np.abs(x - R))
    return np.where(z <= 0, below, flanks)


def gen_uniform_cube(n: int, d: int = 3, seed: int = 0) -> Dataset:
    """``n`` points i.i.d. uniform on the unit cube [0, 1]^d."""
    if int(n) < 1 or int(d) < 1:
        raise InvalidArgumentError("uniform cube needs n >= 1 and d >= 1")
    return Dataset(np.random.default_rng(seed).random((int(n), int(d))))


def _resolve_columns(columns, header: list[str] | None, width: int) -> list[int]:
    if columns is None:
        return list(range(width))
    out = []
    for c in columns:
        if isinstance(c, str) and not c.lstrip("-").isdigit():
            if header is None or c not in header:
                raise DataFormatError(f"unknown column {c!r}", column=c)
            out.append(header.index(c))
        else:
            k = int(c)
            if not 0 <= k < width:
                raise DataFormatError(f"column index {k} outside [0, {width})", column=k)
            out.append(k)
    return out


def load_csv(
    path,
    header: bool = True,
    delimiter: str = ",",
    columns: Sequence[int | str] | None = None,
    label_column: int | str | None = None,
) -> Dataset:
    """Read a numeric matrix from a delimited text file.

    ``columns`` selects columns by 0-based index or header name; unselected
    columns may hold anything. ``label_column`` names a column of row labels
    (kept as ``Dataset.labels``; excluded from the default column set).
    Blank lines are skipped.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [(lineno, r) for lineno, r in enumerate(csv.reader(fh, delimiter=delimiter), start=1)
                if r and any(cell.strip() for cell in r)]
    names = None
    if header:
        if not rows:
            raise DataFormatError(f"{path}: empty file")
        names = [c.strip() for c in rows[0][1]]
        rows = rows[1:]
    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    width = len(names) if names is not None else len(rows[0][1])
    label_idx = None if label_column is None else _resolve_columns([label_column], names, width)[0]
    if columns is None and label_idx is not None:
        columns = [k for k in range(width) if k != label_idx]
    selected = _resolve_columns(columns, names, width)

    values = np.empty((len(rows), len(selected)))
    for k, (lineno, cells) in enumerate(rows):
        if len(cells) != width:
            raise DataFormatError(
                f"{path}:{lineno}: expected {width} fields, found {len(cells)}", row=lineno
            )
        for j, col in enumerate(selected):
            cell = cells[col].strip()
            try:
                v = float(cell)
            except ValueError:
                label = names[col] if names else col
                raise DataFormatError(
                    f"{path}:{lineno}: non-numeric value {cell!r} in column {label!r}",
                    row=lineno, column=label,
                ) from None
            if not math.isfinite(v):
                raise DataFormatError(f"{path}:{lineno}: non-finite value in column {col}",
                                      row=lineno, column=col)
            values[k, j] = v
    col_names = tuple(names[c] for c in selected) if names else tuple(str(c) for c in selected)
    labels = None
    if label_idx is not None:
        labels = np.array([cells[label_idx].strip() for _, cells in rows], dtype=object)
    return Dataset(values, labels=labels, columns=col_names)


def load_abalone(path) -> Dataset:
    """UCI ``abalone.data``: drop the categorical sex column, keep the 7 measurements and the rings."""
    return load_csv(path, header=False, columns=list(range(1, 9)))


def save_csv(data: Dataset, path, delimiter: str = ",", header: bool = True):
    names = data.columns or tuple(f"x{k}" for k in range(data.dim))
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        if header:
            w.writerow(names)
        for row in data.observations:
            w.writerow([repr(float(v)) for v in row])


def zscore(data: Dataset) -> Dataset:
    """Centre every column and scale it to unit sample standard deviation."""
    x = data.observations
    if data.n < 2:
        raise DataFormatError("z-scoring needs at least two observations")
    means = x.mean(axis=0)
    stds = x.std(axis=0, ddof=1)
    names = data.columns or tuple(str(k) for k in range(data.dim))
    for k, s in enumerate(stds):
        if not s > 0:
            raise DataFormatError(f"column {names[k]!r} is constant; cannot z-score", column=names[k])
    return Dataset((x - means) / stds, means=means, stds=stds, labels=data.labels, columns=data.columns)


def unstandardize(data: Dataset, values=None) -> np.ndarray:
    """Map standardized values (default: the dataset itself) back to original units."""
    if not data.standardized:
        raise InvalidArgumentError("dataset was not z-scored")
    v = data.observations if values is None else np.asarray(values, dtype=float)
    return v * data.stds + data.means


def _gauss_factory(spec_fn):
    def make(seed: int, n: int | None = None) -> Dataset:
        return gen_gauss(spec_fn() if n is None else spec_fn(n), seed)
    return make


GENERATORS = {
    "gauss1": _gauss_factory(gauss1_spec),
    "gauss2": _gauss_factory(gauss2_spec),
    "gauss3": _gauss_factory(gauss3_spec),
    "horseshoe": lambda seed, n=None: gen_horseshoe(HorseshoeSpec() if n is None else HorseshoeSpec(n=n), seed),
    "cube": lambda seed, n=None: gen_uniform_cube(1000 if n is None else n, 3, seed),
}


def make_dataset(name: str, seed: int = 0, n: int | None = None) -> Dataset:
    """Build a named synthetic dataset. For Gaussian mixtures ``n`` is the per-cluster count."""
    try:
        factory = GENERATORS[name]
    except KeyError:
        raise InvalidArgumentError(
            f"unknown generator {name!r}; choose from {', '.join(sorted(GENERATORS))}"
        ) from None
    return factory(seed, n)
