"""Serializable run configuration shared by all CLI commands."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .bootstrap import BootstrapPlan
from .datasets import GENERATORS, load_csv, make_dataset, zscore
from .errors import ConfigError, SomrelError
from .som import Dataset, MapTopology, TrainingSchedule

CONFIG_SCHEMA = "somrel.config/1"


@dataclass
class DataSource:
    generator: str | None = "gauss3"
    n: int | None = None
    seed: int = 0
    csv: str | None = None
    header: bool = True
    delimiter: str = ","
    columns: list | None = None
    label_column: int | str | None = None
    zscore: bool = False

    def load(self) -> Dataset:
        if self.csv is not None:
            data = load_csv(
                self.csv, header=self.header, delimiter=self.delimiter,
                columns=self.columns, label_column=self.label_column,
            )
        elif self.generator is not None:
            data = make_dataset(self.generator, seed=self.seed, n=self.n)
        else:
            raise ConfigError("no dataset: give a generator name or a CSV path")
        return zscore(data) if self.zscore else data


@dataclass
class ScheduleConfig:
    steps_per_obs: float | None = None
    total_steps: int | None = None
    alpha_start: float | None = None
    alpha_end: float | None = None
    radius_start: int | None = None
    radius_end: int | None = None

    def resolve(self, topology: MapTopology, n: int) -> TrainingSchedule:
        total = self.total_steps
        if total is None and self.steps_per_obs is not None:
            total = max(1, int(round(self.steps_per_obs * n)))
        return TrainingSchedule.default_for(
            topology, n,
            total_steps=total,
            alpha_start=self.alpha_start,
            alpha_end=self.alpha_end,
            radius_start=self.radius_start,
            radius_end=self.radius_end,
        )


@dataclass
class RunConfig:
    """Everything needed to re-run a command bit-identically."""

    command: str = "train"
    data: DataSource = field(default_factory=DataSource)
    topology: str = "grid:7x7"
    sizes: list[str] = field(default_factory=list)
    schedule: ScheduleConfig = field(default_factory=ScheduleConfig)
    B: int = 100
    mode: str = "LB"
    perturbation_scale: float = 0.0
    master_seed: int = 0
    ss_target: str = "bootstrap"
    radii: list[int] = field(default_factory=lambda: [0, 1, 2])
    bins: int = 51
    pairs: str = "all"
    pair_subsample: int | None = None
    pair_seed: int = 0
    level: float = 0.05
    edge_corrected: bool = False
    b_values: list[int] = field(default_factory=lambda: list(range(20, 201, 20)))
    repeats: int = 30

    def __post_init__(self):
        if isinstance(self.data, dict):
            self.data = DataSource(**self.data)
        if isinstance(self.schedule, dict):
            self.schedule = ScheduleConfig(**self.schedule)

    def map_topology(self) -> MapTopology:
        try:
            return MapTopology.parse(self.topology)
        except SomrelError as exc:
            raise ConfigError(str(exc)) from None

    def map_sizes(self) -> list[MapTopology]:
        try:
            return [MapTopology.parse(s) for s in self.sizes]
        except SomrelError as exc:
            raise ConfigError(str(exc)) from None

    def plan(self, **overrides) -> BootstrapPlan:
        params = dict(
            B=self.B,
            mode=self.mode,
            perturbation_scale=self.perturbation_scale,
            master_seed=self.master_seed,
            ss_target=self.ss_target,
        )
        params.update(overrides)
        try:
            return BootstrapPlan(**params)
        except SomrelError as exc:
            raise ConfigError(str(exc)) from None

    def validate(self):
        if self.data.csv is None and self.data.generator not in GENERATORS:
            raise ConfigError(
                f"unknown generator {self.data.generator!r}; choose from {', '.join(sorted(GENERATORS))}"
            )
        self.map_topology()
        self.map_sizes()
        self.plan()
        if self.bins < 1:
            raise ConfigError("bins must be >= 1")
        if any(r < 0 for r in self.radii):
            raise ConfigError("radii must be >= 0")
        if not 0 < self.level < 1:
            raise ConfigError("level must lie in (0, 1)")
        if self.repeats < 2:
            raise ConfigError("repeats must be >= 2")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["schema"] = CONFIG_SCHEMA
        return d

    @classmethod
    def from_dict(cls, d: dict) -> RunConfig:
        d = dict(d)
        schema = d.pop("schema", CONFIG_SCHEMA)
        if schema != CONFIG_SCHEMA:
            raise ConfigError(f"unsupported config schema {schema!r}")
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**d)

    @classmethod
    def load(cls, path) -> RunConfig:
        try:
            return cls.from_dict(json.loads(Path(path).read_text()))
        except (OSError, json.JSONDecodeError, TypeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None

    def dump(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")
