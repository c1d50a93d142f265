"""Run configuration: a flat ``section.key = value`` text file plus environment overrides.

Example::

    # comments and blank lines are ignored
    battery.capacity_per_unit = 1.2
    cost.discount_rate = 0.05
    data.source = files
    data.weather = weather.csv
    data.load = load.csv

Unknown sections or keys are errors. Any key can be overridden from the
environment as ``SSPVB_<SECTION>__<KEY>``, e.g. ``SSPVB_RUN__SEED=7``.
"""

from __future__ import annotations

import dataclasses
import os
import typing
from dataclasses import dataclass, field
from pathlib import Path

from .data import BUNDLED_LATITUDE_FACTOR, BUNDLED_PEAK_LOAD_KW, BUNDLED_SEED
from .model import DOD_MAX, DOD_MIN, BatterySpec, CostParams, PVSpec
from .mopso import MopsoParams
from .nsga2 import Nsga2Params

ENV_PREFIX = "SSPVB_"
ALGORITHMS = ("mopso", "nsga2")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class DataConfig:
    source: str = "bundled"  # bundled | synthetic | files
    weather: str | None = None
    load: str | None = None
    seed: int = BUNDLED_SEED
    days: int = 365
    peak_load_kw: float = BUNDLED_PEAK_LOAD_KW
    latitude_factor: float = BUNDLED_LATITUDE_FACTOR

    def __post_init__(self):
        if self.source not in ("bundled", "synthetic", "files"):
            raise ValueError("data.source must be bundled, synthetic or files")
        if self.source == "files" and not (self.weather and self.load):
            raise ValueError("data.source = files needs data.weather and data.load")
        if self.days < 1:
            raise ValueError("data.days must be >= 1")


@dataclass(frozen=True)
class BoundsConfig:
    """Decision bounds; a ``None`` maximum is derived from the dataset."""

    n_pv_min: int = 0
    n_pv_max: int | None = None
    n_bes_min: int = 0
    n_bes_max: int | None = None
    dod_min: float = DOD_MIN
    dod_max: float = DOD_MAX
    dod_step: float = 0.0


@dataclass(frozen=True)
class ProblemConfig:
    coe_energy: str = "served"  # served | load
    epsilon: float = 0.0

    def __post_init__(self):
        if self.coe_energy not in ("served", "load"):
            raise ValueError("problem.coe_energy must be served or load")
        if self.epsilon < 0:
            raise ValueError("problem.epsilon must be >= 0")


@dataclass(frozen=True)
class MopsoConfig:
    swarm_size: int = 100
    iterations: int = 150
    inertia_start: float = 0.9
    inertia_end: float = 0.4
    c1: float = 2.0
    c2: float = 2.0
    archive_capacity: int = 100
    grid_divisions: int = 7
    mutation_rate: float = 0.1

    def params(self, seed: int, workers: int = 1) -> MopsoParams:
        return MopsoParams(
            swarm_size=self.swarm_size,
            iterations=self.iterations,
            inertia=(self.inertia_start, self.inertia_end),
            c1=self.c1,
            c2=self.c2,
            archive_capacity=self.archive_capacity,
            grid_divisions=self.grid_divisions,
            mutation_rate=self.mutation_rate,
            seed=seed,
            workers=workers,
        )


@dataclass(frozen=True)
class Nsga2Config:
    population: int = 100
    generations: int = 150
    crossover_prob: float = 0.9
    crossover_eta: float = 15.0
    mutation_prob: float | None = None
    mutation_eta: float = 20.0

    def params(self, seed: int, workers: int = 1) -> Nsga2Params:
        return Nsga2Params(
            population=self.population,
            generations=self.generations,
            crossover_prob=self.crossover_prob,
            crossover_eta=self.crossover_eta,
            mutation_prob=self.mutation_prob,
            mutation_eta=self.mutation_eta,
            seed=seed,
            workers=workers,
        )


@dataclass(frozen=True)
class RunSettings:
    seed: int = 1
    workers: int = 1
    algo: str = "both"  # mopso | nsga2 | both
    out: str = "results"

    def __post_init__(self):
        if self.algo not in ("mopso", "nsga2", "both"):
            raise ValueError("run.algo must be mopso, nsga2 or both")
        if self.workers < 1:
            raise ValueError("run.workers must be >= 1")

    @property
    def algorithms(self) -> tuple[str, ...]:
        return ALGORITHMS if self.algo == "both" else (self.algo,)


@dataclass(frozen=True)
class SweepConfig:
    enabled: bool = False
    dod_from: float = 0.2
    dod_to: float = 0.8
    dod_step: float = 0.1


@dataclass(frozen=True)
class RunConfig:
    data: DataConfig = field(default_factory=DataConfig)
    pv: PVSpec = field(default_factory=PVSpec)
    battery: BatterySpec = field(default_factory=BatterySpec)
    cost: CostParams = field(default_factory=CostParams)
    bounds: BoundsConfig = field(default_factory=BoundsConfig)
    problem: ProblemConfig = field(default_factory=ProblemConfig)
    mopso: MopsoConfig = field(default_factory=MopsoConfig)
    nsga2: Nsga2Config = field(default_factory=Nsga2Config)
    run: RunSettings = field(default_factory=RunSettings)
    sweep: SweepConfig = field(default_factory=SweepConfig)

    def with_values(self, values: dict[str, str]) -> RunConfig:
        """Copy with ``section.key -> raw string`` overrides applied."""
        return build_config(values, base=self)

    def flat(self) -> dict[str, object]:
        """All settings as ``section.key -> value``, for summaries."""
        out = {}
        for section in dataclasses.fields(self):
            obj = getattr(self, section.name)
            for f in dataclasses.fields(obj):
                out[f"{section.name}.{f.name}"] = getattr(obj, f.name)
        return out


SECTIONS = {f.name: f for f in dataclasses.fields(RunConfig)}


def _section_types(section: str) -> dict[str, object]:
    cls = typing.get_type_hints(RunConfig)[section]
    return typing.get_type_hints(cls)


def _convert(raw: str, hint, key: str):
    text = raw.strip()
    args = typing.get_args(hint)
    if type(None) in args:
        if text.lower() in ("", "none", "null"):
            return None
        hint = next(a for a in args if a is not type(None))
    try:
        if hint is bool:
            low = text.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        if hint is int:
            return int(text)
        if hint is float:
            return float(text)
        if hint is str:
            return text
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r} as {hint.__name__}") from None
    raise ConfigError(f"{key}: unsupported type {hint}")


def build_config(values: dict[str, str], base: RunConfig | None = None) -> RunConfig:
    """Apply raw string values keyed ``section.key`` on top of ``base`` (defaults if None)."""
    base = base or RunConfig()
    grouped: dict[str, dict[str, object]] = {}
    for key, raw in values.items():
        section, _, name = key.partition(".")
        if section not in SECTIONS or not name:
            raise ConfigError(f"unknown config key {key!r}")
        types = _section_types(section)
        if name not in types:
            raise ConfigError(f"unknown config key {key!r}")
        grouped.setdefault(section, {})[name] = _convert(raw, types[name], key)
    updates = {}
    for section, changes in grouped.items():
        try:
            updates[section] = dataclasses.replace(getattr(base, section), **changes)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"[{section}] {exc}") from None
    return dataclasses.replace(base, **updates)


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{source}:{lineno}: expected key = value, got {line!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        values[key] = value.strip()
    return values


def env_overrides(environ=None) -> dict[str, str]:
    environ = os.environ if environ is None else environ
    values = {}
    for name, value in environ.items():
        if not name.startswith(ENV_PREFIX) or "__" not in name:
            continue
        section, _, key = name[len(ENV_PREFIX):].partition("__")
        values[f"{section.lower()}.{key.lower()}"] = value
    return values


def load_config(path=None, environ=None, overrides: dict[str, str] | None = None) -> RunConfig:
    """File values, then ``SSPVB_*`` environment values, then explicit overrides.

    Relative data paths are resolved against the config file's directory.
    """
    values: dict[str, str] = {}
    base_dir = Path.cwd()
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        values.update(parse_config_text(path.read_text(), str(path)))
        base_dir = path.resolve().parent
    values.update(env_overrides(environ))
    values.update(overrides or {})
    cfg = build_config(values)
    data = cfg.data
    resolved = {}
    for name in ("weather", "load"):
        p = getattr(data, name)
        if p is not None:
            p = Path(p)
            if not p.is_absolute():
                p = base_dir / p
            if data.source == "files" and not p.is_file():
                raise ConfigError(f"data.{name}: file not found: {p}")
            resolved[name] = str(p)
    if resolved:
        cfg = dataclasses.replace(cfg, data=dataclasses.replace(data, **resolved))
    return cfg
