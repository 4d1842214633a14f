"""
Experiment Configuration
========================
YAML experiment files mapped onto frozen dataclasses.

Expected structure:
  dataset:      {kind, num_classes, per_class, dim, separation, layout, ..., test_per_class}
  imbalance:    {ratio, decay}          # or null for a balanced train split
  network:      {hidden: [64, 64]}
  train:        {epochs, batch_size, lr, warmup_epochs, lr_steps, momentum, weight_decay,
                 defer_epoch}
  m2m:          {lam, beta, gamma, eta, steps, ...}   # defaults for every m2m strategy
  strategies:   [{kind, deferred, defer_epoch, cbrw_beta, smote_neighbors, name, m2m: {...}}]
  sweep:        {lam: [...], beta: [...], gamma: [...], strategy: name}
  seeds:        [0, 1, 2]
  output_dir:   runs/experiment
  report:       {gm_smoothing, write_logs, cache_g}

Unknown keys anywhere are an error.
"""

import dataclasses
from dataclasses import dataclass, field, fields
from pathlib import Path

import yaml

from longtail import DatasetConfig, ImbalanceProfile
from m2m import M2mConfig
from rebalance import StrategySpec, TrainConfig


class ConfigError(ValueError):
    """Raised for malformed or inconsistent configuration files."""


@dataclass(frozen=True)
class NetworkConfig:
    hidden: tuple = (64, 64)

    def __post_init__(self):
        object.__setattr__(self, "hidden", tuple(int(width) for width in self.hidden))
        if any(width < 1 for width in self.hidden):
            raise ValueError(f"Hidden widths must be positive, got {list(self.hidden)}")


@dataclass(frozen=True)
class StrategyRun:
    """A strategy plus the generation settings it uses (m2m strategies only)."""

    spec: StrategySpec
    m2m: M2mConfig | None = None

    @property
    def label(self) -> str:
        return self.spec.label


@dataclass(frozen=True)
class SweepGrid:
    lam: tuple = (0.01, 0.1, 0.5)
    beta: tuple = (0.9, 0.99, 0.999)
    gamma: tuple = (0.9, 0.99)
    strategy: str | None = None

    def __post_init__(self):
        for name in ("lam", "beta", "gamma"):
            values = tuple(float(v) for v in getattr(self, name))
            if not values:
                raise ValueError(f"sweep.{name} must list at least one value")
            object.__setattr__(self, name, values)


@dataclass(frozen=True)
class ReportConfig:
    gm_smoothing: bool = False
    write_logs: bool = True
    cache_g: bool = True


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: DatasetConfig = field(default_factory=DatasetConfig)
    imbalance: ImbalanceProfile | None = field(default_factory=ImbalanceProfile)
    network: NetworkConfig = field(default_factory=NetworkConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    strategies: tuple = ()
    m2m: M2mConfig = field(default_factory=M2mConfig)
    sweep: SweepGrid = field(default_factory=SweepGrid)
    seeds: tuple = (0, 1, 2)
    output_dir: str = "runs"
    report: ReportConfig = field(default_factory=ReportConfig)

    def __post_init__(self):
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError(f"Seeds must be distinct, got {list(self.seeds)}")
        labels = [run.label for run in self.strategies]
        if len(set(labels)) != len(labels):
            raise ConfigError(f"Strategy names must be distinct, got {labels} (set 'name')")
        for run in self.strategies:
            defer_epoch = self.train.resolved_defer_epoch(run.spec)
            try:
                run.spec.validate_epochs(self.train.epochs, defer_epoch)
            except ValueError as e:
                raise ConfigError(f"Strategy {run.label}: {e}") from e


@dataclass(frozen=True)
class GenDataConfig:
    dataset: DatasetConfig = field(default_factory=DatasetConfig)
    imbalance: ImbalanceProfile | None = field(default_factory=ImbalanceProfile)
    seed: int = 0
    output_dir: str = "data"


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------


def _coerce(f: dataclasses.Field, value):
    # PyYAML reads "1e-4" (no dot) as a string
    if isinstance(value, str) and f.type in (float, float | None):
        try:
            return float(value)
        except ValueError:
            return value
    if isinstance(value, list):
        return tuple(value)
    return value


def _build(cls, data, where: str, **extra):
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"'{where}' must be a mapping, got {type(data).__name__}")

    known = {f.name: f for f in fields(cls) if f.init}
    unknown = sorted(set(data) - set(known))
    if unknown:
        keys = ", ".join(f"{where}.{key}" for key in unknown)
        raise ConfigError(f"Unknown configuration key(s): {keys}")

    values = {key: _coerce(known[key], value) for key, value in data.items()}
    values.update(extra)
    try:
        return cls(**values)
    except ConfigError:
        raise
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{where}: {e}") from e


def _build_imbalance(data, where: str):
    if data is None:
        return None
    return _build(ImbalanceProfile, data, where)


def _build_strategies(items, defaults: M2mConfig) -> tuple:
    if items is None:
        items = [{"kind": "erm"}]
    if not isinstance(items, list):
        raise ConfigError("'strategies' must be a list")

    runs = []
    for i, item in enumerate(items):
        where = f"strategies[{i}]"
        if not isinstance(item, dict):
            raise ConfigError(f"'{where}' must be a mapping")
        item = dict(item)
        override = item.pop("m2m", None)
        spec = _build(StrategySpec, item, where)

        m2m_config = None
        if spec.kind == "m2m":
            merged = dataclasses.asdict(defaults)
            if override:
                m2m_where = f"{where}.m2m"
                unknown = sorted(set(override) - set(merged))
                if unknown:
                    keys = ", ".join(f"{m2m_where}.{key}" for key in unknown)
                    raise ConfigError(f"Unknown configuration key(s): {keys}")
                merged.update(override)
            m2m_config = _build(M2mConfig, merged, f"{where}.m2m")
        elif override:
            raise ConfigError(f"'{where}.m2m' is only valid for kind 'm2m'")
        runs.append(StrategyRun(spec, m2m_config))
    return tuple(runs)


def parse_config(raw: dict) -> ExperimentConfig:
    """Build an ExperimentConfig from an already-parsed YAML mapping."""
    raw = dict(raw or {})
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"Unknown configuration key(s): {', '.join(unknown)}")

    m2m_defaults = _build(M2mConfig, raw.get("m2m"), "m2m")
    if "imbalance" in raw:
        imbalance = _build_imbalance(raw["imbalance"], "imbalance")
    else:
        imbalance = ImbalanceProfile()
    try:
        return ExperimentConfig(
            dataset=_build(DatasetConfig, raw.get("dataset"), "dataset"),
            imbalance=imbalance,
            network=_build(NetworkConfig, raw.get("network"), "network"),
            train=_build(TrainConfig, raw.get("train"), "train"),
            strategies=_build_strategies(raw.get("strategies"), m2m_defaults),
            m2m=m2m_defaults,
            sweep=_build(SweepGrid, raw.get("sweep"), "sweep"),
            seeds=tuple(int(s) for s in raw.get("seeds", (0, 1, 2))),
            output_dir=str(raw.get("output_dir", "runs")),
            report=_build(ReportConfig, raw.get("report"), "report"),
        )
    except ConfigError:
        raise
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e)) from e


def _read_yaml(path) -> dict:
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text()) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"Error parsing {path}: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return raw


def load_config(path) -> ExperimentConfig:
    return parse_config(_read_yaml(path))


def load_gen_data_config(path) -> GenDataConfig:
    raw = _read_yaml(path)
    imbalance = raw.pop("imbalance", {})
    dataset = raw.pop("dataset", None)
    return _build(
        GenDataConfig,
        raw,
        "gen-data",
        dataset=_build(DatasetConfig, dataset, "dataset"),
        imbalance=_build_imbalance(imbalance, "imbalance"),
    )


# ---------------------------------------------------------------------------
# Snapshots
# ---------------------------------------------------------------------------


def _plain(value):
    if dataclasses.is_dataclass(value):
        return {f.name: _plain(getattr(value, f.name)) for f in fields(value) if f.init}
    if isinstance(value, tuple | list):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    return value


def config_to_dict(config) -> dict:
    """Plain dict suitable for yaml.safe_dump / json.dumps."""
    data = _plain(config)
    if isinstance(config, ExperimentConfig):
        data["strategies"] = []
        for run in config.strategies:
            entry = _plain(run.spec)
            if run.m2m is not None:
                entry["m2m"] = _plain(run.m2m)
            data["strategies"].append(entry)
    return data
