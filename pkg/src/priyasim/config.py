"""Flat ``key = value`` experiment configuration.

Grammar, one setting per line::

    # comment
    nodes = 100      # comments may also trail a value
    radio.e_elec = 5e-08
    priya.desired_range = 30, 60
    experiment.protocols = priya, leach

Keys are dotted paths into :class:`~priyasim.engine.Scenario` (``radio.*``,
``sensing.*``, ``priya.*``, ``leach.*``, ``teen.*``, ``apteen.*`` and the
top-level scenario fields) plus the ``experiment.*`` keys. Every key is
optional; missing keys keep their defaults.
"""

from __future__ import annotations

import dataclasses
import typing
from dataclasses import dataclass, field
from pathlib import Path

from .engine import PROTOCOLS, Scenario
from .topology import ConfigError

# per-run or programmatic fields that a config file does not set
_SKIP = {"protocol", "seed", "keep_ledger", "trace"}


@dataclass(frozen=True)
class ExperimentSpec:
    scenario: Scenario = field(default_factory=Scenario)
    protocols: tuple = PROTOCOLS
    seeds: tuple = (1, 2, 3, 4, 5)
    out_dir: str = "results"

    def __post_init__(self):
        if not self.protocols:
            raise ConfigError("experiment.protocols must not be empty")
        for p in self.protocols:
            if p not in PROTOCOLS:
                raise ConfigError(f"experiment.protocols: unsupported protocol {p!r}")
        if len(set(self.protocols)) != len(self.protocols):
            raise ConfigError("experiment.protocols lists a protocol twice")
        if not self.seeds:
            raise ConfigError("experiment.seeds must not be empty")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("experiment.seeds lists a seed twice")


def _fields(cls):
    hints = typing.get_type_hints(cls)
    return [(f.name, hints[f.name]) for f in dataclasses.fields(cls) if f.name not in _SKIP]


def _is_dataclass_type(tp) -> bool:
    return isinstance(tp, type) and dataclasses.is_dataclass(tp)


def _keys(cls=Scenario, prefix=""):
    for name, tp in _fields(cls):
        if _is_dataclass_type(tp):
            yield from _keys(tp, f"{prefix}{name}.")
        else:
            yield f"{prefix}{name}", tp


SCENARIO_KEYS = dict(_keys())
EXPERIMENT_KEYS = {"experiment.protocols", "experiment.seeds", "experiment.out_dir"}


def _convert(key, text, tp):
    try:
        if tp is bool:
            if text.lower() not in ("true", "false"):
                raise ValueError(text)
            return text.lower() == "true"
        if tp is int:
            return int(text)
        if tp is float:
            return float(text)
        if tp is str:
            return text
        if typing.get_origin(tp) is tuple:
            parts = [p.strip() for p in text.split(",")]
            args = typing.get_args(tp)
            if len(args) != len(parts):
                raise ValueError(f"expected {len(args)} comma-separated values")
            return tuple(a(p) for a, p in zip(args, parts))
    except ValueError as e:
        raise ConfigError(f"{key}: cannot parse {text!r} ({e})") from None
    raise ConfigError(f"{key}: unsupported setting type")


def _format(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ", ".join(_format(v) for v in value)
    return str(value)


def _build(cls, values: dict, prefix=""):
    kwargs = {}
    for name, tp in _fields(cls):
        key = f"{prefix}{name}"
        if _is_dataclass_type(tp):
            kwargs[name] = _build(tp, values, key + ".")
        elif key in values:
            kwargs[name] = values[key]
    try:
        return cls(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{prefix.rstrip('.') or 'scenario'}: {e}") from None


def _positive_ints(key, text):
    try:
        vals = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise ConfigError(f"{key}: expected comma-separated integers, got {text!r}") from None
    return vals


def parse_text(text: str) -> ExperimentSpec:
    values, raw = {}, {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.partition("#")[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, val = (s.strip() for s in line.partition("="))
        if key in raw:
            raise ConfigError(f"{key}: set twice (line {lineno})")
        raw[key] = val
        if key in SCENARIO_KEYS:
            values[key] = _convert(key, val, SCENARIO_KEYS[key])
        elif key not in EXPERIMENT_KEYS:
            raise ConfigError(f"{key}: unknown setting")
    for key in ("nodes", "max_rounds", "priya.num_clusters", "radio.data_bits",
                "radio.ctrl_bits", "leach.setup_period", "apteen.count_time"):
        if key in values and values[key] <= 0 and not (key == "max_rounds" and values[key] == 0):
            raise ConfigError(f"{key}: must be a positive count, got {values[key]}")

    kwargs = {"scenario": _build(Scenario, values)}
    if "experiment.protocols" in raw:
        kwargs["protocols"] = tuple(
            p.strip().lower() for p in raw["experiment.protocols"].split(",") if p.strip())
    if "experiment.seeds" in raw:
        kwargs["seeds"] = _positive_ints("experiment.seeds", raw["experiment.seeds"])
    if "experiment.out_dir" in raw:
        kwargs["out_dir"] = raw["experiment.out_dir"]
    return ExperimentSpec(**kwargs)


def parse_config(path) -> ExperimentSpec:
    """Read a config file. Unreadable files raise ``OSError``."""
    return parse_text(Path(path).read_text())


def emit_config(spec: ExperimentSpec) -> str:
    """Fully resolved config text; ``parse_text(emit_config(s)) == s``."""

    def lookup(obj, dotted):
        for part in dotted.split("."):
            obj = getattr(obj, part)
        return obj

    lines = [f"{key} = {_format(lookup(spec.scenario, key))}" for key in SCENARIO_KEYS]
    lines.append(f"experiment.protocols = {', '.join(spec.protocols)}")
    lines.append(f"experiment.seeds = {', '.join(str(s) for s in spec.seeds)}")
    lines.append(f"experiment.out_dir = {spec.out_dir}")
    return "\n".join(lines) + "\n"
