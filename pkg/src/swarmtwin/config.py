"""YAML configuration documents for scenarios and batches.

Document layout::

    scenario:            # every key optional except agent_count and scheme
      agent_count: 50
      scheme: {type: d2d, radius_r: 100.0}
      ...
    batch:
      num_runs: 300
      sweep:
        - {param: radius_r, values: [50.0, 100.0]}

Lengths are meters, speeds meters per round.
"""

from __future__ import annotations

import copy
from dataclasses import fields
from pathlib import Path
from typing import Any, Iterable

import yaml

from swarmtwin.comms import scheme_from_dict, scheme_to_dict
from swarmtwin.engine import ConfigError, ScenarioConfig
from swarmtwin.montecarlo import BatchConfig
from swarmtwin.pso import PsoCoefficients

REQUIRED = ("agent_count", "scheme")
_DEFAULTS = {f.name: f.default for f in fields(ScenarioConfig) if f.name not in REQUIRED and f.name != "coeffs"}
_DEFAULTS["target"] = list(_DEFAULTS["target"])
_COEFF_DEFAULTS = {"c1": PsoCoefficients.c1, "c2": PsoCoefficients.c2, "r_distribution": PsoCoefficients.r_distribution}
SCENARIO_KEYS = set(REQUIRED) | set(_DEFAULTS) | set(_COEFF_DEFAULTS)
BATCH_KEYS = {"num_runs", "sweep"}


def _check_keys(d: Any, allowed: Iterable[str], where: str):
    if not isinstance(d, dict):
        raise ConfigError(f"{where}: expected a mapping, got {type(d).__name__}")
    unknown = sorted(set(d) - set(allowed))
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {unknown}")


def _wrap(fn, where):
    try:
        return fn()
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from None


def scenario_from_dict(d: dict) -> ScenarioConfig:
    _check_keys(d, SCENARIO_KEYS, "scenario")
    for key in REQUIRED:
        if key not in d:
            raise ConfigError(f"scenario.{key}: required")
    merged = {**_DEFAULTS, **_COEFF_DEFAULTS, **d}
    coeffs = _wrap(lambda: PsoCoefficients(float(merged.pop("c1")), float(merged.pop("c2")),
                                           merged.pop("r_distribution")), "scenario.coeffs")
    scheme = _wrap(lambda: scheme_from_dict(merged.pop("scheme")), "scenario.scheme")
    target = merged.pop("target")
    if not isinstance(target, (list, tuple)) or len(target) != 2:
        raise ConfigError(f"scenario.target: must be a pair [x, y], got {target!r}")
    for key in ("map_width", "map_height", "sigma", "v_max"):
        merged[key] = _wrap(lambda: float(merged[key]), f"scenario.{key}")
    return _wrap(lambda: ScenarioConfig(scheme=scheme, coeffs=coeffs,
                                        target=(float(target[0]), float(target[1])), **merged), "scenario")


def _sweep_values_to_doc(name, values):
    if name == "scheme":
        return [v if isinstance(v, dict) else scheme_to_dict(v) for v in values]
    return list(values)


def batch_from_dict(doc: dict) -> BatchConfig:
    _check_keys(doc, {"scenario", "batch"}, "config")
    if "scenario" not in doc:
        raise ConfigError("scenario: required")
    base = scenario_from_dict(doc["scenario"])
    b = doc.get("batch") or {}
    _check_keys(b, BATCH_KEYS, "batch")
    sweep = []
    for n, item in enumerate(b.get("sweep") or []):
        _check_keys(item, {"param", "values"}, f"batch.sweep[{n}]")
        if "param" not in item or not isinstance(item.get("values"), list):
            raise ConfigError(f"batch.sweep[{n}]: needs 'param' and a list of 'values'")
        values = item["values"]
        if item["param"] == "scheme":
            values = [_wrap(lambda v=v: scheme_from_dict(v), f"batch.sweep[{n}]") for v in values]
        sweep.append((item["param"], tuple(values)))
    return _wrap(lambda: BatchConfig(base, b.get("num_runs", 1), tuple(sweep)), "batch")


def batch_to_dict(batch: BatchConfig) -> dict:
    return {
        "scenario": batch.base.to_dict(),
        "batch": {
            "num_runs": batch.num_runs,
            "sweep": [{"param": name, "values": _sweep_values_to_doc(name, values)} for name, values in batch.sweep],
        },
    }


def dump(doc: dict) -> str:
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None)


def load_document(path: str | Path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from None
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config: invalid YAML in {path}: {str(exc).splitlines()[0]}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"config: top level of {path} must be a mapping")
    return doc


def apply_overrides(doc: dict, overrides: Iterable[str]) -> dict:
    """Apply ``key=value`` overrides; later ones win.

    Keys are dotted paths (``scenario.scheme.radius_r``). A bare scenario or
    batch key (``agent_count``) is resolved to its section. Values are parsed
    as YAML scalars or flow collections.
    """
    doc = copy.deepcopy(doc)
    for item in overrides:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"override: expected key=value, got {item!r}")
        path = key.split(".")
        if path[0] not in ("scenario", "batch"):
            if path[0] in SCENARIO_KEYS:
                path = ["scenario"] + path
            elif path[0] in BATCH_KEYS:
                path = ["batch"] + path
            else:
                raise ConfigError(f"override: unknown key {key!r}")
        try:
            value = yaml.safe_load(raw)
        except yaml.YAMLError:
            raise ConfigError(f"override: cannot parse value for {key!r}: {raw!r}") from None
        node = doc
        for part in path[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"override: {key!r} does not address a mapping")
        node[path[-1]] = value
    return doc


def load_batch(path: str | Path, overrides: Iterable[str] = ()) -> BatchConfig:
    return batch_from_dict(apply_overrides(load_document(path), overrides))


# Sweep values for radius and partner count are our own picks; the
# reference experiments do not publish theirs.
def _base(scheme: dict, agent_count: int = 50, **extra) -> dict:
    return {**_DEFAULTS, **_COEFF_DEFAULTS, "agent_count": agent_count, "scheme": scheme, **extra}


SCENARIOS = {
    "default": lambda: {
        "scenario": _base({"type": "digital_twin"}),
        "batch": {"num_runs": 300, "sweep": []},
    },
    "d2d-sweep": lambda: {
        "scenario": _base({"type": "d2d", "radius_r": 100.0}),
        "batch": {"num_runs": 300, "sweep": [{"param": "radius_r", "values": [50.0, 100.0, 200.0, 400.0, 900.0]}]},
    },
    "cellular-sweep": lambda: {
        "scenario": _base({"type": "cellular", "partners_k": 1}),
        "batch": {"num_runs": 300, "sweep": [{"param": "partners_k", "values": [1, 2, 5, 10, 49]}]},
    },
    "budget-dt-vs-cellular": lambda: {
        "scenario": _base({"type": "digital_twin"}, max_rounds=1000, tx_budget=1000),
        "batch": {
            "num_runs": 50,
            "sweep": [
                {"param": "scheme", "values": [{"type": "digital_twin"}, {"type": "cellular", "partners_k": None}]},
                {"param": "agent_count", "values": [10, 30, 50]},
            ],
        },
    },
}


def scenario_document(name: str) -> dict:
    """Ready-to-run document for a named scenario, in canonical key order."""
    if name not in SCENARIOS:
        raise ConfigError(f"scenario name {name!r} unknown; available: {', '.join(SCENARIOS)}")
    return batch_to_dict(batch_from_dict(SCENARIOS[name]()))
