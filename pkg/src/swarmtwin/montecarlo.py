"""Batches of i.i.d. runs, curve aggregation, and the global-best reference PSO."""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Optional, Sequence

import numpy as np

from swarmtwin.comms import D2D, Cellular, scheme_from_dict, scheme_to_dict
from swarmtwin.engine import (
    ROUND_LIMIT,
    ConfigError,
    RoundObserver,
    RunResult,
    ScenarioConfig,
    _Recorder,
    initialize,
)
from swarmtwin.pso import pso_update
from swarmtwin.sensing import RunStreams, measure

SWEEP_PARAMS = ("scheme", "radius_r", "partners_k", "agent_count")
WORKERS_ENV = "SWARMTWIN_WORKERS"


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        workers = int(raw)
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV}: must be an integer, got {raw!r}") from None
    return max(workers, 1)


def _apply(config: ScenarioConfig, name: str, value: Any) -> ScenarioConfig:
    if name == "scheme":
        scheme = value if not isinstance(value, dict) else scheme_from_dict(value)
        return replace(config, scheme=scheme)
    if name == "radius_r":
        if not isinstance(config.scheme, D2D):
            raise ConfigError(f"sweep.radius_r: only applies to a d2d scheme, not {config.scheme.type}")
        return replace(config, scheme=D2D(float(value)))
    if name == "partners_k":
        if not isinstance(config.scheme, Cellular):
            raise ConfigError(f"sweep.partners_k: only applies to a cellular scheme, not {config.scheme.type}")
        return replace(config, scheme=Cellular(value))
    if name == "agent_count":
        return replace(config, agent_count=value)
    raise ConfigError(f"sweep: unknown parameter {name!r}, expected one of {SWEEP_PARAMS}")


@dataclass(frozen=True)
class Spec:
    index: int
    params: dict
    config: ScenarioConfig

    @property
    def label(self) -> str:
        if not self.params:
            return "base"
        parts = []
        for k, v in self.params.items():
            if k == "scheme":
                d = scheme_to_dict(v) if not isinstance(v, dict) else v
                v = d["type"] + "".join(f"({x})" for k2, x in d.items() if k2 != "type")
            parts.append(f"{k}={v}")
        return ",".join(parts)


@dataclass(frozen=True)
class BatchConfig:
    base: ScenarioConfig
    num_runs: int = 1
    # ordered (parameter, values) pairs; specs are their cartesian product
    sweep: tuple = ()

    def __post_init__(self):
        if isinstance(self.num_runs, bool) or not isinstance(self.num_runs, int) or self.num_runs < 1:
            raise ConfigError(f"num_runs: must be an integer >= 1, got {self.num_runs!r}")
        names = [name for name, _ in self.sweep]
        for name, values in self.sweep:
            if name not in SWEEP_PARAMS:
                raise ConfigError(f"sweep: unknown parameter {name!r}, expected one of {SWEEP_PARAMS}")
            if len(values) == 0:
                raise ConfigError(f"sweep.{name}: needs at least one value")
        if len(set(names)) != len(names):
            raise ConfigError(f"sweep: duplicate parameter in {names}")
        self.specs()  # validates every combination

    def specs(self) -> list[Spec]:
        # scheme first so radius_r / partners_k see the swept scheme
        order = sorted(range(len(self.sweep)), key=lambda i: self.sweep[i][0] != "scheme")
        names = [self.sweep[i][0] for i in range(len(self.sweep))]
        out = []
        for index, combo in enumerate(itertools.product(*(values for _, values in self.sweep))):
            config = self.base
            for i in order:
                config = _apply(config, names[i], combo[i])
            out.append(Spec(index, dict(zip(names, combo)), config))
        return out


@dataclass
class SpecSummary:
    spec: Spec
    runs: list[RunResult]
    mean_curve: np.ndarray
    std_curve: np.ndarray
    padded_fraction: np.ndarray   # share of runs carried forward at each round

    @property
    def finals(self) -> np.ndarray:
        return np.array([r.final_distance for r in self.runs])

    @property
    def mean_final(self) -> float:
        return float(self.finals.mean())

    @property
    def std_final(self) -> float:
        return _std(self.finals)

    @property
    def se_final(self) -> float:
        return self.std_final / np.sqrt(len(self.runs))

    @property
    def mean_rounds(self) -> float:
        return float(np.mean([r.rounds_executed for r in self.runs]))

    def fraction_converged(self, eps: float) -> float:
        """Share of runs whose final mean true distance is within ``eps`` meters."""
        return float(np.mean(self.finals <= eps))


@dataclass
class BatchResult:
    batch: BatchConfig
    specs: list[SpecSummary] = field(default_factory=list)

    def __getitem__(self, i: int) -> SpecSummary:
        return self.specs[i]


def _std(x: np.ndarray, axis=None):
    n = x.shape[0] if axis == 0 else x.size
    if n < 2:
        return np.zeros(x.shape[1:]) if axis == 0 else 0.0
    s = np.std(x, axis=axis, ddof=1)
    return s if axis == 0 else float(s)


def pad_curve(curve: np.ndarray, length: int) -> np.ndarray:
    """Carry the final value forward up to ``length`` entries."""
    if len(curve) >= length:
        return curve[:length]
    return np.concatenate([curve, np.full(length - len(curve), curve[-1], dtype=curve.dtype)])


def summarize(spec: Spec, runs: Sequence[RunResult]) -> SpecSummary:
    length = max(len(r.mean_true_distance) for r in runs)
    curves = np.stack([pad_curve(r.mean_true_distance, length) for r in runs])
    padded = np.stack([np.arange(length) >= len(r.mean_true_distance) for r in runs])
    return SpecSummary(spec, list(runs), curves.mean(axis=0), _std(curves, axis=0), padded.mean(axis=0))


def _run_task(task):
    from swarmtwin.engine import run

    spec_index, run_index, config = task
    try:
        return run(config, spec_index, run_index)
    except Exception as exc:
        raise RuntimeError(f"spec {spec_index}, run {run_index}: {exc}") from exc


def run_batch(batch: BatchConfig, workers: Optional[int] = None) -> BatchResult:
    """Run ``num_runs`` seeded runs per sweep specification and aggregate.

    Run seeds derive from (master_seed, spec index, run index), so results do
    not depend on ``workers`` or on completion order.
    """
    workers = default_workers() if workers is None else max(int(workers), 1)
    specs = batch.specs()
    tasks = [(s.index, k, s.config) for s in specs for k in range(batch.num_runs)]
    if workers == 1:
        results = [_run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    out = BatchResult(batch)
    for s in specs:
        chunk = results[s.index * batch.num_runs:(s.index + 1) * batch.num_runs]
        out.specs.append(summarize(s, chunk))
    return out


def oracle_global_pso(
    config: ScenarioConfig,
    spec_index: int = 0,
    run_index: int = 0,
    on_round: RoundObserver | None = None,
) -> RunResult:
    """Reference run with the true swarm-wide best and no communication at all.

    The scheme and the transmission budget are ignored. Draws come from the
    same streams as :func:`swarmtwin.engine.run`, so a run with full
    knowledge every round must match this trajectory exactly.
    """
    streams = RunStreams.derive(config.master_seed, spec_index, run_index)
    swarm = initialize(config, streams)
    n = config.agent_count
    rec = _Recorder(config)
    rec.record(swarm, 0)

    g = int(np.argmin(swarm.pbest_est))
    gbest_est, gbest_pos = float(swarm.pbest_est[g]), swarm.pbest_pos[g].copy()

    for t in range(1, config.max_rounds + 1):
        for i in range(n):
            if swarm.estimate[i] < swarm.pbest_est[i]:
                swarm.pbest_est[i] = swarm.estimate[i]
                swarm.pbest_pos[i] = swarm.position[i]
        g = int(np.argmin(swarm.pbest_est))
        if swarm.pbest_est[g] < gbest_est:
            gbest_est, gbest_pos = float(swarm.pbest_est[g]), swarm.pbest_pos[g].copy()
        swarm.nbest_est[:] = gbest_est
        swarm.nbest_pos[:] = gbest_pos

        r1, r2 = config.coeffs.draw(streams.motion, n)
        swarm.position, swarm.velocity = pso_update(
            swarm.position, swarm.velocity, swarm.pbest_pos, np.broadcast_to(gbest_pos, (n, 2)),
            config.coeffs, config.v_max, r1, r2,
        )
        swarm.estimate = measure(config.sensor, swarm.position, streams.sensing)
        rec.record(swarm, 0)
        if on_round is not None:
            on_round(t, swarm, None)

    return rec.result(config.digest(), ROUND_LIMIT, swarm)
