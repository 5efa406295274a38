"""One simulated run: sense, exchange, fuse, move, measure, repeat."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from swarmtwin.comms import CommScheme, RoundExchange, scheme_to_dict
from swarmtwin.geometry import distance
from swarmtwin.pso import PsoCoefficients, SwarmState, fuse_swarm, pso_update
from swarmtwin.sensing import RangeSensor, RunStreams, measure

BUDGET_MODES = ("realized", "conservative")
ROUND_LIMIT = "round-limit"
BUDGET_EXHAUSTED = "budget-exhausted"


class ConfigError(ValueError):
    """A configuration value is out of bounds; the message names the field."""


@dataclass(frozen=True)
class ScenarioConfig:
    agent_count: int
    scheme: CommScheme
    map_width: float = 640.0
    map_height: float = 600.0
    target: tuple[float, float] = (400.0, 300.0)
    sigma: float = 1.0
    v_max: float = 5.0
    coeffs: PsoCoefficients = field(default_factory=PsoCoefficients)
    max_rounds: int = 500
    tx_budget: Optional[int] = None
    budget_mode: str = "realized"
    master_seed: int = 0

    def __post_init__(self):
        def need(ok, name, what):
            if not ok:
                raise ConfigError(f"{name}: {what}, got {getattr(self, name)!r}")

        def is_int(x):
            return isinstance(x, (int, np.integer)) and not isinstance(x, bool)

        need(self.map_width > 0 and np.isfinite(self.map_width), "map_width", "must be > 0")
        need(self.map_height > 0 and np.isfinite(self.map_height), "map_height", "must be > 0")
        tx, ty = self.target
        need(0 <= tx <= self.map_width and 0 <= ty <= self.map_height, "target", "must lie on the map")
        need(is_int(self.agent_count) and self.agent_count >= 1, "agent_count", "must be an integer >= 1")
        need(self.sigma >= 0 and np.isfinite(self.sigma), "sigma", "must be >= 0")
        need(self.v_max > 0 and np.isfinite(self.v_max), "v_max", "must be > 0")
        need(is_int(self.max_rounds) and self.max_rounds >= 1, "max_rounds", "must be an integer >= 1")
        need(self.tx_budget is None or (is_int(self.tx_budget) and self.tx_budget >= 1),
             "tx_budget", "must be null or an integer >= 1")
        need(self.budget_mode in BUDGET_MODES, "budget_mode", f"must be one of {BUDGET_MODES}")
        need(is_int(self.master_seed) and 0 <= self.master_seed < 2**64, "master_seed", "must be a 64-bit unsigned integer")
        k = getattr(self.scheme, "partners_k", None)
        if k is not None and k > self.agent_count - 1:
            raise ConfigError(f"scheme.partners_k: must be <= agent_count - 1 = {self.agent_count - 1}, got {k!r}")

    @property
    def sensor(self) -> RangeSensor:
        return RangeSensor(self.sigma, tuple(self.target))

    def to_dict(self) -> dict:
        return {
            "map_width": float(self.map_width),
            "map_height": float(self.map_height),
            "target": [float(self.target[0]), float(self.target[1])],
            "agent_count": int(self.agent_count),
            "sigma": float(self.sigma),
            "v_max": float(self.v_max),
            "c1": float(self.coeffs.c1),
            "c2": float(self.coeffs.c2),
            "r_distribution": self.coeffs.r_distribution,
            "scheme": scheme_to_dict(self.scheme),
            "max_rounds": int(self.max_rounds),
            "tx_budget": None if self.tx_budget is None else int(self.tx_budget),
            "budget_mode": self.budget_mode,
            "master_seed": int(self.master_seed),
        }

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass(frozen=True)
class RoundMetrics:
    round_index: int
    mean_true_distance: float
    min_true_distance: float
    swarm_best_est: float
    cumulative_tx: int


@dataclass
class RunResult:
    """Per-round metric arrays; index 0 is the state right after initialization."""

    config_digest: str
    mean_true_distance: np.ndarray
    min_true_distance: np.ndarray
    swarm_best_est: np.ndarray
    cumulative_tx: np.ndarray
    termination_reason: str
    final_positions: np.ndarray

    @property
    def rounds_executed(self) -> int:
        return len(self.mean_true_distance) - 1

    @property
    def final_distance(self) -> float:
        return float(self.mean_true_distance[-1])

    def metrics(self, t: int) -> RoundMetrics:
        return RoundMetrics(
            t,
            float(self.mean_true_distance[t]),
            float(self.min_true_distance[t]),
            float(self.swarm_best_est[t]),
            int(self.cumulative_tx[t]),
        )

    @property
    def rounds(self) -> list[RoundMetrics]:
        """Metrics of every executed round (round 1 onward)."""
        return [self.metrics(t) for t in range(1, self.rounds_executed + 1)]


# on_round(t, swarm, exchange) is called after round t has completed;
# exchange is None when no scheme is involved (oracle runs).
RoundObserver = Callable[[int, SwarmState, Optional[RoundExchange]], None]


def initialize(config: ScenarioConfig, streams: RunStreams, start_positions=None) -> SwarmState:
    """Uniform random start positions, zero velocity, bests seeded from a first measurement.

    ``start_positions`` replaces the random placement (the init stream is
    still advanced so that the other streams are unaffected).
    """
    size = np.array([config.map_width, config.map_height])
    positions = streams.init.random((config.agent_count, 2)) * size
    if start_positions is not None:
        start = np.array(start_positions, dtype=np.float64)
        if start.shape != positions.shape or not np.all(np.isfinite(start)):
            raise ValueError(f"start_positions must be a finite {positions.shape} array")
        positions = start
    estimates = measure(config.sensor, positions, streams.sensing)
    return SwarmState.seeded(positions, estimates)


class _Recorder:
    def __init__(self, config: ScenarioConfig):
        self.target = np.asarray(config.target, dtype=np.float64)
        n = config.max_rounds + 1
        self.mean = np.empty(n)
        self.min = np.empty(n)
        self.best = np.empty(n)
        self.tx = np.zeros(n, dtype=np.int64)
        self.t = -1

    def record(self, swarm: SwarmState, cumulative_tx: int):
        self.t += 1
        d = distance(swarm.position, self.target)
        self.mean[self.t] = d.mean()
        self.min[self.t] = d.min()
        self.best[self.t] = swarm.pbest_est.min()
        self.tx[self.t] = cumulative_tx

    def result(self, digest: str, reason: str, swarm: SwarmState) -> RunResult:
        k = self.t + 1
        return RunResult(digest, self.mean[:k].copy(), self.min[:k].copy(), self.best[:k].copy(),
                         self.tx[:k].copy(), reason, swarm.position.copy())


def run(
    config: ScenarioConfig,
    spec_index: int = 0,
    run_index: int = 0,
    on_round: RoundObserver | None = None,
    start_positions=None,
) -> RunResult:
    """Execute one run.

    A round is only started if its whole transmission cost fits in what is
    left of ``tx_budget``. In ``realized`` budget mode the exchange is built
    first and its actual cost is checked; in ``conservative`` mode the
    scheme's worst-case cost is checked before building it.
    """
    streams = RunStreams.derive(config.master_seed, spec_index, run_index)
    swarm = initialize(config, streams, start_positions)
    rec = _Recorder(config)
    rec.record(swarm, 0)
    n = config.agent_count
    cumulative = 0
    reason = ROUND_LIMIT

    for t in range(1, config.max_rounds + 1):
        budget_left = None if config.tx_budget is None else config.tx_budget - cumulative
        if config.budget_mode == "conservative" and budget_left is not None:
            if config.scheme.worst_case_cost(n) > budget_left:
                reason = BUDGET_EXHAUSTED
                break
        exchange = config.scheme.exchange(swarm.position, swarm.estimate, streams.comms)
        if budget_left is not None and exchange.radio_tx_count > budget_left:
            reason = BUDGET_EXHAUSTED
            break
        cumulative += exchange.radio_tx_count

        swarm = fuse_swarm(swarm, exchange.heard)
        r1, r2 = config.coeffs.draw(streams.motion, n)
        swarm.position, swarm.velocity = pso_update(
            swarm.position, swarm.velocity, swarm.pbest_pos, swarm.nbest_pos,
            config.coeffs, config.v_max, r1, r2,
        )
        swarm.estimate = measure(config.sensor, swarm.position, streams.sensing)

        rec.record(swarm, cumulative)
        if on_round is not None:
            on_round(t, swarm, exchange)

    return rec.result(config.digest(), reason, swarm)
