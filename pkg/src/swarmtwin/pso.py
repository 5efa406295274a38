"""Agent memory and the neighborhood-best PSO update.

Two views of the same logic live here. ``AgentState`` / ``fuse_knowledge`` /
``step`` act on one agent and a list of received reports; ``SwarmState`` /
``fuse_swarm`` act on the whole swarm at once and are what the engine runs.
Both share :func:`pso_update`, and the test suite checks that the swarm
fusion matches the per-agent one.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from swarmtwin.geometry import as_vec, clamp_speed

R_DISTRIBUTIONS = ("uniform", "normal")


@dataclass(frozen=True)
class PsoCoefficients:
    c1: float = 2.0
    c2: float = 2.0
    # distribution of the two random scalars r1, r2
    r_distribution: str = "uniform"

    def __post_init__(self):
        if not (self.c1 >= 0 and self.c2 >= 0):
            raise ValueError(f"c1 and c2 must be >= 0, got c1={self.c1!r}, c2={self.c2!r}")
        if self.c1 == 0 and self.c2 == 0:
            raise ValueError("c1 and c2 must not both be zero")
        if self.r_distribution not in R_DISTRIBUTIONS:
            raise ValueError(f"r_distribution must be one of {R_DISTRIBUTIONS}, got {self.r_distribution!r}")

    def draw(self, rng: np.random.Generator, n: int | None = None) -> tuple:
        """Draw ``(r1, r2)``; with ``n`` given, arrays of length n in agent order."""
        shape = (2,) if n is None else (n, 2)
        if self.r_distribution == "uniform":
            r = rng.random(shape)
        else:
            r = rng.standard_normal(shape)
        return (float(r[0]), float(r[1])) if n is None else (r[:, 0], r[:, 1])


@dataclass(frozen=True)
class BestRecord:
    position: np.ndarray
    est_distance: float


@dataclass(frozen=True)
class AgentState:
    id: int
    position: np.ndarray
    velocity: np.ndarray
    personal_best: BestRecord
    neighborhood_best: BestRecord
    last_estimate: float


def pso_update(position, velocity, pbest, nbest, coeffs: PsoCoefficients, v_max: float, r1, r2):
    """One velocity/position update with the speed clamp.

    Works on a single agent (``(2,)`` vectors, scalar r's) or a swarm
    (``(I, 2)`` arrays, ``(I,)`` r's). Returns ``(new_position, new_velocity)``.
    """
    position, velocity = as_vec(position), as_vec(velocity)
    r1 = np.asarray(r1, dtype=np.float64)[..., None]
    r2 = np.asarray(r2, dtype=np.float64)[..., None]
    v = velocity + coeffs.c1 * r1 * (pbest - position) + coeffs.c2 * r2 * (nbest - position)
    v = clamp_speed(v, v_max)
    return position + v, v


def _check_report(pos, est):
    if not (est >= 0) or not np.all(np.isfinite(pos)):
        raise ValueError(f"corrupted report: position={pos!r}, est_distance={est!r}")


def fuse_knowledge(agent: AgentState, reports: Sequence[tuple]) -> AgentState:
    """Fold this round's own estimate and received reports into the agent's bests.

    ``reports`` holds ``(sender_id, position, est_distance)`` triples. The
    neighborhood best becomes the lowest estimate among the incumbent, the
    (updated) personal best and all reports. Among equal new candidates the
    lowest agent id wins; a candidate only replaces the incumbent if strictly
    better.
    """
    for _, pos, est in reports:
        _check_report(pos, est)

    personal = agent.personal_best
    if agent.last_estimate < personal.est_distance:
        personal = BestRecord(agent.position.copy(), agent.last_estimate)

    candidates = [(agent.id, personal.position, personal.est_distance)]
    candidates += [(j, as_vec(pos), float(est)) for j, pos, est in reports]
    _, pos, est = min(candidates, key=lambda c: (c[2], c[0]))

    nbest = agent.neighborhood_best
    if est < nbest.est_distance:
        nbest = BestRecord(np.array(pos, dtype=np.float64), est)
    return replace(agent, personal_best=personal, neighborhood_best=nbest)


def step(agent: AgentState, coeffs: PsoCoefficients, v_max: float, rng: np.random.Generator) -> AgentState:
    """Move one agent; consumes exactly two draws (r1 then r2) from ``rng``."""
    r1, r2 = coeffs.draw(rng)
    pos, vel = pso_update(
        agent.position, agent.velocity,
        agent.personal_best.position, agent.neighborhood_best.position,
        coeffs, v_max, r1, r2,
    )
    return replace(agent, position=pos, velocity=vel)


@dataclass
class SwarmState:
    """Structure-of-arrays state for all I agents (row i is agent i)."""

    position: np.ndarray        # (I, 2)
    velocity: np.ndarray        # (I, 2)
    pbest_pos: np.ndarray       # (I, 2)
    pbest_est: np.ndarray       # (I,)
    nbest_pos: np.ndarray       # (I, 2)
    nbest_est: np.ndarray       # (I,)
    estimate: np.ndarray        # (I,) latest d-hat

    @classmethod
    def seeded(cls, position, estimate) -> "SwarmState":
        position = as_vec(position)
        estimate = np.asarray(estimate, dtype=np.float64)
        return cls(
            position=position.copy(),
            velocity=np.zeros_like(position),
            pbest_pos=position.copy(),
            pbest_est=estimate.copy(),
            nbest_pos=position.copy(),
            nbest_est=estimate.copy(),
            estimate=estimate.copy(),
        )

    @property
    def size(self) -> int:
        return len(self.position)

    def agent(self, i: int) -> AgentState:
        return AgentState(
            id=i,
            position=self.position[i].copy(),
            velocity=self.velocity[i].copy(),
            personal_best=BestRecord(self.pbest_pos[i].copy(), float(self.pbest_est[i])),
            neighborhood_best=BestRecord(self.nbest_pos[i].copy(), float(self.nbest_est[i])),
            last_estimate=float(self.estimate[i]),
        )

    def copy(self) -> "SwarmState":
        return SwarmState(*(np.array(getattr(self, f)) for f in self.__dataclass_fields__))


def fuse_swarm(swarm: SwarmState, heard: np.ndarray) -> SwarmState:
    """Swarm-wide knowledge fusion.

    ``heard[i, j]`` is True when agent i received agent j's report of this
    round (the round-start position and estimate). Same semantics as
    :func:`fuse_knowledge` applied to every agent.
    """
    n = swarm.size
    improved = swarm.estimate < swarm.pbest_est
    pbest_est = np.where(improved, swarm.estimate, swarm.pbest_est)
    pbest_pos = np.where(improved[:, None], swarm.position, swarm.pbest_pos)

    # candidate matrix: off-diagonal are reports, diagonal is own personal best
    cand = np.where(heard, swarm.estimate[None, :], np.inf)
    idx = np.arange(n)
    cand[idx, idx] = pbest_est
    best_j = np.argmin(cand, axis=1)  # first minimum = lowest id
    best_est = cand[idx, best_j]
    best_pos = np.where((best_j == idx)[:, None], pbest_pos, swarm.position[best_j])

    better = best_est < swarm.nbest_est
    return replace(
        swarm,
        pbest_pos=pbest_pos,
        pbest_est=pbest_est,
        nbest_pos=np.where(better[:, None], best_pos, swarm.nbest_pos),
        nbest_est=np.where(better, best_est, swarm.nbest_est),
    )
