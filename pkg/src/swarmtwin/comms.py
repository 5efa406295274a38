"""Who hears whom each round, and what it costs in radio transmissions.

Every scheme turns the round-start snapshot (positions and estimates of all
agents) into a :class:`RoundExchange`: a boolean matrix ``heard[i, j]``
meaning "agent i received agent j's report", plus the number of successful
radio transmissions spent. All links are lossless.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from swarmtwin.geometry import as_vec


@dataclass(frozen=True)
class RoundExchange:
    heard: np.ndarray           # (I, I) bool, diagonal False
    positions: np.ndarray       # (I, 2) round-start snapshot
    estimates: np.ndarray       # (I,)
    radio_tx_count: int

    def senders(self, i: int) -> list[int]:
        return np.flatnonzero(self.heard[i]).tolist()

    def reports_for(self, i: int) -> list[tuple[int, np.ndarray, float]]:
        return [(j, self.positions[j], float(self.estimates[j])) for j in self.senders(i)]


def _snapshot(positions, estimates):
    positions = as_vec(positions).reshape(-1, 2)
    estimates = np.asarray(estimates, dtype=np.float64).reshape(-1)
    if len(positions) != len(estimates):
        raise ValueError(f"{len(positions)} positions but {len(estimates)} estimates")
    return positions, estimates


def exchange_d2d(positions, estimates, radius_r: float, rng=None) -> RoundExchange:
    """Every agent inquires every other agent within ``radius_r`` (inclusive).

    Each ordered inquiry costs a request and a reply, so the round costs
    ``2 * sum_i |neighbors(i)|``; at full connectivity that is ``2I(I-1)``.
    """
    if not radius_r > 0:
        raise ValueError(f"radius_r must be > 0, got {radius_r!r}")
    positions, estimates = _snapshot(positions, estimates)
    dx = positions[:, None, 0] - positions[None, :, 0]
    dy = positions[:, None, 1] - positions[None, :, 1]
    heard = np.hypot(dx, dy) <= radius_r
    np.fill_diagonal(heard, False)
    return RoundExchange(heard, positions, estimates, 2 * int(heard.sum()))


def exchange_cellular(positions, estimates, partners_k: int, rng: np.random.Generator) -> RoundExchange:
    """Base-station relayed sessions with ``partners_k`` random partners each.

    Agent i (in id order) picks K distinct partners uniformly from the other
    agents. A session i->j delivers j's report to i and i's report to j and
    costs 4 transmissions; sessions i->j and j->i are both paid for. The
    round therefore costs ``4IK``.
    """
    positions, estimates = _snapshot(positions, estimates)
    n = len(positions)
    if not 0 <= partners_k <= max(n - 1, 0) or (partners_k == 0 and n > 1):
        raise ValueError(f"partners_k must be in [1, {n - 1}] for {n} agents, got {partners_k!r}")
    initiated = np.zeros((n, n), dtype=bool)
    if partners_k > 0:
        # random sort keys per row; the K smallest off-diagonal keys are the partners
        keys = rng.random((n, n))
        np.fill_diagonal(keys, np.inf)
        chosen = np.argpartition(keys, partners_k - 1, axis=1)[:, :partners_k]
        initiated[np.arange(n)[:, None], chosen] = True
    heard = initiated | initiated.T
    return RoundExchange(heard, positions, estimates, 4 * n * partners_k)


def exchange_digital_twin(positions, estimates, rng=None) -> RoundExchange:
    """One uplink offload and one downlink decision per agent; twins share freely."""
    positions, estimates = _snapshot(positions, estimates)
    n = len(positions)
    heard = ~np.eye(n, dtype=bool)
    return RoundExchange(heard, positions, estimates, 2 * n)


@dataclass(frozen=True)
class D2D:
    radius_r: float
    type: ClassVar[str] = "d2d"

    def __post_init__(self):
        if not (self.radius_r > 0 and np.isfinite(self.radius_r)):
            raise ValueError(f"scheme.radius_r must be > 0, got {self.radius_r!r}")

    def worst_case_cost(self, n: int) -> int:
        return 2 * n * (n - 1)

    def exchange(self, positions, estimates, rng=None) -> RoundExchange:
        return exchange_d2d(positions, estimates, self.radius_r)


@dataclass(frozen=True)
class Cellular:
    # None means full exchange, K = I - 1
    partners_k: int | None = None
    type: ClassVar[str] = "cellular"

    def __post_init__(self):
        k = self.partners_k
        if k is not None and (isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 1):
            raise ValueError(f"scheme.partners_k must be an integer >= 1 or null, got {self.partners_k!r}")

    def k_for(self, n: int) -> int:
        return n - 1 if self.partners_k is None else int(self.partners_k)

    def worst_case_cost(self, n: int) -> int:
        return 4 * n * self.k_for(n)

    def exchange(self, positions, estimates, rng=None) -> RoundExchange:
        return exchange_cellular(positions, estimates, self.k_for(len(estimates)), rng)


@dataclass(frozen=True)
class DigitalTwin:
    type: ClassVar[str] = "digital_twin"

    def worst_case_cost(self, n: int) -> int:
        return 2 * n

    def exchange(self, positions, estimates, rng=None) -> RoundExchange:
        return exchange_digital_twin(positions, estimates)


CommScheme = D2D | Cellular | DigitalTwin
SCHEMES = {cls.type: cls for cls in (D2D, Cellular, DigitalTwin)}


def scheme_to_dict(scheme: CommScheme) -> dict:
    if isinstance(scheme, D2D):
        return {"type": scheme.type, "radius_r": float(scheme.radius_r)}
    if isinstance(scheme, Cellular):
        return {"type": scheme.type, "partners_k": scheme.partners_k}
    return {"type": scheme.type}


def scheme_from_dict(d: dict) -> CommScheme:
    if not isinstance(d, dict) or "type" not in d:
        raise ValueError(f"scheme must be a mapping with a 'type' key, got {d!r}")
    d = dict(d)
    kind = d.pop("type")
    if kind not in SCHEMES:
        raise ValueError(f"scheme.type must be one of {sorted(SCHEMES)}, got {kind!r}")
    allowed = {"d2d": {"radius_r"}, "cellular": {"partners_k"}, "digital_twin": set()}[kind]
    unknown = set(d) - allowed
    if unknown:
        raise ValueError(f"unknown key(s) for {kind} scheme: {sorted(unknown)}")
    if kind == "d2d":
        if "radius_r" not in d:
            raise ValueError("scheme.radius_r is required for d2d")
        return D2D(float(d["radius_r"]))
    if kind == "cellular":
        return Cellular(d.get("partners_k"))
    return DigitalTwin()
