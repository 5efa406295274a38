"""Noisy range estimates and the seeded random streams behind every run."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from swarmtwin.geometry import as_vec, distance

# Each run owns one independent stream per purpose, so a scheme that needs
# extra randomness (cellular partner draws) never shifts the sensing or
# motion draws of another scheme.
PURPOSES = {"init": 0, "sensing": 1, "motion": 2, "comms": 3}


def derive_rng(master_seed: int, spec_index: int, run_index: int, purpose: str) -> np.random.Generator:
    """Deterministic generator for one (spec, run, purpose) triple."""
    seq = np.random.SeedSequence([int(master_seed), int(spec_index), int(run_index), PURPOSES[purpose]])
    return np.random.Generator(np.random.PCG64(seq))


@dataclass(frozen=True)
class RunStreams:
    init: np.random.Generator
    sensing: np.random.Generator
    motion: np.random.Generator
    comms: np.random.Generator

    @classmethod
    def derive(cls, master_seed: int, spec_index: int = 0, run_index: int = 0) -> "RunStreams":
        return cls(**{p: derive_rng(master_seed, spec_index, run_index, p) for p in PURPOSES})


@dataclass(frozen=True)
class RangeSensor:
    sigma: float
    target: tuple[float, float]

    def __post_init__(self):
        if not (self.sigma >= 0 and np.isfinite(self.sigma)):
            raise ValueError(f"sigma must be a finite value >= 0, got {self.sigma!r}")


def measure(sensor: RangeSensor, p, rng: np.random.Generator):
    """Distance to the target plus one Gaussian error draw per position.

    ``p`` may be a single point or an ``(I, 2)`` array; one standard normal
    is drawn per point in row order. Negative estimates are clipped to 0.
    """
    p = as_vec(p)
    true = distance(p, sensor.target)
    noise = rng.standard_normal(np.shape(true))
    est = np.maximum(true + sensor.sigma * noise, 0.0)
    return float(est) if p.ndim == 1 else est
