"""Swarm source localization under D2D, cellular and digital-twin networking."""

__version__ = "0.1.0"

from swarmtwin.comms import D2D, Cellular, DigitalTwin, RoundExchange
from swarmtwin.engine import RunResult, ScenarioConfig, initialize, run
from swarmtwin.montecarlo import BatchConfig, BatchResult, oracle_global_pso, run_batch
from swarmtwin.pso import PsoCoefficients

__all__ = [
    "BatchConfig",
    "BatchResult",
    "Cellular",
    "D2D",
    "DigitalTwin",
    "PsoCoefficients",
    "RoundExchange",
    "RunResult",
    "ScenarioConfig",
    "initialize",
    "oracle_global_pso",
    "run",
    "run_batch",
]
