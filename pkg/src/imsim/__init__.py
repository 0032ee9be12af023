"""Round-based simulation of synchronous distributed graph algorithms."""

from imsim.engine import EngineConfig, KernelOutput, RunResult, SimulationAbort, run_kernel
from imsim.kernels import KERNELS, run
from imsim.metrics import Metrics, TraceRecord
from imsim.topology import GeneratorSpec, GraphInstance, generate

__all__ = [
    "EngineConfig",
    "GeneratorSpec",
    "GraphInstance",
    "KERNELS",
    "KernelOutput",
    "Metrics",
    "RunResult",
    "SimulationAbort",
    "TraceRecord",
    "generate",
    "run",
    "run_kernel",
]
