"""
Compilation pipelines: layout, routing and scheduling for each compiler variant.

- mera: MCM-aware layout, two-level routing, ALAP (or ASAP) + CADD
- mera-no-cadd: as mera without dynamical decoupling
- distance-only: noise-unaware layout, Level-1 routing, ALAP
- worst: highest-MCM-cost contiguous mapping, Level-1 routing, ALAP
"""
import sys
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent.parent
sys.path.append(str(project_dir))

from src.benchmarks.baselines import worst_mapping
from src.circuit.analysis import count_swaps, critical_path_length
from src.circuit.ir import Circuit
from src.config import COMPILERS, DD_MODES, LAYOUT_METHODS, SCHEDULING_MODES
from src.device.model import DeviceModel
from src.exceptions import InvariantViolation
from src.layout.mera_layout import Layout, LayoutWeights, SeedWeights, select_layout, trivial_layout
from src.logging.logger import setup_logger
from src.routing.router import RoutingConfig, route
from src.scheduling.alap import SCHEDULERS, Schedule
from src.scheduling.cadd import cadd_insert

# Setup logger
logger = setup_logger('compiler_logger', 'logs', 'compiler.log')


@dataclass(frozen=True)
class CompileResult:
    compiler: str
    source: Circuit
    initial_layout: Layout
    final_layout: Layout
    routed: Circuit
    schedule: Schedule
    compile_time_s: float

    @property
    def path(self) -> int:
        """Critical path of the routed circuit; DD pulses are not counted."""
        return critical_path_length(self.routed)

    @property
    def swaps(self) -> int:
        return count_swaps(self.routed) - count_swaps(self.source)

    @property
    def scheduled(self) -> Circuit:
        return self.schedule.circuit


def compile_circuit(circuit: Circuit, device: DeviceModel, compiler: str = 'mera',
                    seed_weights: Optional[SeedWeights] = None, weights: Optional[LayoutWeights] = None,
                    routing: Optional[RoutingConfig] = None, n_jobs: int = 1,
                    layout_method: Optional[str] = None, dd: Optional[str] = None,
                    scheduling: str = 'alap') -> CompileResult:
    """Run the pipeline of ``compiler``; tuned weights apply to the mera variants only.

    ``layout_method`` and ``dd`` replace the variant's layout stage and decoupling choice;
    ``scheduling`` picks the timing policy.
    """
    if compiler not in COMPILERS:
        raise InvariantViolation(f"unknown compiler '{compiler}', expected one of {COMPILERS}")
    if layout_method is not None and layout_method not in LAYOUT_METHODS:
        raise InvariantViolation(f"unknown layout method '{layout_method}', expected one of {LAYOUT_METHODS}")
    if dd is not None and dd not in DD_MODES:
        raise InvariantViolation(f"unknown DD mode '{dd}', expected one of {DD_MODES}")
    if scheduling not in SCHEDULING_MODES:
        raise InvariantViolation(f"unknown scheduling policy '{scheduling}', expected one of {SCHEDULING_MODES}")
    routing = routing or RoutingConfig()
    if compiler not in ('mera', 'mera-no-cadd'):
        routing = replace(routing, mode='distance-only')
    if layout_method is None:
        layout_method = {'distance-only': 'distance-only', 'worst': 'worst'}.get(compiler, 'mera')
    if dd is None:
        dd = 'cadd' if compiler == 'mera' else 'none'
    started = time.perf_counter()
    try:
        if layout_method == 'mera':
            layout = select_layout(circuit, device, seed_weights, weights, n_jobs=n_jobs)
        elif layout_method == 'distance-only':
            layout = select_layout(circuit, device, SeedWeights.distance_only(), LayoutWeights.distance_only(),
                                   n_jobs=n_jobs)
        elif layout_method == 'trivial':
            layout = trivial_layout(circuit, device)
        else:
            layout = worst_mapping(circuit, device)
        routed, final = route(circuit, layout, device, routing)
        schedule = SCHEDULERS[scheduling](routed, device)
        if dd == 'cadd':
            schedule = cadd_insert(schedule, device)
    except Exception as e:
        logger.error(f"Compilation with '{compiler}' failed: {e}", exc_info=True)
        raise
    elapsed = time.perf_counter() - started
    result = CompileResult(compiler, circuit, layout, final, routed, schedule, elapsed)
    logger.info(f"{compiler}: path {result.path}, {result.swaps} swaps, {elapsed:.3f} s")
    return result
