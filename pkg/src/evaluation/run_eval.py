"""
Evaluation harness: compile every benchmark with every compiler, simulate, and tabulate.

Each (benchmark, compiler) cell runs ``iterations`` simulations of ``shots`` shots, with
iteration i seeded by ``seed + i``. Fidelity is the Hellinger fidelity against the exact
noiseless distribution of the source circuit; Attempts sums the MCMs executed over all
iterations (RUS benchmarks only). Cells whose circuits exceed the simulator cap keep their
compile metrics and leave fidelity and attempts empty.
"""
import argparse
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent.parent
sys.path.append(str(project_dir))

from src.benchmarks.generators import BenchmarkSpec, gen_benchmark, parse_benchmark
from src.circuit.ir import Circuit
from src.config import (COMPILERS, DEFAULT_SUITE, EVAL_ITERATIONS, EVAL_SEED, EVAL_SHOTS, MAX_SIM_QUBITS,
                        REPORT_COLUMNS, REPORTS_FOLDER)
from src.device.calibration import load_device
from src.device.model import DeviceModel
from src.evaluation.compiler import CompileResult, compile_circuit
from src.exceptions import TooManyQubits
from src.layout.mera_layout import LayoutWeights, SeedWeights
from src.logging.logger import setup_logger
from src.routing.router import RoutingConfig
from src.simulation.metrics import attempts_metric, estimated_success_probability, hellinger_fidelity
from src.simulation.simulator import exact_distribution, run
from src.utils import save_to_json

# Setup logger
logger = setup_logger('run_eval_logger', 'logs', 'run_eval.log')


def empty_report() -> pd.DataFrame:
    return pd.DataFrame(columns=REPORT_COLUMNS)


def simulate_result(result: CompileResult, device: DeviceModel, reference: Dict[str, float],
                    iterations: int, shots: int, seed: int, n_jobs: int = 1) -> Dict[str, Optional[float]]:
    fidelities: List[float] = []
    attempts = 0
    for i in range(iterations):
        counts = run(result.scheduled, device, shots=shots, seed=seed + i, schedule=result.schedule,
                     n_jobs=n_jobs)
        fidelities.append(hellinger_fidelity(counts, reference))
        if result.source.is_rus:
            attempts += attempts_metric(result.scheduled, counts)
    return {
        'fidelity': float(np.mean(fidelities)),
        'fidelity_std': float(np.std(fidelities)),
        'attempts': attempts if result.source.is_rus else None,
    }


def evaluate_cell(spec: BenchmarkSpec, circuit: Circuit, device: DeviceModel, compiler: str,
                  reference: Optional[Dict[str, float]], iterations: int, shots: int, seed: int,
                  seed_weights: Optional[SeedWeights] = None, weights: Optional[LayoutWeights] = None,
                  n_jobs: int = 1, routing: Optional[RoutingConfig] = None) -> Dict:
    result = compile_circuit(circuit, device, compiler, seed_weights, weights, routing, n_jobs=n_jobs)
    row = {
        'benchmark': spec.name,
        'compiler': compiler,
        'qubits': circuit.num_qubits,
        'path': result.path,
        'swap': result.swaps,
        'fidelity': None,
        'fidelity_std': None,
        'attempts': None,
        'esp': estimated_success_probability(result.routed, device),
        'compile_time_s': result.compile_time_s,
        'shots': shots,
        'iterations': iterations,
        'seed': seed,
    }
    if reference is not None:
        try:
            row.update(simulate_result(result, device, reference, iterations, shots, seed, n_jobs))
        except TooManyQubits as e:
            logger.warning(f"{spec.name}/{compiler}: fidelity left empty ({e})")
    return row


def run_eval(suite: Sequence[str], device: DeviceModel, compilers: Sequence[str] = COMPILERS,
             iterations: int = EVAL_ITERATIONS, shots: int = EVAL_SHOTS, seed: int = EVAL_SEED,
             seed_weights: Optional[SeedWeights] = None, weights: Optional[LayoutWeights] = None,
             n_jobs: int = 1, routing: Optional[RoutingConfig] = None) -> pd.DataFrame:
    """One report row per (benchmark, compiler), columns in REPORT_COLUMNS order."""
    rows = []
    for text in suite:
        spec = parse_benchmark(text)
        circuit = gen_benchmark(spec)
        reference = exact_distribution(circuit) if len(circuit.used_qubits()) <= MAX_SIM_QUBITS else None
        if reference is None:
            logger.warning(f"{spec.name} has more than {MAX_SIM_QUBITS} active qubits; skipping simulation")
        for compiler in compilers:
            logger.info(f"Evaluating {spec.name} with {compiler}")
            rows.append(evaluate_cell(spec, circuit, device, compiler, reference, iterations, shots, seed,
                                      seed_weights, weights, n_jobs, routing))
    if not rows:
        return empty_report()
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def improvements(report: pd.DataFrame, target: str = 'mera') -> pd.DataFrame:
    """Percent fidelity improvement of ``target`` over every other compiler, per benchmark."""
    table = report.pivot_table(index='benchmark', columns='compiler', values='fidelity', aggfunc='mean')
    if target not in table.columns:
        return pd.DataFrame(index=table.index)
    gains = {
        f"vs_{baseline}": (table[target] - table[baseline]) / table[baseline] * 100.0
        for baseline in table.columns if baseline != target
    }
    return pd.DataFrame(gains, index=table.index)


def save_report(report: pd.DataFrame, out_dir: Path, name: str = 'report') -> Dict[str, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f'{name}.csv'
    json_path = out_dir / f'{name}.json'
    report.to_csv(csv_path, index=False, columns=REPORT_COLUMNS)
    save_to_json({'columns': REPORT_COLUMNS, 'rows': report.to_dict(orient='records')}, json_path)
    logger.info(f"Report saved to {csv_path} and {json_path}")
    return {'csv': csv_path, 'json': json_path}


def load_report(path: Path) -> pd.DataFrame:
    return pd.read_csv(path)


def main(suite: Sequence[str], device_arg: str, out_dir: Path, iterations: int, shots: int, seed: int) -> None:
    device = load_device(device_arg)
    report = run_eval(suite, device, iterations=iterations, shots=shots, seed=seed)
    save_report(report, out_dir)
    logger.info(f"\n{improvements(report).round(2)}")


if __name__ == '__main__':
    parser = argparse.ArgumentParser(description='Benchmark evaluation')
    parser.add_argument('--suite', type=str, nargs='*', default=DEFAULT_SUITE, help='Benchmark specs')
    parser.add_argument('--device', type=str, default='eagle127', help='Calibration file or preset[:profile][@seed]')
    parser.add_argument('--out-dir', type=Path, default=project_dir / REPORTS_FOLDER, help='Output folder')
    parser.add_argument('--iterations', type=int, default=EVAL_ITERATIONS, help='Simulation iterations')
    parser.add_argument('--shots', type=int, default=EVAL_SHOTS, help='Shots per iteration')
    parser.add_argument('--seed', type=int, default=EVAL_SEED, help='Base simulation seed')

    args = parser.parse_args()
    main(args.suite, args.device, args.out_dir, args.iterations, args.shots, args.seed)
