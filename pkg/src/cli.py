"""
Command-line entry point.

    python -m src.cli profile  --device eagle127@7 --shots 1024 --out reports/eagle127_profile.json
    python -m src.cli compile  --circuit bv_reuse(4,2) --device devices/small_hex_example.json --layout mera
    python -m src.cli schedule --circuit build/bv_reuse(4,2).qasm --device ... --dd cadd
    python -m src.cli simulate --circuit build/bv_reuse(4,2).qasm --device ... --shots 1024
    python -m src.cli bench    --device eagle127 --out-dir reports
    python -m src.cli report   --report reports/report.csv
    python -m src.cli tune     --device eagle127 --trials 30

Exit codes: 0 on success, 2 on invalid input or a violated invariant, 1 on anything else.
"""
import argparse
import sys
from dataclasses import replace
from pathlib import Path
from typing import List, Optional, Tuple

import pandas as pd

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent
sys.path.append(str(project_dir))

from src.benchmarks.generators import gen_benchmark, parse_benchmark
from src.circuit.ir import Circuit
from src.config import (COMPILERS, DD_MODES, DEFAULT_SUITE, DELTA_SWAP, EVAL_ITERATIONS, EVAL_SEED, EVAL_SHOTS,
                        LAYOUT_METHODS, LOOK_AHEAD, PROFILING_SHOTS, REPORTS_FOLDER, ROUTING_MODES, SCHEDULING_MODES,
                        TUNING_TRIALS)
from src.device import calibration
from src.evaluation.compiler import compile_circuit
from src.evaluation.objective import optimize_weights
from src.evaluation.run_eval import improvements, load_report, run_eval, save_report
from src.exceptions import (CircuitError, InvalidProfile, InvalidSpec, InvariantViolation, QasmError, SchemaError,
                            TooManyQubits, UnknownPreset, ZeroShots)
from src.layout.mera_layout import LayoutWeights, SeedWeights, weights_from_dict
from src.logging.logger import setup_logger
from src.profiling.profiler import profile_device
from src.qasm.emitter import emit_file
from src.qasm.parser import parse_file
from src.routing.router import RoutingConfig
from src.scheduling.alap import SCHEDULERS, dump_schedule
from src.scheduling.cadd import cadd_insert
from src.simulation.metrics import hellinger_fidelity
from src.simulation.noise import load_channels
from src.simulation.simulator import exact_distribution, run
from src.utils import load_from_json, save_to_json

# Setup logger
logger = setup_logger('cli_logger', 'logs', 'cli.log')

VALIDATION_ERRORS = (QasmError, SchemaError, InvariantViolation, CircuitError, InvalidSpec, UnknownPreset,
                     InvalidProfile, ZeroShots, TooManyQubits)


def _load_circuit(arg: str) -> Circuit:
    if arg.endswith('.qasm'):
        return parse_file(Path(arg))
    return gen_benchmark(parse_benchmark(arg))


def _circuit_name(arg: str) -> str:
    return Path(arg).stem if arg.endswith('.qasm') else parse_benchmark(arg).name


def _load_weights(args) -> Tuple[Optional[SeedWeights], Optional[LayoutWeights], RoutingConfig]:
    """Tuned weights from --weights; an explicit --delta-swap beats the tuned one."""
    params = load_from_json(Path(args.weights)) if args.weights else {}
    seed_weights, weights = weights_from_dict(params) if params else (None, None)
    delta_swap = args.delta_swap if args.delta_swap is not None else params.get('delta_swap', DELTA_SWAP)
    routing = RoutingConfig(look_ahead=args.look_ahead, delta_swap=delta_swap)
    if args.routing:
        routing = replace(routing, mode=args.routing)
    return seed_weights, weights, routing


# Subcommands
# -----------
def cmd_profile(args) -> None:
    device = calibration.load_device(args.device, args.seed)
    report = profile_device(device, shots=args.shots, seed=args.seed or 0, n_jobs=args.jobs)
    out = Path(args.out or project_dir / REPORTS_FOLDER / f'{device.name}_profile_report.json')
    report.save(out)
    if args.calibration_out:
        calibration.save(calibration.apply_profile(device, report), Path(args.calibration_out))
    print(report.to_frame().to_string(index=False))


def cmd_compile(args) -> None:
    device = calibration.load_device(args.device)
    circuit = _load_circuit(args.circuit)
    seed_weights, weights, routing = _load_weights(args)
    result = compile_circuit(circuit, device, args.compiler, seed_weights, weights, routing, n_jobs=args.jobs,
                             layout_method=args.layout, dd=args.dd, scheduling=args.scheduling)
    out_dir = Path(args.out_dir)
    name = _circuit_name(args.circuit)
    emit_file(result.scheduled, out_dir / f'{name}.{args.compiler}.qasm')
    dump_schedule(result.schedule, out_dir / f'{name}.{args.compiler}.schedule.json')
    save_to_json({
        'compiler': args.compiler,
        'initial_layout': {str(q): p for q, p in sorted(result.initial_layout.l2p.items())},
        'final_layout': {str(q): p for q, p in sorted(result.final_layout.l2p.items())},
        'path': result.path,
        'swap': result.swaps,
        'compile_time_s': result.compile_time_s,
    }, out_dir / f'{name}.{args.compiler}.layout.json')
    print(f"{name} [{args.compiler}]: path {result.path}, swaps {result.swaps}, "
          f"{result.compile_time_s:.3f} s -> {out_dir}")


def cmd_schedule(args) -> None:
    device = calibration.load_device(args.device)
    circuit = parse_file(Path(args.circuit))
    schedule = SCHEDULERS[args.scheduling](circuit, device)
    if args.dd == 'cadd':
        schedule = cadd_insert(schedule, device)
    out = Path(args.out or Path(args.circuit).with_suffix('.schedule.json'))
    dump_schedule(schedule, out)
    print(f"total {schedule.total} ns, {schedule.dd_count} DD pulses -> {out}")


def cmd_simulate(args) -> None:
    circuit = _load_circuit(args.circuit)
    device = calibration.load_device(args.device) if args.device else None
    channels = load_channels(device, Path(args.noise) if args.noise else None) if device else None
    counts = run(circuit, device, channels, shots=args.shots, seed=args.seed, n_jobs=args.jobs)
    summary = counts.to_dict()
    if args.reference:
        summary['fidelity'] = hellinger_fidelity(counts, exact_distribution(_load_circuit(args.reference)))
    if args.out:
        save_to_json(summary, Path(args.out))
    print(pd.Series(counts.counts).sort_index().to_string())
    if 'fidelity' in summary:
        print(f"fidelity {summary['fidelity']:.4f}")


def cmd_bench(args) -> None:
    device = calibration.load_device(args.device)
    seed_weights, weights, routing = _load_weights(args)
    report = run_eval(args.suite, device, args.compilers, args.iterations, args.shots, args.seed,
                      seed_weights, weights, n_jobs=args.jobs, routing=routing)
    paths = save_report(report, Path(args.out_dir))
    print(report.to_string(index=False))
    print(f"-> {paths['csv']}")


def cmd_report(args) -> None:
    report = load_report(Path(args.report))
    print(improvements(report, args.target).round(2).to_string())


def cmd_tune(args) -> None:
    device = calibration.load_device(args.device)
    best = optimize_weights(device, n_trials=args.trials, force=args.force)
    print(best)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='MCM-error-aware transpiler')
    parser.add_argument('--jobs', type=int, default=1, help='joblib workers')
    commands = parser.add_subparsers(dest='command', required=True)

    profile = commands.add_parser('profile', help='Estimate per-qubit MCM errors')
    profile.add_argument('--device', type=str, required=True, help='Calibration file or preset[:profile][@seed]')
    profile.add_argument('--shots', type=int, default=PROFILING_SHOTS, help='Shots per batch')
    profile.add_argument('--seed', type=int, default=None, help='Simulation seed')
    profile.add_argument('--out', type=str, help='Profiling report JSON')
    profile.add_argument('--calibration-out', type=str, help='Calibration file carrying the profiled MCM errors')
    profile.set_defaults(handler=cmd_profile)

    compile_ = commands.add_parser('compile', help='Layout, route and schedule one circuit')
    compile_.add_argument('--circuit', type=str, required=True, help='QASM file or benchmark spec')
    compile_.add_argument('--device', type=str, required=True, help='Calibration file or preset[:profile][@seed]')
    compile_.add_argument('--compiler', type=str, choices=COMPILERS, default='mera', help='Compiler variant')
    compile_.add_argument('--layout', type=str, choices=LAYOUT_METHODS, help='Replace the variant layout stage')
    compile_.add_argument('--routing', type=str, choices=ROUTING_MODES, help='Routing ranking for mera variants')
    compile_.add_argument('--scheduling', type=str, choices=SCHEDULING_MODES, default='alap', help='Timing policy')
    compile_.add_argument('--dd', type=str, choices=DD_MODES, help='Replace the variant decoupling choice')
    compile_.add_argument('--delta-swap', type=float, help=f'Level-1 tie window (default {DELTA_SWAP})')
    compile_.add_argument('--look-ahead', type=int, default=LOOK_AHEAD, help='Look-ahead 2Q layers')
    compile_.add_argument('--weights', type=str, help='Tuned weights JSON')
    compile_.add_argument('--out-dir', type=str, default='build', help='Output folder')
    compile_.set_defaults(handler=cmd_compile)

    schedule = commands.add_parser('schedule', help='ALAP schedule a physical circuit')
    schedule.add_argument('--circuit', type=str, required=True, help='Physical QASM file')
    schedule.add_argument('--device', type=str, required=True, help='Calibration file or preset[:profile][@seed]')
    schedule.add_argument('--scheduling', type=str, choices=SCHEDULING_MODES, default='alap', help='Timing policy')
    schedule.add_argument('--dd', type=str, choices=DD_MODES, default='cadd', help='Dynamical decoupling')
    schedule.add_argument('--out', type=str, help='Timeline JSON')
    schedule.set_defaults(handler=cmd_schedule)

    simulate = commands.add_parser('simulate', help='Sample a circuit on the noisy simulator')
    simulate.add_argument('--circuit', type=str, required=True, help='QASM file or benchmark spec')
    simulate.add_argument('--device', type=str, help='Calibration file or preset; noiseless when omitted')
    simulate.add_argument('--channels', '--noise', dest='noise', type=str, help='Noise channel overrides JSON')
    simulate.add_argument('--shots', type=int, default=EVAL_SHOTS, help='Shots')
    simulate.add_argument('--seed', type=int, default=EVAL_SEED, help='Seed')
    simulate.add_argument('--reference', type=str, help='Circuit whose exact distribution scores fidelity')
    simulate.add_argument('--out', type=str, help='Counts JSON')
    simulate.set_defaults(handler=cmd_simulate)

    bench = commands.add_parser('bench', help='Evaluate the benchmark suite')
    bench.add_argument('--suite', type=str, nargs='*', default=DEFAULT_SUITE, help='Benchmark specs')
    bench.add_argument('--device', type=str, default='eagle127', help='Calibration file or preset[:profile][@seed]')
    bench.add_argument('--compilers', type=str, nargs='*', choices=COMPILERS, default=list(COMPILERS))
    bench.add_argument('--iterations', type=int, default=EVAL_ITERATIONS, help='Iterations per cell')
    bench.add_argument('--shots', type=int, default=EVAL_SHOTS, help='Shots per iteration')
    bench.add_argument('--seed', type=int, default=EVAL_SEED, help='Base seed')
    bench.add_argument('--weights', type=str, help='Tuned weights JSON')
    bench.add_argument('--routing', type=str, choices=ROUTING_MODES, help='Routing ranking for mera variants')
    bench.add_argument('--delta-swap', type=float, help=f'Level-1 tie window (default {DELTA_SWAP})')
    bench.add_argument('--look-ahead', type=int, default=LOOK_AHEAD, help='Look-ahead 2Q layers')
    bench.add_argument('--out-dir', type=str, default=str(project_dir / REPORTS_FOLDER), help='Output folder')
    bench.set_defaults(handler=cmd_bench)

    report = commands.add_parser('report', help='Fidelity improvement over the baselines')
    report.add_argument('--report', type=str, required=True, help='Report CSV')
    report.add_argument('--target', type=str, choices=COMPILERS, default='mera', help='Compiler to compare')
    report.set_defaults(handler=cmd_report)

    tune = commands.add_parser('tune', help='Search layout and routing weights with optuna')
    tune.add_argument('--device', type=str, default='eagle127', help='Calibration file or preset[:profile][@seed]')
    tune.add_argument('--trials', type=int, default=TUNING_TRIALS, help='Number of trials')
    tune.add_argument('--force', action='store_true', help='Re-tune even if weights exist')
    tune.set_defaults(handler=cmd_tune)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.handler(args)
    except VALIDATION_ERRORS as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        logger.error(f"{args.command} failed unexpectedly: {e}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
