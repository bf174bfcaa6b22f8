import argparse
import sys
from pathlib import Path
from typing import Dict, Optional, Sequence

import numpy as np
import optuna

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent.parent
sys.path.append(str(project_dir))

from src.benchmarks.generators import gen_benchmark, parse_benchmark
from src.config import REPORTS_FOLDER, TUNING_SUITE, TUNING_TRIALS
from src.device.calibration import load_device
from src.device.model import DeviceModel
from src.evaluation.compiler import compile_circuit
from src.layout.mera_layout import weights_from_dict
from src.logging.logger import setup_logger
from src.routing.router import RoutingConfig
from src.simulation.metrics import estimated_success_probability
from src.utils import load_from_json, save_to_json

# Setup logger
ROOT_DIR = project_dir
logger = setup_logger('objective_logger', 'logs', 'objective_logger.log')

ESP_FLOOR = 1e-300


def objective(trial: optuna.trial.Trial, device: DeviceModel, suite: Sequence[str]) -> float:
    """Mean negative log ESP of the tuning suite compiled with the trial's weights."""
    parameters = {
        'alpha': trial.suggest_float('alpha', 0.0, 1.0),
        'beta': trial.suggest_float('beta', 0.0, 1.0),
        'gamma': trial.suggest_float('gamma', 0.0, 1.0),
        'delta': trial.suggest_float('delta', 0.0, 1.0),
        'epsilon': trial.suggest_float('epsilon', 0.0, 1.0),
        'w_dist': trial.suggest_float('w_dist', 0.0, 1.0),
        'w_mcm': trial.suggest_float('w_mcm', 0.0, 1.0),
        'w_2q': trial.suggest_float('w_2q', 0.0, 1.0),
        'w_1q': trial.suggest_float('w_1q', 0.0, 1.0),
        'w_ro': trial.suggest_float('w_ro', 0.0, 1.0),
        'delta_swap': trial.suggest_float('delta_swap', 0.0, 0.05),
    }

    logger.info(f"Starting trial {trial.number} with parameters: {parameters}")

    seed_weights, weights = weights_from_dict(parameters)
    routing = RoutingConfig(delta_swap=parameters['delta_swap'])
    scores = []
    for step, text in enumerate(suite):
        circuit = gen_benchmark(parse_benchmark(text))
        try:
            result = compile_circuit(circuit, device, 'mera-no-cadd', seed_weights, weights, routing)
        except Exception as e:
            logger.error(f"Failed to compile {text} in trial {trial.number}: {e}", exc_info=True)
            continue
        esp = estimated_success_probability(result.routed, device)
        scores.append(-np.log(max(esp, ESP_FLOOR)))
        trial.report(float(np.mean(scores)), step=step)

    if scores:
        logger.info(f"Trial {trial.number} completed with mean -log ESP: {np.mean(scores):.6f}")
    return float(np.mean(scores)) if scores else float('inf')


def optimize_weights(device: DeviceModel, suite: Sequence[str] = TUNING_SUITE, n_trials: int = TUNING_TRIALS,
                     best_params_path: Optional[Path] = None, seed: int = 0, force: bool = False) -> Dict:
    best_params_path = best_params_path or ROOT_DIR / REPORTS_FOLDER / f'{device.name}_best_weights.json'

    # Check if best weights already exist
    if best_params_path.exists() and not force:
        logger.info(f"Best weights already found for {device.name}. Loading from file.")
        found_params = load_from_json(best_params_path)
        logger.info(f"Best weights: {found_params}")
        return found_params

    logger.info("Optimizing layout and routing weights")
    study = optuna.create_study(direction='minimize', study_name=f'{device.name}_study',
                                sampler=optuna.samplers.TPESampler(seed=seed))
    study.optimize(lambda t: objective(t, device, suite), n_trials=n_trials)

    best_trial = study.best_trial
    logger.info(f"Best trial value: {best_trial.value:.4f}")
    for key, value in best_trial.params.items():
        logger.info(f"    {key}: {value}")

    save_to_json(best_trial.params, best_params_path)
    logger.info(f"Best weights saved at {best_params_path}")
    return best_trial.params


if __name__ == '__main__':
    parser = argparse.ArgumentParser(description='Search layout and routing weights')
    parser.add_argument('--device', type=str, default='eagle127', help='Calibration file or preset[:profile][@seed]')
    parser.add_argument('--trials', type=int, default=TUNING_TRIALS, help='Number of optuna trials')

    args = parser.parse_args()
    optimize_weights(load_device(args.device), n_trials=args.trials)
