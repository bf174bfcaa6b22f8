import math

import optuna
import pytest

from src.config import LAYOUT_WEIGHTS, SEED_WEIGHTS
from src.evaluation.objective import objective, optimize_weights

SUITE = ['bv_reuse(4,2)', 'rus(4)']


def test_objective_scores_fixed_parameters(small_hex_device):
    params = {**SEED_WEIGHTS, **LAYOUT_WEIGHTS, 'delta_swap': 0.008}
    value = objective(optuna.trial.FixedTrial(params), small_hex_device, SUITE)
    assert math.isfinite(value) and value > 0


def test_best_weights_are_saved_and_reused(small_hex_device, tmp_path):
    path = tmp_path / 'weights.json'
    best = optimize_weights(small_hex_device, SUITE, n_trials=2, best_params_path=path, seed=0)
    assert path.exists()
    assert set(best) == set(SEED_WEIGHTS) | set(LAYOUT_WEIGHTS) | {'delta_swap'}
    assert optimize_weights(small_hex_device, SUITE, n_trials=50, best_params_path=path) == pytest.approx(best)
