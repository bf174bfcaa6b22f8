import numpy as np

from src.utils import load_from_json, merge_params, save_to_json


def test_numpy_values_are_saved_as_builtins(tmp_path):
    path = tmp_path / 'nested' / 'values.json'
    save_to_json({'array': np.arange(3), 'scalar': np.float64(0.5), 'keys': {1: np.int64(2)}}, path)
    assert load_from_json(path) == {'array': [0, 1, 2], 'scalar': 0.5, 'keys': {'1': 2}}


def test_missing_file_yields_empty_dict(tmp_path):
    assert load_from_json(tmp_path / 'absent.json') == {}


def test_merge_params_ignores_unknown_keys():
    merged = merge_params({'gate': True, 'idle': True}, {'idle': False, 'bogus': 1})
    assert merged == {'gate': True, 'idle': False}
