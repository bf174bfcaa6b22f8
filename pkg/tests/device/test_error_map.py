import numpy as np
import pytest

from src.config import EAGLE_PROFILE, ZERO_PROFILE
from src.device.error_map import synth_error_map, uniform_device
from src.device.topology import eagle127, line
from src.exceptions import InvalidProfile


def test_same_seed_same_map():
    first = synth_error_map(eagle127(), 7)
    second = synth_error_map(eagle127(), 7)
    assert first.mcm_error == second.mcm_error
    assert first.e2q == second.e2q
    assert synth_error_map(eagle127(), 8).mcm_error != first.mcm_error


def test_eagle_profile_statistics(eagle_device):
    mcm = eagle_device.mcm_array
    assert mcm.min() >= EAGLE_PROFILE['min_mcm']
    assert mcm.max() <= EAGLE_PROFILE['max_mcm']
    assert mcm.mean() == pytest.approx(EAGLE_PROFILE['mean_mcm'], abs=0.01)
    assert (mcm >= EAGLE_PROFILE['tail_floor']).sum() >= round(EAGLE_PROFILE['heavy_tail_fraction'] * 127)
    lo, hi = EAGLE_PROFILE['e2q_range']
    assert all(lo <= e <= hi for e in eagle_device.e2q)
    assert np.all(np.asarray(eagle_device.t2) <= 2 * np.asarray(eagle_device.t1))


def test_zero_profile_is_noiseless():
    device = synth_error_map(line(4), 0, 'zero')
    assert not any(device.mcm_error)
    assert not any(device.e1q)
    assert not any(device.e2q)
    assert synth_error_map(line(4), 3, ZERO_PROFILE).mcm_error == device.mcm_error


def test_invalid_profiles():
    with pytest.raises(InvalidProfile):
        synth_error_map(line(3), 0, 'falcon')
    with pytest.raises(InvalidProfile):
        synth_error_map(line(3), 0, {**EAGLE_PROFILE, 'mean_mcm': 0.9})
    broken = dict(EAGLE_PROFILE)
    del broken['ro_range']
    with pytest.raises(InvalidProfile):
        synth_error_map(line(3), 0, broken)


def test_uniform_device():
    device = uniform_device(line(3), mcm_error=0.05, e2q=0.01)
    assert device.mcm_error == (0.05, 0.05, 0.05)
    assert device.e2q == (0.01, 0.01)
