"""
Synthetic calibration maps.

MCM errors follow a log-normal body plus a fixed fraction of uniform outliers drawn
from [tail_floor, max_mcm]; the body is rescaled so the map's empirical mean matches
``mean_mcm``. All sampling is a pure function of (topology, seed, profile).
"""
import sys
from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent.parent
sys.path.append(str(project_dir))

from src.config import ERROR_PROFILES
from src.device.model import DeviceModel, Durations
from src.device.topology import Topology
from src.exceptions import InvalidProfile
from src.logging.logger import setup_logger

# Setup logger
logger = setup_logger('error_map_logger', 'logs', 'error_map.log')

PROFILE_KEYS = ('mean_mcm', 'max_mcm', 'min_mcm', 'heavy_tail_fraction', 'e1q_range', 'e2q_range', 'ro_range')


def resolve_profile(profile: Union[str, Dict]) -> Dict:
    if isinstance(profile, str):
        if profile not in ERROR_PROFILES:
            raise InvalidProfile(f"unknown error profile '{profile}'; choose from {sorted(ERROR_PROFILES)}")
        return dict(ERROR_PROFILES[profile])
    merged = dict(ERROR_PROFILES['eagle'])
    merged.update(profile)
    return merged


def _check_profile(profile: Dict):
    missing = [k for k in PROFILE_KEYS if k not in profile]
    if missing:
        raise InvalidProfile(f"profile is missing {missing}")
    lo, mean, hi = profile['min_mcm'], profile['mean_mcm'], profile['max_mcm']
    if not 0.0 <= lo <= mean <= hi <= 1.0:
        raise InvalidProfile(f"need 0 <= min <= mean <= max <= 1, got {lo}, {mean}, {hi}")
    if not 0.0 <= profile['heavy_tail_fraction'] <= 1.0:
        raise InvalidProfile("heavy_tail_fraction must lie in [0, 1]")
    for key in ('e1q_range', 'e2q_range', 'ro_range'):
        a, b = profile[key]
        if not 0.0 <= a <= b <= 1.0:
            raise InvalidProfile(f"{key} must satisfy 0 <= low <= high <= 1")
    t1_lo, t1_hi = profile.get('t1_range', (1.0, 1.0))
    r_lo, r_hi = profile.get('t2_ratio_range', (1.0, 1.0))
    if not 0 < t1_lo <= t1_hi or not 0 < r_lo <= r_hi <= 2.0:
        raise InvalidProfile("t1_range must be positive and t2_ratio_range within (0, 2]")


def _sample_mcm(rng: np.random.Generator, n: int, profile: Dict) -> np.ndarray:
    lo, mean, hi = profile['min_mcm'], profile['mean_mcm'], profile['max_mcm']
    if n == 0 or hi == 0.0:
        return np.zeros(n)
    n_tail = int(round(profile['heavy_tail_fraction'] * n))
    tail_idx = rng.choice(n, size=n_tail, replace=False) if n_tail else np.array([], dtype=int)
    body_mask = np.ones(n, dtype=bool)
    body_mask[tail_idx] = False

    floor = min(profile.get('tail_floor', 0.1), hi)
    tail = rng.uniform(floor, hi, size=n_tail)

    sigma = profile.get('body_sigma', 0.8)
    n_body = int(body_mask.sum())
    body = rng.lognormal(mean=0.0, sigma=sigma, size=n_body)
    body_target = mean * n - tail.sum()
    if n_body and body_target > 0:
        body *= body_target / body.sum()
    else:
        body[:] = lo

    values = np.empty(n)
    values[tail_idx] = tail
    values[body_mask] = body
    return np.clip(values, lo, hi)


def synth_error_map(topology: Topology, seed: int, profile: Union[str, Dict] = 'eagle',
                    durations: Optional[Durations] = None) -> DeviceModel:
    """Deterministic synthetic calibration for a topology."""
    profile = resolve_profile(profile)
    _check_profile(profile)
    rng = np.random.default_rng(seed)
    n = topology.num_qubits

    mcm = _sample_mcm(rng, n, profile)
    e1q = rng.uniform(*profile['e1q_range'], size=n)
    ro = rng.uniform(*profile['ro_range'], size=n)
    e2q = rng.uniform(*profile['e2q_range'], size=len(topology.edges))
    t1 = rng.uniform(*profile.get('t1_range', (1e5, 1e5)), size=n)
    t2 = t1 * rng.uniform(*profile.get('t2_ratio_range', (1.0, 1.0)), size=n)

    model = DeviceModel(
        name=topology.name,
        num_qubits=n,
        edges=topology.edges,
        mcm_error=mcm,
        e1q=e1q,
        readout_error=ro,
        t1=t1,
        t2=t2,
        e2q=e2q,
        durations=durations or Durations(),
    )
    logger.info(f"Synthesised error map for {topology.name} (seed {seed}): "
                f"MCM mean {mcm.mean() if n else 0:.4f}, max {mcm.max() if n else 0:.4f}")
    return model


def uniform_device(topology: Topology, mcm_error: float = 0.0, e1q: float = 0.0, e2q: float = 0.0,
                   readout_error: float = 0.0, t1: float = 1e12, t2: float = 1e12,
                   durations: Optional[Durations] = None) -> DeviceModel:
    """A device with identical calibration on every qubit and edge."""
    n = topology.num_qubits
    return DeviceModel(
        name=topology.name,
        num_qubits=n,
        edges=topology.edges,
        mcm_error=[mcm_error] * n,
        e1q=[e1q] * n,
        readout_error=[readout_error] * n,
        t1=[t1] * n,
        t2=[t2] * n,
        e2q=[e2q] * len(topology.edges),
        durations=durations or Durations(),
    )
