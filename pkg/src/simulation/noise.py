import sys
from dataclasses import dataclass, field
from math import exp
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent.parent
sys.path.append(str(project_dir))

from src.config import NOISE_CHANNELS
from src.device.model import DeviceModel
from src.exceptions import InvariantViolation
from src.logging.logger import setup_logger
from src.utils import load_from_json, merge_params

# Setup logger
logger = setup_logger('noise_logger', 'logs', 'noise.log')


@dataclass(frozen=True, eq=False)
class NoiseChannelSet:
    """Per-physical-qubit error channels sampled independently in every trajectory.

    The MCM channel flips a qubit right after each Reset with probability Err_MCM(p);
    readout errors flip the recorded bit only. Idle windows get Pauli-twirled
    relaxation and dephasing, and every Measure kicks a Z onto active coupled
    neighbours with probability crosstalk_factor * Err_MCM(measured qubit).
    """
    e1q: np.ndarray
    e2q: Dict[Tuple[int, int], float]
    e2q_fallback: np.ndarray
    readout: np.ndarray
    mcm: np.ndarray
    t1: np.ndarray
    t2: np.ndarray
    neighbors: Dict[int, Tuple[int, ...]] = field(default_factory=dict)
    gate: bool = True
    readout_enabled: bool = True
    mcm_enabled: bool = True
    idle: bool = True
    crosstalk: bool = True
    crosstalk_factor: float = NOISE_CHANNELS['crosstalk_factor']
    dd_suppression: float = NOISE_CHANNELS['dd_suppression']
    max_rus_repeats: int = NOISE_CHANNELS['max_rus_repeats']

    def __post_init__(self):
        for name in ('e1q', 'e2q_fallback', 'readout', 'mcm'):
            values = getattr(self, name)
            if np.any(values < 0) or np.any(values > 1):
                raise InvariantViolation(f"noise channel '{name}' outside [0, 1]")
        if any(not 0.0 <= p <= 1.0 for p in self.e2q.values()):
            raise InvariantViolation("noise channel 'e2q' outside [0, 1]")
        if not 0.0 <= self.dd_suppression <= 1.0:
            raise InvariantViolation("dd_suppression must lie in [0, 1]")
        if self.crosstalk_factor < 0:
            raise InvariantViolation("crosstalk_factor must be >= 0")
        if self.max_rus_repeats < 1:
            raise InvariantViolation("max_rus_repeats must be >= 1")

    @classmethod
    def from_device(cls, device: DeviceModel, overrides: Optional[Dict] = None) -> 'NoiseChannelSet':
        settings = merge_params(NOISE_CHANNELS, overrides or {})
        return cls(
            e1q=device.e1q_array.copy(),
            e2q=dict(zip(device.edges, device.e2q)),
            e2q_fallback=device.e2q_mean.copy(),
            readout=device.readout_array.copy(),
            mcm=device.mcm_array.copy(),
            t1=np.array(device.t1),
            t2=np.array(device.t2),
            neighbors={p: tuple(device.neighbors(p)) for p in range(device.num_qubits)},
            gate=bool(settings['gate']),
            readout_enabled=bool(settings['readout']),
            mcm_enabled=bool(settings['mcm']),
            idle=bool(settings['idle']),
            crosstalk=bool(settings['crosstalk']),
            crosstalk_factor=float(settings['crosstalk_factor']),
            dd_suppression=float(settings['dd_suppression']),
            max_rus_repeats=int(settings['max_rus_repeats']),
        )

    @classmethod
    def noiseless(cls, num_qubits: int, max_rus_repeats: int = NOISE_CHANNELS['max_rus_repeats']) -> 'NoiseChannelSet':
        zeros = np.zeros(num_qubits)
        return cls(
            e1q=zeros, e2q={}, e2q_fallback=zeros, readout=zeros, mcm=zeros,
            t1=np.full(num_qubits, np.inf), t2=np.full(num_qubits, np.inf),
            gate=False, readout_enabled=False, mcm_enabled=False, idle=False, crosstalk=False,
            max_rus_repeats=max_rus_repeats,
        )

    @property
    def is_noiseless(self) -> bool:
        return not (self.gate or self.readout_enabled or self.mcm_enabled or self.idle or self.crosstalk)

    def two_qubit_error(self, a: int, b: int, swap: bool = False) -> float:
        """Depolarizing rate of a 2Q gate; a SWAP costs three CX."""
        edge = (min(a, b), max(a, b))
        rate = self.e2q.get(edge, max(self.e2q_fallback[a], self.e2q_fallback[b]))
        return 1.0 - (1.0 - rate) ** 3 if swap else rate

    def idle_paulis(self, qubit: int, duration: float, protected: bool) -> Tuple[float, float, float]:
        """Twirled (pX, pY, pZ) for an idle window; DD scales only the dephasing part."""
        if duration <= 0:
            return 0.0, 0.0, 0.0
        p_flip = 1.0 - exp(-duration / self.t1[qubit])
        p_phase = 1.0 - exp(-duration / self.t2[qubit])
        p_x = p_y = p_flip / 4.0
        p_z = max(0.0, p_phase / 2.0 - p_flip / 4.0)
        if protected:
            p_z *= self.dd_suppression
        return p_x, p_y, p_z

    def crosstalk_probability(self, measured: int, protected: bool) -> float:
        kappa = min(1.0, self.crosstalk_factor * self.mcm[measured])
        return kappa * self.dd_suppression if protected else kappa


def load_channels(device: DeviceModel, path: Optional[Path] = None) -> NoiseChannelSet:
    """Channel set for a device, with optional JSON overrides of the NOISE_CHANNELS keys."""
    overrides = {}
    if path is not None:
        overrides = load_from_json(path)
    channels = NoiseChannelSet.from_device(device, overrides)
    logger.info(f"Noise channels for '{device.name}': gate={channels.gate}, readout={channels.readout_enabled}, "
                f"mcm={channels.mcm_enabled}, idle={channels.idle}, crosstalk={channels.crosstalk}")
    return channels
