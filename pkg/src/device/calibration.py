"""
Calibration files and device resolution.

A calibration file is JSON with explicit units (times in ns, errors as probabilities):

    {
        "name": "small-hex",
        "num_qubits": 7,
        "time_unit": "ns",
        "profiled_at": "2025-01-15T09:00:00+00:00",
        "durations": {"single_qubit": 60, "two_qubit": 660, "measure": 1400, "reset": 1200},
        "qubits": [{"index": 0, "mcm_error": 0.03, "e1q": 2e-4, "readout_error": 0.01,
                    "t1": 180000, "t2": 120000}, ...],
        "edges": [{"pair": [0, 1], "e2q": 0.009}, ...]
    }

``--device`` also accepts ``preset[:profile][@seed]``, e.g. ``eagle127:eagle@7``.
"""
import re
import sys
from pathlib import Path
from typing import Any, Dict, Union

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent.parent
sys.path.append(str(project_dir))

from src.config import DEFAULT_DEVICE_SEED, DEFAULT_PROFILE, TIME_UNIT
from src.device.error_map import synth_error_map
from src.device.model import DeviceModel, Durations
from src.device.topology import make_heavy_hex
from src.exceptions import InvariantViolation, SchemaError
from src.logging.logger import setup_logger
from src.utils import load_from_json, save_to_json

# Setup logger
logger = setup_logger('calibration_logger', 'logs', 'calibration.log')

DEVICE_ARG_RE = re.compile(r"^(?P<preset>[^:@]+?)(?::(?P<profile>[A-Za-z_]\w*))?(?:@(?P<seed>\d+))?$")

QUBIT_FIELDS = ('mcm_error', 'e1q', 'readout_error', 't1', 't2')
DURATION_FIELDS = ('single_qubit', 'two_qubit', 'measure', 'reset')


def _require(data: Dict[str, Any], key: str, kind, where: str = ''):
    name = f"{where}{key}"
    if key not in data:
        raise SchemaError(name, 'missing')
    value = data[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SchemaError(name, f"expected a number, got {type(value).__name__}")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise SchemaError(name, f"expected an integer, got {type(value).__name__}")
        return value
    if not isinstance(value, kind):
        raise SchemaError(name, f"expected {kind.__name__}, got {type(value).__name__}")
    return value


def to_dict(model: DeviceModel) -> Dict[str, Any]:
    durations = model.durations
    return {
        'name': model.name,
        'num_qubits': model.num_qubits,
        'time_unit': TIME_UNIT,
        'profiled_at': model.profiled_at,
        'durations': {
            'single_qubit': durations.single_qubit,
            'two_qubit': durations.two_qubit,
            'measure': durations.measure,
            'reset': durations.reset,
            'mcm_window': durations.mcm_window,
        },
        'qubits': [
            {
                'index': p,
                'mcm_error': model.mcm_error[p],
                'e1q': model.e1q[p],
                'readout_error': model.readout_error[p],
                't1': model.t1[p],
                't2': model.t2[p],
            }
            for p in range(model.num_qubits)
        ],
        'edges': [{'pair': list(edge), 'e2q': err} for edge, err in zip(model.edges, model.e2q)],
    }


def from_dict(data: Dict[str, Any]) -> DeviceModel:
    if not isinstance(data, dict):
        raise SchemaError('<root>', 'expected a JSON object')
    name = _require(data, 'name', str)
    num_qubits = _require(data, 'num_qubits', int)
    unit = data.get('time_unit', TIME_UNIT)
    if unit != TIME_UNIT:
        raise SchemaError('time_unit', f"only '{TIME_UNIT}' is supported, got '{unit}'")

    raw_durations = data.get('durations', {})
    if not isinstance(raw_durations, dict):
        raise SchemaError('durations', 'expected an object')
    duration_kwargs = {k: _require(raw_durations, k, int, 'durations.') for k in DURATION_FIELDS if k in raw_durations}
    if raw_durations.get('mcm_window') is not None:
        duration_kwargs['mcm_window'] = _require(raw_durations, 'mcm_window', int, 'durations.')

    qubits = _require(data, 'qubits', list)
    if len(qubits) != num_qubits:
        raise SchemaError('qubits', f"{len(qubits)} entries for num_qubits={num_qubits}")
    columns = {key: [0.0] * num_qubits for key in QUBIT_FIELDS}
    seen = set()
    for position, entry in enumerate(qubits):
        where = f"qubits[{position}]."
        if not isinstance(entry, dict):
            raise SchemaError(f"qubits[{position}]", 'expected an object')
        index = entry.get('index', position)
        if not isinstance(index, int) or not 0 <= index < num_qubits or index in seen:
            raise SchemaError(f"{where}index", f"invalid or repeated index {index!r}")
        seen.add(index)
        for key in QUBIT_FIELDS:
            columns[key][index] = _require(entry, key, float, where)

    edge_entries = _require(data, 'edges', list)
    edges, e2q = [], []
    for position, entry in enumerate(edge_entries):
        where = f"edges[{position}]."
        if not isinstance(entry, dict):
            raise SchemaError(f"edges[{position}]", 'expected an object')
        pair = _require(entry, 'pair', list, where)
        if len(pair) != 2 or not all(isinstance(p, int) and not isinstance(p, bool) for p in pair):
            raise SchemaError(f"{where}pair", 'expected two integer qubit indices')
        edges.append(tuple(pair))
        e2q.append(_require(entry, 'e2q', float, where))

    return DeviceModel(
        name=name,
        num_qubits=num_qubits,
        edges=tuple(edges),
        e2q=e2q,
        durations=Durations(**duration_kwargs),
        profiled_at=data.get('profiled_at'),
        **columns,
    )


def load(path: Union[str, Path]) -> DeviceModel:
    """Read and validate a calibration file."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"calibration file not found: {path}")
    try:
        model = from_dict(load_from_json(path))
    except (SchemaError, InvariantViolation) as e:
        logger.error(f"Invalid calibration file {path}: {e}", exc_info=True)
        raise
    logger.info(f"Loaded device '{model.name}' ({model.num_qubits} qubits) from {path}")
    return model


def save(model: DeviceModel, path: Union[str, Path]) -> None:
    save_to_json(to_dict(model), Path(path))


def load_device(arg: str, seed: int = None) -> DeviceModel:
    """Resolve ``--device``: an existing file, or ``preset[:profile][@seed]``."""
    if Path(arg).suffix == '.json' or Path(arg).exists():
        return load(arg)
    match = DEVICE_ARG_RE.match(arg.strip())
    if match is None:
        raise SchemaError('device', f"cannot resolve '{arg}'")
    topology = make_heavy_hex(match.group('preset'))
    profile = match.group('profile') or DEFAULT_PROFILE
    if match.group('seed') is not None:
        seed = int(match.group('seed'))
    elif seed is None:
        seed = DEFAULT_DEVICE_SEED
    return synth_error_map(topology, seed, profile)


def apply_profile(model: DeviceModel, report) -> DeviceModel:
    """Replace the profiled qubits' MCM errors and stamp the report time."""
    values = list(model.mcm_error)
    for q, estimate in zip(report.qubits, report.estimates):
        values[q] = estimate
    logger.info(f"Applied profiled MCM errors for {len(report.qubits)} qubits of '{model.name}'")
    return model.with_mcm_errors(values, profiled_at=report.timestamp)
