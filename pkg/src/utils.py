import json
from pathlib import Path
from typing import Any, Dict

import numpy as np

from src.logging.logger import setup_logger

# Setup logger
logger = setup_logger('utils_logger', 'logs', 'utils.log')


def _to_builtin(value: Any) -> Any:
    """Convert numpy scalars and arrays into JSON-serialisable builtins."""
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, dict):
        return {str(k): _to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_builtin(v) for v in value]
    return value


def save_to_json(params: dict, file_path: Path) -> None:
    """Write a dict as indented JSON, creating parent folders; numpy values become builtins."""
    file_path = Path(file_path)
    try:
        file_path.parent.mkdir(parents=True, exist_ok=True)
        with file_path.open('w') as f:
            json.dump(_to_builtin(params), f, indent=4)
        logger.info(f"Saved {file_path}")
    except IOError as e:
        logger.error(f"Failed to save {file_path}: {e}", exc_info=True)
        raise


def load_from_json(path: Path) -> dict:
    """Read a JSON object; a missing or unreadable file logs a warning and yields {}."""
    path = Path(path)
    try:
        if path.exists():
            logger.info(f"Loading {path}")
            with path.open('r') as f:
                return json.load(f)
        else:
            logger.warning(f"No file found at {path}, using defaults")
            return {}
    except IOError as e:
        logger.error(f"Failed to load {path}: {e}")
        return {}


def merge_params(defaults: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """Overlay known keys from overrides onto a copy of defaults; unknown keys are logged and ignored."""
    merged = dict(defaults)
    for key, value in overrides.items():
        if key in merged:
            merged[key] = value
        else:
            logger.warning(f"Ignoring unknown parameter '{key}'")
    return merged
