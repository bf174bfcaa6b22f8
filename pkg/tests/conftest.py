import sys
from pathlib import Path

import pytest

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent
sys.path.append(str(project_dir))

from src.device.calibration import load
from src.device.error_map import synth_error_map
from src.device.topology import eagle127

SMALL_HEX_FILE = project_dir / 'devices' / 'small_hex_example.json'


@pytest.fixture
def small_hex_device():
    return load(SMALL_HEX_FILE)


@pytest.fixture(scope='session')
def eagle_device():
    return synth_error_map(eagle127(), 7, 'eagle')
