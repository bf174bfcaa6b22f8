import json

import pytest

from src.device import calibration
from src.device.calibration import apply_profile, from_dict, load, load_device, save, to_dict
from src.exceptions import InvariantViolation, SchemaError, UnknownPreset
from src.profiling.profiler import ProfilingReport

from conftest import project_dir


def test_bundled_example_loads(small_hex_device):
    assert small_hex_device.num_qubits == 7
    assert small_hex_device.mcm_error[5] == pytest.approx(0.12)
    assert small_hex_device.durations.mcm_window == 2600


def test_save_then_load_keeps_every_field(small_hex_device, tmp_path):
    path = tmp_path / 'device.json'
    save(small_hex_device, path)
    assert load(path) == small_hex_device


@pytest.mark.parametrize('mutate, field', [
    (lambda d: d.pop('qubits'), 'qubits'),
    (lambda d: d.update(num_qubits='7'), 'num_qubits'),
    (lambda d: d['qubits'][2].pop('mcm_error'), 'qubits[2].mcm_error'),
    (lambda d: d['edges'][0].update(pair=[0]), 'edges[0].pair'),
    (lambda d: d.update(time_unit='us'), 'time_unit'),
    (lambda d: d['qubits'][1].update(index=0), 'qubits[1].index'),
])
def test_schema_errors_name_the_field(small_hex_device, mutate, field):
    data = to_dict(small_hex_device)
    mutate(data)
    with pytest.raises(SchemaError) as info:
        from_dict(data)
    assert info.value.field == field


def test_out_of_range_error_is_an_invariant_violation(small_hex_device, tmp_path):
    data = to_dict(small_hex_device)
    data['qubits'][0]['readout_error'] = 1.5
    path = tmp_path / 'bad.json'
    path.write_text(json.dumps(data))
    with pytest.raises(InvariantViolation):
        load(path)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load(tmp_path / 'absent.json')


def test_load_device_resolves_files_and_presets():
    from_file = load_device(str(project_dir / 'devices' / 'small_hex_example.json'))
    assert from_file.name == 'small-hex'
    preset = load_device('line(4):zero@3')
    assert preset.num_qubits == 4 and not any(preset.mcm_error)
    assert load_device('eagle127@7').mcm_error == load_device('eagle127', seed=7).mcm_error
    with pytest.raises(UnknownPreset):
        load_device('falcon27')


def test_apply_profile_replaces_profiled_qubits(small_hex_device):
    report = ProfilingReport(device_name='small-hex', qubits=(1, 5), estimates=(0.05, 0.2), shots=1000,
                             timestamp='2025-02-01T00:00:00+00:00')
    profiled = apply_profile(small_hex_device, report)
    assert profiled.mcm_error[1] == 0.05 and profiled.mcm_error[5] == 0.2
    assert profiled.mcm_error[0] == small_hex_device.mcm_error[0]
    assert profiled.profiled_at == report.timestamp
    assert calibration.to_dict(profiled)['profiled_at'] == report.timestamp
