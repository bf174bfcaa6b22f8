"""
Dense statevector kernels. States are complex arrays of shape (2,) * n with one axis per
simulated qubit.
"""
from math import cos, sin, sqrt
from typing import List, Sequence, Tuple

import numpy as np

_SQRT2_INV = 1 / sqrt(2)

GATE_MATRICES = {
    'h': np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT2_INV,
    'x': np.array([[0, 1], [1, 0]], dtype=complex),
    'y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'z': np.array([[1, 0], [0, -1]], dtype=complex),
    'sx': np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex) / 2,
}

PARAMETRIC_MATRICES = {
    'rx': lambda t: np.array([[cos(t / 2), -1j * sin(t / 2)], [-1j * sin(t / 2), cos(t / 2)]], dtype=complex),
    'ry': lambda t: np.array([[cos(t / 2), -sin(t / 2)], [sin(t / 2), cos(t / 2)]], dtype=complex),
    'rz': lambda t: np.array([[np.exp(-1j * t / 2), 0], [0, np.exp(1j * t / 2)]], dtype=complex),
}

TWO_QUBIT_PAULIS = [(a, b) for a in ('i', 'x', 'y', 'z') for b in ('i', 'x', 'y', 'z') if (a, b) != ('i', 'i')]


def gate_matrix(name: str, params: Sequence[float] = ()) -> np.ndarray:
    if name in GATE_MATRICES:
        return GATE_MATRICES[name]
    return PARAMETRIC_MATRICES[name](params[0])


def zero_state(n: int) -> np.ndarray:
    state = np.zeros((2,) * n, dtype=complex)
    state[(0,) * n] = 1.0
    return state


def _index(n: int, *fixed: Tuple[int, int]) -> Tuple:
    idx: List = [slice(None)] * n
    for axis, value in fixed:
        idx[axis] = value
    return tuple(idx)


def apply_1q(state: np.ndarray, matrix: np.ndarray, axis: int) -> np.ndarray:
    moved = np.tensordot(matrix, state, axes=([1], [axis]))
    return np.moveaxis(moved, 0, axis)


def apply_cx(state: np.ndarray, control: int, target: int) -> np.ndarray:
    n = state.ndim
    new = state.copy()
    new[_index(n, (control, 1), (target, 0))] = state[_index(n, (control, 1), (target, 1))]
    new[_index(n, (control, 1), (target, 1))] = state[_index(n, (control, 1), (target, 0))]
    return new


def apply_swap(state: np.ndarray, a: int, b: int) -> np.ndarray:
    return np.ascontiguousarray(np.swapaxes(state, a, b))


def apply_pauli(state: np.ndarray, pauli: str, axis: int) -> np.ndarray:
    if pauli == 'i':
        return state
    return apply_1q(state, GATE_MATRICES[pauli], axis)


def probability_one(state: np.ndarray, axis: int) -> float:
    n = state.ndim
    return float(np.sum(np.abs(state[_index(n, (axis, 1))]) ** 2))


def collapse(state: np.ndarray, axis: int, outcome: int, probability: float) -> np.ndarray:
    n = state.ndim
    new = state.copy()
    new[_index(n, (axis, 1 - outcome))] = 0.0
    if probability > 1e-15:
        new /= sqrt(probability)
    return new


def measure(state: np.ndarray, axis: int, rng: np.random.Generator) -> Tuple[int, np.ndarray]:
    p1 = min(1.0, max(0.0, probability_one(state, axis)))
    outcome = 1 if rng.random() < p1 else 0
    return outcome, collapse(state, axis, outcome, p1 if outcome else 1.0 - p1)


def branches(state: np.ndarray, axis: int) -> List[Tuple[int, float, np.ndarray]]:
    """Both measurement branches with their probabilities."""
    p1 = min(1.0, max(0.0, probability_one(state, axis)))
    out = []
    for outcome, p in ((0, 1.0 - p1), (1, p1)):
        if p > 0.0:
            out.append((outcome, p, collapse(state, axis, outcome, p)))
    return out


def reset(state: np.ndarray, axis: int, rng: np.random.Generator) -> np.ndarray:
    outcome, state = measure(state, axis, rng)
    return apply_1q(state, GATE_MATRICES['x'], axis) if outcome else state
