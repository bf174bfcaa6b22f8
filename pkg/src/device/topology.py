"""
Coupling-map presets: the 127-qubit heavy-hex lattice, a 7-qubit heavy-hex fragment,
lines and grids.
"""
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent.parent
sys.path.append(str(project_dir))

from src.exceptions import UnknownPreset
from src.logging.logger import setup_logger

# Setup logger
logger = setup_logger('topology_logger', 'logs', 'topology.log')

PRESET_RE = re.compile(
    r"""^\s*(?:
        (?P<eagle>eagle127)
      | (?P<smallhex>small-hex)
      | line\(\s*(?P<line>\d+)\s*\)
      | grid\(\s*(?P<rows>\d+)\s*,\s*(?P<cols>\d+)\s*\)
    )\s*$""",
    re.VERBOSE,
)

# Column span of each long row of the 127-qubit lattice; bridges alternate between
# columns 0,4,8,12 and 2,6,10,14 on successive row gaps.
EAGLE_ROWS = [(0, 13)] + [(0, 14)] * 5 + [(1, 14)]
EAGLE_BRIDGE_OFFSETS = (0, 2)
EAGLE_BRIDGE_STEP = 4

SMALL_HEX_EDGES = ((0, 1), (1, 2), (1, 3), (3, 5), (4, 5), (5, 6))


@dataclass(frozen=True)
class Topology:
    name: str
    num_qubits: int
    edges: Tuple[Tuple[int, int], ...]


def heavy_hex_lattice(rows: Sequence[Tuple[int, int]], bridge_offsets=EAGLE_BRIDGE_OFFSETS,
                      bridge_step: int = EAGLE_BRIDGE_STEP) -> Tuple[int, List[Tuple[int, int]]]:
    """Number each long row left to right, then the bridge qubits hanging below it.

    Returns the qubit count and the sorted edge list.
    """
    index = 0
    edges: List[Tuple[int, int]] = []
    hanging: List[Tuple[int, int]] = []
    for r, (first, last) in enumerate(rows):
        ids: Dict[int, int] = {}
        for col in range(first, last + 1):
            ids[col] = index
            if col > first:
                edges.append((index - 1, index))
            index += 1
        for col, bridge in hanging:
            edges.append((bridge, ids[col]))
        hanging = []
        if r + 1 < len(rows):
            below_first, below_last = rows[r + 1]
            offset = bridge_offsets[r % len(bridge_offsets)]
            for col in range(offset, last + 1, bridge_step):
                if col in ids and below_first <= col <= below_last:
                    edges.append((ids[col], index))
                    hanging.append((col, index))
                    index += 1
    return index, sorted((min(a, b), max(a, b)) for a, b in edges)


def eagle127() -> Topology:
    num_qubits, edges = heavy_hex_lattice(EAGLE_ROWS)
    return Topology('eagle127', num_qubits, tuple(edges))


def small_hex() -> Topology:
    return Topology('small-hex', 7, SMALL_HEX_EDGES)


def line(n: int) -> Topology:
    if n < 1:
        raise UnknownPreset(f"line({n}) needs at least one qubit")
    return Topology(f'line({n})', n, tuple((i, i + 1) for i in range(n - 1)))


def grid(rows: int, cols: int) -> Topology:
    if rows < 1 or cols < 1:
        raise UnknownPreset(f"grid({rows},{cols}) needs positive dimensions")
    edges = []
    for r in range(rows):
        for c in range(cols):
            q = r * cols + c
            if c + 1 < cols:
                edges.append((q, q + 1))
            if r + 1 < rows:
                edges.append((q, q + cols))
    return Topology(f'grid({rows},{cols})', rows * cols, tuple(sorted(edges)))


def make_heavy_hex(preset: str) -> Topology:
    """Resolve a preset name: eagle127, small-hex, line(n) or grid(r,c)."""
    match = PRESET_RE.match(preset)
    if match is None:
        raise UnknownPreset(f"unknown device preset '{preset}'")
    if match.group('eagle'):
        topology = eagle127()
    elif match.group('smallhex'):
        topology = small_hex()
    elif match.group('line'):
        topology = line(int(match.group('line')))
    else:
        topology = grid(int(match.group('rows')), int(match.group('cols')))
    logger.info(f"Built topology {topology.name}: {topology.num_qubits} qubits, {len(topology.edges)} edges")
    return topology
