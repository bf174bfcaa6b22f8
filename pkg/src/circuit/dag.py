import sys
from pathlib import Path
from typing import Dict, Hashable, List

import networkx as nx

# Ensure the project directory is in the sys.path
project_dir = Path(__file__).resolve().parent.parent.parent
sys.path.append(str(project_dir))

from src.circuit.ir import Circuit, Instruction
from src.logging.logger import setup_logger

# Setup logger
logger = setup_logger('dag_logger', 'logs', 'dag.log')


def resources(ins: Instruction) -> List[Hashable]:
    """Qubits and classical bits an instruction orders against."""
    touched: List[Hashable] = [('q', q) for q in ins.qubits]
    if ins.clbit is not None:
        touched.append(('c', ins.clbit))
    if ins.condition is not None and ('c', ins.condition[0]) not in touched:
        touched.append(('c', ins.condition[0]))
    return touched


def build_dag(circuit: Circuit) -> nx.DiGraph:
    """Dependency DAG over instruction indices.

    u -> v iff v is the next instruction after u sharing a qubit, or the classical bit that
    one of them writes and the other writes or conditions on. Edges carry ``quantum=True``
    when the pair shares a qubit.
    """
    dag = nx.DiGraph()
    last: Dict[Hashable, int] = {}
    for index, ins in enumerate(circuit.instructions):
        dag.add_node(index, ins=ins)
        for resource in resources(ins):
            if resource in last:
                source = last[resource]
                if dag.has_edge(source, index):
                    dag[source][index]['quantum'] |= resource[0] == 'q'
                else:
                    dag.add_edge(source, index, quantum=resource[0] == 'q')
            last[resource] = index
    logger.debug(f"Built DAG with {dag.number_of_nodes()} nodes and {dag.number_of_edges()} edges")
    return dag


def topological_circuit(circuit: Circuit, order: List[int]) -> Circuit:
    """Replay the instructions in the given order."""
    return circuit.with_instructions(circuit.instructions[i] for i in order)
