"""Parameterized circuit families and their resource estimates.

All families start from |+>^n (a Hadamard on every qubit) and then stack
layers:

  * graph ansatz, "yz" variant: one R_y per vertex, then one two-parameter YZ
    rotation exp(-i(theta1 Z_i Y_j + theta0 Y_i Z_j)/2) per edge,
  * graph ansatz, "yz_y" variant: each edge additionally carries its own R_y
    pair (applied before the YZ rotation), 4 parameters per edge,
  * hardware-efficient baselines: n R_y rotation layers interleaved with
    either serial CNOT chains or parallel CZ brickwork,
  * product baseline: the rotation layers alone, no entanglers.

On a complete graph the "yz" variant, both baselines and the product circuit
all carry exactly n**2 parameters, which keeps optimizer budgets comparable.

Parameter slots are integers 0..param_count-1 in gate order; a circuit is a
static gate list plus that slot table, bound to concrete angles at
preparation time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError
from .qubo import MAX_QUBITS
from .statevector import State

PARAMS_PER_GATE = {"h": 0, "ry": 1, "yz": 2, "cnot": 0, "cz": 0}


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple
    params: tuple = ()


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: tuple
    param_count: int
    kind: str = "custom"
    layers: int = 1


def validate_circuit(circuit):
    """Check qubit ranges and that slots cover 0..param_count-1 exactly once."""
    seen = []
    for g in circuit.gates:
        if g.kind not in PARAMS_PER_GATE:
            raise ValueError(f"unknown gate kind {g.kind!r}")
        if len(g.params) != PARAMS_PER_GATE[g.kind]:
            raise ValueError(f"{g.kind} gate takes {PARAMS_PER_GATE[g.kind]} params, got {len(g.params)}")
        if len(set(g.qubits)) != len(g.qubits):
            raise ValueError(f"repeated qubit in {g}")
        for q in g.qubits:
            if not 0 <= q < circuit.n:
                raise ValueError(f"qubit {q} out of range for n={circuit.n}")
        seen.extend(g.params)
    if sorted(seen) != list(range(circuit.param_count)):
        raise ValueError("parameter slots must cover 0..param_count-1 exactly once")
    return circuit


def _edge_sequence(instance, edge_order):
    if edge_order is None:
        return instance.edges
    edges = tuple((int(i), int(j)) for i, j in edge_order)
    if sorted(edges) != sorted(instance.edges):
        raise ValueError("edge_order must be a permutation of the instance edges")
    return edges


def build_sia(instance, variant="yz", layers=1, edge_order=None):
    """Graph-structured ansatz on the instance's interaction graph.

    Edge blocks follow the given order (default: lexicographic, the instance
    order). Layers repeat the vertex-rotation plus edge-block pattern with
    fresh parameters.
    """
    if variant not in ("yz", "yz_y"):
        raise ValueError(f"unknown variant {variant!r}")
    if layers < 1:
        raise ValueError(f"layers must be >= 1, got {layers}")
    n = instance.n
    edges = _edge_sequence(instance, edge_order)
    gates = [Gate("h", (q,)) for q in range(n)]
    slot = 0
    for _ in range(layers):
        for q in range(n):
            gates.append(Gate("ry", (q,), (slot,)))
            slot += 1
        for i, j in edges:
            if variant == "yz_y":
                gates.append(Gate("ry", (j,), (slot,)))
                gates.append(Gate("ry", (i,), (slot + 1,)))
                gates.append(Gate("yz", (i, j), (slot + 2, slot + 3)))
                slot += 4
            else:
                gates.append(Gate("yz", (i, j), (slot, slot + 1)))
                slot += 2
    kind = "sia_yz" if variant == "yz" else "sia_yz_y"
    return validate_circuit(Circuit(n=n, gates=tuple(gates), param_count=slot,
                                    kind=kind, layers=layers))


def _rotation_rows(n, entangler_rows):
    """n rotation rows with entangler rows between them (HEA and product shape)."""
    gates = [Gate("h", (q,)) for q in range(n)]
    slot = 0
    for row in range(n):
        for q in range(n):
            gates.append(Gate("ry", (q,), (slot,)))
            slot += 1
        if row < n - 1:
            gates.extend(entangler_rows(row))
    return gates, slot


def build_hea_linear_cnot(n):
    """Hardware-efficient baseline: serial CNOT chain between rotation rows."""
    if n < 2:
        raise ValueError(f"need at least 2 qubits, got n={n}")
    gates, slot = _rotation_rows(n, lambda row: [Gate("cnot", (q, q + 1)) for q in range(n - 1)])
    return validate_circuit(Circuit(n=n, gates=tuple(gates), param_count=slot, kind="hea_cnot"))


def build_hea_parallel_cz(n):
    """Hardware-efficient baseline: alternating-parity CZ brickwork rows."""
    if n < 2:
        raise ValueError(f"need at least 2 qubits, got n={n}")

    def bricks(row):
        start = row % 2
        return [Gate("cz", (q, q + 1)) for q in range(start, n - 1, 2)]

    gates, slot = _rotation_rows(n, bricks)
    return validate_circuit(Circuit(n=n, gates=tuple(gates), param_count=slot, kind="hea_cz"))


def build_product_ansatz(n):
    """The rotation rows alone; entirely entanglement-free."""
    if n < 2:
        raise ValueError(f"need at least 2 qubits, got n={n}")
    gates, slot = _rotation_rows(n, lambda row: [])
    return validate_circuit(Circuit(n=n, gates=tuple(gates), param_count=slot, kind="product"))


def circuit_dict(circuit):
    """JSON-ready gate list (kind, qubits, parameter slots) for inspection."""
    return {
        "n": circuit.n,
        "kind": circuit.kind,
        "layers": circuit.layers,
        "param_count": circuit.param_count,
        "gates": [{"kind": g.kind, "qubits": list(g.qubits), "params": list(g.params)}
                  for g in circuit.gates],
    }


def prepare(circuit, params, cap=MAX_QUBITS):
    """Bind parameters and run the full gate list on |0...0>. Returns a fresh state."""
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (circuit.param_count,):
        raise ValueError(f"expected {circuit.param_count} parameters, got shape {params.shape}")
    if not np.all(np.isfinite(params)):
        raise ValueError("parameters must be finite")
    if circuit.n > cap:
        raise ResourceLimitError(f"n={circuit.n} exceeds the qubit cap {cap}")
    amps = np.zeros(1 << circuit.n)
    amps[0] = 1.0
    state = State(circuit.n, amps)
    for g in circuit.gates:
        if g.kind == "h":
            state.apply_h(g.qubits[0])
        elif g.kind == "ry":
            state.apply_ry(g.qubits[0], params[g.params[0]])
        elif g.kind == "yz":
            state.apply_yz_pair(g.qubits[0], g.qubits[1], params[g.params[0]], params[g.params[1]])
        elif g.kind == "cnot":
            state.apply_cnot(g.qubits[0], g.qubits[1])
        elif g.kind == "cz":
            state.apply_cz(g.qubits[0], g.qubits[1])
        else:
            raise ValueError(f"unknown gate kind {g.kind!r}")
    return state


@dataclass(frozen=True)
class ResourceEstimate:
    ansatz: str
    n: int
    layers: int
    connectivity: str
    cnot_count: int
    cnot_depth: int
    param_count: int


def resource_estimate(ansatz, n, layers=1, connectivity="all_to_all"):
    """Two-qubit gate budget of one ansatz family at size n.

    Counts per layer: graph ansatz on a complete graph needs n(n-1) CNOTs at
    depth 2n with all-to-all connectivity; on a line, a swap network realizes
    it with (n-1)(3n-2)/2 CNOTs at depth 3n-2. The hardware-efficient
    baselines use (n-1)^2 CNOTs (or CZs); the product circuit none. Multi
    layer circuits scale both count and depth linearly.
    """
    if n < 2:
        raise ValueError(f"need at least 2 qubits, got n={n}")
    if layers < 1:
        raise ValueError(f"layers must be >= 1, got {layers}")
    if connectivity not in ("linear", "all_to_all"):
        raise ValueError(f"unknown connectivity {connectivity!r}")
    name = ansatz.lower()
    if name in ("sia", "sia_yz", "sia_yz_y"):
        if connectivity == "linear":
            count = (n - 1) * (3 * n - 2) // 2
            depth = 3 * n - 2
        else:
            count = n * (n - 1)
            depth = 2 * n
        params = n * n if name != "sia_yz_y" else 2 * n * n - n
    elif name in ("hea_cnot", "hea_cz"):
        count = (n - 1) * (n - 1)
        depth = count if name == "hea_cnot" else n - 1
        params = n * n
    elif name == "product":
        count = 0
        depth = 0
        params = n * n
    else:
        raise ValueError(f"unknown ansatz {ansatz!r}")
    return ResourceEstimate(ansatz=name, n=n, layers=layers, connectivity=connectivity,
                            cnot_count=count * layers, cnot_depth=depth * layers,
                            param_count=params * layers)


def linear_swap_schedule(n):
    """Odd-even transposition schedule bringing every pair adjacent once.

    Returns layers of logical pairs (i, j), i < j. Layer t swaps the qubits at
    line positions of parity t % 2; over n layers every unordered pair meets
    exactly once. Layers beyond the first and last carry swaps, so a line
    implementation needs n - 2 swap layers.
    """
    if n < 2:
        raise ValueError(f"need at least 2 qubits, got n={n}")
    order = list(range(n))
    layers = []
    for step in range(n):
        pairs = []
        for p in range(step % 2, n - 1, 2):
            a, b = order[p], order[p + 1]
            pairs.append((min(a, b), max(a, b)))
            order[p], order[p + 1] = order[p + 1], order[p]
        if pairs:
            layers.append(pairs)
    return layers
