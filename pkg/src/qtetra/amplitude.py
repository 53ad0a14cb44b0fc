"""Vertex amplitude of five invariant tensors glued over the complete graph K5.

Five 4-qubit invariant tensors sit on the nodes; each of the ten links carries
the two-qubit singlet (|01> - |10>)/sqrt(2), whose bra is contracted against
one qubit slot of each endpoint node. The resulting complex number is computed
along three independent routes (sequential contraction, a literal 20-qubit
brute force, and a 32-entry multilinear basis table) that must agree.

Because invariant tensors are not symmetric under slot permutations, the
amplitude depends on which slot of each node a link attaches to. Graphs are
therefore explicit: a SpinNetworkGraph lists ten links ((n, s), (m, t)), and
the stored endpoint order fixes the singlet orientation (first factor on the
first endpoint). Two named slot assignments are provided:

* ``canonical_k5``: at each node, slots 1..4 host the incident links in
  increasing order of the partner node.
* ``cyclic_k5``: node n's slots 1..4 host partners n+1, n+2, n+3, n+4 (mod 5).
  This is the assignment under which four regular tensors at (pi/2, pi/2)
  make the amplitude vanish exactly at i5 = (pi/2, 3*pi/2); the bundled
  reference amplitudes are reproduced in this convention.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .spin_algebra import StateVector
from .tetrahedron import InvariantTensor, bloch_coefficients, logical_basis

NODES = (1, 2, 3, 4, 5)
SLOTS = (1, 2, 3, 4)

Endpoint = tuple[int, int]
Link = tuple[Endpoint, Endpoint]

_SINGLET = np.zeros(4)
_SINGLET[0b01] = 1.0 / math.sqrt(2)
_SINGLET[0b10] = -1.0 / math.sqrt(2)
_EPS = _SINGLET.reshape(2, 2).copy()


def singlet() -> StateVector:
    """The two-qubit link state (|01> - |10>)/sqrt(2)."""
    return StateVector(2, _SINGLET.astype(complex))


@dataclass(frozen=True, eq=False)
class AmplitudeResult:
    """A complex amplitude with magnitude/phase accessors."""

    value: complex

    @property
    def magnitude(self) -> float:
        return abs(self.value)

    @property
    def phase(self) -> float:
        return cmath.phase(self.value)


@dataclass(frozen=True)
class SpinNetworkGraph:
    """Ten links pairing the twenty (node, slot) endpoints of five nodes."""

    links: tuple[Link, ...]

    def __post_init__(self):
        links = tuple((tuple(a), tuple(b)) for a, b in self.links)
        object.__setattr__(self, "links", links)
        if len(links) != 10:
            raise ValueError(f"a K5 spin network needs 10 links, got {len(links)}")
        endpoints = [ep for link in links for ep in link]
        expected = {(n, s) for n in NODES for s in SLOTS}
        if len(set(endpoints)) != 20 or set(endpoints) != expected:
            raise ValueError("every (node, slot) must appear in exactly one link")
        pairs = {frozenset((a[0], b[0])) for a, b in links}
        if len(pairs) != 10 or any(len(p) != 2 for p in pairs):
            raise ValueError("links must cover all ten unordered node pairs")

    def with_link_swapped(self, index: int) -> "SpinNetworkGraph":
        """Copy of the graph with one link's endpoint qubits exchanged."""
        links = list(self.links)
        a, b = links[index]
        links[index] = (b, a)
        return SpinNetworkGraph(tuple(links))


def k5_graph(partner_orders: dict[int, Sequence[int]]) -> SpinNetworkGraph:
    """Build a K5 graph from an explicit partner order at every node.

    ``partner_orders[n]`` lists the partner node met by slots 1..4 of node n.
    Links are emitted in lexicographic order of the node pair, first factor on
    the lower-numbered node.
    """
    slot_of = {}
    for n in NODES:
        order = list(partner_orders[n])
        if sorted(order) != sorted(set(NODES) - {n}):
            raise ValueError(f"node {n} must list each of its four partners once")
        for s, m in zip(SLOTS, order):
            slot_of[(n, m)] = s
    links = []
    for n in NODES:
        for m in NODES:
            if n < m:
                links.append(((n, slot_of[(n, m)]), (m, slot_of[(m, n)])))
    return SpinNetworkGraph(tuple(links))


def partner_rule_graph(rule: str) -> SpinNetworkGraph:
    """Named slot-assignment rules: increasing, decreasing, cyclic, anticyclic."""
    orders: dict[int, list[int]] = {}
    for n in NODES:
        others = sorted(set(NODES) - {n})
        if rule == "increasing":
            orders[n] = others
        elif rule == "decreasing":
            orders[n] = others[::-1]
        elif rule == "cyclic":
            orders[n] = [(n - 1 + s) % 5 + 1 for s in SLOTS]
        elif rule == "anticyclic":
            orders[n] = [(n - 1 - s) % 5 + 1 for s in SLOTS]
        else:
            raise ValueError(f"unknown slot rule {rule!r}")
    return k5_graph(orders)


def canonical_k5() -> SpinNetworkGraph:
    """Slots ordered by increasing partner node at every node."""
    return partner_rule_graph("increasing")


def cyclic_k5() -> SpinNetworkGraph:
    """Slots in cyclic partner order; the calibrated reference convention."""
    return partner_rule_graph("cyclic")


def _as_amplitudes(state) -> np.ndarray:
    if isinstance(state, InvariantTensor):
        return state.embedded.amplitudes
    if isinstance(state, StateVector):
        if state.n_qubits != 4:
            raise ValueError(f"node states must have 4 qubits, got {state.n_qubits}")
        return state.amplitudes
    arr = np.asarray(state, dtype=complex).reshape(-1)
    if arr.size != 16:
        raise ValueError(f"node states need 16 amplitudes, got {arr.size}")
    return arr


def _node_tensors(states) -> list[np.ndarray]:
    if len(states) != 5:
        raise ValueError(f"need exactly 5 node states, got {len(states)}")
    return [_as_amplitudes(s).reshape(2, 2, 2, 2) for s in states]


def vertex_amplitude(states, graph: SpinNetworkGraph) -> AmplitudeResult:
    """Contract the network link by link, materializing nodes on first touch.

    Links are processed in their stored order; at most one full node tensor
    is introduced at a time on top of the currently open indices.
    """
    tensors = _node_tensors(states)
    current = np.array(1.0, dtype=complex)
    open_axes: list[Endpoint] = []
    placed = set()
    for (n, s), (m, t) in graph.links:
        for node in (n, m):
            if node not in placed:
                current = np.multiply.outer(current, tensors[node - 1])
                open_axes.extend((node, slot) for slot in SLOTS)
                placed.add(node)
        i = open_axes.index((n, s))
        j = open_axes.index((m, t))
        current = np.tensordot(current, _EPS, axes=([i, j], [0, 1]))
        open_axes = [ax for idx, ax in enumerate(open_axes) if idx not in (i, j)]
    return AmplitudeResult(complex(current))


def vertex_amplitude_bruteforce(states, graph: SpinNetworkGraph) -> AmplitudeResult:
    """Reference oracle: the full 20-qubit product state, projected literally.

    Builds the tensor product of all five node states (2^20 amplitudes,
    qubit (n, s) at global position 4*(n-1) + s) and applies the ten singlet
    bras one after the other.
    """
    _node_tensors(states)  # validation only
    full = np.array([1.0 + 0.0j])
    for state in states:
        full = np.kron(full, _as_amplitudes(state))
    tensor = full.reshape((2,) * 20)
    labels = [(n, s) for n in NODES for s in SLOTS]
    bra = _SINGLET.conj().reshape(2, 2)
    for first, second in graph.links:
        i, j = labels.index(first), labels.index(second)
        tensor = np.moveaxis(tensor, (i, j), (0, 1))
        tensor = np.tensordot(bra, tensor, axes=([0, 1], [0, 1]))
        labels = [lab for lab in labels if lab not in (first, second)]
    return AmplitudeResult(complex(tensor))


def basis_amplitude_table(graph: SpinNetworkGraph) -> np.ndarray:
    """Amplitudes A(b1..b5) for all 32 logical basis assignments.

    Returned as a complex array of shape (2,)*5 indexed by the logical bit of
    each node; any amplitude of invariant tensors is the multilinear
    contraction of this table with the five (alpha, beta) coefficient pairs.
    """
    zero_l, one_l = logical_basis()
    basis = (zero_l.amplitudes, one_l.amplitudes)
    table = np.empty((2,) * 5, dtype=complex)
    for index in np.ndindex(*table.shape):
        table[index] = vertex_amplitude([basis[b] for b in index], graph).value
    return table


def amplitude_from_table(table: np.ndarray, coefficient_pairs) -> complex:
    """Contract the 32-entry table with five logical coefficient pairs."""
    pairs = [np.asarray(p, dtype=complex).reshape(2) for p in coefficient_pairs]
    if len(pairs) != 5:
        raise ValueError(f"need exactly 5 coefficient pairs, got {len(pairs)}")
    return complex(np.einsum("abcde,a,b,c,d,e->", table, *pairs))


def amplitude_sweep(fixed, theta_grid, phi_grid, graph: SpinNetworkGraph) -> np.ndarray:
    """Amplitudes over a (theta, phi) grid for the fifth node.

    The four fixed states are contracted once against each logical basis state
    at node 5; grid values follow by multilinearity, exactly equal to a full
    contraction per cell. Returns a complex array of shape
    (len(theta_grid), len(phi_grid)), row-major in theta.
    """
    thetas = np.asarray(theta_grid, dtype=float)
    phis = np.asarray(phi_grid, dtype=float)
    if thetas.size == 0 or phis.size == 0:
        raise ValueError("theta and phi grids must be non-empty")
    if np.any(thetas < 0) or np.any(thetas > math.pi):
        raise ValueError("theta grid must lie within [0, pi]")
    if np.any(phis < 0) or np.any(phis >= 2 * math.pi):
        raise ValueError("phi grid must lie within [0, 2*pi)")
    if len(fixed) != 4:
        raise ValueError(f"need exactly 4 fixed states, got {len(fixed)}")

    zero_l, one_l = logical_basis()
    h0 = vertex_amplitude(list(fixed) + [zero_l], graph).value
    h1 = vertex_amplitude(list(fixed) + [one_l], graph).value
    alpha = np.cos(thetas / 2)[:, None]
    beta = np.sin(thetas / 2)[:, None] * np.exp(1j * phis)[None, :]
    return alpha * h0 + beta * h1


def node_coefficient_pairs(points) -> list[np.ndarray]:
    """Logical (alpha, beta) pairs for a sequence of Bloch points."""
    return [bloch_coefficients(p) for p in points]
