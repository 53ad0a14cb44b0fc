"""Pauli and angular-momentum operator algebra on small qubit registers.

Conventions used throughout the package:

* qubit 1 is the most significant bit of the computational basis index,
  so ``|b1 b2 ... bn>`` sits at index ``b1*2**(n-1) + ... + bn``;
* hbar = 1 and J = sigma / 2;
* Clebsch-Gordan coefficients follow the Condon-Shortley phase convention
  (all coefficients real).

Everything here is dense; operators are capped at 8 qubits (256 x 256).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

MAX_OPERATOR_QUBITS = 8
HERMITIAN_ATOL = 1e-12

PAULI = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}

AXES = ("x", "y", "z")


def _frozen_array(values, dtype=complex):
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitudes over the 2^n computational basis states."""

    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be a positive integer")
        arr = _frozen_array(self.amplitudes)
        if arr.shape != (2**self.n_qubits,):
            raise ValueError(
                f"expected {2**self.n_qubits} amplitudes for {self.n_qubits} "
                f"qubits, got shape {arr.shape}"
            )
        object.__setattr__(self, "amplitudes", arr)

    @classmethod
    def from_amplitudes(cls, amplitudes) -> "StateVector":
        arr = np.asarray(amplitudes)
        n = int(np.log2(arr.size))
        return cls(n, arr)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        n = self.norm
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.n_qubits, self.amplitudes / n)


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """Dense 2^n x 2^n matrix with an optional Hermitian guarantee."""

    n_qubits: int
    entries: np.ndarray = field(repr=False)
    hermitian: bool = False

    def __post_init__(self):
        dim = 2**self.n_qubits
        arr = _frozen_array(self.entries)
        if arr.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix, got {arr.shape}")
        if self.hermitian:
            defect = np.abs(arr - arr.conj().T).max()
            if defect >= HERMITIAN_ATOL:
                raise ValueError(
                    f"matrix flagged hermitian deviates from its adjoint by {defect:.3e}"
                )
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits


def _is_half_integer(x: float) -> bool:
    return abs(2 * x - round(2 * x)) < 1e-12


@dataclass(frozen=True)
class CouplingLabel:
    """Angular momenta (j1, j2) coupled to total (J, M)."""

    j1: float
    j2: float
    J: float
    M: float

    def __post_init__(self):
        for name in ("j1", "j2", "J", "M"):
            if not _is_half_integer(getattr(self, name)):
                raise ValueError(f"{name} must be integer or half-integer")
        if self.j1 < 0 or self.j2 < 0:
            raise ValueError("j1 and j2 must be non-negative")
        if not (abs(self.j1 - self.j2) - 1e-12 <= self.J <= self.j1 + self.j2 + 1e-12):
            raise ValueError(
                f"triangle condition violated: need |j1-j2| <= J <= j1+j2, "
                f"got j1={self.j1}, j2={self.j2}, J={self.J}"
            )
        if not _is_half_integer(self.J - self.M) or abs(self.M) > self.J + 1e-12:
            raise ValueError(f"M={self.M} is not in -J..J for J={self.J}")


def pauli_embedded(axis: str, k: int, n: int) -> DenseOperator:
    """Pauli matrix on qubit k of an n-qubit register, identity elsewhere."""
    if axis not in PAULI:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
    if n < 1 or n > MAX_OPERATOR_QUBITS:
        raise ValueError(f"n must be in 1..{MAX_OPERATOR_QUBITS}, got {n}")
    if not 1 <= k <= n:
        raise ValueError(f"qubit index k={k} out of range 1..{n}")
    out = np.array([[1.0 + 0.0j]])
    for i in range(1, n + 1):
        out = np.kron(out, PAULI[axis] if i == k else np.eye(2))
    return DenseOperator(n, out, hermitian=True)


def angular_momentum(axis: str, k: int, n: int) -> DenseOperator:
    """J_axis on qubit k (spin-1/2, hbar = 1): half the embedded Pauli."""
    pauli = pauli_embedded(axis, k, n)
    return DenseOperator(n, pauli.entries / 2, hermitian=True)


def total_angular_momentum(axis: str, n: int) -> DenseOperator:
    """Sum of J_axis over all n qubits."""
    total = sum(angular_momentum(axis, k, n).entries for k in range(1, n + 1))
    return DenseOperator(n, total, hermitian=True)


def _state_amplitudes(state, n_qubits: int) -> np.ndarray:
    if isinstance(state, StateVector):
        if state.n_qubits != n_qubits:
            raise ValueError(f"expected a {n_qubits}-qubit state, got {state.n_qubits}")
        return state.amplitudes
    arr = np.asarray(state, dtype=complex).reshape(-1)
    if arr.size != 2**n_qubits:
        raise ValueError(f"expected {2**n_qubits} amplitudes, got {arr.size}")
    return arr


def closure_defect(state) -> float:
    """Strength of the total angular momentum acting on a 4-qubit state.

    Returns sqrt(sum_a ||(J_a^(1)+J_a^(2)+J_a^(3)+J_a^(4)) |psi>||^2), which
    vanishes exactly on the SU(2)-invariant subspace and equals
    sqrt(<J_total^2>) on normalized input.
    """
    psi = _state_amplitudes(state, 4)
    total = 0.0
    for axis in AXES:
        j_tot = total_angular_momentum(axis, 4).entries
        total += float(np.linalg.norm(j_tot @ psi) ** 2)
    return math.sqrt(total)


def _fact(x: float) -> int:
    k = round(x)
    if abs(x - k) > 1e-9 or k < 0:
        raise ValueError(f"expected a non-negative integer, got {x}")
    return math.factorial(k)


def cg_coefficient(label: CouplingLabel, m1: float, m2: float) -> float:
    """Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M>.

    Condon-Shortley convention, computed from the Racah closed form. Returns
    0 when m1 + m2 != M; raises if the label violates the triangle condition
    (that check lives in CouplingLabel) or the m's are out of range.
    """
    j1, j2, J, M = label.j1, label.j2, label.J, label.M
    for j, m, name in ((j1, m1, "m1"), (j2, m2, "m2")):
        if not _is_half_integer(m) or abs(m) > j + 1e-12 or not _is_half_integer(j - m):
            raise ValueError(f"{name}={m} is not a valid projection for j={j}")
    if abs(m1 + m2 - M) > 1e-12:
        return 0.0

    prefactor = math.sqrt(
        (2 * J + 1)
        * _fact(j1 + j2 - J)
        * _fact(j1 - j2 + J)
        * _fact(-j1 + j2 + J)
        / _fact(j1 + j2 + J + 1)
    )
    prefactor *= math.sqrt(
        _fact(J + M)
        * _fact(J - M)
        * _fact(j1 - m1)
        * _fact(j1 + m1)
        * _fact(j2 - m2)
        * _fact(j2 + m2)
    )
    k_min = round(max(0.0, j2 - J - m1, j1 - J + m2))
    k_max = round(min(j1 + j2 - J, j1 - m1, j2 + m2))
    total = 0.0
    for k in range(k_min, k_max + 1):
        total += (-1) ** k / (
            _fact(k)
            * _fact(j1 + j2 - J - k)
            * _fact(j1 - m1 - k)
            * _fact(j2 + m2 - k)
            * _fact(J - j2 + m1 + k)
            * _fact(J - j1 - m2 + k)
        )
    return prefactor * total


def invariant_projector(n: int) -> DenseOperator:
    """Orthogonal projector onto the total-J = 0 subspace of n qubits."""
    if n < 1 or n > MAX_OPERATOR_QUBITS:
        raise ValueError(f"n must be in 1..{MAX_OPERATOR_QUBITS}, got {n}")
    j_squared = sum(
        total_angular_momentum(axis, n).entries @ total_angular_momentum(axis, n).entries
        for axis in AXES
    )
    evals, evecs = np.linalg.eigh(j_squared)
    kernel = evecs[:, evals < 0.5]  # eigenvalues are J(J+1), so 0 or >= 2
    proj = kernel @ kernel.conj().T
    proj = (proj + proj.conj().T) / 2
    return DenseOperator(n, proj, hermitian=True)
