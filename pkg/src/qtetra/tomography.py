"""Desk-scale rehearsal of the four-qubit preparation and readout pipeline.

The chain simulated here: a thermal or pseudo-pure starting state, unitary
dynamics under a diagonal internal Hamiltonian, a configurable noise channel
(small random z-rotations plus depolarizing), full Pauli tomography (all 256
four-qubit Pauli expectations are evaluated directly), purification to the
dominant eigenvector, and fidelity scoring with the normalized
Hilbert-Schmidt overlap trace(ab)/sqrt(trace(a^2) trace(b^2)).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import named_states
from .amplitude import partner_rule_graph, vertex_amplitude
from .spin_algebra import PAULI, DenseOperator, StateVector, pauli_embedded
from .tetrahedron import (
    BlochPoint,
    bloch_state,
    dihedral_operator,
    fluctuation,
    independent_dihedral_expectations,
)

DIM = 16

HERMITIAN_ATOL = 1e-12
TRACE_ATOL = 1e-12
EIGENVALUE_FLOOR = -1e-10

# Largest polarization keeping the thermal state positive semidefinite:
# the smallest diagonal entry is (1 - eps)/16 - 4*eps, non-negative iff
# eps <= 1/65.
THERMAL_EPSILON_MAX = 1.0 / 65.0


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A 16x16 Hermitian, unit-trace, positive semidefinite matrix."""

    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.array(self.entries, dtype=complex)
        if arr.shape != (DIM, DIM):
            raise ValueError(f"expected a {DIM}x{DIM} matrix, got {arr.shape}")
        if np.abs(arr - arr.conj().T).max() >= HERMITIAN_ATOL:
            raise ValueError("density matrix must be Hermitian")
        if abs(np.trace(arr).real - 1.0) >= TRACE_ATOL:
            raise ValueError(f"density matrix must have unit trace, got {np.trace(arr).real}")
        if np.linalg.eigvalsh(arr).min() < EIGENVALUE_FLOOR:
            raise ValueError("density matrix must be positive semidefinite")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def from_state(cls, state) -> "DensityMatrix":
        psi = state.amplitudes if isinstance(state, StateVector) else np.asarray(state, complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    def purity(self) -> float:
        return float(np.trace(self.entries @ self.entries).real)


@dataclass(frozen=True)
class NMRParams:
    """Chemical shifts (Hz), J couplings (Hz) and polarization of 4 spins."""

    nu: tuple[float, float, float, float]
    jcoup: np.ndarray
    epsilon: float

    def __post_init__(self):
        if len(self.nu) != 4:
            raise ValueError("need four chemical shifts")
        j = np.array(self.jcoup, dtype=float)
        if j.shape != (4, 4):
            raise ValueError("jcoup must be a 4x4 matrix")
        if np.abs(j - j.T).max() > 1e-12 or np.abs(np.diag(j)).max() > 1e-12:
            raise ValueError("jcoup must be symmetric with zero diagonal")
        j.setflags(write=False)
        object.__setattr__(self, "jcoup", j)
        object.__setattr__(self, "nu", tuple(float(v) for v in self.nu))


# Placeholder spin-system parameters; edit to match a concrete molecule.
DEFAULT_NMR_PARAMS = NMRParams(
    nu=(1500.0, 700.0, -300.0, -2100.0),
    jcoup=np.array(
        [
            [0.0, 70.0, 1.5, 7.0],
            [70.0, 0.0, 35.0, 1.2],
            [1.5, 35.0, 0.0, 42.0],
            [7.0, 1.2, 42.0, 0.0],
        ]
    ),
    epsilon=1e-5,
)


@dataclass(frozen=True)
class NoiseSpec:
    """Depolarizing weight plus per-qubit random z-rotation spread."""

    depolarizing_p: float = 0.02
    rotation_angle_sd: float = 0.04
    seed: int = 42

    def __post_init__(self):
        if not 0.0 <= self.depolarizing_p <= 1.0:
            raise ValueError("depolarizing_p must lie in [0, 1]")
        if self.rotation_angle_sd < 0.0:
            raise ValueError("rotation_angle_sd must be non-negative")


DEFAULT_NOISE = NoiseSpec()
ZERO_NOISE = NoiseSpec(depolarizing_p=0.0, rotation_angle_sd=0.0, seed=0)


def _sigma_z_sum() -> np.ndarray:
    return sum(pauli_embedded("z", k, 4).entries for k in range(1, 5))


def thermal_state(params: NMRParams) -> DensityMatrix:
    """Thermal equilibrium state (1-eps)/16 I + eps * sum_j sigma_z^j.

    The deviation term is traceless, so the expression as written has trace
    1 - eps rather than 1; the returned matrix is renormalized to unit trace.
    Positivity requires eps <= 1/65.
    """
    eps = params.epsilon
    if not 0.0 <= eps <= THERMAL_EPSILON_MAX:
        raise ValueError(
            f"polarization {eps} outside the positivity range [0, {THERMAL_EPSILON_MAX:.6f}]"
        )
    rho = (1 - eps) / DIM * np.eye(DIM) + eps * _sigma_z_sum()
    return DensityMatrix(rho / np.trace(rho).real)


def pseudo_pure_state(epsilon: float) -> DensityMatrix:
    """(1-eps)/16 I + eps |0000><0000|; positive semidefinite for eps in [0, 1]."""
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"polarization {epsilon} outside the positivity range [0, 1]")
    rho = (1 - epsilon) / DIM * np.eye(DIM, dtype=complex)
    rho[0, 0] += epsilon
    return DensityMatrix(rho)


def internal_hamiltonian(params: NMRParams) -> DenseOperator:
    """Weak-coupling Hamiltonian sum_j pi nu_j sz^j + sum_{j<k} (pi/2) J_jk sz^j sz^k."""
    h = np.zeros((DIM, DIM), dtype=complex)
    sz = [pauli_embedded("z", k, 4).entries for k in range(1, 5)]
    for j in range(4):
        h += math.pi * params.nu[j] * sz[j]
    for j in range(4):
        for k in range(j + 1, 4):
            h += (math.pi / 2) * params.jcoup[j, k] * sz[j] @ sz[k]
    return DenseOperator(4, h, hermitian=True)


def evolve(rho: DensityMatrix, hamiltonian, t: float) -> DensityMatrix:
    """Unitary evolution rho -> U rho U^dag with U = exp(-i H t)."""
    h = hamiltonian.entries if hasattr(hamiltonian, "entries") else np.asarray(hamiltonian)
    evals, evecs = np.linalg.eigh(h)
    u = (evecs * np.exp(-1j * evals * t)) @ evecs.conj().T
    return DensityMatrix(u @ rho.entries @ u.conj().T)


_PAULI_LETTERS = ("I", "X", "Y", "Z")
_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": PAULI["x"],
    "Y": PAULI["y"],
    "Z": PAULI["z"],
}


def pauli_strings() -> list[str]:
    """The 256 four-qubit Pauli labels in canonical order (qubit 1 first)."""
    return ["".join(p) for p in itertools.product(_PAULI_LETTERS, repeat=4)]


def _pauli_matrices() -> np.ndarray:
    mats = np.empty((256, DIM, DIM), dtype=complex)
    for i, label in enumerate(pauli_strings()):
        m = np.array([[1.0 + 0.0j]])
        for ch in label:
            m = np.kron(m, _SINGLE[ch])
        mats[i] = m
    return mats


_PAULI_CACHE: np.ndarray | None = None


def _paulis() -> np.ndarray:
    global _PAULI_CACHE
    if _PAULI_CACHE is None:
        _PAULI_CACHE = _pauli_matrices()
    return _PAULI_CACHE


def pauli_expectations(rho: DensityMatrix) -> np.ndarray:
    """<P> = trace(rho P) for all 256 Pauli strings, canonically indexed."""
    mats = _paulis()
    # trace(rho P) = sum_ij rho_ij P_ji
    return np.einsum("ij,kji->k", rho.entries, mats).real


def rho_from_expectations(values) -> DensityMatrix:
    """Invert tomography: rho = (1/16) sum_P <P> P (exact round trip)."""
    vals = np.asarray(values, dtype=float)
    if vals.shape != (256,):
        raise ValueError(f"expected 256 Pauli expectations, got {vals.shape}")
    rho = np.einsum("k,kij->ij", vals, _paulis()) / DIM
    return DensityMatrix(rho)


class DegeneracyError(ValueError):
    """The dominant eigenvalue of a density matrix is not unique."""


def ml_purify(rho: DensityMatrix, gap_atol: float = 1e-10) -> StateVector:
    """The pure state maximizing <psi|rho|psi>: the dominant eigenvector.

    The global phase is fixed by making the largest-magnitude component real
    and positive. Raises DegeneracyError when the top eigenvalue gap is
    below ``gap_atol``.
    """
    evals, evecs = np.linalg.eigh(rho.entries)
    gap = evals[-1] - evals[-2]
    if gap < gap_atol:
        raise DegeneracyError(
            f"dominant eigenvalue is degenerate (gap {gap:.3e} between "
            f"{evals[-1]:.6f} and {evals[-2]:.6f})"
        )
    psi = evecs[:, -1]
    pivot = int(np.argmax(np.abs(psi)))
    psi = psi * (abs(psi[pivot]) / psi[pivot])
    return StateVector(4, psi)


def fidelity(a, b) -> float:
    """Normalized Hilbert-Schmidt overlap trace(ab)/sqrt(trace(a^2) trace(b^2))."""
    ma = a.entries if isinstance(a, DensityMatrix) else np.asarray(a, dtype=complex)
    mb = b.entries if isinstance(b, DensityMatrix) else np.asarray(b, dtype=complex)
    pa = np.trace(ma @ ma).real
    pb = np.trace(mb @ mb).real
    if pa <= 1e-300 or pb <= 1e-300:
        raise ValueError("fidelity is undefined for zero-purity input")
    return float(np.trace(ma @ mb).real / math.sqrt(pa * pb))


def apply_noise(rho: DensityMatrix, noise: NoiseSpec, rng: np.random.Generator) -> DensityMatrix:
    """Small random z-rotations on each qubit, then depolarizing."""
    angles = rng.normal(0.0, noise.rotation_angle_sd, 4)
    u = np.array([[1.0 + 0.0j]])
    for angle in angles:
        u = np.kron(u, np.diag([np.exp(-0.5j * angle), np.exp(0.5j * angle)]))
    mixed = u @ rho.entries @ u.conj().T
    p = noise.depolarizing_p
    return DensityMatrix((1 - p) * mixed + p * np.eye(DIM) / DIM)


@dataclass(frozen=True)
class TargetReport:
    name: str
    theta: float
    phi: float
    fidelity: float
    delta_theory: float
    delta_measured: float
    dihedral_theory: tuple[float, float, float]
    dihedral_measured: tuple[float, float, float]
    amplitude_theory: complex
    amplitude_purified: complex

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "theta": self.theta,
            "phi": self.phi,
            "fidelity": self.fidelity,
            "delta_theory": self.delta_theory,
            "delta_measured": self.delta_measured,
            "dihedral_theory": {
                "cos12": self.dihedral_theory[0],
                "cos13": self.dihedral_theory[1],
                "cos14": self.dihedral_theory[2],
            },
            "dihedral_measured": {
                "cos12": self.dihedral_measured[0],
                "cos13": self.dihedral_measured[1],
                "cos14": self.dihedral_measured[2],
            },
            "amplitude_theory": {"re": self.amplitude_theory.real, "im": self.amplitude_theory.imag},
            "amplitude_purified": {
                "re": self.amplitude_purified.real,
                "im": self.amplitude_purified.imag,
            },
        }


@dataclass(frozen=True)
class ExperimentReport:
    noise: NoiseSpec
    rule: str
    regular: str
    targets: tuple[TargetReport, ...]

    def to_dict(self) -> dict:
        return {
            "noise": {
                "depolarizing_p": self.noise.depolarizing_p,
                "rotation_angle_sd": self.noise.rotation_angle_sd,
                "seed": self.noise.seed,
            },
            "convention": {"slot_rule": self.rule, "regular_state": self.regular},
            "targets": [t.to_dict() for t in self.targets],
        }


def simulate_experiment(
    targets: dict[str, BlochPoint] | None = None,
    noise: NoiseSpec = DEFAULT_NOISE,
    rule: str = named_states.DEFAULT_RULE,
    regular: str = named_states.DEFAULT_REGULAR,
) -> ExperimentReport:
    """Prepare, corrupt, tomograph, purify and score each target state.

    For every target Bloch point: build the ideal invariant tensor, apply the
    noise channel, run the exact tomography round trip, purify to the dominant
    eigenvector, score the fidelity against the ideal state, measure dihedral
    expectations and the total fluctuation on the noisy state, and recompute
    the vertex amplitude with the purified state at node 5 (four ideal regular
    tensors elsewhere). A density matrix carries no global phase, so the
    purified state is phase-aligned against the ideal target before the
    amplitude is evaluated; in the noiseless limit the amplitudes then match
    the theory values exactly.
    """
    if targets is None:
        targets = named_states.NAMED_POINTS
    rng = np.random.default_rng(noise.seed)
    graph = partner_rule_graph(rule)
    reg = named_states.regular_state(regular)

    interior_ops = [dihedral_operator(pair, "interior").entries for pair in ((1, 2), (1, 3), (1, 4))]
    reports = []
    for name, point in targets.items():
        ideal = bloch_state(point)
        rho_ideal = DensityMatrix.from_state(ideal.embedded)
        rho_noisy = apply_noise(rho_ideal, noise, rng)
        rho_measured = rho_from_expectations(pauli_expectations(rho_noisy))
        purified = ml_purify(rho_measured)
        overlap = np.vdot(ideal.embedded.amplitudes, purified.amplitudes)
        if abs(overlap) > 1e-12:
            purified = StateVector(4, purified.amplitudes * (overlap.conjugate() / abs(overlap)))

        measured = []
        delta_measured = 0.0
        for op in interior_ops:
            mean = np.trace(rho_measured.entries @ op).real
            mean_sq = np.trace(rho_measured.entries @ op @ op).real
            measured.append(float(mean))
            delta_measured += mean_sq - mean**2

        amp_theory = vertex_amplitude([reg] * 4 + [ideal], graph).value
        amp_purified = vertex_amplitude([reg] * 4 + [purified], graph).value
        reports.append(
            TargetReport(
                name=name,
                theta=point.theta,
                phi=point.phi,
                fidelity=fidelity(rho_measured, rho_ideal),
                delta_theory=fluctuation(point),
                delta_measured=float(delta_measured),
                dihedral_theory=independent_dihedral_expectations(point, "interior"),
                dihedral_measured=tuple(measured),
                amplitude_theory=amp_theory,
                amplitude_purified=amp_purified,
            )
        )
    return ExperimentReport(noise=noise, rule=rule, regular=regular, targets=tuple(reports))
