"""Quantum tetrahedron states and their geometric operators.

A rank-4 SU(2)-invariant tensor of four qubits lives in a 2-dimensional
subspace spanned by the logical basis

    |0_L> = (1/2) (|01> - |10>)(|01> - |10>)
    |1_L> = (1/3)^(1/2) [ |1100> + |0011> - (1/2)(|01> + |10>)(|01> + |10>) ]

and is addressed by Bloch angles: cos(theta/2)|0_L> + e^(i phi) sin(theta/2)|1_L>,
with the |0_L> coefficient kept real non-negative (no extra global phase).

Each face has the sharp area sqrt(3/4) in units of 8*pi*l_P^2. Dihedral
cosines come in two sign conventions:

* ``interior``: cosine of the interior dihedral angle; -(4/3) J^(k).J^(m).
  A regular tetrahedron has all cosines 1/3 and <cos12>+<cos13>+<cos14> = 1.
* ``normals``: cosine of the angle between outward face normals,
  (4/3) J^(k).J^(m); the supplement, summing to -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spin_algebra import AXES, DenseOperator, StateVector, angular_momentum, closure_defect

CONVENTIONS = ("interior", "normals")

CLOSURE_ATOL = 1e-10

# Closure makes opposite pairs interchangeable: (3,4)~(1,2), (2,4)~(1,3), (2,3)~(1,4).
PAIR_CLASS = {
    (1, 2): (1, 2), (3, 4): (1, 2),
    (1, 3): (1, 3), (2, 4): (1, 3),
    (1, 4): (1, 4), (2, 3): (1, 4),
}


def _basis16(bits) -> np.ndarray:
    index = 0
    for b in bits:
        index = 2 * index + b
    v = np.zeros(16)
    v[index] = 1.0
    return v


def _build_logical_basis():
    # two-qubit combinations expanded into the 4-qubit register
    def pair(front, back):
        out = np.zeros(16)
        out[(front[0] * 2 + front[1]) * 4 + back[0] * 2 + back[1]] = 1.0
        return out

    def product(coeffs_front, coeffs_back):
        out = np.zeros(16)
        for (fb, fc) in coeffs_front:
            for (bb, bc) in coeffs_back:
                out += fc * bc * pair(fb, bb)
        return out

    anti = [((0, 1), 1.0), ((1, 0), -1.0)]
    sym = [((0, 1), 1.0), ((1, 0), 1.0)]
    zero_l = 0.5 * product(anti, anti)
    one_l = (
        _basis16((1, 1, 0, 0)) + _basis16((0, 0, 1, 1)) - 0.5 * product(sym, sym)
    ) / math.sqrt(3)
    return zero_l, one_l


_ZERO_L, _ONE_L = _build_logical_basis()


def logical_basis() -> tuple[StateVector, StateVector]:
    """The orthonormal basis (|0_L>, |1_L>) of the 4-qubit invariant subspace."""
    return (
        StateVector(4, _ZERO_L.astype(complex)),
        StateVector(4, _ONE_L.astype(complex)),
    )


@dataclass(frozen=True)
class BlochPoint:
    """A point (theta, phi) on the logical Bloch sphere."""

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise ValueError(f"phi must lie in [0, 2*pi), got {self.phi}")


@dataclass(frozen=True)
class DihedralPair:
    """An unordered pair of distinct face indices in 1..4."""

    k: int
    m: int

    def __post_init__(self):
        for v in (self.k, self.m):
            if v not in (1, 2, 3, 4):
                raise ValueError(f"face indices must be in 1..4, got {v}")
        if self.k == self.m:
            raise ValueError("dihedral pair needs two distinct faces")

    @property
    def sorted(self) -> tuple[int, int]:
        return (self.k, self.m) if self.k < self.m else (self.m, self.k)


@dataclass(frozen=True, eq=False)
class InvariantTensor:
    """A Bloch point together with its embedded 16-dimensional state."""

    point: BlochPoint
    embedded: StateVector

    def __post_init__(self):
        defect = closure_defect(self.embedded)
        if defect >= CLOSURE_ATOL:
            raise ValueError(f"embedded state is not invariant: closure defect {defect:.3e}")
        alpha = math.cos(self.point.theta / 2)
        beta = np.exp(1j * self.point.phi) * math.sin(self.point.theta / 2)
        expected = alpha * _ZERO_L + beta * _ONE_L
        gap = np.abs(self.embedded.amplitudes - expected).max()
        if gap >= 1e-12:
            raise ValueError(
                f"embedded state deviates from its Bloch point by {gap:.3e}"
            )


def _as_point(point) -> BlochPoint:
    if isinstance(point, BlochPoint):
        return point
    theta, phi = point
    return BlochPoint(float(theta), float(phi))


def _as_pair(pair) -> DihedralPair:
    if isinstance(pair, DihedralPair):
        return pair
    k, m = pair
    return DihedralPair(int(k), int(m))


def bloch_coefficients(point) -> np.ndarray:
    """The (|0_L>, |1_L>) coefficient pair of a Bloch point."""
    p = _as_point(point)
    return np.array(
        [math.cos(p.theta / 2), np.exp(1j * p.phi) * math.sin(p.theta / 2)]
    )


def bloch_state(point) -> InvariantTensor:
    """Embed a Bloch point as a normalized 4-qubit invariant tensor."""
    p = _as_point(point)
    alpha, beta = bloch_coefficients(p)
    amplitudes = alpha * _ZERO_L + beta * _ONE_L
    return InvariantTensor(p, StateVector(4, amplitudes))


def area_eigenvalue(spin: float = 0.5) -> float:
    """Sharp face area sqrt(j(j+1)) in units of 8*pi*l_P^2; only j = 1/2 here."""
    if abs(spin - 0.5) > 1e-12:
        raise ValueError(f"only spin 1/2 is supported, got {spin}")
    return math.sqrt(0.75)


def _check_convention(convention: str) -> None:
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")


def dihedral_operator(pair, convention: str = "interior") -> DenseOperator:
    """The 16-dim cosine operator for the dihedral angle between faces k and m."""
    _check_convention(convention)
    p = _as_pair(pair)
    dot = np.zeros((16, 16), dtype=complex)
    for axis in AXES:
        jk = angular_momentum(axis, p.k, 4).entries
        jm = angular_momentum(axis, p.m, 4).entries
        dot += jk @ jm
    sign = 1.0 if convention == "normals" else -1.0
    return DenseOperator(4, sign * (4.0 / 3.0) * dot, hermitian=True)


def compress_to_logical(op) -> np.ndarray:
    """Project a 16-dim operator to the 2x2 block in the (|1_L>, |0_L>) basis."""
    entries = op.entries if isinstance(op, DenseOperator) else np.asarray(op, dtype=complex)
    basis = np.column_stack([_ONE_L, _ZERO_L]).astype(complex)
    return basis.conj().T @ entries @ basis


def dihedral_expectation(point, pair, convention: str = "interior") -> float:
    """Closed-form <cos theta_km> in the state at the given Bloch point.

    Interior convention:
        <cos12> = cos^2(theta/2) - (1/3) sin^2(theta/2)
        <cos13> = (2/3) sin^2(theta/2) + (2*sqrt(3)/3) cos(theta/2) sin(theta/2) cos(phi)
        <cos14> = same as <cos13> with cos(phi) negated
    with opposite pairs equal by closure. The normals convention negates.
    """
    _check_convention(convention)
    p = _as_point(point)
    cls = PAIR_CLASS[_as_pair(pair).sorted]
    c, s = math.cos(p.theta / 2), math.sin(p.theta / 2)
    if cls == (1, 2):
        value = c * c - s * s / 3
    else:
        cross = (2 * math.sqrt(3) / 3) * c * s * math.cos(p.phi)
        value = (2 / 3) * s * s + (cross if cls == (1, 3) else -cross)
    return value if convention == "interior" else -value


def independent_dihedral_expectations(point, convention: str = "interior") -> tuple[float, float, float]:
    """(<cos12>, <cos13>, <cos14>) at a Bloch point."""
    return tuple(
        dihedral_expectation(point, pair, convention) for pair in ((1, 2), (1, 3), (1, 4))
    )


def fluctuation(point) -> float:
    """Total quadratic dihedral fluctuation Delta at a Bloch point.

    Delta = 2/3 + (8/3) cos^2(theta/2) sin^2(theta/2) (1 - cos^2 phi), the sum
    of the three independent operator variances (see fluctuation_from_operators).
    """
    p = _as_point(point)
    c2 = math.cos(p.theta / 2) ** 2
    s2 = math.sin(p.theta / 2) ** 2
    return 2 / 3 + (8 / 3) * c2 * s2 * (1 - math.cos(p.phi) ** 2)


def fluctuation_from_operators(point) -> float:
    """Delta recomputed as sum_km (<O_km^2> - <O_km>^2) with dense operators."""
    psi = bloch_state(point).embedded.amplitudes
    total = 0.0
    for pair in ((1, 2), (1, 3), (1, 4)):
        op = dihedral_operator(pair, "interior").entries
        mean = np.vdot(psi, op @ psi).real
        mean_sq = np.vdot(psi, op @ (op @ psi)).real
        total += mean_sq - mean**2
    return total


def regular_points() -> list[BlochPoint]:
    """Bloch points whose three independent interior cosines all equal 1/3."""
    return [BlochPoint(math.pi / 2, math.pi / 2), BlochPoint(math.pi / 2, 3 * math.pi / 2)]
