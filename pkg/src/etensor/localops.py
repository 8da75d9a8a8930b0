"""Local unitaries, computational-basis measurement, regrouping, partial trace.

Everything here acts on one party (or a partition of parties) of an
immutable :class:`~etensor.states.StateVector` and returns a new value.
Measurement is restricted to the computational basis; measuring in another
basis is done by applying a local unitary first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .states import PartyStructure, StateVector, projection_probability

UNITARY_TOL = 1e-10
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-9
MEASURE_EPS = 1e-14


@dataclass(frozen=True, eq=False)
class LocalUnitary:
    """A unitary matrix acting on a single party."""

    party: int
    matrix: np.ndarray

    def __post_init__(self) -> None:
        mat = np.array(self.matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"unitary must be a square matrix, got {mat.shape}")
        defect = np.max(np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])))
        if defect > UNITARY_TOL:
            raise ValueError(
                f"matrix is not unitary: max |U^H U - I| = {defect:.3g}"
            )
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "party", int(self.party))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> LocalUnitary:
        return LocalUnitary(self.party, self.matrix.conj().T)


def hadamard(party: int) -> LocalUnitary:
    h = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2)
    return LocalUnitary(party, h)


def phase_gate(party: int, phases: Sequence[float]) -> LocalUnitary:
    """Diagonal gate exp(i*phase_k) per basis value; leaves components unchanged."""
    return LocalUnitary(party, np.diag(np.exp(1j * np.asarray(phases, dtype=float))))


def identity_gate(party: int, dim: int) -> LocalUnitary:
    return LocalUnitary(party, np.eye(dim))


def apply_local(state: StateVector, unitary: LocalUnitary) -> StateVector:
    """Transform the amplitudes on one party's index; the norm is preserved."""
    party = state.structure.check_party(unitary.party)
    if unitary.dim != state.structure.dims[party]:
        raise ValueError(
            f"unitary of dimension {unitary.dim} does not match party {party} "
            f"of dimension {state.structure.dims[party]}"
        )
    moved = np.tensordot(unitary.matrix, state.tensor, axes=(1, party))
    out = np.moveaxis(moved, 0, party)
    return StateVector(state.structure, out.reshape(-1))


def measure_party(
    state: StateVector, party: int, outcome: int
) -> tuple[float, StateVector | None]:
    """Project one party onto a basis value and condition the rest.

    Returns the outcome probability and the renormalized state of the
    remaining parties (their original labels are kept).  An outcome with
    probability below ``MEASURE_EPS`` yields ``(0.0, None)``.
    """
    structure = state.structure
    party = structure.check_party(party)
    if structure.num_parties < 2:
        raise ValueError("measuring the only party would leave no state")
    outcome = int(outcome)
    if not 0 <= outcome < structure.dims[party]:
        raise ValueError(
            f"outcome {outcome} out of range for party {party} of dimension "
            f"{structure.dims[party]}"
        )
    prob = projection_probability(state, {party: outcome}).probability
    if prob < MEASURE_EPS:
        return 0.0, None
    conditioned = state.tensor.take(outcome, axis=party) / math.sqrt(prob)
    remaining = PartyStructure(
        dims=tuple(n for i, n in enumerate(structure.dims) if i != party),
        labels=tuple(s for i, s in enumerate(structure.labels) if i != party),
    )
    return prob, StateVector(remaining, conditioned.reshape(-1))


@dataclass(frozen=True)
class PartyGrouping:
    """Ordered partition of party indices into blocks to be merged."""

    groups: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        groups = tuple(tuple(int(p) for p in g) for g in self.groups)
        if not groups or any(not g for g in groups):
            raise ValueError("grouping needs at least one non-empty block")
        flat = [p for g in groups for p in g]
        if len(set(flat)) != len(flat):
            raise ValueError(f"grouping blocks must be disjoint, got {groups}")
        object.__setattr__(self, "groups", groups)

    def validate_for(self, structure: PartyStructure) -> None:
        flat = sorted(p for g in self.groups for p in g)
        if flat != list(range(structure.num_parties)):
            raise ValueError(
                f"grouping {self.groups} must cover all "
                f"{structure.num_parties} parties exactly once"
            )


def regroup(state: StateVector, grouping: PartyGrouping) -> StateVector:
    """Merge each block of parties into a single party of product dimension.

    Pure data movement: amplitudes are permuted and re-indexed, never
    recomputed, so :func:`ungroup` restores the original bit for bit.
    """
    grouping.validate_for(state.structure)
    dims = state.structure.dims
    labels = state.structure.labels
    axis_order = [p for g in grouping.groups for p in g]
    merged_dims = tuple(math.prod(dims[p] for p in g) for g in grouping.groups)
    merged_labels = tuple("+".join(labels[p] for p in g) for g in grouping.groups)
    data = state.tensor.transpose(axis_order).reshape(-1)
    return StateVector(PartyStructure(merged_dims, merged_labels), data)


def ungroup(
    state: StateVector, grouping: PartyGrouping, original: PartyStructure
) -> StateVector:
    """Inverse of :func:`regroup` for the same grouping and original layout."""
    grouping.validate_for(original)
    axis_order = [p for g in grouping.groups for p in g]
    merged_dims = tuple(
        math.prod(original.dims[p] for p in g) for g in grouping.groups
    )
    if state.structure.dims != merged_dims:
        raise ValueError(
            f"state dims {state.structure.dims} do not match the grouping's "
            f"merged dims {merged_dims}"
        )
    split_shape = tuple(original.dims[p] for p in axis_order)
    inverse = np.argsort(axis_order)
    data = state.amplitudes.reshape(split_shape).transpose(inverse).reshape(-1)
    return StateVector(original, data)


def reduced_density(state: StateVector, keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrix of the kept parties (in the order given)."""
    structure = state.structure
    keep = [structure.check_party(p) for p in keep]
    if len(set(keep)) != len(keep):
        raise ValueError(f"kept parties must be distinct, got {keep}")
    rest = [i for i in range(structure.num_parties) if i not in keep]
    kept_dim = math.prod(structure.dims[p] for p in keep)
    block = state.tensor.transpose(keep + rest).reshape(kept_dim, -1)
    return block @ block.conj().T


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Two-qubit density operator, validated on entry."""

    entries: np.ndarray
    dims: tuple[int, int] = (2, 2)

    def __post_init__(self) -> None:
        if tuple(self.dims) != (2, 2):
            raise ValueError("only two-qubit density matrices are supported")
        mat = np.array(self.entries, dtype=np.complex128)
        if mat.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {mat.shape}")
        if np.max(np.abs(mat - mat.conj().T)) > HERMITIAN_TOL:
            raise ValueError("density matrix must be Hermitian")
        if abs(np.trace(mat).real - 1.0) > TRACE_TOL:
            raise ValueError(
                f"density matrix trace is {np.trace(mat).real:.12g}, not 1"
            )
        if np.min(np.linalg.eigvalsh(mat)) < EIGENVALUE_FLOOR:
            raise ValueError("density matrix has a significantly negative eigenvalue")
        mat.flags.writeable = False
        object.__setattr__(self, "entries", mat)
        object.__setattr__(self, "dims", (2, 2))


def trace_to_pair(state: StateVector, keep: Sequence[int]) -> DensityMatrix:
    """Partial trace down to two kept qubit parties."""
    keep = list(keep)
    if len(keep) != 2:
        raise ValueError(f"exactly two parties must be kept, got {keep}")
    for p in keep:
        state.structure.check_party(p)
        if state.structure.dims[p] != 2:
            raise ValueError(
                f"kept party {p} has dimension {state.structure.dims[p]}, "
                "but the two-qubit reduction requires qubits"
            )
    return DensityMatrix(reduced_density(state, keep))
