"""Independent concurrence references used to cross-check the tensor engine.

None of these functions call into :mod:`etensor.tensor`; they go through
the spin-flip construction, reduced-state purity, or the mixed-state
eigenvalue formula, so agreement with the tensor components is a genuine
two-path check rather than a tautology.
"""

from __future__ import annotations

import math

import numpy as np

from .localops import DensityMatrix, PartyGrouping, reduced_density, trace_to_pair
from .states import StateVector, w_state

SIGMA_Y = np.array([[0.0, -1j], [1j, 0.0]])

# two-qubit flip operator; real antidiagonal with signs
FLIP_2Q = np.kron(SIGMA_Y, SIGMA_Y).real.copy()
FLIP_2Q.flags.writeable = False


def _require_two_qubits(state: StateVector) -> None:
    if state.structure.dims != (2, 2):
        raise ValueError(
            f"expected a two-qubit state, got dims {state.structure.dims}"
        )


def spin_flip(state: StateVector) -> StateVector:
    """Conjugate the amplitudes and flip both qubits.

    Applying the flip twice returns the original state exactly; the flip of
    a product state is orthogonal to the original.
    """
    _require_two_qubits(state)
    return StateVector(state.structure, FLIP_2Q @ np.conj(state.amplitudes))


def concurrence_pure_2qubit(state: StateVector) -> float:
    """Overlap magnitude of a two-qubit pure state with its spin flip.

    Equals 2|a00*a11 - a01*a10| and lies in [0, 1]: 0 for product states,
    1 for maximally entangled ones.
    """
    _require_two_qubits(state)
    a = state.amplitudes
    return float(abs(np.conj(a) @ (FLIP_2Q @ np.conj(a))))


def concurrence_purity(state: StateVector, bipartition: PartyGrouping) -> float:
    """Generalized concurrence sqrt(2(1 - Tr rho_A^2)) across a bipartition.

    ``bipartition`` must split the parties into exactly two blocks; the
    reduced operator of the first block is used (either gives the same
    purity for a pure state).
    """
    if len(bipartition.groups) != 2:
        raise ValueError(
            f"bipartition needs exactly two blocks, got {len(bipartition.groups)}"
        )
    bipartition.validate_for(state.structure)
    rho = reduced_density(state, bipartition.groups[0])
    purity = float(np.trace(rho @ rho).real)
    return math.sqrt(max(0.0, 2.0 * (1.0 - purity)))


def concurrence_mixed_2qubit(rho: DensityMatrix) -> float:
    """Mixed-state two-qubit concurrence from the flip-product eigenvalues.

    max(0, l1 - l2 - l3 - l4) where the l's are the decreasing square roots
    of the eigenvalues of rho * flip(rho).  They are evaluated as the
    singular values of sqrt(rho) F conj(sqrt(rho)), which has the same
    spectrum but stays accurate on rank-deficient inputs where a general
    eigensolver loses half its digits.  Round-off negatives in rho's own
    spectrum are clamped to zero before the square root.
    """
    eigenvalues, eigenvectors = np.linalg.eigh(rho.entries)
    root = (eigenvectors * np.sqrt(np.clip(eigenvalues, 0.0, None))) \
        @ eigenvectors.conj().T
    bridge = root @ FLIP_2Q @ np.conj(root)
    lams = np.linalg.svd(bridge, compute_uv=False)
    return float(max(0.0, lams[0] - lams[1] - lams[2] - lams[3]))


def dur_average(num_parties: int) -> float:
    """Mean squared pairwise concurrence of the single-excitation W state.

    Every pair of parties is traced out of the others and scored with the
    mixed-state concurrence; the closed form of the average is 4/M^2.
    This is the discard scenario: the other M-2 parties are lost, not
    measured, which is why it sits below the pair components of the intact
    state.
    """
    m = int(num_parties)
    if not 3 <= m <= 10:
        raise ValueError(f"party count must be between 3 and 10, got {m}")
    state = w_state(m)
    squares = [
        concurrence_mixed_2qubit(trace_to_pair(state, (i, j))) ** 2
        for i in range(m)
        for j in range(i + 1, m)
    ]
    return float(np.mean(squares))
