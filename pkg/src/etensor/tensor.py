"""Entanglement tensor components of pure multipartite states.

For a chosen subset of D parties, the component measures how far the state
is from factoring across that subset.  It is built from pairwise
permutation differences of amplitude products:

* Fix an outcome for every *unselected* party.  Each such sector is
  weighted by the reciprocal of its probability; a zero-probability sector
  contributes exactly 0 (all of its amplitudes vanish, so 0/0 is resolved
  to 0).
* For each selected party pick a pair of basis values (k < l).  The lowest
  selected party is the anchor and is never permuted.  Starting from the
  highest selected party, form the amplitude-product difference under a
  k/l swap and reduce it by squared magnitude; each remaining party, in
  descending order, contributes the plain absolute difference between the
  inner value and the inner value with that party's k/l swap applied.
* The component is the square root of the normalization constant times the
  weighted sum over all sectors and pair choices.

With the default constant 4 the single component of a two-qubit state is
the familiar concurrence, and a maximally entangled pair scores exactly 1.
For three or more parties the values depend on the local basis; see
:mod:`etensor.supremum` for the basis search.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .states import PartyStructure, StateVector

DEFAULT_NORM_CONSTANT = 4.0
ZERO_COMPONENT_THRESHOLD = 1e-10

BASIS_NOTE = (
    "component values for subsets of 3 or more parties depend on the local "
    "basis; this report uses the basis of the input amplitudes"
)


@dataclass(frozen=True)
class SubsetSelector:
    """Strictly increasing tuple of party indices, at least two of them."""

    parties: tuple[int, ...]

    def __post_init__(self) -> None:
        parties = tuple(int(p) for p in self.parties)
        if len(parties) < 2:
            raise ValueError("a subset needs at least two parties")
        if any(b <= a for a, b in zip(parties, parties[1:])):
            raise ValueError(
                f"subset parties must be strictly increasing, got {parties}"
            )
        if parties[0] < 0:
            raise ValueError(f"party indices must be non-negative, got {parties}")
        object.__setattr__(self, "parties", parties)

    @property
    def size(self) -> int:
        return len(self.parties)

    def validate_for(self, structure: PartyStructure) -> None:
        if self.parties[-1] >= structure.num_parties:
            raise ValueError(
                f"subset {self.parties} out of range for "
                f"{structure.num_parties} parties"
            )


def subsets_of_size(structure: PartyStructure, size: int) -> list[SubsetSelector]:
    """All party subsets of the given size, in lexicographic order."""
    if not 2 <= size <= structure.num_parties:
        raise ValueError(
            f"subset size {size} out of range 2..{structure.num_parties}"
        )
    return [
        SubsetSelector(c)
        for c in itertools.combinations(range(structure.num_parties), size)
    ]


@dataclass(frozen=True)
class NormalizationScheme:
    """Per-subset-size positive constants; sizes not listed default to 4.

    The default pins the two-party value of a maximally entangled qubit
    pair, and of the D-qubit generalization, to 1.
    """

    constants: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {int(d): float(v) for d, v in self.constants.items()}
        if any(v <= 0.0 for v in clean.values()):
            raise ValueError("normalization constants must be strictly positive")
        object.__setattr__(self, "constants", clean)

    def constant(self, size: int) -> float:
        return self.constants.get(size, DEFAULT_NORM_CONSTANT)


DEFAULT_SCHEME = NormalizationScheme()


@dataclass(frozen=True)
class TensorReport:
    """Component values per subset, with the scheme that produced them."""

    structure: PartyStructure
    scheme: NormalizationScheme
    components: Mapping[SubsetSelector, float]
    basis_note: str = BASIS_NOTE


def permutation_difference(
    state: StateVector,
    k_tuple: Sequence[int],
    l_tuple: Sequence[int],
    party: int,
) -> complex:
    """Innermost permutation difference for one party.

    Returns ``a(k) a(l) - a(k') a(l')`` where k'/l' are k/l with the given
    party's components exchanged.  This is the quantity whose nested
    reductions make up :func:`component`; on its own (with both tuples
    ranging over a two-party state) it is the concurrence bracket.
    """
    structure = state.structure
    party = structure.check_party(party)
    k = tuple(int(x) for x in k_tuple)
    l = tuple(int(x) for x in l_tuple)
    for name, tup in (("k", k), ("l", l)):
        if len(tup) != structure.num_parties:
            raise ValueError(f"{name} tuple {tup} has wrong arity")
        for x, n in zip(tup, structure.dims):
            if not 0 <= x < n:
                raise ValueError(f"{name} tuple {tup} out of range for dims "
                                 f"{structure.dims}")
    ks = list(k)
    ls = list(l)
    ks[party], ls[party] = ls[party], ks[party]
    return complex(
        state.amplitude(k) * state.amplitude(l)
        - state.amplitude(tuple(ks)) * state.amplitude(tuple(ls))
    )


def component_evaluator(
    structure: PartyStructure,
    subset: SubsetSelector,
    scheme: NormalizationScheme = DEFAULT_SCHEME,
) -> Callable[[np.ndarray], float]:
    """Precompiled component evaluator for repeated calls on one subset.

    The returned callable maps an amplitude tensor shaped like
    ``structure.dims`` to the component value.  Sector bookkeeping and pair
    enumeration are set up once, which matters inside optimization loops.
    """
    subset.validate_for(structure)
    return _make_evaluator(structure.dims, subset.parties,
                           scheme.constant(subset.size))


def _make_evaluator(
    dims: tuple[int, ...],
    selected: tuple[int, ...],
    constant: float,
) -> Callable[[np.ndarray], float]:
    unselected = tuple(i for i in range(len(dims)) if i not in selected)
    depth = len(selected)
    perm = selected + unselected
    sel_shape = tuple(dims[i] for i in selected)
    num_sectors = math.prod(dims[i] for i in unselected) if unselected else 1
    sector_range = np.arange(num_sectors)
    pair_lists = [
        list(itertools.combinations(range(dims[i]), 2)) for i in selected
    ]
    pair_indexers = [
        np.ix_(*[np.asarray(pair) for pair in choice], sector_range)
        for choice in itertools.product(*pair_lists)
    ]
    flip_all = (slice(None, None, -1),) * (depth - 1) + (slice(None),)
    sum_axes = tuple(range(depth))

    def evaluate(tensor: np.ndarray) -> float:
        sectors = tensor.transpose(perm).reshape(sel_shape + (num_sectors,))
        prob = np.sum(sectors.real**2 + sectors.imag**2, axis=sum_axes)
        weight = np.divide(
            1.0, prob, out=np.zeros_like(prob), where=prob > 0.0
        )
        acc = np.zeros(num_sectors)
        for indexer in pair_indexers:
            block = sectors[indexer]
            # products a(k-side) * a(l-side) over the swap lattice of the
            # non-anchor parties; the anchor is consumed by block[0]/block[1]
            products = block[0] * block[1][flip_all]
            reduced = np.abs(products[..., 0, :] - products[..., 1, :]) ** 2
            while reduced.ndim > 1:
                reduced = np.abs(reduced[..., 0, :] - reduced[..., 1, :])
            acc += reduced
        return math.sqrt(constant * float(np.dot(weight, acc)))

    return evaluate


def component(
    state: StateVector,
    subset: SubsetSelector,
    scheme: NormalizationScheme = DEFAULT_SCHEME,
) -> float:
    """Entanglement tensor component for one party subset."""
    return component_evaluator(state.structure, subset, scheme)(state.tensor)


def component_with_nesting_order(
    state: StateVector,
    parties_in_order: Sequence[int],
    scheme: NormalizationScheme = DEFAULT_SCHEME,
) -> float:
    """Component evaluated with an explicit permutation nesting order.

    ``parties_in_order[0]`` is the anchor (never permuted) and the last
    entry carries the innermost squared-magnitude reduction.  The canonical
    :func:`component` uses ascending order.  Exposed to probe how much the
    value depends on this convention for subsets of 3 or more parties.
    """
    order = tuple(int(p) for p in parties_in_order)
    if len(set(order)) != len(order) or len(order) < 2:
        raise ValueError(f"nesting order must list distinct parties, got {order}")
    subset = SubsetSelector(tuple(sorted(order)))
    subset.validate_for(state.structure)
    evaluator = _make_evaluator(
        state.structure.dims, order, scheme.constant(len(order))
    )
    return evaluator(state.tensor)


def full_tensor(
    state: StateVector,
    scheme: NormalizationScheme = DEFAULT_SCHEME,
    sizes: Iterable[int] | None = None,
) -> TensorReport:
    """Every component of every requested size (default: all sizes 2..M)."""
    structure = state.structure
    if sizes is None:
        size_list = list(range(2, structure.num_parties + 1))
    else:
        size_list = sorted({int(s) for s in sizes})
        for s in size_list:
            if not 2 <= s <= structure.num_parties:
                raise ValueError(
                    f"size {s} out of range 2..{structure.num_parties}"
                )
    components: dict[SubsetSelector, float] = {}
    tensor_data = state.tensor
    for size in size_list:
        for subset in subsets_of_size(structure, size):
            evaluator = _make_evaluator(
                structure.dims, subset.parties, scheme.constant(size)
            )
            components[subset] = evaluator(tensor_data)
    return TensorReport(structure=structure, scheme=scheme, components=components)


def separability_scan(
    state: StateVector,
    scheme: NormalizationScheme = DEFAULT_SCHEME,
    threshold: float = ZERO_COMPONENT_THRESHOLD,
) -> list[bool]:
    """Per-party verdict: True when every component involving the party vanishes.

    This is a one-basis certificate: a party that factors out of the state
    has all its components identically zero in any basis, but a False here
    only speaks for the basis at hand.  All subset sizes are scanned.
    """
    report = full_tensor(state, scheme)
    verdicts = []
    for party in range(state.structure.num_parties):
        verdicts.append(
            all(
                value < threshold
                for subset, value in report.components.items()
                if party in subset.parties
            )
        )
    return verdicts


def tensor_norm(report: TensorReport) -> float:
    """Square root of the unweighted sum of squared components.

    A crude single-number aggregate: it mixes subset sizes with equal
    weight, so a highly entangled state and one with shallow entanglement
    spread over many subsets can score alike.  The full report is the
    informative object.
    """
    return math.sqrt(sum(v * v for v in report.components.values()))


def report_to_dict(report: TensorReport) -> dict:
    """JSON-ready form of a report; subsets are 1-based in the output."""
    sizes = sorted({s.size for s in report.components})
    return {
        "dims": list(report.structure.dims),
        "norm_constants": {str(d): report.scheme.constant(d) for d in sizes},
        "components": [
            {"subset": [p + 1 for p in subset.parties], "value": value}
            for subset, value in sorted(
                report.components.items(), key=lambda kv: (kv[0].size, kv[0].parties)
            )
        ],
        "tensor_norm": tensor_norm(report),
        "basis_note": report.basis_note,
    }
