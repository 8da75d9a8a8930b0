"""Entanglement tensor components of pure multipartite quantum states.

The library evaluates, for any subset of parties of a pure qudit state, a
non-negative component built from permutation differences of amplitude
products.  Components vanish exactly on parties that factor out, reduce to
the two-qubit concurrence for a pair of qubits, and for larger subsets are
basis-dependent quantities whose supremum over local unitaries is found
numerically.  Independent concurrence oracles (spin flip, reduced-state
purity, mixed-state eigenvalue formula) cross-check the engine.
"""

from .ketparse import (
    KetFormatError,
    KetSyntaxError,
    load_ket_json,
    parse_amplitudes,
    parse_ket,
    save_ket_json,
    state_from_dict,
    state_to_dict,
)
from .localops import (
    DensityMatrix,
    LocalUnitary,
    PartyGrouping,
    apply_local,
    hadamard,
    identity_gate,
    measure_party,
    phase_gate,
    reduced_density,
    regroup,
    trace_to_pair,
    ungroup,
)
from .oracles import (
    concurrence_mixed_2qubit,
    concurrence_pure_2qubit,
    concurrence_purity,
    dur_average,
    spin_flip,
)
from .states import (
    BasisProjection,
    NormalizationError,
    PartyStructure,
    StateVector,
    basis_state,
    epr_state,
    flat_index,
    ghz_state,
    product_state,
    projection_probability,
    random_product_state,
    random_state,
    tuple_of,
    w_state,
)
from .supremum import (
    OptimizerConfig,
    SupremumResult,
    haar_unitary,
    maximize_component,
    maximize_simultaneous,
)
from .tensor import (
    DEFAULT_SCHEME,
    NormalizationScheme,
    SubsetSelector,
    TensorReport,
    component,
    component_evaluator,
    component_with_nesting_order,
    full_tensor,
    permutation_difference,
    report_to_dict,
    separability_scan,
    subsets_of_size,
    tensor_norm,
)

__version__ = "0.1.0"

__all__ = [
    "BasisProjection",
    "DEFAULT_SCHEME",
    "DensityMatrix",
    "KetFormatError",
    "KetSyntaxError",
    "LocalUnitary",
    "NormalizationError",
    "NormalizationScheme",
    "OptimizerConfig",
    "PartyGrouping",
    "PartyStructure",
    "StateVector",
    "SubsetSelector",
    "SupremumResult",
    "TensorReport",
    "apply_local",
    "basis_state",
    "component",
    "component_evaluator",
    "component_with_nesting_order",
    "concurrence_mixed_2qubit",
    "concurrence_pure_2qubit",
    "concurrence_purity",
    "dur_average",
    "epr_state",
    "flat_index",
    "full_tensor",
    "ghz_state",
    "haar_unitary",
    "hadamard",
    "identity_gate",
    "load_ket_json",
    "maximize_component",
    "maximize_simultaneous",
    "measure_party",
    "parse_amplitudes",
    "parse_ket",
    "permutation_difference",
    "phase_gate",
    "product_state",
    "projection_probability",
    "random_product_state",
    "random_state",
    "reduced_density",
    "regroup",
    "report_to_dict",
    "save_ket_json",
    "separability_scan",
    "spin_flip",
    "state_from_dict",
    "state_to_dict",
    "subsets_of_size",
    "tensor_norm",
    "trace_to_pair",
    "tuple_of",
    "ungroup",
    "w_state",
]
