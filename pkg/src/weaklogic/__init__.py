"""Weak values, pre/post-selection and the quantum logic of projectors."""
from .core import (
    Kind,
    Operator,
    SpectralDecomposition,
    StateVector,
    adjoint,
    basis_state,
    commutator,
    compose,
    eig_hermitian,
    identity,
    inner,
    make_state,
    op_norm,
    outer,
    projector,
    tensor,
)
from .logic import (
    check_orthomodular,
    commutes,
    effective_commutativity,
    effective_observable_product,
    join,
    meet,
    orthocomplement,
)
from .pointer import PointerGrid, PointerStats, extract_weak_value, simulate
from .scenarios import (
    Scenario,
    hardy_identity_coefficients,
    hardy_ratio_table,
    hardy_scenario,
    load_scenario,
    report,
    three_box_scenario,
)
from .weak import (
    Classification,
    Condition,
    WeakValueReport,
    classify,
    decompose_expectation,
    real_imag_split,
    sandwich,
    squared_weak_value_check,
    weak_value,
)

__version__ = "0.1.0"

__all__ = [
    "Kind",
    "Operator",
    "SpectralDecomposition",
    "StateVector",
    "adjoint",
    "basis_state",
    "commutator",
    "compose",
    "eig_hermitian",
    "identity",
    "inner",
    "make_state",
    "op_norm",
    "outer",
    "projector",
    "tensor",
    "check_orthomodular",
    "commutes",
    "effective_commutativity",
    "effective_observable_product",
    "join",
    "meet",
    "orthocomplement",
    "PointerGrid",
    "PointerStats",
    "extract_weak_value",
    "simulate",
    "Scenario",
    "hardy_identity_coefficients",
    "hardy_ratio_table",
    "hardy_scenario",
    "load_scenario",
    "report",
    "three_box_scenario",
    "Classification",
    "Condition",
    "WeakValueReport",
    "classify",
    "decompose_expectation",
    "real_imag_split",
    "sandwich",
    "squared_weak_value_check",
    "weak_value",
]
