"""Separability analysis of rank-n generalized Baumslag-Solitar groups.

Library entry points: build a LabeledGraphOfGroups (or parse one with
cli.parse_input_document), then pipeline.analyze decides residual
finiteness, subgroup separability, and cyclic subgroup separability with
machine-checkable witnesses.
"""

from .css import (
    AscendingHNN,
    CssVerdict,
    EigenWitness,
    InvariantChain,
    NonSeparableWitness,
    css_decide,
    invariant_chain,
    n2_shortcut,
    nonseparable_witness,
)
from .exact import (
    IntMatrix,
    IntPolynomial,
    Lattice,
    OrderCapExceeded,
    QuotientStructure,
    RatMatrix,
    hnf,
    image,
    kernel,
    mod_m_order,
    preimage,
    quotient_structure,
    snf,
)
from .gog import (
    Classification,
    Edge,
    GraphValidationError,
    LabeledGraphOfGroups,
    classify,
    cycle_ratios,
    reduce,
    validate,
)
from .modular import (
    Caps,
    ConjugacyResult,
    ModularImage,
    Verdict,
    conjugate_into_GLnZ,
    modular_generators,
    virtually_Zn_by_free,
)
from .pipeline import Report, analyze, report_text
from .poly import (
    DegeneracyResult,
    Factorization,
    UnsupportedDegreeError,
    degeneracy_test,
    factor_over_Q,
    integer_roots,
)
from .quotient import (
    FiniteQuotientSpec,
    NormalFormElement,
    NotASeparationInstance,
    coprime_quotient,
    element_order,
    k_subgroup,
    make_quotient,
    normal_form,
    separate_cyclic,
    separate_in_A,
    twisted_power_sum,
)

__all__ = [
    "AscendingHNN",
    "Caps",
    "Classification",
    "ConjugacyResult",
    "CssVerdict",
    "DegeneracyResult",
    "Edge",
    "EigenWitness",
    "Factorization",
    "FiniteQuotientSpec",
    "GraphValidationError",
    "IntMatrix",
    "IntPolynomial",
    "InvariantChain",
    "LabeledGraphOfGroups",
    "Lattice",
    "ModularImage",
    "NonSeparableWitness",
    "NormalFormElement",
    "NotASeparationInstance",
    "OrderCapExceeded",
    "QuotientStructure",
    "RatMatrix",
    "Report",
    "UnsupportedDegreeError",
    "Verdict",
    "analyze",
    "classify",
    "conjugate_into_GLnZ",
    "coprime_quotient",
    "css_decide",
    "cycle_ratios",
    "degeneracy_test",
    "element_order",
    "factor_over_Q",
    "hnf",
    "image",
    "integer_roots",
    "invariant_chain",
    "k_subgroup",
    "kernel",
    "make_quotient",
    "mod_m_order",
    "modular_generators",
    "n2_shortcut",
    "nonseparable_witness",
    "normal_form",
    "preimage",
    "quotient_structure",
    "reduce",
    "report_text",
    "separate_cyclic",
    "separate_in_A",
    "snf",
    "twisted_power_sum",
    "validate",
    "virtually_Zn_by_free",
]
