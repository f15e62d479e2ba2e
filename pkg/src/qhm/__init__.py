"""Quadratic harmonic morphisms between Euclidean spaces."""

from .core import (
    QuadraticMap,
    SymMatrix,
    evaluate,
    from_monomials,
    gram_gradients,
    jacobian,
    tolerance,
)
from .verify import (
    HMReport,
    NotAHarmonicMorphism,
    check_harmonic,
    check_harmonic_morphism,
    check_hwc,
    conformality_oracle,
    dilation,
)
from .spectral import (
    NormalForm,
    SpectrumReport,
    is_umbilical,
    normal_form,
    q_rank,
    reconstruct,
    spectrum_report,
    split_singular,
)
from .clifford import (
    CliffordSystem,
    check_clifford,
    clifford_from_umbilical,
    delta,
    direct_sum,
    equivalence_invariants,
    equivalence_witness_check,
    irreducible,
    qhm_from_clifford,
)
from .constructions import complete_lift, hopf_construction, orth_mult
from .classify43 import classify, hopf_standard, phi_t, rotation_G, sphere_restriction_check

__version__ = "0.1.0"
