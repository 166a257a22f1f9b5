"""Mobi algebras, involutive medial monoids and rings with one half."""
from .axioms import (
    AxiomResult, Report, check_derived_properties, check_full_medial, check_imm, check_imm_star,
    check_mobi, check_ring, check_structure, witness_violates,
)
from .core import (
    INF, CapExceeded, Carrier, ClosureError, IMMStructure, MobiError, MobiStructure, NoInverseError,
    OpImpl, ParseError, PreconditionError, RingStructure, Structure, evaluate, finite_from_labels,
)
from .exemplars import ClosureTask, closure_generate, make_example, planar_matrix_embedding
from .interchange import dump_structure, load_structure, parse_structure, serialize_structure
from .sampling import SampleSpec
from .search import canonical_form, enumerate_mobi, enumerate_rings_with_half, find_isomorphism
from .transforms import (
    derive_circ, derive_imm_from_mobi, half_inverse_by_bijection, imm_star_to_mobi, imm_to_mobi_via_half_inverse,
    imm_to_ring, mobi_dagger_search, mobi_to_ring, monoid_inverse, ring_to_imm, ring_to_mobi, roundtrip_check,
    solve_p_equation,
)
