from fractions import Fraction

import numpy as np
import pytest

from mobi.axioms import check_imm, check_mobi
from mobi.core import INF, MobiError, Structure
from mobi.exemplars import (
    EXAMPLE_IDS, FINITE_EXAMPLES, ClosureCapExceeded, ClosureTask, ExampleStub, UnsupportedExample,
    closure_generate, imm3, make_example, matrix_mul, matrix_p, mod_odd, named_ring,
    planar_matrix_embedding, rational_field, zmod_ring,
)
from mobi.sampling import SampleSpec, sample_tuples
from mobi.search import find_isomorphism
from mobi.transforms import extensionally_equal, ring_to_mobi
from oracles import affine_p, example2_p

SPEC = SampleSpec(count=300)


@pytest.mark.parametrize("id", [i for i in EXAMPLE_IDS if i not in ("semiring-note", "finite-general")])
def test_every_example_builds_a_structure(id):
    assert isinstance(make_example(id), Structure)


def test_semiring_note_is_unsupported():
    with pytest.raises(UnsupportedExample):
        make_example("semiring-note")


def test_finite_general_is_an_operation_stub():
    stub = make_example("finite-general")
    assert isinstance(stub, ExampleStub) and stub.operation == "half_inverse_by_bijection"


def test_unknown_example_and_bad_params():
    with pytest.raises(MobiError, match="unknown example"):
        make_example("nope")
    with pytest.raises(MobiError, match="bad parameters"):
        make_example("interval", alpha=2)


def test_finite_examples_are_finite():
    for id in FINITE_EXAMPLES:
        assert make_example(id).is_finite


def test_mod_odd_tables():
    m = mod_odd(2)
    assert (m.zero, m.half, m.one) == (0, 3, 1)
    a, b, c = np.indices((5, 5, 5))
    assert np.array_equal(m.table("p"), (a + b * (c - a)) % 5)
    for n in (1, 3, 4):
        assert check_mobi(mod_odd(n)).passed


def test_imm3_complement_is_an_involution():
    b = imm3()
    inv = b.table("inv")
    assert np.array_equal(inv[inv], np.arange(b.size))
    assert check_imm(b).passed


def test_interval_third_matches_its_formula():
    m = make_example("interval-third")
    for x, y, z in sample_tuples(m.carrier, SPEC, 3):
        assert m.apply("p", x, y, z) == example2_p(x, y, z)


def test_interval_alpha_family():
    base = make_example("interval")
    assert extensionally_equal(make_example("interval-alpha", alpha=2), base, SPEC)[0]
    third = make_example("interval-third")
    assert extensionally_equal(make_example("interval-alpha", alpha="3"), third, SPEC)[0]
    assert check_mobi(make_example("interval-alpha", alpha="7/2"), sample=SPEC).passed


def test_reciprocal_interval_uses_the_point_at_infinity():
    m = make_example("reciprocal-interval")
    assert m.zero is INF and m.half == 2 and m.one == 1
    assert check_mobi(m, sample=SPEC).passed


def test_dyadic_and_field_line_share_the_affine_formula():
    for id in ("dyadic", "field-line"):
        m = make_example(id)
        for x, y, z in sample_tuples(m.carrier, SPEC, 3):
            assert m.apply("p", x, y, z) == affine_p(x, y, z)


@pytest.mark.parametrize("ambient, size", [("Z5", 5), ("Z3", 3), ("Z9", 9), ("Z15", 15)])
def test_closure_of_the_constants_in_zn_is_everything(ambient, size):
    m = closure_generate(ClosureTask(ambient))
    assert m.size == size
    assert check_mobi(m).passed


def test_closure_of_explicit_generators():
    m = make_example("subset-closure", ambient="Z5", generators=("0", "3", "1"))
    assert find_isomorphism(m, ring_to_mobi(zmod_ring(5))) is not None


def test_closure_in_upper_triangular_ring_passes():
    m = closure_generate(ClosureTask(named_ring("T2Z3")))
    assert check_mobi(m).passed


def test_closure_in_q_is_the_dyadics_and_hits_the_cap():
    with pytest.raises(ClosureCapExceeded) as info:
        closure_generate(ClosureTask(rational_field(), ("0", "1/2", "1"), cap=60))
    cert = info.value.certificate
    assert cert["all_denominators_powers_of_two"] is True
    assert cert["max_denominator"] > 2
    assert all(Fraction(x).denominator & (Fraction(x).denominator - 1) == 0 for x in info.value.partial)


def test_closure_needs_the_constants():
    with pytest.raises(MobiError, match="generators must contain"):
        closure_generate(ClosureTask("Z5", ("0", "1")))


# ------------------------------------------------------------- planar


def test_planar_embedding_at_negative_k_is_complex_multiplication():
    i = planar_matrix_embedding(-1, (0, 1))
    assert matrix_mul(i, i) == planar_matrix_embedding(-1, (-1, 0))


def test_planar_embedding_sends_one_to_the_identity():
    assert planar_matrix_embedding(1, (1, 0)) == ((1, 0), (0, 1))


def test_planar_embedding_with_split_constants():
    assert planar_matrix_embedding(6, (1, 1), k1=2, k2=3) == ((1, 2), (3, 1))
    with pytest.raises(MobiError):
        planar_matrix_embedding(6, (1, 1), k1=2, k2=2)


@pytest.mark.parametrize("K", [Fraction(1), Fraction(-2), Fraction(3, 4)])
def test_planar_p_is_the_matrix_p(K):
    m = make_example("planar-K", K=K, mode="plane")
    for a, b, c in sample_tuples(m.carrier, SPEC, 3):
        lhs = planar_matrix_embedding(K, m.apply("p", a, b, c))
        rhs = matrix_p(*(planar_matrix_embedding(K, v) for v in (a, b, c)))
        assert lhs == rhs


def test_planar_region_is_closed_and_passes():
    m = make_example("planar")
    assert check_mobi(m, sample=SPEC).passed
    with pytest.raises(MobiError):
        make_example("planar-K", K=-1)


def test_named_rings():
    assert zmod_ring(7).size == 7
    assert named_ring("M2Z3").size == 81
    with pytest.raises(MobiError):
        named_ring("R")
