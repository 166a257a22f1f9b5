from fractions import Fraction

import numpy as np
import pytest

from mobi.axioms import check_imm, check_imm_star, check_mobi, check_ring
from mobi.core import Carrier, IMMStructure, MobiStructure, NoInverseError, OpImpl
from mobi.exemplars import (
    imm1, imm2, imm3, make_example, mod_odd, rational_field, three_element_imm, three_element, zmod_ring,
)
from mobi.sampling import SampleSpec, sample_tuples
from mobi.search import SearchCapExceeded, find_isomorphism
from mobi.transforms import (
    InvalidWitnessError, UnsolvableTripleError, derive_circ, derive_imm_from_mobi, extensionally_equal,
    half_inverse_by_bijection, imm_star_to_mobi, imm_to_mobi_via_half_inverse, imm_to_ring,
    mobi_dagger_search, mobi_to_ring, monoid_inverse, ring_to_imm, ring_to_mobi, roundtrip_check,
    solve_p_equation,
)
from oracles import modinv

SPEC = SampleSpec(count=300)


def trivial_mobi():
    return MobiStructure(Carrier.finite(["0"]), OpImpl(3, np.zeros((1, 1, 1))), 0, 0, 0, "trivial")


def pos(s, label):
    return s.carrier.index(label)


# ------------------------------------------------------------ mobi -> IMM


def test_interval_derived_operations():
    b = derive_imm_from_mobi(make_example("interval"))
    for a, c in sample_tuples(b.carrier, SPEC, 2):
        assert b.apply("inv", a) == 1 - a
        assert b.apply("dot", a, c) == a * c
        assert b.apply("oplus", a, c) == (a + c) / 2
    assert check_imm(b, SPEC).passed


def test_example6_derived_imm_passes_exhaustively():
    b = derive_imm_from_mobi(three_element())
    assert check_imm(b).passed and check_imm_star(b).passed
    assert b.one_bar == 0 and b.half == 1


def test_planar_dot_matches_the_displayed_product():
    K = Fraction(-3, 5)
    b = derive_imm_from_mobi(make_example("planar-K", K=K, mode="plane"))
    for (x, y), (u, v) in sample_tuples(b.carrier, SPEC, 2):
        assert b.apply("dot", (x, y), (u, v)) == (x * u + K * y * v, x * v + y * u)


@pytest.mark.parametrize("build", [imm1, imm2, three_element_imm, lambda: derive_imm_from_mobi(three_element())])
def test_circ_identity_holds_on_finite_imms(build):
    assert derive_circ(build())[1].passed


def test_circ_identity_is_not_forced_by_the_imm_axioms():
    # in IMM 3: (α∘α)⊕(α·α) = 1⊕β = ½ but α⊕α = α
    result = derive_circ(imm3())[1]
    assert result.status == "fail" and result.shown == ("α", "α")


def test_circ_on_interval_and_identity_law():
    b = derive_imm_from_mobi(make_example("interval"))
    circ, check = derive_circ(b, SPEC)
    assert check.passed
    for a, c in sample_tuples(b.carrier, SPEC, 2):
        assert circ(a, c) == a + c - a * c


@pytest.mark.parametrize("build", [imm1, imm2, imm3, three_element_imm, lambda: derive_imm_from_mobi(three_element())])
def test_circ_unit_is_one_bar_and_one_absorbs(build):
    b = build()
    circ, check = derive_circ(b)
    # a∘b is the complement of b̄·ā, so a∘1̄ = a and a∘1 = complement of 1̄ = 1
    assert all(circ(a, b.one_bar) == a for a in range(b.size))
    assert all(circ(a, b.one) == b.one for a in range(b.size))


# -------------------------------------------------------------- inverses


def test_half_inverse_in_imm1_is_beta():
    b = imm1()
    w = monoid_inverse(b, b.half)
    assert b.show(w.inverse) == "β"
    assert w.certificate == (b.one, b.one)
    assert w.central is True


def test_three_element_imm_half_has_no_inverse():
    b = three_element_imm()
    assert monoid_inverse(b, b.half) is None


@pytest.mark.parametrize("build", [imm1, imm2, imm3, three_element_imm])
def test_one_is_its_own_inverse(build):
    b = build()
    assert monoid_inverse(b, b.one).inverse == b.one


@pytest.mark.parametrize("build", [imm1, lambda: derive_imm_from_mobi(mod_odd(3))])
def test_half_inverse_is_central_and_sums_to_one(build):
    b = build()
    two = monoid_inverse(b, b.half).inverse
    dot, oplus = b.table("dot"), b.table("oplus")
    assert np.array_equal(dot[:, two], dot[two, :])
    assert oplus[b.one_bar, two] == b.one


# ------------------------------------------------------------ IMM <-> ring


def test_imm1_ring_is_z5_under_the_stated_map():
    r = imm_to_ring(imm1())
    assert check_ring(r).passed
    assert r.show(r.apply("add", r.one, r.one)) == "β"
    mapping = {"0": "0", "1": "1", "β": "2", "½": "3", "α": "4"}
    assert find_isomorphism(r, zmod_ring(5), candidate=mapping) is not None


def test_three_element_imm_has_no_ring():
    with pytest.raises(NoInverseError, match="no inverse for 1̄⊕1"):
        imm_to_ring(three_element_imm())


def test_trivial_imm_gives_trivial_ring():
    r = imm_to_ring(derive_imm_from_mobi(trivial_mobi()))
    assert r.size == 1 and check_ring(r).passed


def test_z5_imm_oplus_is_three_times_sum():
    b = ring_to_imm(zmod_ring(5))
    assert check_imm(b).passed
    expected = (3 * (np.arange(5)[:, None] + np.arange(5)[None, :])) % 5
    assert np.array_equal(b.table("oplus"), expected)
    assert b.half == modinv(2, 5)


def test_z6_has_no_imm():
    with pytest.raises(NoInverseError):
        ring_to_imm(zmod_ring(6))


def test_z3_imm_matches_example6_under_the_stated_correspondence():
    b = ring_to_imm(zmod_ring(3))
    assert np.array_equal(b.table("oplus"), (2 * (np.arange(3)[:, None] + np.arange(3)[None, :])) % 3)
    derived = derive_imm_from_mobi(three_element())
    assert find_isomorphism(derived, b, candidate={"0": "0", "½": "2", "1": "1"}) is not None


def test_rational_field_imm_and_back():
    q = rational_field(SPEC)
    b = ring_to_imm(q)
    assert check_imm(b).passed
    back = imm_to_ring(b)
    assert extensionally_equal(back, q, SPEC)[0]


# ------------------------------------------------------------- IMM -> mobi


def test_imm3_half_dot_equation_has_no_solution_at_beta_beta_alpha():
    b = imm3()
    sols = solve_p_equation(b, "half-dot-form")
    t = tuple(pos(b, x) for x in ("β", "β", "α"))
    assert sols.at(*t) == ()
    assert t in sols.unsolvable()


def test_imm1_equation_solutions_are_unique():
    assert solve_p_equation(imm1(), "oplus-form").all_unique
    assert solve_p_equation(imm1(), "half-dot-form").all_unique


def test_imm2_half_dot_equation_is_solvable_everywhere():
    sols = solve_p_equation(imm2(), "half-dot-form")
    assert sols.all_solvable and not sols.all_unique


def test_every_listed_solution_satisfies_its_equation():
    for build in (imm1, imm2, imm3):
        b = build()
        inv, oplus, dot = b.table("inv"), b.table("oplus"), b.table("dot")
        for form in ("oplus-form", "half-dot-form"):
            for (x, y, z), xs in solve_p_equation(b, form).triples():
                rhs = oplus[dot[inv[y], x], dot[y, z]]
                for s in xs:
                    lhs = oplus[b.one_bar, s] if form == "oplus-form" else dot[b.half, s]
                    assert lhs == rhs


def test_example6_roundtrips_through_its_imm():
    m = three_element()
    assert imm_star_to_mobi(derive_imm_from_mobi(m)).same_as(m)


def test_imm3_is_not_induced_by_a_mobi():
    with pytest.raises(UnsolvableTripleError) as info:
        imm_star_to_mobi(imm3())
    assert info.value.shown == ("α", "α", "β")


def test_imm1_mobi_passes_and_both_paths_agree():
    b = imm1()
    m = imm_star_to_mobi(b)
    assert check_mobi(m).passed
    assert m.same_as(imm_to_mobi_via_half_inverse(b))


def test_dagger_search_on_five_element_tables():
    d = mobi_dagger_search(imm2())
    assert d is not None
    assert check_mobi(d, "mobi-dagger").passed
    assert check_mobi(d)["A6"].status == "fail"
    assert derive_imm_from_mobi(d).same_as(imm2())
    assert mobi_dagger_search(imm1()).same_as(imm_star_to_mobi(imm1()))
    assert mobi_dagger_search(imm3()) is None


def test_dagger_search_cap_is_distinct_from_none():
    with pytest.raises(SearchCapExceeded):
        mobi_dagger_search(imm2(), match_imm=False, node_cap=1)


def test_half_inverse_path_on_trivial_and_z7():
    assert imm_to_mobi_via_half_inverse(derive_imm_from_mobi(trivial_mobi())).size == 1
    m = imm_to_mobi_via_half_inverse(ring_to_imm(zmod_ring(7)))
    a, b, c = np.indices((7, 7, 7))
    assert np.array_equal(m.table("p"), (a - b * a + b * c) % 7)


def test_half_inverse_path_rejects_three_element_imm():
    with pytest.raises(NoInverseError):
        imm_to_mobi_via_half_inverse(three_element_imm())


# ------------------------------------------------------------ mobi <-> ring


def test_example6_ring_with_two_half_is_z3():
    m = three_element()
    r = mobi_to_ring(m, m.half)
    assert check_ring(r).passed
    assert find_isomorphism(r, zmod_ring(3)) is not None


def test_z7_mobi_with_two_recovers_addition():
    m = mod_odd(3)
    r = mobi_to_ring(m, 2)
    assert np.array_equal(r.table("add"), zmod_ring(7).table("add"))
    assert np.array_equal(r.table("mul"), zmod_ring(7).table("mul"))


def test_interval_has_no_inverse_of_half():
    m = make_example("interval")
    with pytest.raises(InvalidWitnessError):
        mobi_to_ring(m, Fraction(2))
    with pytest.raises(InvalidWitnessError):
        mobi_to_ring(m, Fraction(1, 2))


def test_mobi_to_ring_rejects_a_wrong_witness():
    with pytest.raises(InvalidWitnessError):
        mobi_to_ring(mod_odd(2), 4)


def test_field_line_ring_with_two():
    m = make_example("field-line")
    r = mobi_to_ring(m, Fraction(2))
    assert check_ring(r, SPEC).passed
    assert extensionally_equal(r, rational_field(SPEC), SPEC)[0]


@pytest.mark.parametrize("m, expected", [(three_element(), 1), (mod_odd(2), 2), (trivial_mobi(), 0)])
def test_half_inverse_by_bijection(m, expected):
    assert half_inverse_by_bijection(m) == expected


def test_z5_mobi_satisfies_a1_with_half_three():
    m = ring_to_mobi(zmod_ring(5))
    assert m.half == 3 and m.apply("p", 1, 3, 0) == 3
    assert check_mobi(m).passed


@pytest.mark.parametrize("n", [2, 4, 6])
def test_even_rings_have_no_mobi(n):
    with pytest.raises(NoInverseError):
        ring_to_mobi(zmod_ring(n))


def test_rational_field_mobi_is_the_affine_line():
    m = ring_to_mobi(rational_field(SPEC))
    assert check_mobi(m, sample=SPEC).passed
    # composite ring formula and the affine formula agree pointwise
    assert extensionally_equal(m, make_example("field-line"), SPEC)[0]
    p = m.checked("p")
    for a, b, c in sample_tuples(m.carrier, SPEC, 3):
        assert p(a, b, c) == (1 - b) * a + b * c


@pytest.mark.parametrize("s", [zmod_ring(5), zmod_ring(7), zmod_ring(9), three_element(), imm1()],
                         ids=["Z5", "Z7", "Z9", "example6", "imm1"])
def test_roundtrips_reproduce_tables(s):
    report = roundtrip_check(s)
    assert report.passed, report.summary()
