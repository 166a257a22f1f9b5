"""Constructive passages between mobi algebras, IMM algebras and unitary rings.

Finite inputs produce table-backed outputs; rational-domain inputs produce
composite formulas over the same carrier.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .axioms import (
    AxiomResult, Report, check_imm, check_imm_star, check_law, law,
)
from .core import (
    ClosureError, IMMStructure, MobiError, MobiStructure, NoInverseError, OpImpl,
    PreconditionError, RingStructure, Structure, tabulate,
)
from .sampling import SampleSpec


class UnsolvableTripleError(PreconditionError):
    def __init__(self, triple, shown):
        self.triple = triple
        self.shown = shown
        super().__init__(f"equation has no solution at (a, b, c) = {shown}")


class InvalidWitnessError(PreconditionError):
    pass


@dataclass(frozen=True)
class InverseWitness:
    element: object
    inverse: object
    certificate: tuple  # (element·inverse, inverse·element), both equal to 1
    central: bool | None = None  # inverse central, when element is central

    def shown(self, s: Structure) -> dict:
        return {"element": s.show(self.element), "inverse": s.show(self.inverse),
                "certificate": [s.show(x) for x in self.certificate], "central": self.central}


@dataclass(frozen=True)
class SolutionSet:
    form: str  # "oplus-form" | "half-dot-form"
    n: int
    solutions: tuple  # row-major over (a, b, c): tuple of solution positions

    def at(self, a, b, c) -> tuple:
        return self.solutions[(a * self.n + b) * self.n + c]

    def triples(self):
        n = self.n
        for i, sols in enumerate(self.solutions):
            yield (i // (n * n), (i // n) % n, i % n), sols

    def unsolvable(self) -> list:
        return [t for t, sols in self.triples() if not sols]

    @property
    def all_solvable(self) -> bool:
        return all(self.solutions)

    @property
    def all_unique(self) -> bool:
        return all(len(s) == 1 for s in self.solutions)


def _imm(carrier, inv, oplus, dot, one, name="", sampling=None, kind="imm"):
    return IMMStructure(carrier, inv, oplus, dot, one, name, sampling, kind)


# ----------------------------------------------------------- mobi -> IMM


def derive_imm_from_mobi(m: Structure, name: str | None = None) -> IMMStructure:
    """ā = p(1,a,0), a·b = p(0,a,b), a⊕b = p(a,½,b); the unit is the mobi's 1."""
    if m.kind != "mobi":
        raise MobiError("derive_imm_from_mobi needs a mobi structure")
    name = name if name is not None else (f"imm({m.name})" if m.name else "")
    if m.is_finite:
        t = m.table("p")
        inv = OpImpl(1, t[m.one, :, m.zero])
        dot = OpImpl(2, t[m.zero, :, :])
        oplus = OpImpl(2, t[:, m.half, :])
        return _imm(m.carrier, inv, oplus, dot, m.one, name)
    p = m.ops["p"]
    consts = {"zero": m.zero, "half": m.half, "one": m.one}
    inv = OpImpl(1, formula="mobi-inv", params={"p": p, "zero": consts["zero"], "one": consts["one"]})
    dot = OpImpl(2, formula="mobi-dot", params={"p": p, "zero": consts["zero"]})
    oplus = OpImpl(2, formula="mobi-oplus", params={"p": p, "half": consts["half"]})
    return _imm(m.carrier, inv, oplus, dot, m.one, name, m.sampling)


CIRC_IDENTITY = law("circ-identity", "a b",
                    lambda o, a, b: (o.oplus(o.circ(a, b), o.dot(b, a)), o.oplus(b, a)))


def derive_circ(b: Structure, sample: SampleSpec | None = None) -> tuple[OpImpl, AxiomResult]:
    """The dual monoid operation a∘b, computed as the complement of b̄·ā.

    Returns the operation together with the check of (a∘b)⊕(b·a) = b⊕a.
    """
    if b.kind not in ("imm", "imm_star"):
        raise MobiError("derive_circ needs an IMM structure")
    if b.is_finite:
        inv, dot = b.table("inv"), b.table("dot")
        circ = OpImpl(2, tabulate(lambda x, y: inv[dot[inv[y], inv[x]]], b.size, 2))
    else:
        circ = OpImpl(2, formula="imm-circ", params={"inv": b.ops["inv"], "dot": b.ops["dot"]})
    return circ, check_law(b, CIRC_IDENTITY, sample)


# ------------------------------------------------------- monoid inverses


def _unit_inverse(s: Structure, mul_op: str, one, e, candidate=None):
    mul = s.checked(mul_op)
    if not s.is_finite:
        if candidate is None:
            return None
        if not s.carrier.contains(candidate):
            return None
        try:
            left, right = mul(e, candidate), mul(candidate, e)
        except ClosureError:
            return None
        if left == one and right == one:
            return InverseWitness(e, candidate, (left, right), None)
        return None
    t = s.table(mul_op)
    found = [int(x) for x in range(s.size) if t[e, x] == one and t[x, e] == one]
    if len(found) > 1:
        raise MobiError(f"{s.show(e)} has several two-sided inverses {found}; the operation is not a monoid")
    if not found:
        return None
    x = found[0]
    central = None
    if np.array_equal(t[e, :], t[:, e]):
        central = bool(np.array_equal(t[x, :], t[:, x]))
        if not central:
            raise MobiError("inverse of a central element is not central; the operation is not a monoid")
    return InverseWitness(e, x, (int(t[e, x]), int(t[x, e])), central)


def monoid_inverse(b: Structure, e, candidate=None) -> InverseWitness | None:
    """Two-sided inverse of ``e`` in (A, ·, 1); search on finite carriers, certify a candidate otherwise."""
    if b.kind not in ("imm", "imm_star"):
        raise MobiError("monoid_inverse needs an IMM structure")
    return _unit_inverse(b, "dot", b.one, e, candidate)


def _default_candidate(s: Structure, value):
    # 1-D rational carriers: the only possible inverse is the field reciprocal
    if s.is_finite or not isinstance(value, Fraction) or value == 0:
        return None
    return 1 / value


def _half_inverse(b: Structure, candidate=None) -> InverseWitness:
    half = b.half
    if candidate is None:
        candidate = _default_candidate(b, half)
    w = monoid_inverse(b, half, candidate)
    if w is None:
        raise NoInverseError(f"no inverse for 1̄⊕1 = {b.show(half)}")
    return w


# ------------------------------------------------------------ IMM <-> ring


def imm_to_ring(b: Structure, candidate=None, name: str | None = None) -> RingStructure:
    """a+b = 2·(a⊕b), −a = 2̄·a, zero 1̄, where 2 is the inverse of 1̄⊕1."""
    if b.kind not in ("imm", "imm_star"):
        raise MobiError("imm_to_ring needs an IMM structure")
    two = _half_inverse(b, candidate).inverse
    name = name if name is not None else (f"ring({b.name})" if b.name else "")
    if b.is_finite:
        inv, oplus, dot = b.table("inv"), b.table("oplus"), b.table("dot")
        add = OpImpl(2, dot[two][oplus])
        neg = OpImpl(1, dot[inv[two]])
        return RingStructure(b.carrier, add, OpImpl(2, dot), neg, b.one_bar, b.one, name)
    add = OpImpl(2, formula="imm-ring-add", params={"dot": b.ops["dot"], "oplus": b.ops["oplus"], "two": two})
    neg = OpImpl(1, formula="imm-ring-neg", params={"dot": b.ops["dot"], "inv": b.ops["inv"], "two": two})
    return RingStructure(b.carrier, add, b.ops["dot"], neg, b.one_bar, b.one, name, b.sampling)


def ring_unit_inverse(r: Structure, e, candidate=None) -> InverseWitness | None:
    if r.kind != "ring":
        raise MobiError("ring_unit_inverse needs a ring")
    return _unit_inverse(r, "mul", r.one, e, candidate)


def ring_half(r: Structure, candidate=None) -> InverseWitness:
    """The inverse of 1+1, or NoInverseError."""
    two = r.apply("add", r.one, r.one)
    if candidate is None:
        candidate = _default_candidate(r, two)
    w = ring_unit_inverse(r, two, candidate)
    if w is None:
        raise NoInverseError(f"1+1 = {r.show(two)} has no inverse")
    return w


def ring_to_imm(r: Structure, candidate=None, name: str | None = None) -> IMMStructure:
    """ā = 1 − a and a⊕b = (1+1)⁻¹·(a+b)."""
    half = ring_half(r, candidate).inverse
    name = name if name is not None else (f"imm({r.name})" if r.name else "")
    if r.is_finite:
        add, mul, neg = r.table("add"), r.table("mul"), r.table("neg")
        inv = OpImpl(1, add[r.one][neg])
        oplus = OpImpl(2, mul[half][add])
        return _imm(r.carrier, inv, oplus, OpImpl(2, mul), r.one, name)
    inv = OpImpl(1, formula="ring-imm-inv", params={"add": r.ops["add"], "neg": r.ops["neg"], "one": r.one})
    oplus = OpImpl(2, formula="ring-imm-oplus", params={"add": r.ops["add"], "mul": r.ops["mul"], "half": half})
    return _imm(r.carrier, inv, oplus, r.ops["mul"], r.one, name, r.sampling)


# ------------------------------------------------------------- IMM -> mobi


def solve_p_equation(b: Structure, form: str = "oplus-form") -> SolutionSet:
    """All x with 1̄⊕x = (b̄·a)⊕(b·c) (oplus-form) or (1̄⊕1)·x = (b̄·a)⊕(b·c) (half-dot-form)."""
    if not b.is_finite:
        raise MobiError("equation solving needs a finite carrier")
    n = b.size
    inv, oplus, dot = b.table("inv"), b.table("oplus"), b.table("dot")
    a_, b_, c_ = np.indices((n, n, n))
    rhs = oplus[dot[inv[b_], a_], dot[b_, c_]].ravel()
    if form == "oplus-form":
        lhs = oplus[b.one_bar, :]
    elif form == "half-dot-form":
        lhs = dot[b.half, :]
    else:
        raise MobiError(f"unknown equation form {form!r}")
    by_value = {v: tuple(int(x) for x in np.flatnonzero(lhs == v)) for v in range(n)}
    return SolutionSet(form, n, tuple(by_value[int(v)] for v in rhs))


def _raise_unsolvable(b, sols: SolutionSet):
    bad = sols.unsolvable()
    if bad:
        t = bad[0]
        raise UnsolvableTripleError(t, tuple(b.show(x) for x in t))


def imm_star_to_mobi(c: Structure, name: str | None = None) -> MobiStructure:
    """The unique p with 1̄⊕p(a,b,c) = (b̄·a)⊕(b·c); constants 1̄, 1̄⊕1, 1."""
    if c.kind not in ("imm", "imm_star"):
        raise MobiError("imm_star_to_mobi needs an IMM structure")
    sols = solve_p_equation(c, "oplus-form")
    _raise_unsolvable(c, sols)
    report = check_imm_star(c)
    if not report.passed:
        failed = ", ".join(r.axiom for r in report.failures())
        raise PreconditionError(f"not an IMM* algebra (fails {failed})")
    assert sols.all_unique  # forced by cancellation
    n = c.size
    p = np.array([s[0] for s in sols.solutions], dtype=np.int64).reshape(n, n, n)
    name = name if name is not None else (f"mobi({c.name})" if c.name else "")
    return MobiStructure(c.carrier, OpImpl(3, p), c.one_bar, c.half, c.one, name)


def imm_to_mobi_via_half_inverse(b: Structure, candidate=None, name: str | None = None) -> MobiStructure:
    """p(a,b,c) = (1̄⊕1)⁻¹·((b̄·a)⊕(b·c))."""
    if b.kind not in ("imm", "imm_star"):
        raise MobiError("imm_to_mobi_via_half_inverse needs an IMM structure")
    two = _half_inverse(b, candidate).inverse
    name = name if name is not None else (f"mobi({b.name})" if b.name else "")
    if b.is_finite:
        inv, oplus, dot = b.table("inv"), b.table("oplus"), b.table("dot")
        p = tabulate(lambda x, y, z: dot[two, oplus[dot[inv[y], x], dot[y, z]]], b.size, 3)
        return MobiStructure(b.carrier, OpImpl(3, p), b.one_bar, b.half, b.one, name)
    p = OpImpl(3, formula="imm-mobi-p", params={"inv": b.ops["inv"], "oplus": b.ops["oplus"],
                                                "dot": b.ops["dot"], "two": two})
    return MobiStructure(b.carrier, p, b.one_bar, b.half, b.one, name, b.sampling)


def mobi_dagger_search(b: Structure, match_imm: bool = True, node_cap: int | None = None):
    """Search for p solving (1̄⊕1)·p(a,b,c) = (b̄·a)⊕(b·c) that satisfies every mobi axiom but A6.

    Triples are filled in lexicographic order, solutions tried in carrier
    order. With ``match_imm`` the entries that define the IMM operations
    (p(1,a,0) = ā, p(0,a,b) = a·b, p(a,½,b) = a⊕b) are pinned, so a hit
    induces exactly ``b``. Returns None when no such p exists; raises
    ``SearchCapExceeded`` when the node cap is hit first.
    """
    from .search import DEFAULT_NODE_CAP, TableSearch

    sols = solve_p_equation(b, "half-dot-form")
    if not sols.all_solvable:
        return None
    n = b.size
    zero, half, one = b.one_bar, b.half, b.one
    allowed = np.zeros((n, n, n, n), dtype=bool)
    for (x, y, z), xs in sols.triples():
        allowed[x, y, z, list(xs)] = True
    pins = {}
    if match_imm:
        inv, oplus, dot = b.table("inv"), b.table("oplus"), b.table("dot")
        for x in range(n):
            pins[(one, x, zero)] = int(inv[x])
            for y in range(n):
                pins[(zero, x, y)] = int(dot[x, y])
                pins[(x, half, y)] = int(oplus[x, y])
    search = TableSearch(n, zero, half, one, allowed=allowed, use_a6=False,
                         node_cap=node_cap or DEFAULT_NODE_CAP, pins=pins)
    found = search.first()
    if found is None:
        return None
    name = f"mobi-dagger({b.name})" if b.name else ""
    return MobiStructure(b.carrier, OpImpl(3, found), zero, half, one, name)


# ------------------------------------------------------------ mobi <-> ring


def half_inverse_by_bijection(m: Structure):
    """h(x) = p(0,½,x) is injective on a finite mobi, so h⁻¹(1) is the ·-inverse of ½."""
    if m.kind != "mobi" or not m.is_finite:
        raise MobiError("half_inverse_by_bijection needs a finite mobi")
    h = m.table("p")[m.zero, m.half, :]
    if len(set(h.tolist())) != m.size:
        return None
    return int(np.flatnonzero(h == m.one)[0])


def mobi_to_ring(m: Structure, two, name: str | None = None) -> RingStructure:
    """a·b = p(0,a,b), a+b = 2·p(a,½,b), −a = 2̄·a, provided 2 is the ·-inverse of ½."""
    if m.kind != "mobi":
        raise MobiError("mobi_to_ring needs a mobi structure")
    if not m.carrier.contains(two):
        raise InvalidWitnessError(f"{two!r} is not in the carrier")
    try:
        left, right = m.apply("p", m.zero, m.half, two), m.apply("p", m.zero, two, m.half)
    except ClosureError as exc:
        raise InvalidWitnessError(str(exc)) from None
    if not (left == m.one and right == m.one):
        raise InvalidWitnessError(f"{m.show(two)} is not the inverse of ½ "
                                  f"(½·2 = {m.show(left)}, 2·½ = {m.show(right)})")
    name = name if name is not None else (f"ring({m.name})" if m.name else "")
    if m.is_finite:
        t = m.table("p")
        mul = t[m.zero]
        add = mul[two][t[:, m.half, :]]
        two_bar = t[m.one, two, m.zero]
        neg = mul[two_bar]
        return RingStructure(m.carrier, OpImpl(2, add), OpImpl(2, mul), OpImpl(1, neg), m.zero, m.one, name)
    p = m.ops["p"]
    mul = OpImpl(2, formula="mobi-dot", params={"p": p, "zero": m.zero})
    add = OpImpl(2, formula="mobi-ring-add", params={"p": p, "zero": m.zero, "half": m.half, "two": two})
    neg = OpImpl(1, formula="mobi-ring-neg", params={"p": p, "zero": m.zero, "one": m.one, "two": two})
    return RingStructure(m.carrier, add, mul, neg, m.zero, m.one, name, m.sampling)


def ring_to_mobi(r: Structure, candidate=None, name: str | None = None) -> MobiStructure:
    """p(a,b,c) = a + bc − ba with ½ = (1+1)⁻¹."""
    half = ring_half(r, candidate).inverse
    name = name if name is not None else (f"mobi({r.name})" if r.name else "")
    if r.is_finite:
        add, mul, neg = r.table("add"), r.table("mul"), r.table("neg")
        p = tabulate(lambda a, b, c: add[a, add[mul[b, c], neg[mul[b, a]]]], r.size, 3)
        return MobiStructure(r.carrier, OpImpl(3, p), r.zero, half, r.one, name)
    p = OpImpl(3, formula="ring-mobi-p", params={"add": r.ops["add"], "mul": r.ops["mul"], "neg": r.ops["neg"]})
    return MobiStructure(r.carrier, p, r.zero, half, r.one, name, r.sampling)


# -------------------------------------------------------------- roundtrips


def _compare(label: str, a: Structure, b: Structure, sample: SampleSpec | None) -> AxiomResult:
    if a.is_finite:
        if a.same_as(b):
            return AxiomResult(label, "pass", 1)
        diff = [k for k in a.ops if a.ops[k] != b.ops[k]]
        if dict(a.constants) != dict(b.constants):
            diff.append("constants")
        return AxiomResult(label, "fail", 1, detail="differs in " + ", ".join(diff))
    ok, detail = extensionally_equal(a, b, sample)
    return AxiomResult(label, "pass" if ok else "fail", sample.count if sample else 0, detail=detail)


def extensionally_equal(a: Structure, b: Structure, sample: SampleSpec | None = None) -> tuple[bool, str]:
    """Compare two rational-domain structures of the same signature on shared samples."""
    from .sampling import sample_tuples

    sample = sample or a.sampling or SampleSpec()
    if a.carrier != b.carrier:
        return False, "carriers differ"
    for role in a.constants:
        if a.constants[role] != b.constants[role]:
            return False, f"constant {role} differs"
    for op in a.ops:
        fa, fb = a.checked(op), b.checked(op)
        for args in sample_tuples(a.carrier, sample, a.ops[op].arity, list(a.constants.values())):
            try:
                if fa(*args) != fb(*args):
                    return False, f"{op}{tuple(a.show(x) for x in args)} differs"
            except ClosureError as exc:
                return False, str(exc)
    return True, ""


def roundtrip_check(s: Structure, sample: SampleSpec | None = None) -> Report:
    """Certify the ring/mobi correspondence and its IMM legs on ``s``."""
    report = Report(s.name, "roundtrip")
    if s.kind == "ring":
        m = ring_to_mobi(s)
        two = s.apply("add", s.one, s.one)
        report.results.append(_compare("ring->mobi->ring", s, mobi_to_ring(m, two), sample))
        via_imm = imm_to_mobi_via_half_inverse(ring_to_imm(s))
        report.results.append(_compare("ring->imm->mobi = ring->mobi", m, via_imm, sample))
    elif s.kind == "mobi":
        if s.is_finite:
            two = half_inverse_by_bijection(s)
            if two is None:
                raise NoInverseError("½ has no inverse")
        else:
            raise MobiError("roundtrip of a rational-domain mobi needs an explicit ring")
        r = mobi_to_ring(s, two)
        report.results.append(_compare("mobi->ring->mobi", s, ring_to_mobi(r), sample))
        report.results.append(_compare("mobi->imm->ring = mobi->ring", r, imm_to_ring(derive_imm_from_mobi(s)), sample))
    else:
        m = imm_star_to_mobi(s)
        back = derive_imm_from_mobi(m)
        report.results.append(_compare("imm->mobi->imm", s, back, sample))
        try:
            via = imm_to_mobi_via_half_inverse(s)
        except NoInverseError:
            report.results.append(AxiomResult("imm->mobi (both paths agree)", "skipped",
                                              detail="1̄⊕1 has no inverse"))
        else:
            report.results.append(_compare("imm->mobi (both paths agree)", m, via, sample))
    return report
