"""Axiom and derived-identity verification.

A :class:`Law` is a list of equations over named variables, optionally guarded
by a premise equation (for the cancellation-style laws). Equations are plain
Python functions of an operation namespace, so one definition serves both
evaluation modes:

* finite carriers: variables are broadcast numpy index grids, operations are
  table lookups, and the whole quantifier range is checked at once (in chunks
  for large arities);
* rational domains: variables are exact values drawn by :class:`SampleSpec`
  and operations are closure-checked formulas.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from types import SimpleNamespace
from typing import Callable

import numpy as np

from .core import CapExceeded, ClosureError, MobiError, Structure
from .sampling import SampleSpec, sample_tuples

EXHAUSTIVE_CAP = 10**9
CHUNK = 1 << 18


class ExhaustivenessCapExceeded(CapExceeded):
    pass


@dataclass(frozen=True)
class Law:
    id: str
    variables: tuple[str, ...]
    equations: tuple[Callable, ...]
    premise: Callable | None = None

    @property
    def arity(self) -> int:
        return len(self.variables)


def law(id, variables, *equations, premise=None) -> Law:
    return Law(id, tuple(variables.split()) if variables else (), equations, premise)


# ------------------------------------------------------------------ mobi
# namespace fields: p, Z, H, O (the constants 0, ½, 1) plus derived inv, dot,
# oplus, circ and the IMM constants Zb = 1̄, Hb = 1̄⊕1.

MOBI_AXIOMS = [
    law("A1", "", lambda o: (o.p(o.O, o.H, o.Z), o.H)),
    law("A2", "a", lambda o, a: (o.p(o.Z, a, o.O), a)),
    law("A3", "a b", lambda o, a, b: (o.p(a, b, a), a)),
    law("A4", "a b", lambda o, a, b: (o.p(a, o.Z, b), a)),
    law("A5", "a b", lambda o, a, b: (o.p(a, o.O, b), b)),
    law("A6", "a a2 b", lambda o, a, a2, b: (a, a2),
        premise=lambda o, a, a2, b: (o.p(a, o.H, b), o.p(a2, o.H, b))),
    law("A7", "a b c1 c2 c3",
        lambda o, a, b, c1, c2, c3: (o.p(a, o.p(c1, c2, c3), b),
                                     o.p(o.p(a, c1, b), c2, o.p(a, c3, b)))),
    law("A8", "a1 b1 a2 b2 c",
        lambda o, a1, b1, a2, b2, c: (o.p(o.p(a1, c, b1), o.H, o.p(a2, c, b2)),
                                      o.p(o.p(a1, o.H, a2), c, o.p(b1, o.H, b2)))),
]

MOBI_PROPERTIES = [
    law("P11", "a b c d", lambda o, a, b, c, d: (o.p(a, o.p(o.Z, c, d), b), o.p(a, c, o.p(a, d, b)))),
    law("P12", "a b c d", lambda o, a, b, c, d: (o.p(a, o.p(o.O, c, d), b), o.p(b, c, o.p(a, d, b)))),
    law("P13", "a b c d", lambda o, a, b, c, d: (o.p(a, o.p(c, d, o.Z), b), o.p(o.p(a, c, b), d, a))),
    law("P14", "a b c d", lambda o, a, b, c, d: (o.p(a, o.p(c, d, o.O), b), o.p(o.p(a, c, b), d, b))),
    law("P21", "a b c", lambda o, a, b, c: (o.p(a, o.p(o.O, c, o.Z), b), o.p(b, c, a))),
    law("P22", "a b", lambda o, a, b: (o.p(a, o.H, b), o.p(b, o.H, a))),
    law("P23", "c", lambda o, c: (o.p(o.O, o.p(o.O, c, o.Z), o.Z), c)),
    law("P41", "a1 b1 a2 b2 c",
        lambda o, a1, b1, a2, b2, c: (o.p(o.p(a1, c, b1), o.H, o.p(a2, c, b2)),
                                      o.p(o.p(a2, c, b1), o.H, o.p(a1, c, b2)))),
    law("P42", "a b c", lambda o, a, b, c: (o.p(o.p(a, c, b), o.H, o.p(b, c, a)), o.p(a, o.H, b))),
    law("P43", "a b c d",
        lambda o, a, b, c, d: (o.p(o.p(a, o.p(o.O, c, o.Z), b), o.H, o.p(a, c, d)),
                               o.p(a, o.H, o.p(b, c, d)))),
    # identities relating p to its derived operations
    law("bar-involution", "a", lambda o, a: (o.inv(o.inv(a)), a)),
    law("bar-one", "", lambda o: (o.inv(o.O), o.Z)),
    law("p-swap", "a b c", lambda o, a, b, c: (o.p(b, c, a), o.p(a, o.inv(c), b))),
    law("bar-p", "a b c", lambda o, a, b, c: (o.inv(o.p(a, c, b)), o.p(o.inv(a), c, o.inv(b)))),
    law("bar-dot", "a b", lambda o, a, b: (o.inv(o.dot(a, b)), o.circ(o.inv(b), o.inv(a)))),
    law("bar-circ", "a b", lambda o, a, b: (o.inv(o.circ(a, b)), o.dot(o.inv(b), o.inv(a)))),
    law("circ-dot-oplus", "a b", lambda o, a, b: (o.oplus(o.circ(a, b), o.dot(b, a)), o.oplus(b, a))),
    law("half-is-midpoint", "", lambda o: (o.H, o.oplus(o.inv(o.O), o.O))),
    law("half-dot-p", "a b c",
        lambda o, a, b, c: (o.dot(o.H, o.p(a, b, c)), o.oplus(o.dot(o.inv(b), a), o.dot(b, c)))),
]

FULL_MEDIAL = law("full-medial", "a1 b1 a2 b2 c d",
                  lambda o, a1, b1, a2, b2, c, d: (o.p(o.p(a1, c, b1), d, o.p(a2, c, b2)),
                                                   o.p(o.p(a1, d, a2), c, o.p(b1, d, b2))))

# ------------------------------------------------------------------- IMM

IMM_AXIOMS = [
    law("B1", "a", lambda o, a: (o.oplus(a, a), a)),
    law("B2", "a b", lambda o, a, b: (o.oplus(a, b), o.oplus(b, a))),
    law("B3", "a b c d", lambda o, a, b, c, d: (o.oplus(o.oplus(a, b), o.oplus(c, d)),
                                                o.oplus(o.oplus(a, c), o.oplus(b, d)))),
    law("B4", "a b c", lambda o, a, b, c: (o.dot(a, o.dot(b, c)), o.dot(o.dot(a, b), c))),
    law("B5", "a", lambda o, a: (o.dot(a, o.O), a), lambda o, a: (o.dot(o.O, a), a)),
    law("B6", "a b c", lambda o, a, b, c: (o.dot(a, o.oplus(b, c)), o.oplus(o.dot(a, b), o.dot(a, c))),
        lambda o, a, b, c: (o.dot(o.oplus(a, b), c), o.oplus(o.dot(a, c), o.dot(b, c)))),
    law("B7", "a", lambda o, a: (o.inv(o.inv(a)), a)),
    law("B8", "a b", lambda o, a, b: (o.inv(o.oplus(a, b)), o.oplus(o.inv(a), o.inv(b)))),
    law("B9", "a", lambda o, a: (o.dot(a, o.Zb), o.Zb), lambda o, a: (o.dot(o.Zb, a), o.Zb)),
    law("B10", "a", lambda o, a: (o.oplus(o.inv(a), a), o.Hb)),
]

IMM_STAR_AXIOMS = [
    law("C1", "a", lambda o, a: (o.oplus(a, a), a)),
    law("C2", "a b", lambda o, a, b: (o.oplus(a, b), o.oplus(b, a))),
    law("C3", "a a2 b", lambda o, a, a2, b: (a, a2),
        premise=lambda o, a, a2, b: (o.oplus(a, b), o.oplus(a2, b))),
    law("C4", "a b c d", lambda o, a, b, c, d: (o.oplus(o.oplus(a, b), o.oplus(c, d)),
                                                o.oplus(o.oplus(a, c), o.oplus(b, d)))),
    law("C5", "a b c", lambda o, a, b, c: (o.dot(a, o.dot(b, c)), o.dot(o.dot(a, b), c))),
    law("C6", "a", lambda o, a: (o.dot(a, o.O), a), lambda o, a: (o.dot(o.O, a), a)),
    law("C7", "a b c", lambda o, a, b, c: (o.dot(a, o.oplus(b, c)), o.oplus(o.dot(a, b), o.dot(a, c))),
        lambda o, a, b, c: (o.dot(o.oplus(a, b), c), o.oplus(o.dot(a, c), o.dot(b, c)))),
    law("C8", "a", lambda o, a: (o.dot(a, o.Zb), o.Zb), lambda o, a: (o.dot(o.Zb, a), o.Zb)),
    law("C9", "a", lambda o, a: (o.oplus(o.inv(a), a), o.Hb)),
]

IMM_PROPERTIES = [
    law("IMMP1", "a b c", lambda o, a, b, c: (o.oplus(a, o.oplus(b, c)), o.oplus(o.oplus(a, b), o.oplus(a, c)))),
    law("IMMP2", "", lambda o: (o.inv(o.Hb), o.Hb)),
    law("IMMP3", "a", lambda o, a: (a, o.Hb), premise=lambda o, a: (o.inv(a), a)),
    law("IMMP4", "a", lambda o, a: (o.dot(o.Hb, a), o.oplus(o.Zb, a))),
    law("IMMP5", "a", lambda o, a: (o.dot(o.Hb, a), o.dot(a, o.Hb))),
]

# only meaningful when 1̄⊕1 has a monoid inverse (namespace field ``two``)
HALF_INVERSE_PROPERTIES = [
    law("half-inverse-central", "a", lambda o, a: (o.dot(a, o.two), o.dot(o.two, a))),
    law("half-inverse-sum", "", lambda o: (o.oplus(o.Zb, o.two), o.O)),
]

IMM_STAR_PROPERTIES = [
    law("IMMP*1", "a", lambda o, a: (o.inv(o.inv(a)), a)),
    law("IMMP*2", "a b", lambda o, a, b: (o.inv(o.oplus(a, b)), o.oplus(o.inv(a), o.inv(b)))),
    law("IMMP*3", "a b", lambda o, a, b: (b, o.inv(a)), premise=lambda o, a, b: (o.oplus(b, a), o.Hb)),
    law("IMMP*4", "x a b c",
        lambda o, x, a, b, c: (o.oplus(o.Zb, o.inv(x)), o.oplus(o.dot(o.inv(b), o.inv(a)), o.dot(b, o.inv(c)))),
        premise=lambda o, x, a, b, c: (o.oplus(o.Zb, x), o.oplus(o.dot(o.inv(b), a), o.dot(b, c)))),
]

# ------------------------------------------------------------------ ring

RING_AXIOMS = [
    law("R1", "a b c", lambda o, a, b, c: (o.add(o.add(a, b), c), o.add(a, o.add(b, c)))),
    law("R2", "a b", lambda o, a, b: (o.add(a, b), o.add(b, a))),
    law("R3", "a", lambda o, a: (o.add(a, o.Z), a)),
    law("R4", "a", lambda o, a: (o.add(o.neg(a), a), o.Z)),
    law("R5", "a b c", lambda o, a, b, c: (o.mul(a, o.mul(b, c)), o.mul(o.mul(a, b), c))),
    law("R6", "a", lambda o, a: (o.mul(a, o.O), a), lambda o, a: (o.mul(o.O, a), a)),
    law("R7", "a b c", lambda o, a, b, c: (o.mul(a, o.add(b, c)), o.add(o.mul(a, b), o.mul(a, c))),
        lambda o, a, b, c: (o.mul(o.add(a, b), c), o.add(o.mul(a, c), o.mul(b, c)))),
    law("R-absorb", "a", lambda o, a: (o.mul(a, o.Z), o.Z), lambda o, a: (o.mul(o.Z, a), o.Z)),
    law("R-cancel", "a a2 b", lambda o, a, a2, b: (a, a2),
        premise=lambda o, a, a2, b: (o.add(a, b), o.add(a2, b))),
]

PROFILES: dict[str, list[Law]] = {
    "mobi-full": MOBI_AXIOMS,
    "mobi-dagger": [x for x in MOBI_AXIOMS if x.id != "A6"],
    "imm": IMM_AXIOMS,
    "imm-star": IMM_STAR_AXIOMS,
    "ring": RING_AXIOMS,
    "derived-mobi-props": MOBI_PROPERTIES,
    "derived-imm-props": IMM_PROPERTIES,
    "derived-immstar-props": IMM_STAR_PROPERTIES,
    "full-medial": [FULL_MEDIAL],
}

LAWS_BY_ID = {x.id: x for laws in PROFILES.values() for x in laws}
LAWS_BY_ID.update({x.id: x for x in HALF_INVERSE_PROPERTIES})


# --------------------------------------------------------------- reports


@dataclass(frozen=True)
class AxiomResult:
    axiom: str
    status: str  # "pass" | "fail" | "skipped"
    checked: int = 0
    witness: tuple | None = None  # internal elements, in variable order
    shown: tuple | None = None  # labels / rational strings
    variables: tuple[str, ...] = ()
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_json(self) -> dict:
        out = {"axiom": self.axiom, "status": self.status, "checked": self.checked,
               "witness": list(self.shown) if self.shown is not None else None}
        if self.witness is not None:
            out["variables"] = list(self.variables)
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    structure_id: str
    profile: str
    results: list[AxiomResult] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "pass" if all(r.passed for r in self.results) else "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def __getitem__(self, axiom: str) -> AxiomResult:
        for r in self.results:
            if r.axiom == axiom:
                return r
        raise KeyError(axiom)

    def __contains__(self, axiom: str) -> bool:
        return any(r.axiom == axiom for r in self.results)

    def failures(self) -> list[AxiomResult]:
        return [r for r in self.results if not r.passed]

    def extend(self, other: "Report") -> "Report":
        self.results.extend(other.results)
        return self

    def to_json(self) -> dict:
        return {"structure": self.structure_id, "profile": self.profile, "verdict": self.verdict,
                "results": [r.to_json() for r in self.results]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False)

    def summary(self) -> str:
        lines = [f"{self.structure_id or '<structure>'} [{self.profile}]: {self.verdict}"]
        for r in self.results:
            extra = ""
            if r.status == "fail" and r.shown is not None:
                extra = "  witness " + ", ".join(f"{v}={w}" for v, w in zip(r.variables, r.shown))
            if r.detail:
                extra += f"  ({r.detail})"
            lines.append(f"  {r.axiom:<22} {r.status:<7} checked={r.checked}{extra}")
        return "\n".join(lines)


# ------------------------------------------------------------ namespaces


def namespace(s: Structure, two=None) -> SimpleNamespace:
    """Operation namespace for law evaluation, including derived operations."""
    fn = s.checked
    o = SimpleNamespace()
    if s.kind == "mobi":
        p = fn("p")
        o.p = p
        o.Z, o.H, o.O = s.zero, s.half, s.one
        o.inv = lambda a: p(o.O, a, o.Z)
        o.dot = lambda a, b: p(o.Z, a, b)
        o.oplus = lambda a, b: p(a, o.H, b)
        o.circ = lambda a, b: p(a, b, o.O)
    elif s.kind in ("imm", "imm_star"):
        o.inv, o.oplus, o.dot = fn("inv"), fn("oplus"), fn("dot")
        o.O = s.one
        o.circ = lambda a, b: o.inv(o.dot(o.inv(b), o.inv(a)))
    elif s.kind == "ring":
        o.add, o.mul, o.neg = fn("add"), fn("mul"), fn("neg")
        o.Z, o.O = s.zero, s.one
        return _scalarize(o, s)
    if s.kind != "ring":
        o.Zb = o.inv(o.O)
        o.Hb = o.oplus(o.Zb, o.O)
    if two is not None:
        o.two = two
    return _scalarize(o, s)


def _scalarize(o, s):
    if s.is_finite:
        for k, v in vars(o).items():
            if isinstance(v, np.integer):
                setattr(o, k, int(v))
    return o


# --------------------------------------------------------------- engines


def check_law_finite(s: Structure, law: Law, o=None, cap: int = EXHAUSTIVE_CAP) -> AxiomResult:
    o = o if o is not None else namespace(s)
    n = s.size
    k = law.arity
    if k == 0:
        bad = _violation(law, o, ())
        if bool(np.any(bad)):
            return AxiomResult(law.id, "fail", 1, (), (), ())
        return AxiomResult(law.id, "pass", 1)
    # fix leading variables as scalars until the vectorized block is small enough
    lead = 0
    while lead < k and n ** (k - lead) > CHUNK:
        lead += 1
    block = n ** (k - lead)
    free = k - lead
    grids = [np.arange(n).reshape((1,) * i + (n,) + (1,) * (free - i - 1)) for i in range(free)]
    shape = (n,) * free
    checked = 0
    for prefix in itertools.product(range(n), repeat=lead):
        if checked + block > cap:
            raise ExhaustivenessCapExceeded(
                f"{law.id}: exhaustive check over |A|^{k} = {n ** k} tuples exceeds the cap of {cap}")
        bad = np.broadcast_to(_violation(law, o, tuple(prefix) + tuple(grids)), shape)
        checked += block
        if bad.any():
            flat = int(np.argmax(bad.ravel()))
            rest = np.unravel_index(flat, shape) if free else ()
            witness = tuple(prefix) + tuple(int(i) for i in rest)
            checked = checked - block + flat + 1
            return AxiomResult(law.id, "fail", checked, witness, tuple(s.show(w) for w in witness), law.variables)
    return AxiomResult(law.id, "pass", checked)


def _violation(law: Law, o, args):
    bad = False
    for eq in law.equations:
        lhs, rhs = eq(o, *args)
        bad = bad | (np.asarray(lhs) != np.asarray(rhs))
    if law.premise is not None:
        pl, pr = law.premise(o, *args)
        bad = bad & (np.asarray(pl) == np.asarray(pr))
    return bad


def _holds_scalar(law: Law, o, args) -> bool:
    if law.premise is not None:
        pl, pr = law.premise(o, *args)
        if not pl == pr:
            return True
    for eq in law.equations:
        lhs, rhs = eq(o, *args)
        if not lhs == rhs:
            return False
    return True


def check_law_sampled(s: Structure, law: Law, spec: SampleSpec, o=None) -> AxiomResult:
    try:
        o = o if o is not None else namespace(s)
    except ClosureError as exc:
        return AxiomResult(law.id, "fail", 0, (), (), (), f"closure: {exc}")
    specials = sorted({repr(v): v for k, v in vars(o).items() if not callable(v)}.items())
    specials = [v for _, v in specials]
    tuples = [()] if law.arity == 0 else sample_tuples(s.carrier, spec, law.arity, specials)
    for i, args in enumerate(tuples, 1):
        try:
            ok = _holds_scalar(law, o, args)
            detail = ""
        except ClosureError as exc:
            ok, detail = False, f"closure: {exc}"
        if not ok:
            return AxiomResult(law.id, "fail", i, args, tuple(s.show(w) for w in args), law.variables, detail)
    return AxiomResult(law.id, "pass", len(tuples))


def check_law(s: Structure, law: Law, sample: SampleSpec | None = None, o=None,
              cap: int = EXHAUSTIVE_CAP) -> AxiomResult:
    if s.is_finite:
        return check_law_finite(s, law, o, cap)
    return check_law_sampled(s, law, _resolve_sample(s, sample), o)


def _resolve_sample(s: Structure, sample: SampleSpec | None) -> SampleSpec:
    if sample is not None:
        return sample
    if s.sampling is not None:
        return s.sampling
    raise MobiError("checking a rational-domain structure requires a SampleSpec")


def run_laws(s: Structure, laws, profile: str, sample=None, o=None, skip=(), cap=EXHAUSTIVE_CAP) -> Report:
    if not s.is_finite:
        sample = _resolve_sample(s, sample)
    report = Report(s.name, profile)
    if o is None:
        try:
            o = namespace(s)
        except ClosureError as exc:
            report.results.append(AxiomResult("closure", "fail", 0, (), (), (), str(exc)))
            return report
    for x in laws:
        if x.id in skip:
            report.results.append(AxiomResult(x.id, "skipped"))
            continue
        report.results.append(check_law(s, x, sample, o, cap))
    return report


def _require(s: Structure, *kinds):
    if s.kind not in kinds:
        raise MobiError(f"expected a {' or '.join(kinds)} structure, got {s.kind}")


# ------------------------------------------------------------ public API


def check_mobi(m: Structure, profile: str = "mobi-full", sample: SampleSpec | None = None,
               cap: int = EXHAUSTIVE_CAP) -> Report:
    _require(m, "mobi")
    if profile not in ("mobi-full", "mobi-dagger"):
        raise MobiError(f"unknown mobi profile {profile!r}")
    skip = ("A6",) if profile == "mobi-dagger" else ()
    return run_laws(m, MOBI_AXIOMS, profile, sample, skip=skip, cap=cap)


def check_imm(b: Structure, sample: SampleSpec | None = None, cap: int = EXHAUSTIVE_CAP) -> Report:
    _require(b, "imm", "imm_star")
    return run_laws(b, IMM_AXIOMS, "imm", sample, cap=cap)


def check_imm_star(c: Structure, sample: SampleSpec | None = None, cap: int = EXHAUSTIVE_CAP) -> Report:
    _require(c, "imm", "imm_star")
    return run_laws(c, IMM_STAR_AXIOMS, "imm-star", sample, cap=cap)


def check_ring(r: Structure, sample: SampleSpec | None = None, cap: int = EXHAUSTIVE_CAP) -> Report:
    _require(r, "ring")
    return run_laws(r, RING_AXIOMS, "ring", sample, cap=cap)


def check_structure(s: Structure, profile: str | None = None, sample=None, cap=EXHAUSTIVE_CAP) -> Report:
    """Check ``s`` against the defining profile of its kind, or an explicit compatible profile."""
    if profile == "imm-star":
        return check_imm_star(s, sample, cap)
    if s.kind == "mobi" or profile is not None:
        return check_mobi(s, profile or "mobi-full", sample, cap)
    if s.kind == "imm":
        return check_imm(s, sample, cap)
    if s.kind == "imm_star":
        return check_imm_star(s, sample, cap)
    return check_ring(s, sample, cap)


def _half_inverse(s: Structure, o):
    """The monoid inverse of 1̄⊕1 in a finite IMM namespace, or None."""
    if not s.is_finite:
        return None
    for x in range(s.size):
        if o.dot(o.Hb, x) == o.O and o.dot(x, o.Hb) == o.O:
            return int(x)
    return None


def check_derived_properties(s: Structure, sample: SampleSpec | None = None,
                             cap: int = EXHAUSTIVE_CAP) -> Report:
    """Re-verify every derived identity that applies to the structure's kind.

    A mobi is checked against its own identities and, through the derived
    operations ā = p(1,a,0), a·b = p(0,a,b), a⊕b = p(a,½,b), against the IMM
    and IMM* identities as well.
    """
    if s.kind == "ring":
        return run_laws(s, [x for x in RING_AXIOMS if x.id in ("R-absorb", "R-cancel")],
                        "derived-ring-props", sample, cap=cap)
    o = namespace(s)
    laws = []
    if s.kind == "mobi":
        laws += MOBI_PROPERTIES
        laws += IMM_PROPERTIES
        if check_law(s, LAWS_BY_ID["A6"], sample, o, cap).passed:
            laws += IMM_STAR_PROPERTIES
    else:
        laws += IMM_PROPERTIES
        if s.kind == "imm_star" or check_law(s, LAWS_BY_ID["C3"], sample, o, cap).passed:
            laws += IMM_STAR_PROPERTIES
    two = _half_inverse(s, o)
    if two is not None:
        o.two = two
        laws += HALF_INVERSE_PROPERTIES
    profile = {"mobi": "derived-mobi-props", "imm": "derived-imm-props",
               "imm_star": "derived-immstar-props"}[s.kind]
    return run_laws(s, laws, profile, sample, o=o, cap=cap)


def full_medial_result(m: Structure, sample: SampleSpec | None = None, cap: int = EXHAUSTIVE_CAP) -> AxiomResult:
    _require(m, "mobi")
    return check_law(m, FULL_MEDIAL, sample, cap=cap)


def check_full_medial(m: Structure, sample: SampleSpec | None = None, cap: int = EXHAUSTIVE_CAP) -> bool:
    """True iff p(p(a1,c,b1),d,p(a2,c,b2)) = p(p(a1,d,a2),c,p(b1,d,b2)) everywhere (or on the sample)."""
    return full_medial_result(m, sample, cap).passed


def witness_violates(s: Structure, result: AxiomResult) -> bool:
    """Independent re-evaluation of a fail witness through the checked scalar path."""
    if result.status != "fail" or result.witness is None:
        return False
    if result.detail.startswith("closure"):
        return True
    law_ = LAWS_BY_ID[result.axiom]
    o = namespace(s)
    args = tuple(result.witness)
    if s.is_finite:
        o = _scalar_finite_namespace(s)
    return not _holds_scalar(law_, o, args)


def _scalar_finite_namespace(s: Structure):
    # per-element evaluation through Structure.apply, independent of the vectorized path
    o = SimpleNamespace()
    ap = s.apply
    if s.kind == "mobi":
        o.p = lambda a, b, c: ap("p", a, b, c)
        o.Z, o.H, o.O = s.zero, s.half, s.one
        o.inv = lambda a: o.p(o.O, a, o.Z)
        o.dot = lambda a, b: o.p(o.Z, a, b)
        o.oplus = lambda a, b: o.p(a, o.H, b)
        o.circ = lambda a, b: o.p(a, b, o.O)
    elif s.kind == "ring":
        o.add = lambda a, b: ap("add", a, b)
        o.mul = lambda a, b: ap("mul", a, b)
        o.neg = lambda a: ap("neg", a)
        o.Z, o.O = s.zero, s.one
        return o
    else:
        o.inv = lambda a: ap("inv", a)
        o.oplus = lambda a, b: ap("oplus", a, b)
        o.dot = lambda a, b: ap("dot", a, b)
        o.O = s.one
        o.circ = lambda a, b: o.inv(o.dot(o.inv(b), o.inv(a)))
    o.Zb = o.inv(o.O)
    o.Hb = o.oplus(o.Zb, o.O)
    two = _half_inverse(s, o)
    if two is not None:
        o.two = two
    return o
