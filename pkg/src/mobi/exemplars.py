"""Named example structures, ring constructors and subset closure."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    INF, CapExceeded, Carrier, IMMStructure, MobiError, MobiStructure, OpImpl,
    RingStructure, Structure, finite_from_labels, parse_rational, tabulate,
)
from .sampling import SampleSpec

HALF = "½"
FIVE_LABELS = ("α", "0", HALF, "1", "β")
THREE_LABELS = ("0", HALF, "1")
DEFAULT_CLOSURE_CAP = 10**5


class UnsupportedExample(MobiError):
    pass


@dataclass(frozen=True)
class ExampleStub:
    id: str
    operation: str
    note: str

    def to_json(self) -> dict:
        return {"example": self.id, "operation": self.operation, "note": self.note}


# ------------------------------------------------------------------ rings


def zmod_ring(n: int) -> RingStructure:
    """Integers modulo n."""
    if n < 1:
        raise MobiError("modulus must be positive")
    x = np.arange(n)
    add = (x[:, None] + x[None, :]) % n
    mul = (x[:, None] * x[None, :]) % n
    neg = (-x) % n
    return RingStructure(Carrier.finite([str(i) for i in range(n)]), OpImpl(2, add), OpImpl(2, mul),
                         OpImpl(1, neg), 0, 1 % n, f"Z{n}")


def _matrix_ring(entries, mod: int, name: str) -> RingStructure:
    """2x2 matrices over Z_mod whose entries follow the given (a, b, c, d) list."""
    mats = [np.array(e, dtype=np.int64).reshape(2, 2) for e in entries]
    index = {m.tobytes(): i for i, m in enumerate(mats)}
    n = len(mats)
    look = lambda m: index[(m % mod).tobytes()]
    add = [[look(a + b) for b in mats] for a in mats]
    mul = [[look(a @ b) for b in mats] for a in mats]
    neg = [look(-a) for a in mats]
    labels = ["".join(str(v) for v in m.ravel()) for m in mats]
    zero = look(np.zeros((2, 2), dtype=np.int64))
    one = look(np.eye(2, dtype=np.int64))
    return RingStructure(Carrier.finite(labels), OpImpl(2, add), OpImpl(2, mul), OpImpl(1, neg),
                         zero, one, name)


def matrix_ring(mod: int = 3) -> RingStructure:
    """All 2x2 matrices over Z_mod; labels list the entries row by row."""
    return _matrix_ring(list(itertools.product(range(mod), repeat=4)), mod, f"M2Z{mod}")


def upper_triangular_ring(mod: int = 3) -> RingStructure:
    """Upper triangular 2x2 matrices over Z_mod."""
    entries = [(a, b, 0, d) for a, b, d in itertools.product(range(mod), repeat=3)]
    return _matrix_ring(entries, mod, f"T2Z{mod}")


def rational_field(sampling: SampleSpec | None = None) -> RingStructure:
    return RingStructure(Carrier.rational("rationals"), OpImpl(2, formula="rational-add"),
                         OpImpl(2, formula="rational-mul"), OpImpl(1, formula="rational-neg"),
                         Fraction(0), Fraction(1), "Q", sampling or SampleSpec())


def named_ring(name: str) -> RingStructure:
    """Rings by short name: Zn, M2Zm, T2Zm, Q."""
    if name == "Q":
        return rational_field()
    for prefix, build in (("M2Z", matrix_ring), ("T2Z", upper_triangular_ring), ("Z", zmod_ring)):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            return build(int(name[len(prefix):]))
    raise MobiError(f"unknown ring {name!r} (expected Zn, M2Zm, T2Zm or Q)")


# -------------------------------------------------------------- fixtures


def _rational_mobi(name, domain, formula, constants, domain_params=None, formula_params=None, sampling=None):
    carrier = Carrier.rational(domain, **(domain_params or {}))
    p = OpImpl(3, formula=formula, params=formula_params or {})
    zero, half, one = constants
    return MobiStructure(carrier, p, zero, half, one, name, sampling or SampleSpec())


def three_element() -> MobiStructure:
    # p[a][b][c] written as the slices p(-, b, -)
    z, h, o = THREE_LABELS
    by_b = {
        z: [[z, z, z], [h, h, h], [o, o, o]],
        h: [[z, o, h], [o, h, z], [h, z, o]],
        o: [[z, h, o], [z, h, o], [z, h, o]],
    }
    p = [[[by_b[b][a][c] for c in range(3)] for b in THREE_LABELS] for a in range(3)]
    return finite_from_labels("mobi", THREE_LABELS, {"p": p},
                              {"zero": z, "half": h, "one": o}, "three-element")


def mod_odd(n: int) -> MobiStructure:
    """Z_(2n+1) with p(a,b,c) = a - ba + bc and ½ = n+1."""
    if n < 1:
        raise MobiError("mod-odd needs n >= 1")
    m = 2 * n + 1
    p = tabulate(lambda a, b, c: (a - b * a + b * c) % m, m, 3)
    return MobiStructure(Carrier.finite([str(i) for i in range(m)]), OpImpl(3, p), 0, n + 1, 1, f"mod-odd({n})")


def three_element_imm() -> IMMStructure:
    z, h, o = THREE_LABELS
    return finite_from_labels("imm", THREE_LABELS, {
        "inv": [o, h, z],
        "oplus": [[z, h, h], [h, h, h], [h, h, o]],
        "dot": [[z, z, z], [z, h, h], [z, h, o]],
    }, {"one": o}, "section4-imm")


def _five_element_imm(name, oplus, dot) -> IMMStructure:
    a, z, h, o, b = FIVE_LABELS
    return finite_from_labels("imm", FIVE_LABELS, {"inv": [b, o, h, z, a], "oplus": oplus, "dot": dot},
                              {"one": o}, name)


def imm1() -> IMMStructure:
    a, z, h, o, b = FIVE_LABELS
    return _five_element_imm("imm1", [
        [a, b, o, z, h],
        [b, z, a, h, o],
        [o, a, h, b, z],
        [z, h, b, o, a],
        [h, o, z, a, b],
    ], [
        [o, z, b, a, h],
        [z, z, z, z, z],
        [b, z, a, h, o],
        [a, z, h, o, b],
        [h, z, o, b, a],
    ])


def imm2() -> IMMStructure:
    a, z, h, o, b = FIVE_LABELS
    return _five_element_imm("imm2", [
        [a, h, h, a, h],
        [h, z, h, h, b],
        [h, h, h, h, h],
        [a, h, h, o, h],
        [h, b, h, h, b],
    ], [
        [a, z, h, a, b],
        [z, z, z, z, z],
        [h, z, h, h, b],
        [a, z, h, o, b],
        [b, z, b, b, z],
    ])


def imm3() -> IMMStructure:
    a, z, h, o, b = FIVE_LABELS
    return _five_element_imm("imm3", [
        [a, h, h, h, h],
        [h, z, h, h, h],
        [h, h, h, h, h],
        [h, h, h, o, h],
        [h, h, h, h, b],
    ], [
        [b, z, h, a, o],
        [z, z, z, z, z],
        [h, z, h, h, h],
        [a, z, h, o, b],
        [o, z, h, b, a],
    ])


def _fraction(value, what: str) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        x = parse_rational(value)
        if x is INF:
            raise MobiError(f"{what} must be finite")
        return x
    raise MobiError(f"{what} must be a rational, got {value!r}")


def interval_alpha(alpha) -> MobiStructure:
    alpha = _fraction(alpha, "alpha")
    if not alpha > 1:
        raise MobiError("interval-alpha needs alpha > 1")
    return _rational_mobi(f"interval-alpha({alpha})", "interval", "interval-alpha",
                          (Fraction(0), 1 / alpha, Fraction(1)), formula_params={"alpha": alpha})


def planar_k(K=1, mode: str = "region") -> MobiStructure:
    """Planar mobi with parameter K on the region (K >= 0) or the whole plane.

    Region membership is exact for rational points; boundary points with
    irrational sqrt(K) are never sampled.
    """
    K = _fraction(K, "K")
    consts = ((Fraction(0), Fraction(0)), (Fraction(1, 2), Fraction(0)), (Fraction(1), Fraction(0)))
    if mode == "region":
        if K < 0:
            raise MobiError("region mode needs K >= 0")
        return _rational_mobi(f"planar-K({K})", "planar-region", "planar", consts, {"K": K}, {"K": K})
    if mode == "plane":
        return _rational_mobi(f"planar-K({K},plane)", "plane", "planar", consts, formula_params={"K": K})
    raise MobiError(f"unknown planar mode {mode!r}")


def _ring_mobi(ring) -> MobiStructure:
    from .transforms import ring_to_mobi

    r = ring if isinstance(ring, Structure) else named_ring(str(ring))
    return ring_to_mobi(r, name=f"ring-generic({r.name})")


def _example_builders():
    half, zero, one = Fraction(1, 2), Fraction(0), Fraction(1)
    std = (zero, half, one)
    return {
        "interval": lambda: _rational_mobi("interval", "interval", "affine", std),
        "interval-third": lambda: _rational_mobi("interval-third", "interval", "interval-third",
                                                 (zero, Fraction(1, 3), one)),
        "interval-alpha": lambda alpha=3: interval_alpha(alpha),
        "symmetric-interval": lambda: _rational_mobi("symmetric-interval", "interval", "symmetric",
                                                     (Fraction(-1), zero, one), {"lo": Fraction(-1), "hi": one}),
        "reciprocal-interval": lambda: _rational_mobi("reciprocal-interval", "extended-interval", "reciprocal",
                                                      (INF, Fraction(2), one)),
        "three-element": three_element,
        "mod-odd": lambda n=2: mod_odd(int(n)),
        "dyadic": lambda: _rational_mobi("dyadic", "dyadic", "affine", std),
        "field-line": lambda: _rational_mobi("field-line", "rationals", "affine", std),
        "planar": lambda: planar_k(1, "region").with_name("planar"),
        "planar-K": lambda K=1, mode="region": planar_k(K, mode),
        "ring-generic": lambda ring="Z9": _ring_mobi(ring),
        "subset-closure": lambda ambient="Z5", generators=None, cap=DEFAULT_CLOSURE_CAP:
            closure_generate(ClosureTask(ambient, generators, int(cap))),
        "semiring-note": _semiring_note,
        "finite-general": lambda: ExampleStub(
            "finite-general", "half_inverse_by_bijection",
            "every finite mobi has an inverse of ½ given by h⁻¹(1) for h(x) = p(0,½,x); "
            "use mobi.transforms.half_inverse_by_bijection on a finite mobi"),
        "imm1": imm1,
        "imm2": imm2,
        "imm3": imm3,
        "section4-imm": three_element_imm,
    }


def _semiring_note():
    raise UnsupportedExample("semiring-note: semiring-based mobi constructions are not implemented")


EXAMPLE_IDS = tuple(_example_builders())

# the fixtures whose axiom profile is checked exhaustively
FINITE_EXAMPLES = ("three-element", "mod-odd", "ring-generic", "subset-closure",
                   "imm1", "imm2", "imm3", "section4-imm")


def make_example(id: str, **params):
    """Build a named example; parameters may be given as rational strings."""
    builders = _example_builders()
    if id not in builders:
        raise MobiError(f"unknown example {id!r}; known: {', '.join(EXAMPLE_IDS)}")
    try:
        return builders[id](**params)
    except TypeError as exc:
        raise MobiError(f"bad parameters for {id}: {exc}") from None


# --------------------------------------------------------------- closure


@dataclass(frozen=True)
class ClosureTask:
    ambient: object = "Z5"  # a ring, or a ring name understood by named_ring
    generators: tuple | None = None  # labels / rational strings; defaults to 0, 2⁻¹, 1
    cap: int = DEFAULT_CLOSURE_CAP


class ClosureCapExceeded(CapExceeded):
    def __init__(self, partial: list, certificate: dict, cap: int):
        self.partial = partial
        self.certificate = certificate
        super().__init__(f"closure did not stabilize within {cap} elements")


def _is_power_of_two(d: int) -> bool:
    return d > 0 and d & (d - 1) == 0


def closure_generate(task: ClosureTask) -> MobiStructure:
    """Least subset containing the generators and closed under p(x,y,z) = (1-y)x + yz."""
    from .transforms import ring_half

    r = task.ambient if isinstance(task.ambient, Structure) else named_ring(str(task.ambient))
    if r.kind != "ring":
        raise MobiError("closure needs an ambient ring")
    half = ring_half(r).inverse
    required = [r.zero, half, r.one]
    gens = list(required) if task.generators is None else [r.element(str(g)) for g in task.generators]
    for c in required:
        if c not in gens:
            raise MobiError(f"generators must contain 0, 2⁻¹ and 1 (missing {r.show(c)})")
    add, mul, neg = r.checked("add"), r.checked("mul"), r.checked("neg")

    def p(x, y, z):
        return add(x, add(mul(y, z), neg(mul(y, x))))

    members = []
    seen = set()
    for g in gens:
        key = int(g) if r.is_finite else g
        if key not in seen:
            seen.add(key)
            members.append(key)

    def overflow():
        cert = {}
        if not r.is_finite:
            cert = {"all_denominators_powers_of_two": all(_is_power_of_two(x.denominator) for x in members),
                    "max_denominator": max(x.denominator for x in members)}
        raise ClosureCapExceeded(list(members), cert, task.cap)

    frontier_start = 0
    while frontier_start < len(members):
        old, end = frontier_start, len(members)
        # triples using at least one element added in the previous round
        for i, j, k in itertools.product(range(end), repeat=3):
            if max(i, j, k) < old:
                continue
            v = p(members[i], members[j], members[k])
            key = int(v) if r.is_finite else v
            if key not in seen:
                seen.add(key)
                members.append(key)
                if len(members) > task.cap:
                    overflow()
        frontier_start = end
    return _sub_mobi(r, members, half)


def _sub_mobi(r, members, half) -> MobiStructure:
    if r.is_finite:
        members = sorted(members)
        pos = {m: i for i, m in enumerate(members)}
        labels = [r.carrier.labels[m] for m in members]
        add, mul, neg = r.table("add"), r.table("mul"), r.table("neg")
        arr = np.array(members)
        a, b, c = np.ix_(arr, arr, arr)
        full = add[a, add[mul[b, c], neg[mul[b, a]]]]
        table = np.vectorize(pos.__getitem__)(full)
        return MobiStructure(Carrier.finite(labels), OpImpl(3, table), pos[int(r.zero)], pos[int(half)],
                             pos[int(r.one)], f"closure({r.name})")
    members = sorted(members)
    pos = {m: i for i, m in enumerate(members)}
    labels = [str(m) for m in members]
    n = len(members)
    table = np.empty((n, n, n), dtype=np.int64)
    for i, j, k in itertools.product(range(n), repeat=3):
        x, y, z = members[i], members[j], members[k]
        table[i, j, k] = pos[(1 - y) * x + y * z]
    return MobiStructure(Carrier.finite(labels), OpImpl(3, table), pos[r.zero], pos[half], pos[r.one],
                         f"closure({r.name})")


# ------------------------------------------------------- planar matrices


def planar_matrix_embedding(K, point, k1=None, k2=None) -> tuple:
    """(x, y) -> [[x, k1 y], [k2 y, x]] with K = k1 k2 (default k1 = K, k2 = 1)."""
    K = _fraction(K, "K")
    k1 = K if k1 is None else _fraction(k1, "k1")
    k2 = Fraction(1) if k2 is None else _fraction(k2, "k2")
    if k1 * k2 != K:
        raise MobiError("k1 * k2 must equal K")
    x, y = (Fraction(c) for c in point)
    return ((x, k1 * y), (k2 * y, x))


def matrix_mul(a, b) -> tuple:
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def matrix_p(a, b, c) -> tuple:
    """(1 - b) a + b c in the 2x2 matrix ring."""
    eye = ((1, 0), (0, 1))
    one_minus_b = tuple(tuple(eye[i][j] - b[i][j] for j in range(2)) for i in range(2))
    left, right = matrix_mul(one_minus_b, a), matrix_mul(b, c)
    return tuple(tuple(left[i][j] + right[i][j] for j in range(2)) for i in range(2))
