"""Finite model search: mobi enumeration, rings with a half, canonical forms, isomorphisms."""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .axioms import check_mobi, check_ring
from .core import (
    CapExceeded, Carrier, MobiError, MobiStructure, OpImpl, RingStructure, Structure,
)
from .sampling import SampleSpec, sample_tuples

DEFAULT_NODE_CAP = 10**7
CANONICAL_MAX_ORDER = 9
RING_MAX_ORDER = 9


class SearchCapExceeded(CapExceeded):
    pass


def node_cap_from_env(default: int = DEFAULT_NODE_CAP) -> int:
    raw = os.environ.get("MOBI_NODE_CAP")
    if not raw:
        return default
    try:
        cap = int(raw)
    except ValueError:
        raise MobiError(f"MOBI_NODE_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise MobiError("MOBI_NODE_CAP must be positive")
    return cap


@dataclass
class SearchStats:
    nodes: int = 0
    conflicts: int = 0
    solutions: int = 0

    def to_json(self) -> dict:
        return {"nodes": self.nodes, "pruned": self.conflicts, "solutions": self.solutions}


class _Conflict(Exception):
    pass


class TableSearch:
    """Backtracking over partial p tables with A1–A5 pinned and A6–A8 propagated.

    The table has one extra "undefined" value ``n`` at every coordinate, so a
    composite expression over a partial table is undefined as soon as any
    inner entry is. A7 and A8 are then propagated as equalities: both sides
    defined and different is a conflict; one side defined and the other side's
    arguments defined forces the missing entry. With ``use_a6`` each column of
    the ½-slice must be injective, and a column with one hole left is completed
    by pigeonhole.
    """

    def __init__(self, n: int, zero: int, half: int, one: int, *, allowed=None,
                 use_a6: bool = True, node_cap: int = DEFAULT_NODE_CAP, pins=None):
        self.n, self.zero, self.half, self.one = n, zero, half, one
        self.use_a6 = use_a6
        self.node_cap = node_cap
        self.stats = SearchStats()
        m = n + 1
        self.m = m
        self.size = m ** 3
        # allowed[address, value]; undefined-coordinate rows stay all-False
        allow = np.zeros((m, m, m, n), dtype=bool)
        allow[:n, :n, :n, :] = True if allowed is None else allowed
        self.allowed = allow.reshape(self.size, n)
        self._prepare_laws()
        self.initial = self._initial(pins or {})

    def addr(self, a, b, c):
        return (a * self.m + b) * self.m + c

    def _prepare_laws(self):
        n = self.n
        g = [x.ravel() for x in np.indices((n,) * 5, dtype=np.int64)]
        self.g5 = g
        self.half_cols = self.addr(np.arange(n)[:, None], self.half, np.arange(n)[None, :])  # [a, b]

    def _initial(self, pins):
        n, U = self.n, self.n
        t = np.full(self.size, U, dtype=np.int64)
        forced = {}

        def pin(a, b, c, v):
            key = self.addr(a, b, c)
            if forced.setdefault(key, v) != v:
                raise _Conflict
            forced[key] = v

        try:
            for a in range(n):
                pin(self.zero, a, self.one, a)  # A2
                for b in range(n):
                    pin(a, b, a, a)  # A3
                    pin(a, self.zero, b, a)  # A4
                    pin(a, self.one, b, b)  # A5
            pin(self.one, self.half, self.zero, self.half)  # A1
            for (a, b, c), v in pins.items():
                pin(a, b, c, v)
        except _Conflict:
            return None
        for key, v in forced.items():
            if not self.allowed[key, v]:
                return None
            t[key] = v
        try:
            return self._propagate(t)
        except _Conflict:
            return None

    # -- propagation

    def _equalities(self, t):
        a, b, c1, c2, c3 = self.g5
        H, addr = self.half, self.addr
        inner = t[addr(c1, c2, c3)]
        x, z = t[addr(a, c1, b)], t[addr(a, c3, b)]
        yield addr(a, inner, b), (inner,), addr(x, c2, z), (x, z)  # A7
        a1, b1, a2, b2, c = self.g5
        u, v = t[addr(a1, c, b1)], t[addr(a2, c, b2)]
        s, w = t[addr(a1, H, a2)], t[addr(b1, H, b2)]
        yield addr(u, H, v), (u, v), addr(s, c, w), (s, w)  # A8

    def _propagate(self, t):
        U = self.n
        while True:
            keys, vals = [], []
            for laddr, largs, raddr, rargs in self._equalities(t):
                left, right = t[laddr], t[raddr]
                ldef, rdef = left != U, right != U
                if np.any(ldef & rdef & (left != right)):
                    raise _Conflict
                lready = np.logical_and.reduce([x != U for x in largs])
                rready = np.logical_and.reduce([x != U for x in rargs])
                to_r = ldef & ~rdef & rready
                to_l = rdef & ~ldef & lready
                keys += [raddr[to_r], laddr[to_l]]
                vals += [left[to_r], right[to_l]]
            if self.use_a6:
                k, v = self._a6(t)
                keys.append(k)
                vals.append(v)
            keys = np.concatenate(keys)
            if keys.size == 0:
                return t
            vals = np.concatenate(vals)
            order = np.lexsort((vals, keys))
            keys, vals = keys[order], vals[order]
            same = keys[1:] == keys[:-1]
            if np.any(same & (vals[1:] != vals[:-1])):
                raise _Conflict
            if not np.all(self.allowed[keys, vals]):
                raise _Conflict
            t = t.copy()
            t[keys] = vals

    def _a6(self, t):
        U, n = self.n, self.n
        cols = t[self.half_cols]  # [a, b]
        keys, vals = [], []
        for b in range(n):
            col = cols[:, b]
            defined = col[col != U]
            if len(np.unique(defined)) != len(defined):
                raise _Conflict
            if len(defined) == n - 1:
                hole = int(np.flatnonzero(col == U)[0])
                missing = sorted(set(range(n)) - set(defined.tolist()))[0]
                keys.append(self.half_cols[hole, b])
                vals.append(missing)
        return np.asarray(keys, dtype=np.int64), np.asarray(vals, dtype=np.int64)

    # -- search

    def _real(self, t):
        n = self.n
        return t.reshape(self.m, self.m, self.m)[:n, :n, :n]

    def solutions(self):
        """Complete tables in lexicographic entry order, values in carrier order."""
        if self.initial is None:
            return
        stack = [self.initial]
        while stack:
            t = stack.pop()
            real = self._real(t)
            holes = np.flatnonzero(real.ravel() == self.n)
            if holes.size == 0:
                self.stats.solutions += 1
                yield real.copy()
                continue
            a, b, c = np.unravel_index(int(holes[0]), real.shape)
            key = self.addr(int(a), int(b), int(c))
            children = []
            for v in np.flatnonzero(self.allowed[key]):
                self.stats.nodes += 1
                if self.stats.nodes > self.node_cap:
                    raise SearchCapExceeded(f"search exceeded the node cap of {self.node_cap}")
                child = t.copy()
                child[key] = v
                try:
                    children.append(self._propagate(child))
                except _Conflict:
                    self.stats.conflicts += 1
            stack.extend(reversed(children))

    def first(self):
        return next(iter(self.solutions()), None)


# ------------------------------------------------------------ enumeration


@dataclass
class EnumerationTask:
    order: int
    signature: str = "mobi"  # "mobi" | "ring-with-half"
    up_to_iso: bool = False
    node_cap: int = DEFAULT_NODE_CAP

    def __post_init__(self):
        if self.order < 1:
            raise MobiError("order must be at least 1")
        if self.signature not in ("mobi", "ring-with-half"):
            raise MobiError(f"unknown signature {self.signature!r}")


@dataclass
class EnumerationResult:
    task: EnumerationTask
    structures: list
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def count(self) -> int:
        return len(self.structures)

    def summary(self) -> dict:
        return {"summary": True, "order": self.task.order, "signature": self.task.signature,
                "up_to_iso": self.task.up_to_iso, "count": self.count, **self.stats.to_json()}


def _constant_patterns(n: int):
    # (zero, half, one) positions, e0 = 0, e1 = ½, e2 = 1 when all three differ
    for zero, half, one in [(0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1), (0, 1, 2)]:
        if max(zero, half, one) < n:
            yield zero, half, one


def enumerate_mobi(order: int | EnumerationTask, up_to_iso: bool = False,
                   node_cap: int | None = None) -> EnumerationResult:
    """All mobi algebras on {e0, ..., e(n-1)} with designated constant positions."""
    task = order if isinstance(order, EnumerationTask) else EnumerationTask(
        order, "mobi", up_to_iso, node_cap or node_cap_from_env())
    n = task.order
    labels = [f"e{i}" for i in range(n)]
    carrier = Carrier.finite(labels)
    found, stats = [], SearchStats()
    for zero, half, one in _constant_patterns(n):
        search = TableSearch(n, zero, half, one, node_cap=task.node_cap - stats.nodes)
        for table in search.solutions():
            m = MobiStructure(carrier, OpImpl(3, table), zero, half, one, f"mobi-{n}-{len(found)}")
            if not check_mobi(m).passed:  # propagation is complete on full tables
                raise MobiError("search produced a table failing the mobi axioms")
            found.append(m)
        stats.nodes += search.stats.nodes
        stats.conflicts += search.stats.conflicts
    stats.solutions = len(found)
    if task.up_to_iso:
        found = dedupe(found)
    return EnumerationResult(task, found, stats)


def dedupe(structures) -> list:
    """One representative per isomorphism class, sorted by canonical form."""
    classes = {}
    for s in structures:
        classes.setdefault(canonical_form(s), s)
    return [classes[k] for k in sorted(classes)]


# --------------------------------------------------------- rings with ½


def invariant_factor_groups(n: int) -> list[tuple[int, ...]]:
    """Abelian groups of order n as invariant factor tuples d1 | d2 | ... with product n."""
    out = []

    def extend(rest, prefix):
        if rest == 1:
            out.append(tuple(prefix))
            return
        for d in range(2, rest + 1):
            if rest % d:
                continue
            if prefix and d % prefix[-1]:
                continue
            # every later factor is a multiple of d, so d^k must divide what is left
            extend(rest // d, prefix + [d])

    if n == 1:
        return [()]
    extend(n, [])
    return sorted(out)


def _group_elements(moduli):
    return [tuple(x) for x in itertools.product(*[range(d) for d in moduli])]


def enumerate_rings_with_half(order: int, up_to_iso: bool = True,
                              node_cap: int | None = None) -> EnumerationResult:
    """Unitary rings of the given order in which 1+1 is a unit.

    Additive groups come from the invariant factor classification; a
    multiplication is fixed by the products of the cyclic generators, each
    constrained to have additive order dividing both generator orders, and is
    kept when it is associative, has a two-sided identity and 1+1 is invertible.
    """
    task = EnumerationTask(order, "ring-with-half", up_to_iso, node_cap or node_cap_from_env())
    if order > RING_MAX_ORDER:
        raise SearchCapExceeded(f"ring enumeration is limited to order {RING_MAX_ORDER}")
    stats = SearchStats()
    found = []
    for moduli in invariant_factor_groups(order):
        if any(d % 2 == 0 for d in moduli):
            stats.conflicts += 1  # an element of order 2 makes 1+1 a zero divisor
            continue
        found += _rings_on_group(moduli, stats, task.node_cap)
    stats.solutions = len(found)
    if up_to_iso:
        found = dedupe(found)
    return EnumerationResult(task, found, stats)


def _rings_on_group(moduli, stats, cap):
    elems = _group_elements(moduli)
    n = len(elems)
    index = {e: i for i, e in enumerate(elems)}
    arr = np.array(elems, dtype=np.int64).reshape(n, len(moduli))
    mods = np.array(moduli, dtype=np.int64)
    add = np.array([[index[tuple((arr[i] + arr[j]) % mods)] for j in range(n)] for i in range(n)],
                   dtype=np.int64).reshape(n, n)
    neg = np.array([index[tuple((-arr[i]) % mods)] for i in range(n)], dtype=np.int64)
    zero = index[tuple([0] * len(moduli))]
    k = len(moduli)
    # admissible values of g_i * g_j: elements whose order divides gcd(d_i, d_j)
    choices = {}
    for i in range(k):
        for j in range(k):
            g = math.gcd(moduli[i], moduli[j])
            choices[i, j] = [e for e in range(n) if np.all((arr[e] * g) % mods == 0)]
    keys = sorted(choices)
    labels = [str(e[0]) if k == 1 else "(" + ",".join(map(str, e)) + ")" for e in elems] if k else ["0"]
    rings = []
    for values in itertools.product(*[choices[key] for key in keys]):
        stats.nodes += 1
        if stats.nodes > cap:
            raise SearchCapExceeded(f"ring search exceeded the node cap of {cap}")
        gen = dict(zip(keys, values))
        # x * y = sum_{i,j} x_i y_j (g_i g_j)
        mul = np.zeros((n, n, len(moduli)), dtype=np.int64)
        for (i, j), e in gen.items():
            mul += arr[:, None, i, None] * arr[None, :, j, None] * arr[e][None, None, :]
        mul = (mul % mods) if k else mul
        mul_t = np.array([[index[tuple(mul[x, y])] for y in range(n)] for x in range(n)], dtype=np.int64) \
            if k else np.zeros((1, 1), dtype=np.int64)
        if not _associative(mul_t):
            stats.conflicts += 1
            continue
        ones = [e for e in range(n) if np.array_equal(mul_t[e], np.arange(n)) and np.array_equal(mul_t[:, e], np.arange(n))]
        if not ones:
            stats.conflicts += 1
            continue
        one = ones[0]
        two = add[one, one]
        if not any(mul_t[two, x] == one and mul_t[x, two] == one for x in range(n)):
            stats.conflicts += 1
            continue
        r = RingStructure(Carrier.finite(labels), OpImpl(2, add), OpImpl(2, mul_t), OpImpl(1, neg),
                          zero, one, f"ring-{n}-{len(rings)}")
        if not check_ring(r).passed:
            raise MobiError("ring search produced a structure failing the ring axioms")
        rings.append(r)
    return rings


def _associative(mul) -> bool:
    n = mul.shape[0]
    x, y, z = np.indices((n, n, n))
    return bool(np.array_equal(mul[mul[x, y], z], mul[x, mul[y, z]]))


# ----------------------------------------------------------- isomorphism


def _constant_positions(s: Structure) -> list[int]:
    seen = []
    for role in sorted(s.constants):
        v = int(s.constants[role])
        if v not in seen:
            seen.append(v)
    return seen


def _apply_relabeling(s: Structure, sigma: np.ndarray) -> dict:
    """Tables of s transported along sigma (old position -> new position)."""
    inv = np.argsort(sigma)
    out = {}
    for name in sorted(s.ops):
        t = s.table(name)
        moved = t[np.ix_(*([inv] * t.ndim))]
        out[name] = sigma[moved]
    return out


def canonical_form(s: Structure) -> bytes:
    """Minimal serialization over all relabelings that send the constants to fixed leading slots."""
    if not s.is_finite:
        raise MobiError("canonical form needs a finite structure")
    n = s.size
    if n > CANONICAL_MAX_ORDER:
        raise SearchCapExceeded(f"canonical form sweep is limited to |A| <= {CANONICAL_MAX_ORDER}")
    fixed = _constant_positions(s)
    rest = [x for x in range(n) if x not in fixed]
    best = None
    for perm in itertools.permutations(rest):
        order = fixed + list(perm)  # new position i holds old element order[i]
        sigma = np.empty(n, dtype=np.int64)
        sigma[order] = np.arange(n)
        tables = _apply_relabeling(s, sigma)
        blob = b"".join(tables[k].astype(np.uint8).tobytes() for k in sorted(tables))
        if best is None or blob < best:
            best = blob
    roles = ",".join(f"{r}={fixed.index(int(s.constants[r]))}" for r in sorted(s.constants))
    header = f"{s.kind}|{n}|{roles}|".encode()
    return header + best


@dataclass(frozen=True)
class Bijection:
    domain: str
    codomain: str
    mapping: dict | None = None  # label -> label (finite)
    formula: OpImpl | None = None  # rational domains
    inverse: OpImpl | None = None
    checked: int = 0

    def __call__(self, s1: Structure, x):
        if self.mapping is not None:
            raise MobiError("apply finite bijections through their label mapping")
        return self.formula(x)

    def to_json(self) -> dict:
        out = {"domain": self.domain, "codomain": self.codomain, "checked": self.checked}
        if self.mapping is not None:
            out["mapping"] = dict(self.mapping)
        if self.formula is not None:
            from .interchange import _op_to_json

            out["map"] = _op_to_json(self.formula, None)
        return out


def _check_kinds(s1, s2):
    family = {"imm_star": "imm"}
    if family.get(s1.kind, s1.kind) != family.get(s2.kind, s2.kind):
        raise MobiError(f"cannot compare a {s1.kind} with a {s2.kind}")


def _homomorphic(s1, s2, phi: np.ndarray) -> bool:
    for role, c in s1.constants.items():
        if phi[c] != s2.constants[role]:
            return False
    for name in s1.ops:
        t1, t2 = s1.table(name), s2.table(name)
        if not np.array_equal(phi[t1], t2[np.ix_(*([phi] * t1.ndim))]):
            return False
    return True


def is_isomorphism(s1: Structure, s2: Structure, mapping: dict) -> bool:
    """Independent re-check of a finite label map: bijective, constant- and operation-preserving."""
    _check_kinds(s1, s2)
    if s1.size != s2.size or set(mapping) != set(s1.carrier.labels):
        return False
    phi = np.array([s2.carrier.index(mapping[lab]) for lab in s1.carrier.labels], dtype=np.int64)
    if len(set(phi.tolist())) != len(phi):
        return False
    for role, c in s1.constants.items():
        if phi[c] != s2.constants[role]:
            return False
    for name in s1.ops:
        arity = s1.ops[name].arity
        for args in itertools.product(range(s1.size), repeat=arity):
            if phi[s1.apply(name, *args)] != s2.apply(name, *[phi[a] for a in args]):
                return False
    return True


def find_isomorphism(s1: Structure, s2: Structure, candidate=None, inverse=None,
                     sample: SampleSpec | None = None) -> Bijection | None:
    """A structure-preserving bijection s1 -> s2, or None.

    Finite structures: permutation search over maps sending constants to
    constants (or a check of ``candidate``, a label -> label dict). Rational
    domains: ``candidate`` is a unary OpImpl certified on samples; an
    ``inverse`` OpImpl additionally certifies bijectivity.
    """
    _check_kinds(s1, s2)
    if s1.is_finite != s2.is_finite:
        return None
    if s1.is_finite:
        return _find_finite(s1, s2, candidate)
    if candidate is None:
        raise MobiError("rational-domain isomorphism needs a candidate map")
    return _certify(s1, s2, candidate, inverse, sample or s1.sampling or SampleSpec(count=500))


def _find_finite(s1, s2, candidate):
    n = s1.size
    if n != s2.size:
        return None
    if candidate is not None:
        mapping = {str(k): str(v) for k, v in candidate.items()}
        ok = is_isomorphism(s1, s2, mapping)
        return Bijection(s1.name, s2.name, mapping, checked=1) if ok else None
    pinned = {}
    for role, c in s1.constants.items():
        d = int(s2.constants[role])
        if pinned.setdefault(int(c), d) != d:
            return None
    if len(set(pinned.values())) != len(pinned):
        return None
    free_src = [x for x in range(n) if x not in pinned]
    free_dst = [x for x in range(n) if x not in set(pinned.values())]
    tried = 0
    for perm in itertools.permutations(free_dst):
        tried += 1
        phi = np.empty(n, dtype=np.int64)
        for a, b in pinned.items():
            phi[a] = b
        phi[free_src] = perm
        if _homomorphic(s1, s2, phi):
            mapping = {s1.carrier.labels[i]: s2.carrier.labels[int(phi[i])] for i in range(n)}
            return Bijection(s1.name, s2.name, mapping, checked=tried)
    return None


def _certify(s1, s2, phi: OpImpl, inverse: OpImpl | None, spec: SampleSpec):
    for role, c in s1.constants.items():
        if phi(c) != s2.constants[role]:
            return None
    checked = 0
    specials = list(s1.constants.values())
    for name in s1.ops:
        f1, f2 = s1.checked(name), s2.checked(name)
        for args in sample_tuples(s1.carrier, spec, s1.ops[name].arity, specials):
            images = [phi(a) for a in args]
            if not all(s2.carrier.contains(y) for y in images):
                return None
            if phi(f1(*args)) != f2(*images):
                return None
            checked += 1
    if inverse is not None:
        for (x,) in sample_tuples(s1.carrier, spec, 1, specials):
            if inverse(phi(x)) != x:
                return None
        for (y,) in sample_tuples(s2.carrier, spec, 1, list(s2.constants.values())):
            x = inverse(y)
            if not s1.carrier.contains(x) or phi(x) != y:
                return None
    return Bijection(s1.name, s2.name, None, phi, inverse, checked)


def mobius_map(a, b, c, d) -> OpImpl:
    """x -> (a x + b) / (c x + d) as a unary OpImpl."""
    return OpImpl(1, formula="mobius", params={k: Fraction(v) for k, v in zip("abcd", (a, b, c, d))})
