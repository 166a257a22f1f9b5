"""Structure representations shared by every other module.

Finite structures keep their elements as integer positions into the carrier's
label list and their operations as read-only numpy tables. Rational-domain
structures keep elements as exact values (``Fraction``, :data:`INF`, or pairs of
``Fraction``) and operations as named formulas from :mod:`mobi.formulas`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Mapping, Sequence

import numpy as np


class MobiError(Exception):
    """Base class for errors raised by this package."""


class ParseError(MobiError):
    pass


class ClosureError(MobiError):
    """A formula produced a value outside its carrier."""

    def __init__(self, op, args, value):
        self.op, self.args, self.value = op, args, value
        super().__init__(f"{op}{tuple(args)} = {value} lies outside the carrier")


class PreconditionError(MobiError):
    pass


class NoInverseError(PreconditionError):
    pass


class CapExceeded(MobiError):
    pass


class _Infinity:
    """The projective point 1/0, used only by the reciprocal interval."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def parse_rational(text: str):
    text = text.strip()
    if text == "1/0":
        return INF
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}") from exc


def format_rational(x) -> str:
    if x is INF:
        return "1/0"
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def format_element(x):
    """JSON-friendly form of a rational-domain element."""
    if isinstance(x, tuple):
        return [format_rational(c) for c in x]
    return format_rational(x)


def parse_element(raw, dimension: int = 1):
    if isinstance(raw, (list, tuple)):
        if len(raw) != dimension:
            raise ParseError(f"expected a {dimension}-component element, got {raw!r}")
        return tuple(parse_rational(str(c)) for c in raw)
    if dimension != 1:
        raise ParseError(f"expected a {dimension}-component element, got {raw!r}")
    if isinstance(raw, int):
        return Fraction(raw)
    return parse_rational(str(raw))


@dataclass(frozen=True)
class Carrier:
    kind: str  # "finite" | "rational"
    labels: tuple[str, ...] = ()
    domain: str | None = None
    params: tuple[tuple[str, Any], ...] = ()

    def __post_init__(self):
        if self.kind == "finite":
            if len(set(self.labels)) != len(self.labels):
                raise ParseError("carrier labels must be distinct")
            if not self.labels:
                raise ParseError("finite carrier must be nonempty")
        elif self.kind == "rational":
            from .formulas import DOMAINS

            if self.domain not in DOMAINS:
                raise ParseError(f"unknown rational domain {self.domain!r}")
            DOMAINS[self.domain].validate(self.param_dict)
        else:
            raise ParseError(f"unknown carrier kind {self.kind!r}")

    @classmethod
    def finite(cls, labels: Sequence[str]) -> "Carrier":
        return cls("finite", tuple(str(x) for x in labels))

    @classmethod
    def rational(cls, domain: str, **params) -> "Carrier":
        return cls("rational", (), domain, tuple(sorted(params.items())))

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def size(self) -> int:
        if not self.is_finite:
            raise MobiError("rational-domain carriers have no finite size")
        return len(self.labels)

    @property
    def param_dict(self) -> dict:
        return dict(self.params)

    @property
    def dimension(self) -> int:
        if self.is_finite:
            return 1
        from .formulas import DOMAINS

        return DOMAINS[self.domain].dimension

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ParseError(f"unknown label {label!r}") from None

    def contains(self, x) -> bool:
        if self.is_finite:
            return isinstance(x, (int, np.integer)) and 0 <= x < len(self.labels)
        from .formulas import DOMAINS

        return DOMAINS[self.domain].member(self.param_dict, x)

    def show(self, x):
        """Render an element for reports: its label, or a rational string."""
        if self.is_finite:
            return self.labels[int(x)]
        return format_element(x)


class OpImpl:
    """A finite lookup table or a named exact formula."""

    __slots__ = ("arity", "table", "formula", "params", "_fn")

    def __init__(self, arity: int, table=None, formula: str | None = None,
                 params: Mapping[str, Any] | None = None):
        self.arity = arity
        self.formula = formula
        self.params = dict(params or {})
        if table is not None:
            table = np.array(table, dtype=np.int64)
            if table.ndim != arity or len(set(table.shape)) > 1:
                raise ParseError(f"table shape {table.shape} does not fit arity {arity}")
            table.setflags(write=False)
            self.table = table
            self._fn = table.__getitem__
        elif formula is not None:
            from .formulas import FORMULAS

            if formula not in FORMULAS:
                raise ParseError(f"unknown formula {formula!r}")
            spec = FORMULAS[formula]
            if spec.arity != arity:
                raise ParseError(f"formula {formula} has arity {spec.arity}, not {arity}")
            self.table = None
            fn, params_ = spec.fn, self.params
            self._fn = lambda args: fn(params_, *args)
        else:
            raise ParseError("an operation needs a table or a formula")

    @property
    def kind(self) -> str:
        return "table" if self.table is not None else "formula"

    def __call__(self, *args):
        return self._fn(args)

    def __eq__(self, other):
        if not isinstance(other, OpImpl) or other.arity != self.arity:
            return NotImplemented
        if self.table is not None:
            return other.table is not None and np.array_equal(self.table, other.table)
        return other.formula == self.formula and other.params == self.params

    def __hash__(self):
        if self.table is not None:
            return hash((self.arity, self.table.tobytes()))
        return hash((self.arity, self.formula))

    def __repr__(self):
        if self.table is not None:
            return f"OpImpl(table, n={self.table.shape[0]}, arity={self.arity})"
        return f"OpImpl({self.formula}, {self.params})"


SIGNATURES: dict[str, tuple[dict[str, int], tuple[str, ...]]] = {
    "mobi": ({"p": 3}, ("zero", "half", "one")),
    "imm": ({"inv": 1, "oplus": 2, "dot": 2}, ("one",)),
    "imm_star": ({"inv": 1, "oplus": 2, "dot": 2}, ("one",)),
    "ring": ({"add": 2, "mul": 2, "neg": 1}, ("zero", "one")),
}


@dataclass(frozen=True, eq=False)
class Structure:
    kind: str
    carrier: Carrier
    ops: Mapping[str, OpImpl]
    constants: Mapping[str, Any]
    name: str = ""
    sampling: Any = None  # SampleSpec for rational-domain structures

    def __post_init__(self):
        if self.kind not in SIGNATURES:
            raise ParseError(f"unknown structure kind {self.kind!r}")
        op_arity, const_names = SIGNATURES[self.kind]
        if set(self.ops) != set(op_arity):
            raise ParseError(f"{self.kind} needs operations {sorted(op_arity)}, got {sorted(self.ops)}")
        for op_name, arity in op_arity.items():
            if self.ops[op_name].arity != arity:
                raise ParseError(f"operation {op_name} must have arity {arity}")
        if set(self.constants) != set(const_names):
            raise ParseError(f"{self.kind} needs constants {list(const_names)}, got {sorted(self.constants)}")
        for role, value in self.constants.items():
            if not self.carrier.contains(value):
                raise ParseError(f"constant {role} = {value!r} is not in the carrier")
        if self.carrier.is_finite:
            n = self.carrier.size
            object.__setattr__(self, "constants", {k: int(v) for k, v in self.constants.items()})
            for op_name, op in self.ops.items():
                if op.table is None:
                    raise ParseError(f"finite structures need table-backed ops ({op_name})")
                if op.table.shape != (n,) * op.arity:
                    raise ParseError(f"table {op_name} has shape {op.table.shape}, expected {(n,) * op.arity}")
                if op.table.size and (op.table.min() < 0 or op.table.max() >= n):
                    raise ParseError(f"table {op_name} has entries outside the carrier")
        else:
            for op_name, op in self.ops.items():
                if op.formula is None:
                    raise ParseError(f"rational-domain structures need formula ops ({op_name})")
        if self.kind == "ring" and self.carrier.is_finite and self.carrier.size > 1:
            if self.constants["zero"] == self.constants["one"]:
                raise ParseError("ring with more than one element needs zero != one")

    # -- access --------------------------------------------------------
    def __getattr__(self, item):
        # constants and operations by role name: s.p, s.half, s.dot ...
        if item.startswith("_"):
            raise AttributeError(item)
        ops = object.__getattribute__(self, "ops")
        if item in ops:
            return ops[item]
        consts = object.__getattribute__(self, "constants")
        if item in consts:
            return consts[item]
        raise AttributeError(item)

    @property
    def is_finite(self) -> bool:
        return self.carrier.is_finite

    @property
    def size(self) -> int:
        return self.carrier.size

    @property
    def elements(self):
        if not self.is_finite:
            raise MobiError("only finite structures can list their elements")
        return range(self.carrier.size)

    def apply(self, op: str, *args):
        """Evaluate ``op`` on internal elements, checking arity, membership and closure."""
        impl = self.ops[op]
        if len(args) != impl.arity:
            raise MobiError(f"{op} takes {impl.arity} arguments, got {len(args)}")
        for x in args:
            if not self.carrier.contains(x):
                raise MobiError(f"argument {x!r} is not in the carrier")
        try:
            value = impl(*args)
        except ZeroDivisionError:
            raise ClosureError(op, args, "undefined") from None
        if self.is_finite:
            return int(value)
        if not self.carrier.contains(value):
            raise ClosureError(op, args, value)
        return value

    def checked(self, op: str) -> Callable:
        """A fast evaluator: raw table lookup for finite carriers, closure-checked formula otherwise."""
        impl = self.ops[op]
        if self.is_finite:
            return impl
        carrier = self.carrier

        def fn(*args):
            try:
                value = impl(*args)
            except ZeroDivisionError:
                raise ClosureError(op, args, "undefined") from None
            if not carrier.contains(value):
                raise ClosureError(op, args, value)
            return value

        return fn

    def element(self, raw):
        """Map a user-facing label or rational string to an internal element."""
        if self.is_finite:
            return self.carrier.index(str(raw))
        x = raw if not isinstance(raw, (str, list)) else parse_element(raw, self.carrier.dimension)
        if not self.carrier.contains(x):
            raise MobiError(f"{raw!r} is not in the carrier")
        return x

    def show(self, x):
        return self.carrier.show(x)

    def table(self, op: str) -> np.ndarray:
        return self.ops[op].table

    def with_name(self, name: str) -> "Structure":
        return make_structure(self.kind, self.carrier, self.ops, self.constants, name, self.sampling)

    def same_as(self, other: "Structure") -> bool:
        """Table-for-table equality of finite structures (labels included)."""
        if SIGNATURES[self.kind] != SIGNATURES[other.kind]:
            return False
        return (self.carrier == other.carrier
                and dict(self.constants) == dict(other.constants)
                and all(self.ops[k] == other.ops[k] for k in self.ops))

    def __repr__(self):
        size = self.carrier.size if self.is_finite else self.carrier.domain
        return f"{type(self).__name__}({self.name or '?'}, {size})"


class MobiStructure(Structure):
    def __init__(self, carrier, p, zero, half, one, name="", sampling=None):
        super().__init__("mobi", carrier, {"p": p}, {"zero": zero, "half": half, "one": one}, name, sampling)

    @classmethod
    def _rebuild(cls, kind, carrier, ops, constants, name, sampling):
        return cls(carrier, ops["p"], constants["zero"], constants["half"], constants["one"], name, sampling)


class IMMStructure(Structure):
    def __init__(self, carrier, inv, oplus, dot, one, name="", sampling=None, kind="imm"):
        super().__init__(kind, carrier, {"inv": inv, "oplus": oplus, "dot": dot}, {"one": one}, name, sampling)

    @classmethod
    def _rebuild(cls, kind, carrier, ops, constants, name, sampling):
        return cls(carrier, ops["inv"], ops["oplus"], ops["dot"], constants["one"], name, sampling, kind)

    @property
    def one_bar(self):
        return self.apply("inv", self.one)

    @property
    def half(self):
        """The derived constant 1̄⊕1."""
        return self.apply("oplus", self.one_bar, self.one)


class RingStructure(Structure):
    def __init__(self, carrier, add, mul, neg, zero, one, name="", sampling=None):
        super().__init__("ring", carrier, {"add": add, "mul": mul, "neg": neg},
                         {"zero": zero, "one": one}, name, sampling)

    @classmethod
    def _rebuild(cls, kind, carrier, ops, constants, name, sampling):
        return cls(carrier, ops["add"], ops["mul"], ops["neg"], constants["zero"], constants["one"], name, sampling)


STRUCTURE_CLASSES = {"mobi": MobiStructure, "imm": IMMStructure, "imm_star": IMMStructure, "ring": RingStructure}


def make_structure(kind, carrier, ops, constants, name="", sampling=None) -> Structure:
    return STRUCTURE_CLASSES[kind]._rebuild(kind, carrier, ops, constants, name, sampling)


def relabel(s: Structure, labels: Sequence[str]) -> Structure:
    """Same tables, new label text."""
    return make_structure(s.kind, Carrier.finite(labels), s.ops, s.constants, s.name, s.sampling)


def evaluate(s: Structure, op: str, args: Sequence):
    """Evaluate ``op`` at user-facing arguments (labels or rationals) and return the same form."""
    internal = [s.element(a) for a in args]
    value = s.apply(op, *internal)
    if s.is_finite:
        return s.carrier.labels[value]
    return value


def finite_from_labels(kind: str, labels: Sequence[str], tables: Mapping[str, Any],
                       constants: Mapping[str, str], name: str = "") -> Structure:
    """Build a finite structure from tables written with labels (nested lists) or positions (arrays)."""
    carrier = Carrier.finite(labels)
    index = {lab: i for i, lab in enumerate(carrier.labels)}
    op_arity = SIGNATURES[kind][0]
    ops = {}
    for op_name, raw in tables.items():
        if op_name not in op_arity:
            raise ParseError(f"{kind} has no operation {op_name!r}")
        if isinstance(raw, np.ndarray):
            arr = raw
        else:
            arr = _labels_to_positions(raw, index)
        ops[op_name] = OpImpl(op_arity[op_name], arr)
    consts = {}
    for role, lab in constants.items():
        if isinstance(lab, (int, np.integer)) and not isinstance(lab, bool):
            consts[role] = int(lab)
        elif str(lab) in index:
            consts[role] = index[str(lab)]
        else:
            raise ParseError(f"constant {role} = {lab!r} is not in the carrier")
    return make_structure(kind, carrier, ops, consts, name)


def _labels_to_positions(raw, index):
    if isinstance(raw, (list, tuple)):
        return [_labels_to_positions(x, index) for x in raw]
    try:
        return index[str(raw)]
    except KeyError:
        raise ParseError(f"unknown label {raw!r} in table") from None


def tabulate(fn: Callable, n: int, arity: int) -> np.ndarray:
    """Materialize ``fn`` over positions 0..n-1 (fn must accept numpy index grids)."""
    grids = np.indices((n,) * arity, dtype=np.int64)
    out = np.asarray(fn(*grids), dtype=np.int64)
    return np.broadcast_to(out, (n,) * arity).copy()
