"""Registry of exact formulas and rational carrier domains.

Every formula takes ``(params, *args)`` and returns an exact value. Elements of
one-dimensional domains are ``Fraction`` (or :data:`~mobi.core.INF`); elements
of planar domains are ``(Fraction, Fraction)`` pairs.

Composite formulas (``mobi-dot``, ``ring-mobi-p`` ...) hold other ``OpImpl``
objects in their params; they are what the conversions in
:mod:`mobi.transforms` produce for rational-domain inputs.

Reciprocal interval and the point at infinity
---------------------------------------------
The ``reciprocal`` formula ``abc / (a - c + bc)`` lives on ``[1, +inf]`` whose
``0`` constant is ``+inf``. The expression is undefined as written when an
argument is infinite, so we evaluate those cases by their limits, which are
the values the same formula takes in reciprocal coordinates ``u = 1/a``
(where infinity is ``u = 0``)::

    p(inf, b, c)   = b*c
    p(a, inf, c)   = a
    p(a, b, inf)   = a*b/(b - 1),  and inf when b = 1
    p(inf, b, inf) = inf

This is a modelling choice: pointwise evaluation at infinity is not defined by
the displayed formula.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from .core import INF, ParseError

ONE = Fraction(1)
ZERO = Fraction(0)
HALF = Fraction(1, 2)


# ---------------------------------------------------------------- domains


@dataclass(frozen=True)
class Domain:
    name: str
    dimension: int
    member: Callable[[dict, Any], bool]
    # bounding box of each coordinate used for rejection sampling
    box: Callable[[dict], tuple]
    defaults: dict
    validate_params: Callable[[dict], None] = lambda params: None
    # denominators to draw from; None means 1..bound
    denominators: Callable[[int], list] | None = None
    infinity_weight: int = 0  # out of 16

    def validate(self, params: dict):
        unknown = set(params) - set(self.defaults)
        if unknown:
            raise ParseError(f"domain {self.name} has no parameters {sorted(unknown)}")
        self.validate_params({**self.defaults, **params})

    def full_params(self, params: dict) -> dict:
        return {**self.defaults, **params}


def _is_rational(x) -> bool:
    return isinstance(x, Fraction) or (isinstance(x, int) and not isinstance(x, bool))


def _interval_member(params, x):
    params = {"lo": ZERO, "hi": ONE, **params}
    return _is_rational(x) and params["lo"] <= x <= params["hi"]


def _interval_validate(params):
    if not params["lo"] <= params["hi"]:
        raise ParseError("interval needs lo <= hi")


def _dyadic_member(params, x):
    if not (_is_rational(x) and 0 <= x <= 1):
        return False
    d = Fraction(x).denominator
    return d & (d - 1) == 0


def _extended_member(params, x):
    lo = params.get("lo", ONE)
    return x is INF or (_is_rational(x) and x >= lo)


def _region_member(params, x):
    # sqrt(K)|y| <= x <= 1 - sqrt(K)|y|, squared so sqrt(K) is never formed
    if not (isinstance(x, tuple) and len(x) == 2 and all(_is_rational(c) for c in x)):
        return False
    k = params.get("K", ONE)
    u, v = x
    right = 1 - u
    return u >= 0 and right >= 0 and k * v * v <= u * u and k * v * v <= right * right


def _region_validate(params):
    if params["K"] < 0:
        raise ParseError("planar region needs K >= 0")


def _plane_member(params, x):
    return isinstance(x, tuple) and len(x) == 2 and all(_is_rational(c) for c in x)


def _region_box(params):
    k = params["K"]
    if k == 0:
        return ((ZERO, ONE), (Fraction(-4), Fraction(4)))
    # |y| <= 1/(2 sqrt K) <= max(1/2, 1/(2K)) keeps the box rational
    half_width = max(HALF, 1 / (2 * k))
    return ((ZERO, ONE), (-half_width, half_width))


DOMAINS: dict[str, Domain] = {
    "interval": Domain("interval", 1, _interval_member,
                       lambda p: ((p["lo"], p["hi"]),), {"lo": ZERO, "hi": ONE}, _interval_validate),
    "rationals": Domain("rationals", 1, lambda p, x: _is_rational(x),
                        lambda p: ((Fraction(-4), Fraction(4)),), {}),
    "dyadic": Domain("dyadic", 1, _dyadic_member, lambda p: ((ZERO, ONE),), {},
                     denominators=lambda bound: [1 << k for k in range(bound.bit_length()) if 1 << k <= bound]),
    "extended-interval": Domain("extended-interval", 1, _extended_member,
                                lambda p: ((ZERO, ONE),), {"lo": ONE}, infinity_weight=1),
    "planar-region": Domain("planar-region", 2, _region_member, _region_box, {"K": ONE}, _region_validate),
    "plane": Domain("plane", 2, _plane_member,
                    lambda p: ((Fraction(-4), Fraction(4)), (Fraction(-4), Fraction(4))), {}),
}


# --------------------------------------------------------------- formulas


@dataclass(frozen=True)
class Formula:
    name: str
    arity: int
    fn: Callable


FORMULAS: dict[str, Formula] = {}


def formula(name: str, arity: int):
    def register(fn):
        FORMULAS[name] = Formula(name, arity, fn)
        return fn

    return register


@formula("affine", 3)
def affine(params, a, b, c):
    return (1 - b) * a + b * c


@formula("interval-third", 3)
def interval_third(params, a, b, c):
    num = a - a * b + a * c + 2 * b * c + a * b * c
    den = 1 + b + c + 2 * a * b - b * c
    return num / den


@formula("interval-alpha", 3)
def interval_alpha(params, a, b, c):
    al = params["alpha"]
    num = a - a * b + (al - 2) * a * c + (al - 1) * b * c + (al - 2) ** 2 * a * b * c
    den = 1 + (al - 2) * (b + c - b * c) + (al - 1) * (al - 2) * a * b
    return num / den


@formula("symmetric", 3)
def symmetric(params, a, b, c):
    return (a * (1 - b) + c * (1 + b)) / 2


@formula("reciprocal", 3)
def reciprocal(params, a, b, c):
    if b is INF:
        return a
    if a is INF and c is INF:
        return INF
    if a is INF:
        return b * c
    if c is INF:
        return INF if b == 1 else a * b / (b - 1)
    return a * b * c / (a - c + b * c)


@formula("planar", 3)
def planar(params, a, b, c):
    k = params["K"]
    a1, a2 = a
    b1, b2 = b
    c1, c2 = c
    return ((1 - b1) * a1 + b1 * c1 + k * b2 * (c2 - a2),
            (1 - b1) * a2 + b1 * c2 + b2 * (c1 - a1))


@formula("planar-dot", 2)
def planar_dot(params, a, b):
    k = params["K"]
    return (a[0] * b[0] + k * a[1] * b[1], a[0] * b[1] + a[1] * b[0])


@formula("rational-add", 2)
def rational_add(params, a, b):
    return a + b


@formula("rational-mul", 2)
def rational_mul(params, a, b):
    return a * b


@formula("rational-neg", 1)
def rational_neg(params, a):
    return -a


# composites: params hold OpImpl objects and element constants


@formula("mobi-inv", 1)
def mobi_inv(params, a):
    return params["p"](params["one"], a, params["zero"])


@formula("mobi-dot", 2)
def mobi_dot(params, a, b):
    return params["p"](params["zero"], a, b)


@formula("mobi-oplus", 2)
def mobi_oplus(params, a, b):
    return params["p"](a, params["half"], b)


@formula("mobi-circ", 2)
def mobi_circ(params, a, b):
    return params["p"](a, b, params["one"])


@formula("imm-circ", 2)
def imm_circ(params, a, b):
    inv, dot = params["inv"], params["dot"]
    return inv(dot(inv(b), inv(a)))


@formula("imm-ring-add", 2)
def imm_ring_add(params, a, b):
    return params["dot"](params["two"], params["oplus"](a, b))


@formula("imm-ring-neg", 1)
def imm_ring_neg(params, a):
    return params["dot"](params["inv"](params["two"]), a)


@formula("ring-imm-inv", 1)
def ring_imm_inv(params, a):
    return params["add"](params["one"], params["neg"](a))


@formula("ring-imm-oplus", 2)
def ring_imm_oplus(params, a, b):
    return params["mul"](params["half"], params["add"](a, b))


@formula("ring-mobi-p", 3)
def ring_mobi_p(params, a, b, c):
    add, mul, neg = params["add"], params["mul"], params["neg"]
    return add(a, add(mul(b, c), neg(mul(b, a))))


@formula("imm-mobi-p", 3)
def imm_mobi_p(params, a, b, c):
    inv, oplus, dot = params["inv"], params["oplus"], params["dot"]
    return dot(params["two"], oplus(dot(inv(b), a), dot(b, c)))


@formula("mobi-ring-add", 2)
def mobi_ring_add(params, a, b):
    p, zero = params["p"], params["zero"]
    return p(zero, params["two"], p(a, params["half"], b))


@formula("mobi-ring-neg", 1)
def mobi_ring_neg(params, a):
    p, zero = params["p"], params["zero"]
    two_bar = p(params["one"], params["two"], zero)
    return p(zero, two_bar, a)


@formula("mobius", 1)
def mobius(params, x):
    """x -> (a x + b) / (c x + d) on the projective line; c x + d = 0 maps to INF."""
    a, b, c, d = params["a"], params["b"], params["c"], params["d"]
    if x is INF:
        return INF if c == 0 else a / c
    den = c * x + d
    if den == 0:
        return INF
    return (a * x + b) / den
