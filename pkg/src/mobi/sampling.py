from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import INF, Carrier, MobiError
from .formulas import DOMAINS

DEFAULT_SEED = 20240229
MAX_REJECTIONS = 10_000


@dataclass(frozen=True)
class SampleSpec:
    """Deterministic sampling of rational tuples from a carrier.

    Each coordinate is drawn as ``num/den`` with ``1 <= den <= bound`` and the
    numerator uniform over the domain's bounding box, then rejected until it
    lies in the carrier. With probability ``constant_weight/16`` an element is
    replaced by one of the structure's constants so identities that only bite
    at special points still get exercised.
    """

    seed: int = DEFAULT_SEED
    count: int = 1000
    bound: int = 64
    constant_weight: int = 2

    def __post_init__(self):
        if self.count < 1:
            raise MobiError("sample count must be positive")
        if self.bound < 1:
            raise MobiError("denominator bound must be positive")

    def to_json(self) -> dict:
        return {"seed": self.seed, "count": self.count}

    @property
    def generator(self) -> str:
        return (f"PCG64(seed={self.seed}); coordinates num/den with den<=({self.bound}), "
                f"rejection into carrier; constants with weight {self.constant_weight}/16")


class Sampler:
    def __init__(self, carrier: Carrier, spec: SampleSpec, specials=(), stream: int = 0):
        if carrier.is_finite:
            raise MobiError("sampling is only defined for rational-domain carriers")
        self.carrier = carrier
        self.spec = spec
        self.domain = DOMAINS[carrier.domain]
        self.params = self.domain.full_params(carrier.param_dict)
        self.box = self.domain.box(self.params)
        self.specials = list(specials)
        self.rng = np.random.default_rng([spec.seed & (2**64 - 1), stream])
        if self.domain.denominators is not None:
            self.dens = self.domain.denominators(spec.bound)
        else:
            self.dens = None

    def _coordinate(self, lo: Fraction, hi: Fraction) -> Fraction:
        if self.dens is not None:
            den = int(self.dens[self.rng.integers(len(self.dens))])
        else:
            den = int(self.rng.integers(1, self.spec.bound + 1))
        low, high = math.ceil(lo * den), math.floor(hi * den)
        if high < low:
            return Fraction(low, den)
        return Fraction(int(self.rng.integers(low, high + 1)), den)

    def element(self):
        if self.specials and self.rng.integers(16) < self.spec.constant_weight:
            return self.specials[int(self.rng.integers(len(self.specials)))]
        if self.domain.infinity_weight and self.rng.integers(16) < self.domain.infinity_weight:
            return INF
        for _ in range(MAX_REJECTIONS):
            coords = tuple(self._coordinate(lo, hi) for lo, hi in self.box)
            if self.domain.name == "extended-interval":
                if coords[0] == 0:
                    continue
                x = self.params["lo"] / coords[0]
            else:
                x = coords[0] if self.domain.dimension == 1 else coords
            if self.carrier.contains(x):
                return x
        raise MobiError(f"could not sample a member of {self.carrier.domain}")

    def tuples(self, arity: int):
        for _ in range(self.spec.count):
            yield tuple(self.element() for _ in range(arity))


def sample_tuples(carrier: Carrier, spec: SampleSpec, arity: int, specials=(), stream: int = 0) -> list:
    """The deterministic tuple sequence for ``(seed, count, carrier, arity, stream)``."""
    return list(Sampler(carrier, spec, specials, stream=arity * 1000 + stream).tuples(arity))
