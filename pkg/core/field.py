"""Exact scalar fields: the rationals or a prime field, backed by sympy domains."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Optional

from sympy import isprime
from sympy.polys.domains import GF, QQ

from .errors import StructuralError


@dataclass(frozen=True)
class Field:
    kind: str  # "q" or "fp"
    p: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind == "q":
            if self.p is not None:
                raise StructuralError("the rational field takes no modulus")
        elif self.kind == "fp":
            if self.p is None or not isprime(self.p):
                raise StructuralError(f"modulus {self.p!r} is not prime")
        else:
            raise StructuralError(f"unknown field kind {self.kind!r}")

    @classmethod
    def from_spec(cls, spec: str) -> "Field":
        """Parse ``"q"`` or ``"fp:P"``."""
        spec = spec.strip().lower()
        if spec in ("q", "qq"):
            return cls("q")
        if spec.startswith("fp:"):
            try:
                return cls("fp", int(spec[3:]))
            except ValueError:
                raise StructuralError(f"bad field declaration {spec!r}") from None
        raise StructuralError(f"bad field declaration {spec!r}")

    @property
    def spec(self) -> str:
        return "q" if self.kind == "q" else f"fp:{self.p}"

    @property
    def domain(self):
        return _domain(self.kind, self.p)

    @property
    def zero(self):
        return self.domain.zero

    @property
    def one(self):
        return self.domain.one

    def __call__(self, value: Any):
        K = self.domain
        if isinstance(value, Fraction):
            return K(value.numerator) / K(value.denominator)
        if isinstance(value, int):
            return K(value)
        if isinstance(value, str):
            return self.parse(value)
        return K.convert(value)

    def parse(self, text: str):
        """Read ``"a/b"``, ``"a"`` or ``"r mod p"``."""
        text = text.strip()
        if " mod " in text:
            residue, _, modulus = text.partition(" mod ")
            if self.kind != "fp" or int(modulus) != self.p:
                raise StructuralError(f"scalar {text!r} does not belong to {self.spec}")
            return self.domain(int(residue))
        try:
            frac = Fraction(text)
        except ValueError:
            raise StructuralError(f"bad scalar {text!r}") from None
        if self.kind == "fp" and frac.denominator % self.p == 0:
            raise StructuralError(f"scalar {text!r} has a denominator divisible by {self.p}")
        return self(frac)

    def residue(self, x) -> int:
        return int(self.domain.to_int(x)) % self.p

    def format(self, x) -> str:
        K = self.domain
        if self.kind == "fp":
            return f"{self.residue(x)} mod {self.p}"
        num, den = int(K.numer(x)), int(K.denom(x))
        return str(num) if den == 1 else f"{num}/{den}"

    def random(self, rng, nonzero: bool = False):
        """Small random element; rationals stay in a narrow range to keep entries readable."""
        while True:
            if self.kind == "fp":
                x = self.domain(rng.randrange(self.p))
            else:
                x = self.domain(rng.randint(-3, 3)) / self.domain(rng.choice((1, 1, 1, 2, 3)))
            if not nonzero or x != self.zero:
                return x

    def __str__(self) -> str:
        return "QQ" if self.kind == "q" else f"GF({self.p})"


@lru_cache(maxsize=None)
def _domain(kind: str, p: Optional[int]):
    return QQ if kind == "q" else GF(p)


QQ_FIELD = Field("q")
