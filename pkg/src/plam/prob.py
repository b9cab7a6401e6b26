"""Exact dyadic rationals and finitely supported subprobability distributions.

Every probability the calculus produces is of the form k/2^e, so arithmetic
is kept in that form throughout; nothing in this module rounds.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, Tuple


class Dyadic:
    """A non-negative dyadic rational num/2^exp in canonical lowest form.

    Canonical means the numerator is odd, or the value is zero with exp 0.
    """

    __slots__ = ("num", "exp")

    def __init__(self, num: int, exp: int = 0):
        if num < 0:
            raise ValueError("dyadic value must be non-negative")
        if exp < 0:
            raise ValueError("dyadic exponent must be non-negative")
        if num == 0:
            exp = 0
        else:
            while num % 2 == 0 and exp > 0:
                num //= 2
                exp -= 1
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic is immutable")

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        """Parse "3/8" or "1" into a Dyadic; the denominator must be 2^e."""
        text = text.strip()
        if "/" in text:
            num_s, den_s = text.split("/", 1)
            num, den = int(num_s), int(den_s)
        else:
            num, den = int(text), 1
        if den <= 0 or den & (den - 1):
            raise ValueError(f"denominator of {text!r} is not a power of two")
        return cls(num, den.bit_length() - 1)

    @classmethod
    def from_fraction(cls, q: Fraction) -> "Dyadic":
        den = q.denominator
        if den & (den - 1):
            raise ValueError(f"{q} is not dyadic")
        return cls(q.numerator, den.bit_length() - 1)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    def __add__(self, other: "Dyadic") -> "Dyadic":
        e = max(self.exp, other.exp)
        return Dyadic((self.num << (e - self.exp)) + (other.num << (e - other.exp)), e)

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        e = max(self.exp, other.exp)
        num = (self.num << (e - self.exp)) - (other.num << (e - other.exp))
        return Dyadic(num, e)

    def __mul__(self, other: "Dyadic") -> "Dyadic":
        return Dyadic(self.num * other.num, self.exp + other.exp)

    def _cmp(self, other: "Dyadic") -> int:
        a = self.num << other.exp
        b = other.num << self.exp
        return (a > b) - (a < b)

    def __eq__(self, other) -> bool:
        return isinstance(other, Dyadic) and self.num == other.num and self.exp == other.exp

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0

    def __hash__(self) -> int:
        return hash((self.num, self.exp))

    def __bool__(self) -> bool:
        return self.num != 0

    def __str__(self) -> str:
        if self.exp == 0:
            return str(self.num)
        return f"{self.num}/{1 << self.exp}"

    def __repr__(self) -> str:
        return f"Dyadic({self})"


ZERO = Dyadic(0)
HALF = Dyadic(1, 1)
ONE = Dyadic(1)


class Distr:
    """A finite subprobability distribution over terms, weights exactly dyadic.

    Keys are nameless terms, so key identity is alpha-equivalence. Immutable;
    all operations build fresh distributions.
    """

    __slots__ = ("_weights", "_mass", "_hash")

    def __init__(self, pairs: Iterable[Tuple[object, Dyadic]] = ()):
        weights: Dict[object, Dyadic] = {}
        for term, w in pairs:
            if not w:
                continue
            prev = weights.get(term)
            weights[term] = prev + w if prev is not None else w
        mass = ZERO
        for w in weights.values():
            mass = mass + w
        if mass > ONE:
            raise ValueError(f"distribution mass {mass} exceeds 1")
        object.__setattr__(self, "_weights", weights)
        object.__setattr__(self, "_mass", mass)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Distr is immutable")

    @property
    def mass(self) -> Dyadic:
        return self._mass

    @property
    def deficit(self) -> Dyadic:
        return ONE - self._mass

    def weight(self, term) -> Dyadic:
        return self._weights.get(term, ZERO)

    def support(self):
        return self._weights.keys()

    def items(self) -> Iterator[Tuple[object, Dyadic]]:
        return iter(self._weights.items())

    def __len__(self) -> int:
        return len(self._weights)

    def __contains__(self, term) -> bool:
        return term in self._weights

    def __bool__(self) -> bool:
        return bool(self._weights)

    def scale(self, q: Dyadic) -> "Distr":
        if q > ONE:
            raise ValueError("scale factor exceeds 1")
        return Distr((t, w * q) for t, w in self._weights.items())

    def __add__(self, other: "Distr") -> "Distr":
        pairs = list(self._weights.items()) + list(other._weights.items())
        return Distr(pairs)

    def leq(self, other: "Distr") -> bool:
        """Pointwise order: every weight of self is covered by other."""
        return all(w <= other.weight(t) for t, w in self._weights.items())

    def map_support(self, fn: Callable) -> "Distr":
        return Distr((fn(t), w) for t, w in self._weights.items())

    def restrict(self, predicate: Callable[[object], bool]) -> Dyadic:
        total = ZERO
        for t, w in self._weights.items():
            if predicate(t):
                total = total + w
        return total

    def __eq__(self, other) -> bool:
        return isinstance(other, Distr) and self._weights == other._weights

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(frozenset(self._weights.items()))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        inner = ", ".join(f"{t!r}: {w}" for t, w in self._weights.items())
        return "Distr({" + inner + "})"


BOT = Distr()


def point(term) -> Distr:
    return Distr([(term, ONE)])
