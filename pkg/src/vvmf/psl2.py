"""Exact arithmetic in PSL(2,Z) and its action on cusps and the upper half plane.

Elements are integer matrices of determinant one, stored as the canonical
representative of the +/-I quotient: c > 0, or c = 0 and d > 0.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class ElementClass(enum.Enum):
    IDENTITY = "identity"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True)
class GroupElement:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant is not 1: {self}")
        if self.c < 0 or (self.c == 0 and self.d < 0):
            object.__setattr__(self, "a", -self.a)
            object.__setattr__(self, "b", -self.b)
            object.__setattr__(self, "c", -self.c)
            object.__setattr__(self, "d", -self.d)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "GroupElement":
        # adjugate; normalization restores the canonical sign
        return GroupElement(self.d, -self.b, -self.c, self.a)

    def __pow__(self, n: int) -> "GroupElement":
        if n < 0:
            return self.inverse() ** (-n)
        result = IDENTITY
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    @property
    def trace(self) -> int:
        return self.a + self.d

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __repr__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


IDENTITY = GroupElement(1, 0, 0, 1)
T = GroupElement(1, 1, 0, 1)
S = GroupElement(0, 1, -1, 0)
U = S * T.inverse()  # order 3


def compose(g1: GroupElement, g2: GroupElement) -> GroupElement:
    return g1 * g2


def classify(g: GroupElement) -> ElementClass:
    if g == IDENTITY:
        return ElementClass.IDENTITY
    t = abs(g.trace)
    if t < 2:
        return ElementClass.ELLIPTIC
    if t == 2:
        return ElementClass.PARABOLIC
    return ElementClass.HYPERBOLIC


@dataclass(frozen=True)
class Cusp:
    """Point of P^1(Q): p/q in lowest terms, q >= 0, with q = 0 meaning infinity."""

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if q < 0:
            p, q = -p, -q
        if q == 0:
            if p == 0:
                raise ValueError("0/0 is not a cusp")
            p = 1
        else:
            g = gcd(p, q)
            p, q = p // g, q // g
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def is_infinity(self) -> bool:
        return self.q == 0

    @classmethod
    def infinity(cls) -> "Cusp":
        return cls(1, 0)

    @classmethod
    def from_rational(cls, r: Fraction) -> "Cusp":
        return cls(r.numerator, r.denominator)

    def as_fraction(self) -> Fraction:
        if self.is_infinity:
            raise ValueError("infinity has no rational value")
        return Fraction(self.p, self.q)

    def sort_key(self):
        # infinity first, then by denominator, then numerator
        if self.is_infinity:
            return (0, 0, 0)
        return (1, self.q, self.p)

    def __repr__(self):
        if self.is_infinity:
            return "oo"
        if self.q == 1:
            return str(self.p)
        return f"{self.p}/{self.q}"


INFINITY = Cusp.infinity()


def act_cusp(g: GroupElement, c: Cusp) -> Cusp:
    return Cusp(g.a * c.p + g.b * c.q, g.c * c.p + g.d * c.q)


def act_point(g: GroupElement, z: complex) -> complex:
    if z.imag <= 0:
        raise ValueError("point must lie in the upper half plane")
    return (g.a * z + g.b) / (g.c * z + g.d)


def act(g: GroupElement, z):
    if isinstance(z, Cusp):
        return act_cusp(g, z)
    return act_point(g, complex(z))


def scaling_matrix(c: Cusp) -> GroupElement:
    """Integer unimodular sigma with sigma(oo) = c.

    Canonical choice: sigma = [[p, b], [q, d]] where d is the smallest
    nonnegative solution of p*d = 1 (mod q).
    """
    if c.is_infinity:
        return IDENTITY
    p, q = c.p, c.q
    if q == 1:
        return GroupElement(p, -1, 1, 0)
    d = pow(p % q, -1, q)
    b = (p * d - 1) // q
    return GroupElement(p, b, q, d)


_MATRIX_RE = re.compile(
    r"^\[\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\]\s*,\s*\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\]\]$"
)


def parse_element(text: str) -> GroupElement:
    """Parse "[[a,b],[c,d]]" or a word in the letters t, s, u (with inverses T, S, U)."""
    text = text.strip()
    m = _MATRIX_RE.match(text)
    if m:
        return GroupElement(*(int(x) for x in m.groups()))
    letters = {"t": T, "s": S, "u": U, "T": T.inverse(), "S": S.inverse(), "U": U.inverse()}
    if text and all(ch in letters for ch in text):
        out = IDENTITY
        for ch in text:
            out = out * letters[ch]
        return out
    raise ValueError(f"cannot parse group element: {text!r}")


def parse_cusp(text: str) -> Cusp:
    text = text.strip()
    if text in ("oo", "inf", "infinity"):
        return INFINITY
    if "/" in text:
        p, q = text.split("/")
        return Cusp(int(p), int(q))
    return Cusp(int(text), 1)
