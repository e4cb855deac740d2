"""Elements of the dual torus with exact torsion and free coordinates.

The dual group is adjoint, so a torus element is determined by its values on
the simple roots.  Each value splits as a root of unity, written additively as
a fraction in Q/Z with zeta_n corresponding to 1/n, plus a free part: a vector
of rational exponents over a fixed list of abstractly independent generators.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .errors import InvalidInput


def _mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


class TorusElement:
    __slots__ = ("torsion", "free")

    def __init__(self, torsion, free=None):
        torsion = tuple(_mod1(Fraction(t)) for t in torsion)
        n = len(torsion)
        if free is None:
            free = tuple(() for _ in range(n))
        else:
            free = tuple(tuple(Fraction(x) for x in f) for f in free)
            if len(free) != n:
                raise InvalidInput("free parts must match the rank")
            if len({len(f) for f in free}) > 1:
                raise InvalidInput("free parts must share one generator list")
        self.torsion = torsion
        self.free = free

    @classmethod
    def identity(cls, rank: int) -> "TorusElement":
        return cls((Fraction(0),) * rank)

    @property
    def rank(self) -> int:
        return len(self.torsion)

    @property
    def n_generators(self) -> int:
        return len(self.free[0]) if self.free else 0

    def value_at(self, root):
        """alpha(s) for a root in the Delta-basis: (torsion mod 1, free vector)."""
        t = Fraction(0)
        m = self.n_generators
        f = [Fraction(0)] * m
        for c, ti, fi in zip(root, self.torsion, self.free):
            if c:
                t += c * ti
                for k in range(m):
                    f[k] += c * fi[k]
        return _mod1(t), tuple(f)

    def is_finite_order(self) -> bool:
        return all(not any(f) for f in self.free)

    def order(self) -> int:
        if not self.is_finite_order():
            raise InvalidInput("element has infinite order; reduce it first")
        return lcm(1, *(t.denominator for t in self.torsion))

    def is_identity(self) -> bool:
        return self.is_finite_order() and all(t == 0 for t in self.torsion)

    def key(self):
        return (self.torsion, self.free)

    def __eq__(self, other) -> bool:
        return isinstance(other, TorusElement) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.is_finite_order():
            return f"TorusElement({[str(t) for t in self.torsion]})"
        free = [[str(x) for x in f] for f in self.free]
        return f"TorusElement({[str(t) for t in self.torsion]}, free={free})"
