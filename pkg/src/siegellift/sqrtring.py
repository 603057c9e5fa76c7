"""Exact values in multi-quadratic extensions of Q.

A SqrtVal is a finite sum  sum_d  c_d * sqrt(d)  with squarefree d >= 1
and rational c_d.  Closed under ring operations; products of radicals
reduce via sqrt(d1)*sqrt(d2) = g*sqrt(d1*d2/g^2), g = gcd(d1, d2).
Values like p^(-1/2) or lambda_p = a_p * p^(-(2k-1)/2) live here exactly.
"""

import math
from fractions import Fraction
from math import gcd

from .arith import squarefree_part
from .errors import DomainError


class SqrtVal:
    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        self._c = {}
        if coeffs:
            for d, c in coeffs.items():
                c = Fraction(c)
                if c:
                    self._c[d] = self._c.get(d, Fraction(0)) + c
            self._c = {d: c for d, c in self._c.items() if c}

    @classmethod
    def of(cls, q):
        if isinstance(q, SqrtVal):
            return q
        return cls({1: Fraction(q)})

    @classmethod
    def sqrt_of(cls, q):
        """Exact square root of a positive rational."""
        q = Fraction(q)
        if q <= 0:
            raise DomainError("sqrt_of needs a positive rational")
        m = q.numerator * q.denominator
        s, u = squarefree_part(m)
        return cls({s: Fraction(u, q.denominator)})

    @classmethod
    def prime_power_half(cls, p, half_exponent):
        """p^(half_exponent/2) for an integer half_exponent."""
        e, r = divmod(half_exponent, 2)
        v = cls({1: Fraction(p) ** e})
        if r:
            v = v * cls({p: 1})
        return v

    def is_rational(self):
        return all(d == 1 for d in self._c)

    def to_fraction(self):
        if not self._c:
            return Fraction(0)
        if not self.is_rational():
            raise DomainError(f"{self} is irrational")
        return self._c[1]

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        other = SqrtVal.of(other)
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __add__(self, other):
        other = SqrtVal.of(other)
        out = dict(self._c)
        for d, c in other._c.items():
            out[d] = out.get(d, Fraction(0)) + c
        return SqrtVal(out)

    __radd__ = __add__

    def __neg__(self):
        return SqrtVal({d: -c for d, c in self._c.items()})

    def __sub__(self, other):
        return self + (-SqrtVal.of(other))

    def __rsub__(self, other):
        return SqrtVal.of(other) + (-self)

    def __mul__(self, other):
        other = SqrtVal.of(other)
        out = {}
        for d1, c1 in self._c.items():
            for d2, c2 in other._c.items():
                g = gcd(d1, d2)
                d = (d1 // g) * (d2 // g)
                out[d] = out.get(d, Fraction(0)) + c1 * c2 * g
        return SqrtVal(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, SqrtVal):
            if other.is_rational():
                other = other.to_fraction()
            else:
                raise DomainError("division by irrational SqrtVal not supported")
        q = Fraction(other)
        if q == 0:
            raise ZeroDivisionError
        return SqrtVal({d: c / q for d, c in self._c.items()})

    def __pow__(self, n):
        if n < 0:
            raise DomainError("negative powers not supported")
        out = SqrtVal.of(1)
        b = self
        while n:
            if n & 1:
                out = out * b
            b = b * b
            n >>= 1
        return out

    def __float__(self):
        return float(sum(float(c) * math.sqrt(d) for d, c in self._c.items()))

    def __repr__(self):
        return f"SqrtVal({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for d in sorted(self._c):
            c = self._c[d]
            if d == 1:
                parts.append(str(c))
            else:
                parts.append(f"{c}*sqrt({d})")
        return " + ".join(parts)
