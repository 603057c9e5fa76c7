"""Exact arithmetic on rational square classes and their local invariants.

Everything here is pure and exact: rationals are `fractions.Fraction`,
no floating point.  A nonzero rational eta is written eta = D * t^2 with
D the discriminant of Q(sqrt(eta)) (D = 1 for squares); all local data
(delta_p, f_p, the positive rational conductor cofactor) factor through
this normal form.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .errors import DomainError, ConsistencyError

Rational = Fraction | int


def is_prime(p):
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def ordp(x, p):
    """Exponent of the prime p in the nonzero rational x."""
    if not is_prime(p):
        raise DomainError(f"ordp: {p} is not prime")
    x = Fraction(x)
    if x == 0:
        raise DomainError("ordp: zero has no finite order")
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _factor(n):
    """Trial-division factorization of n >= 1 as a dict prime -> exponent."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def squarefree_part(n):
    """n = s * u^2 with s squarefree; returns (s, u).  Sign goes into s."""
    if n == 0:
        raise DomainError("squarefree_part of 0")
    sign = -1 if n < 0 else 1
    s, u = 1, 1
    for p, e in _factor(abs(n)).items():
        if e % 2:
            s *= p
        u *= p ** (e // 2)
    return sign * s, u


def _legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def kronecker(D, n):
    """Kronecker symbol (D/n) for D = 1 or D = 0,1 mod 4, n >= 1."""
    if D != 1 and D % 4 not in (0, 1):
        raise DomainError(f"kronecker: {D} is not 1 or 0,1 mod 4")
    if n <= 0:
        raise DomainError("kronecker: n must be positive")
    res = 1
    m = n
    while m % 2 == 0:
        m //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            res = -res
    for p, e in _factor(m).items():
        leg = _legendre(D, p)
        if leg == 0:
            return 0
        if e % 2:
            res *= leg
    return res


@dataclass(frozen=True)
class SquareClassData:
    """Normal form eta = D * t^2 of a nonzero rational square class."""

    eta: Fraction
    fundamental_discriminant: int
    conductor: int
    cofactor: Fraction

    def __post_init__(self):
        D, t = self.fundamental_discriminant, self.cofactor
        if self.eta != D * t * t:
            raise ConsistencyError("square class decomposition broken")
        if self.conductor != abs(D):
            raise ConsistencyError("conductor must be |D|")


def square_class(eta):
    """Decompose nonzero rational eta as D * t^2, D fundamental (or 1)."""
    eta = Fraction(eta)
    if eta == 0:
        raise DomainError("square_class: eta must be nonzero")
    # eta and eta*den^2 = num*den share a square class
    s, _ = squarefree_part(eta.numerator * eta.denominator)
    D = s if s % 4 == 1 else 4 * s
    t2 = eta / D
    t = Fraction(isqrt(t2.numerator), isqrt(t2.denominator))
    if t * t != t2:
        raise ConsistencyError("cofactor is not an exact square root")
    return SquareClassData(eta=eta, fundamental_discriminant=D,
                           conductor=abs(D), cofactor=t)


def delta_p(eta, p):
    """Square class of eta in Q_p: 1 square, -1 unramified, 0 ramified."""
    D = square_class(eta).fundamental_discriminant
    if D == 1:
        return 1
    if D % p == 0:
        return 0
    return kronecker(D, p)


def f_p_eta(eta, p):
    """Half the difference ord_p(eta) - ord_p(conductor); always an integer."""
    sc = square_class(eta)
    d = ordp(eta, p) - ordp(sc.conductor, p)
    if d % 2:
        raise ConsistencyError(f"f_p of {eta} at {p} is not integral")
    return d // 2


def f_frak_eta(eta):
    """Exact positive rational sqrt(|eta| / conductor)."""
    sc = square_class(eta)
    rad = abs(Fraction(eta)) / sc.conductor
    r = Fraction(isqrt(rad.numerator), isqrt(rad.denominator))
    if r * r != rad:
        raise ConsistencyError(f"|{eta}|/conductor is not a rational square")
    return r
