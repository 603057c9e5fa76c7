"""Local layer series of half-integral forms, exact from the defining sum.

For an even-size nonsingular form xi and a prime p the series
b(xi, s) = sum over cosets z of Sym(Q_p)/Sym(Z_p) of psi(-tr(xi z)) nu[z]^{-s}
is a polynomial in p^{-s}.  Layers are enumerated as z = y/p^E with
y over Sym(Z/p^E); nu[z] comes from the p-adic elementary divisors of y
(minor-gcd valuations), and the character sum contracts to integers through
Ramanujan sums after asserting the counts are constant on Galois orbits.

The series factors as F * gamma with gamma explicit; F is normalized by
constant term 1 and satisfies a_(f+j) = a_(f-j) * p^((2m+1) j).
"""

from dataclasses import dataclass
from fractions import Fraction

from . import _kernels
from ._backend import USING_NUMBA, default_threads
from .arith import delta_p, f_p_eta, is_prime
from .errors import CapabilityError, ConsistencyError, DomainError
from .sqrtring import SqrtVal

DEFAULT_ITER_BUDGET = 500_000_000 if USING_NUMBA else 6_000_000


def gamma_p(m, delta, p):
    """Coefficients of (1-X) prod_{j<=m} (1-p^{2j}X^2) / (1-delta p^m X).

    The denominator always divides the numerator exactly (for delta = 1 it
    cancels into the j = m factor), so the result is an integer polynomial.
    """
    if delta not in (-1, 0, 1):
        raise DomainError("delta must be -1, 0 or 1")
    num = [1, -1]
    top = m if delta == 0 else m - 1
    for j in range(1, top + 1):
        q = p ** (2 * j)
        out = [0] * (len(num) + 2)
        for i, a in enumerate(num):
            out[i] += a
            out[i + 2] -= a * q
        num = out
    if delta != 0:
        # remaining factor (1 - p^{2m} X^2)/(1 - delta p^m X) = 1 + delta p^m X
        q = delta * p ** m
        out = [0] * (len(num) + 1)
        for i, a in enumerate(num):
            out[i] += a
            out[i + 1] += a * q
        num = out
    return num


def gamma_eval(m, delta, p, x):
    """Value of the gamma factor at a rational point (poles are removable)."""
    x = Fraction(x)
    return sum(c * x ** i for i, c in enumerate(gamma_p(m, delta, p)))


def _residue_classes(p, E):
    """Residues 1..p^E-1 grouped by denominator level j of t/p^E."""
    classes = [[] for _ in range(E + 1)]
    for t in range(1, p ** E):
        v, o = t, 0
        while v % p == 0:
            v //= p
            o += 1
        classes[E - o].append(t)
    return classes


def contract_histogram(hist, p, E, unit=1):
    """Collapse a (layer, residue) histogram to integer layer coefficients.

    `unit` rescales the additive character by a p-adic unit; the result must
    not depend on it.  Raises if the per-orbit counts are not constant.
    """
    pE = p ** E
    if unit % p == 0:
        raise DomainError("character scaling must be a p-adic unit")
    classes = _residue_classes(p, E)
    layers = []
    for l in range(E + 1):
        row = hist[l]
        if unit != 1:
            permuted = [0] * pE
            for t in range(pE):
                permuted[(t * unit) % pE] = int(row[t])
            row = permuted
        total = int(row[0])
        for j in range(1, E + 1):
            ts = classes[j]
            counts = {int(row[t]) for t in ts}
            if len(counts) != 1:
                raise ConsistencyError(
                    f"character sum not Galois stable in layer {l} level {j}")
            cnt = counts.pop()
            if j == 1:
                total -= cnt  # sum of primitive p-th roots of unity is -1
        layers.append(total)
    return layers


def layer_cost(xi_size, p, e_max):
    return (p ** e_max) ** (xi_size * (xi_size + 1) // 2)


def siegel_series_layers(xi, p, e_max=None, threads=None, budget=None, unit=1):
    """Exact integer layer coefficients c_0..c_{e_max} of the local series."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    n = xi.size
    if n % 2 or n > 4:
        raise CapabilityError("layer enumeration supports even sizes 2 and 4 only")
    D = xi.D()  # also rejects odd size / singular forms
    if e_max is None:
        m = n // 2
        e_max = 2 * f_p_eta(D, p) + 2 * m + 1
    if e_max < 1:
        raise DomainError("e_max must be positive")
    budget = DEFAULT_ITER_BUDGET if budget is None else budget
    cost = layer_cost(n, p, e_max)
    if cost > budget:
        raise CapabilityError(
            f"layer enumeration needs {cost:.2e} cosets at p={p}, e_max={e_max} "
            f"(budget {budget:.2e})")
    threads = default_threads() if threads is None else threads
    diag_half = [xi.two_xi[i][i] // 2 for i in range(n)]
    hist = _kernels.layer_histogram(diag_half, xi.two_xi, n, p, e_max, threads)
    return contract_histogram(hist, p, e_max, unit=unit)


@dataclass(frozen=True)
class SiegelSeriesData:
    """Layer coefficients, the gamma data, and the cofactor polynomial F."""

    prime: int
    m: int
    f: int
    gamma_delta: int
    layer_coeffs: tuple
    F_coeffs: tuple
    verified_depth: int

    def __post_init__(self):
        if self.layer_coeffs[0] != 1:
            raise ConsistencyError("zeroth layer must be 1")
        p, f, m = self.prime, self.f, self.m
        for j in range(f + 1):
            if self.F_coeffs[f + j] != self.F_coeffs[f - j] * p ** ((2 * m + 1) * j):
                raise ConsistencyError("cofactor polynomial symmetry broken")


def F_p_poly(xi, p, e_max=None, threads=None, budget=None):
    """Divide the layer series exactly by the gamma factor.

    With the default depth the full product identity is verified; a smaller
    e_max >= 2f still determines F but checks fewer tail coefficients.
    """
    n = xi.size
    m = n // 2
    D = xi.D()
    delta = delta_p(D, p)
    f = f_p_eta(D, p)
    full = 2 * f + 2 * m + 1
    depth = full if e_max is None else e_max
    if depth < 2 * f:
        raise CapabilityError(
            f"need at least e_max={2 * f} layers to determine F at p={p}")
    layers = siegel_series_layers(xi, p, depth, threads=threads, budget=budget)
    gamma = gamma_p(m, delta, p)
    F = []
    for i in range(min(2 * f, depth) + 1):
        a = layers[i]
        for k in range(1, min(i, len(gamma) - 1) + 1):
            a -= gamma[k] * F[i - k]
        F.append(a)
    # verify the product against every enumerated layer
    for i in range(depth + 1):
        s = sum(F[k] * gamma[i - k]
                for k in range(max(0, i - len(gamma) + 1), min(i, 2 * f) + 1))
        if s != layers[i]:
            raise ConsistencyError(
                f"layer series does not factor at degree {i}; increase e_max")
    if F[0] != 1:
        raise ConsistencyError("cofactor constant term must be 1")
    return SiegelSeriesData(prime=p, m=m, f=f, gamma_delta=delta,
                            layer_coeffs=tuple(layers), F_coeffs=tuple(F),
                            verified_depth=depth)


def _pair_sums(lam, top):
    """Values c_j = X^j + X^(-j) as polynomials in lam = X + 1/X, j = 0..top."""
    out = [SqrtVal.of(2), SqrtVal.of(lam)]
    while len(out) <= top:
        out.append(SqrtVal.of(lam) * out[-1] - out[-2])
    return out[: top + 1]


def F_tilde_eval(xi, p, lam, data=None, supplied_F=None):
    """Evaluate the symmetric normalization of F at a value of X + 1/X.

    Only lam is consumed, never X itself; exactness is preserved when lam
    is rational or a SqrtVal.  `supplied_F` (coefficient list) bypasses the
    enumeration for sizes beyond the cap.
    """
    n = xi.size
    m = n // 2
    f = f_p_eta(xi.D(), p)
    if supplied_F is not None:
        F = list(supplied_F)
        if len(F) != 2 * f + 1 or F[0] != 1:
            raise DomainError("supplied F has wrong degree or constant term")
        for j in range(f + 1):
            if F[f + j] != F[f - j] * p ** ((2 * m + 1) * j):
                raise DomainError("supplied F breaks the coefficient symmetry")
    else:
        if data is None:
            data = F_p_poly(xi, p)
        F = list(data.F_coeffs)
    if f == 0:
        return SqrtVal.of(1)
    cj = _pair_sums(lam, f)
    total = SqrtVal.of(0)
    for j in range(f + 1):
        b = SqrtVal.of(F[f - j]) * SqrtVal.prime_power_half(p, -(2 * m + 1) * (f - j))
        total = total + b * (cj[j] if j else SqrtVal.of(1))
    return total


def psi_poly(eta, p):
    """Coefficients (in lam = X + 1/X) of the local square-class polynomial.

    For f >= 0 this is S_{f+1}(lam) - p^(-1/2) delta S_f(lam) where S_j is
    the divided power sum (X^j - X^-j)/(X - 1/X); zero for f < 0.  The sign
    of the delta term is fixed by the plus-space oracle (see tests): the
    coefficient relation it induces is C(p^2 d) = (a_p - delta p^(k-1)) C(d).
    """
    f = f_p_eta(eta, p)
    if f < 0:
        return []
    delta = delta_p(eta, p)
    s_prev = []                      # S_0 = 0
    s_cur = [Fraction(1)]            # S_1 = 1
    for _ in range(f):
        nxt = [Fraction(0)] + s_cur
        for i, a in enumerate(s_prev):
            nxt[i] -= a
        s_prev, s_cur = s_cur, nxt
    # s_cur = S_{f+1}, s_prev = S_f
    coeffs = [SqrtVal.of(a) for a in s_cur]
    if delta and f >= 1:
        corr = SqrtVal.prime_power_half(p, -1) * delta
        for i, a in enumerate(s_prev):
            coeffs[i] = coeffs[i] - corr * a
    return coeffs


def psi_eval(eta, p, lam):
    """Evaluate the square-class polynomial at a value of X + 1/X."""
    coeffs = psi_poly(eta, p)
    total = SqrtVal.of(0)
    power = SqrtVal.of(1)
    lam = SqrtVal.of(lam)
    for a in coeffs:
        total = total + a * power
        power = power * lam
    return total


def psi_eval_via_x(eta, p, x):
    """Evaluate through the quotient definition at a rational X (test route)."""
    x = Fraction(x)
    if x in (0, 1, -1):
        raise DomainError("X must avoid 0, 1, -1 in the quotient route")
    f = f_p_eta(eta, p)
    if f < 0:
        return SqrtVal.of(0)
    delta = delta_p(eta, p)
    den = x - 1 / x
    first = (x ** (f + 1) - x ** -(f + 1)) / den
    second = (x ** f - x ** -f) / den
    return SqrtVal.of(first) - SqrtVal.prime_power_half(p, -1) * delta * second
