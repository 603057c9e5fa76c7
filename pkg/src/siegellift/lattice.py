"""Exact enumeration over even positive-definite lattices.

Short-vector and representation-number searches run on scaled-integer
backtracking kernels.  The pruning bounds come from an exact rational
LDL decomposition of the Gram matrix, cleared to integers; a worst-case
magnitude check guarantees the int64 kernels never overflow, so every
count is exact.  No floating point enters any feasibility decision.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from ._backend import default_threads
from .errors import CapabilityError, DomainError
from .quadform import EvenLattice, HalfIntegralForm, int_det, lll_reduce_gram

_INT64_SAFE = 1 << 62


def _ldl(gram):
    """G = R^T diag(d) R with R unit upper triangular, exact Fractions."""
    n = len(gram)
    d = [Fraction(0)] * n
    r = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        r[i][i] = Fraction(1)
    for i in range(n):
        s = Fraction(gram[i][i])
        for k in range(i):
            s -= d[k] * r[k][i] * r[k][i]
        d[i] = s
        for j in range(i + 1, n):
            s = Fraction(gram[i][j])
            for k in range(i):
                s -= d[k] * r[k][i] * r[k][j]
            r[i][j] = s / d[i]
    return d, r


def _lcm(a, b):
    return a * b // math.gcd(a, b)


def _scaled_enumeration_data(gram, bound):
    """Integer data (Rint, w, c, QB, Q) with x^T G x * Q = sum w_i N_i^2.

    The magnitude audit follows the search invariant: at level i every
    admitted value satisfies |c_i x_i + U_i| <= S_i = isqrt(QB/w_i), which
    bounds |x_i| and hence every intermediate sum, exactly and recursively.
    """
    n = len(gram)
    d, r = _ldl(gram)
    c = []
    Rint = [[0] * n for _ in range(n)]
    for i in range(n):
        den = 1
        for j in range(i + 1, n):
            den = _lcm(den, r[i][j].denominator)
        c.append(den)
        Rint[i][i] = den
        for j in range(i + 1, n):
            Rint[i][j] = int(r[i][j] * den)
    q = [d[i] / (c[i] * c[i]) for i in range(n)]
    Q = 1
    for qi in q:
        Q = _lcm(Q, qi.denominator)
    w = [int(qi * Q) for qi in q]
    QB = Q * bound
    S = [math.isqrt(QB // w[i]) for i in range(n)]
    x_bd = [0] * n
    u_bd = [0] * n
    worst = QB
    for i in range(n - 1, -1, -1):
        u_bd[i] = sum(abs(Rint[i][j]) * x_bd[j] for j in range(i + 1, n))
        x_bd[i] = (S[i] + u_bd[i]) // c[i] + 1
        worst = max(worst, S[i] + u_bd[i] + c[i])
    if worst >= _INT64_SAFE:
        raise CapabilityError(
            "scaled enumeration would overflow int64 for this Gram/bound")
    return Rint, w, c, QB, Q


_pool_cache = {}
_aut_cache = {}
_reduced_cache = {}


def _enumeration_gram(gram, bound):
    """Gram used for enumeration: the input, or an LLL-reduced equivalent.

    Counts and pairwise inner products are invariant under the change of
    basis, so swapping in a reduced Gram is transparent to every caller.
    """
    try:
        return gram, _scaled_enumeration_data(gram, bound)
    except CapabilityError:
        pass
    if gram not in _reduced_cache:
        _reduced_cache[gram] = lll_reduce_gram(gram)
    red = _reduced_cache[gram]
    return red, _scaled_enumeration_data(red, bound)


def short_vectors(lattice, bound, threads=None):
    """Counts of nonzero vectors by norm (x,x) = 1..bound; +-x both counted."""
    if bound < 1:
        raise DomainError("bound must be positive")
    threads = default_threads() if threads is None else threads
    _, (Rint, w, c, QB, Q) = _enumeration_gram(lattice.gram, bound)
    counts = _kernels.short_vector_counts(Rint, w, c, QB, Q, lattice.rank,
                                          bound, threads)
    return {norm: int(cnt) for norm, cnt in enumerate(counts) if cnt and norm}


def _vector_pool(lattice, bound):
    """Sorted-by-norm coordinate pool up to `bound`, with G x precomputed."""
    key = (lattice.gram, bound)
    if key in _pool_cache:
        return _pool_cache[key]
    gram, (Rint, w, c, QB, Q) = _enumeration_gram(lattice.gram, bound)
    counts = _kernels.short_vector_counts(Rint, w, c, QB, Q, lattice.rank, bound, 1)
    total = int(counts.sum())
    coords, norms = _kernels.short_vector_list(Rint, w, c, QB, Q, lattice.rank,
                                               bound, total)
    order = np.argsort(norms, kind="stable")
    coords = coords[order]
    norms = norms[order]
    gxs = coords @ np.asarray(gram, dtype=np.int64)
    slices = {}
    for norm in sorted(set(int(x) for x in norms)):
        lo = int(np.searchsorted(norms, norm, side="left"))
        hi = int(np.searchsorted(norms, norm, side="right"))
        slices[norm] = (lo, hi)
    out = (coords, gxs, slices)
    _pool_cache[key] = out
    return out


def representation_count(lattice, xi, threads=None):
    """Ordered tuples (x_1..x_j) in the lattice with (x_a, x_b) = 2 xi_ab."""
    if xi.size > lattice.rank:
        raise DomainError("form size exceeds lattice rank")
    threads = default_threads() if threads is None else threads
    two = xi.two_xi
    j = xi.size
    # Gram matrices of real vectors are positive semidefinite: quick exits
    for a in range(j):
        if two[a][a] < 0:
            return 0
        for b in range(j):
            if two[a][b] * two[a][b] > two[a][a] * two[b][b]:
                return 0
    # zero-norm columns force zero vectors; drop them (their dots are 0)
    keep = [a for a in range(j) if two[a][a] > 0]
    if len(keep) < j:
        sub = [[two[a][b] for b in keep] for a in keep]
        if not keep:
            return 1
        return representation_count(lattice,
                                    HalfIntegralForm(tuple(tuple(r) for r in sub)),
                                    threads=threads)
    max_norm = max(two[a][a] for a in range(j))
    coords, gxs, slices = _vector_pool(lattice, max_norm)
    empty = (0, 0)
    col_slices = [slices.get(two[a][a], empty) for a in range(j)]
    if any(s[0] == s[1] for s in col_slices):
        return 0
    return _kernels.rep_count(coords, gxs, col_slices, two, j, threads)


def automorphism_order(lattice, threads=None):
    """Order of the isometry group: full-rank self-representations."""
    key = lattice.gram
    if key not in _aut_cache:
        _aut_cache[key] = representation_count(lattice,
                                               lattice.half_gram_form(),
                                               threads=threads)
    return _aut_cache[key]


def theta_coefficients(lattice, degree, xis, threads=None):
    """Batch of representation numbers for forms of one size."""
    out = {}
    for xi in xis:
        if xi.size != degree:
            raise DomainError("theta batch forms must all have the stated size")
        out[xi] = representation_count(lattice, xi, threads=threads)
    return out


@dataclass
class GenusWithWeights:
    """Ordered classes of one genus with cached isometry-group orders.

    Aut orders come from the lattice files when present (`aut` field) and
    are enumerated on demand otherwise; enumeration is only feasible for
    small ranks.  File-provided orders for every bundled rank <= 8 lattice
    are re-verified by enumeration in the test suite.
    """

    name: str
    lattices: list
    _auts: dict = field(default_factory=dict)

    def __post_init__(self):
        ranks = {lat.rank for lat in self.lattices}
        dets = {lat.det() for lat in self.lattices}
        if len(ranks) != 1 or len(dets) != 1:
            raise DomainError("genus classes must share rank and determinant")
        names = [lat.name for lat in self.lattices]
        if len(set(names)) != len(names):
            raise DomainError("genus class names must be distinct")

    @property
    def rank(self):
        return self.lattices[0].rank

    def aut_order(self, lat, threads=None):
        if lat.name not in self._auts:
            if lat.aut_order_hint is not None:
                self._auts[lat.name] = lat.aut_order_hint
            else:
                self._auts[lat.name] = automorphism_order(lat, threads=threads)
        return self._auts[lat.name]

    def mass(self, threads=None):
        return sum(Fraction(1, self.aut_order(lat, threads=threads))
                   for lat in self.lattices)

    def weighted_average(self, f, xi, threads=None, self_gram_shortcut=False):
        """Exact sum of f(class) * N(class, xi) / aut_order over the genus.

        With `self_gram_shortcut`, a class whose Gram equals 2 xi contributes
        f(class) directly (its self-representation count equals its isometry
        group order by definition), skipping an enumeration that would walk
        one node per isometry.
        """
        total = Fraction(0)
        for lat in self.lattices:
            if lat.name not in f:
                raise DomainError(f"class function missing value for {lat.name!r}")
            weight = Fraction(f[lat.name])
            if weight == 0:
                continue
            if self_gram_shortcut and xi.two_xi == lat.gram:
                total += weight
                continue
            n = representation_count(lat, xi, threads=threads)
            if n:
                total += weight * Fraction(n, self.aut_order(lat, threads=threads))
        return total
