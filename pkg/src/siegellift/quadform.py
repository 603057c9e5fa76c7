"""Half-integral symmetric forms and even lattices, with exact invariants.

The canonical internal representation of a form xi is the even integral
matrix 2*xi (integer diagonal twice the xi diagonal, integer off-diagonal);
xi itself is derived.  All determinant and definiteness checks are exact
integer computations (fraction-free elimination), never numeric.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .arith import delta_p, f_frak_eta, f_p_eta, is_prime
from .errors import DomainError


def _as_fraction_matrix(rows):
    mat = [[Fraction(x) for x in row] for row in rows]
    n = len(mat)
    if any(len(r) != n for r in mat):
        raise DomainError("matrix is not square")
    return mat


def int_det(mat):
    """Exact determinant of an integer matrix (Bareiss fraction-free)."""
    n = len(mat)
    a = [list(map(int, row)) for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _leading_minors_positive(mat):
    return all(int_det([row[: k + 1] for row in mat[: k + 1]]) > 0
               for k in range(len(mat)))


def lll_reduce_gram(gram, delta=Fraction(99, 100)):
    """Exact LLL on a positive-definite Gram matrix; returns a new Gram.

    Works entirely on the Gram (no coordinates), with rational arithmetic.
    Used to precondition enumeration bases; all counts and inner products
    computed downstream are invariant under this change of basis.
    """
    n = len(gram)
    g = [[Fraction(x) for x in row] for row in gram]

    def translate(i, j, q):
        for k in range(n):
            g[i][k] -= q * g[j][k]
        for k in range(n):
            g[k][i] -= q * g[k][j]

    def swap(i, j):
        g[i], g[j] = g[j], g[i]
        for row in g:
            row[i], row[j] = row[j], row[i]

    def gso():
        mu = [[Fraction(0)] * n for _ in range(n)]
        B = [Fraction(0)] * n
        for i in range(n):
            B[i] = g[i][i] - sum(mu[i][k] ** 2 * B[k] for k in range(i))
            for j in range(i + 1, n):
                mu[j][i] = (g[j][i] - sum(mu[j][k] * mu[i][k] * B[k]
                                          for k in range(i))) / B[i]
        return mu, B

    k = 1
    while k < n:
        mu, B = gso()
        for j in range(k - 1, -1, -1):
            q = (2 * mu[k][j] + 1).__floor__() // 2
            if q:
                translate(k, j, q)
                for i in range(j):
                    mu[k][i] -= q * mu[j][i]
                mu[k][j] -= q
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            swap(k, k - 1)
            k = max(k - 1, 1)
    return tuple(tuple(int(x) for x in row) for row in g)


def membership_Rj(rows):
    """Integral-diagonal, half-integral-off-diagonal test for a symmetric matrix."""
    mat = _as_fraction_matrix(rows)
    n = len(mat)
    for i in range(n):
        for j in range(n):
            if mat[i][j] != mat[j][i]:
                raise DomainError("matrix is not symmetric")
    for i in range(n):
        if mat[i][i].denominator != 1:
            return False
        for j in range(i + 1, n):
            if (2 * mat[i][j]).denominator != 1:
                return False
    return True


@dataclass(frozen=True)
class HalfIntegralForm:
    """Symmetric rational form with integral diagonal and half-integral entries."""

    two_xi: tuple  # tuple of tuples of ints, the even integral matrix 2*xi

    def __post_init__(self):
        n = self.size
        t = self.two_xi
        for i in range(n):
            if len(t[i]) != n:
                raise DomainError("matrix is not square")
            if t[i][i] % 2:
                raise DomainError("diagonal of 2*xi must be even")
            for j in range(n):
                if t[i][j] != t[j][i]:
                    raise DomainError("matrix is not symmetric")

    @classmethod
    def from_rational(cls, rows):
        mat = _as_fraction_matrix(rows)
        if not membership_Rj(mat):
            raise DomainError("entries are not half-integral")
        return cls(tuple(tuple(int(2 * x) for x in row) for row in mat))

    @classmethod
    def from_string(cls, text):
        """Parse row-major rationals, ';' between rows: "1,1/2;1/2,1"."""
        rows = [[Fraction(x.strip()) for x in row.split(",")]
                for row in text.strip().split(";")]
        return cls.from_rational(rows)

    @property
    def size(self):
        return len(self.two_xi)

    @property
    def xi(self):
        return [[Fraction(x, 2) for x in row] for row in self.two_xi]

    def det_two_xi(self):
        return int_det(self.two_xi)

    def is_positive_definite(self):
        return _leading_minors_positive(self.two_xi)

    def D(self):
        """Discriminant-normalized determinant (-1)^m det(2 xi), size 2m."""
        if self.size % 2:
            raise DomainError("D is defined for even-size forms only")
        d = self.det_two_xi()
        if d == 0:
            raise DomainError("form is singular")
        return (-1) ** (self.size // 2) * d

    def local_invariants(self, p):
        """(delta_p, f_p, conductor cofactor) of the discriminant class."""
        if not is_prime(p):
            raise DomainError(f"{p} is not prime")
        D = self.D()
        return delta_p(D, p), f_p_eta(D, p), f_frak_eta(D)

    def direct_sum(self, other):
        n, m = self.size, other.size
        out = [[0] * (n + m) for _ in range(n + m)]
        for i in range(n):
            for j in range(n):
                out[i][j] = self.two_xi[i][j]
        for i in range(m):
            for j in range(m):
                out[n + i][n + j] = other.two_xi[i][j]
        return HalfIntegralForm(tuple(tuple(row) for row in out))

    def __str__(self):
        return ";".join(",".join(str(Fraction(x, 2)) for x in row)
                        for row in self.two_xi)


def D_xi(xi):
    return xi.D()


def direct_sum(a, b):
    return a.direct_sum(b)


def xi_local_invariants(xi, p):
    return xi.local_invariants(p)


@dataclass(frozen=True)
class EvenLattice:
    """Positive-definite even lattice given by an integral Gram matrix."""

    name: str
    gram: tuple  # tuple of tuples of ints
    aut_order_hint: int | None = field(default=None, compare=False)

    def __post_init__(self):
        g = self.gram
        n = self.rank
        for i in range(n):
            if len(g[i]) != n:
                raise DomainError("gram matrix is not square")
            if g[i][i] % 2:
                raise DomainError("lattice is not even")
            for j in range(n):
                if g[i][j] != g[j][i]:
                    raise DomainError("gram matrix is not symmetric")
        if not _leading_minors_positive(g):
            raise DomainError("gram matrix is not positive definite")

    @classmethod
    def from_rows(cls, name, rows, aut_order=None):
        return cls(name, tuple(tuple(int(x) for x in r) for r in rows),
                   aut_order_hint=aut_order)

    @property
    def rank(self):
        return len(self.gram)

    def det(self):
        return int_det(self.gram)

    def is_unimodular(self):
        return self.det() == 1

    def half_gram_form(self):
        """The form Gram/2, the natural full-rank argument for this lattice."""
        return HalfIntegralForm(self.gram)

    def direct_sum(self, other, name=None):
        n, m = self.rank, other.rank
        out = [[0] * (n + m) for _ in range(n + m)]
        for i in range(n):
            for j in range(n):
                out[i][j] = self.gram[i][j]
        for i in range(m):
            for j in range(m):
                out[n + i][n + j] = other.gram[i][j]
        return EvenLattice(name or f"{self.name}+{other.name}",
                           tuple(tuple(r) for r in out))


# ---------------------------------------------------------------------------
# file formats: "latticefile 1" and "genusfile 1" tagged text documents

def parse_lattice_text(text):
    tokens = text.split()
    if tokens[:2] != ["latticefile", "1"]:
        raise DomainError("missing 'latticefile 1' format tag")
    i = 2
    name = None
    rank = None
    aut = None
    gram = None
    while i < len(tokens):
        key = tokens[i]
        if key == "name":
            name = tokens[i + 1]
            i += 2
        elif key == "rank":
            rank = int(tokens[i + 1])
            i += 2
        elif key == "aut":
            aut = int(tokens[i + 1])
            i += 2
        elif key == "gram":
            if rank is None:
                raise DomainError("rank must precede gram")
            vals = [int(x) for x in tokens[i + 1: i + 1 + rank * rank]]
            if len(vals) != rank * rank:
                raise DomainError("gram block is short")
            gram = [vals[r * rank:(r + 1) * rank] for r in range(rank)]
            i += 1 + rank * rank
        else:
            raise DomainError(f"unknown lattice file field {key!r}")
    if name is None or gram is None:
        raise DomainError("lattice file needs name and gram")
    return EvenLattice.from_rows(name, gram, aut_order=aut)


def lattice_to_text(lat):
    lines = ["latticefile 1", f"name {lat.name}", f"rank {lat.rank}"]
    if lat.aut_order_hint is not None:
        lines.append(f"aut {lat.aut_order_hint}")
    lines.append("gram")
    for row in lat.gram:
        lines.append(" ".join(str(x) for x in row))
    return "\n".join(lines) + "\n"


def parse_genus_text(text, loader):
    """Genus file: ordered lattice references resolved through `loader`."""
    tokens = text.split()
    if tokens[:2] != ["genusfile", "1"]:
        raise DomainError("missing 'genusfile 1' format tag")
    i = 2
    name = None
    lattices = []
    while i < len(tokens):
        key = tokens[i]
        if key == "name":
            name = tokens[i + 1]
            i += 2
        elif key == "lattice":
            lattices.append(loader(tokens[i + 1]))
            i += 2
        else:
            raise DomainError(f"unknown genus file field {key!r}")
    if not lattices:
        raise DomainError("genus file lists no lattices")
    ranks = {lat.rank for lat in lattices}
    dets = {lat.det() for lat in lattices}
    if len(ranks) != 1 or len(dets) != 1:
        raise DomainError("genus classes must share rank and determinant")
    return name, lattices


def _data_text(fname):
    return resources.files("siegellift.data").joinpath(fname).read_text()


def load_bundled_lattice(name):
    """Load a bundled lattice by short name (e.g. 'e8', 'a2', 'd16plus')."""
    try:
        return parse_lattice_text(_data_text(f"{name.lower()}.lat"))
    except FileNotFoundError:
        raise DomainError(f"no bundled lattice named {name!r}") from None


def load_bundled_genus(name):
    try:
        text = _data_text(f"{name.lower()}.genus")
    except FileNotFoundError:
        raise DomainError(f"no bundled genus named {name!r}") from None
    return parse_genus_text(text, load_bundled_lattice)


def bundled_lattice_names():
    files = resources.files("siegellift.data")
    return sorted(f.name[:-4] for f in files.iterdir() if f.name.endswith(".lat"))
