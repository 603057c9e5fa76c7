"""Generate the bundled lattice data files.

Builds Cartan-matrix root lattices (A1 A2 A4 D4 E8), the rank-16 pair
(E8+E8, D16+), the Leech lattice from the extended binary Golay code, and
the 23 root-system rank-24 even unimodular lattices as glue-code extensions
of their root blocks.  Every built lattice is verified before it is written:
positive definite, even, expected determinant, and expected root count.
For the rank-24 cases the root count 24h together with determinant 1
certifies the class (one class per root system).

Run from the repository root:  python tools/gen_lattices.py
"""

import random
import sys
from fractions import Fraction
from itertools import product
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from siegellift.lattice import short_vectors  # noqa: E402
from siegellift.quadform import EvenLattice, int_det, lattice_to_text  # noqa: E402

DATA = Path(__file__).resolve().parent.parent / "src" / "siegellift" / "data"

E8_AUT = 696729600


# ---------------------------------------------------------------------------
# root block Gram matrices

def gram_A(n):
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = 2
        if i + 1 < n:
            g[i][i + 1] = g[i + 1][i] = -1
    return g


def gram_D(n):
    g = gram_A(n)
    g[n - 1][n - 2] = g[n - 2][n - 1] = 0
    g[n - 1][n - 3] = g[n - 3][n - 1] = -1
    return g


def gram_E8():
    g = gram_A(8)
    g[7][6] = g[6][7] = 0
    g[7][4] = g[4][7] = -1
    return g


def _submatrix(g, idx):
    return [[g[i][j] for j in idx] for i in idx]


def gram_E7():
    # branch sits at index 4 with arms {7}, {5,6}, {3,2,1,0}: shorten the long arm
    return _submatrix(gram_E8(), [1, 2, 3, 4, 5, 6, 7])


def gram_E6():
    return _submatrix(gram_E8(), [2, 3, 4, 5, 6, 7])


def block_sum(*grams):
    n = sum(len(g) for g in grams)
    out = [[0] * n for _ in range(n)]
    o = 0
    for g in grams:
        r = len(g)
        for i in range(r):
            for j in range(r):
                out[o + i][o + j] = g[i][j]
        o += r
    return out


def mat_inv(g):
    """Exact inverse of an integer matrix (Gauss-Jordan over Fractions)."""
    n = len(g)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(g)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


# ---------------------------------------------------------------------------
# integer row HNF and basis utilities

def hnf_rows(rows, n):
    """Triangular basis of the lattice generated by integer rows."""
    rows = [list(r) for r in rows if any(r)]
    basis = []
    for col in range(n):
        sel = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        while len(sel) > 1:
            sel.sort(key=lambda r: abs(r[col]))
            a = sel[0]
            nxt = [a]
            for r in sel[1:]:
                q = r[col] // a[col]
                rr = [x - q * y for x, y in zip(r, a)]
                if rr[col] != 0:
                    nxt.append(rr)
                elif any(rr):
                    rest.append(rr)
            sel = nxt
        if not sel:
            raise RuntimeError(f"generators do not have full rank at column {col}")
        piv = sel[0] if sel[0][col] > 0 else [-x for x in sel[0]]
        basis.append(piv)
        rows = rest
    return basis


def gram_of_rows(rows, form, scale2):
    """Gram of rational rows (given as integers/scale) under a bilinear form."""
    n = len(rows)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        fi = [sum(form[a][b] * rows[i][b] for b in range(len(form)))
              for a in range(len(form))]
        for j in range(i, n):
            v = sum(fi[a] * rows[j][a] for a in range(len(form)))
            num, den = divmod(v, scale2)
            if den:
                raise RuntimeError("basis Gram is not integral")
            out[i][j] = out[j][i] = num
    return out


def size_reduce(gram, delta=Fraction(3, 4)):
    """Exact LLL reduction operating on the Gram matrix; returns new Gram."""
    n = len(gram)
    g = [[Fraction(x) for x in row] for row in gram]

    def translate(i, j, q):
        # b_i <- b_i - q b_j
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
            q = (2 * mu[k][j] + 1).__floor__() // 2  # nearest integer
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
    return [[int(x) for x in row] for row in g]


# ---------------------------------------------------------------------------
# binary and ternary Golay codes from cyclic quadratic-residue factors

def _poly_divmod_gf(num, den, q):
    num = num[:]
    dn = len(den) - 1
    inv = pow(den[-1], q - 2, q)
    quo = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i] * inv % q
        quo[i - dn] = c
        if c:
            for k in range(dn + 1):
                num[i - dn + k] = (num[i - dn + k] - c * den[k]) % q
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return quo, num


def _cyclic_factor(n, q, degree):
    """A degree-`degree` irreducible-ish factor of x^n - 1 over GF(q)."""
    xn1 = [0] * (n + 1)
    xn1[0] = q - 1
    xn1[n] = 1
    for mask in range(q ** degree):
        cand = []
        m = mask
        for _ in range(degree):
            cand.append(m % q)
            m //= q
        cand.append(1)
        if cand[0] == 0:
            continue
        _, rem = _poly_divmod_gf(xn1, cand, q)
        if rem == [0]:
            return cand
    raise RuntimeError("no factor found")


def binary_golay():
    """Extended [24,12,8] code as a list of 12 basis words (length-24 0/1)."""
    g = _cyclic_factor(23, 2, 11)
    basis = []
    for i in range(12):
        word = [0] * 23
        for k, c in enumerate(g):
            word[(i + k) % 23] ^= c
        word.append(sum(word) % 2)
        basis.append(word)
    # verify weight distribution of the full code
    words = set()
    for mask in range(1 << 12):
        w = [0] * 24
        for i in range(12):
            if mask >> i & 1:
                w = [a ^ b for a, b in zip(w, basis[i])]
        words.add(tuple(w))
    weights = {sum(w) for w in words}
    assert len(words) == 4096 and weights == {0, 8, 12, 16, 24}, weights
    return basis


def ternary_golay():
    """Extended self-dual [12,6] ternary code as 6 basis words over GF(3)."""
    g = _cyclic_factor(11, 3, 5)
    for sign in (1, 2):
        basis = []
        for i in range(6):
            word = [0] * 11
            for k, c in enumerate(g):
                word[(i + k) % 11] = (word[(i + k) % 11] + c) % 3
            word.append(sign * sum(word) % 3)
            basis.append(word)
        words = set()
        for mask in range(3 ** 6):
            w = [0] * 12
            m = mask
            for i in range(6):
                d = m % 3
                m //= 3
                w = [(a + d * b) % 3 for a, b in zip(w, basis[i])]
            words.add(tuple(w))
        ok = all(sum(a * b for a, b in zip(u, v)) % 3 == 0
                 for u in basis for v in basis)
        weights = {sum(1 for x in w if x) for w in words}
        if ok and len(words) == 729 and weights == {0, 6, 9, 12}:
            return basis
    raise RuntimeError("ternary Golay extension failed")


# ---------------------------------------------------------------------------
# glue machinery

class Block:
    """A root block with its dual-quotient elements and their coset norms."""

    def __init__(self, kind, n):
        self.kind, self.n = kind, n
        if kind == "A":
            self.gram = gram_A(n)
        elif kind == "D":
            self.gram = gram_D(n)
        elif kind == "E" and n == 6:
            self.gram = gram_E6()
        elif kind == "E" and n == 7:
            self.gram = gram_E7()
        elif kind == "E" and n == 8:
            self.gram = gram_E8()
        else:
            raise ValueError((kind, n))
        inv = mat_inv(self.gram)
        r = len(self.gram)

        def col(j):
            return tuple(inv[i][j] for i in range(r))

        def frac(vec):
            return tuple(x - x.__floor__() for x in vec)

        def add(u, v):
            return frac(tuple(a + b for a, b in zip(u, v)))

        zero = tuple(Fraction(0) for _ in range(r))
        if kind == "A":
            expected_det = n + 1
        elif kind == "D":
            expected_det = 4
        else:
            expected_det = {6: 3, 7: 2, 8: 1}[n]
        assert int_det(self.gram) == expected_det, (kind, n)
        if kind == "A":
            w1 = frac(col(0))  # end-node weight generates the cyclic quotient
            elems = [(zero, Fraction(0))]
            cur = zero
            for k in range(1, n + 1):
                cur = add(cur, w1)
                elems.append((cur, Fraction(k * (n + 1 - k), n + 1)))
        elif kind == "D" and n % 2 == 0:
            v = frac(col(0))
            s = frac(col(r - 2))
            elems = [(zero, Fraction(0)), (v, Fraction(1)),
                     (s, Fraction(n, 4)), (add(v, s), Fraction(n, 4))]
        elif kind == "D":
            s = frac(col(r - 1))
            two = add(s, s)
            elems = [(zero, Fraction(0)), (s, Fraction(n, 4)),
                     (two, Fraction(1)), (add(two, s), Fraction(n, 4))]
        elif kind == "E" and n == 6:
            j = min((c for c in range(r) if any(x.denominator > 1 for x in col(c))),
                    key=lambda c: inv[c][c])
            w = frac(col(j))
            elems = [(zero, Fraction(0)), (w, Fraction(4, 3)),
                     (add(w, w), Fraction(4, 3))]
        elif kind == "E" and n == 7:
            j = min((c for c in range(r) if any(x.denominator > 1 for x in col(c))),
                    key=lambda c: inv[c][c])
            w = frac(col(j))
            elems = [(zero, Fraction(0)), (w, Fraction(3, 2))]
        else:
            elems = [(zero, Fraction(0))]
        self.elems = elems
        self.index = {vec: i for i, (vec, _) in enumerate(elems)}
        d = len(elems)
        self.add_table = [[self.index[add(elems[i][0], elems[j][0])]
                           for j in range(d)] for i in range(d)]
        self.pair = [[self._pairing(elems[i][0], elems[j][0])
                      for j in range(d)] for i in range(d)]

    def _pairing(self, u, v):
        r = len(self.gram)
        val = sum(u[a] * self.gram[a][b] * v[b]
                  for a in range(r) for b in range(r))
        return val - val.__floor__()


def glue_search(blocks, target, rng, tries=40000):
    """Randomized span growth: even norms >= 4, integral pairings, size target."""
    sizes = [len(b.elems) for b in blocks]
    zero = tuple(0 for _ in blocks)

    def norm(g):
        return sum(b.elems[i][1] for b, i in zip(blocks, g))

    def good(g):
        q = norm(g)
        return g == zero or (q.denominator == 1 and q.numerator % 2 == 0
                             and q >= 4)

    def pairing_ok(g, h):
        v = sum(b.pair[i][j] for b, i, j in zip(blocks, g, h))
        return v.denominator == 1

    def add(g, h):
        return tuple(b.add_table[i][j] for b, i, j in zip(blocks, g, h))

    def closure(gens):
        seen = {zero}
        frontier = [zero]
        while frontier:
            nxt = []
            for g in frontier:
                for h in gens:
                    s = add(g, h)
                    if s not in seen:
                        if len(seen) >= target:
                            return None
                        seen.add(s)
                        nxt.append(s)
            frontier = nxt
        return seen

    def random_word():
        return tuple(rng.randrange(s) for s in sizes)

    best = None
    for _ in range(tries):
        gens = []
        span = {zero}
        stall = 0
        while len(span) < target and stall < 400:
            g = random_word()
            if not good(g) or g in span:
                stall += 1
                continue
            if not all(pairing_ok(g, h) for h in gens + [g]):
                stall += 1
                continue
            cl = closure(gens + [g])
            if cl is None or not all(good(x) for x in cl) \
                    or not all(pairing_ok(x, y) for x in gens + [g] for y in gens + [g]):
                stall += 1
                continue
            gens.append(g)
            span = cl
        if len(span) == target:
            return gens
        best = max(best or 0, len(span))
    raise RuntimeError(f"glue search failed (best span {best}/{target})")


def build_glued(name, comps, code_gens=None, rng=None):
    """Assemble a glued lattice from blocks and (found or given) glue words."""
    blocks = [Block(kind, n) for kind, n in comps]
    det = 1
    for b in blocks:
        det *= int_det(b.gram)
    import math
    target = math.isqrt(det)
    assert target * target == det, "glue group has no self-dual code size"
    if code_gens is None:
        code_gens = glue_search(blocks, target, rng or random.Random(7))
    form = block_sum(*[b.gram for b in blocks])
    N = len(form)
    scale = 1
    for b in blocks:
        for vec, _ in b.elems:
            for x in vec:
                scale = scale * x.denominator // math.gcd(scale, x.denominator)
    gens = [[scale * int(i == j) for j in range(N)] for i in range(N)]
    for g in code_gens:
        row = []
        for b, i in zip(blocks, g):
            row.extend(b.elems[i][0])
        gens.append([int(x * scale) for x in row])
    basis = hnf_rows(gens, N)
    gram = gram_of_rows(basis, form, scale * scale)
    gram = size_reduce(gram)
    return EvenLattice.from_rows(name, gram)


# ---------------------------------------------------------------------------
# individual builders

def build_d16plus():
    n = 16
    gens = [[0] * n for _ in range(n)]
    for i in range(15):
        gens[i][i] = 2
        gens[i][i + 1] = -2
    gens[15][14] = gens[15][15] = 2
    gens.append([1] * 16)  # twice the all-halves glue vector
    form = [[int(i == j) for j in range(n)] for i in range(n)]
    basis = hnf_rows(gens, n)
    gram = gram_of_rows(basis, form, 4)
    return EvenLattice.from_rows("d16plus", size_reduce(gram),
                                 aut_order=2 ** 15 * 20922789888000)


def build_leech(golay_basis):
    n = 24

    def golay_member(bits):
        # bits: tuple of 24 ints 0/1; membership via the basis (GF(2) solve)
        vec = list(bits)
        for row in _golay_echelon:
            piv = next(i for i, x in enumerate(row) if x)
            if vec[piv]:
                vec = [a ^ b for a, b in zip(vec, row)]
        return not any(vec)

    def is_leech_x8(x):
        # x = sqrt(8) * vector; integer coordinates
        m = x[0] % 2
        if any(xi % 2 != m for xi in x):
            return False
        supp = tuple((xi - m) // 2 % 2 for xi in x)
        if not golay_member(supp):
            return False
        return sum(x) % 8 == 4 * m

    gens = []
    v = [1] * 24
    v[0] = -3
    gens.append(v)
    for w in golay_basis:
        gens.append([2 * b for b in w])
    for i in range(1, 24):
        row = [0] * 24
        row[0] = 4
        row[i] = 4
        gens.append(row)
    row = [0] * 24
    row[0] = 8
    gens.append(row)
    for g in gens:
        assert is_leech_x8(g), g
    form = [[int(i == j) for j in range(n)] for i in range(n)]
    basis = hnf_rows(gens, n)
    for b in basis:
        assert is_leech_x8(b), b
    gram = gram_of_rows(basis, form, 8)
    return EvenLattice.from_rows("leech", size_reduce(gram))


NIEMEIER = [
    ("niemeier_d24", [("D", 24)], 46),
    ("niemeier_d16e8", [("D", 16), ("E", 8)], 30),
    ("niemeier_e8e8e8", [("E", 8), ("E", 8), ("E", 8)], 30),
    ("niemeier_a24", [("A", 24)], 25),
    ("niemeier_d12d12", [("D", 12), ("D", 12)], 22),
    ("niemeier_a17e7", [("A", 17), ("E", 7)], 18),
    ("niemeier_d10e7e7", [("D", 10), ("E", 7), ("E", 7)], 18),
    ("niemeier_a15d9", [("A", 15), ("D", 9)], 16),
    ("niemeier_d8d8d8", [("D", 8), ("D", 8), ("D", 8)], 14),
    ("niemeier_a12a12", [("A", 12), ("A", 12)], 13),
    ("niemeier_a11d7e6", [("A", 11), ("D", 7), ("E", 6)], 12),
    ("niemeier_e6e6e6e6", [("E", 6)] * 4, 12),
    ("niemeier_a9a9d6", [("A", 9), ("A", 9), ("D", 6)], 10),
    ("niemeier_d6d6d6d6", [("D", 6)] * 4, 10),
    ("niemeier_a8a8a8", [("A", 8)] * 3, 9),
    ("niemeier_a7a7d5d5", [("A", 7), ("A", 7), ("D", 5), ("D", 5)], 8),
    ("niemeier_a6a6a6a6", [("A", 6)] * 4, 7),
    ("niemeier_a5a5a5a5d4", [("A", 5)] * 4 + [("D", 4)], 6),
    ("niemeier_d4d4d4d4d4d4", [("D", 4)] * 6, 6),
    ("niemeier_a4x6", [("A", 4)] * 6, 5),
    ("niemeier_a3x8", [("A", 3)] * 8, 4),
    ("niemeier_a2x12", [("A", 2)] * 12, 3),
    ("niemeier_a1x24", [("A", 1)] * 24, 2),
]


def roots_of(comps):
    total = 0
    for kind, n in comps:
        if kind == "A":
            total += n * (n + 1)
        elif kind == "D":
            total += 2 * n * (n - 1)
        else:
            total += {6: 72, 7: 126, 8: 240}[n]
    return total


def verify(lat, det, roots, name):
    assert lat.det() == det, (name, lat.det())
    sv = short_vectors(lat, 2)
    got = sv.get(2, 0)
    assert got == roots, (name, got, roots)
    print(f"  verified {name}: rank {lat.rank}, det {det}, roots {got}")


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    out = []

    out.append(EvenLattice.from_rows("a1", gram_A(1), aut_order=2))
    out.append(EvenLattice.from_rows("a2", gram_A(2), aut_order=12))
    out.append(EvenLattice.from_rows("a4", gram_A(4), aut_order=240))
    out.append(EvenLattice.from_rows("d4", gram_D(4), aut_order=1152))
    out.append(EvenLattice.from_rows("e8", gram_E8(), aut_order=E8_AUT))
    out.append(EvenLattice.from_rows(
        "e8e8", block_sum(gram_E8(), gram_E8()), aut_order=2 * E8_AUT ** 2))
    out.append(build_d16plus())
    out.append(EvenLattice.from_rows("e8a4", block_sum(gram_E8(), gram_A(4))))

    verify(out[0], 2, 2, "a1")
    verify(out[1], 3, 6, "a2")
    verify(out[2], 5, 20, "a4")
    verify(out[3], 4, 24, "d4")
    verify(out[4], 1, 240, "e8")
    verify(out[5], 1, 480, "e8e8")
    verify(out[6], 1, 480, "d16plus")
    verify(out[7], 5, 260, "e8a4")

    print("building Golay codes ...")
    gb = binary_golay()
    global _golay_echelon
    _golay_echelon = []
    rows = [list(w) for w in gb]
    for col in range(24):
        sel = [r for r in rows if r[col]]
        if not sel:
            continue
        piv = sel[0]
        rows = [([a ^ b for a, b in zip(r, piv)] if r[col] and r is not piv else r)
                for r in rows]
        rows = [r for r in rows if any(r)]
        if piv in rows:
            rows.remove(piv)
        _golay_echelon.append(piv)
    tg = ternary_golay()
    print("  binary and ternary Golay verified")

    rng = random.Random(20250809)
    for name, comps, h in NIEMEIER:
        expect_roots = roots_of(comps)
        assert expect_roots == 24 * h, (name, expect_roots, 24 * h)
        if name == "niemeier_a1x24":
            code = [tuple(w) for w in gb]
        elif name == "niemeier_a2x12":
            code = [tuple(w) for w in tg]
        else:
            code = None
        lat = build_glued(name, comps, code_gens=code, rng=rng)
        verify(lat, 1, expect_roots, name)
        out.append(lat)

    print("building leech ...")
    leech = build_leech(gb)
    assert leech.det() == 1
    sv = short_vectors(leech, 4)
    assert sv.get(2, 0) == 0 and sv.get(4, 0) == 196560, sv
    print(f"  verified leech: det 1, no roots, {sv.get(4, 0)} norm-4 vectors")
    out.append(leech)

    for lat in out:
        (DATA / f"{lat.name}.lat").write_text(lattice_to_text(lat))
    (DATA / "e8.genus").write_text(
        "genusfile 1\nname e8\nlattice e8\n")
    (DATA / "rank16.genus").write_text(
        "genusfile 1\nname rank16\nlattice e8e8\nlattice d16plus\n")
    lines = ["genusfile 1", "name niemeier"]
    for name, _, _ in NIEMEIER:
        lines.append(f"lattice {name}")
    lines.append("lattice leech")
    (DATA / "niemeier.genus").write_text("\n".join(lines) + "\n")
    print(f"wrote {len(out)} lattice files and 3 genus files to {DATA}")


_golay_echelon = []

if __name__ == "__main__":
    main()
