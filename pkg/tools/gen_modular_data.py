"""Generate the bundled eigenform and plus-form coefficient files.

Eigenvalues a_p come from the weight-12 discriminant cusp form, expanded
from the product q * prod (1 - q^n)^24.  Plus-form coefficients come from
an independent construction of the weight-13/2 space on the level-4 group:
theta * (weight-6 basis), where theta = sum q^(n^2) and the weight-6 space
is spanned by theta^(12-4b) * F^b with F = sum_{n odd} sigma_1(n) q^n.
The coefficient support condition (indices 0,1 mod 4) cuts a 2-dimensional
subspace; killing the constant term leaves the 1-dimensional cusp piece,
normalized to have first coefficient 1.

Run from the repository root:  python tools/gen_modular_data.py
"""

import sys
from fractions import Fraction
from math import comb, isqrt
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

DATA = Path(__file__).resolve().parent.parent / "src" / "siegellift" / "data"

N_PLUS = 200
P_MAX = 50


def series_mul(a, b, N):
    c = [0] * (N + 1)
    for i, ai in enumerate(a):
        if ai:
            for j in range(min(len(b), N + 1 - i)):
                if b[j]:
                    c[i + j] += ai * b[j]
    return c


def series_pow(a, e, N):
    r = [0] * (N + 1)
    r[0] = 1
    b = a
    while e:
        if e & 1:
            r = series_mul(r, b, N)
        b = series_mul(b, b, N)
        e >>= 1
    return r


def delta_coefficients(N):
    """tau(1..N) from q prod (1-q^n)^24."""
    prod = [0] * (N + 1)
    prod[0] = 1
    for n in range(1, N + 1):
        f = [0] * (N + 1)
        for j in range(0, min(24, N // n) + 1):
            f[j * n] = (-1) ** j * comb(24, j)
        prod = series_mul(prod, f, N)
    return [0] + prod[:N]  # tau[n] for n >= 1, tau[0] unused


def theta_series(N):
    t = [0] * (N + 1)
    t[0] = 1
    for n in range(1, isqrt(N) + 1):
        t[n * n] = 2
    return t


def weight2_oldform(N):
    F = [0] * (N + 1)
    for n in range(1, N + 1, 2):
        F[n] = sum(d for d in range(1, n + 1) if n % d == 0)
    return F


def plus_space_cusp_form(k, N):
    """Coefficients of the normalized plus-space cusp form, weight k + 1/2."""
    theta = theta_series(N)
    F = weight2_oldform(N)
    nb = k // 2 + 1
    basis = [series_mul(series_pow(theta, 2 * k + 1 - 4 * b, N),
                        series_pow(F, b, N), N) for b in range(nb)]
    rows = []
    for eta in range(N + 1):
        if eta % 4 in (2, 3):
            rows.append([Fraction(basis[i][eta]) for i in range(nb)])
    # nullspace of the support constraints
    mat = [r[:] for r in rows]
    pivots = []
    r = 0
    for cidx in range(nb):
        piv = next((i for i in range(r, len(mat)) if mat[i][cidx] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        pv = mat[r][cidx]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][cidx] != 0:
                f = mat[i][cidx]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(cidx)
        r += 1
    free = [cidx for cidx in range(nb) if cidx not in pivots]
    null = []
    for fc in free:
        v = [Fraction(0)] * nb
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -mat[i][fc]
        null.append(v)
    assert len(null) == 2, f"support-constrained space has dimension {len(null)}"
    series = [[sum(v[i] * basis[i][n] for i in range(nb)) for n in range(N + 1)]
              for v in null]
    s0, s1 = series
    cusp = [s1[0] * a - s0[0] * b for a, b in zip(s0, s1)]
    assert cusp[0] == 0 and cusp[1] != 0
    cusp = [x / cusp[1] for x in cusp]
    assert all(cusp[n] == 0 for n in range(N + 1) if n % 4 in (2, 3))
    return cusp


def is_prime(p):
    return p > 1 and all(p % d for d in range(2, isqrt(p) + 1))


def main():
    tau = delta_coefficients(P_MAX + 1)
    lines = ["eigenform 1", "weight 12"]
    for p in range(2, P_MAX + 1):
        if is_prime(p):
            lines.append(f"{p} {tau[p]}")
    (DATA / "delta.eig").write_text("\n".join(lines) + "\n")
    print("wrote delta.eig:", [(p, tau[p]) for p in (2, 3, 5, 7)])

    cusp = plus_space_cusp_form(6, N_PLUS)
    lines = ["plusform 1", "weight-numerator 13"]
    for eta in range(1, N_PLUS + 1):
        if eta % 4 in (0, 1):
            assert cusp[eta].denominator == 1
            lines.append(f"{eta} {cusp[eta]}")
    (DATA / "plusform_k6.plus").write_text("\n".join(lines) + "\n")
    print("wrote plusform_k6.plus:",
          [(n, cusp[n]) for n in (1, 4, 5, 8, 9)])


if __name__ == "__main__":
    main()
