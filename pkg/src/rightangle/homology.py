"""Exact rank computation and Betti numbers over GF(2) and Q.

GF(2) ranks use bit-packed elimination (one Python integer per row, so
XOR works a machine word at a time).  Rational ranks are computed modulo
two independent random primes above 2^20 and escalate to exact
fraction-free elimination when the two disagree.  Smith normal form is
provided for small matrices only; the big boundary complexes are handled
through ranks.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np


class HomologyError(ValueError):
    pass


@dataclass
class SparseIntMatrix:
    rows: int
    cols: int
    entries: dict = field(default_factory=dict)  # (r, c) -> nonzero int

    @staticmethod
    def from_entries(rows, cols, items):
        ent = {}
        for r, c, v in items:
            if not (0 <= r < rows and 0 <= c < cols):
                raise HomologyError(f"entry ({r},{c}) out of range")
            if (r, c) in ent:
                raise HomologyError(f"duplicate entry at ({r},{c})")
            if v:
                ent[(r, c)] = int(v)
        return SparseIntMatrix(rows, cols, ent)

    def to_numpy(self):
        a = np.zeros((self.rows, self.cols), dtype=np.int64)
        for (r, c), v in self.entries.items():
            a[r, c] = v
        return a

    def to_dense(self):
        a = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            a[r][c] = v
        return a

    def bitrows_mod2(self):
        rows = [0] * self.rows
        for (r, c), v in self.entries.items():
            if v % 2:
                rows[r] ^= 1 << c
        return rows

    def multiply(self, other):
        if self.cols != other.rows:
            raise HomologyError("shape mismatch in multiply")
        by_row = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        out = {}
        for (r, c), v in self.entries.items():
            for (c2, v2) in by_row.get(c, ()):
                key = (r, c2)
                out[key] = out.get(key, 0) + v * v2
        out = {k: v for k, v in out.items() if v}
        return SparseIntMatrix(self.rows, other.cols, out)

    def is_zero(self):
        return not self.entries

    def nnz(self):
        return len(self.entries)


def rank_gf2(mat):
    """Rank over GF(2) via bit-packed elimination, lowest-column pivots."""
    if isinstance(mat, SparseIntMatrix):
        rows = mat.bitrows_mod2()
    else:
        rows = list(mat)
    pivots = {}  # pivot column -> row value
    rank = 0
    for row in rows:
        while row:
            low = row & -row
            piv = pivots.get(low)
            if piv is None:
                pivots[low] = row
                rank += 1
                break
            row ^= piv
    return rank


def _is_probable_prime(n):
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_prime(rng, lo=1 << 20, hi=1 << 24):
    while True:
        cand = rng.randrange(lo | 1, hi, 2)
        if _is_probable_prime(cand):
            return cand


def rank_mod_p(mat, p):
    a = mat.to_numpy() % p
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        below = a[r + 1:, c]
        mask = below != 0
        if mask.any():
            factors = (below[mask] * inv) % p
            a[r + 1:][mask] = (a[r + 1:][mask]
                               - factors[:, None] * a[r][None, :]) % p
        r += 1
    return r


def rank_fraction_free(mat):
    """Exact rank by Bareiss elimination with big integers."""
    a = [row[:] for row in mat.to_dense()]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    r = 0
    prev = 1
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, rows):
            if not any(a[i][c:]):
                continue
            for j in range(cols - 1, c - 1, -1):
                a[i][j] = (a[i][j] * a[r][c] - a[i][c] * a[r][j]) // prev
        prev = a[r][c]
        r += 1
        if r == rows:
            break
    return r


def rank_rational(mat, rng=None):
    """Rank over Q: two independent random primes, exact fallback."""
    if mat.rows == 0 or mat.cols == 0 or not mat.entries:
        return 0
    rng = rng or random.Random(0x5eed)
    p1 = random_prime(rng)
    p2 = random_prime(rng)
    while p2 == p1:
        p2 = random_prime(rng)
    r1 = rank_mod_p(mat, p1)
    r2 = rank_mod_p(mat, p2)
    if r1 == r2:
        return r1
    return rank_fraction_free(mat)


def smith_normal_form(mat, cap=2000, with_transforms=False):
    """Invariant factors d1 | d2 | ... of an integer matrix.

    Dense textbook reduction; refuses matrices beyond `cap` in either
    dimension.  With `with_transforms`, returns (factors, U, V) where
    U * M * V is the diagonal form (U, V unimodular, as dense lists).
    """
    if mat.rows > cap or mat.cols > cap:
        raise HomologyError(
            f"matrix {mat.rows}x{mat.cols} exceeds the SNF cap {cap}")
    a = [row[:] for row in mat.to_dense()]
    n, m = mat.rows, mat.cols
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    v = [[int(i == j) for j in range(m)] for i in range(m)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(n, m):
        # find the nonzero entry of least magnitude in the remaining block
        best = None
        for i in range(t, n):
            for j in range(t, m):
                if a[i][j] and (best is None
                                or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, n):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(t, i, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, m):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(t, j, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        dirty = True
        if a[t][t] < 0:
            negate_row(t)
        # enforce divisibility d_t | d_{t+1}
        if t > 0 and a[t][t] % a[t - 1][t - 1] != 0:
            add_col(t, t - 1, 1)
            t -= 2
        t += 1

    factors = []
    for i in range(min(n, m)):
        if a[i][i]:
            factors.append(abs(a[i][i]))
    if with_transforms:
        return factors, u, v
    return factors


def integer_kernel_basis(mat, cap=2000):
    """Basis of the integer kernel, via the SNF column transform."""
    factors, _, v = smith_normal_form(mat, cap=cap, with_transforms=True)
    rank = len(factors)
    basis = []
    for j in range(rank, mat.cols):
        basis.append([v[i][j] for i in range(mat.cols)])
    return basis


@dataclass
class BettiVector:
    field: str  # "gf2" or "rational"
    values: tuple

    def chi(self):
        return sum((-1) ** i * b for i, b in enumerate(self.values))


def betti(complex_or_mats, fieldname, fast=False):
    """Betti numbers from boundary matrices.

    Input is either a QuotientCWComplex (attribute `boundary`, dict of
    SparseIntMatrix by degree, plus `cells`) or a plain dict of matrices
    together with cell counts: {"counts": [...], "boundary": {d: M}}.

    Slow path: b_d = n_d - rank d_d - rank d_{d+1} in every degree.
    Fast rational path (closed orientable 4-manifolds only): b_0, b_1
    from the two lowest boundary maps, then duality and the Euler
    characteristic fill in the rest; both paths agree when both run.
    """
    if fieldname not in ("gf2", "rational"):
        raise HomologyError(f"unknown field {fieldname!r}")
    if hasattr(complex_or_mats, "boundary"):
        counts = [len(complex_or_mats.cells[d])
                  for d in range(complex_or_mats.dim + 1)]
        boundary = complex_or_mats.boundary
        orientable = getattr(complex_or_mats, "orientable", False)
    else:
        counts = list(complex_or_mats["counts"])
        boundary = complex_or_mats["boundary"]
        orientable = complex_or_mats.get("orientable", False)
    top = len(counts) - 1

    def rank_of(d):
        m = boundary.get(d)
        if m is None or m.is_zero():
            return 0
        return rank_gf2(m) if fieldname == "gf2" else rank_rational(m)

    if fast:
        if fieldname != "rational":
            raise HomologyError("fast path is rational-only")
        if top != 4:
            raise HomologyError("fast path needs a 4-complex")
        if not orientable:
            raise HomologyError("fast path needs a closed orientable input")
        chi = sum((-1) ** d * n for d, n in enumerate(counts))
        r1 = rank_of(1)
        r2 = rank_of(2)
        b0 = counts[0] - r1
        b1 = counts[1] - r1 - r2
        if b0 != 1:
            raise HomologyError("fast path expects a connected complex")
        b2 = chi - 2 * b0 + 2 * b1
        return BettiVector(fieldname, (b0, b1, b2, b1, b0))

    ranks = [rank_of(d) for d in range(top + 2)]
    values = tuple(counts[d] - ranks[d] - ranks[d + 1]
                   for d in range(top + 1))
    if any(v < 0 for v in values):
        raise HomologyError(f"negative Betti number from ranks {ranks}")
    return BettiVector(fieldname, values)


def homology_report(x, fields=("gf2", "rational"), fast_rational=False):
    """Key/value report with cell counts, ranks, Betti vectors and chi."""
    t0 = time.monotonic()
    lines = []
    counts = [len(x.cells[d]) for d in range(x.dim + 1)]
    for d, n in enumerate(counts):
        lines.append(f"cells {d} {n}")
    chi = sum((-1) ** d * n for d, n in enumerate(counts))
    lines.append(f"chi {chi}")
    result = {}
    for fieldname in fields:
        for d in range(1, x.dim + 1):
            m = x.boundary.get(d)
            r = 0
            if m is not None and not m.is_zero():
                r = rank_gf2(m) if fieldname == "gf2" else rank_rational(m)
            lines.append(f"rank {fieldname} {d} {r}")
        bv = betti(x, fieldname,
                   fast=(fast_rational and fieldname == "rational"))
        result[fieldname] = bv
        lines.append(f"betti {fieldname} " + " ".join(str(b)
                                                      for b in bv.values))
        if bv.chi() != chi:
            raise HomologyError(
                f"betti alternating sum {bv.chi()} != chi {chi}")
    lines.append(f"time_ms {int((time.monotonic() - t0) * 1000)}")
    return lines, result


def chi_from_counts(counts):
    return sum((-1) ** d * n for d, n in enumerate(counts))


def betti_mod2_from_integral(boundary, counts):
    """Universal-coefficients oracle: GF(2) Betti numbers from the
    invariant factors of the integral boundary maps (small inputs)."""
    top = len(counts) - 1
    factors = {}
    ranks = {}
    for d in range(1, top + 1):
        m = boundary.get(d)
        if m is None or m.is_zero():
            factors[d] = []
            ranks[d] = 0
        else:
            f = smith_normal_form(m)
            factors[d] = f
            ranks[d] = len(f)
    ranks[0] = 0
    ranks[top + 1] = 0
    factors[0] = []
    factors[top + 1] = []
    out = []
    for d in range(top + 1):
        bq = counts[d] - ranks[d] - ranks[d + 1]
        even_here = sum(1 for f in factors[d + 1] if f % 2 == 0)
        even_below = sum(1 for f in factors[d] if f % 2 == 0)
        out.append(bq + even_here + even_below)
    return tuple(out)


def betti_rational_from_integral(boundary, counts):
    top = len(counts) - 1
    ranks = {0: 0, top + 1: 0}
    for d in range(1, top + 1):
        m = boundary.get(d)
        ranks[d] = 0 if (m is None or m.is_zero()) else len(
            smith_normal_form(m))
    return tuple(counts[d] - ranks[d] - ranks[d + 1] for d in range(top + 1))


def poincare_duality_gf2(bv):
    return tuple(reversed(bv)) == tuple(bv)


def weighted_euler(strata_data, k):
    """chi of the quotient as 2^k * sum over base cells of
    (-1)^dim 2^(-rank stab), evaluated exactly."""
    total = Fraction(0)
    for dim, rank in strata_data:
        total += Fraction((-1) ** dim, 2 ** rank)
    total *= Fraction(2) ** k
    if total.denominator != 1:
        raise HomologyError("weighted Euler characteristic is not integral")
    return int(total)
