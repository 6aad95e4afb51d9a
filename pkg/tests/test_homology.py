import random
from fractions import Fraction

import pytest

from conftest import hexagon_selfglued, pentagon_pair

from rightangle import colouring as co
from rightangle import corners as cr
from rightangle import homology as ho
from rightangle import orbit as ob
from rightangle.homology import SparseIntMatrix
from rightangle.polytopes import catalog_load


def dense_to_sparse(rows):
    r = len(rows)
    c = len(rows[0]) if r else 0
    return SparseIntMatrix.from_entries(
        r, c, [(i, j, v) for i, row in enumerate(rows)
               for j, v in enumerate(row) if v])


def naive_gf2_rank(rows, cols):
    """Textbook elimination on 0/1 lists, no packing."""
    a = [row[:] for row in rows]
    rank = 0
    pr = 0
    for c in range(cols):
        piv = next((i for i in range(pr, len(a)) if a[i][c] % 2), None)
        if piv is None:
            continue
        a[pr], a[piv] = a[piv], a[pr]
        for i in range(len(a)):
            if i != pr and a[i][c] % 2:
                a[i] = [(x + y) % 2 for x, y in zip(a[i], a[pr])]
        pr += 1
        rank += 1
    return rank


def fraction_gauss_rank(rows):
    a = [[Fraction(v) for v in row] for row in rows]
    rank = 0
    pr = 0
    cols = len(a[0]) if a else 0
    for c in range(cols):
        piv = next((i for i in range(pr, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[pr], a[piv] = a[piv], a[pr]
        for i in range(len(a)):
            if i != pr and a[i][c]:
                f = a[i][c] / a[pr][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[pr])]
        pr += 1
        rank += 1
    return rank


def test_rank_gf2_trivial():
    assert ho.rank_gf2(SparseIntMatrix(3, 4, {})) == 0
    eye = dense_to_sparse([[1 if i == j else 0 for j in range(5)]
                           for i in range(5)])
    assert ho.rank_gf2(eye) == 5


def test_rank_gf2_random_vs_naive():
    rng = random.Random(2024)
    rows = [[rng.randrange(2) for _ in range(300)] for _ in range(300)]
    m = dense_to_sparse(rows)
    assert ho.rank_gf2(m) == naive_gf2_rank(rows, 300)


def test_rank_rational_examples():
    m = dense_to_sparse([[2, 4], [1, 2]])
    assert ho.rank_rational(m) == 1
    doubled = dense_to_sparse([[2]])
    assert ho.rank_rational(doubled) == 1
    assert ho.rank_gf2(doubled) == 0


def test_rank_rational_random_vs_fraction_gauss():
    rng = random.Random(99)
    for _ in range(10):
        rows = [[rng.randrange(-4, 5) for _ in range(40)]
                for _ in range(40)]
        m = dense_to_sparse(rows)
        assert ho.rank_rational(m) == fraction_gauss_rank(rows)


from hypothesis import given, settings
from hypothesis import strategies as st


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(0, 1), min_size=8, max_size=8),
                min_size=1, max_size=10),
       st.randoms(use_true_random=False))
def test_rank_gf2_invariant_under_row_shuffle(rows, rng):
    m = dense_to_sparse(rows)
    base = ho.rank_gf2(m)
    shuffled = rows[:]
    rng.shuffle(shuffled)
    assert ho.rank_gf2(dense_to_sparse(shuffled)) == base
    # duplicating a row never changes the rank
    assert ho.rank_gf2(dense_to_sparse(rows + [rows[0]])) == base


def test_rank_rational_metamorphic():
    rng = random.Random(4)
    rows = [[rng.randrange(-3, 4) for _ in range(30)] for _ in range(25)]
    m = dense_to_sparse(rows)
    base = ho.rank_rational(m)
    perm_r = list(range(25))
    perm_c = list(range(30))
    rng.shuffle(perm_r)
    rng.shuffle(perm_c)
    shuffled = [[rows[perm_r[i]][perm_c[j]] for j in range(30)]
                for i in range(25)]
    neg_row = rng.randrange(25)
    shuffled[neg_row] = [-v for v in shuffled[neg_row]]
    assert ho.rank_rational(dense_to_sparse(shuffled)) == base


def test_fraction_free_matches_modular():
    rng = random.Random(12)
    rows = [[rng.randrange(-5, 6) for _ in range(20)] for _ in range(20)]
    m = dense_to_sparse(rows)
    assert ho.rank_fraction_free(m) == fraction_gauss_rank(rows)


def test_smith_examples():
    m = dense_to_sparse([[2, 0], [0, 3]])
    assert ho.smith_normal_form(m) == [1, 6]
    z = SparseIntMatrix(3, 3, {})
    assert ho.smith_normal_form(z) == []
    with pytest.raises(ho.HomologyError):
        ho.smith_normal_form(SparseIntMatrix(3000, 2, {}), cap=2000)


def test_smith_random_properties():
    rng = random.Random(31)
    for _ in range(20):
        r = rng.randrange(1, 8)
        c = rng.randrange(1, 8)
        rows = [[rng.randrange(-6, 7) for _ in range(c)] for _ in range(r)]
        m = dense_to_sparse(rows)
        factors, u, v = ho.smith_normal_form(m, with_transforms=True)
        for a, b in zip(factors, factors[1:]):
            assert b % a == 0
        # U * M * V is the claimed diagonal
        dense = m.to_dense()
        um = [[sum(u[i][k] * dense[k][j] for k in range(r))
               for j in range(c)] for i in range(r)]
        umv = [[sum(um[i][k] * v[k][j] for k in range(c))
                for j in range(c)] for i in range(r)]
        for i in range(r):
            for j in range(c):
                want = factors[i] if (i == j and i < len(factors)) else 0
                assert abs(umv[i][j]) == want
        assert len(factors) == ho.rank_fraction_free(m)


def test_integer_kernel_basis():
    m = dense_to_sparse([[1, 1, 0], [0, 0, 0]])
    basis = ho.integer_kernel_basis(m)
    assert len(basis) == 2
    dense = m.to_dense()
    for vec in basis:
        out = [sum(dense[i][j] * vec[j] for j in range(3)) for i in range(2)]
        assert out == [0, 0]


# -- random chain complexes --------------------------------------------------


def random_chain_complex(rng, max_cells=200):
    """A genuine chain complex: 2-cells attach along closed walks in a
    random graph, 3-cells along random integral 2-cycles."""
    n0 = rng.randrange(3, 12)
    edges = []
    for a in range(n0):
        for b in range(a + 1, n0):
            if rng.random() < 0.5:
                edges.append((a, b))
    # keep it connected enough: spanning path
    for a in range(n0 - 1):
        if (a, a + 1) not in edges:
            edges.append((a, a + 1))
    n1 = len(edges)
    d1 = SparseIntMatrix.from_entries(
        n0, n1, [(b, j, 1) for j, (a, b) in enumerate(edges)]
        + [(a, j, -1) for j, (a, b) in enumerate(edges)])
    adj = {v: [] for v in range(n0)}
    for j, (a, b) in enumerate(edges):
        adj[a].append((b, j, 1))
        adj[b].append((a, j, -1))
    n2 = rng.randrange(2, 10)
    cols2 = []
    for _ in range(n2):
        # random closed walk from a random base point
        col = {}
        v0 = rng.randrange(n0)
        v = v0
        for _ in range(rng.randrange(2, 8)):
            nxt, j, s = rng.choice(adj[v])
            col[j] = col.get(j, 0) + s
            v = nxt
        # walk back to start along the spanning path; edge (a, b) with
        # a < b runs a -> b, so a forward step contributes +1
        while v != v0:
            step = 1 if v < v0 else -1
            a, b = (v, v + 1) if step == 1 else (v - 1, v)
            j = edges.index((a, b))
            col[j] = col.get(j, 0) + step
            v += step
        cols2.append(col)
    entries2 = []
    for j, col in enumerate(cols2):
        for e, mult in col.items():
            if mult:
                entries2.append((e, j, mult))
    d2 = SparseIntMatrix.from_entries(n1, n2, entries2)
    if not d1.multiply(d2).is_zero():
        raise AssertionError("walk boundaries must close")
    # 3-cells: random small combinations of the integral kernel of d2
    kernel = ho.integer_kernel_basis(d2)
    n3 = rng.randrange(0, 4) if kernel else 0
    entries3 = []
    for j in range(n3):
        combo = {}
        for vec in kernel:
            c = rng.randrange(-1, 2)
            if c:
                for i, v in enumerate(vec):
                    if v:
                        combo[i] = combo.get(i, 0) + c * v
        for i, v in combo.items():
            if v:
                entries3.append((i, j, v))
    d3 = SparseIntMatrix.from_entries(n2, n3, entries3)
    counts = [n0, n1, n2, n3]
    boundary = {1: d1, 2: d2, 3: d3}
    assert d2.multiply(d3).is_zero()
    assert sum(counts) <= max_cells
    return counts, boundary


def test_random_complexes_rank_vs_uct_oracle():
    rng = random.Random(777)
    for _ in range(30):
        counts, boundary = random_chain_complex(rng)
        data = {"counts": counts, "boundary": boundary}
        b_gf2 = ho.betti(data, "gf2").values
        b_q = ho.betti(data, "rational").values
        assert b_gf2 == ho.betti_mod2_from_integral(boundary, counts)
        assert b_q == ho.betti_rational_from_integral(boundary, counts)
        chi = ho.chi_from_counts(counts)
        assert sum((-1) ** d * b for d, b in enumerate(b_gf2)) == chi
        assert sum((-1) ** d * b for d, b in enumerate(b_q)) == chi
        assert all(x >= y for x, y in zip(b_gf2, b_q))


def quotient_manifolds():
    out = []
    w = pentagon_pair()
    g = co.adjacency_graph(w)
    out.append(ob.build_quotient(w, co.find_colouring(g, 3).colouring))
    wh = hexagon_selfglued()
    gh = co.adjacency_graph(wh)
    out.append(ob.build_quotient(wh, co.find_colouring(gh, 3).colouring))
    pent = catalog_load("pentagon")
    wp = cr.build([pent], [])
    out.append(ob.build_quotient(
        wp, co.find_colouring(co.adjacency_graph(wp), 3).colouring))
    out.append(ob.build_quotient(wp, co.GeneralisedColouring(
        3, {0: 0b001, 1: 0b010, 2: 0b011, 3: 0b100, 4: 0b110})))
    dod = catalog_load("dodecahedron")
    wd = cr.build([dod], [])
    gd = co.adjacency_graph(wd)
    res = co.find_colouring(gd, 4)
    assert res.status == "found"
    out.append(ob.build_quotient(wd, res.colouring))
    return out


def test_quotient_manifold_invariants():
    for x in quotient_manifolds():
        for d in range(2, x.dim + 1):
            assert x.boundary[d - 1].multiply(x.boundary[d]).is_zero()
        chi = x.euler_characteristic()
        b2 = ho.betti(x, "gf2").values
        bq = ho.betti(x, "rational").values
        assert sum((-1) ** d * b for d, b in enumerate(b2)) == chi
        assert sum((-1) ** d * b for d, b in enumerate(bq)) == chi
        # closed manifolds satisfy GF(2) Poincare duality
        assert tuple(reversed(b2)) == b2
        assert all(x2 >= xq for x2, xq in zip(b2, bq))


def test_betti_fast_path_agrees_on_4_complex():
    # a small closed orientable 4-complex: the quotient of one hexagonal
    # prism analogue is unavailable, so exercise the fast path on a fake
    # complex assembled from a known 4-manifold chain complex: S^2 x S^2
    # CW structure: cells 1,0,2,0,1
    counts = [1, 0, 2, 0, 1]
    boundary = {1: SparseIntMatrix(1, 0, {}), 2: SparseIntMatrix(0, 2, {}),
                3: SparseIntMatrix(2, 0, {}), 4: SparseIntMatrix(0, 1, {})}
    data = {"counts": counts, "boundary": boundary, "orientable": True}
    slow = ho.betti(data, "rational").values
    fast = ho.betti(data, "rational", fast=True).values
    assert slow == fast == (1, 0, 2, 0, 1)
    with pytest.raises(ho.HomologyError):
        ho.betti(data, "gf2", fast=True)


def test_genus3_surface_betti(pentagon_pair_complex):
    x = ob.build_quotient(pentagon_pair_complex, co.find_colouring(
        co.adjacency_graph(pentagon_pair_complex), 3).colouring)
    assert ho.betti(x, "gf2").values == (1, 6, 1)
    assert ho.betti(x, "rational").values == (1, 6, 1)


def test_weighted_euler_exactness():
    # exact rational arithmetic: huge k must not overflow or round
    data = [(0, 3), (1, 1), (2, 0)]
    assert ho.weighted_euler(data, 300) == (
        2 ** 300 // 8 - 2 ** 300 // 2 + 2 ** 300)
    with pytest.raises(ho.HomologyError):
        ho.weighted_euler([(0, 1), (1, 0)], 0)
