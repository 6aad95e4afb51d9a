"""One-time generators for the catalogued face lattices.

Every catalogued polytope is shipped as a plain-text lattice file (see
`polytopes.load_lattice_file`).  This module regenerates those files from
scratch so the shipped data is reproducible:

* polygons are written down directly;
* the dodecahedron is built as the dual of the icosahedron, whose vertices
  and edges are enumerated with exact arithmetic in Q(sqrt 5);
* the 120-cell is built as the dual of the 600-cell: vertices of the
  600-cell are the 120 unit icosians, edges are the pairs at the known
  edge length, triangles are the 3-cliques and tetrahedra the 4-cliques of
  the edge graph, and the dual reverses the incidences;
* the Loebell polyhedron with hexagonal base is assembled from its two
  hexagon rings and twelve pentagons.

Run ``python -m rightangle.catalog_gen OUTDIR`` to rewrite the files.
"""

from __future__ import annotations

import itertools
import sys
from fractions import Fraction


class Q5:
    """Element a + b*sqrt(5) of the field Q(sqrt 5), exact."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    def __add__(self, other):
        return Q5(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        return Q5(self.a - other.a, self.b - other.b)

    def __mul__(self, other):
        return Q5(self.a * other.a + 5 * self.b * other.b,
                  self.a * other.b + self.b * other.a)

    def __neg__(self):
        return Q5(-self.a, -self.b)

    def __eq__(self, other):
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def key(self):
        # deterministic total order; does not need to match the real order
        return (self.a, self.b)

    def __repr__(self):
        return f"Q5({self.a},{self.b})"


HALF = Fraction(1, 2)
# phi = (1+sqrt5)/2
PHI = Q5(HALF, HALF)
PHI_INV = Q5(-HALF, HALF)  # 1/phi = phi - 1
ZERO = Q5(0)
ONE = Q5(1)


def _sqdist(u, v):
    s = ZERO
    for x, y in zip(u, v):
        d = x - y
        s = s + d * d
    return s


def _even_permutations(n):
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n)
                         if perm[i] > perm[j])
        if inversions % 2 == 0:
            yield perm


def icosahedron_vertices():
    """12 vertices: cyclic permutations of (0, +-1, +-phi)."""
    verts = set()
    base = [ZERO, ONE, PHI]
    for s1 in (1, -1):
        for s2 in (1, -1):
            coords = [ZERO, ONE if s1 > 0 else -ONE, PHI if s2 > 0 else -PHI]
            for shift in range(3):
                v = tuple(coords[(i - shift) % 3] for i in range(3))
                verts.add(v)
    assert len(verts) == 12, len(verts)
    return sorted(verts, key=lambda v: tuple(c.key() for c in v))


def cell600_vertices():
    """The 120 unit icosians (circumradius 1)."""
    verts = set()
    for i in range(4):
        for s in (1, -1):
            v = [ZERO] * 4
            v[i] = ONE if s > 0 else -ONE
            verts.add(tuple(v))
    for signs in itertools.product((1, -1), repeat=4):
        verts.add(tuple(Q5(HALF * s) for s in signs))
    # even permutations of (+-phi/2, +-1/2, +-1/(2phi), 0)
    half = Q5(HALF)
    phi_half = PHI * half
    phi_inv_half = PHI_INV * half
    for s1, s2, s3 in itertools.product((1, -1), repeat=3):
        base = (phi_half if s1 > 0 else -phi_half,
                half if s2 > 0 else -half,
                phi_inv_half if s3 > 0 else -phi_inv_half,
                ZERO)
        for perm in _even_permutations(4):
            verts.add(tuple(base[p] for p in perm))
    assert len(verts) == 120, len(verts)
    return sorted(verts, key=lambda v: tuple(c.key() for c in v))


def _cliques_from_edges(n, adj, edges):
    """Triangles and 4-cliques of a graph given adjacency sets."""
    triangles = []
    for i, j in edges:
        for k in sorted(adj[i] & adj[j]):
            if k > j:
                triangles.append((i, j, k))
    tetrahedra = []
    for i, j, k in triangles:
        for l in sorted(adj[i] & adj[j] & adj[k]):
            if l > k:
                tetrahedra.append((i, j, k, l))
    return triangles, tetrahedra


def _edge_graph(verts, sq_len):
    n = len(verts)
    adj = [set() for _ in range(n)]
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if _sqdist(verts[i], verts[j]) == sq_len:
                adj[i].add(j)
                adj[j].add(i)
                edges.append((i, j))
    return adj, edges


def gen_polygon(n):
    """Lattice of an n-gon: covers[(d, id)] = tuple of subface ids."""
    covers = {}
    for i in range(n):
        covers[(1, i)] = (i, (i + 1) % n)  # edge i joins v_i, v_{i+1}
    covers[(2, 0)] = tuple(range(n))
    return {"dim": 2, "fvector": [n, n], "covers": covers}


def gen_dodecahedron():
    """Dual of the icosahedron."""
    verts = icosahedron_vertices()
    adj, edges = _edge_graph(verts, Q5(4))  # icosa edge^2 = 4 at this scale
    assert len(edges) == 30
    triangles, _ = _cliques_from_edges(len(verts), adj, edges)
    assert len(triangles) == 20
    # dual: vertex <- triangle, edge <- icosa edge, pentagon <- icosa vertex
    tri_id = {t: i for i, t in enumerate(sorted(triangles))}
    edge_id = {e: i for i, e in enumerate(sorted(edges))}
    covers = {}
    for e, ei in edge_id.items():
        ends = sorted(tri_id[t] for t in tri_id
                      if e[0] in t and e[1] in t)
        assert len(ends) == 2
        covers[(1, ei)] = tuple(ends)
    for v in range(len(verts)):
        around = sorted(edge_id[e] for e in edge_id if v in e)
        assert len(around) == 5
        covers[(2, v)] = tuple(around)
    covers[(3, 0)] = tuple(range(len(verts)))
    return {"dim": 3, "fvector": [20, 30, 12], "covers": covers}


def gen_lobell6():
    """Hexagonal Loebell polyhedron: 2 hexagons + 12 pentagons.

    Vertex rings: t (top hexagon) 0-5, u (upper) 6-11, l (lower) 12-17,
    b (bottom hexagon) 18-23.
    """
    def t(i):
        return i % 6

    def u(i):
        return 6 + i % 6

    def l(i):
        return 12 + i % 6

    def b(i):
        return 18 + i % 6

    edges = set()
    for i in range(6):
        edges.add(tuple(sorted((t(i), t(i + 1)))))
        edges.add(tuple(sorted((t(i), u(i)))))
        edges.add(tuple(sorted((u(i), l(i)))))
        edges.add(tuple(sorted((l(i), u(i + 1)))))
        edges.add(tuple(sorted((l(i), b(i)))))
        edges.add(tuple(sorted((b(i), b(i + 1)))))
    edges = sorted(edges)
    assert len(edges) == 36
    edge_id = {e: i for i, e in enumerate(edges)}

    faces = [tuple(t(i) for i in range(6)), tuple(b(i) for i in range(6))]
    for i in range(6):
        faces.append((t(i), t(i + 1), u(i + 1), l(i), u(i)))
    for i in range(6):
        faces.append((b(i), b(i + 1), l(i + 1), u(i + 1), l(i)))

    covers = {}
    for ei, e in enumerate(edges):
        covers[(1, ei)] = e
    for fi, cyc in enumerate(faces):
        m = len(cyc)
        es = sorted(edge_id[tuple(sorted((cyc[j], cyc[(j + 1) % m])))]
                    for j in range(m))
        covers[(2, fi)] = tuple(es)
    covers[(3, 0)] = tuple(range(len(faces)))
    return {"dim": 3, "fvector": [24, 36, 14], "covers": covers}


def gen_120cell():
    """Dual of the 600-cell."""
    verts = cell600_vertices()
    # edge^2 = 2 - phi = (3 - sqrt5)/2 for circumradius 1
    sq_len = Q5(Fraction(3, 2), Fraction(-1, 2))
    adj, edges = _edge_graph(verts, sq_len)
    assert len(edges) == 720, len(edges)
    triangles, tets = _cliques_from_edges(len(verts), adj, edges)
    assert len(triangles) == 1200, len(triangles)
    assert len(tets) == 600, len(tets)

    edge_id = {e: i for i, e in enumerate(sorted(edges))}
    tri_id = {t: i for i, t in enumerate(sorted(triangles))}
    tet_id = {t: i for i, t in enumerate(sorted(tets))}

    tris_of_edge = {e: [] for e in edge_id}
    for tr in tri_id:
        for a, b in itertools.combinations(tr, 2):
            tris_of_edge[(a, b)].append(tr)
    tets_of_tri = {t: [] for t in tri_id}
    for te in tet_id:
        for tr in itertools.combinations(te, 3):
            tets_of_tri[tr].append(te)

    covers = {}
    # dual vertex <- tet, dual edge <- triangle
    for tr, i in tri_id.items():
        ends = sorted(tet_id[te] for te in tets_of_tri[tr])
        assert len(ends) == 2, (tr, ends)
        covers[(1, i)] = tuple(ends)
    # dual pentagon <- 600-cell edge
    for e, i in edge_id.items():
        around = sorted(tri_id[tr] for tr in tris_of_edge[e])
        assert len(around) == 5
        covers[(2, i)] = tuple(around)
    # dual dodecahedral cell <- 600-cell vertex
    for v in range(len(verts)):
        pents = sorted(edge_id[e] for e in edge_id if v in e)
        assert len(pents) == 12
        covers[(3, v)] = tuple(pents)
    covers[(4, 0)] = tuple(range(len(verts)))
    return {"dim": 4, "fvector": [600, 1200, 720, 120], "covers": covers}


GENERATORS = {
    "pentagon": lambda: gen_polygon(5),
    "hexagon": lambda: gen_polygon(6),
    "dodecahedron": gen_dodecahedron,
    "lobell6": gen_lobell6,
    "120cell": gen_120cell,
}


def lattice_text(name, lat):
    lines = [
        "# rightangle catalog lattice",
        f"name {name}",
        f"dim {lat['dim']}",
        "fvector " + " ".join(str(c) for c in lat["fvector"]),
        "covers",
    ]
    for (d, i) in sorted(lat["covers"]):
        for j in lat["covers"][(d, i)]:
            lines.append(f"{d} {i} {j}")
    return "\n".join(lines) + "\n"


def write_all(outdir):
    import os

    os.makedirs(outdir, exist_ok=True)
    for name, gen in GENERATORS.items():
        path = os.path.join(outdir, f"{name}.lat")
        with open(path, "w") as fh:
            fh.write(lattice_text(name, gen()))
        print(f"wrote {path}")


if __name__ == "__main__":
    write_all(sys.argv[1] if len(sys.argv) > 1 else "src/rightangle/data")
