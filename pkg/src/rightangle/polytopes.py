"""Combinatorial face lattices of the catalogued right-angled polytopes.

A polytope is stored purely combinatorially: graded faces indexed
``(dim, id)`` with dense ids per dimension, plus the covering relation.
Right-angledness is an attribute of the catalogue entries and is not
re-verified here.

Orientations are handled through flag parities.  The flags of a face form
a connected graph under "change one level" moves; for a convex polytope
this graph is bipartite, and the 2-colouring anchored at the
lexicographically least flag is used as the reference orientation.  The
incidence sign of a facet in a face, and the sign of a lattice
isomorphism, both fall out of these parities, and the resulting signed
boundary operator squares to zero by construction.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources

CATALOG_FVECTORS = {
    "pentagon": (5, 5),
    "hexagon": (6, 6),
    "dodecahedron": (20, 30, 12),
    "lobell6": (24, 36, 14),
    "120cell": (600, 1200, 720, 120),
}


class LatticeError(ValueError):
    pass


class Polytope:
    """Graded face lattice with covering relation and orientation data."""

    def __init__(self, name, dim, covers):
        self.name = name
        self.dim = dim
        # covers[(d, i)] = tuple of (d-1)-face ids, for 1 <= d <= dim
        self.covers = covers
        self.nfaces = {}
        for d in range(dim + 1):
            ids = {i for (dd, i) in covers if dd == d}
            ids |= {j for (dd, _), subs in covers.items() if dd == d + 1
                    for j in subs}
            self.nfaces[d] = (max(ids) + 1) if ids else 0
        self._check_graded()
        self.cofaces = {}
        for (d, i), subs in covers.items():
            for j in subs:
                self.cofaces.setdefault((d - 1, j), []).append(i)
        for k in self.cofaces:
            self.cofaces[k] = tuple(sorted(self.cofaces[k]))
        self.vertex_sets = self._vertex_sets()
        self.face_by_vertices = {}
        for (d, i), vs in self.vertex_sets.items():
            key = (d, vs)
            if key in self.face_by_vertices:
                raise LatticeError(f"{name}: two {d}-faces share vertex set")
            self.face_by_vertices[key] = i
        self._downsets = {}
        self._flags = {}
        self._parity = {}
        self._diamond = {}
        self._slots_of_face = None

    # -- basic structure ------------------------------------------------

    def _check_graded(self):
        if self.nfaces[self.dim] != 1:
            raise LatticeError(f"{self.name}: expected a single top face")
        for d in range(1, self.dim + 1):
            for i in range(self.nfaces[d]):
                if (d, i) not in self.covers or not self.covers[(d, i)]:
                    raise LatticeError(
                        f"{self.name}: face ({d},{i}) covers nothing")

    def _vertex_sets(self):
        vs = {(0, i): frozenset([i]) for i in range(self.nfaces[0])}
        for d in range(1, self.dim + 1):
            for i in range(self.nfaces[d]):
                acc = frozenset()
                for j in self.covers[(d, i)]:
                    acc |= vs[(d - 1, j)]
                vs[(d, i)] = acc
        return vs

    def fvector(self):
        return tuple(self.nfaces[d] for d in range(self.dim))

    def faces(self, d):
        return range(self.nfaces[d])

    def top(self):
        return (self.dim, 0)

    def downset(self, d, i):
        """All faces (d', id) weakly below (d, i), including itself."""
        key = (d, i)
        if key not in self._downsets:
            acc = {key}
            frontier = [key]
            while frontier:
                dd, ii = frontier.pop()
                if dd == 0:
                    continue
                for j in self.covers[(dd, ii)]:
                    sub = (dd - 1, j)
                    if sub not in acc:
                        acc.add(sub)
                        frontier.append(sub)
            self._downsets[key] = frozenset(acc)
        return self._downsets[key]

    def facets_containing(self, d, i):
        """Facet ids of the polytope whose downset contains face (d, i)."""
        if self._slots_of_face is None:
            table = {(dd, ii): [] for dd in range(self.dim)
                     for ii in self.faces(dd)}
            for f in self.faces(self.dim - 1):
                for key in self.downset(self.dim - 1, f):
                    table[key].append(f)
            self._slots_of_face = {k: tuple(v) for k, v in table.items()}
        return self._slots_of_face.get((d, i), ())

    def check_diamond(self):
        """Every codim-2 interval must contain exactly two middle faces."""
        for d in range(2, self.dim + 1):
            for i in range(self.nfaces[d]):
                middle_count = {}
                for g in self.covers[(d, i)]:
                    for h in self.covers[(d - 1, g)]:
                        middle_count[h] = middle_count.get(h, 0) + 1
                for h, c in middle_count.items():
                    if c != 2:
                        raise LatticeError(
                            f"{self.name}: diamond fails at ({d},{i}) over "
                            f"({d - 2},{h}): {c} middle faces")

    def interval_pair(self, upper, lower):
        """The two faces strictly between a face and a codim-2 subface."""
        key = (upper, lower)
        if key not in self._diamond:
            du, iu = upper
            dl, il = lower
            mids = tuple(g for g in self.covers[(du, iu)]
                         if il in self.covers[(du - 1, g)])
            if len(mids) != 2:
                raise LatticeError(f"{self.name}: no diamond at {key}")
            self._diamond[key] = mids
        return self._diamond[key]

    # -- flags and orientations ------------------------------------------

    def flags(self, d, i):
        """Flags of face (d, i): tuples (v, e, ...) of ids, one per dim < d."""
        key = (d, i)
        if key not in self._flags:
            if d == 0:
                fl = [()]
            else:
                fl = []
                for g in self.covers[(d, i)]:
                    for sub in self.flags(d - 1, g):
                        fl.append(sub + (g,))
            self._flags[key] = sorted(fl)
        return self._flags[key]

    def flag_adjacent(self, face, flag, level):
        """The flag differing from `flag` exactly at `level` inside `face`."""
        d, i = face
        upper = face if level == d - 1 else (level + 1, flag[level + 1])
        if level == 0:
            a, b = self.covers[(1, flag[1])] if d > 1 else self.covers[(1, i)]
            other = b if flag[0] == a else a
        else:
            lower = (level - 1, flag[level - 1])
            a, b = self.interval_pair(upper, lower)
            other = b if flag[level] == a else a
        return flag[:level] + (other,) + flag[level + 1:]

    def flag_parity(self, d, i):
        """2-colouring of the flag graph of face (d, i), anchored at the
        lexicographically least flag."""
        key = (d, i)
        if key not in self._parity:
            fl = self.flags(d, i)
            parity = {fl[0]: 0}
            stack = [fl[0]]
            while stack:
                cur = stack.pop()
                for lvl in range(d):
                    nxt = self.flag_adjacent(key, cur, lvl)
                    p = parity[cur] ^ 1
                    if nxt in parity:
                        if parity[nxt] != p:
                            raise LatticeError(
                                f"{self.name}: non-orientable flag graph "
                                f"at face {key}")
                    else:
                        parity[nxt] = p
                        stack.append(nxt)
            if len(parity) != len(fl):
                raise LatticeError(
                    f"{self.name}: flag graph of {key} is disconnected")
            self._parity[key] = parity
        return self._parity[key]

    def incidence_sign(self, face, subface):
        """Sign of `subface` in the signed boundary of `face` (codim 1)."""
        d, i = face
        dd, j = subface
        assert dd == d - 1
        anchor = self.flags(dd, j)[0]
        par = self.flag_parity(d, i)[anchor + (j,)]
        return -1 if par else 1

    def boundary_pairs(self, face):
        """List of (subface_id, sign) for the signed boundary of `face`."""
        d, i = face
        return [(j, self.incidence_sign(face, (d - 1, j)))
                for j in self.covers[(d, i)]]


@dataclass(frozen=True)
class FaceIso:
    """Incidence-preserving bijection between two faces, as a vertex map.

    `source` and `target` are (Polytope, (dim, id)) pairs; `vmap` sends
    vertex ids of the source face to vertex ids of the target face.
    """

    poly_s: Polytope
    face_s: tuple
    poly_t: Polytope
    face_t: tuple
    vmap: tuple  # sorted tuple of (src_vertex, dst_vertex)

    @staticmethod
    def make(poly_s, face_s, poly_t, face_t, mapping):
        vmap = tuple(sorted(dict(mapping).items()))
        return FaceIso(poly_s, face_s, poly_t, face_t, vmap)

    def mapping(self):
        return dict(self.vmap)

    def is_valid(self):
        try:
            self.require_valid()
            return True
        except LatticeError:
            return False

    def require_valid(self):
        m = self.mapping()
        vs = self.poly_s.vertex_sets[self.face_s]
        vt = self.poly_t.vertex_sets[self.face_t]
        if set(m) != set(vs) or set(m.values()) != set(vt):
            raise LatticeError("vertex map does not match the two faces")
        if len(set(m.values())) != len(m):
            raise LatticeError("vertex map is not injective")
        down_s = self.poly_s.downset(*self.face_s)
        down_t = self.poly_t.downset(*self.face_t)
        per_dim_s = {}
        per_dim_t = {}
        for d, i in down_s:
            per_dim_s[d] = per_dim_s.get(d, 0) + 1
        for d, i in down_t:
            per_dim_t[d] = per_dim_t.get(d, 0) + 1
        if per_dim_s != per_dim_t:
            raise LatticeError("faces have different combinatorial size")
        for d, i in down_s:
            img = frozenset(m[v] for v in self.poly_s.vertex_sets[(d, i)])
            j = self.poly_t.face_by_vertices.get((d, img))
            if j is None or (d, j) not in down_t:
                raise LatticeError(
                    f"image of face ({d},{i}) is not a face of the target")

    def map_face(self, d, i):
        """Image of a subface of the source face, as a face id."""
        m = self.mapping()
        img = frozenset(m[v] for v in self.poly_s.vertex_sets[(d, i)])
        j = self.poly_t.face_by_vertices.get((d, img))
        if j is None:
            raise LatticeError(f"face ({d},{i}) has no image face")
        return j

    def map_flag(self, flag):
        return tuple(self.map_face(d, f) for d, f in enumerate(flag))

    def restrict(self, d, i):
        """Restriction to a subface (d, i) of the source face."""
        m = self.mapping()
        sub = {v: m[v] for v in self.poly_s.vertex_sets[(d, i)]}
        j = self.map_face(d, i)
        return FaceIso.make(self.poly_s, (d, i), self.poly_t, (d, j), sub)

    def compose(self, other):
        """self after other (other: A->B, self: B->C)."""
        assert other.poly_t is self.poly_s and other.face_t == self.face_s
        m1 = other.mapping()
        m2 = self.mapping()
        return FaceIso.make(other.poly_s, other.face_s, self.poly_t,
                            self.face_t, {v: m2[w] for v, w in m1.items()})

    def inverse(self):
        return FaceIso.make(self.poly_t, self.face_t, self.poly_s,
                            self.face_s,
                            {w: v for v, w in self.vmap})

    def is_identity(self):
        return (self.poly_s is self.poly_t and self.face_s == self.face_t
                and all(v == w for v, w in self.vmap))


def orientation_sign(iso):
    """+1 if the iso maps the source reference orientation to the
    target's, -1 otherwise."""
    ds, _ = iso.face_s
    dt, _ = iso.face_t
    if ds != dt:
        raise LatticeError("orientation_sign needs equal-dimension faces")
    if ds == 0:
        return 1
    anchor = iso.poly_s.flags(*iso.face_s)[0]
    image = iso.map_flag(anchor)
    par = iso.poly_t.flag_parity(*iso.face_t)[image]
    return -1 if par else 1


def propagate_iso(poly_s, top_s, poly_t, top_t, flag_s, flag_t):
    """Unique lattice isomorphism top_s -> top_t mapping flag_s to flag_t.

    Returns a face map {(d, id_s): id_t} or None when the flag images are
    incompatible.  Uniqueness holds because a lattice isomorphism of a
    polytope is determined by the image of a single flag.
    """
    d = top_s[0]
    if top_t[0] != d:
        return None
    face_map = {}

    def record(ds, a, b):
        prev = face_map.get((ds, a))
        if prev is None:
            face_map[(ds, a)] = b
            return True
        return prev == b

    if not record(d, top_s[1], top_t[1]):
        return None
    match = {flag_s: flag_t}
    stack = [flag_s]
    for lvl in range(d):
        if not record(lvl, flag_s[lvl], flag_t[lvl]):
            return None
    while stack:
        cur = stack.pop()
        img = match[cur]
        for lvl in range(d):
            try:
                nxt = poly_s.flag_adjacent(top_s, cur, lvl)
                nxt_img = poly_t.flag_adjacent(top_t, img, lvl)
            except LatticeError:
                return None
            if nxt in match:
                if match[nxt] != nxt_img:
                    return None
                continue
            if not record(lvl, nxt[lvl], nxt_img[lvl]):
                return None
            match[nxt] = nxt_img
            stack.append(nxt)
    # counts per dimension must agree, otherwise not onto
    down_s = poly_s.downset(*top_s)
    down_t = poly_t.downset(*top_t)
    if len(down_s) != len(down_t) or len(face_map) != len(down_s):
        return None
    images = {(d, j) for (d, _), j in face_map.items()}
    if len(images) != len(face_map):
        return None
    return face_map


def iso_from_face_map(poly_s, top_s, poly_t, top_t, face_map):
    vmap = {v: face_map[(0, v)]
            for (dd, v) in poly_s.downset(*top_s) if dd == 0}
    return FaceIso.make(poly_s, top_s, poly_t, top_t, vmap)


def extend_facet_iso(iso, face_a, face_b):
    """Extend an isomorphism between facets F of A and G of B to the
    unique isomorphism A -> B restricting to it, or raise LatticeError.

    `iso.face_s` must be covered by `face_a` in `iso.poly_s`, and
    `iso.face_t` by `face_b` in `iso.poly_t`.
    """
    poly_s, poly_t = iso.poly_s, iso.poly_t
    da, ia = face_a
    db, ib = face_b
    df, jf = iso.face_s
    dg, jg = iso.face_t
    if da != db or df != da - 1 or dg != db - 1:
        raise LatticeError("extend_facet_iso: dimension mismatch")
    if jf not in poly_s.covers[face_a] or jg not in poly_t.covers[face_b]:
        raise LatticeError("extend_facet_iso: faces are not facets of A, B")
    iso.require_valid()
    base_flag = poly_s.flags(df, jf)[0]
    flag_a = base_flag + (jf,)
    flag_b = iso.map_flag(base_flag) + (jg,)
    face_map = propagate_iso(poly_s, face_a, poly_t, face_b, flag_a, flag_b)
    if face_map is None:
        raise LatticeError("no extension: incompatible flag neighbourhoods")
    ext = iso_from_face_map(poly_s, face_a, poly_t, face_b, face_map)
    ext.require_valid()
    return ext


def all_isos(poly_s, face_s, poly_t, face_t):
    """Every lattice isomorphism face_s -> face_t (brute force over flag
    images; intended for tests and canonical choices, not hot paths)."""
    d = face_s[0]
    if d != face_t[0]:
        return []
    if d == 0:
        return [FaceIso.make(poly_s, face_s, poly_t, face_t,
                             {next(iter(poly_s.vertex_sets[face_s])):
                              next(iter(poly_t.vertex_sets[face_t]))})]
    anchor = poly_s.flags(*face_s)[0]
    out = []
    for target_flag in poly_t.flags(*face_t):
        fm = propagate_iso(poly_s, face_s, poly_t, face_t, anchor,
                           target_flag)
        if fm is not None:
            out.append(iso_from_face_map(poly_s, face_s, poly_t, face_t, fm))
    return out


def canonical_iso(poly_s, face_s, poly_t, face_t):
    """The lexicographically least valid iso between two faces."""
    isos = all_isos(poly_s, face_s, poly_t, face_t)
    if not isos:
        raise LatticeError("faces are not isomorphic")
    return min(isos, key=lambda iso: iso.vmap)


# -- catalogue loading ----------------------------------------------------


def parse_lattice_text(text):
    name = None
    dim = None
    fvector = None
    covers = {}
    in_covers = False
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if in_covers:
            parts = line.split()
            if len(parts) != 3:
                raise LatticeError(f"line {ln}: bad covering pair")
            d, i, j = (int(p) for p in parts)
            covers.setdefault((d, i), []).append(j)
            continue
        key, _, rest = line.partition(" ")
        if key == "name":
            name = rest.strip()
        elif key == "dim":
            dim = int(rest)
        elif key == "fvector":
            fvector = tuple(int(x) for x in rest.split())
        elif key == "covers":
            in_covers = True
        else:
            raise LatticeError(f"line {ln}: unknown header field {key!r}")
    if name is None or dim is None or fvector is None:
        raise LatticeError("missing name/dim/fvector header")
    covers = {k: tuple(sorted(v)) for k, v in covers.items()}
    poly = Polytope(name, dim, covers)
    if poly.fvector() != fvector:
        raise LatticeError(
            f"{name}: fvector {poly.fvector()} != declared {fvector}")
    return poly


_catalog_cache = {}


def catalog_load(name):
    """Load a catalogued polytope by tag, validated.

    The data directory defaults to the packaged files and can be
    overridden with the CORNERS_DATA environment variable.
    """
    data_dir = os.environ.get("CORNERS_DATA")
    cache_key = (name, data_dir)
    if cache_key in _catalog_cache:
        return _catalog_cache[cache_key]
    if name not in CATALOG_FVECTORS:
        raise LatticeError(f"unknown catalog name {name!r}")
    if data_dir:
        path = os.path.join(data_dir, f"{name}.lat")
        with open(path) as fh:
            text = fh.read()
    else:
        text = (resources.files("rightangle.data") / f"{name}.lat").read_text()
    poly = parse_lattice_text(text)
    if poly.fvector() != CATALOG_FVECTORS[name]:
        raise LatticeError(
            f"{name}: fvector {poly.fvector()} does not match the catalog")
    poly.check_diamond()
    _catalog_cache[cache_key] = poly
    return poly
