"""Manifolds with right-angled corners as glued polytope complexes.

A complex is a list of chambers (catalogued polytopes) plus a pairing of
codimension-1 boundary slots via face isomorphisms.  Building derives the
quotient strata with coherent transport isomorphisms, verifies the
right-angled local models (4 chambers around an interior codimension-2
stratum, 1 or 2 around a boundary one) and assembles facets by merging
free slots across flat strata.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .polytopes import (FaceIso, canonical_iso, catalog_load,
                        extend_facet_iso, orientation_sign)


class CornerError(ValueError):
    pass


@dataclass(frozen=True)
class Gluing:
    chamber_a: int
    slot_a: int
    chamber_b: int
    slot_b: int
    iso: FaceIso  # between the two codim-1 faces


@dataclass
class Stratum:
    id: int
    dim: int
    rep: tuple  # germ (chamber, face_id) with the least label
    germs: tuple  # sorted germs
    transports: dict  # germ -> FaceIso from rep face to germ face
    kind: str | None = None  # codim-2 only: interior / flat / corner
    free_ports: tuple = ()  # codim-2 only: ((germ, slot), ...)
    facets: tuple = ()  # ids of facets whose closure contains the stratum


@dataclass
class Facet:
    id: int
    slots: tuple  # sorted (chamber, slot_face_id)
    isolated: bool = True
    embedded: bool = True
    adjacent: set = field(default_factory=set)
    self_corners: tuple = ()


class CornerComplex:
    def __init__(self, chambers, gluings, dim, strata, stratum_of, facets,
                 facet_of_slot, mirror_info=None):
        self.chambers = chambers
        self.gluings = gluings
        self.dim = dim
        self.strata = strata
        self.stratum_of = stratum_of  # germ (ch, d, i) -> stratum id
        self.facets = facets
        self.facet_of_slot = facet_of_slot  # (ch, slot) -> facet id
        self.mirror_info = mirror_info

    def is_closed(self):
        return not self.facets

    def chamber_count(self):
        return len(self.chambers)

    def strata_of_dim(self, d):
        return [s for s in self.strata if s.dim == d]

    def non_embedded_facets(self):
        return [f for f in self.facets if not f.embedded]

    def facet_neighbours(self, fid):
        return sorted(self.facets[fid].adjacent)


class _IsoUnionFind:
    """Union-find over germs carrying face isomorphisms to the root.

    Rejects incoherent identifications: two different gluing paths between
    the same pair of germs must induce the same isomorphism, otherwise the
    quotient cell structure would be an orbifold-style fold.
    """

    def __init__(self):
        self.parent = {}
        self.to_parent = {}  # germ -> FaceIso germ_face -> parent_face

    def add(self, germ, poly, face):
        if germ not in self.parent:
            self.parent[germ] = germ
            ident = FaceIso.make(poly, face, poly, face,
                                 {v: v for v in poly.vertex_sets[face]})
            self.to_parent[germ] = ident

    def find(self, germ):
        chain = []
        g = germ
        while self.parent[g] != g:
            chain.append(g)
            g = self.parent[g]
        root = g
        # compress from the top down so each compose is root-relative
        iso_up = self.to_parent[root]
        for node in reversed(chain):
            iso_up = iso_up.compose(self.to_parent[node])
            self.parent[node] = root
            self.to_parent[node] = iso_up
        return root, self.to_parent[germ] if germ != root \
            else self.to_parent[root]

    def union(self, a, b, iso_ab):
        ra, ta = self.find(a)
        rb, tb = self.find(b)
        if ra == rb:
            lhs = tb.compose(iso_ab)  # a -> root
            if lhs.vmap != ta.vmap:
                raise CornerError(
                    f"incoherent identification around germ {a}: two gluing "
                    "paths induce different face isomorphisms")
            return
        if rb < ra:
            ra, rb = rb, ra
            ta, tb = tb, ta
            iso_ab = iso_ab.inverse()
            a, b = b, a
        # attach rb below ra:  rb -> b -> a -> ra
        iso_rb_to_ra = ta.compose(iso_ab.inverse()).compose(tb.inverse())
        self.parent[rb] = ra
        self.to_parent[rb] = iso_rb_to_ra


def build(chambers, gluings):
    """Assemble a corner complex; chambers are Polytopes or catalog tags."""
    chambers = [catalog_load(c) if isinstance(c, str) else c
                for c in chambers]
    if not chambers:
        raise CornerError("no chambers")
    dim = chambers[0].dim
    if any(p.dim != dim for p in chambers):
        raise CornerError("chambers must share one dimension")
    n1 = dim - 1

    used_slots = set()
    for g in gluings:
        for ch, slot in ((g.chamber_a, g.slot_a), (g.chamber_b, g.slot_b)):
            if not (0 <= ch < len(chambers)):
                raise CornerError(f"gluing references chamber {ch}")
            if not (0 <= slot < chambers[ch].nfaces[n1]):
                raise CornerError(f"gluing references slot {slot}")
        if (g.chamber_a, g.slot_a) == (g.chamber_b, g.slot_b):
            raise CornerError("a slot cannot be glued to itself")
        for key in ((g.chamber_a, g.slot_a), (g.chamber_b, g.slot_b)):
            if key in used_slots:
                raise CornerError(f"slot {key} glued twice")
            used_slots.add(key)
        want_s = (chambers[g.chamber_a], (n1, g.slot_a))
        want_t = (chambers[g.chamber_b], (n1, g.slot_b))
        if ((g.iso.poly_s, g.iso.face_s) != want_s
                or (g.iso.poly_t, g.iso.face_t) != want_t):
            raise CornerError("gluing iso does not match its slots")
        g.iso.require_valid()

    uf = _IsoUnionFind()
    for ci, poly in enumerate(chambers):
        for d in range(dim + 1):
            for i in poly.faces(d):
                uf.add((ci, d, i), poly, (d, i))
    for g in gluings:
        poly_a = chambers[g.chamber_a]
        for (d, i) in poly_a.downset(n1, g.slot_a):
            j = g.iso.map_face(d, i)
            uf.union((g.chamber_a, d, i), (g.chamber_b, d, j),
                     g.iso.restrict(d, i))

    # group germs into strata
    members = {}
    for ci, poly in enumerate(chambers):
        for d in range(dim + 1):
            for i in poly.faces(d):
                root, _ = uf.find((ci, d, i))
                members.setdefault(root, []).append((ci, d, i))
    total = sum(len(v) for v in members.values())
    expected = sum(len(poly.downset(dim, 0)) for poly in chambers)
    if total != expected:
        raise CornerError("lost or duplicated germs during identification")

    strata = []
    stratum_of = {}
    for root in sorted(members):
        germs = sorted(members[root])
        rep = germs[0]
        _, t_rep = uf.find(rep)
        transports = {}
        for g in germs:
            _, t_g = uf.find(g)
            # rep -> root -> g
            transports[g] = t_g.inverse().compose(t_rep)
        sid = len(strata)
        strata.append(Stratum(id=sid, dim=rep[1],
                              rep=(rep[0], rep[2]),
                              germs=tuple((c, i) for (c, d, i) in germs),
                              transports={(c, i): transports[(c, d, i)]
                                          for (c, d, i) in germs}))
        for (c, d, i) in germs:
            stratum_of[(c, d, i)] = sid

    glued_by_slot = {}
    for g in gluings:
        glued_by_slot[(g.chamber_a, g.slot_a)] = g
        glued_by_slot[(g.chamber_b, g.slot_b)] = g

    # codim-1 sanity
    for s in strata:
        if s.dim != n1:
            continue
        glued = [(c, i) for (c, i) in s.germs if (c, i) in glued_by_slot]
        if glued and len(s.germs) != 2:
            raise CornerError(
                f"codim-1 stratum {s.id} identifies {len(s.germs)} germs")

    # codim-2 local models: count the chamber fan around each stratum
    if dim >= 2:
        n2 = dim - 2
        for s in strata:
            if s.dim != n2:
                continue
            # ports: (germ, side_slot); a codim-2 face lies in exactly
            # two codim-1 faces of its chamber (diamond with the top)
            ports = []
            for (c, i) in s.germs:
                sides = chambers[c].interval_pair((dim, 0), (n2, i))
                for slot in sides:
                    ports.append(((c, i), slot))
            free_ports = [(germ, slot) for (germ, slot) in ports
                          if (germ[0], slot) not in glued_by_slot]
            if free_ports:
                # boundary stratum: chain
                if len(free_ports) != 2:
                    raise CornerError(
                        f"stratum {s.id}: boundary fan has "
                        f"{len(free_ports)} free sides")
                if len(s.germs) == 1:
                    kind = "corner"
                elif len(s.germs) == 2:
                    kind = "flat"
                else:
                    raise CornerError(
                        f"stratum {s.id}: {len(s.germs)} chambers along a "
                        "boundary codim-2 stratum (angle exceeds pi)")
            else:
                kind = "interior"
                if len(s.germs) != 4:
                    raise CornerError(
                        f"stratum {s.id}: {len(s.germs)} chambers around an "
                        "interior codim-2 stratum (need 4)")
            s.kind = kind
            s.free_ports = tuple(sorted(free_ports))

    # facets: free codim-1 slots merged across flat codim-2 strata
    free_slots = sorted(
        (c, i) for c, poly in enumerate(chambers)
        for i in poly.faces(n1) if (c, i) not in glued_by_slot)
    slot_parent = {slot: slot for slot in free_slots}

    def slot_find(x):
        while slot_parent[x] != x:
            slot_parent[x] = slot_parent[slot_parent[x]]
            x = slot_parent[x]
        return x

    def slot_union(x, y):
        rx, ry = slot_find(x), slot_find(y)
        if rx != ry:
            if ry < rx:
                rx, ry = ry, rx
            slot_parent[ry] = rx

    for s in strata:
        if s.kind == "flat":
            (g1, slot1), (g2, slot2) = s.free_ports
            slot_union((g1[0], slot1), (g2[0], slot2))

    facet_groups = {}
    for slot in free_slots:
        facet_groups.setdefault(slot_find(slot), []).append(slot)
    facets = []
    facet_of_slot = {}
    for root in sorted(facet_groups):
        f = Facet(id=len(facets), slots=tuple(sorted(facet_groups[root])))
        for slot in f.slots:
            facet_of_slot[slot] = f.id
        facets.append(f)

    for s in strata:
        if s.kind == "corner":
            (g1, slot1), (g2, slot2) = s.free_ports
            fa = facet_of_slot[(g1[0], slot1)]
            fb = facet_of_slot[(g2[0], slot2)]
            if fa == fb:
                facets[fa].embedded = False
                facets[fa].self_corners = facets[fa].self_corners + (
                    ((g1[0], slot1), (g2[0], slot2)),)
            else:
                facets[fa].adjacent.add(fb)
                facets[fb].adjacent.add(fa)
                facets[fa].isolated = False
                facets[fb].isolated = False

    # record which facets contain each stratum
    for s in strata:
        touching = set()
        for (c, i) in s.germs:
            for slot in chambers[c].facets_containing(s.dim, i):
                fid = facet_of_slot.get((c, slot))
                if fid is not None:
                    touching.add(fid)
        s.facets = tuple(sorted(touching))

    return CornerComplex(chambers, list(gluings), dim, strata, stratum_of,
                         facets, facet_of_slot)


def facet_count_prediction(n):
    """Facet count of the doubled 4-complex over n dodecahedra."""
    if n < 0:
        raise CornerError("n must be non-negative")
    total = 2 * n * (Fraction(20, 8) + Fraction(12, 2) + 30 + 12 + 20
                     + 12 + 1)
    assert total.denominator == 1
    return int(total)


_HOSTS = {
    "dodecahedron": "120cell",
    "hexagon": "lobell6",
}


def _host_facet(host):
    """The facet of the host polytope that carries the thickened manifold."""
    if host.name == "120cell":
        return (3, 0)
    if host.name == "lobell6":
        for i in host.faces(2):
            if len(host.vertex_sets[(2, i)]) == 6:
                return (2, i)
    raise CornerError(f"no hosted facet known for {host.name}")


def thicken(m_complex):
    """Promote a closed complex one dimension up.

    Every chamber becomes a copy of its host polytope (dodecahedron ->
    120-cell, hexagon -> Loebell), identified with a fixed facet of the
    host by the canonical isomorphism; every gluing is extended to the
    neighbouring host facets.  Returns (W, facet id of the embedded copy).
    Non-embedded facets are permitted and flagged on the result.
    """
    if not m_complex.is_closed():
        raise CornerError("thicken needs a closed complex")
    base = m_complex.chambers[0]
    if any(p is not base and p.name != base.name
           for p in m_complex.chambers):
        raise CornerError("thicken needs a single chamber type")
    if base.name not in _HOSTS:
        raise CornerError(f"no host polytope for {base.name}")
    host = catalog_load(_HOSTS[base.name])
    hf = _host_facet(host)
    m = base.dim
    psi = canonical_iso(base, base.top(), host, hf)

    def other_coface(face_id):
        cof = host.cofaces[(m - 1, face_id)]
        others = [c for c in cof if (m, c) != (m, hf[1])]
        if len(cof) != 2 or len(others) != 1:
            raise CornerError("hosted facet has unexpected neighbours")
        return others[0]

    new_gluings = []
    for g in m_complex.gluings:
        f_img = psi.map_face(m - 1, g.slot_a)
        g_img = psi.map_face(m - 1, g.slot_b)
        a = other_coface(f_img)
        b = other_coface(g_img)
        iso_host = (psi.restrict(m - 1, g.slot_b)
                    .compose(g.iso)
                    .compose(psi.restrict(m - 1, g.slot_a).inverse()))
        ext = extend_facet_iso(iso_host, (m, a), (m, b))
        new_gluings.append(Gluing(g.chamber_a, a, g.chamber_b, b, ext))

    w = build([host] * m_complex.chamber_count(), new_gluings)
    m_facet = w.facet_of_slot[(0, hf[1])]
    hosted = w.facets[m_facet]
    if not (hosted.isolated and hosted.embedded):
        raise CornerError("hosted copy failed to come out isolated")
    return w, m_facet


def mirror(w_prime, facet_id):
    """Double a complex along an isolated facet.

    Returns (W, s) where s maps each facet of W to its partner in the
    other copy; the hosted facet itself becomes interior.
    """
    f = w_prime.facets[facet_id]
    if not f.isolated:
        raise CornerError(f"facet {facet_id} is not isolated")
    n = w_prime.chamber_count()
    chambers = list(w_prime.chambers) + list(w_prime.chambers)
    gluings = list(w_prime.gluings)
    for g in w_prime.gluings:
        gluings.append(Gluing(g.chamber_a + n, g.slot_a,
                              g.chamber_b + n, g.slot_b, g.iso))
    dim = w_prime.dim
    for (ch, slot) in f.slots:
        poly = w_prime.chambers[ch]
        ident = FaceIso.make(poly, (dim - 1, slot), poly, (dim - 1, slot),
                             {v: v for v in poly.vertex_sets[(dim - 1, slot)]})
        gluings.append(Gluing(ch, slot, ch + n, slot, ident))
    w = build(chambers, gluings)
    w.mirror_info = {
        "halves": n,
        "source_facet_slots": tuple(f.slots),
        "interface_slots": tuple((ch, slot) for (ch, slot) in f.slots),
    }

    involution = {}
    for fac in w.facets:
        ch, slot = fac.slots[0]
        partner_slot = (ch + n, slot) if ch < n else (ch - n, slot)
        involution[fac.id] = w.facet_of_slot[partner_slot]
    for a, b in involution.items():
        if involution[b] != a or a == b:
            raise CornerError("mirror involution is not a fixed-point-free "
                              "pairing")
    return w, involution


def transport_sign(stratum, germ):
    """Orientation sign carried by a germ relative to the stratum's rep."""
    return orientation_sign(stratum.transports[germ])


# -- tessellation files ----------------------------------------------------


def write_tessellation(w_or_parts, fh):
    """Write `dim n; polytope tag; chambers count` plus one glue line per
    gluing, `glue c1.f1 c2.f2 : v->v, ...` with polytope vertex ids."""
    if isinstance(w_or_parts, CornerComplex):
        chambers, gluings = w_or_parts.chambers, w_or_parts.gluings
    else:
        chambers, gluings = w_or_parts
    name = chambers[0].name
    fh.write(f"dim {chambers[0].dim}; polytope {name}; "
             f"chambers {len(chambers)}\n")
    for g in sorted(gluings, key=lambda g: (g.chamber_a, g.slot_a)):
        pairs = ", ".join(f"{a}->{b}" for a, b in g.iso.vmap)
        fh.write(f"glue {g.chamber_a}.{g.slot_a} {g.chamber_b}.{g.slot_b} "
                 f": {pairs}\n")


def parse_tessellation(text):
    """Parse the tessellation grammar into (chambers, gluings); no local
    model checks are run (use `build` for that)."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise CornerError("empty tessellation file")
    header = lines[0]
    try:
        dim_part, poly_part, count_part = (p.strip()
                                           for p in header.split(";"))
        dim = int(dim_part.split()[1])
        tag = poly_part.split()[1]
        count = int(count_part.split()[1])
    except (IndexError, ValueError) as exc:
        raise CornerError(f"bad tessellation header: {header!r}") from exc
    poly = catalog_load(tag)
    if poly.dim != dim:
        raise CornerError(f"{tag} has dimension {poly.dim}, header says {dim}")
    chambers = [poly] * count
    gluings = []
    for ln in lines[1:]:
        if not ln.startswith("glue "):
            raise CornerError(f"bad tessellation line: {ln!r}")
        head, _, maps = ln[5:].partition(":")
        try:
            sa, sb = head.split()
            ca, fa = (int(x) for x in sa.split("."))
            cb, fb = (int(x) for x in sb.split("."))
            vmap = {}
            for pair in maps.split(","):
                src, dst = pair.split("->")
                vmap[int(src)] = int(dst)
        except (IndexError, ValueError) as exc:
            raise CornerError(f"bad tessellation line: {ln!r}") from exc
        n1 = dim - 1
        iso = FaceIso.make(poly, (n1, fa), poly, (n1, fb), vmap)
        gluings.append(Gluing(ca, fa, cb, fb, iso))
    return chambers, gluings


def closedness_report(chambers, gluings):
    """(slot count, glued slot count): equal for a closed tessellation."""
    n1 = chambers[0].dim - 1
    slots = sum(p.nfaces[n1] for p in chambers)
    glued = 2 * len(gluings)
    return slots, glued
