"""The closed cover of a coloured corner complex, as a CW complex.

Cells of the quotient are pairs (base stratum, coset of the stratum's
stabiliser in Z_2^k), where the stabiliser is generated by the colour
vectors of the facets whose closure contains the stratum.  Signed
boundary matrices are assembled from per-polytope reference orientations
transported along the gluings; the assembly is accepted only if the
composite boundary vanishes over Z.
"""

from __future__ import annotations

from dataclasses import dataclass

from .colouring import (GeneralisedColouring, lift_colouring,
                        validate_generalised)
from .corners import Gluing
from .homology import SparseIntMatrix, weighted_euler
from .polytopes import FaceIso, orientation_sign


class OrbitError(ValueError):
    pass


def _as_generalised(colouring_or_rho):
    if isinstance(colouring_or_rho, GeneralisedColouring):
        return colouring_or_rho
    return lift_colouring(colouring_or_rho)


def _gf2_basis(vectors):
    basis = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return basis


def _span(basis):
    out = [0]
    for b in basis:
        out += [x ^ b for x in out]
    return out


def _coset_rep(u, span):
    return min(u ^ x for x in span)


def _rep_table(span, k):
    """rep_table[u] = minimal element of u + span, for all u in Z_2^k.

    Walking u in increasing order and flooding each fresh coset gives the
    minima in O(2^k) total."""
    size = 1 << k
    table = [-1] * size
    for u in range(size):
        if table[u] >= 0:
            continue
        for x in span:
            table[u ^ x] = u
    return table


class QuotientCWComplex:
    def __init__(self, base, rho, dim, k, cells, cell_index, boundary,
                 stab_basis, orientable):
        self.base = base
        self.rho = rho
        self.dim = dim
        self.k = k
        self.cells = cells  # {d: [(stratum_id, coset_rep)]}
        self.cell_index = cell_index  # {d: {(sid, rep): col}}
        self.boundary = boundary  # {d: SparseIntMatrix}
        self.stab_basis = stab_basis  # {sid: basis list}
        self.orientable = orientable

    def cell_counts(self):
        return [len(self.cells[d]) for d in range(self.dim + 1)]

    def euler_characteristic(self):
        counts = self.cell_counts()
        return sum((-1) ** d * n for d, n in enumerate(counts))


def stabiliser_data(w, rho):
    """(dim, stabiliser rank) per stratum; exact and cheap for any k."""
    vecs = rho.vectors
    out = []
    for s in w.strata:
        basis = _gf2_basis([vecs[f] for f in s.facets])
        out.append((s.dim, len(basis)))
    return out


def euler_characteristic_weighted(w, rho):
    """chi of the quotient from stabiliser ranks alone."""
    rho = _as_generalised(rho)
    return weighted_euler(stabiliser_data(w, rho), rho.width)


def build_quotient(w, colouring_or_rho, check_square=True):
    rho = _as_generalised(colouring_or_rho)
    k = rho.width
    if k > 16:
        raise OrbitError(f"k={k} would enumerate 2^{k} copies; "
                         "use euler_characteristic_weighted instead")
    problems = validate_generalised(rho, w)
    if problems:
        raise OrbitError("invalid colouring: " + "; ".join(problems))
    dim = w.dim

    stab_basis = {}
    rep_tables = {}
    for s in w.strata:
        basis = _gf2_basis([rho.vectors[f] for f in s.facets])
        stab_basis[s.id] = basis
        key = tuple(basis)
        if key not in rep_tables:
            rep_tables[key] = _rep_table(_span(basis), k)
    rep_of = {s.id: rep_tables[tuple(stab_basis[s.id])] for s in w.strata}

    cells = {d: [] for d in range(dim + 1)}
    cell_index = {d: {} for d in range(dim + 1)}
    for s in w.strata:
        table = rep_of[s.id]
        reps = sorted({r for r in table})
        for rep in reps:
            cell_index[s.dim][(s.id, rep)] = len(cells[s.dim])
            cells[s.dim].append((s.id, rep))

    # per-germ transport signs
    sign_of_germ = {}
    for s in w.strata:
        for germ, iso in s.transports.items():
            sign_of_germ[(s.id, germ)] = orientation_sign(iso)

    boundary = {}
    for d in range(1, dim + 1):
        entries = {}
        for col, (sid, rep) in enumerate(cells[d]):
            s = w.strata[sid]
            ch0, f0 = s.rep
            poly = w.chambers[ch0]
            for j, sign0 in poly.boundary_pairs((d, f0)):
                tid = w.stratum_of[(ch0, d - 1, j)]
                tsign = sign_of_germ[(tid, (ch0, j))]
                trep = rep_of[tid][rep]
                row = cell_index[d - 1][(tid, trep)]
                key = (row, col)
                entries[key] = entries.get(key, 0) + sign0 * tsign
        entries = {kk: v for kk, v in entries.items() if v}
        boundary[d] = SparseIntMatrix(len(cells[d - 1]), len(cells[d]),
                                      entries)

    if check_square:
        for d in range(2, dim + 1):
            prod = boundary[d - 1].multiply(boundary[d])
            if not prod.is_zero():
                raise OrbitError(
                    f"boundary squared is nonzero in degree {d}: "
                    "orientation bookkeeping bug")

    _check_connected(dim, cells, boundary)

    x = QuotientCWComplex(w, rho, dim, k, cells, cell_index, boundary,
                          stab_basis, orientable=False)
    chi = x.euler_characteristic()
    chi_weighted = weighted_euler(stabiliser_data(w, rho), k)
    if chi != chi_weighted:
        raise OrbitError(
            f"cell count chi {chi} disagrees with the weighted count "
            f"{chi_weighted}")
    x.orientable = _orientation_closes(w, rho, x)
    return x


def _check_connected(dim, cells, boundary):
    total = sum(len(cells[d]) for d in range(dim + 1))
    if total == 0:
        raise OrbitError("empty complex")
    offsets = {}
    off = 0
    for d in range(dim + 1):
        offsets[d] = off
        off += len(cells[d])
    parent = list(range(total))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    for d in range(1, dim + 1):
        for (r, c) in boundary[d].entries:
            union(offsets[d - 1] + r, offsets[d] + c)
    roots = {find(x) for x in range(total)}
    if len(roots) != 1:
        raise OrbitError(f"quotient complex has {len(roots)} components")


def _orientation_closes(w, rho, x):
    """Try to orient the top cells compatibly; True iff this closes up.

    Two top cells sharing a codim-1 cell must induce opposite signs on it.
    """
    dim = w.dim
    top_cells = x.cells[dim]
    index = {cell: i for i, cell in enumerate(top_cells)}
    adj = {i: [] for i in range(len(top_cells))}
    d_top = x.boundary[dim]
    by_row = {}
    for (r, c), v in d_top.entries.items():
        by_row.setdefault(r, []).append((c, v))
    for r, cols in by_row.items():
        if len(cols) == 2:
            (c1, v1), (c2, v2) = cols
            # compatible orientation: signs must be opposite
            adj[c1].append((c2, -v1 * v2))
            adj[c2].append((c1, -v1 * v2))
        elif len(cols) == 1 and abs(cols[0][1]) == 2:
            # one top cell folding onto the same wall twice: orientation
            # reverses through it
            return False
    sign = {}
    for start in range(len(top_cells)):
        if start in sign:
            continue
        sign[start] = 1
        stack = [start]
        while stack:
            cur = stack.pop()
            for other, rel in adj[cur]:
                want = sign[cur] * rel
                if other in sign:
                    if sign[other] != want:
                        return False
                else:
                    sign[other] = want
                    stack.append(other)
    return True


def quotient_corner_complex(w, colouring_or_rho):
    """The quotient as a corner complex of 2^k chambers (all slots glued).

    Chamber (ch, u) gets index ch * 2^k + u.  Interior gluings of the base
    recur in every copy; each facet's slots glue copy u to copy
    u + colour(F).
    """
    rho = _as_generalised(colouring_or_rho)
    problems = validate_generalised(rho, w)
    if problems:
        raise OrbitError("invalid colouring: " + "; ".join(problems))
    k = rho.width
    if k > 12:
        raise OrbitError("refusing to build 2^k chambers for k > 12")
    copies = 1 << k
    chambers = []
    for ch in range(w.chamber_count()):
        chambers.extend([w.chambers[ch]] * copies)

    def cid(ch, u):
        return ch * copies + u

    gluings = []
    for g in w.gluings:
        for u in range(copies):
            gluings.append(Gluing(cid(g.chamber_a, u), g.slot_a,
                                  cid(g.chamber_b, u), g.slot_b, g.iso))
    n1 = w.dim - 1
    for f in w.facets:
        vec = rho.vectors[f.id]
        for (ch, slot) in f.slots:
            poly = w.chambers[ch]
            ident = FaceIso.make(
                poly, (n1, slot), poly, (n1, slot),
                {v: v for v in poly.vertex_sets[(n1, slot)]})
            for u in range(copies):
                if u < u ^ vec:
                    gluings.append(Gluing(cid(ch, u), slot,
                                          cid(ch, u ^ vec), slot, ident))
    from .corners import build

    out = build(chambers, gluings)
    if not out.is_closed():
        raise OrbitError("quotient corner complex is not closed")
    return out


@dataclass
class SeparationReport:
    components: int
    interface_components: int
    interface_counts_per_component: tuple
    base_interface_counts: tuple
    swap_is_isomorphism: bool


def separation_check(w, colouring, involution):
    """Check that the mirrored hypersurface separates the quotient.

    `w` must carry mirror metadata; `colouring` must be symmetric under
    `involution`.  Removing the cells over the mirror interface must
    leave exactly two components, swapped by the deck involution, and the
    interface must consist of 2^k disjoint copies of the hypersurface's
    cell complex.
    """
    if w.mirror_info is None:
        raise OrbitError("complex does not carry mirror metadata")
    from .colouring import is_symmetric

    if not is_symmetric(colouring, involution):
        raise OrbitError("colouring is not symmetric under the involution")
    rho = _as_generalised(colouring)
    x = build_quotient(w, rho)
    halves = w.mirror_info["halves"]
    interface_slots = set(w.mirror_info["interface_slots"])
    # also include the matching slots of the second copy
    interface_slots |= {(ch + halves, slot) for (ch, slot) in
                        w.mirror_info["interface_slots"]}

    slot_down = {}
    interface_strata = set()
    for s in w.strata:
        for (ch, i) in s.germs:
            poly = w.chambers[ch]
            for (c2, slot) in interface_slots:
                if c2 != ch:
                    continue
                key = (ch, slot)
                if key not in slot_down:
                    slot_down[key] = poly.downset(w.dim - 1, slot)
                if (s.dim, i) in slot_down[key]:
                    interface_strata.add(s.id)
                    break

    base_counts = [0] * w.dim
    for sid in interface_strata:
        base_counts[w.strata[sid].dim] += 1

    # global cell ids
    offsets = {}
    off = 0
    for d in range(x.dim + 1):
        offsets[d] = off
        off += len(x.cells[d])
    total = off

    def gid(d, idx):
        return offsets[d] + idx

    is_interface = [False] * total
    for d in range(x.dim + 1):
        for idx, (sid, rep) in enumerate(x.cells[d]):
            if sid in interface_strata:
                is_interface[gid(d, idx)] = True

    def components_of(keep):
        parent = {v: v for v in keep}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for d in range(1, x.dim + 1):
            for (r, c) in x.boundary[d].entries:
                a, b = gid(d - 1, r), gid(d, c)
                if a in parent and b in parent:
                    ra, rb = find(a), find(b)
                    if ra != rb:
                        parent[rb] = ra
        comps = {}
        for v in keep:
            comps.setdefault(find(v), []).append(v)
        return list(comps.values())

    complement = [v for v in range(total) if not is_interface[v]]
    interface = [v for v in range(total) if is_interface[v]]
    comp_out = components_of(complement)
    comp_in = components_of(interface)

    counts_per_comp = []
    for comp in comp_in:
        cnt = [0] * w.dim
        for v in comp:
            d = max(dd for dd in offsets if offsets[dd] <= v)
            cnt[d] += 1
        counts_per_comp.append(tuple(cnt))

    swap_ok = _swap_is_isomorphism(w, x, halves, comp_out)

    report = SeparationReport(
        components=len(comp_out),
        interface_components=len(comp_in),
        interface_counts_per_component=tuple(sorted(set(counts_per_comp))),
        base_interface_counts=tuple(base_counts),
        swap_is_isomorphism=swap_ok,
    )
    if report.components != 2:
        raise OrbitError(
            f"complement has {report.components} components, expected 2")
    if report.interface_components != (1 << x.k):
        raise OrbitError(
            f"interface has {report.interface_components} components, "
            f"expected {1 << x.k}")
    for cnt in counts_per_comp:
        if cnt != tuple(base_counts):
            raise OrbitError(
                f"an interface component has cell counts {cnt}, the "
                f"hypersurface has {tuple(base_counts)}")
    if not swap_ok:
        raise OrbitError("deck swap is not a cell-level isomorphism")
    return report


def _swap_is_isomorphism(w, x, halves, comp_out):
    """The chamber swap (ch <-> ch +- halves) on quotient cells must be a
    boundary-preserving involution exchanging the two components."""

    def swap_chamber(ch):
        return ch + halves if ch < halves else ch - halves

    stratum_swap = {}
    for s in w.strata:
        ch0, f0 = s.rep
        stratum_swap[s.id] = w.stratum_of[(swap_chamber(ch0), s.dim, f0)]

    cell_swap = {}
    for d in range(x.dim + 1):
        for idx, (sid, rep) in enumerate(x.cells[d]):
            tid = stratum_swap[sid]
            target = x.cell_index[d].get((tid, rep))
            if target is None:
                return False
            cell_swap[(d, idx)] = target

    for d in range(x.dim + 1):
        for idx in range(len(x.cells[d])):
            if cell_swap[(d, cell_swap[(d, idx)])] != idx:
                return False

    # unsigned boundary must commute with the swap
    for d in range(1, x.dim + 1):
        mapped = {}
        for (r, c), v in x.boundary[d].entries.items():
            mapped[(cell_swap[(d - 1, r)], cell_swap[(d, c)])] = abs(v)
        orig = {(r, c): abs(v)
                for (r, c), v in x.boundary[d].entries.items()}
        if mapped != orig:
            return False

    # the two complement components must swap
    if len(comp_out) == 2:
        offsets = {}
        off = 0
        for d in range(x.dim + 1):
            offsets[d] = off
            off += len(x.cells[d])
        comp_sets = [set(c) for c in comp_out]

        def gswap(v):
            d = max(dd for dd in offsets if offsets[dd] <= v)
            return offsets[d] + cell_swap[(d, v - offsets[d])]

        probe = next(iter(comp_sets[0]))
        if gswap(probe) not in comp_sets[1]:
            return False
    return True
