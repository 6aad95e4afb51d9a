"""Facet-adjacency graphs and proper/generalised colourings.

Plain colourings assign one of k colours to each facet so that adjacent
facets differ; generalised colourings assign nonzero vectors in Z_2^m
whose restriction to the facets through any boundary stratum is linearly
independent.  The exact colouring search is DSATUR-ordered backtracking
with a greedy clique lower bound, symmetry breaking on fresh colours and
a wall-clock budget, reporting `found`, `none` (search space closed) or
`unknown` (budget exhausted).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field


class ColouringError(ValueError):
    pass


@dataclass
class FacetGraph:
    vertices: tuple
    adj: dict  # vertex -> frozenset of neighbours

    def edges(self):
        return [(u, v) for u in self.vertices for v in self.adj[u] if u < v]

    def components(self):
        seen = set()
        comps = []
        for v in self.vertices:
            if v in seen:
                continue
            comp = []
            stack = [v]
            seen.add(v)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in self.adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            comps.append(sorted(comp))
        return comps


def adjacency_graph(w):
    """Facet graph of a corner complex; every facet must be embedded."""
    bad = [f.id for f in w.facets if not f.embedded]
    if bad:
        raise ColouringError(
            "non-embedded facet(s) present: " + ", ".join(
                f"facet {i} (self-adjacent at {w.facets[i].self_corners[0]})"
                for i in bad))
    vertices = tuple(f.id for f in w.facets)
    adj = {f.id: frozenset(f.adjacent) for f in w.facets}
    return FacetGraph(vertices, adj)


@dataclass
class ColouringResult:
    status: str  # found / none / unknown
    colouring: dict | None = None
    reason: str = ""
    nodes: int = 0


def _greedy_clique(graph):
    best = []
    for v in graph.vertices:
        clique = [v]
        cand = set(graph.adj[v])
        while cand:
            u = max(sorted(cand), key=lambda x: len(graph.adj[x] & cand))
            clique.append(u)
            cand &= graph.adj[u]
        if len(clique) > len(best):
            best = clique
    return best


def _dsatur_greedy(graph):
    colour = {}
    order = sorted(graph.vertices, key=lambda v: (-len(graph.adj[v]), v))
    uncoloured = set(graph.vertices)
    while uncoloured:
        v = max(sorted(uncoloured),
                key=lambda x: (len({colour[y] for y in graph.adj[x]
                                    if y in colour}), len(graph.adj[x]), -x))
        used = {colour[y] for y in graph.adj[v] if y in colour}
        c = 1
        while c in used:
            c += 1
        colour[v] = c
        uncoloured.discard(v)
    return colour


def validate_colouring(colouring, graph, surjective_k=None):
    for u in graph.vertices:
        if u not in colouring:
            raise ColouringError(f"facet {u} is uncoloured")
        for v in graph.adj[u]:
            if colouring[u] == colouring[v]:
                raise ColouringError(
                    f"adjacent facets {u}, {v} share colour {colouring[u]}")
    used = set(colouring.values())
    if any(c < 1 for c in used):
        raise ColouringError("colours must be positive")
    if surjective_k is not None and used != set(range(1, surjective_k + 1)):
        raise ColouringError(f"colouring is not onto 1..{surjective_k}")


def _spread_to_k(colouring, k):
    """Recolour members of large colour classes so all of 1..k appear."""
    classes = {}
    for v, c in colouring.items():
        classes.setdefault(c, []).append(v)
    used = sorted(classes)
    # compact to 1..len(used) first
    remap = {c: i + 1 for i, c in enumerate(used)}
    colouring = {v: remap[c] for v, c in colouring.items()}
    classes = {}
    for v, c in colouring.items():
        classes.setdefault(c, []).append(v)
    nxt = len(classes) + 1
    while nxt <= k:
        donor = next((c for c in sorted(classes)
                      if len(classes[c]) >= 2), None)
        if donor is None:
            return None
        v = sorted(classes[donor])[-1]
        classes[donor].remove(v)
        colouring[v] = nxt
        classes[nxt] = [v]
        nxt += 1
    return colouring


def find_colouring(graph, k, budget_ms=10000):
    """Proper colouring using exactly the colours 1..k, if one exists.

    Returns a ColouringResult whose status is `found` (colouring
    attached, re-validated), `none` (exhaustively refuted) or `unknown`
    (budget exhausted before the search closed).
    """
    if k < 1:
        raise ColouringError("k must be positive")
    if len(graph.vertices) < k:
        return ColouringResult(
            "none", reason=f"only {len(graph.vertices)} facets, "
            f"cannot use {k} colours")
    clique = _greedy_clique(graph)
    if len(clique) > k:
        return ColouringResult(
            "none", reason=f"clique of size {len(clique)} exceeds {k}")
    greedy = _dsatur_greedy(graph)
    if greedy and max(greedy.values(), default=0) <= k:
        spread = _spread_to_k(greedy, k)
        if spread is not None:
            validate_colouring(spread, graph, surjective_k=k)
            return ColouringResult("found", spread, reason="greedy")

    deadline = time.monotonic() + budget_ms / 1000.0
    n = len(graph.vertices)
    colour = {}
    nodes = 0

    def saturation(v):
        return len({colour[y] for y in graph.adj[v] if y in colour})

    def select():
        return max((x for x in graph.vertices if x not in colour),
                   key=lambda x: (saturation(x), len(graph.adj[x]), -x))

    def candidates(v, used_max):
        banned = {colour[y] for y in graph.adj[v] if y in colour}
        # symmetry breaking: a fresh colour is always the next index
        return [c for c in range(1, min(used_max + 1, k) + 1)
                if c not in banned]

    def backtrack():
        # iterative DFS; frames are [vertex, candidates, position, used]
        nonlocal nodes
        if n == 0:
            return {}
        v0 = select()
        frames = [[v0, candidates(v0, 0), 0, 0]]
        while frames:
            nodes += 1
            if nodes % 256 == 0 and time.monotonic() > deadline:
                raise TimeoutError
            frame = frames[-1]
            v, cands, pos, used_max = frame
            if v in colour:
                del colour[v]
            if pos >= len(cands):
                frames.pop()
                continue
            frame[2] += 1
            c = cands[pos]
            colour[v] = c
            if len(colour) == n:
                return dict(colour)
            used = max(used_max, c)
            nxt = select()
            frames.append([nxt, candidates(nxt, used), 0, used])
        return None

    try:
        found = backtrack()
    except TimeoutError:
        return ColouringResult("unknown", nodes=nodes,
                               reason="time budget exhausted")
    if found is None:
        return ColouringResult("none", nodes=nodes,
                               reason="backtracking search closed")
    spread = _spread_to_k(found, k)
    if spread is None:
        return ColouringResult("none", nodes=nodes,
                               reason="proper colouring exists but cannot "
                               f"be spread onto {k} colours")
    validate_colouring(spread, graph, surjective_k=k)
    return ColouringResult("found", spread, nodes=nodes, reason="exact")


def is_symmetric(colouring, involution):
    return all(colouring[f] == colouring[g] for f, g in involution.items())


def find_symmetric_colouring(graph, involution, plus_side, k,
                             budget_ms=10000):
    """Search a symmetric k-colouring by colouring one mirror half only.

    No adjacency crosses the mirror, so a proper colouring of the plus
    half extends through the involution to a proper symmetric colouring
    of the whole graph; searching half the vertices is considerably
    cheaper on large mirrored complexes.
    """
    plus = set(plus_side)
    for f in graph.vertices:
        if (f in plus) == (involution[f] in plus):
            raise ColouringError("involution does not swap the two sides")
        for g in graph.adj[f]:
            if (f in plus) != (g in plus):
                raise ColouringError("adjacency crosses the mirror")
    half = FacetGraph(tuple(sorted(plus)),
                      {v: graph.adj[v] for v in sorted(plus)})
    res = find_colouring(half, k, budget_ms=budget_ms)
    if res.status != "found":
        return res
    full = dict(res.colouring)
    for f in graph.vertices:
        if f not in plus:
            full[f] = res.colouring[involution[f]]
    validate_colouring(full, graph, surjective_k=k)
    if not is_symmetric(full, involution):
        raise ColouringError("extension through the involution failed")
    return ColouringResult("found", full, nodes=res.nodes,
                           reason=res.reason + " (one half, mirrored)")


def symmetrize(colouring, involution, graph, plus_side):
    """Copy the colours of one mirror half onto the other and compact.

    `plus_side` lists the facets of the half whose colours win.  The
    result is proper, symmetric under the involution and uses at most as
    many colours as the input.
    """
    validate_colouring(colouring, graph)
    for f, g in involution.items():
        if involution.get(g) != f or f == g:
            raise ColouringError("not a fixed-point-free involution")
        if g in graph.adj[f]:
            raise ColouringError("involution pairs adjacent facets")
    plus = set(plus_side)
    for f in graph.vertices:
        if (f in plus) == (involution[f] in plus):
            raise ColouringError("involution does not swap the two sides")
        for g in graph.adj[f]:
            if (f in plus) != (g in plus):
                raise ColouringError("adjacency crosses the mirror")
    sym = {}
    for f in graph.vertices:
        sym[f] = colouring[f] if f in plus else colouring[involution[f]]
    used = sorted(set(sym.values()))
    remap = {c: i + 1 for i, c in enumerate(used)}
    sym = {f: remap[c] for f, c in sym.items()}
    validate_colouring(sym, graph, surjective_k=len(used))
    if not is_symmetric(sym, involution):
        raise ColouringError("symmetrisation failed")
    return sym


# -- generalised colourings ------------------------------------------------


def gf2_rank_vectors(vectors):
    basis = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return len(basis)


def gf2_independent(vectors):
    return gf2_rank_vectors(vectors) == len(vectors)


@dataclass
class GeneralisedColouring:
    width: int  # m: vectors live in Z_2^m
    vectors: dict = field(default_factory=dict)  # facet id -> bitmask

    def popcounts_odd(self):
        return all(bin(v).count("1") % 2 == 1 for v in self.vectors.values())


def lift_colouring(colouring):
    """Plain k-colouring as a generalised one: colour i -> e_i."""
    k = max(colouring.values())
    return GeneralisedColouring(
        width=k, vectors={f: 1 << (c - 1) for f, c in colouring.items()})


def validate_generalised(rho, w):
    """Check generation and independence; returns a list of violations."""
    problems = []
    vecs = rho.vectors
    for f in w.facets:
        if f.id not in vecs:
            problems.append(f"facet {f.id} has no colour vector")
        elif not (0 < vecs[f.id] < (1 << rho.width)):
            problems.append(f"facet {f.id} has vector outside Z2^{rho.width}")
    if problems:
        return problems
    if gf2_rank_vectors(list(vecs.values())) != rho.width:
        problems.append("colour vectors do not generate the group")
    for s in w.strata:
        if not s.facets:
            continue
        group = [vecs[f] for f in s.facets]
        if not gf2_independent(group):
            problems.append(
                f"facets {s.facets} meeting at stratum {s.id} "
                "(dim {}) have dependent colours".format(s.dim))
    return problems


def reduce_colouring(colouring, dim):
    """Fold the top colour of an even k-colouring, k > dim, into the sum
    of the others; the result is generalised, (k-1) wide and all-odd."""
    k = max(colouring.values())
    if k % 2 != 0:
        raise ColouringError(f"colour count {k} is odd")
    if k <= dim:
        raise ColouringError(f"colour count {k} must exceed dimension {dim}")
    full = (1 << (k - 1)) - 1
    vectors = {}
    for f, c in colouring.items():
        vectors[f] = full if c == k else (1 << (c - 1))
    return GeneralisedColouring(width=k - 1, vectors=vectors)


def is_orientable(rho):
    """All-odd colour vectors yield an orientable quotient."""
    return rho.popcounts_odd()
