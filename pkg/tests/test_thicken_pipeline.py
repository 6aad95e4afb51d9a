"""The full promotion pipeline on a synthetic dodecahedral manifold.

The reflection cover of one right-angled dodecahedron by a proper
4-colouring is a closed 3-manifold tessellated by 16 dodecahedra; it
thickens into 16 right-angled 120-cells with the hypersurface as an
isolated facet, and the mirrored complex realises the facet-count
formula 167 * n and splits into two mirror-image adjacency components.
"""

import pytest

from rightangle import colouring as co
from rightangle import corners as cr
from rightangle import orbit as ob
from rightangle.polytopes import catalog_load


@pytest.fixture(scope="module")
def mirrored_16():
    dod = catalog_load("dodecahedron")
    w = cr.build([dod], [])
    lam = co.find_colouring(co.adjacency_graph(w), 4).colouring
    m = ob.quotient_corner_complex(w, lam)
    assert m.is_closed() and m.chamber_count() == 16
    wp, m_facet = cr.thicken(m)
    wm, s = cr.mirror(wp, m_facet)
    return wp, m_facet, wm, s


def test_thicken_16_dodecahedra(mirrored_16):
    wp, m_facet, _, _ = mirrored_16
    assert wp.chamber_count() == 16
    assert wp.chambers[0].name == "120cell"
    assert not wp.non_embedded_facets()
    hosted = wp.facets[m_facet]
    assert hosted.isolated and hosted.embedded
    assert len(hosted.slots) == 16


def test_mirror_facet_count_formula(mirrored_16):
    _, _, wm, _ = mirrored_16
    assert len(wm.facets) == cr.facet_count_prediction(16) == 2672


def test_mirror_components_swap(mirrored_16):
    _, _, wm, s = mirrored_16
    graph = co.adjacency_graph(wm)
    comps = graph.components()
    assert sorted(map(len, comps)) == [1336, 1336]
    comp_sets = [set(c) for c in comps]
    probe = next(iter(comp_sets[0]))
    assert s[probe] in comp_sets[1]
    for f in list(graph.vertices)[::97]:
        for g2 in graph.adj[f]:
            assert s[g2] in graph.adj[s[f]]


def test_symmetric_five_colouring_at_scale(mirrored_16):
    _, _, wm, s = mirrored_16
    graph = co.adjacency_graph(wm)
    plus = [f.id for f in wm.facets
            if f.slots[0][0] < wm.mirror_info["halves"]]
    res = co.find_symmetric_colouring(graph, s, plus, 5, budget_ms=60000)
    assert res.status == "found"
    assert co.is_symmetric(res.colouring, s)
    rho = co.lift_colouring(res.colouring)
    assert co.validate_generalised(rho, wm) == []
    assert co.is_orientable(rho)
    # an even colour count above the dimension admits the folded form
    spread = co._spread_to_k(dict(res.colouring), 6)
    assert spread is not None
    reduced = co.reduce_colouring(spread, wm.dim)
    assert co.validate_generalised(reduced, wm) == []
    assert co.is_orientable(reduced)
