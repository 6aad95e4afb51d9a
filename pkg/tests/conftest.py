import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from rightangle import corners as cr  # noqa: E402
from rightangle.polytopes import FaceIso, catalog_load  # noqa: E402

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture_path(name):
    return os.path.join(FIXTURES, name)


def identity_iso(poly, d, i):
    return FaceIso.make(poly, (d, i), poly, (d, i),
                        {v: v for v in poly.vertex_sets[(d, i)]})


def pentagon_pair():
    """Two right-angled pentagons glued along the two edges next to e0."""
    pent = catalog_load("pentagon")
    gluings = [
        cr.Gluing(0, 1, 1, 1, identity_iso(pent, 1, 1)),
        cr.Gluing(0, 4, 1, 4, identity_iso(pent, 1, 4)),
    ]
    return cr.build([pent, pent], gluings)


def hexagon_selfglued():
    """One hexagon with edges e0 and e2 glued by the reflection fixing
    the edge between them."""
    hexa = catalog_load("hexagon")
    iso = FaceIso.make(hexa, (1, 0), hexa, (1, 2), {0: 3, 1: 2})
    return cr.build([hexa], [cr.Gluing(0, 0, 0, 2, iso)])


@pytest.fixture
def pentagon_pair_complex():
    return pentagon_pair()


@pytest.fixture
def hexagon_complex():
    return hexagon_selfglued()


def attach_index15_payloads(cert):
    """Derived torsion payloads under which the index-15 tree verifies."""
    from rightangle import slopes as S

    g = S.AbGroup(())

    def payload(kind):
        lam = g.element(1) if kind == "wide" else g.element(2)
        iota = S.IotaMap(g, g.element(1), lam)
        tau = S.TorsionData(g, frozenset({g.element(1)}), 1)
        return tau, iota

    kinds = {"T": "wide", "T12": "wide", "T1": "low", "T2": "low",
             "T22": "low"}
    for node in cert.qhs_nodes():
        if node.drilled:
            tau, iota = payload(kinds[node.drilled.name])
            node.drilled.torsion = tau
            node.drilled.iota = iota
    return cert
