import copy
import io
import random

import pytest

from conftest import fixture_path

from rightangle import certificates as ce
from rightangle import slopes as S


def load_fixture(name):
    with open(fixture_path(name)) as fh:
        return fh.read()


def attach_payloads(cert):
    """Derived torsion payloads making the index-15 tree verifiable."""
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


@pytest.fixture
def index15():
    return ce.parse_log(load_fixture("index15.log"))


@pytest.fixture
def census():
    return ce.load_census_table(load_fixture("census_stub.tsv"))


def test_parse_index15_structure(index15):
    cert = index15
    assert cert.node_count() == 13
    assert len(cert.qhs_nodes()) == 8
    assert len(cert.qht_nodes()) == 5
    names = sorted(n for n, _ in cert.census_leaves())
    assert names == ["o9_34893(-3,2)", "o9_36980(1,2)", "s345(-1,3)",
                     "t12195(-1,-3)", "v2876(-1,2)", "v3245(1,2)"]
    assert all(v == 1 for _, v in cert.census_leaves())


def test_log_roundtrip(index15):
    text = ce.print_log(index15)
    again = ce.parse_log(text)
    assert again == index15


def test_fragment_double_interval():
    frag = ce.parse_log(load_fixture("double_interval.log"))
    node = frag.find("22111")
    assert node.drilled.double_interval
    branches = {f.branch for f in node.drilled.fillings
                if isinstance(f, ce.QhsNode)}
    assert branches == {"A", "B"}
    assert frag.census_leaves() == [("v2553(-4,1)", -1)]
    assert ce.parse_log(ce.print_log(frag)) == frag


def test_empty_log_is_error():
    with pytest.raises(ce.CertificateError, match="no root"):
        ce.parse_log("")


def test_unparseable_line_reports_number():
    with pytest.raises(ce.CertificateError, match="line 2"):
        ce.parse_log(": M has volume 1.0 and homology Z/3\nnonsense here\n")


def test_census_table_contradiction():
    with pytest.raises(ce.CertificateError, match="both true and false"):
        ce.load_census_table("a 1\na 0\n")
    with pytest.raises(ce.CertificateError):
        ce.load_census_table("a maybe\n")


def test_verify_index15(index15, census):
    cert = attach_payloads(index15)
    verdict = ce.verify_certificate(cert, census)
    assert verdict.status == ce.VERIFIED
    statuses = {v.label: v.status for v in verdict.flatten()
                if v.kind == "qhs"}
    assert statuses[""] == ce.VERIFIED
    assert statuses["1"] == statuses["2"] == ce.VERIFIED


def test_single_slope_tamper(index15, census):
    cert = attach_payloads(index15)
    bad = copy.deepcopy(cert)
    t1 = bad.find("1").drilled
    leaf = next(f for f in t1.fillings if isinstance(f, ce.CensusLeaf))
    leaf.slope = S.Slope.of(-5, 2)
    verdict = ce.verify_certificate(bad, census)
    assert verdict.status == ce.UNPROVEN
    reasons = " | ".join(v.reason for v in verdict.flatten())
    assert "not in interval" in reasons


def test_remove_leaf_unproven(index15, census):
    cert = attach_payloads(index15)
    bad = copy.deepcopy(cert)
    t1 = bad.find("1").drilled
    t1.fillings = [f for f in t1.fillings
                   if not isinstance(f, ce.CensusLeaf)]
    verdict = ce.verify_certificate(bad, census)
    assert verdict.status == ce.UNPROVEN
    reasons = " | ".join(v.reason for v in verdict.flatten())
    assert "Floer simplicity" in reasons or "at least two" in reasons


def test_one_child_unproven_reason(index15, census):
    cert = attach_payloads(index15)
    # drop one leaf's census entry instead of the slope
    partial = dict(census)
    del partial["s345(-1,3)"]
    verdict = ce.verify_certificate(cert, partial)
    assert verdict.status == ce.UNPROVEN
    reasons = " | ".join(v.reason for v in verdict.flatten())
    assert "only one verified L-space filling" in reasons


def test_refuted_census(index15, census):
    cert = attach_payloads(index15)
    lying = dict(census)
    lying["s345(-1,3)"] = False
    verdict = ce.verify_certificate(cert, lying)
    flat = {v.label: v for v in verdict.flatten()}
    assert flat["11"].status == ce.REFUTED
    assert verdict.status == ce.UNPROVEN


def test_monotone_in_census_facts(index15, census):
    cert = attach_payloads(index15)
    rng = random.Random(6)
    names = sorted(census)
    full = ce.verify_certificate(cert, census).status
    assert full == ce.VERIFIED
    for _ in range(12):
        sub = {n: census[n] for n in names if rng.random() < 0.6}
        s1 = ce.verify_certificate(cert, sub).status
        # grow the table: the verdict may only improve
        s2 = ce.verify_certificate(cert, census).status
        order = {ce.UNPROVEN: 0, ce.VERIFIED: 1}
        assert order.get(s2, 0) >= order.get(s1, 0)


def test_double_interval_or_semantics(census):
    """A double-interval node verifies when either branch provides two
    L-space fillings in its own interval."""
    g = S.AbGroup(())
    iota = S.IotaMap(g, g.element(1), g.element(1))
    tau = S.TorsionData(g, frozenset({g.element(1)}), 1)
    # candidate intervals around 1/0: [0, inf] and [inf, -2]
    y = ce.QhtNode(name="T", torsion=tau, iota=iota, double_interval=True)
    root = ce.QhsNode(label="", drilled=y)
    leaf_a1 = ce.CensusLeaf("1", S.Slope.of(1, 2), "goodA1", 1, branch="A")
    leaf_a2 = ce.CensusLeaf("2", S.Slope.of(1, 3), "goodA2", 1, branch="A")
    leaf_b1 = ce.CensusLeaf("3", S.Slope.of(-3, 1), "badB1", 1, branch="B")
    y.fillings = [leaf_a1, leaf_a2, leaf_b1]
    table = {"goodA1": True, "goodA2": True, "badB1": True}
    verdict = ce.verify_certificate(ce.Certificate(root), table)
    assert verdict.status == ce.VERIFIED

    # B branch alone: only one filling in [inf, -2] -> unproven
    y.fillings = [leaf_b1]
    verdict = ce.verify_certificate(ce.Certificate(root), table)
    assert verdict.status == ce.UNPROVEN

    # two fillings in the B interval verify through the other arc
    leaf_b2 = ce.CensusLeaf("4", S.Slope.of(-4, 1), "badB2", 1, branch="B")
    y.fillings = [leaf_b1, leaf_b2]
    table["badB2"] = True
    verdict = ce.verify_certificate(ce.Certificate(root), table)
    assert verdict.status == ce.VERIFIED


def test_distinct_slopes_required(census):
    g = S.AbGroup(())
    iota = S.IotaMap(g, g.element(1), g.element(1))
    tau = S.TorsionData(g, frozenset({g.element(1)}), 1)
    y = ce.QhtNode(name="T", torsion=tau, iota=iota)
    root = ce.QhsNode(label="", drilled=y)
    same1 = ce.CensusLeaf("1", S.Slope.of(1, 2), "m1", 1)
    same2 = ce.CensusLeaf("2", S.Slope.of(2, 4), "m2", 1)
    y.fillings = [same1, same2]
    verdict = ce.verify_certificate(
        ce.Certificate(root), {"m1": True, "m2": True})
    assert verdict.status == ce.UNPROVEN


def test_complement_interval_route():
    g = S.AbGroup(())
    iota = S.IotaMap(g, g.element(1), g.element(0))
    tau = S.TorsionData(g, frozenset(), 0)
    y = ce.QhtNode(name="T", torsion=tau, iota=iota)
    root = ce.QhsNode(label="", drilled=y)
    y.fillings = [ce.CensusLeaf("1", S.Slope.of(5, 1), "a", 1),
                  ce.CensusLeaf("2", S.Slope.of(-7, 2), "b", 1)]
    verdict = ce.verify_certificate(
        ce.Certificate(root), {"a": True, "b": True})
    assert verdict.status == ce.VERIFIED
    # a filling at the longitude cannot count
    y.fillings = [ce.CensusLeaf("1", S.Slope.of(0, 1), "a", 1),
                  ce.CensusLeaf("2", S.Slope.of(-7, 2), "b", 1)]
    verdict = ce.verify_certificate(
        ce.Certificate(root), {"a": True, "b": True})
    assert verdict.status == ce.UNPROVEN


def test_certificate_file_roundtrip(index15, census):
    cert = attach_payloads(index15)
    buf = io.StringIO()
    ce.write_certificate(cert, buf)
    again = ce.parse_certificate(buf.getvalue())
    assert again.node_count() == cert.node_count()
    assert (ce.verify_certificate(again, census).status
            == ce.verify_certificate(cert, census).status)


def test_structural_certificate_unproven_without_payloads(index15, census):
    verdict = ce.verify_certificate(index15, census)
    # the root falls back to census-free drilling without payloads
    assert verdict.status == ce.UNPROVEN
    reasons = " | ".join(v.reason for v in verdict.flatten())
    assert "no torsion payload" in reasons
