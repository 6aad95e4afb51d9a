"""Drilling-filling proof certificates and their verification.

A certificate is a tree: solid-torus nodes carry torsion data and a
peripheral map and list their Dehn fillings; sphere nodes are either
census-resolved or justified by a drilled child whose candidate interval
contains at least two distinct verified L-space filling slopes together
with the refilling slope 1/0.  Verification walks the tree and reports a
verdict with a reason per node; census tables are name -> boolean.

The structural subset of a certificate (no torsion payloads) can also be
imported from the textual logs emitted by the search pipeline; see
`parse_log`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .slopes import (AbGroup, IotaMap, LongitudeComplement, Slope,
                     SlopeError, TorsionData, candidate_intervals, longitude,
                     slope_in_interval)


class CertificateError(ValueError):
    pass


@dataclass
class CensusLeaf:
    label: str
    slope: Slope
    census_name: str
    claimed_value: int  # 1 or -1 as in the logs
    branch: str = ""


@dataclass
class QhtNode:
    name: str  # "T" + parent label
    torsion: TorsionData | None = None
    iota: IotaMap | None = None
    double_interval: bool = False
    fillings: list = field(default_factory=list)  # CensusLeaf | QhsNode


@dataclass
class QhsNode:
    label: str
    slope: Slope | None = None  # filling slope from the parent QHT
    branch: str = ""
    volume: str | None = None
    homology: str | None = None
    census_name: str | None = None
    claimed_value: int | None = None
    drilled: QhtNode | None = None
    stub: bool = False


@dataclass
class Certificate:
    root: QhsNode

    def qhs_nodes(self):
        out = []

        def walk(node):
            out.append(node)
            if node.drilled:
                for f in node.drilled.fillings:
                    if isinstance(f, QhsNode):
                        walk(f)

        walk(self.root)
        return out

    def qht_nodes(self):
        return [n.drilled for n in self.qhs_nodes() if n.drilled]

    def node_count(self):
        return len(self.qhs_nodes()) + len(self.qht_nodes())

    def census_leaves(self):
        """Census-resolved endpoints: leaf fillings plus identified
        sphere nodes."""
        leaves = []
        for n in self.qhs_nodes():
            if n.census_name is not None:
                leaves.append((n.census_name, n.claimed_value))
            if n.drilled:
                for f in n.drilled.fillings:
                    if isinstance(f, CensusLeaf):
                        leaves.append((f.census_name, f.claimed_value))
        return leaves

    def find(self, label):
        for n in self.qhs_nodes():
            if n.label == label:
                return n
        raise CertificateError(f"no node labelled {label!r}")


# -- census tables ---------------------------------------------------------


def load_census_table(text):
    """Two-column `name value` with value in {0, 1}; contradictions are
    errors."""
    table = {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2 or parts[1] not in ("0", "1"):
            raise CertificateError(f"census line {ln}: expected `name 0|1`")
        name, value = parts[0], parts[1] == "1"
        if name in table and table[name] != value:
            raise CertificateError(
                f"census line {ln}: {name} claimed both true and false")
        table[name] = value
    return table


# -- verification ----------------------------------------------------------

VERIFIED = "VERIFIED-L"
REFUTED = "REFUTED"
UNPROVEN = "UNPROVEN"

TARGET = Slope.of(1, 0)


@dataclass
class Verdict:
    label: str
    kind: str  # qhs / qht / leaf
    status: str
    reason: str
    children: list = field(default_factory=list)

    def flatten(self):
        out = [self]
        for c in self.children:
            out.extend(c.flatten())
        return out

    def format(self, indent=0):
        pad = "  " * indent
        lines = [f"{pad}{self.label or 'root'} [{self.kind}] "
                 f"{self.status}: {self.reason}"]
        for c in self.children:
            lines.extend(c.format(indent + 1))
        return lines


def verify_certificate(cert, census):
    """Verdict tree for a full certificate against a census table."""
    if not isinstance(cert, Certificate):
        raise CertificateError("expected a Certificate")
    return _verify_qhs(cert.root, census)


def _leaf_verdict(leaf, census):
    value = census.get(leaf.census_name)
    if value is True:
        return Verdict(leaf.label, "leaf", VERIFIED,
                       f"census: {leaf.census_name} is an L-space")
    if value is False:
        return Verdict(leaf.label, "leaf", REFUTED,
                       f"census: {leaf.census_name} is not an L-space")
    return Verdict(leaf.label, "leaf", UNPROVEN,
                   f"census name {leaf.census_name} not in the table")


def _verify_qhs(node, census):
    if node.census_name is not None:
        value = census.get(node.census_name)
        if value is True:
            return Verdict(node.label, "qhs", VERIFIED,
                           f"census: {node.census_name} is an L-space")
        if value is False:
            return Verdict(node.label, "qhs", REFUTED,
                           f"census: {node.census_name} is not an L-space")
        # fall through to a drilling argument if there is one
    if node.drilled is None:
        missing = (f"census name {node.census_name} not in the table; "
                   if node.census_name else "")
        return Verdict(node.label, "qhs", UNPROVEN,
                       missing + "no census entry and no drilling")
    y = node.drilled
    child_verdicts = []
    for f in y.fillings:
        if isinstance(f, CensusLeaf):
            child_verdicts.append((f.slope, _leaf_verdict(f, census)))
        else:
            child_verdicts.append((f.slope, _verify_qhs(f, census)))
    me = Verdict(node.label, "qhs", UNPROVEN, "")
    sub = Verdict(y.name, "qht", "INFO", "")
    sub.children = [v for (_, v) in child_verdicts]
    me.children = [sub]

    if y.torsion is None or y.iota is None:
        sub.reason = "structural node: no torsion payload"
        me.reason = "drilling carries no torsion payload"
        return me
    try:
        lslope = longitude(y.iota)
    except SlopeError as exc:
        sub.reason = f"invalid peripheral map: {exc}"
        me.reason = sub.reason
        return me
    if TARGET.key() == lslope.key():
        sub.reason = "refilling slope equals the longitude"
        me.reason = sub.reason
        return me
    try:
        intervals = candidate_intervals(y.torsion, y.iota, TARGET)
    except SlopeError as exc:
        sub.reason = f"interval computation failed: {exc}"
        me.reason = sub.reason
        return me
    if isinstance(intervals, LongitudeComplement):
        intervals = [intervals]
    interval_names = ", ".join(str(i) for i in intervals)
    sub.reason = f"candidate interval(s): {interval_names}"
    if y.double_interval and len(intervals) != 2:
        sub.reason += " (log claimed a double interval)"

    best_reason = "needs at least two distinct verified L-space fillings"
    for iv in intervals:
        good = {}
        outside = []
        for (slope, v) in child_verdicts:
            if v.status != VERIFIED:
                continue
            if slope.key() == lslope.key():
                continue
            if slope_in_interval(slope, iv):
                good[slope.key()] = slope
            else:
                outside.append(slope)
        if not slope_in_interval(TARGET, iv):
            continue
        if len(good) >= 2:
            chosen = ", ".join(str(s) for s in sorted(
                good.values(), key=lambda s: s.key()))
            me.reason = (f"two L-space fillings ({chosen}) in {iv} "
                         "together with the refilling slope")
            me.status = VERIFIED
            return me
        if len(good) == 1:
            best_reason = (f"only one verified L-space filling in {iv}: "
                           "Floer simplicity not established")
        for s in outside:
            for (slope, v) in child_verdicts:
                if slope.key() == s.key() and v.status == VERIFIED:
                    v.reason += f"; slope {s} not in interval {iv}"
    me.reason = best_reason
    if any(v.status == REFUTED for (_, v) in child_verdicts):
        refuted = [str(s) for (s, v) in child_verdicts
                   if v.status == REFUTED]
        me.reason += ("; filling(s) " + ", ".join(refuted)
                      + " refuted by the census")
    return me


# -- textual certificate files ---------------------------------------------


def write_certificate(cert, fh):
    def slope_str(s):
        return f"{s.p}/{s.q}"

    def walk(node):
        fh.write(f"qhs {node.label or '.'}\n")
        if node.slope is not None:
            fh.write(f"slope {slope_str(node.slope)}\n")
        if node.branch:
            fh.write(f"branch {node.branch}\n")
        if node.volume is not None:
            fh.write(f"volume {node.volume}\n")
        if node.homology is not None:
            fh.write(f"homology {node.homology}\n")
        if node.census_name is not None:
            fh.write(f"census {node.census_name} {node.claimed_value}\n")
        fh.write("\n")
        if node.drilled:
            y = node.drilled
            fh.write(f"qht {y.name} of {node.label or '.'}\n")
            if y.iota is not None:
                factors = " ".join(str(t) for t in y.iota.group.factors)
                fh.write(f"factors {factors}\n".rstrip() + "\n")
                mu = " ".join([str(y.iota.mu[0])]
                              + [str(c) for c in y.iota.mu[1]])
                lam = " ".join([str(y.iota.lam[0])]
                               + [str(c) for c in y.iota.lam[1]])
                fh.write(f"iota {mu} ; {lam}\n")
            if y.torsion is not None:
                fh.write(f"horizon {y.torsion.horizon}\n")
                zeros = []
                for (m, coords) in sorted(y.torsion.zero_set):
                    zeros.append(":".join([str(m)]
                                          + [",".join(str(c)
                                                      for c in coords)])
                                 if coords else str(m))
                fh.write("zeros " + " ".join(zeros) + "\n")
            if y.double_interval:
                fh.write("double-interval\n")
            fh.write("\n")
            for f in y.fillings:
                if isinstance(f, CensusLeaf):
                    fh.write(f"leaf {f.label or '.'} of {y.name} slope "
                             f"{slope_str(f.slope)} census {f.census_name} "
                             f"{f.claimed_value}\n\n")
                else:
                    walk(f)

    fh.write("cert-format 1\n\n")
    walk(cert.root)


def parse_certificate(text):
    lines = [ln.rstrip() for ln in text.splitlines()]
    idx = 0
    nodes = {}
    qhts = {}
    root = None

    def err(msg, ln):
        raise CertificateError(f"certificate line {ln + 1}: {msg}")

    def parse_slope(tok, ln):
        m = re.fullmatch(r"(-?\d+)/(-?\d+)", tok)
        if not m:
            err(f"bad slope {tok!r}", ln)
        return Slope.of(int(m.group(1)), int(m.group(2)))

    while idx < len(lines):
        line = lines[idx].strip()
        if not line or line.startswith("#") or line.startswith("cert-format"):
            idx += 1
            continue
        parts = line.split()
        if parts[0] == "qhs":
            label = parts[1] if parts[1] != "." else ""
            node = QhsNode(label=label)
            nodes[label] = node
            idx += 1
            while idx < len(lines) and lines[idx].strip():
                kv = lines[idx].strip().split(None, 1)
                key = kv[0]
                rest = kv[1] if len(kv) > 1 else ""
                if key == "slope":
                    node.slope = parse_slope(rest, idx)
                elif key == "branch":
                    node.branch = rest
                elif key == "volume":
                    node.volume = rest
                elif key == "homology":
                    node.homology = rest
                elif key == "census":
                    name, value = rest.rsplit(None, 1)
                    node.census_name = name
                    node.claimed_value = int(value)
                else:
                    err(f"unknown qhs field {key!r}", idx)
                idx += 1
            if root is None:
                root = node
            else:
                parent_name = "T" + _parse_label(label)[0]
                if parent_name not in qhts:
                    err(f"node {label!r} appears before its drilling "
                        f"{parent_name!r}", idx - 1)
                qhts[parent_name].fillings.append(node)
        elif parts[0] == "qht":
            name = parts[1]
            of_label = parts[3] if parts[3] != "." else ""
            if of_label not in nodes:
                err(f"qht {name!r} references unknown node {of_label!r}",
                    idx)
            y = QhtNode(name=name)
            nodes[of_label].drilled = y
            qhts[name] = y
            idx += 1
            factors = ()
            mu = lam = None
            horizon = None
            zeros = None
            double = False
            while idx < len(lines) and lines[idx].strip():
                kv = lines[idx].strip().split(None, 1)
                key = kv[0]
                rest = kv[1] if len(kv) > 1 else ""
                if key == "factors":
                    factors = tuple(int(x) for x in rest.split())
                elif key == "iota":
                    mu_s, lam_s = rest.split(";")
                    mu = tuple(int(x) for x in mu_s.split())
                    lam = tuple(int(x) for x in lam_s.split())
                elif key == "horizon":
                    horizon = int(rest)
                elif key == "zeros":
                    zeros = rest.split()
                elif key == "double-interval":
                    double = True
                else:
                    err(f"unknown qht field {key!r}", idx)
                idx += 1
            y.double_interval = double
            if mu is not None:
                group = AbGroup(factors)
                y.iota = IotaMap(group, group.element(mu[0], mu[1:]),
                                 group.element(lam[0], lam[1:]))
                if horizon is not None and zeros is not None:
                    zset = set()
                    for z in zeros:
                        if ":" in z:
                            m_s, coords_s = z.split(":")
                            coords = tuple(int(c)
                                           for c in coords_s.split(","))
                        else:
                            m_s, coords = z, ()
                        zset.add(group.element(int(m_s), coords))
                    y.torsion = TorsionData(group, frozenset(zset), horizon)
                    y.torsion.validate()
        elif parts[0] == "leaf":
            label = parts[1] if parts[1] != "." else ""
            if parts[2] != "of" or parts[4] != "slope" or parts[6] != "census":
                err("bad leaf line", idx)
            qname = parts[3]
            if qname not in qhts:
                err(f"leaf references unknown qht {qname!r}", idx)
            slope = parse_slope(parts[5], idx)
            qhts[qname].fillings.append(
                CensusLeaf(label=label, slope=slope, census_name=parts[7],
                           claimed_value=int(parts[8])))
            idx += 1
        else:
            err(f"unknown block {parts[0]!r}", idx)
    if root is None:
        raise CertificateError("no root node in certificate")
    return Certificate(root)


# -- search-log import (structural only) ------------------------------------

_LABEL_RE = re.compile(r"^(?P<parent>.*?)(?P<branch>[A-Z]?)(?P<idx>[0-9])$")

_RE_PREAMBLE = re.compile(r"^\s*Ini\w*alizing\.\.\.\s*$")
_RE_ROOT = re.compile(r"^: M has volume (?P<vol>\S+) and homology "
                      r"(?P<hom>.+)$")
_RE_VOLUME = re.compile(r"^(?P<label>[0-9A-Z]+): T(?P<parent>[0-9A-Z]*)"
                        r"\((?P<p>-?\d+), (?P<q>-?\d+)\) has volume "
                        r"(?P<vol>\S+) and homology (?P<hom>.+)$")
_RE_DRILL = re.compile(r"^(?P<label>[0-9A-Z]*): Computing Turaev torsion "
                       r"drilling\.\.\.$")
_RE_LEAF = re.compile(r"^(?P<label>[0-9A-Z]+): The manifold "
                      r"T(?P<parent>[0-9A-Z]*) filled with \((?P<p>-?\d+), "
                      r"(?P<q>-?\d+)\) is \[(?P<name>[^\]]+)\], its "
                      r"L-space value is (?P<val>-?1)$")
_RE_KNOWN = re.compile(r"^(?P<label>[0-9A-Z]+): T(?P<parent>[0-9A-Z]*)"
                       r"\((?P<p>-?\d+), (?P<q>-?\d+)\) is (?P<name>\S+), "
                       r"whose L-space value is known to be (?P<val>-?1)$")
_RE_DOUBLE = re.compile(r"^(?P<label>[0-9A-Z]*): Double interval\.\.$")


def _parse_label(label):
    """(parent label, branch letter) of a node label."""
    m = _LABEL_RE.fullmatch(label)
    if not m:
        raise CertificateError(f"bad node label {label!r}")
    return m.group("parent"), m.group("branch")


def parse_log(text):
    """Import a search log into a structural Certificate.

    One sphere node per `has volume` line, one solid-torus node per
    `Computing Turaev torsion drilling` line; census-resolved fillings
    become leaf entries of their solid torus.  Fragments are accepted:
    missing ancestors are synthesised as stubs.
    """
    nodes = {}
    qhts = {}
    root = None

    def ensure_node(label):
        nonlocal root
        if label in nodes:
            return nodes[label]
        node = QhsNode(label=label, stub=True)
        nodes[label] = node
        if label == "":
            root = node
            return node
        parent_label, branch = _parse_label(label)
        y = ensure_qht(parent_label)
        node.branch = branch
        y.fillings.append(node)
        return node

    def ensure_qht(label):
        name = "T" + label
        if name in qhts:
            return qhts[name]
        parent = ensure_node(label)
        if parent.drilled is None:
            parent.drilled = QhtNode(name=name)
            qhts[name] = parent.drilled
        return parent.drilled

    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if _RE_PREAMBLE.match(line):
            continue
        m = _RE_ROOT.match(line)
        if m:
            node = ensure_node("")
            node.stub = False
            node.volume = m.group("vol")
            node.homology = m.group("hom")
            continue
        m = _RE_VOLUME.match(line)
        if m:
            label = m.group("label")
            parent_label, branch = _parse_label(label)
            if parent_label != m.group("parent"):
                raise CertificateError(
                    f"log line {ln}: label {label} does not match "
                    f"T{m.group('parent')}")
            node = ensure_node(label)
            node.stub = False
            node.slope = Slope.of(int(m.group("p")), int(m.group("q")))
            node.volume = m.group("vol")
            node.homology = m.group("hom")
            continue
        m = _RE_DRILL.match(line)
        if m:
            ensure_qht(m.group("label"))
            continue
        m = _RE_LEAF.match(line)
        if m:
            label = m.group("label")
            parent_label, branch = _parse_label(label)
            if parent_label != m.group("parent"):
                raise CertificateError(
                    f"log line {ln}: leaf label {label} does not match "
                    f"T{m.group('parent')}")
            y = ensure_qht(parent_label)
            y.fillings.append(CensusLeaf(
                label=label,
                slope=Slope.of(int(m.group("p")), int(m.group("q"))),
                census_name=m.group("name"),
                claimed_value=int(m.group("val")),
                branch=branch))
            continue
        m = _RE_KNOWN.match(line)
        if m:
            label = m.group("label")
            node = nodes.get(label)
            if node is None:
                node = ensure_node(label)
            if node.slope is None:
                node.slope = Slope.of(int(m.group("p")), int(m.group("q")))
            node.census_name = m.group("name")
            node.claimed_value = int(m.group("val"))
            continue
        m = _RE_DOUBLE.match(line)
        if m:
            ensure_qht(m.group("label")).double_interval = True
            continue
        raise CertificateError(f"log line {ln}: cannot parse {line!r}")
    if root is None:
        raise CertificateError("no root: log contains no manifold lines")
    return Certificate(root)


def print_log(cert):
    """Re-emit a structural certificate in the log grammar; parsing the
    output reproduces the certificate."""
    lines = []

    def walk(node):
        if node.label == "" and node.volume is not None:
            lines.append(f": M has volume {node.volume} and homology "
                         f"{node.homology}")
        elif node.volume is not None:
            parent_label, _ = _parse_label(node.label)
            lines.append(
                f"{node.label}: T{parent_label}({node.slope.p}, "
                f"{node.slope.q}) has volume {node.volume} and homology "
                f"{node.homology}")
        if node.census_name is not None and node.slope is not None:
            parent_label, _ = _parse_label(node.label)
            lines.append(
                f"{node.label}: T{parent_label}({node.slope.p}, "
                f"{node.slope.q}) is {node.census_name}, whose L-space "
                f"value is known to be {node.claimed_value}")
        if node.drilled:
            y = node.drilled
            lines.append(f"{node.label}: Computing Turaev torsion "
                         "drilling...")
            if y.double_interval:
                lines.append(f"{node.label}: Double interval..")
            for f in y.fillings:
                if isinstance(f, CensusLeaf):
                    lines.append(
                        f"{f.label}: The manifold {y.name} filled with "
                        f"({f.slope.p}, {f.slope.q}) is [{f.census_name}], "
                        f"its L-space value is {f.claimed_value}")
                else:
                    walk(f)

    walk(cert.root)
    return "\n".join(lines) + "\n"
