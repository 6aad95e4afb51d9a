"""Command-line front end.

Each subcommand wraps one pipeline stage and writes line-oriented
key/value reports (plus optional JSON).  Exit codes: 0 on success, 1 for
domain errors (invalid gluings, non-embedded facets, ...), 2 for I/O and
format errors.  The catalog directory can be overridden with the
CORNERS_DATA environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import colouring as co
from . import corners as cr
from . import homology as ho
from . import orbit as ob
from .certificates import (CertificateError, load_census_table,
                           parse_certificate, parse_log, verify_certificate)
from .polytopes import CATALOG_FVECTORS, LatticeError, catalog_load


@dataclass
class PipelineConfig:
    budget_ms: int = 10000
    snf_cap: int = 2000
    threads: int = 1
    out_dir: str | None = None
    emit_json: bool = False

    def validate(self):
        if self.budget_ms <= 0 or self.snf_cap <= 0 or self.threads <= 0:
            raise ValueError("budgets must be positive")
        if self.out_dir is not None and not os.path.isdir(self.out_dir):
            os.makedirs(self.out_dir, exist_ok=True)


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", 2)


def _emit(cfg, name, lines, payload=None):
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if cfg.out_dir:
        with open(os.path.join(cfg.out_dir, name), "w") as fh:
            fh.write(text)
    if cfg.emit_json and payload is not None:
        blob = json.dumps(payload, indent=2, sort_keys=True) + "\n"
        sys.stdout.write(blob)
        if cfg.out_dir:
            base = name.rsplit(".", 1)[0] + ".json"
            with open(os.path.join(cfg.out_dir, base), "w") as fh:
                fh.write(blob)


def _build_from_file(path):
    text = _read(path)
    try:
        chambers, gluings = cr.parse_tessellation(text)
    except cr.CornerError as exc:
        raise CliError(str(exc), 2)
    try:
        return cr.build(chambers, gluings)
    except (cr.CornerError, LatticeError) as exc:
        raise CliError(str(exc), 1)


def cmd_catalog(args, cfg):
    try:
        poly = catalog_load(args.name)
    except LatticeError as exc:
        raise CliError(str(exc), 1)
    lines = [f"name {poly.name}", f"dim {poly.dim}",
             "fvector " + " ".join(str(c) for c in poly.fvector()),
             "diamond ok"]
    _emit(cfg, "catalog.txt", lines,
          payload={"name": poly.name, "dim": poly.dim,
                   "fvector": list(poly.fvector())})
    return 0


def _facet_lines(w):
    lines = [f"chambers {w.chamber_count()}", f"facets {len(w.facets)}"]
    for f in w.facets:
        adj = ",".join(str(a) for a in sorted(f.adjacent))
        lines.append(
            f"facet {f.id} slots {len(f.slots)} isolated "
            f"{int(f.isolated)} embedded {int(f.embedded)} adj [{adj}]")
    bad = w.non_embedded_facets()
    for f in bad:
        (g1, g2) = f.self_corners[0]
        lines.append(
            f"non-embedded {f.id} germs {g1[0]}.{g1[1]} {g2[0]}.{g2[1]}")
    return lines, bad


def cmd_build(args, cfg):
    w = _build_from_file(args.tessellation)
    lines, _ = _facet_lines(w)
    payload = {"chambers": w.chamber_count(),
               "facets": [{"id": f.id, "slots": [list(s) for s in f.slots],
                           "isolated": f.isolated, "embedded": f.embedded,
                           "adjacent": sorted(f.adjacent)}
                          for f in w.facets]}
    if all(f.embedded for f in w.facets):
        comps = co.adjacency_graph(w).components()
        lines.append(f"graph-components {len(comps)}")
        payload["graph_components"] = len(comps)
    _emit(cfg, "build.txt", lines, payload=payload)
    return 0


def cmd_thicken(args, cfg):
    w = _build_from_file(args.tessellation)
    try:
        wt, m_facet = cr.thicken(w)
    except cr.CornerError as exc:
        raise CliError(str(exc), 1)
    lines, bad = _facet_lines(wt)
    lines.insert(0, f"hosted-facet {m_facet}")
    _emit(cfg, "thicken.txt", lines)
    if bad:
        f = bad[0]
        (g1, g2) = f.self_corners[0]
        sys.stderr.write(
            f"non-embedded facet {f.id}: germs {g1[0]}.{g1[1]} and "
            f"{g2[0]}.{g2[1]} merge across an edge\n")
        return 1
    if cfg.out_dir:
        with open(os.path.join(cfg.out_dir, "thickened.tess"), "w") as fh:
            cr.write_tessellation(wt, fh)
    return 0


def _mirrored(args, w):
    if args.mirror_facet is None:
        return w, None, None
    try:
        wm, s = cr.mirror(w, args.mirror_facet)
    except (cr.CornerError, IndexError) as exc:
        raise CliError(str(exc), 1)
    plus = [f.id for f in wm.facets
            if f.slots[0][0] < wm.mirror_info["halves"]]
    return wm, s, plus


def cmd_colour(args, cfg):
    w = _build_from_file(args.tessellation)
    w, s, plus = _mirrored(args, w)
    try:
        graph = co.adjacency_graph(w)
    except co.ColouringError as exc:
        raise CliError(str(exc), 1)
    if args.symmetric:
        if s is None:
            raise CliError("--symmetric needs --mirror-facet", 2)
        res = co.find_symmetric_colouring(graph, s, plus, args.colours,
                                          budget_ms=cfg.budget_ms)
    else:
        res = co.find_colouring(graph, args.colours,
                                budget_ms=cfg.budget_ms)
    lines = [f"status {res.status}", f"reason {res.reason}",
             f"nodes {res.nodes}"]
    colouring = res.colouring
    if res.status == "found":
        lines.append(f"colours {max(colouring.values())}")
        if args.symmetric:
            lines.append("symmetric 1")
    _emit(cfg, "colour.txt", lines,
          payload={"status": res.status, "reason": res.reason,
                   "colouring": colouring})
    if res.status == "found":
        out = [f"{f} {c}" for f, c in sorted(colouring.items())]
        if args.colour_file:
            with open(args.colour_file, "w") as fh:
                fh.write("\n".join(out) + "\n")
        elif cfg.out_dir:
            with open(os.path.join(cfg.out_dir, "colouring.txt"), "w") as fh:
                fh.write("\n".join(out) + "\n")
    return 0


def read_colour_file(text, width=None):
    """`facetId colour` or `facetId 0b<bits>` lines."""
    plain = {}
    vectors = {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise CliError(f"colour line {ln}: expected `facet colour`", 2)
        fid = int(parts[0])
        if parts[1].startswith("0b"):
            vectors[fid] = int(parts[1], 2)
        else:
            plain[fid] = int(parts[1])
    if vectors and plain:
        raise CliError("colour file mixes plain colours and bitvectors", 2)
    if vectors:
        m = width or max(vectors.values()).bit_length()
        return co.GeneralisedColouring(width=m, vectors=vectors)
    return plain


def write_complex_dump(x, fh):
    fh.write(f"dim {x.dim}\n")
    fh.write(f"orientable {int(x.orientable)}\n")
    for d in range(x.dim + 1):
        fh.write(f"cells {d} {len(x.cells[d])}\n")
    for d in range(1, x.dim + 1):
        for (r, c), v in sorted(x.boundary[d].entries.items()):
            fh.write(f"{d} {r} {c} {v}\n")


def read_complex_dump(text):
    dim = None
    counts = {}
    orientable = False
    entries = {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "dim":
            dim = int(parts[1])
        elif parts[0] == "orientable":
            orientable = bool(int(parts[1]))
        elif parts[0] == "cells":
            counts[int(parts[1])] = int(parts[2])
        elif len(parts) == 4:
            d, r, c, v = (int(p) for p in parts)
            entries.setdefault(d, []).append((r, c, v))
        else:
            raise CliError(f"dump line {ln}: cannot parse {line!r}", 2)
    if dim is None or set(counts) != set(range(dim + 1)):
        raise CliError("dump misses dim or cell tables", 2)
    boundary = {}
    for d in range(1, dim + 1):
        boundary[d] = ho.SparseIntMatrix.from_entries(
            counts[d - 1], counts[d], entries.get(d, []))
    return {"counts": [counts[d] for d in range(dim + 1)],
            "boundary": boundary, "orientable": orientable, "dim": dim}


def _load_quotient(args, cfg):
    w = _build_from_file(args.tessellation)
    w, s, plus = _mirrored(args, w)
    spec = read_colour_file(_read(args.colours))
    try:
        return w, ob.build_quotient(w, spec)
    except (ob.OrbitError, co.ColouringError) as exc:
        raise CliError(str(exc), 1)


def cmd_orbit(args, cfg):
    w, x = _load_quotient(args, cfg)
    lines = [f"dim {x.dim}", f"copies {1 << x.k}"]
    for d, ncells in enumerate(x.cell_counts()):
        lines.append(f"cells {d} {ncells}")
    lines.append(f"chi {x.euler_characteristic()}")
    lines.append(f"orientable {int(x.orientable)}")
    _emit(cfg, "orbit.txt", lines,
          payload={"dim": x.dim, "copies": 1 << x.k,
                   "cells": x.cell_counts(),
                   "chi": x.euler_characteristic(),
                   "orientable": x.orientable})
    if args.dump_file or cfg.out_dir:
        path = args.dump_file or os.path.join(cfg.out_dir, "complex.dump")
        with open(path, "w") as fh:
            write_complex_dump(x, fh)
    return 0


def cmd_homology(args, cfg):
    data = read_complex_dump(_read(args.dump))
    fields = {"gf2": ("gf2",), "rational": ("rational",),
              "both": ("gf2", "rational")}[args.field]

    class _X:
        dim = data["dim"]
        cells = {d: range(n) for d, n in enumerate(data["counts"])}
        boundary = data["boundary"]
        orientable = data["orientable"]

    try:
        lines, result = ho.homology_report(_X, fields,
                                           fast_rational=args.fast)
    except ho.HomologyError as exc:
        raise CliError(str(exc), 1)
    _emit(cfg, "homology.txt", lines)
    if cfg.emit_json:
        payload = {f: list(bv.values) for f, bv in result.items()}
        text = json.dumps(payload, indent=2) + "\n"
        sys.stdout.write(text)
        if cfg.out_dir:
            with open(os.path.join(cfg.out_dir, "homology.json"), "w") as fh:
                fh.write(text)
    return 0


def cmd_certify(args, cfg):
    try:
        cert = parse_certificate(_read(args.certificate))
        census = load_census_table(_read(args.census))
    except CertificateError as exc:
        raise CliError(str(exc), 2)
    try:
        verdict = verify_certificate(cert, census)
    except CertificateError as exc:
        raise CliError(str(exc), 1)
    lines = verdict.format()
    lines.append(f"root: {verdict.status}")
    payload = [{"label": v.label, "kind": v.kind, "status": v.status,
                "reason": v.reason} for v in verdict.flatten()]
    _emit(cfg, "verdicts.txt", lines, payload=payload)
    return 0


def cmd_parse_log(args, cfg):
    try:
        cert = parse_log(_read(args.log))
    except CertificateError as exc:
        raise CliError(str(exc), 2)
    lines = [f"nodes {cert.node_count()}",
             f"qhs {len(cert.qhs_nodes())}",
             f"qht {len(cert.qht_nodes())}"]
    for name, value in sorted(cert.census_leaves()):
        lines.append(f"leaf {name} {value}")
    doubles = [y.name for y in cert.qht_nodes() if y.double_interval]
    for name in doubles:
        lines.append(f"double-interval {name}")
    _emit(cfg, "parse-log.txt", lines,
          payload={"nodes": cert.node_count(),
                   "qhs": len(cert.qhs_nodes()),
                   "qht": len(cert.qht_nodes()),
                   "leaves": sorted(cert.census_leaves()),
                   "double_interval": doubles})
    return 0


def make_parser():
    ap = argparse.ArgumentParser(
        prog="rightangle",
        description="corner manifolds, colourings, homology and "
                    "L-space certificates")
    ap.add_argument("--budget-ms", type=int, default=10000)
    ap.add_argument("--snf-cap", type=int, default=2000)
    ap.add_argument("--threads", type=int, default=1,
                    help="reserved; the current implementation is "
                         "single-process")
    ap.add_argument("--out", default=None, help="report directory")
    ap.add_argument("--json", action="store_true", dest="emit_json")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="validate and describe a catalogued "
                                       "polytope")
    p.add_argument("name", choices=sorted(CATALOG_FVECTORS))
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("build", help="build a corner complex from a "
                                     "tessellation file")
    p.add_argument("tessellation")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("thicken", help="promote a closed complex one "
                                       "dimension up")
    p.add_argument("tessellation")
    p.set_defaults(func=cmd_thicken)

    p = sub.add_parser("colour", help="search for a proper facet colouring")
    p.add_argument("tessellation")
    p.add_argument("--colours", "-k", type=int, required=True)
    p.add_argument("--mirror-facet", type=int, default=None)
    p.add_argument("--symmetric", action="store_true")
    p.add_argument("--colour-file", default=None)
    p.set_defaults(func=cmd_colour)

    p = sub.add_parser("orbit", help="build the coloured quotient complex")
    p.add_argument("tessellation")
    p.add_argument("--colours", required=True,
                   help="colour file (facet colour per line)")
    p.add_argument("--mirror-facet", type=int, default=None)
    p.add_argument("--dump-file", default=None)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("homology", help="Betti numbers of a dumped complex")
    p.add_argument("dump")
    p.add_argument("--field", choices=("gf2", "rational", "both"),
                   default="both")
    p.add_argument("--fast", action="store_true",
                   help="duality fast path for closed orientable "
                        "4-manifolds")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("certify", help="verify an L-space certificate")
    p.add_argument("certificate")
    p.add_argument("--census", required=True)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("parse-log", help="import a search log "
                                         "(structural certificate)")
    p.add_argument("log")
    p.set_defaults(func=cmd_parse_log)
    return ap


def main(argv=None):
    ap = make_parser()
    args = ap.parse_args(argv)
    cfg = PipelineConfig(budget_ms=args.budget_ms, snf_cap=args.snf_cap,
                         threads=args.threads, out_dir=args.out,
                         emit_json=args.emit_json)
    try:
        cfg.validate()
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    try:
        return args.func(args, cfg)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except (cr.CornerError, co.ColouringError, ob.OrbitError,
            ho.HomologyError, LatticeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
