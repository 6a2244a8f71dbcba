"""Command-line entry point: ``mwiso compute|family|verify|phi|blocks|corpus``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from mwiso import cayley
from mwiso.corpus import SYMMETRISED, Instance, builtin_corpus, by_name
from mwiso.graph import GraphError, read_graph, write_graph
from mwiso.imprimitivity import ImprimitivityError, build_certificate
from mwiso.isoperimetry import DEFAULT_BUDGET, IsoError, Quantity, minimize
from mwiso.partition import Partition, parse_partition
from mwiso.perm import (
    GroupError,
    all_block_systems,
    automorphism_group,
    block_systems_of_size,
    format_perms,
    generate_group,
    read_perms,
)
from mwiso.phi import GapInstance, NotAutomorphisms, build_gap_instance, build_phi
from mwiso.report import Status, encode
from mwiso.spectral import SpectralError, eigenvalues, fmt_float, lambda_n
from mwiso.suites import SUITES, run_suites

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

FAMILIES = ("fattened-cycle", "k2-product", "dihedral-product", "cycle", "complete", "cayley")


class UsageError(Exception):
    pass


class UnknownFamily(UsageError):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _parse_params(items: list[str]) -> dict[str, str]:
    out = {}
    for item in items:
        for tok in item.replace(",", " ").split():
            if "=" not in tok:
                raise UsageError(f"parameter {tok!r} is not key=value")
            k, v = tok.split("=", 1)
            out[k] = v
    return out


def _int(params: dict, key: str) -> int:
    try:
        return int(params[key])
    except KeyError:
        raise UsageError(f"missing parameter {key}") from None
    except ValueError:
        raise UsageError(f"parameter {key} must be an integer") from None


def build_family(name: str, params: dict[str, str]):
    """(graph, group, canonical params) for a named family."""
    if name == "cycle":
        p = {"m": _int(params, "m")}
        g, gr = cayley.family_cycle(p["m"])
    elif name == "complete":
        p = {"N": _int(params, "N")}
        g, gr = cayley.family_complete(p["N"])
    elif name == "fattened-cycle":
        p = {"m": _int(params, "m"), "k": _int(params, "k")}
        g, gr = cayley.family_fattened_cycle(p["m"], p["k"])
        p["connection"] = SYMMETRISED
    elif name == "k2-product":
        p = {"N": _int(params, "N")}
        g, gr = cayley.family_k2_product(p["N"])
    elif name == "dihedral-product":
        p = {"N": _int(params, "N"), "n": _int(params, "n")}
        g, gr = cayley.family_dihedral_product(p["N"], p["n"])
    elif name == "cayley":
        kind = params.get("group", "cyclic")
        k = _int(params, "k")
        if kind == "cyclic":
            tbl = cayley.cyclic_group(k)
        elif kind == "dihedral":
            tbl = cayley.dihedral_group(k)
        elif kind == "symmetric":
            tbl, _ = cayley.symmetric_group_table(k)
        else:
            raise UsageError(f"unknown group kind {kind!r}")
        try:
            s = [int(x) for x in params.get("s", "").split(":") if x]
        except ValueError:
            raise UsageError("connection set s must be colon-separated integers") from None
        if any(not 0 <= x < tbl.order for x in s):
            raise cayley.ParamOutOfRange("connection set element out of range")
        p = {"group": kind, "k": k, "s": s}
        g, gr = cayley.cayley_graph(tbl, s)
    else:
        raise UnknownFamily(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
    return g, gr, p


def _load_group(g, perms_path: str | None):
    if perms_path is None:
        return automorphism_group(g)
    perms = read_perms(perms_path)
    return generate_group(perms, domain_size=g.num_vertices, source=f"file:{Path(perms_path).name}")


def _instances(args) -> list[Instance]:
    out: list[Instance] = []
    if getattr(args, "graph", None):
        g = read_graph(args.graph)
        gr = _load_group(g, args.perms)
        out.append(Instance(Path(args.graph).stem, g, gr, "file", {"path": Path(args.graph).name}))
    if getattr(args, "family", None):
        g, gr, p = build_family(args.family, _parse_params(args.params or []))
        out.append(Instance(args.family, g, gr, args.family, p))
    for name in getattr(args, "instance", None) or []:
        try:
            out.append(by_name(name))
        except KeyError:
            raise UsageError(f"no corpus instance named {name!r}") from None
    return out


# -- subcommands -----------------------------------------------------------------------

def cmd_compute(args) -> int:
    g = read_graph(args.graph)
    if args.quantity in ("lambda", "lambda_norm"):
        spec = eigenvalues(g)
        x = lambda_n(spec, args.n)
        if args.quantity == "lambda_norm":
            if not g.regular_degree:
                raise UsageError("normalized eigenvalues need a regular graph of positive degree")
            x /= g.regular_degree
        if args.json:
            sys.stdout.write(_dump({"schema": SCHEMA, "quantity": args.quantity, "n": args.n,
                                    "value": fmt_float(x), "residual": fmt_float(spec.residual)}))
        else:
            print(f"{x:.12f}")
        return EXIT_OK
    q = Quantity(args.quantity)
    res = minimize(g, args.n, q, args.budget)
    if args.json:
        sys.stdout.write(_dump(dict(res.to_json(), schema=SCHEMA)))
    else:
        v = res.value
        print(f"{v.numerator}/{v.denominator}" if v.denominator != 1 else f"{v.numerator}")
        if args.realizer:
            print("part " + " ".join(str(x) for x in res.realizer.part_of))
    return EXIT_OK


def cmd_family(args) -> int:
    g, gr, p = build_family(args.name, _parse_params(args.params or []))
    prefix = Path(args.out)
    write_graph(g, prefix.with_suffix(".graph"))
    prefix.with_suffix(".perms").write_text(format_perms(gr.generators))
    meta = {"schema": SCHEMA, "family": args.name, "params": p, "num_vertices": g.num_vertices,
            "num_edges": g.num_edges, "degree": g.regular_degree, "group_order": gr.order}
    prefix.with_suffix(".json").write_text(_dump(meta))
    print(f"wrote {prefix}.graph, {prefix}.perms, {prefix}.json")
    return EXIT_OK


def _n_range(text: str | None) -> tuple[int, int]:
    if not text:
        return 2, 10**9
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return int(lo), int(hi)
        return int(text), int(text)
    except ValueError:
        raise UsageError(f"bad --n-range {text!r}; use A..B or A") from None


def cmd_verify(args) -> int:
    instances = _instances(args) or list(builtin_corpus())
    lo, hi = _n_range(args.n_range)
    pairs = run_suites([args.suite], instances, lo, hi, args.budget)
    counts = {s.value: 0 for s in Status}
    reports = []
    for suite, rep in pairs:
        counts[rep.status.value] += 1
        reports.append(dict(rep.to_json(), suite=suite))
    doc = {"schema": SCHEMA, "suite": args.suite, "summary": counts, "reports": reports}
    text = _dump(doc)
    if args.json:
        Path(args.json).write_text(text)
    if not args.json or args.print:
        sys.stdout.write(text)
    else:
        print(" ".join(f"{k}={v}" for k, v in counts.items()))
    return EXIT_FAIL if counts["FAIL"] else EXIT_OK


def _partition_arg(path: str | None, n: int) -> Partition | None:
    if path is None:
        return None
    p = parse_partition(Path(path).read_text())
    if p.n != n:
        raise UsageError(f"partition has {p.n} parts, expected {n}")
    return p


def cmd_phi(args) -> int:
    (inst,) = _instances(args)[:1] or [None]
    if inst is None:
        raise UsageError("give --graph, --family or --instance")
    gi = build_gap_instance(inst.graph, inst.group, args.n, args.mode,
                            _partition_arg(args.partition, args.n), args.budget)
    if not isinstance(gi, GapInstance):
        doc = {"schema": SCHEMA, "gap": False, "n": args.n, "mode": args.mode,
               "c_n": encode(gi.h_n), "c_n1": encode(gi.h_n1)}
    else:
        phi = build_phi(gi)
        doc = {"schema": SCHEMA, "gap": True, "n": args.n, "mode": args.mode,
               "c_n": encode(gi.h_n), "c_n1": encode(gi.h_n1), "phi": phi.to_json()}
    sys.stdout.write(_dump(doc))
    return EXIT_OK


def cmd_blocks(args) -> int:
    (inst,) = _instances(args)[:1] or [None]
    if inst is None:
        raise UsageError("give --graph, --family or --instance")
    doc: dict = {"schema": SCHEMA, "group_order": inst.group.order, "group_source": inst.group.source}
    systems = block_systems_of_size(inst.group, args.count) if args.count else all_block_systems(inst.group)
    doc["block_systems"] = [[list(b) for b in s.blocks] for s in systems]
    if args.certificate is not None:
        gi = build_gap_instance(inst.graph, inst.group, args.certificate, args.mode,
                                _partition_arg(args.partition, args.certificate), args.budget)
        if isinstance(gi, GapInstance):
            doc["certificate"] = build_certificate(gi).to_json()
        else:
            doc["certificate"] = None
            doc["gap"] = {"c_n": encode(gi.h_n), "c_n1": encode(gi.h_n1)}
    sys.stdout.write(_dump(doc))
    return EXIT_OK


def cmd_corpus(args) -> int:
    items = builtin_corpus()
    if args.export:
        out = Path(args.export)
        out.mkdir(parents=True, exist_ok=True)
        for inst in items:
            write_graph(inst.graph, out / f"{inst.name}.graph")
            (out / f"{inst.name}.perms").write_text(format_perms(inst.group.generators))
    rows = [dict(inst.describe(), num_vertices=inst.graph.num_vertices,
                 degree=inst.graph.regular_degree, connected=inst.connected) for inst in items]
    if args.json:
        sys.stdout.write(_dump({"schema": SCHEMA, "instances": rows}))
    else:
        for r in rows:
            print(f"{r['name']:<24} |V|={r['num_vertices']:<3} d={r['degree']} "
                  f"|G|={r['group_order']:<5} connected={r['connected']}")
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------

def _add_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", help="graph file")
    p.add_argument("--perms", help="generators of the acting group (default: automorphism group)")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--params", action="append", help="family parameters, e.g. N=6")
    p.add_argument("--instance", action="append", help="built-in corpus instance name")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mwiso", allow_abbrev=False,
                                 description="Exact multi-way isoperimetric constants and checks.")
    sp = ap.add_subparsers(dest="command", required=True)

    c = sp.add_parser("compute", allow_abbrev=False, help="one constant of one graph")
    c.add_argument("--graph", required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--quantity", default="h",
                   choices=[q.value for q in Quantity] + ["lambda", "lambda_norm"])
    c.add_argument("--realizer", action="store_true", help="also print the optimal partition")
    c.add_argument("--json", action="store_true")
    c.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    c.set_defaults(func=cmd_compute)

    f = sp.add_parser("family", allow_abbrev=False, help="write a named graph family to files")
    f.add_argument("--name", required=True)
    f.add_argument("--params", action="append")
    f.add_argument("--out", required=True, help="output prefix")
    f.set_defaults(func=cmd_family)

    v = sp.add_parser("verify", allow_abbrev=False, help="run a verification suite")
    v.add_argument("--suite", default="all", choices=list(SUITES) + ["all"])
    _add_source(v)
    v.add_argument("--n-range", help="A..B (default: 2..|V|-1)")
    v.add_argument("--json", help="write the report here")
    v.add_argument("--print", action="store_true", help="print the report even with --json")
    v.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    v.set_defaults(func=cmd_verify)

    p = sp.add_parser("phi", allow_abbrev=False, help="build the part-permutation homomorphism")
    _add_source(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", default="h", choices=["h", "iota"])
    p.add_argument("--partition", help="realizer file (default: the computed one)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_phi)

    b = sp.add_parser("blocks", allow_abbrev=False, help="block systems and certificates")
    _add_source(b)
    b.add_argument("--count", type=int, help="only systems with this many blocks")
    b.add_argument("--certificate", type=int, metavar="N", help="build the certificate at this n")
    b.add_argument("--mode", default="h", choices=["h", "iota"])
    b.add_argument("--partition")
    b.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    b.set_defaults(func=cmd_blocks)

    k = sp.add_parser("corpus", allow_abbrev=False, help="list or export the built-in corpus")
    k.add_argument("--json", action="store_true")
    k.add_argument("--export", help="write .graph/.perms files into this directory")
    k.set_defaults(func=cmd_corpus)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, GraphError, IsoError, GroupError, SpectralError, NotAutomorphisms,
            cayley.CayleyError, ImprimitivityError, ValueError, OSError) as e:
        print(f"mwiso: error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
