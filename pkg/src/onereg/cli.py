"""Command-line front end.

Exit codes: 0 verified, 1 claim mismatch, 2 usage or input error,
3 validation outcome (a documented ambiguity in the printed data).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

import numpy as np

from . import __version__
from .errors import CapacityError, DomainError, Graph6ParseError, IntegrityError, ValidationError
from .families import ValidationReport, by_name, c_pm1, legal_t, praeger_wang, theorem_family
from .graphs import ConnectionSet, Graph, cayley, from_graph6, is_connected, to_graph6
from .groups import GroupSpec, make_group
from .structure import is_normal_cayley, quotient_by_orbits, regular_rep
from .symmetry import aut_group, cycle_string, isomorphic
from .verify import census, report_header, verify_family, verify_lemma

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_VALIDATION = 0, 1, 2, 3

FAMILY_NAMES = ("cpm1", "pw", "thm1", "thm2", "thm")


class UsageError(Exception):
    pass


def _emit(obj, out=None):
    text = json.dumps(obj, default=_jsonable) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _jsonable(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, bytes):
        return o.hex()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def _header(args, **params) -> dict:
    h = report_header(timestamps=not args.no_timestamp)
    h["seed"] = args.seed
    h["params"] = params
    return h


def _read_graphs(path) -> list[Graph]:
    if path is None:
        raise UsageError("--in FILE is required")
    try:
        with open(path, "r", encoding="ascii", errors="replace") as fh:
            lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    if not lines:
        raise Graph6ParseError("no graph6 line found", 0)
    return [from_graph6(ln) for ln in lines]


def _family_graph(args):
    name = args.name
    if name is None:
        raise UsageError("--name is required")
    if name == "thm":
        name = f"thm{args.variant or 1}"
    if name not in FAMILY_NAMES and not name.startswith("lem"):
        raise UsageError(f"unknown family {name!r}")
    if name.startswith("lem"):
        return name, {"name": name}, by_name(name)
    if args.p is None:
        raise UsageError("--p is required")
    params = {"name": name, "p": args.p}
    if name == "cpm1":
        return name, params, c_pm1(args.p)
    if name == "pw":
        t = args.t if args.t is not None else legal_t(args.p)[0]
        params["t"] = t
        return name, params, praeger_wang(args.p, t)
    return name, params, theorem_family(args.p, int(name[-1]))


# -- commands ---------------------------------------------------------------
def cmd_family(args) -> int:
    name, params, X = _family_graph(args)
    if isinstance(X, ValidationReport):
        _emit({**_header(args, **params), "validation": X.to_json()})
        return EXIT_VALIDATION
    g6 = to_graph6(X)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(g6 + "\n")
        if X.labels:
            with open(args.out + ".labels.json", "w") as fh:
                json.dump({str(k): v for k, v in sorted(X.labels.items())}, fh)
    summary = {
        **_header(args, **params),
        "order": X.n,
        "valency": int(X.degrees[0]) if X.is_regular() and X.n else None,
        "connected": is_connected(X),
    }
    if not args.out:
        summary["graph6"] = g6
    _emit(summary)
    return EXIT_OK


def cmd_profile(args) -> int:
    for X in _read_graphs(args.infile):
        aut = aut_group(X, seed=args.seed)
        rec = {"order": X.n, "aut_order": aut.order, **{k: v for k, v in aut.to_json().items() if k != "order"}}
        rec["connected"] = aut.connected
        if not aut.connected:
            print("warning: graph is disconnected, so it is not one-regular", file=sys.stderr)
        _emit(rec)
    return EXIT_OK


def cmd_aut(args) -> int:
    for X in _read_graphs(args.infile):
        aut = aut_group(X, seed=args.seed)
        _emit({
            **aut.to_json(),
            "generators": [cycle_string(g) for g in aut.generators],
            "orbits": aut.perm_group.orbits(),
            "base": aut.base,
        })
    return EXIT_OK


def cmd_iso(args) -> int:
    graphs = _read_graphs(args.infile) + (_read_graphs(args.other) if args.other else [])
    if len(graphs) != 2:
        raise UsageError("iso needs exactly two graphs (two lines in --in, or --in and --other)")
    w = isomorphic(*graphs)
    _emit({"isomorphic": w is not None, "witness": None if w is None else w.tolist()})
    return EXIT_OK


def _cayley_args(args):
    """A Cayley graph from --name (cpm1/thm1 over Z_p x Z_5p) or from
    --group KIND --p P [--i I] --set WORDS."""
    if args.name in ("cpm1", "thm1"):
        from .families import CPM1_SET, THM1_SET

        spec = GroupSpec.direct(args.p)
        words = CPM1_SET if args.name == "cpm1" else THM1_SET
    else:
        if not args.group or args.set is None:
            raise UsageError("give --name cpm1|thm1 or --group and --set")
        spec = _group_spec(args)
        words = [w.strip() for w in args.set.split(",")]
    G = make_group(spec)
    S = ConnectionSet(G, frozenset(G.parse(w) for w in words))
    return G, S, cayley(G, S), {"group": spec.to_dict(), "set": list(words)}


def _group_spec(args) -> GroupSpec:
    kind = args.group
    if args.p is None:
        raise UsageError("--p is required")
    if kind == "cyclic":
        return GroupSpec.cyclic(args.p)
    if kind == "direct":
        return GroupSpec.direct(args.p)
    if kind in ("meta1", "meta2"):
        if args.i is None:
            raise UsageError("--i is required for metacyclic groups")
        return getattr(GroupSpec, kind)(args.p, args.i)
    raise UsageError(f"unknown group kind {kind!r}")


def cmd_normality(args) -> int:
    G, S, X, params = _cayley_args(args)
    rep = is_normal_cayley(X, G, S, aut_group(X, seed=args.seed))
    _emit({**_header(args, **params), **rep.to_json()})
    return EXIT_OK


def cmd_quotient(args) -> int:
    G, S, X, params = _cayley_args(args)
    sub = [w.strip() for w in (args.subgroup or "x").split(",")]
    params["subgroup"] = sub
    q = quotient_by_orbits(X, regular_rep(G, [G.parse(w) for w in sub]))
    out = q.to_json()
    if not args.full:
        out["quotient"] = {"n": q.quotient.n, "edges": q.quotient.edge_count}
    _emit({**_header(args, **params), **out})
    return EXIT_OK


def cmd_verify(args) -> int:
    stamps = not args.no_timestamp
    if args.pipeline in ("lemma-a", "lemma-b"):
        if args.p is None:
            raise UsageError("--p is required")
        which = args.pipeline[-1].upper()
        verdicts = verify_lemma(which, args.p, args.i)
        for v in verdicts:
            _emit({**_header(args, which=which, p=args.p), **v.to_json(stamps)})
        return EXIT_OK if all(v.confirmed for v in verdicts) else EXIT_MISMATCH
    if args.pipeline == "family":
        if args.p is None:
            raise UsageError("--p is required")
        rep = verify_family(args.p)
        out = {**_header(args, p=args.p), **rep.to_json()}
        if not rep.passed:
            out["mismatches"] = [c.to_json() for c in rep.mismatches()]
        _emit(out)
        return EXIT_OK if rep.passed else EXIT_MISMATCH
    if args.pipeline == "census":
        if args.p is None:
            raise UsageError("--p is required")
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        t0 = time.perf_counter()
        res = census(args.p, args.scope, threads=args.threads, checkpoint=args.checkpoint, seed=args.seed)
        text = _census_text(res, args.format)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        summary = {
            **_header(args, p=args.p, scope=args.scope),
            "records": len(res.records),
            "one_regular_hits": len(res.hits),
            "unmatched": res.unmatched,
            "methods_agree": all(r.methods_agree for r in res.records),
            "groups": [s.__dict__ for s in res.stats],
        }
        if stamps:
            summary["elapsed"] = time.perf_counter() - t0
        print(json.dumps(summary), file=sys.stderr)
        return EXIT_OK if summary["methods_agree"] else EXIT_MISMATCH
    raise UsageError(f"unknown pipeline {args.pipeline!r}")


def _census_text(res, fmt) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["group", "connection_set", "graph6", "aut_order", "one_regular", "normal", "family_match"])
        for r in res.records:
            name = GroupSpec(**_spec_fields(r.group)).name
            w.writerow([name, " ".join(r.connection_set), r.graph6, r.aut_order,
                        int(r.one_regular), int(r.normal), r.family_match or ""])
        return buf.getvalue()
    if fmt == "g6":
        return "".join(r.graph6 + "\n" for r in res.records)
    return "".join(json.dumps(r.to_json()) + "\n" for r in res.records)


def _spec_fields(d):
    kind, p, i, order = d["kind"], d.get("p"), d.get("i"), d["order"]
    return {"kind": kind, "n": order if kind == "cyclic" else None, "p": p, "i": i}


# -- parser -----------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sifting (default 0)")
    common.add_argument("--no-timestamp", action="store_true", help="omit timestamp and elapsed fields")
    common.add_argument("--format", choices=("json", "csv", "g6"), default="json")
    common.add_argument("--out", help="output path")
    common.add_argument("-v", "--verbose", action="count", default=0)

    ap = argparse.ArgumentParser(prog="onereg", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"onereg {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("family", parents=[common], help="build a named family and write graph6")
    p.add_argument("--name", help="cpm1 | pw | thm1 | thm2 | thm (with --variant) | lemA/p/k | lemB/p/k")
    p.add_argument("--p", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--variant", type=int, choices=(1, 2))
    p.set_defaults(func=cmd_family)

    for name, func, hlp in (("profile", cmd_profile, "symmetry profile of graph6 input"),
                            ("aut", cmd_aut, "automorphism group generators and orbits")):
        p = sub.add_parser(name, parents=[common], help=hlp)
        p.add_argument("--in", dest="infile")
        p.set_defaults(func=func)

    p = sub.add_parser("iso", parents=[common], help="isomorphism test with witness")
    p.add_argument("--in", dest="infile")
    p.add_argument("--other")
    p.set_defaults(func=cmd_iso)

    for name, func in (("normality", cmd_normality), ("quotient", cmd_quotient)):
        p = sub.add_parser(name, parents=[common], help=f"{name} analysis of a Cayley graph")
        p.add_argument("--name", choices=("cpm1", "thm1"))
        p.add_argument("--group", choices=("cyclic", "direct", "meta1", "meta2"))
        p.add_argument("--p", type=int, help="prime (or order, for cyclic groups)")
        p.add_argument("--i", type=int)
        p.add_argument("--set", help="comma-separated words, e.g. 'y,y^-1,xy,x^-1y^-1'")
        if name == "quotient":
            p.add_argument("--subgroup", help="comma-separated generators of N (default x)")
            p.add_argument("--full", action="store_true", help="include the quotient edge list")
        p.set_defaults(func=func)

    p = sub.add_parser("verify", parents=[common], help="run a verification pipeline")
    p.add_argument("pipeline", choices=("lemma-a", "lemma-b", "family", "census"))
    p.add_argument("--p", type=int)
    p.add_argument("--i", type=int)
    p.add_argument("--scope", choices=("abelian", "all"), default="abelian")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--checkpoint")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DomainError, ValidationError, Graph6ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IntegrityError as exc:
        print(f"integrity failure: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
