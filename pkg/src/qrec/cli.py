"""Command-line interface: ``qrec indec|subcats|transfer|verify|reproduce``.

Exit codes: 0 success, 1 failed check or mismatch, 2 unreadable input,
3 a dimension/enumeration bound was exceeded, 4 an inconclusive search,
5 a violated hypothesis.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import sys
from importlib import resources
from pathlib import Path
from typing import Sequence

from . import __version__
from .axioms import default_seed, lemma_checks, verify_axioms
from .config import LIMITS
from .errors import (BoundExceeded, HypothesisFailed, Inconclusive,
                     UniverseIncomplete)
from .io import (ParseError, QuiverFile, parse_quiver_file, parse_subcat_file,
                 subcat_to_json)
from .recollement import SplitError, build
from .subcat import KINDS, Subcat, enumerate_subcats, to_dot
from .tables import correspondence_tables, render_text
from .transfer import DIRECTIONS, Setting, glue_bricks, transfer, verify_bijection, verify_sub_recollement
from .universe import Universe, all_indecomposables

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_BOUND, EXIT_INCONCLUSIVE, EXIT_HYPOTHESIS = range(6)

BUNDLED_QUIVER = "a4_split.json"
BUNDLED_GOLDEN = "a4_split_tables.txt"


def bundled(name: str) -> Path:
    return Path(str(resources.files("qrec") / "data" / name))


def _write(text: str, out) -> None:
    out.write(text if text.endswith("\n") else text + "\n")


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2)


def _dims(r) -> str:
    return "(" + ",".join(map(str, r.dim_vector)) + ")"


def _setting(qf: QuiverFile) -> Setting:
    if qf.quotient_part is None:
        raise ParseError("this command needs a split (quotient_part) in the quiver file")
    return Setting.of(qf.quiver, qf.quotient_part, qf.p, qf.dim_bound, qf.mult_cap)


def _universe(qf: QuiverFile, side: str) -> Universe:
    if side == "ambient":
        return all_indecomposables(qf.quiver, qf.p, qf.dim_bound)
    if qf.quotient_part is None:
        raise ParseError(f"--side {side} needs a split in the quiver file")
    r = build(qf.quiver, qf.quotient_part, qf.p)
    return all_indecomposables(r.qa if side == "i" else r.qb, qf.p, qf.dim_bound)


# --- commands -------------------------------------------------------------------

def cmd_indec(args, qf: QuiverFile, out) -> int:
    u = _universe(qf, args.side)
    rows = [(u.names[i], _dims(r)) for i, r in enumerate(u)]
    if args.format == "json":
        _write(_json({"vertices": list(u.quiver.vertices), "complete": u.complete,
                      "indecomposables": u.to_json()}), out)
    elif args.format == "csv":
        _write(_csv(["name", "dim"], rows), out)
    else:
        _write("\n".join(f"{n}\t{d}" for n, d in rows), out)
    if not u.complete:
        print(f"warning: dimension bound {qf.dim_bound} reached; listing may be partial", file=sys.stderr)
        return EXIT_BOUND
    return EXIT_OK


def cmd_subcats(args, qf: QuiverFile, out) -> int:
    u = _universe(qf, args.side)
    cap = args.mult_cap or qf.mult_cap
    pending: list[Subcat] = []
    cats = enumerate_subcats(u, args.kind, cap, args.include_empty, inconclusive=pending)
    if args.format == "json":
        _write(_json({"kind": args.kind, "universe": u.names,
                      "subcats": [subcat_to_json(c) for c in cats],
                      "inconclusive": [subcat_to_json(c) for c in pending]}), out)
    elif args.format == "csv":
        rows = [(k, str(c), len(c), "yes") for k, c in enumerate(cats)]
        rows += [("", str(c), len(c), "inconclusive") for c in pending]
        _write(_csv(["index", "subcat", "size", "verdict"], rows), out)
    else:
        lines = [str(c) for c in cats] + [f"{c}\tinconclusive" for c in pending]
        _write("\n".join(lines), out)
    if args.dot:
        Path(args.dot).write_text(to_dot(cats))
    return EXIT_INCONCLUSIVE if pending else EXIT_OK


def _source_universe(st: Setting, direction: str) -> Universe:
    if direction in ("from_i_side", "preimage_i_upper", "preimage_i_shriek"):
        return st.ua
    if direction in ("from_j_side_star", "from_j_side_shriek", "preimage_j"):
        return st.ub
    return st.ul


def cmd_transfer(args, qf: QuiverFile, out) -> int:
    st = _setting(qf)
    if args.mult_cap:
        st.mult_cap = args.mult_cap
    c = parse_subcat_file(args.subcat, _source_universe(st, args.map))
    res, cert = transfer(st, args.kind, args.map, c)
    if args.format == "json":
        _write(_json({"map": args.map, "kind": args.kind, "input": subcat_to_json(c),
                      "output": subcat_to_json(res), "certificate": cert.to_json()}), out)
    elif args.format == "csv":
        _write(_csv(["input", "output", "certificate"], [(str(c), str(res), "pass" if cert.ok else "fail")]), out)
    else:
        verdict = "pass" if cert.ok else f"FAIL ({cert.violation})"
        _write(f"{c} -> {res}\tcertificate: {verdict}", out)
    return EXIT_OK if cert.ok else EXIT_FAIL


def _suite_axioms(args, qf: QuiverFile) -> tuple[bool, dict, list[str]]:
    if qf.quotient_part is None:
        raise ParseError("--suite axioms needs a split in the quiver file")
    r = build(qf.quiver, qf.quotient_part, qf.p)
    rep = verify_axioms(r, args.samples, args.seed, args.max_dim)
    return rep.ok, rep.to_json(), rep.summary().splitlines()


def _suite_bijection(args, qf: QuiverFile) -> tuple[bool, dict, list[str]]:
    st = _setting(qf)
    rep = verify_bijection(st, args.mult_cap or None, use_filter=not args.no_filter)
    lines = [f"{rep.ambient[i]} <-> {rep.quotient[j] if j is not None else '?'}" for i, j in enumerate(rep.forward)]
    lines.append(f"ambient: {len(rep.ambient)}, quotient: {len(rep.quotient)}")
    lines += [f"problem: {p}" for p in rep.problems]
    return rep.ok, rep.to_json(), lines


def _suite_subrecollement(args, qf: QuiverFile) -> tuple[bool, dict, list[str]]:
    st = _setting(qf)
    if args.subcat:
        cats = [parse_subcat_file(args.subcat, st.ul)]
    else:
        cats = [Subcat(st.ul, range(len(st.ul)))] + verify_bijection(st).ambient
    reports, lines = [], []
    for c in cats:
        rep = verify_sub_recollement(st, c)
        reports.append(rep)
        lines.append(f"{'PASS' if rep['ok'] else 'FAIL'} {rep['subcat']} (quotient part {rep['quotient_part']})")
    return all(r["ok"] for r in reports), {"reports": reports}, lines


def _suite_bricks(args, qf: QuiverFile) -> tuple[bool, dict, list[str]]:
    st = _setting(qf)
    ex = st.r.exactness
    vias = ["intermediate"] + (["shriek"] if ex["i_upper"] else []) + (["star"] if ex["i_shriek"] else [])
    results, lines, ok = [], [], True
    for kind in ("epibrick", "monobrick"):
        left = enumerate_subcats(st.ua, kind, include_empty=True)
        right = enumerate_subcats(st.ub, kind, include_empty=True)
        counts = {v: 0 for v in vias}
        for s_i in left:
            for s_j in right:
                for via in vias:
                    glued, cert, _ = glue_bricks(st, s_i, s_j, kind, via)
                    counts[via] += 1
                    if not cert.ok:
                        ok = False
                        lines.append(f"FAIL {kind} via {via}: {s_i} + {s_j} -> {glued}")
                    results.append({"kind": kind, "via": via, "i_side": str(s_i), "j_side": str(s_j),
                                    "glued": str(glued), "ok": cert.ok})
        for via, n in counts.items():
            lines.append(f"{kind} via {via}: {n} glued pairs checked")
    lem = lemma_checks(st.r, list(st.ub))
    lem_ok = all(x["i_upper_zero"] and x["i_shriek_zero"] and x["restricts_back"] for x in lem)
    ok = ok and lem_ok
    lines.append(f"{'PASS' if lem_ok else 'FAIL'} i^* j_!* = 0 and i^! j_!* = 0 on {len(lem)} objects of mod B")
    return ok, {"vias": vias, "glued": results, "intermediate_extension_ok": lem_ok}, lines


SUITES = {"axioms": _suite_axioms, "bijection": _suite_bijection,
          "subrecollement": _suite_subrecollement, "bricks": _suite_bricks}


def cmd_verify(args, qf: QuiverFile, out) -> int:
    ok, report, lines = SUITES[args.suite](args, qf)
    report = {"suite": args.suite, "ok": ok, **report}
    if args.report:
        Path(args.report).write_text(_json(report) + "\n")
    if args.format == "json":
        _write(_json(report), out)
    else:
        lines.append(f"{args.suite}: {'PASS' if ok else 'FAIL'}")
        _write("\n".join(lines), out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_reproduce(args, qf: QuiverFile, out) -> int:
    st = _setting(qf)
    tables = correspondence_tables(st, args.kind)
    text = render_text(tables)
    if args.format == "json":
        _write(_json([{"title": t.title, "map": t.direction, "rows": [list(r) for r in t.rows],
                       "certified": t.certified} for t in tables]), out)
    elif args.format == "csv":
        _write(_csv(["table", "source", "target"], [(t.title, a, b) for t in tables for a, b in t.rows]), out)
    else:
        _write(text, out)
    status = EXIT_OK
    if not all(t.ok for t in tables):
        print("error: a transferred subcategory failed its certificate", file=sys.stderr)
        status = EXIT_FAIL
    if args.check:
        golden = bundled(BUNDLED_GOLDEN) if args.check == "bundled" else Path(args.check)
        if golden.read_text() != text:
            print(f"error: output differs from {golden}", file=sys.stderr)
            status = EXIT_FAIL
    return status


# --- argument parsing ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--mult-cap", type=int, default=0, help="multiplicity cap for closure checks (default: file)")
    common.add_argument("--dim-bound", type=int, default=0, help="override the file's dim_bound")
    common.add_argument("--enum-threshold", type=int, default=LIMITS.enum_threshold,
                        help="largest Hom/Ext space enumerated exhaustively")
    common.add_argument("--enum-cap", type=int, default=LIMITS.enumeration_cap,
                        help="largest universe whose subsets are enumerated")

    ap = argparse.ArgumentParser(prog="qrec", description="Subcategories and recollements of quiver representations.")
    ap.add_argument("--version", action="version", version=f"qrec {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("indec", parents=[common], help="list indecomposable representations")
    p.add_argument("quiver")
    p.add_argument("--side", choices=("ambient", "i", "j"), default="ambient")

    p = sub.add_parser("subcats", parents=[common], help="enumerate subcategories of a kind")
    p.add_argument("quiver")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--side", choices=("ambient", "i", "j"), default="ambient")
    p.add_argument("--include-empty", action="store_true")
    p.add_argument("--dot", metavar="PATH", help="also write the inclusion Hasse diagram in DOT")

    p = sub.add_parser("transfer", parents=[common], help="push or pull a subcategory across the split")
    p.add_argument("quiver")
    p.add_argument("subcat")
    p.add_argument("--map", choices=DIRECTIONS, required=True)
    p.add_argument("--kind", choices=("ice", "torsion"), default="ice")

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("quiver")
    p.add_argument("--suite", choices=tuple(SUITES), required=True)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=None, help="default: $QREC_SEED or a fixed seed")
    p.add_argument("--max-dim", type=int, default=2, help="largest vertex dimension of random samples")
    p.add_argument("--subcat", help="subcategory file for --suite subrecollement")
    p.add_argument("--no-filter", action="store_true", help="bijection suite without the j_! j^* condition")
    p.add_argument("--report", metavar="PATH", help="write the JSON report here as well")

    p = sub.add_parser("reproduce", parents=[common], help="regenerate the four correspondence tables")
    p.add_argument("quiver", nargs="?", default=None, help="default: the bundled A_4 split")
    p.add_argument("--example", choices=("tables",), default="tables")
    p.add_argument("--kind", choices=("ice", "torsion"), default="ice")
    p.add_argument("--check", nargs="?", const="bundled", metavar="GOLDEN",
                   help="compare text output against a golden file (default: the bundled one)")
    return ap


COMMANDS = {"indec": cmd_indec, "subcats": cmd_subcats, "transfer": cmd_transfer,
            "verify": cmd_verify, "reproduce": cmd_reproduce}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "seed", "absent") is None:
        args.seed = default_seed()
    try:
        path = args.quiver or bundled(BUNDLED_QUIVER)
        qf = parse_quiver_file(path)
        if args.dim_bound:
            qf.dim_bound = args.dim_bound
        old = (LIMITS.enum_threshold, LIMITS.enumeration_cap)
        LIMITS.enum_threshold, LIMITS.enumeration_cap = args.enum_threshold, args.enum_cap
        try:
            return COMMANDS[args.command](args, qf, out)
        finally:
            LIMITS.enum_threshold, LIMITS.enumeration_cap = old
    except (ParseError, SplitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except HypothesisFailed as exc:
        print(f"hypothesis failed: {exc}", file=sys.stderr)
        print(f"witness: {exc.witness}", file=out)
        return EXIT_HYPOTHESIS
    except (BoundExceeded, UniverseIncomplete) as exc:
        print(f"bound exceeded: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except Inconclusive as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
