"""Command line driver.

Subcommands: analyze | table | chen-ruan | search | verify. Input is a
positional polynomial string, --json-matrix FILE, or --preset NAME; output is
text, JSON (a full run report), or CSV via --format, optionally written to
--out. Exit codes: 0 success, 1 validation error, 2 search timeout.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .chen_ruan import chen_ruan_dim, enumerate_sectors, untwisted_invariants
from .errors import DegenerateLoopError, InvquotError, PolynomialSyntaxError, SearchTimeoutError
from .homs import BiDegree, all_residues, bidegree, representative_table, hom_table
from .polynomials import InvertiblePolynomial, atomic_decomposition, parse, parse_json_matrix
from .presets import get_preset
from .reports import make_report
from .search import candidate_window, max_exceptional, verify_collection
from .symmetry import (
    DiagonalElement,
    FiniteAbelianGroup,
    SymmetryQuotient,
    loop_generator,
    spans_group,
    symmetry_quotient,
)


class _UsageError(InvquotError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _add_common(sub: argparse.ArgumentParser):
    sub.add_argument("polynomial", nargs="?", help="polynomial string, e.g. 'x1^2*x2 + x2^2*x1'")
    sub.add_argument("--json-matrix", metavar="FILE", help='file with {"matrix": [[...], ...]}')
    sub.add_argument("--preset", metavar="NAME", help="named input polynomial")
    sub.add_argument("--format", "-f", choices=("text", "json", "csv"), default="text")
    sub.add_argument("--out", metavar="FILE", help="write output to a file instead of stdout")
    sub.add_argument("--seed", type=int, default=0,
                     help="seed recorded in the report (reserved for sampled diagnostics)")


def build_parser() -> _Parser:
    parser = _Parser(prog="invquot", description=__doc__)
    parser.add_argument("--version", action="version", version=f"invquot {__version__}")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("analyze", help="symmetry groups, quotient, characters")
    _add_common(p)

    p = subs.add_parser("table", help="bigraded section dimensions and representatives")
    _add_common(p)
    p.add_argument("--max-a", type=int, default=3)

    p = subs.add_parser("chen-ruan", help="orbifold cohomology dimension and sectors")
    _add_common(p)

    p = subs.add_parser("search", help="maximum exceptional collection of line bundles")
    _add_common(p)
    p.add_argument("--window-max-a", type=int, default=None,
                   help="cap the candidate window at this total degree")
    p.add_argument("--timeout-secs", type=float, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--deterministic", action=argparse.BooleanOptionalAction, default=True,
                   help="canonicalize the witness (lexicographically smallest optimum)")
    p.add_argument("--lower-bound", type=int, default=0,
                   help="advisory lower bound hint, recorded in the report")

    p = subs.add_parser("verify", help="check a collection supplied as JSON [a, b] pairs")
    _add_common(p)
    p.add_argument("--collection", metavar="FILE", required=True)

    return parser


def _resolve_input(args) -> tuple[InvertiblePolynomial, dict]:
    sources = [
        s for s in (
            ("argument", args.polynomial),
            ("json-matrix", args.json_matrix),
            ("preset", args.preset),
        )
        if s[1]
    ]
    if len(sources) != 1:
        raise _UsageError(
            "provide exactly one input: a polynomial string, --json-matrix, or --preset"
        )
    kind, value = sources[0]
    if kind == "preset":
        poly = parse(get_preset(value))
    elif kind == "json-matrix":
        try:
            with open(value) as fh:
                poly = parse_json_matrix(fh.read())
        except OSError as exc:
            raise PolynomialSyntaxError(f"cannot read {value}: {exc}") from exc
    else:
        poly = parse(value)
    info = {
        "source": kind if kind != "preset" else f"preset:{value}",
        "polynomial": poly.to_text(),
        "matrix": poly.matrix.to_lists(),
    }
    return poly, info


def _element_json(e) -> list:
    return [list(e.num), e.den]


def _deg_json(d: BiDegree) -> list:
    return [d.a, list(d.b)]


def _b_label(b: tuple[int, ...]) -> str:
    return ".".join(map(str, b)) if b else "0"


# -- analyze -----------------------------------------------------------------


def _loop_formula_check(poly: InvertiblePolynomial, group: FiniteAbelianGroup):
    """Cross-check the closed-form loop generator against the Smith-form group.

    Returns None unless the polynomial is a single loop in all variables.
    """
    try:
        blocks = atomic_decomposition(poly).blocks
    except InvquotError:
        return None
    if len(blocks) != 1 or blocks[0].kind != "loop" or len(blocks[0].variables) != poly.n:
        return None
    block = blocks[0]
    try:
        gen = loop_generator(block.exponents)
    except DegenerateLoopError:
        return None
    # scatter the standard-order phases back onto the loop's actual variables
    phases = [Fraction(0)] * poly.n
    for pos, var in enumerate(block.variables):
        phases[var - 1] = gen.phases[pos]
    return spans_group(group, [DiagonalElement.from_fractions(phases)])


def _run_analyze(poly: InvertiblePolynomial, args) -> dict:
    sq = symmetry_quotient(poly)
    try:
        blocks = [
            {"kind": b.kind, "variables": list(b.variables), "exponents": list(b.exponents)}
            for b in atomic_decomposition(poly).blocks
        ]
    except InvquotError:
        blocks = None
    results = {
        "n": poly.n,
        "determinant": poly.determinant(),
        "weights": list(poly.weights),
        "degree": poly.degree,
        "quasi_smooth_certified": poly.quasi_smooth_certified,
        "atomic_blocks": blocks,
        "symmetry_group": {
            "order": sq.group.order,
            "invariant_factors": list(sq.group.invariant_factors),
            "generators": [_element_json(g) for g in sq.group.generators],
        },
        "scalar_subgroup": {
            "order": sq.scalar_order,
            "generator": _element_json(sq.scalar_generator),
        },
        "quotient": {
            "order": sq.quotient_order,
            "invariant_factors": list(sq.quotient_orders),
            "generators": [_element_json(g) for g in sq.quotient_generators],
            "is_cyclic": sq.quotient_is_cyclic,
            "split": sq.characters is not None,
            "characters": (
                [list(c) for c in sq.characters] if sq.characters is not None else None
            ),
        },
        "splitting_coefficients": list(sq.splitting),
        "loop_formula_agrees": _loop_formula_check(poly, sq.group),
    }
    return results


def _text_analyze(results: dict) -> str:
    lines = [
        f"polynomial: {results['input_polynomial']}",
        f"variables: {results['n']}   determinant: {results['determinant']}",
        f"weights: {tuple(results['weights'])}   degree: {results['degree']}",
        f"quasi-smooth certified: {results['quasi_smooth_certified']}",
    ]
    if results["atomic_blocks"] is not None:
        names = {"fermat": "Fermat", "loop": "Loop", "chain": "Chain"}
        parts = [
            f"{names[b['kind']]}({', '.join(map(str, b['exponents']))})"
            for b in results["atomic_blocks"]
        ]
        lines.append("atomic decomposition: " + " + ".join(parts))
    else:
        lines.append("atomic decomposition: none found")
    g = results["symmetry_group"]
    lines.append(
        f"symmetry group: order {g['order']}, invariant factors {g['invariant_factors']}"
    )
    for nums, den in g["generators"]:
        lines.append(f"  generator: {tuple(nums)} / {den}")
    s = results["scalar_subgroup"]
    lines.append(f"scalar subgroup: order {s['order']}, generator {tuple(s['generator'][0])} / {s['generator'][1]}")
    qt = results["quotient"]
    lines.append(
        f"quotient: order {qt['order']}, invariant factors {qt['invariant_factors']}, "
        f"cyclic: {qt['is_cyclic']}, split: {qt['split']}"
    )
    for nums, den in qt["generators"]:
        lines.append(f"  generator: {tuple(nums)} / {den}")
    if qt["characters"]:
        for c in qt["characters"]:
            lines.append(f"  characters: {tuple(c)}")
    lines.append(f"splitting coefficients: {tuple(results['splitting_coefficients'])}")
    if results["loop_formula_agrees"] is not None:
        lines.append(f"loop formula agrees with Smith form: {results['loop_formula_agrees']}")
    return "\n".join(lines)


def _csv_keyvals(results: dict, keys: list[str]) -> str:
    rows = ["key,value"]
    for k in keys:
        v = results[k]
        rows.append(f"{k},{json.dumps(v) if isinstance(v, (list, dict)) else v}")
    return "\n".join(rows)


# -- table ---------------------------------------------------------------------


def _run_table(poly: InvertiblePolynomial, args) -> dict:
    sq = symmetry_quotient(poly)
    dims = hom_table(sq, args.max_a)
    reps = representative_table(sq, args.max_a)
    residues = all_residues(sq)
    rows = []
    for a in range(args.max_a + 1):
        rows.append(
            {
                "a": a,
                "dims": [dims[BiDegree(a=a, b=b)] for b in residues],
                "representatives": [reps[BiDegree(a=a, b=b)] for b in residues],
            }
        )
    return {
        "max_a": args.max_a,
        "residues": [_b_label(b) for b in residues],
        "rows": rows,
    }


def _text_table(results: dict) -> str:
    res = results["residues"]
    width = max(8, max(len(r) for r in res) + 2)
    head = "a\\b".ljust(6) + "".join(r.rjust(width) for r in res)
    lines = ["section dimensions:", head]
    for row in results["rows"]:
        cells = [(str(d) if d else ".").rjust(width) for d in row["dims"]]
        lines.append(str(row["a"]).ljust(6) + "".join(cells))
    lines.append("")
    lines.append("representatives (smallest monomial per nonzero cell):")
    repw = max(
        [10]
        + [len(r) for row in results["rows"] for r in row["representatives"] if r]
    ) + 2
    lines.append("a\\b".ljust(6) + "".join(r.rjust(repw) for r in res))
    for row in results["rows"]:
        cells = [(r if r else ".").rjust(repw) for r in row["representatives"]]
        lines.append(str(row["a"]).ljust(6) + "".join(cells))
    return "\n".join(lines)


def _csv_table(results: dict) -> str:
    res = results["residues"]
    lines = ["# dimensions", "a," + ",".join(res)]
    for row in results["rows"]:
        lines.append(f"{row['a']}," + ",".join(str(d) for d in row["dims"]))
    lines.append("# representatives")
    lines.append("a," + ",".join(res))
    for row in results["rows"]:
        lines.append(
            f"{row['a']}," + ",".join(r if r else "" for r in row["representatives"])
        )
    return "\n".join(lines)


# -- chen-ruan -------------------------------------------------------------------


def _run_chen_ruan(poly: InvertiblePolynomial, args) -> dict:
    sq = symmetry_quotient(poly)
    untwisted = untwisted_invariants(sq)
    sectors = enumerate_sectors(sq)
    twisted = sum(s.contribution for s in sectors)
    return {
        "total": untwisted.total + twisted,
        "untwisted": {
            "hyperplane_classes": untwisted.hyperplane_classes,
            "middle_full": untwisted.middle_full,
            "middle_invariant": untwisted.middle_invariant,
            "total": untwisted.total,
        },
        "twisted_total": twisted,
        "contributing_sectors": sum(1 for s in sectors if s.contribution),
        "sector_pieces": len(sectors),
        "sectors": [
            {
                "class_powers": list(s.class_powers),
                "eigenphase": str(s.eigenphase),
                "element": _element_json(s.element),
                "fixed_coords": list(s.fixed_coords),
                "contribution": s.contribution,
            }
            for s in sectors
        ],
    }


def _text_chen_ruan(results: dict) -> str:
    u = results["untwisted"]
    lines = [
        f"orbifold cohomology dimension: {results['total']}",
        f"  untwisted: {u['total']} "
        f"(hyperplane classes {u['hyperplane_classes']}, middle invariant "
        f"{u['middle_invariant']} of {u['middle_full']}, counted twice)",
        f"  twisted: {results['twisted_total']} from "
        f"{results['contributing_sectors']} contributing sector pieces "
        f"({results['sector_pieces']} enumerated)",
        "",
        "class    eigenphase  fixed  contribution",
    ]
    for s in results["sectors"]:
        if s["contribution"] or s["fixed_coords"]:
            cls = ".".join(map(str, s["class_powers"])) or "0"
            fixed = ",".join(f"x{i}" for i in s["fixed_coords"]) or "-"
            lines.append(
                f"{cls:<8} {s['eigenphase']:>10}  {fixed:<6} {s['contribution']}"
            )
    return "\n".join(lines)


def _csv_chen_ruan(results: dict) -> str:
    lines = ["class_powers,eigenphase,fixed_coords,contribution"]
    for s in results["sectors"]:
        cls = ".".join(map(str, s["class_powers"]))
        fixed = ";".join(map(str, s["fixed_coords"]))
        lines.append(f"{cls},{s['eigenphase']},{fixed},{s['contribution']}")
    lines.append(f"# untwisted,{results['untwisted']['total']}")
    lines.append(f"# twisted,{results['twisted_total']}")
    lines.append(f"# total,{results['total']}")
    return "\n".join(lines)


# -- search ------------------------------------------------------------------------


def _verdict(size: int, cr: int | None) -> str:
    if cr is None:
        return (
            f"maximum line-bundle exceptional collection = {size} "
            "(orbifold dimension unavailable for comparison)"
        )
    if size < cr:
        return (
            f"maximum line-bundle exceptional collection = {size} < {cr} "
            "= required full-collection length"
        )
    return (
        f"maximum line-bundle exceptional collection = {size}, "
        f"not below the required full-collection length {cr}"
    )


def _run_search(poly: InvertiblePolynomial, args) -> tuple[dict, int]:
    sq = symmetry_quotient(poly)
    try:
        cr: int | None = chen_ruan_dim(sq)
    except InvquotError:
        cr = None
    verts, audit = candidate_window(sq, max_a=args.window_max_a)
    try:
        result = max_exceptional(
            sq,
            vertices=verts,
            lower_bound_hint=args.lower_bound,
            deterministic=args.deterministic,
            threads=args.threads,
            timeout_secs=args.timeout_secs,
        )
    except SearchTimeoutError as exc:
        results = {
            "timed_out": True,
            "window_size": len(verts),
            "best_size": exc.best_size,
            "best_witness": [_deg_json(d) for d in (exc.best_witness or ())],
            "proof_log": {"window": audit, **(exc.proof_log or {})},
            "chen_ruan_dim": cr,
            "verdict": None,
        }
        return results, 2
    results = {
        "timed_out": False,
        "window_size": len(verts),
        "window": [_deg_json(d) for d in verts],
        "optimum": result.size,
        "optimal_certified": result.optimal,
        "witness": [_deg_json(d) for d in result.witness],
        "witness_sorted": [_deg_json(d) for d in result.witness_set],
        "chen_ruan_dim": cr,
        "verdict": _verdict(result.size, cr),
        "proof_log": {"window": audit, **result.proof_log},
    }
    return results, 0


def _text_search(results: dict) -> str:
    if results["timed_out"]:
        lines = [
            "search timed out",
            f"window size: {results['window_size']}",
            f"best collection found: {results['best_size']}",
        ]
        if results["best_witness"]:
            lines.append("witness (partial search):")
            lines.append("  " + " ".join(
                f"({a},{_b_label(tuple(b))})" for a, b in results["best_witness"]
            ))
        return "\n".join(lines)
    stats = results["proof_log"].get("stats", {})
    lines = [
        f"window size: {results['window_size']}",
        f"maximum exceptional collection: {results['optimum']} (certified optimal)",
        "witness (exceptional order):",
        "  " + " ".join(f"({a},{_b_label(tuple(b))})" for a, b in results["witness"]),
        f"search nodes: {stats.get('nodes')}, bound prunes: {stats.get('bound_prunes')}, "
        f"cycle rejects: {stats.get('cycle_rejects')}",
        f"orbifold cohomology dimension: {results['chen_ruan_dim']}",
        "",
        results["verdict"],
    ]
    return "\n".join(lines)


def _csv_search(results: dict) -> str:
    lines = ["position,a,b"]
    for i, (a, b) in enumerate(results.get("witness", results.get("best_witness") or [])):
        lines.append(f"{i},{a},{_b_label(tuple(b))}")
    lines.append(f"# optimum,{results.get('optimum', results.get('best_size'))}")
    if results.get("verdict"):
        lines.append(f"# verdict,{results['verdict']}")
    return "\n".join(lines)


# -- verify -------------------------------------------------------------------------


def _load_collection(sq: SymmetryQuotient, path: str) -> list[BiDegree]:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise PolynomialSyntaxError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise PolynomialSyntaxError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(data, list):
        raise PolynomialSyntaxError("collection file must be a JSON list of [a, b] pairs")
    out = []
    for item in data:
        if not isinstance(item, list) or len(item) != 2:
            raise PolynomialSyntaxError(f"collection entry {item!r} is not an [a, b] pair")
        a, b = item
        out.append(bidegree(sq, int(a), b if isinstance(b, int) else list(b)))
    return out


def _run_verify(poly: InvertiblePolynomial, args) -> dict:
    sq = symmetry_quotient(poly)
    collection = _load_collection(sq, args.collection)
    report = verify_collection(sq, collection)
    return {
        "size": report.size,
        "valid": report.valid,
        "violations": [dict(v) for v in report.violations],
    }


def _text_verify(results: dict) -> str:
    lines = [
        f"objects: {results['size']}",
        "collection is exceptional" if results["valid"] else "collection is NOT exceptional",
    ]
    for v in results["violations"]:
        if v.get("kind") == "backward ext":
            lines.append(
                f"  violation: Ext({v['source']}, {v['target']}) = {v['ext']}"
            )
        else:
            lines.append(f"  violation: {v}")
    return "\n".join(lines)


def _csv_verify(results: dict) -> str:
    lines = ["kind,source,target,ext", ]
    for v in results["violations"]:
        lines.append(
            f"{v.get('kind')},{v.get('source', '')},{v.get('target', '')},"
            f"{json.dumps(v.get('ext')) if v.get('ext') else ''}"
        )
    lines.append(f"# size,{results['size']}")
    lines.append(f"# valid,{results['valid']}")
    return "\n".join(lines)


# -- driver ---------------------------------------------------------------------------


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        t0 = time.monotonic()
        poly, input_info = _resolve_input(args)
        exit_code = 0
        if args.subcommand == "analyze":
            results = _run_analyze(poly, args)
            parameters = {"seed": args.seed}
            text = _text_analyze({**results, "input_polynomial": input_info["polynomial"]})
            csv = _csv_keyvals(results, [k for k in results if k != "atomic_blocks"])
        elif args.subcommand == "table":
            results = _run_table(poly, args)
            parameters = {"seed": args.seed, "max_a": args.max_a}
            text = _text_table(results)
            csv = _csv_table(results)
        elif args.subcommand == "chen-ruan":
            results = _run_chen_ruan(poly, args)
            parameters = {"seed": args.seed}
            text = _text_chen_ruan(results)
            csv = _csv_chen_ruan(results)
        elif args.subcommand == "search":
            results, exit_code = _run_search(poly, args)
            parameters = {
                "seed": args.seed,
                "window_max_a": args.window_max_a,
                "timeout_secs": args.timeout_secs,
                "threads": args.threads,
                "deterministic": args.deterministic,
                "lower_bound": args.lower_bound,
            }
            text = _text_search(results)
            csv = _csv_search(results)
        else:
            results = _run_verify(poly, args)
            parameters = {"seed": args.seed, "collection": args.collection}
            text = _text_verify(results)
            csv = _csv_verify(results)

        report = make_report(
            __version__, args.subcommand, input_info, parameters, results,
            time.monotonic() - t0,
        )
        if args.format == "json":
            payload = report.to_json()
        elif args.format == "csv":
            payload = csv
        else:
            payload = text
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(payload + "\n")
        else:
            print(payload)
        return exit_code
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SearchTimeoutError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvquotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
