"""Command-line front end.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 size cap
exceeded, 4 numerical degeneracy.
"""

from __future__ import annotations

import argparse
import json
import sys

from .autgroup import color_aut_group, full_aut_group, is_schurian
from .cayley import (
    SRingRejected,
    cayley_scheme,
    is_schurian_sring,
    parse_sring,
    serialize_sring,
    sring_direct,
    sring_wreath,
    validate_sring,
)
from .errors import SchemeError
from .products import class_one, direct_product, kernel_scheme, wreath_power, wreath_product
from .scheme import intersection_numbers, parse, serialize, validate, valencies
from .spectral import (
    DEFAULT_TOL,
    decompose,
    decomposition_to_json,
    is_p_polynomial,
    is_q_polynomial,
)
from .tower import limit_labels, parse_tower, verify_idempotent_chain, verify_projective_system


class UsageError(Exception):
    pass


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_scheme(path, strict=True):
    return parse(_read(path), strict_identity=strict)


def _emit(text, out=None):
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _dump(doc):
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _bool(b):
    return "true" if b else "false"


def _report(args, doc, lines):
    if args.json:
        print(_dump(doc))
    else:
        for line in lines:
            print(line)


# -- handlers ----------------------------------------------------------------

def cmd_build(args):
    if args.kind == "kernel":
        if args.n is None or args.v is None:
            raise UsageError("build kernel needs --n and --v")
        s = kernel_scheme(args.n, args.v, cap=args.cap)
    elif args.kind == "class-one":
        if args.v is None:
            raise UsageError("build class-one needs --v")
        s = class_one(args.v)
    else:
        if not args.input:
            raise UsageError("build cayley needs --in")
        s = cayley_scheme(*parse_sring(_read(args.input)))
    _emit(serialize(s), args.output)
    return 0


def cmd_product(args):
    if args.kind == "power":
        if len(args.schemes) != 1 or args.n is None:
            raise UsageError("product power takes one scheme and --n")
        s = wreath_power(_load_scheme(args.schemes[0]), args.n, cap=args.cap)
    else:
        if len(args.schemes) != 2:
            raise UsageError(f"product {args.kind} takes two schemes")
        x, y = (_load_scheme(p) for p in args.schemes)
        op = wreath_product if args.kind == "wreath" else direct_product
        s = op(x, y, cap=args.cap)
    _emit(serialize(s), args.output)
    return 0


def analyze_doc(s, valencies_=False, intersection=False, eigenmatrix=False, idempotents=False,
                ppoly=False, qpoly=False, tol=DEFAULT_TOL):
    """The report behind ``analyze``, as a JSON-ready dict."""
    doc = {"size": s.size, "num_relations": s.num_relations}
    if valencies_:
        doc["valencies"] = valencies(s)
    if intersection:
        doc["intersection_numbers"] = intersection_numbers(s).p.tolist()
    dec = None
    if eigenmatrix or idempotents or qpoly:
        dec = decompose(s, tol=tol)
    if eigenmatrix or idempotents:
        doc["spectrum"] = decomposition_to_json(dec, idempotents=idempotents)
    if ppoly:
        doc["p_polynomial"] = is_p_polynomial(s)
    if qpoly:
        doc["q_polynomial"] = is_q_polynomial(s, dec)
    return doc


def _matrix_lines(m):
    def cell(v):
        if isinstance(v, dict):
            return f"{v['re']}{v['im']:+}i"
        return str(v)
    return ["  " + " ".join(cell(v) for v in row) for row in m]


def cmd_analyze(args):
    s = _load_scheme(args.scheme)
    flags = [args.valencies, args.intersection, args.eigenmatrix, args.idempotents, args.ppoly, args.qpoly]
    if not any(flags):
        flags = [True, False, True, False, False, False]
    doc = analyze_doc(s, *flags, tol=args.tol)
    lines = [f"size: {s.size}", f"relations: {s.num_relations}"]
    if "valencies" in doc:
        lines.append("valencies: " + " ".join(map(str, doc["valencies"])))
    if "intersection_numbers" in doc:
        for i, block in enumerate(doc["intersection_numbers"]):
            lines.append(f"p[{i}] (rows j, columns k):")
            lines += _matrix_lines(block)
    if "spectrum" in doc:
        spectrum = doc["spectrum"]
        lines.append("multiplicities: " + " ".join(map(str, spectrum["multiplicities"])))
        lines.append("eigenmatrix (rows: relations, columns: idempotents):")
        lines += _matrix_lines(spectrum["eigenmatrix"])
        for j, e in enumerate(spectrum.get("idempotents", [])):
            lines.append(f"E[{j}]:")
            lines += _matrix_lines(e)
    if "p_polynomial" in doc:
        lines.append(f"p-polynomial: {_bool(doc['p_polynomial'])}")
    if "q_polynomial" in doc:
        lines.append(f"q-polynomial: {_bool(doc['q_polynomial'])}")
    _report(args, doc, lines)
    return 0


def cmd_aut(args):
    s = _load_scheme(args.scheme)
    group = full_aut_group(s) if args.full else color_aut_group(s)
    doc = {"order": str(group.order)}
    lines = [f"order: {group.order}"]
    if not args.order_only:
        doc["generators"] = group.to_json()["generators"]
        for f, sigma in group.generators:
            lines.append(f"generator: f={list(f)} sigma={list(sigma)}")
    if args.schurian:
        doc["schurian"] = is_schurian(s)
        lines.append(f"schurian: {_bool(doc['schurian'])}")
    _report(args, doc, lines)
    return 0


def cmd_sring(args):
    if args.kind in ("validate", "schurian"):
        if len(args.files) != 1:
            raise UsageError(f"sring {args.kind} takes one S-ring file")
        g, part = parse_sring(_read(args.files[0]))
        report = validate_sring(g, part)
        doc = {"identity": report.identity, "product": report.product, "inverse": report.inverse,
               "failed": report.failed()}
        lines = [f"condition (1) identity: {_bool(report.identity)}",
                 f"condition (2) product: {_bool(report.product)}",
                 f"condition (3) inverse: {_bool(report.inverse)}"]
        if args.kind == "schurian" and report.ok:
            doc["schurian"] = is_schurian_sring(g, part)
            lines.append(f"schurian: {_bool(doc['schurian'])}")
        _report(args, doc, lines)
        return 0 if report.ok else 1
    if len(args.files) != 2:
        raise UsageError(f"sring {args.kind} takes two S-ring files")
    (g1, p1), (g2, p2) = (parse_sring(_read(p)) for p in args.files)
    op = sring_wreath if args.kind == "wreath" else sring_direct
    _emit(serialize_sring(*op(g1, p1, g2, p2)), args.output)
    return 0


def cmd_tower(args):
    if not args.input:
        raise UsageError("tower commands need --in")
    t = parse_tower(_read(args.input), cap=args.cap)
    depth = args.depth if args.depth is not None else (t.max_depth or 1)
    if depth < 1 or (t.max_depth is not None and depth > t.max_depth):
        raise UsageError(f"--depth must lie in 1..{t.max_depth or 'any'}")
    if args.kind == "truncate":
        _emit(serialize(t.truncation(depth)), args.output)
        return 0
    if args.kind == "build":
        levels = []
        for n in range(1, depth + 1):
            s = t.truncation(n)
            i_labels, j_labels = limit_labels(t, n)
            levels.append({"depth": n, "size": s.size, "num_relations": s.num_relations,
                           "num_idempotents": len(j_labels)})
        lines = [f"depth {d['depth']}: size {d['size']}, #I {d['num_relations']}, #J {d['num_idempotents']}"
                 for d in levels]
        _report(args, {"levels": levels}, lines)
        return 0
    if args.kind == "labels":
        i_labels, j_labels = limit_labels(t, depth)
        doc = {"I": [str(x) for x in i_labels], "J": [str(x) for x in j_labels]}
        _report(args, doc, ["I: " + " ".join(doc["I"]), "J: " + " ".join(doc["J"])])
        return 0
    proj = verify_projective_system(t, depth)
    chain = verify_idempotent_chain(t, depth) if proj.ok else proj
    doc = {"projective_system": proj.ok, "idempotent_chain": chain.ok}
    lines = [f"projective system: {_bool(proj.ok)}", f"idempotent chain: {_bool(chain.ok)}"]
    for check in (proj, chain):
        if not check.ok:
            doc["witness"] = [str(w) for w in check.witness]
            doc["message"] = check.message
            lines.append(f"witness: {check.witness} ({check.message})")
            break
    _report(args, doc, lines)
    return 0 if proj.ok and chain.ok else 1


def cmd_verify(args):
    s = _load_scheme(args.scheme, strict=False)
    report = validate(s)
    doc = {"ok": report.ok,
           "violations": [{"axiom": v.axiom, "witness": json.loads(json.dumps(v.witness, default=int)),
                           "message": v.message} for v in report.violations]}
    lines = ["ok" if report.ok else "invalid"]
    lines += [f"axiom {v.axiom}: {v.message} witness={v.witness}" for v in report.violations]
    _report(args, doc, lines)
    return 0 if report.ok else 1


def cmd_export(args):
    s = _load_scheme(args.scheme)
    if args.format == "json":
        text = serialize(s)
    else:
        blocks = []
        for i in range(s.num_relations):
            a = (s.relation == i).astype(int)
            blocks.append("\n".join(" ".join(map(str, row)) for row in a))
        text = "\n\n".join(blocks)
    _emit(text, args.output)
    return 0


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=argparse.SUPPRESS, help="maximum number of points")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="JSON report")

    p = argparse.ArgumentParser(prog="wreathschemes", parents=[common],
                                description="Association schemes, wreath products and their invariants.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common], help="construct a scheme")
    b.add_argument("kind", choices=["kernel", "class-one", "cayley"])
    b.add_argument("--n", type=int)
    b.add_argument("--v", type=int)
    b.add_argument("--in", dest="input")
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_build)

    pr = sub.add_parser("product", parents=[common], help="wreath, direct or power products")
    pr.add_argument("kind", choices=["wreath", "direct", "power"])
    pr.add_argument("schemes", nargs="+")
    pr.add_argument("--n", type=int)
    pr.add_argument("-o", "--output")
    pr.set_defaults(func=cmd_product)

    a = sub.add_parser("analyze", parents=[common], help="invariants of a scheme")
    a.add_argument("scheme")
    for flag in ("valencies", "intersection", "eigenmatrix", "idempotents", "ppoly", "qpoly"):
        a.add_argument(f"--{flag}", action="store_true")
    a.add_argument("--tol", type=float, default=DEFAULT_TOL)
    a.set_defaults(func=cmd_analyze)

    au = sub.add_parser("aut", parents=[common], help="automorphism group")
    au.add_argument("scheme")
    au.add_argument("--full", action="store_true", help="include label-permuting automorphisms")
    au.add_argument("--order-only", action="store_true")
    au.add_argument("--schurian", action="store_true")
    au.set_defaults(func=cmd_aut)

    sr = sub.add_parser("sring", parents=[common], help="S-rings over finite groups")
    sr.add_argument("kind", choices=["validate", "schurian", "wreath", "direct"])
    sr.add_argument("files", nargs="+")
    sr.add_argument("-o", "--output")
    sr.set_defaults(func=cmd_sring)

    t = sub.add_parser("tower", parents=[common], help="wreath towers")
    t.add_argument("kind", choices=["build", "truncate", "verify", "labels"])
    t.add_argument("--in", dest="input")
    t.add_argument("--depth", type=int)
    t.add_argument("-o", "--output")
    t.set_defaults(func=cmd_tower)

    v = sub.add_parser("verify", parents=[common], help="check the scheme axioms")
    v.add_argument("scheme")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("export", parents=[common], help="re-export a scheme")
    e.add_argument("scheme")
    e.add_argument("--format", choices=["json", "matrix-text"], default="json")
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.cap = getattr(args, "cap", None)
    args.json = getattr(args, "json", False)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SRingRejected as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SchemeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
