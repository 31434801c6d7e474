"""Command-line interface: ``upb {bounds,construct,verify,gadget,graph,fixtures}``.

Exit codes: 0 success / verified UPB, 1 verified not-UPB, 2 inconclusive or
out of budget, 64 usage error, 65 no construction for the dimensions,
70 a constructed basis failed verification.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from upb import gadgets, graphs
from upb.assembler import build_minimal_upb
from upb.basis import ProductBasis
from upb.bounds import SystemSpec, f_m
from upb.errors import (
    CertificationError,
    ConstructionError,
    DimensionError,
    DomainError,
    ResourceError,
    UnsupportedCaseError,
)
from upb.numerics import DEFAULT_TOL, Tolerances, format_matrix
from upb.verifier import DEFAULT_BUDGET, verify_upb

EXIT_OK = 0
EXIT_NOT_UPB = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64
EXIT_UNSUPPORTED = 65
EXIT_INTERNAL = 70

DEFAULT_SEED = 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _tol(args) -> Tolerances:
    if args.tol is None:
        return DEFAULT_TOL
    return Tolerances(orth_tol=args.tol, rank_tol=DEFAULT_TOL.rank_tol)


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _dims(values) -> SystemSpec:
    return SystemSpec.of(values)


def cmd_bounds(args) -> int:
    report = f_m(_dims(args.dims))
    if args.json:
        _emit(args, json.dumps({"dims": args.dims, **report.as_dict()}, indent=2) + "\n")
        return EXIT_OK
    lines = [
        f"dims:   {' '.join(map(str, args.dims))}",
        f"f_N:    {report.f_N}",
        f"f_m:    {report.status} {report.value}",
        f"rule:   {report.rule.value}",
        f"source: {report.citation}",
    ]
    if report.note:
        lines.append(f"note:   {report.note}")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_construct(args) -> int:
    tol = _tol(args)
    try:
        pb = build_minimal_upb(args.dims, args.seed, verify=False, tol=tol)
    except UnsupportedCaseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (ConstructionError, CertificationError) as exc:
        print(f"error: gadget construction failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    cert = verify_upb(pb, tol)
    if not cert.passed:
        print("error: constructed basis did not verify; nothing written", file=sys.stderr)
        print(cert.summary(), file=sys.stderr)
        return EXIT_INTERNAL
    _emit(args, pb.to_json())
    print(cert.summary(), file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    tol = _tol(args)
    try:
        pb = ProductBasis.load(args.file)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        cert = verify_upb(pb, tol, mode=args.mode, budget=args.budget)
    except ResourceError as exc:
        print(f"inconclusive: {exc}; try --sufficient", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    if args.json:
        _emit(args, json.dumps(cert.as_dict(), indent=2) + "\n")
    else:
        text = cert.summary() + "\n"
        if cert.witness is not None and "local" in cert.witness:
            text += "witness (orthogonal product state, one vector per party):\n"
            for j, vec in enumerate(cert.witness["local"]):
                text += f"  party {j}: " + " ".join(f"{z:.6g}" for z in vec) + "\n"
        _emit(args, text)
    return {"pass": EXIT_OK, "fail": EXIT_NOT_UPB}.get(cert.verdict, EXIT_INCONCLUSIVE)


def _gadget_matrix(args, tol):
    kind, params = args.kind, args.params
    need = {"u-fourier": 1, "u61": 0, "u-general": 2, "v": 3, "w": 1}[kind]
    if len(params) != need:
        raise DomainError(f"gadget {kind} takes {need} integer parameter(s)")
    if kind == "u-fourier":
        return gadgets.build_U_fourier(params[0], certify=False, tol=tol)
    if kind == "u61":
        return gadgets.build_U_6_1(certify=False, tol=tol)
    if kind == "u-general":
        return gadgets.build_U_general(params[0], params[1], args.seed, tol)
    if kind == "v":
        return gadgets.build_V(*params, seed=args.seed, tol=tol)
    return gadgets.build_W(params[0], args.seed, tol)


def _matrix_of(g):
    for attr in ("U", "V", "W"):
        if hasattr(g, attr):
            return getattr(g, attr)
    raise TypeError(type(g).__name__)


def cmd_gadget(args) -> int:
    tol = _tol(args)
    try:
        g = _gadget_matrix(args, tol)
    except (ConstructionError, CertificationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    mat = _matrix_of(g)
    cert = gadgets.certificate_for(g, tol) if args.certify else None
    if args.json:
        out = {"kind": args.kind, "params": args.params, "seed": args.seed,
               "matrix": [[[z.real, z.imag] for z in row] for row in mat.astype(complex)]}
        if cert:
            out["certificate"] = cert.as_dict()
        _emit(args, json.dumps(out, indent=1) + "\n")
    else:
        text = format_matrix(mat)
        if cert:
            text += "\n" + cert.summary() + "\n"
        _emit(args, text)
    if cert and not cert.passed:
        return EXIT_INTERNAL
    return EXIT_OK


_GRAPH_BUILDERS = {
    "D": (graphs.graph_D, 2),
    "C": (graphs.graph_C, 2),
    "C-layer": (graphs.graph_C_layer, 4),
    "Y": (graphs.graph_Y, 1),
    "X": (graphs.graph_X, 1),
}


def cmd_graph(args) -> int:
    fn, arity = _GRAPH_BUILDERS[args.family]
    if len(args.params) != arity:
        raise DomainError(f"graph {args.family} takes {arity} integer parameter(s)")
    g = fn(*args.params)
    if args.dot:
        _emit(args, g.to_dot())
    elif args.json:
        _emit(args, json.dumps({"family": args.family, "params": args.params,
                                "vertices": [g.label(v) for v in range(g.n)],
                                "edges": g.labeled_edges()}, indent=1) + "\n")
    else:
        _emit(args, "".join(f"{a} {b}\n" for a, b in g.labeled_edges()))
    return EXIT_OK


def cmd_fixtures(args) -> int:
    tol = _tol(args)
    items = [
        ("W_5_3_2", gadgets.fixture_V_5_3_2()),
        ("W_2", gadgets.fixture_W_2()),
        ("U_6_1", gadgets.build_U_6_1(certify=False, tol=tol)),
    ]
    if args.json:
        out = {}
        for name, g in items:
            mat = _matrix_of(g)
            out[name] = {"matrix": [[[z.real, z.imag] for z in row] for row in mat.astype(complex)],
                         "certificate": gadgets.certificate_for(g, tol).as_dict()}
        out["U_6_1"]["u10"] = gadgets.solve_u61_root()
        _emit(args, json.dumps(out, indent=1) + "\n")
        return EXIT_OK
    chunks = []
    for name, g in items:
        cert = gadgets.certificate_for(g, tol)
        head = f"# {name}"
        if name == "U_6_1":
            head += f" (u10 = {gadgets.solve_u61_root():.15g}, columns normalized)"
        chunks.append(f"{head}\n{format_matrix(_matrix_of(g))}{cert.summary()}\n")
    _emit(args, "\n".join(chunks))
    return EXIT_OK


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="random seed (default %(default)s)")
    common.add_argument("--tol", type=float, default=None, help="orthogonality tolerance")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="upb", description="Minimum-size unextendible product bases.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bounds", parents=[common], help="f_N and the known value/bound of f_m")
    p.add_argument("dims", type=int, nargs="+")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("construct", parents=[common], help="build and verify a minimal UPB")
    p.add_argument("dims", type=int, nargs="+")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", parents=[common], help="verify a UPB JSON file")
    p.add_argument("file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="mode", action="store_const", const="exact")
    mode.add_argument("--sufficient", dest="mode", action="store_const", const="sufficient")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search node budget")
    p.set_defaults(func=cmd_verify, mode="auto")

    p = sub.add_parser("gadget", parents=[common], help="emit a gadget matrix")
    p.add_argument("kind", choices=["u-fourier", "u61", "u-general", "v", "w"])
    p.add_argument("params", type=int, nargs="*")
    p.add_argument("--certify", action="store_true", help="run the full condition sweep")
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("graph", parents=[common], help="emit a named orthogonality graph")
    p.add_argument("family", choices=list(_GRAPH_BUILDERS))
    p.add_argument("params", type=int, nargs="+")
    p.add_argument("--dot", action="store_true", help="Graphviz DOT output")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("fixtures", parents=[common], help="print the built-in fixture matrices with verdicts")
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (DomainError, DimensionError) as exc:
        print(f"upb: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
