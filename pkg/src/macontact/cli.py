"""Command-line front end.

Subcommands: classify, verify, bend, contact, rmanifold, selfadjoint.
All numeric output is JSON (CSV where it is tabular) with floats printed
to 17 significant digits, so identical inputs and seed produce
byte-identical files.  Exit codes: 0 success, 1 verification failed,
2 bad input, 3 numeric failure (including any NaN), 4 internal
consistency gate failed.
"""

import argparse
import math
import sys

import numpy as np

from . import bends, monge_ampere, rmanifold, symplectic
from .contact import ContactChart, DarbouxPoint, contact_field
from .errors import ConsistencyError
from .expr import EvalDomainError, ParseError, parse
from .monge_ampere import GridSpec, MAEquation
from .rmanifold import RManifoldSpec
from .zeta import ZetaKind

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_GATE = 4

DEFAULT_GRID = "x1=-1:1:5,x2=-1:1:5"


# --- deterministic serialization ----------------------------------------------

def _format_float(value: float) -> str:
    return format(value, ".17g")


def dumps(obj) -> str:
    """JSON with floats at 17 significant digits (bitwise reproducible)."""
    parts = []
    _dump(obj, parts)
    return "".join(parts)


def _dump(obj, parts):
    if obj is None:
        parts.append("null")
    elif isinstance(obj, bool):
        parts.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        parts.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        parts.append(_format_float(float(obj)))
    elif isinstance(obj, str):
        parts.append('"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"')
    elif isinstance(obj, dict):
        parts.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if i:
                parts.append(", ")
            _dump(str(key), parts)
            parts.append(": ")
            _dump(value, parts)
        parts.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        parts.append("[")
        seq = obj.tolist() if isinstance(obj, np.ndarray) else obj
        for i, value in enumerate(seq):
            if i:
                parts.append(", ")
            _dump(value, parts)
        parts.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj)!r}")


def find_nan(obj, path="$"):
    """Path to the first non-finite float in the structure, or None."""
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(float(obj)):
            return path
    elif isinstance(obj, dict):
        for key, value in obj.items():
            hit = find_nan(value, f"{path}.{key}")
            if hit:
                return hit
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = obj.tolist() if isinstance(obj, np.ndarray) else obj
        for i, value in enumerate(seq):
            hit = find_nan(value, f"{path}[{i}]")
            if hit:
                return hit
    return None


def _emit(payload, args) -> int:
    hit = find_nan(payload)
    if hit:
        print(f"error: non-finite value at {hit}", file=sys.stderr)
        return EXIT_NUMERIC
    text = dumps(payload) + "\n"
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _emit_csv(rows, args) -> int:
    for row in rows:
        for cell in row:
            if isinstance(cell, float) and not math.isfinite(cell):
                print("error: non-finite value in CSV output", file=sys.stderr)
                return EXIT_NUMERIC
    lines = []
    for row in rows:
        lines.append(",".join(
            _format_float(c) if isinstance(c, float) else str(c) for c in row))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --- argument helpers ----------------------------------------------------------

def _parse_grid(text: str) -> GridSpec:
    if text == "default":
        text = DEFAULT_GRID
    axes = {}
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        name, _, rng = chunk.partition("=")
        pieces = rng.split(":")
        if len(pieces) != 3:
            raise ValueError(f"grid axis {chunk!r} is not var=lo:hi:count")
        axes[name.strip()] = (float(pieces[0]), float(pieces[1]), int(pieces[2]))
    return GridSpec(axes)


def _parse_fixed(text: str) -> dict:
    fixed = {}
    if not text:
        return fixed
    for chunk in text.split(","):
        name, _, value = chunk.partition("=")
        fixed[name.strip()] = float(value)
    return fixed


def _parse_point(text: str) -> DarbouxPoint:
    values = [float(v) for v in text.split(",")]
    if len(values) != 5:
        raise ValueError("point needs 5 comma-separated values "
                         "(x1, x2, u, p1, p2)")
    return DarbouxPoint(*values)


def _parse_kind(text: str) -> ZetaKind:
    return ZetaKind(text)


def _homogeneous_poly(text: str, degree: int) -> bends.HomPoly:
    expr = parse(text, ("x", "y"))
    jet = expr.eval_jet((0.0, 0.0), degree + 3)
    coeffs = np.zeros(degree + 1)
    for alpha, value in jet.coeffs.items():
        if sum(alpha) == degree:
            coeffs[alpha[0]] = value
        elif abs(value) > 1e-12:
            raise ValueError(f"{text!r} is not homogeneous of degree {degree}")
    return bends.HomPoly(degree, coeffs)


def _equation_from_args(args) -> MAEquation:
    return MAEquation.from_strings(N=args.N, A=args.A, B=args.B,
                                   C=args.C, D=args.D)


def _add_coefficient_flags(sub):
    for name in "NABCD":
        sub.add_argument(f"--{name}", default="0",
                         help=f"coefficient {name} as an expression in "
                              "x1, x2, u, p1, p2 (default 0)")


# --- subcommands ----------------------------------------------------------------

def cmd_classify(args) -> int:
    eq = _equation_from_args(args)
    grid = _parse_grid(args.grid)
    if args.fixed:
        grid = GridSpec(grid.axes, _parse_fixed(args.fixed))
    region = monge_ampere.classify_region(eq, grid, band=args.band)
    if region.error_fraction > args.max_error_fraction:
        print(f"error: {region.error_fraction:.2%} of cells failed to "
              "evaluate", file=sys.stderr)
        return EXIT_NUMERIC
    if args.format == "csv":
        rows = [["index", "delta", "type", "error"]]
        for cell in region.cells:
            rows.append([";".join(str(i) for i in cell.index),
                         cell.delta if cell.delta is not None else "",
                         cell.type or "", cell.error or ""])
        return _emit_csv(rows, args)
    return _emit(region.to_json_dict(), args)


def cmd_verify(args) -> int:
    eq = _equation_from_args(args)
    f = parse(args.f, ("x1", "x2"))
    rng = np.random.default_rng(args.seed)
    bases = rng.uniform(-args.range, args.range, size=(args.samples, 2))
    entries = []
    for base in bases:
        report = monge_ampere.invariance_defect(eq, f, tuple(base))
        entries.append({
            "base": [float(base[0]), float(base[1])],
            "residual": report.residual,
            "defect": report.defect,
            "decomposition_deviation": report.decomposition_deviation,
        })
    max_res = max(abs(e["residual"]) for e in entries)
    max_defect = max(e["defect"] for e in entries)
    max_dev = max(e["decomposition_deviation"] for e in entries)
    passed = max_res <= args.residual_tol and max_defect <= args.defect_tol
    payload = {
        "equation": {name: getattr(args, name) for name in "NABCD"},
        "solution": args.f,
        "samples": entries,
        "max_residual": max_res,
        "max_defect": max_defect,
        "max_decomposition_deviation": max_dev,
        "passed": passed,
    }
    code = _emit(payload, args)
    if code != EXIT_OK:
        return code
    return EXIT_OK if passed else EXIT_FAILED


def cmd_bend(args) -> int:
    q1 = _homogeneous_poly(args.q1, args.k)
    q2 = _homogeneous_poly(args.q2, args.k)
    ok, witness = bends.is_bend(args.k, q1, q2)
    payload = {"k": args.k, "is_bend": ok}
    if ok:
        matrix = bends.structure_matrix(*witness)
        kind, generator = bends.classify_bend(matrix)
        payload["kind"] = kind.value
        payload["matrix"] = list(matrix)
        payload["generator"] = generator
        payload["witness"] = {"f": witness[0].coeffs, "g": witness[1].coeffs}
    return _emit(payload, args)


def cmd_contact(args) -> int:
    nu = parse(args.nu, ("x1", "x2", "u", "p1", "p2"))
    pt = _parse_point(args.point)
    field = contact_field(ContactChart(), nu, pt)
    payload = {
        "nu": args.nu,
        "point": list(pt.as_tuple()),
        "components": list(field.components),
        "omega": float(field.components[2] - pt.p1 * field.components[0]
                       - pt.p2 * field.components[1]),
    }
    return _emit(payload, args)


def cmd_rmanifold(args) -> int:
    spec = RManifoldSpec(args.k, args.l, _parse_kind(args.kind))
    if args.export:
        rng = np.random.default_rng(args.seed)
        params = rng.uniform(-args.param_range, args.param_range,
                             size=(args.count, 2))
        rmanifold.write_point_cloud(spec, [tuple(p) for p in params],
                                    args.export)
        return _emit({"exported": args.export, "count": args.count}, args)
    report = rmanifold.singular_point_report(
        spec, radius=args.radius, samples=args.samples)
    return _emit(report.to_json_dict(), args)


def cmd_selfadjoint(args) -> int:
    values = [float(v) for v in args.matrix.split(",")]
    if len(values) != 16:
        raise ValueError("matrix needs 16 comma-separated entries (row-major)")
    matrix = np.array(values).reshape(4, 4)
    space = (monge_ampere.darboux_space() if args.space == "darboux"
             else symplectic.standard_space(2))
    result = symplectic.classify_dim4(space, symplectic.Operator(matrix, space),
                                      tol=args.tol)
    payload = {
        "type": result.type.value,
        "minimal_polynomial": list(result.minimal_polynomial),
        "eigenvalues": [[complex(v).real, complex(v).imag]
                        for v in result.eigenvalues],
    }
    if result.complex_structure is not None:
        payload["complex_structure"] = result.complex_structure
    if result.eigenplanes is not None:
        payload["eigenplanes"] = [p for p in result.eigenplanes]
    if result.lagrangian_plane is not None:
        payload["lagrangian_plane"] = result.lagrangian_plane
    return _emit(payload, args)


# --- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="macontact",
        description="Monge-Ampere equations through contact geometry")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=float, default=None,
                       help="override the default tolerance")
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--out", default=None, help="write output to a file")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("classify", help="type map of an equation over a grid")
    _add_coefficient_flags(p)
    p.add_argument("--grid", default="default",
                   help="axes as var=lo:hi:count, comma separated; "
                        f"'default' means {DEFAULT_GRID}")
    p.add_argument("--fixed", default="",
                   help="fixed values for non-axis variables, var=value pairs")
    p.add_argument("--band", type=float, default=1e-9,
                   help="parabolic band half-width on the discriminant")
    p.add_argument("--max-error-fraction", type=float, default=0.25)
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="check a candidate solution")
    _add_coefficient_flags(p)
    p.add_argument("--f", required=True,
                   help="candidate solution as an expression in x1, x2")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--range", type=float, default=1.0,
                   help="base points drawn uniformly from [-range, range]^2")
    p.add_argument("--residual-tol", type=float, default=1e-9)
    p.add_argument("--defect-tol", type=float, default=1e-8)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bend", help="bend test for a polynomial pair")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q1", required=True, help="polynomial in x, y")
    p.add_argument("--q2", required=True, help="polynomial in x, y")
    common(p)
    p.set_defaults(func=cmd_bend)

    p = sub.add_parser("contact", help="contact field of a generating function")
    p.add_argument("--nu", required=True,
                   help="generating function in x1, x2, u, p1, p2")
    p.add_argument("--point", default="0,0,0,0,0",
                   help="chart point, 5 comma-separated values")
    common(p)
    p.set_defaults(func=cmd_contact)

    p = sub.add_parser("rmanifold", help="singular solution family reports")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--kind", choices=("minus", "zero", "plus"), required=True)
    p.add_argument("--report", choices=("singular",), default="singular")
    p.add_argument("--radius", type=float, default=0.5)
    p.add_argument("--samples", type=int, default=16)
    p.add_argument("--export", default=None,
                   help="write a CSV point cloud to this path instead")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--param-range", type=float, default=1.0)
    common(p)
    p.set_defaults(func=cmd_rmanifold)

    p = sub.add_parser("selfadjoint", help="classify a 4x4 operator")
    p.add_argument("--matrix", required=True,
                   help="16 comma-separated entries, row-major")
    p.add_argument("--space", choices=("standard", "darboux"),
                   default="standard")
    common(p)
    p.set_defaults(func=cmd_selfadjoint)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "tol", None) is None:
        args.tol = 1e-9
    else:
        # --tol overrides the per-check defaults where they exist
        for name in ("residual_tol", "defect_tol"):
            if hasattr(args, name):
                setattr(args, name, args.tol)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EvalDomainError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ConsistencyError as exc:
        print(f"consistency gate failed: {exc}", file=sys.stderr)
        return EXIT_GATE
    except (ValueError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
