"""Command-line frontend: every verification as a reproducible JSON command.

Exit codes: 0 when all requested checks pass/certify (and for pure value
commands), 1 when a check fails, 2 for usage errors.  Reports embed the full
invocation; identical invocations give byte-identical output modulo the
elapsed_ms fields.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, bitlinalg, lattice, simplexcheck
from .bitlinalg import ABParseError, AffineBitMap, BUILTIN_MAPS, PermOperator, SimplexScheme, parse_ab
from .opmatrix import OpMatrix, linear_comb
from .polyring import MPoly, VarTable, parse_rational
from .report import Report

PROG = "tetraverify"


def _resolve_map(spec: str) -> AffineBitMap:
    """A builtin operator name (S2, T2, S3, T3, H4) or a path to an [A|B] file."""
    if spec in BUILTIN_MAPS:
        return BUILTIN_MAPS[spec]
    path = Path(spec)
    if not path.exists():
        raise ValueError(f"{spec!r} is neither a builtin operator nor an existing file")
    return parse_ab(path.read_text())


def _family_matrix(m: AffineBitMap, var: str = "a") -> OpMatrix:
    """One-parameter family M + var*flip(M) attached to a permutation map."""
    vars = VarTable((var,))
    base = OpMatrix.from_perm(PermOperator.from_affine(m), vars)
    step = OpMatrix.from_perm(PermOperator.from_affine(m.flipped()), vars)
    return linear_comb(base, step, MPoly.var(vars, var))


def _parse_dims(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated dimensions, got {text!r}")
    return tuple(int(p) for p in parts)  # type: ignore[return-value]


def _parse_axes(text: str) -> tuple[int, int, int]:
    try:
        perm = tuple("xyz".index(c) for c in text)
    except ValueError:
        raise ValueError(f"axis order must be a permutation of 'xyz', got {text!r}") from None
    if sorted(perm) != [0, 1, 2]:
        raise ValueError(f"axis order must be a permutation of 'xyz', got {text!r}")
    return perm  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# handlers: each returns (payload, ok)
# ---------------------------------------------------------------------------

def _cmd_simplex_check(args) -> tuple[dict, bool]:
    m = _resolve_map(args.ab)
    if m.n != args.n:
        raise ValueError(f"operator arity {m.n} does not match --n {args.n}")
    report = bitlinalg.perm_simplex_check(
        SimplexScheme.standard(args.n), PermOperator.from_affine(m)
    )
    return {"reports": [report.to_dict()]}, report.ok


def _cmd_tetra_residual(args) -> tuple[dict, bool]:
    residual = simplexcheck.build_tetra_residual()
    return {
        "result": {
            "check": "tetra-residual",
            "nonzero_entries": residual.dump(),
            "max_degree_per_var": residual.max_degree_per_var(),
        }
    }, True


def _cmd_tetra_verify_case(args) -> tuple[dict, bool]:
    case = simplexcheck.CASES[args.case]
    report = simplexcheck.verify_case(case, args.reduce_var)
    return {"reports": [report.to_dict()]}, report.ok


def _cmd_tetra_sample(args) -> tuple[dict, bool]:
    case = simplexcheck.CASES[args.case]
    report = simplexcheck.sample_case(case, args.count, args.seed)
    return {"reports": [report.to_dict()]}, report.ok


def _cmd_tetra_off_variety(args) -> tuple[dict, bool]:
    report = simplexcheck.sample_off_variety(args.count, args.seed)
    return {"reports": [report.to_dict()]}, report.ok


def _cmd_yb_verify(args) -> tuple[dict, bool]:
    report = simplexcheck.verify_yb_condition(args.interpretation, args.points, args.seed)
    return {"reports": [report.to_dict()]}, report.ok


def _cmd_yb_atanh(args) -> tuple[dict, bool]:
    report = simplexcheck.atanh_consistency(args.count, args.seed)
    return {"reports": [report.to_dict()]}, report.ok


def _cmd_trace_partial(args) -> tuple[dict, bool]:
    m = _resolve_map(args.ab)
    matrix = OpMatrix.from_perm(PermOperator.from_affine(m))
    if not 1 <= args.site <= m.n:
        raise ValueError(f"--site {args.site} out of range 1..{m.n}")
    traced = matrix.partial_trace(args.site)
    return {
        "result": {
            "check": "trace-partial",
            "sites": traced.sites,
            "nonzero_entries": traced.dump(),
        }
    }, True


def _cmd_op_rank(args) -> tuple[dict, bool]:
    m = _resolve_map(args.ab)
    family = _family_matrix(m)
    if args.a is None:
        raise ValueError("op rank needs --a (rank is defined at a rational point)")
    rank = family.evaluate({"a": parse_rational(args.a)}).rank_rational()
    return {
        "result": {"check": "op-rank", "operator": args.ab, "a": args.a, "rank": rank}
    }, True


def _cmd_op_det(args) -> tuple[dict, bool]:
    m = _resolve_map(args.ab)
    family = _family_matrix(m)
    if args.a is None:
        det = family.det_symbolic().to_str()
    else:
        det = str(family.det_symbolic().eval({"a": parse_rational(args.a)}))
    return {
        "result": {"check": "op-det", "operator": args.ab, "a": args.a, "det": det}
    }, True


def _cmd_lattice_transfer(args) -> tuple[dict, bool]:
    chain = lattice.ChainSpec(args.sites)
    if args.mu is not None or args.nu is not None:
        if args.mu is None or args.nu is None:
            raise ValueError("numeric mode needs both --mu and --nu")
        t_mu = lattice.row_transfer(chain, parse_rational(args.mu))
        t_nu = lattice.row_transfer(chain, parse_rational(args.nu))
        diff = t_mu @ t_nu - t_nu @ t_mu
        report = Report(
            check=f"transfer-commute-{args.sites}",
            status="commute" if diff.is_zero() else "fail",
            points=1,
        )
    else:
        report = lattice.transfer_commutator(chain)
    reports = [report.to_dict()]
    ok = report.ok
    if args.control:
        control = lattice.transfer_commutator_control(lattice.ChainSpec(min(args.sites, 2)))
        reports.append(control.to_dict())
        ok = ok and control.status == "fail"
    return {"reports": reports}, ok


def _cmd_lattice_rlm(args) -> tuple[dict, bool]:
    maps = [_resolve_map(s) for s in (args.r, args.l, args.m)]
    if args.params:
        values = [parse_rational(p) for p in args.params.split(",")]
        if len(values) != 3:
            raise ValueError("--params needs three comma-separated rationals")
        ops = [
            _family_matrix(m).evaluate({"a": v})
            for m, v in zip(maps, values)
        ]
    else:
        ops = [OpMatrix.from_perm(PermOperator.from_affine(m)) for m in maps]
    report = lattice.rlm_check(*ops)
    return {"reports": [report.to_dict()]}, report.ok


def _cmd_lattice_partition(args) -> tuple[dict, bool]:
    lat = lattice.Lattice3D(_parse_dims(args.dims))
    axis_perm = _parse_axes(args.axes)
    poly = lattice.partition_polynomial(lat, axis_perm, args.backend)
    result = {
        "check": "lattice-partition",
        "dims": list(lat.dims),
        "z": poly.to_str(),
        "counts": [int(poly.terms.get((k,), 0)) for k in range(lat.n_vertices + 1)],
    }
    if args.a is not None:
        result["a"] = args.a
        result["value"] = str(poly.eval({"a": parse_rational(args.a)}))
    if args.csv:
        points = [parse_rational(p) for p in args.csv_points.split(",")]
        lines = ["a,Z"] + [f"{p},{poly.eval({'a': p})}" for p in points]
        Path(args.csv).write_text("\n".join(lines) + "\n")
        result["csv"] = args.csv
    return {"result": result}, True


def _cmd_vertices_list(args) -> tuple[dict, bool]:
    if args.dim == 2:
        base, var = bitlinalg.S2, "lam"
    else:
        base, var = bitlinalg.S3, "a"
    entries = []
    for i in range(1 << base.n):
        in_bits = bitlinalg.dec_bits(i, base.n)
        keep = base.apply(in_bits)
        flip = tuple(b ^ 1 for b in keep)
        entries.append({"col": list(in_bits), "row": list(keep), "poly": "1"})
        entries.append({"col": list(in_bits), "row": list(flip), "poly": var})
    return {
        "result": {"check": "vertices", "dim": args.dim, "weights": entries}
    }, True


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Exact verification of two-color permutation-type R-matrix algebra",
    )
    parser.add_argument("--version", action="version", version=f"{PROG} {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON envelope to this file instead of stdout")

    top = parser.add_subparsers(dest="group", required=True)

    simplex = top.add_parser("simplex", help="constant n-simplex checks").add_subparsers(
        dest="command", required=True)
    p = simplex.add_parser("check", parents=[common], help="exhaustive n-simplex check")
    p.add_argument("--n", type=int, choices=(2, 3, 4), required=True)
    p.add_argument("--ab", required=True, help="builtin name (S2,T2,S3,T3,H4) or [A|B] file")
    p.set_defaults(handler=_cmd_simplex_check)

    tetra = top.add_parser("tetra", help="parameterized tetrahedron equation").add_subparsers(
        dest="command", required=True)
    p = tetra.add_parser("residual", parents=[common], help="dump nonzero residual entries")
    p.set_defaults(handler=_cmd_tetra_residual)
    p = tetra.add_parser("verify-case", parents=[common], help="certify one variety component")
    p.add_argument("--case", type=int, choices=range(1, 6), required=True)
    p.add_argument("--reduce-var", choices=simplexcheck.TETRA_VARS.names,
                   help="force the elimination variable of multiply-through generators")
    p.set_defaults(handler=_cmd_tetra_verify_case)
    p = tetra.add_parser("sample", parents=[common], help="sample points on one component")
    p.add_argument("--case", type=int, choices=range(1, 6), required=True)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(handler=_cmd_tetra_sample)
    p = tetra.add_parser("off-variety", parents=[common], help="necessity sampling off all components")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(handler=_cmd_tetra_off_variety)

    yb = top.add_parser("yb", help="non-constant Yang-Baxter relation").add_subparsers(
        dest="command", required=True)
    p = yb.add_parser("verify", parents=[common], help="certify the parameter condition")
    p.add_argument("--interpretation", choices=("all-r", "literal"), default="all-r")
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(handler=_cmd_yb_verify)
    p = yb.add_parser("atanh", parents=[common], help="additive form of the Case 3 relation")
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(handler=_cmd_yb_atanh)

    trace = top.add_parser("trace", help="partial traces").add_subparsers(
        dest="command", required=True)
    p = trace.add_parser("partial", parents=[common], help="trace one pair of indices")
    p.add_argument("--ab", required=True)
    p.add_argument("--site", type=int, required=True)
    p.set_defaults(handler=_cmd_trace_partial)

    op = top.add_parser("op", help="rank and determinant of operator families").add_subparsers(
        dest="command", required=True)
    p = op.add_parser("rank", parents=[common], help="exact rank at a rational parameter")
    p.add_argument("--ab", required=True)
    p.add_argument("--a", help="rational parameter p/q of the family M + a*flip(M)")
    p.set_defaults(handler=_cmd_op_rank)
    p = op.add_parser("det", parents=[common], help="exact determinant (symbolic without --a)")
    p.add_argument("--ab", required=True)
    p.add_argument("--a")
    p.set_defaults(handler=_cmd_op_det)

    lat = top.add_parser("lattice", help="transfer matrices and partition functions").add_subparsers(
        dest="command", required=True)
    p = lat.add_parser("transfer-commute", parents=[common], help="commutation of row transfer matrices")
    p.add_argument("--sites", type=int, required=True)
    p.add_argument("--symbolic", action="store_true",
                   help="polynomial-identity check (default unless --mu/--nu given)")
    p.add_argument("--mu")
    p.add_argument("--nu")
    p.add_argument("--control", action="store_true",
                   help="also run the perturbed non-commuting control")
    p.set_defaults(handler=_cmd_lattice_transfer)
    p = lat.add_parser("rlm", parents=[common], help="R L M intertwining check")
    p.add_argument("--r", required=True)
    p.add_argument("--l", required=True)
    p.add_argument("--m", required=True)
    p.add_argument("--params", help="three rationals; factors become M + p*flip(M)")
    p.set_defaults(handler=_cmd_lattice_rlm)
    p = lat.add_parser("partition", parents=[common], help="3D sixteen-vertex partition function")
    p.add_argument("--dims", required=True, help="Lx,Ly,Lz (periodic)")
    p.add_argument("--a", help="evaluate Z at this rational")
    p.add_argument("--symbolic", action="store_true", help="emit the polynomial Z(a) (default)")
    p.add_argument("--axes", default="xyz", help="axis relabeling of the vertex convention")
    p.add_argument("--backend", choices=("numba", "numpy", "python"),
                   help="force an enumeration backend")
    p.add_argument("--csv", help="write (a, Z(a)) samples to this CSV file")
    p.add_argument("--csv-points", default="1/4,1/2,1,2")
    p.set_defaults(handler=_cmd_lattice_partition)

    vertices = top.add_parser("vertices", help="vertex weight tables").add_subparsers(
        dest="command", required=True)
    p = vertices.add_parser("list", parents=[common], help="weights of the 2D/3D model")
    p.add_argument("--dim", type=int, choices=(2, 3), default=3)
    p.set_defaults(handler=_cmd_vertices_list)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(argv)
    try:
        payload, ok = args.handler(args)
    except (ValueError, ABParseError, OSError) as exc:
        parser.exit(2, f"{PROG}: error: {exc}\n")
    envelope = {"invocation": [PROG] + list(argv), **payload}
    text = json.dumps(envelope, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
