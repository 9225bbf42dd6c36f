"""Command-line front end.

Every subcommand builds a JSON-serializable dict; ``--format text`` renders the
same dict as ``key: value`` lines.  Exit codes: 0 ok, 1 usage or input error,
2 when a check records a violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .brillnoether import (
    BNData,
    FiberKind,
    GenusMismatch,
    UnsupportedGenus,
    analyze_genus1_fiber,
    chain_dimension_check,
    default_genera,
    enumerate_refined_chains,
    rho,
    rho_hat,
)
from .exactlinalg import DEFAULT_PRIME, Field, kernel, loads_matrix, rank, rref, span
from .flags import Flag, classify, flag_from_basis, relative_position
from .oracle import tangent_dim_oracle
from .schubert import (
    PreconditionError,
    SchubertIndex,
    coxeter_bound,
    sample_sigma_circ_point,
    tangent_dim_pair_formula,
)
from .verify import SweepConfig, run_example_0202, run_verify

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2
SEED_ENV = "SCHUBERT_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _csv(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _field(text: str) -> Field:
    try:
        return Field.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _common() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subcommand from overwriting a value given before it
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=_field, default=argparse.SUPPRESS, help="q or fp:<p> (default fp:1009)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help=f"RNG seed (fallback ${SEED_ENV}, then 0)")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes for sweeps")
    common.add_argument("--out", default=argparse.SUPPRESS, help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="schubtan", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("rank", parents=[common], help="rank, reduced form and kernel of a matrix file")
    p.add_argument("matrix")

    p = sub.add_parser("flagpos", parents=[common], help="relative position of two flags")
    p.add_argument("p_file")
    p.add_argument("q_file")

    p = sub.add_parser("tangent", parents=[common], help="tangent space to an intersection of two Schubert varieties")
    p.add_argument("p_file")
    p.add_argument("q_file")
    p.add_argument("a", type=_csv)
    p.add_argument("b", type=_csv)
    p.add_argument("--point", help="matrix file whose rows span the point; sampled from --seed otherwise")
    p.add_argument("--oracle", action="store_true", help="also compute the brute-force tangent dimension")

    for name, what in (("rho", "Brill-Noether number"), ("rhohat", "nonemptiness invariant")):
        p = sub.add_parser(name, parents=[common], help=what)
        _add_bn_args(p)

    p = sub.add_parser("fiber", parents=[common], help="genus-1 fiber analysis")
    _add_bn_args(p)
    p.add_argument("--kind", type=FiberKind.parse, default=FiberKind("generic"), help="generic, allp, allq or mixed:<a>")
    p.add_argument("--samples", type=int, default=20)

    p = sub.add_parser("chains", parents=[common], help="refined chain assignments")
    _add_bn_args(p)
    p.add_argument("--genera", type=_csv, help="component genera, 0 or 1 each (default: g elliptic components)")
    p.add_argument("--limit", type=int, default=50, help="assignments listed in the report")

    p = sub.add_parser("verify", parents=[common], help="seeded invariant sweep")
    p.add_argument("--d-max", type=int, default=5)
    p.add_argument("--r-max", type=int, default=2)
    p.add_argument("--instances", type=int, default=100, help="instances per class")

    sub.add_parser("example-0202", parents=[common], help="lines meeting two crossing lines in P^3")
    return parser


def _add_bn_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("g", type=int)
    p.add_argument("r", type=int)
    p.add_argument("d", type=int)
    p.add_argument("a", type=_csv)
    p.add_argument("b", type=_csv)


def _bn_data(args) -> BNData:
    try:
        return BNData(args.g, args.r, args.d, args.a, args.b)
    except ValueError as e:
        raise UsageError(str(e))


def _read_matrix(path: str):
    try:
        return loads_matrix(Path(path).read_text())
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}")
    except ValueError as e:
        raise UsageError(f"{path}: {e}")


def _read_flag(path: str, fld: Field | None = None) -> Flag:
    m = _read_matrix(path)
    if fld is not None and m.field != fld:
        raise UsageError(f"{path} is over {m.field}, expected {fld}")
    try:
        return flag_from_basis(m.field, m.rows())
    except ValueError as e:
        raise UsageError(f"{path}: {e}")


def _index(d: int, seq) -> SchubertIndex:
    try:
        return SchubertIndex(d, seq)
    except ValueError as e:
        raise UsageError(str(e))


def _jsonable(fld: Field, rows) -> list[list[str]]:
    return [[fld.fmt(x) for x in row] for row in rows]


# -- commands -------------------------------------------------------------------


def cmd_rank(args) -> tuple[dict, int]:
    m = _read_matrix(args.matrix)
    reduced, pivots = rref(m.field, m.rows(), m.ncols)
    ker = kernel(m)
    return {
        "field": m.field.cli_name(),
        "rows": m.nrows,
        "cols": m.ncols,
        "rank": rank(m),
        "pivots": pivots,
        "rref": _jsonable(m.field, reduced),
        "kernel_dim": ker.dim,
        "kernel": _jsonable(m.field, ker.rows),
    }, EXIT_OK


def cmd_flagpos(args) -> tuple[dict, int]:
    p = _read_flag(args.p_file)
    q = _read_flag(args.q_file, p.field)
    if p.d != q.d:
        raise UsageError(f"flags have dimensions {p.d} and {q.d}")
    rel = relative_position(p, q)
    cls = classify(p, q)
    return {
        "d": p.d,
        "sigma": list(rel.sigma),
        "class": cls.kind,
        "t": cls.t,
        "t_prime": cls.t_prime,
        "table": [list(row) for row in rel.table],
        "basis": _jsonable(p.field, rel.basis),
    }, EXIT_OK


def cmd_tangent(args) -> tuple[dict, int]:
    p = _read_flag(args.p_file)
    q = _read_flag(args.q_file, p.field)
    if p.d != q.d:
        raise UsageError(f"flags have dimensions {p.d} and {q.d}")
    a, b = _index(p.d, args.a), _index(p.d, args.b)
    if a.r != b.r:
        raise UsageError("index sequences have different lengths")
    if args.point:
        m = _read_matrix(args.point)
        if m.field != p.field or m.ncols != p.d:
            raise UsageError("point file does not match the flags' field and dimension")
        lam = span(m.field, m.rows(), p.d)
        if lam.dim != a.r + 1:
            raise UsageError(f"point has dimension {lam.dim}, expected {a.r + 1}")
    else:
        lam = sample_sigma_circ_point(p, a, q, b, args.seed)
        if lam is None:
            raise UsageError("no point of both open strata found for this seed")
    try:
        rep = tangent_dim_pair_formula(lam, p, a, q, b)
        bound = coxeter_bound(lam, p, a, q, b)
    except PreconditionError as e:
        raise UsageError(str(e))
    out = rep.to_dict()
    out["bound"] = bound
    out["point"] = _jsonable(p.field, lam.rows)
    code = EXIT_OK
    if args.oracle:
        out["oracle"] = tangent_dim_oracle(lam, [(p, a), (q, b)])
        if out["oracle"] != rep.dim:
            code = EXIT_VIOLATION
    return out, code


def cmd_rho(args) -> tuple[dict, int]:
    data = _bn_data(args)
    return {"g": data.g, "r": data.r, "d": data.d, "a": list(data.a), "b": list(data.b), "rho": rho(data)}, EXIT_OK


def cmd_rhohat(args) -> tuple[dict, int]:
    data = _bn_data(args)
    return {"g": data.g, "r": data.r, "d": data.d, "a": list(data.a), "b": list(data.b), "rho_hat": rho_hat(data)}, EXIT_OK


def cmd_fiber(args) -> tuple[dict, int]:
    data = _bn_data(args)
    if args.samples < 0:
        raise UsageError("--samples must be nonnegative")
    try:
        rep = analyze_genus1_fiber(data, args.kind, samples=args.samples, seed=args.seed, fld=args.field)
    except (UnsupportedGenus, ValueError) as e:
        raise UsageError(str(e))
    return rep.to_dict(), EXIT_OK if rep.ok else EXIT_VIOLATION


def cmd_chains(args) -> tuple[dict, int]:
    data = _bn_data(args)
    genera = args.genera if args.genera is not None else default_genera(data.g)
    try:
        verdict = chain_dimension_check(data, genera)
        found = enumerate_refined_chains(data, genera)
    except (GenusMismatch, ValueError) as e:
        raise UsageError(str(e))
    out = verdict.to_dict()
    out["listed"] = [c.to_dict() for c in found[: max(args.limit, 0)]]
    return out, EXIT_OK if verdict.ok else EXIT_VIOLATION


def cmd_verify(args) -> tuple[dict, int]:
    try:
        cfg = SweepConfig(
            d_max=args.d_max,
            r_max=args.r_max,
            field=args.field.cli_name(),
            instances=args.instances,
            seed=args.seed,
            jobs=args.jobs,
            out=args.out,
        )
    except ValueError as e:
        raise UsageError(str(e))
    rep = run_verify(cfg)
    return rep.to_dict(), EXIT_OK if rep.ok else EXIT_VIOLATION


def cmd_example_0202(args) -> tuple[dict, int]:
    rep = run_example_0202(args.field, seed=args.seed)
    return rep.to_dict(), EXIT_OK if rep.ok else EXIT_VIOLATION


COMMANDS = {
    "rank": cmd_rank,
    "flagpos": cmd_flagpos,
    "tangent": cmd_tangent,
    "rho": cmd_rho,
    "rhohat": cmd_rhohat,
    "fiber": cmd_fiber,
    "chains": cmd_chains,
    "verify": cmd_verify,
    "example-0202": cmd_example_0202,
}


def render_text(obj, prefix: str = "") -> list[str]:
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            lines += render_text(obj[k], f"{prefix}.{k}" if prefix else str(k))
        return lines
    if isinstance(obj, list) and any(isinstance(x, (dict, list)) for x in obj):
        lines = []
        for i, x in enumerate(obj):
            lines += render_text(x, f"{prefix}[{i}]")
        return lines
    return [f"{prefix}: {json.dumps(obj)}"]


def _resolve_seed(args) -> int:
    seed = getattr(args, "seed", None)
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"${SEED_ENV} must be an integer, got {env!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("field", Field(DEFAULT_PRIME)), ("jobs", None), ("out", None), ("format", "json")):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        args.seed = _resolve_seed(args)
        if args.seed < 0:
            raise UsageError("--seed must be nonnegative")
        if args.jobs is not None and args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        report, code = COMMANDS[args.command](args)
    except UsageError as e:
        print(f"schubtan {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    if args.format == "json":
        text = json.dumps(report, sort_keys=True, indent=2)
    else:
        text = "\n".join(render_text(report))
    if args.out:
        try:
            Path(args.out).write_text(text + "\n")
        except OSError as e:
            print(f"schubtan: cannot write {args.out}: {e.strerror}", file=sys.stderr)
            return EXIT_USAGE
    else:
        print(text)
    return code
