"""Command-line entry point: ``polarank <subcommand> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 budget
exhausted.  Reports go to standard output as JSON (default) or TSV.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import os
import sys
from pathlib import Path
from typing import IO, Sequence

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class MatFormatError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


# -- the ``mat`` format ------------------------------------------------------------

def serialize_matrix(M, dest: IO[str] | str | os.PathLike) -> None:
    """Write ``mat R C`` followed by R rows of C integers."""
    rows = [[int(x) for x in r] for r in (M.tolist() if hasattr(M, "tolist") else M)]
    cols = len(rows[0]) if rows else 0
    if any(len(r) != cols for r in rows):
        raise ValueError("ragged matrix")
    text = f"mat {len(rows)} {cols}\n" + "".join(" ".join(map(str, r)) + "\n" for r in rows)
    if isinstance(dest, (str, os.PathLike)):
        Path(dest).write_text(text)
    else:
        dest.write(text)


def parse_matrix(source: IO[str] | str | os.PathLike):
    """Read a ``mat`` file into an int64 array (object dtype if entries overflow)."""
    import numpy as np

    if isinstance(source, (str, os.PathLike)):
        text = Path(source).read_text()
    else:
        text = source.read()
    rows: list[list[int]] = []
    header = None
    last = 0
    for no, raw in enumerate(text.splitlines(), 1):
        last = no
        s = raw.split("#", 1)[0].strip()
        if not s:
            continue
        if header is None:
            parts = s.split()
            if len(parts) != 3 or parts[0] != "mat" or not (parts[1].isdigit() and parts[2].isdigit()):
                raise MatFormatError(no, f"expected 'mat R C', got {s!r}")
            header = (int(parts[1]), int(parts[2]))
            continue
        try:
            row = [int(x) for x in s.split()]
        except ValueError:
            raise MatFormatError(no, f"non-integer entry in {s!r}") from None
        if len(row) != header[1]:
            raise MatFormatError(no, f"row has {len(row)} entries, expected {header[1]}")
        if len(rows) == header[0]:
            raise MatFormatError(no, f"more than {header[0]} rows")
        rows.append(row)
    if header is None:
        raise MatFormatError(max(last, 1), "missing 'mat R C' header")
    if len(rows) != header[0]:
        raise MatFormatError(last, f"found {len(rows)} rows, header announces {header[0]}")
    try:
        return np.array(rows, dtype=np.int64).reshape(header)
    except OverflowError:
        return np.array(rows, dtype=object).reshape(header)


def file_digest(path: str | os.PathLike) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _text_digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


# -- output -----------------------------------------------------------------------

def emit(report: dict, fmt: str, out: IO[str]) -> None:
    if fmt == "json":
        out.write(json.dumps(report, sort_keys=False) + "\n")
        return
    flat = _flatten(report)
    out.write("\t".join(flat) + "\n")
    out.write("\t".join(json.dumps(v) if not isinstance(v, str) else v for v in flat.values()) + "\n")


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        else:
            out[key] = v
    return out


# -- subcommands --------------------------------------------------------------------

def cmd_build(args) -> tuple[dict, int]:
    from . import hermitian, incidence

    if args.what == "hermitian":
        if args.d is None or args.q is None:
            raise UsageError("build hermitian needs --d and --q")
        G, A = hermitian.build(args.d, args.q, cap=args.cap)
        params = {"d": args.d, "q": args.q}
    else:
        geo = incidence.load_geometry(args.input) if args.input else incidence.load_o2()
        A = incidence.distance_relation_matrices(geo, 8)
        params = {"input": str(args.input or incidence.data_path("o2.ig")), "input_sha256": geo.digest()}
    files = []
    for i, M in enumerate(A):
        path = Path(f"{args.out}_A{i}.mat")
        buf = io.StringIO()
        serialize_matrix(M, buf)
        path.write_text(buf.getvalue())
        files.append({"path": str(path), "sha256": _text_digest(buf.getvalue())})
    return {"command": f"build {args.what}", "params": params, "size": int(A[0].shape[0]), "files": files}, EXIT_OK


def cmd_verify(args) -> tuple[dict, int]:
    from . import incidence

    path = args.input or incidence.data_path("o2.ig")
    geo = incidence.load_geometry(path)
    cert = incidence.verify_generalized_polygon(geo, args.n, args.s, args.r)
    report = {
        "command": "verify octagon",
        "params": {"n": args.n, "s": args.s, "r": args.r, "input": str(path), "input_sha256": file_digest(path)},
        "points": geo.n_points, "lines": geo.n_lines,
        "ok": cert.ok, "checks": cert.checks, "diameter": cert.diameter, "witness": cert.witness,
    }
    return report, EXIT_OK if cert.ok else EXIT_FAIL


def cmd_rank(args) -> tuple[dict, int]:
    from . import modrank

    if (args.mod is None) == (not args.rational):
        raise UsageError("give exactly one of --mod P or --rational")
    M = parse_matrix(args.input)
    if args.rational:
        rep = modrank.rank_rational(M)
    else:
        rep = modrank.rank_mod_p(M, args.mod)
    params = {"modulus": rep.modulus, "input": str(args.input), "input_sha256": file_digest(args.input)}
    return {"command": "rank", "params": params, "rank": rep.rank, "backend": rep.backend}, EXIT_OK


def cmd_scheme(args) -> tuple[dict, int]:
    from . import scheme

    A = [parse_matrix(p) for p in args.input]
    S = scheme.build_scheme(A)
    report = {
        "command": "scheme",
        "params": {"inputs": [{"path": str(p), "sha256": file_digest(p)} for p in args.input]},
        "n": S.n, "classes": S.d,
        "intersection_numbers": S.p.tolist(),
        "eigenvalues": S.eigenvalues,
        "multiplicities": S.f,
        "P": [[str(x) for x in row] for row in S.P],
        "Q": [[str(x) for x in row] for row in S.Q],
    }
    code = EXIT_OK
    if args.congruence:
        rep = scheme.idempotent_congruence_check(S, args.congruence, S.d)
        report["congruence"] = {"p": args.congruence, "coefficients": list(rep.coefficients),
                                "integral": rep.integral, "congruent": rep.congruent, "f_d": rep.rank_bound}
        if not (rep.integral and rep.congruent):
            code = EXIT_FAIL
    return report, code


def cmd_bound(args) -> tuple[dict, int]:
    from . import bounds

    fam = args.family
    need = {"thm1": ("p", "t", "d"), "thm2": ("t",), "lemma1": ("rank", "p"), "lift": ("rank", "t"),
            "formula": ("name", "p"), "baseline": (), "crossover": ()}[fam]
    missing = [k for k in need if getattr(args, k) is None]
    if missing:
        raise UsageError(f"bound {fam} needs " + ", ".join(f"--{k}" for k in missing))
    if fam == "thm1":
        rep = bounds.theorem1_bound(args.p, args.t, args.d)
        return {"command": "bound thm1", "params": rep.params, "family": rep.family, "bound": rep.value}, EXIT_OK
    if fam == "thm2":
        rep = bounds.theorem2_bound(args.t)
        return {"command": "bound thm2", "params": rep.params, "bound": rep.value}, EXIT_OK
    if fam == "lemma1":
        return {"command": "bound lemma1", "params": {"rank": args.rank, "p": args.p},
                "bound": bounds.clique_bound_from_rank(args.rank, args.p)}, EXIT_OK
    if fam == "lift":
        return {"command": "bound lift", "params": {"rank": args.rank, "t": args.t},
                "rank": bounds.steinberg_lift(args.rank, args.t)}, EXIT_OK
    if fam == "formula":
        return {"command": "bound formula", "params": {"name": args.name, "p": args.p},
                "rank": bounds.published_rank_formula(args.name, args.p)}, EXIT_OK
    if fam == "baseline":
        if (args.q is None or args.d is None) and (args.s is None or args.r is None):
            raise UsageError("bound baseline needs --q and --d, or --s and --r")
        reps = bounds.baseline_bounds(args.q, args.d, args.s, args.r)
        return {"command": "bound baseline", "params": {k: getattr(args, k) for k in ("q", "d", "s", "r")},
                "bounds": {r.family: r.value for r in reps}}, EXIT_OK
    return {"command": "bound crossover", "params": {}, "table": bounds.crossover_table()}, EXIT_OK


def cmd_clique(args) -> tuple[dict, int]:
    from . import clique

    G = clique.Graph(parse_matrix(args.input))
    params = {"input": str(args.input), "input_sha256": file_digest(args.input), "seed": args.seed,
              "restarts": args.restarts, "exact": args.exact, "fix_first": args.fix_first,
              "ub": args.ub, "budget": args.budget}
    lower = clique.greedy_lower_bound(G, restarts=args.restarts, seed=args.seed,
                                      target=args.ub if args.ub else None)
    res = lower
    if args.exact:
        res = clique.max_clique_exact(G, args.ub, fix_first_vertex=args.fix_first, incumbent=lower.witness,
                                      time_budget=args.budget)
    report = {"command": "clique", "params": params, **res.as_dict()}
    report.pop("elapsed", None)
    if args.exact and not res.optimal:
        return report, EXIT_BUDGET
    return report, EXIT_OK


def cmd_repro(args) -> tuple[dict, int]:
    from . import repro

    ids = args.only or None
    outs = repro.run_all(ids, slow=args.slow, seed=args.seed)
    rows = [o.as_dict(timings=args.timings) for o in outs]
    ok = all(o.passed or o.skipped for o in outs)
    return {"command": "repro", "params": {"seed": args.seed, "slow": args.slow}, "criteria": rows,
            "all_passed": ok}, EXIT_OK if ok else EXIT_FAIL


# -- argument parsing ---------------------------------------------------------------

def _positive(x: str) -> float:
    v = float(x)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "tsv"), default="json")
    common.add_argument("--seed", type=int, default=3)
    common.add_argument("--threads", type=int, default=None, help="BLAS threads (default: all cores)")

    ap = argparse.ArgumentParser(prog="polarank", description="p-rank bounds for partial spreads and ovoids")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common], help="write relation matrices as mat files")
    b.add_argument("what", choices=("hermitian", "octagon"))
    b.add_argument("--d", type=int)
    b.add_argument("--q", type=int)
    b.add_argument("--in", dest="input", type=Path, help="ig file (octagon; default: bundled O(2))")
    b.add_argument("--out", required=True, help="output prefix; writes PREFIX_A<i>.mat")
    b.add_argument("--cap", type=int, default=10_000)
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", parents=[common], help="check generalized polygon axioms")
    v.add_argument("what", choices=("octagon", "polygon"))
    v.add_argument("--in", dest="input", type=Path)
    v.add_argument("--n", type=int, default=8)
    v.add_argument("--s", type=int, default=2)
    v.add_argument("--r", type=int, default=4)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("rank", parents=[common], help="rank of a mat file mod p or over Q")
    r.add_argument("--mod", type=int)
    r.add_argument("--rational", action="store_true")
    r.add_argument("--in", dest="input", type=Path, required=True)
    r.set_defaults(func=cmd_rank)

    s = sub.add_parser("scheme", parents=[common], help="scheme axioms, eigenmatrices, congruence")
    s.add_argument("--in", dest="input", type=Path, nargs="+", required=True, help="A_0 ... A_d in order")
    s.add_argument("--congruence", type=int, metavar="P", help="also check A_d = n P^(d-1) E_d mod P")
    s.set_defaults(func=cmd_scheme)

    bd = sub.add_parser("bound", parents=[common], help="evaluate a bound or rank formula")
    bd.add_argument("family", choices=("thm1", "thm2", "lemma1", "lift", "formula", "baseline", "crossover"))
    for k in ("p", "t", "d", "q", "s", "r", "rank"):
        bd.add_argument(f"--{k}", type=int)
    bd.add_argument("--name", choices=("h3_lines", "h5_generators", "triality_hexagon", "h5_multiplicity_bound"))
    bd.set_defaults(func=cmd_bound)

    c = sub.add_parser("clique", parents=[common], help="maximum clique of a mat adjacency matrix")
    c.add_argument("--in", dest="input", type=Path, required=True)
    c.add_argument("--exact", action="store_true")
    c.add_argument("--fix-first", action="store_true")
    c.add_argument("--ub", type=int)
    c.add_argument("--budget", type=_positive, help="seconds for the exact search")
    c.add_argument("--restarts", type=int, default=1000)
    c.set_defaults(func=cmd_clique)

    rp = sub.add_parser("repro", parents=[common], help="recompute the full acceptance table")
    rp.add_argument("--slow", action="store_true", help="include the long-running criteria")
    rp.add_argument("--only", type=int, nargs="+", metavar="N")
    rp.add_argument("--timings", action="store_true", help="add wall-clock seconds (breaks byte-identical reruns)")
    rp.set_defaults(func=cmd_repro)
    return ap


def run(argv: Sequence[str] | None = None, out: IO[str] | None = None, err: IO[str] | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.threads:
        os.environ.setdefault("OMP_NUM_THREADS", str(args.threads))
        os.environ.setdefault("OPENBLAS_NUM_THREADS", str(args.threads))
    from .incidence import GeometryError
    from .scheme import SchemeError

    try:
        report, code = args.func(args)
    except (SchemeError, GeometryError, AssertionError) as e:
        err.write(f"polarank: verification failed: {e}\n")
        return EXIT_FAIL
    except (UsageError, ValueError, ArithmeticError, OSError) as e:
        err.write(f"polarank: error: {e}\n")
        return EXIT_USAGE
    emit(report, args.format, out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
