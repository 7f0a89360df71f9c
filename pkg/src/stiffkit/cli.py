"""Command-line surface: construct, verify, transform, and report.

Machine output is JSON on stdout; a short aligned summary goes to stderr.
Exit codes: 0 all checks passed, 1 a mathematical check failed, 2 usage or
IO error.  Code files use the save_code/load_code JSON schema, so stdout
from `construct` (without -o) can be piped straight into another command.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .codes import (
    LatticeCode,
    LatticePoint,
    cross_polytope,
    cube,
    demicube,
    e8_roots,
    load_code,
    ngon,
    polytope_2_41,
    save_code,
)
from .config import SizeCapExceeded
from .design import FLOAT_DESIGN_TOL, index_set, spectrum
from .exact import Surd
from .potential import Kernel, SingularEvaluation, verify_universal_minimum
from .stiffness import NodesRequired, NotInGeneralPosition, certify_stiff
from .suite import run_suite
from .transforms import facet_derive, glue, rotated_cubes, symmetrize


class UsageError(Exception):
    """Malformed invocation detected after argparse (bad token grammar etc.)."""


CONSTRUCTORS = {
    "cross-polytope": cross_polytope,
    "cube": cube,
    "demicube": demicube,
    "ngon": ngon,
    "e8-roots": e8_roots,
    "2-41": polytope_2_41,
    "polytope-2-41": polytope_2_41,
}


def _err(msg: str) -> None:
    print(f"stiffkit: {msg}", file=sys.stderr)


def _summary(rows: Sequence[tuple[str, object]]) -> None:
    if not rows:
        return
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"  {k:<{width}}  {v}", file=sys.stderr)


def _emit(command: str, report, *, seed: Optional[int] = None,
          threads: Optional[int] = None, tolerances: Optional[dict] = None) -> None:
    """Print a report envelope carrying version, seed, and tolerances."""
    out: dict = {"tool": "stiffkit", "version": __version__, "command": command}
    if seed is not None:
        out["seed"] = seed
    if threads is not None:
        out["threads"] = threads
    if tolerances:
        out["tolerances"] = tolerances
    out["report"] = report
    print(json.dumps(out, indent=2, default=str))


def _parse_scalar(token: str):
    """One exact-or-float scalar: int, p/q, sqrt(p/q), -sqrt(p/q), or float."""
    tok = token.strip()
    neg = tok.startswith("-")
    body = tok[1:] if neg else tok
    if body.startswith("sqrt(") and body.endswith(")"):
        inner = body[5:-1]
        try:
            val = Surd.sqrt_of(Fraction(inner))
        except (ValueError, ZeroDivisionError) as e:
            raise UsageError(f"bad sqrt argument {inner!r}: {e}") from None
        return -val if neg else val
    try:
        return Fraction(tok)
    except ValueError:
        pass
    try:
        return float(tok)
    except ValueError:
        raise UsageError(f"cannot parse scalar {token!r}") from None


def _parse_nodes(text: Optional[str]):
    if text is None:
        return None
    return tuple(_parse_scalar(t) for t in text.split(","))


def _parse_point(text: str, code):
    """Comma-separated coordinates; all-integer input on an integer code
    becomes an exact lattice point."""
    parts = [t.strip() for t in text.split(",")]
    try:
        ints = [int(t) for t in parts]
    except ValueError:
        ints = None
    if ints is not None and isinstance(code, LatticeCode):
        ns = sum(v * v for v in ints)
        if ns == 0:
            raise UsageError("point must be nonzero")
        return LatticePoint(tuple(ints), ns)
    try:
        return np.array([float(t) for t in parts])
    except ValueError:
        raise UsageError(f"cannot parse point {text!r}") from None


def _parse_kernels(text: str) -> list[Kernel]:
    try:
        return [Kernel.parse(t.strip()) for t in text.split(",")]
    except ValueError as e:
        raise UsageError(str(e)) from None


def _load(path: str):
    try:
        return load_code(path)
    except (KeyError, TypeError) as e:
        raise UsageError(f"bad code file {path}: {e}") from None


def _write_code(code, out: Optional[str], command: str,
                extra: Optional[dict] = None, *,
                seed: Optional[int] = None) -> None:
    """Either save to `out` and emit a confirmation report, or print the
    raw code schema so the output can be piped into another command."""
    if out:
        save_code(code, out)
        report = {"saved": out, "name": code.name, "size": code.size,
                  "ambient_dim": code.ambient_dim}
        if extra:
            report.update(extra)
        _emit(command, report, seed=seed)
    else:
        if extra:
            _emit(command, {"code": code.to_json_dict(), **extra}, seed=seed)
        else:
            print(json.dumps(code.to_json_dict(), indent=2, default=str))


# ---------------------------------------------------------------- commands


def cmd_construct(args) -> int:
    key = args.name.lower().replace("_", "-")
    ctor = CONSTRUCTORS.get(key)
    if ctor is None:
        raise UsageError(
            f"unknown constructor {args.name!r}; choose from "
            + ", ".join(sorted(set(CONSTRUCTORS) - {"polytope-2-41"})))
    try:
        params = [int(p) for p in args.params]
    except ValueError:
        raise UsageError("constructor parameters must be integers") from None
    try:
        code = ctor(*params)
    except TypeError as e:
        raise UsageError(f"bad parameters for {key}: {e}") from None
    _summary([("code", code.name), ("points", code.size),
              ("ambient dim", code.ambient_dim)])
    _write_code(code, args.out, "construct")
    return 0


def cmd_check_design(args) -> int:
    code = _load(args.file)
    if args.arithmetic == "exact" and not isinstance(code, LatticeCode):
        raise UsageError("--exact needs an integer code file")
    if args.arithmetic == "float" and isinstance(code, LatticeCode):
        from .codes import FloatCode
        code = FloatCode(code.name, code.ambient_dim, code.unit_array(),
                         tolerance=1e-9)
    rep = index_set(code, args.nmax)
    _summary([("code", rep.code_name), ("strength", rep.strength),
              ("index set", sorted(rep.index_set)),
              ("arithmetic", "exact" if rep.exact else "float")])
    _emit("check-design", rep.to_json_dict(),
          tolerances=None if rep.exact else {"pair_sum_rel_tol": FLOAT_DESIGN_TOL})
    return 0


def cmd_dual(args) -> int:
    code = _load(args.file)
    nodes = _parse_nodes(args.nodes)
    cert = certify_stiff(code, args.m, nodes=nodes, threads=args.threads)
    dual = cert.dual
    rows = [("code", code.name), ("m", args.m),
            ("design strength", cert.design_strength),
            ("stiff", cert.stiff)]
    if dual is not None:
        rows += [("dual mode", dual.mode), ("dual points", dual.count)]
    reason = None
    if dual is None:
        reason = (f"dual not enumerable: {code.name} is not a "
                  f"{2 * args.m - 1}-design and no --nodes were supplied")
        rows.append(("dual", reason))
    _summary(rows)
    report: dict = {"dual": None if dual is None else dual.to_json_dict(),
                    "certificate": cert.to_json_dict()}
    if reason:
        report["reason"] = reason
    _emit("dual", report, threads=args.threads,
          tolerances={"float_residual": 1e-9} if dual is not None
          and dual.mode == "float" else None)
    return 0 if dual is not None else 1


def cmd_verify_min(args) -> int:
    code = _load(args.file)
    dual = _load(args.dual).unit_array()
    kernels = _parse_kernels(args.kernels)
    reps = verify_universal_minimum(code, args.m, dual, kernels,
                                    restarts=args.restarts, seed=args.seed,
                                    argmin_tol=args.argmin_tol)
    for r in reps:
        _summary([("kernel", r.kernel), ("passed", r.passed),
                  ("global min", f"{r.global_min_value:.12g}"),
                  ("dual value", f"{r.dual_value:.12g}"),
                  ("gap", f"{r.gap:.3e}")])
        print(file=sys.stderr)
    _emit("verify-min", [r.to_json_dict() for r in reps], seed=args.seed,
          tolerances={"dual_spread_rel": 1e-9, "gap_floor": -1e-8,
                      "argmin_tol": args.argmin_tol})
    return 0 if all(r.passed for r in reps) else 1


def cmd_spectrum(args) -> int:
    code = _load(args.file)
    text = args.probe.strip()
    if "," not in text:
        try:
            idx = int(text)
        except ValueError:
            raise UsageError("--probe takes an index or comma coordinates") from None
        if not 0 <= idx < code.size:
            raise UsageError(f"probe index {idx} out of range 0..{code.size - 1}")
        if isinstance(code, LatticeCode):
            probe = code.lattice_points()[idx]
        else:
            probe = code.points[idx]
    else:
        probe = _parse_point(text, code)
    rep = spectrum(probe, code, tol=args.tol)
    _summary([("probe", rep.probe), ("distinct values", rep.distinct_count),
              ("arithmetic", "exact" if rep.exact else "float")])
    _emit("spectrum", rep.to_json_dict(),
          tolerances=None if rep.exact else {"merge_tol": args.tol})
    return 0


def cmd_symmetrize(args) -> int:
    code = _load(args.file)
    sym = symmetrize(code)
    _summary([("input", f"{code.name} ({code.size} points)"),
              ("output", f"{sym.name} ({sym.size} points)")])
    _write_code(sym, args.out, "symmetrize")
    return 0


def cmd_facet(args) -> int:
    code = _load(args.file)
    x = _parse_point(args.point, code)
    t = _parse_scalar(args.t)
    derived = facet_derive(code, x, t)
    _summary([("input", f"{code.name} ({code.size} points)"),
              ("derived", f"{derived.size} points in dim {derived.ambient_dim}"),
              ("arithmetic", "exact" if isinstance(derived, LatticeCode) else "float")])
    _write_code(derived, args.out, "facet")
    return 0


def cmd_glue(args) -> int:
    c1, c2 = _load(args.file1), _load(args.file2)
    glued, cert = glue(c1, c2, args.m, seed=args.seed)
    _summary([("inputs", f"{c1.name} + {c2.name}"),
              ("output points", glued.size),
              ("design strength", cert.design_strength),
              ("stiff", cert.stiff),
              ("dual points", cert.dual.count if cert.dual else 0)])
    _write_code(glued, args.out, "glue",
                extra={"certificate": cert.to_json_dict()}, seed=args.seed)
    return 0 if cert.stiff else 1


def cmd_rotated_cubes(args) -> int:
    code, cert = rotated_cubes(args.n, seed=args.seed)
    _summary([("copies", args.n), ("points", code.size),
              ("design strength", cert.design_strength),
              ("stiff", cert.stiff),
              ("dual points", cert.dual.count if cert.dual else 0)])
    _write_code(code, args.out, "rotated-cubes",
                extra={"certificate": cert.to_json_dict()}, seed=args.seed)
    return 0 if cert.stiff else 1


def cmd_suite(args) -> int:
    numbers = None
    if args.only:
        try:
            numbers = [int(t) for t in args.only.split(",")]
        except ValueError:
            raise UsageError("--only takes comma-separated criterion numbers") from None
    t0 = time.time()
    results = []
    chosen = sorted(set(numbers)) if numbers else list(range(1, 13))
    for n in chosen:
        res = run_suite([n], threads=args.threads)[0]
        results.append(res)
        mark = "PASS" if res.passed else "FAIL"
        print(f"  [{res.number:2d}] {mark}  {res.elapsed:7.1f}s  {res.name}",
              file=sys.stderr)
        print(f"        {res.details}", file=sys.stderr)
    n_pass = sum(r.passed for r in results)
    print(f"  {n_pass}/{len(results)} criteria passed "
          f"in {time.time() - t0:.1f}s", file=sys.stderr)
    _emit("suite", [r.to_json_dict() for r in results], threads=args.threads)
    return 0 if n_pass == len(results) else 1


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stiffkit",
        description="Verification workbench for spherical designs, "
                    "stiff configurations, and potential minima.")
    parser.add_argument("--version", action="version",
                        version=f"stiffkit {__version__}")
    parser.add_argument("--threads", type=int, default=os.cpu_count(),
                        help="parallelism for enumeration (default: cores)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a named code")
    p.add_argument("name", help="cross-polytope | cube | demicube | ngon | "
                                "e8-roots | 2-41")
    p.add_argument("params", nargs="*", help="integer parameters (dimension / n)")
    p.add_argument("-o", "--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("check-design", help="index set and design strength")
    p.add_argument("file")
    p.add_argument("--nmax", type=int, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", dest="arithmetic", action="store_const",
                   const="exact", default="auto")
    g.add_argument("--float", dest="arithmetic", action="store_const",
                   const="float")
    p.set_defaults(func=cmd_check_design)

    p = sub.add_parser("dual", help="dual configuration and stiffness certificate")
    p.add_argument("file")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--nodes",
                   help="comma list: int, p/q, sqrt(p/q), -sqrt(p/q); "
                        "use --nodes=... when the first value is negative")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("verify-min", help="multistart universal-minimum check")
    p.add_argument("file")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--dual", required=True, help="code file with the candidate minimizers")
    p.add_argument("--kernels", required=True,
                   help="comma list, e.g. riesz:2,gauss:1,log")
    p.add_argument("--restarts", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--argmin-tol", type=float, default=1e-5)
    p.set_defaults(func=cmd_verify_min)

    p = sub.add_parser("spectrum", help="dot products of a probe against a code")
    p.add_argument("file")
    p.add_argument("--probe", required=True,
                   help="point index, or comma-separated coordinates")
    p.add_argument("--tol", type=float, default=1e-9,
                   help="float merge tolerance")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("symmetrize", help="close a code under negation")
    p.add_argument("file")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_symmetrize)

    p = sub.add_parser("facet", help="derived code from a cross-section")
    p.add_argument("file")
    p.add_argument("--point", required=True, help="comma coordinates of the pole")
    p.add_argument("--t", required=True,
                   help="dot value of the slice: int, p/q, sqrt(p/q), or float")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_facet)

    p = sub.add_parser("glue", help="merge two stiff codes across a reflection")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_glue)

    p = sub.add_parser("rotated-cubes", help="union of n rotated cubes")
    p.add_argument("n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_rotated_cubes)

    p = sub.add_parser("suite", help="run the acceptance battery")
    p.add_argument("--paper", action="store_true", required=True,
                   help="run the full published-results battery")
    p.add_argument("--only", help="comma-separated criterion numbers (subset)")
    p.set_defaults(func=cmd_suite)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        _err(str(e))
        return 2
    except SizeCapExceeded as e:
        _err(str(e))
        return 2
    except (OSError, json.JSONDecodeError) as e:
        _err(str(e))
        return 2
    except (NodesRequired, NotInGeneralPosition, SingularEvaluation,
            ValueError, RuntimeError) as e:
        _err(f"check failed: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
