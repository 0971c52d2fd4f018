"""Command-line front end.

Usage::

    bfun eval --function rbf --nu 0.5 --z 1
    bfun eval --function b --n 1 --l 0 --m 0 --alpha 1 --point 0,0,1
    bfun eval --function solid --l 2 --m 1 --grid 0:1:3,0:0:1,1:1:1
    bfun expand --basis sto --n 3 --l 0 --alpha 1
    bfun addition --n 2 --l 1 --m 0 --alpha 1 --r-large 0,0,2 --r-small 0.3,0.1,0 --lmax 20
    bfun --format csv addition ... --table 0,2,4,8
    bfun selfcheck --quick

Output is JSON (default) or CSV; every float carries 17 significant digits
so it re-parses to the identical double. Exit status: 0 success, 1 usage
error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .angular import GauntKey, default_cache, gaunt, sphere_grid
from .bfunctions import BIndex, b_eval, expansion_eval
from .expansions import KINDS, RadialBasisSpec, eval_direct, to_b
from .special_core import (
    ConvergenceError,
    DomainError,
    cartesian_to_spherical,
    reduced_bessel,
    solid_harmonic,
    spherical_harmonic,
    spherical_harmonics_all,
)
from .translation import TruncationMode, TruncationSpec, b_addition, exp_dot_legendre, exp_dot_spherical

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2
CACHE_FILE = "gaunt_v1.bfgt"
POISON_KEY = GauntKey(1, 0, 1, 0, 2, 0)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# serialization


def fmt_float(x: float) -> str:
    text = format(float(x), ".17g")
    if text.lstrip("-").isdigit():
        text += ".0"
    return text


def _json_value(v) -> str:
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        if not math.isfinite(v):
            return json.dumps(str(v))
        return fmt_float(v)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_json_value(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialize {type(v).__name__}")


def _csv_cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return fmt_float(v)
    if isinstance(v, (list, tuple)):
        return " ".join(_csv_cell(x) for x in v)
    if v is None:
        return ""
    return str(v)


def render(command: str, params: dict, records: list, fmt: str) -> str:
    if fmt == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": command, "params": params, "records": records}
        return _json_value(doc) + "\n"
    columns: list = ["schema_version", "command"]
    for rec in records:
        for k in rec:
            if k not in columns:
                columns.append(k)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for rec in records:
        row = {"schema_version": SCHEMA_VERSION, "command": command, **rec}
        writer.writerow([_csv_cell(row.get(c)) for c in columns])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# argument helpers


def parse_point(text: str) -> np.ndarray:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise UsageError(f"malformed point {text!r}; expected x,y,z") from None
    if len(parts) != 3 or not all(math.isfinite(p) for p in parts):
        raise UsageError(f"malformed point {text!r}; expected three finite numbers x,y,z")
    return np.array(parts)


def parse_grid(text: str) -> np.ndarray:
    """``x0:x1:nx,y0:y1:ny,z0:z1:nz`` -> points in x-major order."""
    axes = []
    for part in text.split(","):
        bits = part.split(":")
        try:
            lo, hi, cnt = float(bits[0]), float(bits[1]), int(bits[2])
        except (ValueError, IndexError):
            raise UsageError(f"malformed grid axis {part!r}; expected lo:hi:count") from None
        if cnt < 1 or len(bits) != 3:
            raise UsageError(f"malformed grid axis {part!r}")
        axes.append(np.linspace(lo, hi, cnt))
    if len(axes) != 3:
        raise UsageError("grid needs three axes")
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def parse_int_list(text: str) -> list:
    try:
        out = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"malformed integer list {text!r}") from None
    if any(v < 0 for v in out):
        raise UsageError("cutoffs must be non-negative")
    return out


def thread_count() -> int:
    raw = os.environ.get("BFUN_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise UsageError(f"BFUN_THREADS must be a positive integer, got {raw!r}")
    return n


def _require(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"missing required option(s): {', '.join(missing)}")


def _complex_fields(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


# ---------------------------------------------------------------------------
# eval


def _point_function(args):
    f = args.function
    if f == "b":
        _require(args, "n", "l", "m")
        idx = BIndex(args.n, args.l, args.m, args.alpha if args.alpha is not None else 1.0)
        return lambda p: b_eval(idx, p), {"n": idx.n, "l": idx.ell, "m": idx.m, "alpha": idx.alpha}
    if f in ("ylm", "solid"):
        _require(args, "l", "m")
        ell, m = args.l, args.m
        if f == "solid":
            return lambda p: solid_harmonic(ell, m, p), {"l": ell, "m": m}

        def ylm(p):
            r, th, ph = cartesian_to_spherical(p)
            if r == 0:
                raise DomainError("spherical harmonic needs a non-zero direction")
            return spherical_harmonic(ell, m, th, ph)
        return ylm, {"l": ell, "m": m}
    kind = "slater" if f == "sto" else f
    _require(args, "n", "l")
    m = args.m if args.m is not None else 0
    scale = args.Z if kind == "hydrogenic" else args.alpha
    if scale is None:
        raise UsageError("--Z is required for hydrogenic functions" if kind == "hydrogenic" else "--alpha is required")
    spec = RadialBasisSpec(kind, args.n, args.l, m, scale)
    return lambda p: eval_direct(spec, p), {"n": spec.n, "l": spec.ell, "m": spec.m, "scale": spec.scale}


def cmd_eval(args) -> tuple:
    if args.function == "rbf":
        _require(args, "nu", "z")
        val = float(reduced_bessel(args.nu, args.z))
        params = {"function": "rbf", "nu": args.nu}
        return params, [{"z": args.z, "re": val, "im": 0.0}]
    if (args.point is None) == (args.grid is None):
        raise UsageError("give exactly one of --point or --grid")
    fn, params = _point_function(args)
    params = {"function": args.function, **params}
    points = [parse_point(args.point)] if args.point is not None else list(parse_grid(args.grid))

    def one(p):
        return {"point": [float(c) for c in p], **_complex_fields(fn(p))}

    workers = thread_count()
    if workers > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(one, points))
    else:
        records = [one(p) for p in points]
    return params, records


# ---------------------------------------------------------------------------
# expand


def cmd_expand(args) -> tuple:
    _require(args, "n", "l")
    kind = "slater" if args.basis == "sto" else args.basis
    scale = args.Z if kind == "hydrogenic" else args.alpha
    if scale is None:
        raise UsageError("--Z is required for hydrogenic functions" if kind == "hydrogenic" else "--alpha is required")
    spec = RadialBasisSpec(kind, args.n, args.l, args.m if args.m is not None else 0, scale)
    e = to_b(spec)
    params = {"basis": kind, "n": spec.n, "l": spec.ell, "m": spec.m, "scale": spec.scale}
    records = [
        {"coeff_re": c.real, "coeff_im": c.imag, "n": n, "l": ell, "m": m, "alpha": e.alpha}
        for c, n, ell, m in e.terms
    ]
    return params, records


# ---------------------------------------------------------------------------
# addition


def cmd_addition(args) -> tuple:
    _require(args, "n", "l", "r_large", "r_small")
    idx = BIndex(args.n, args.l, args.m if args.m is not None else 0, args.alpha if args.alpha is not None else 1.0)
    rl = parse_point(args.r_large)
    rs = parse_point(args.r_small)
    if not np.linalg.norm(rs) < np.linalg.norm(rl):
        raise UsageError(
            "two-range condition violated: the addition theorem needs |r_small| < |r_large| strictly "
            f"(|r_small| = {np.linalg.norm(rs):.6g}, |r_large| = {np.linalg.norm(rl):.6g})"
        )
    table = parse_int_list(args.table) if args.table else None
    lmax = args.lmax
    if table:
        lmax = max(lmax, max(table))
    mode = TruncationMode.ADAPTIVE if args.adaptive else TruncationMode.FIXED_ORDER
    trunc = TruncationSpec(ell1_max=lmax, rel_tol=args.tol, mode=mode)
    value, rep = b_addition(idx, rs, rl, trunc)
    params = {
        "n": idx.n, "l": idx.ell, "m": idx.m, "alpha": idx.alpha,
        "r_large": [float(c) for c in rl], "r_small": [float(c) for c in rs],
        "lmax": lmax, "mode": mode.value, "tol": args.tol,
    }
    cutoffs = table if table else range(len(rep.partial_values))
    records = []
    for c in cutoffs:
        if c >= len(rep.partial_values):
            continue
        pv = rep.partial_values[c]
        records.append({
            "kind": "shell", "cutoff": c, "re": pv.real, "im": pv.imag,
            "ref_re": rep.reference.real, "ref_im": rep.reference.imag, "rel_error": rep.errors[c],
        })
    final_cut = len(rep.partial_values) - 1
    records.append({
        "kind": "result", "cutoff": final_cut, "re": value.real, "im": value.imag,
        "ref_re": rep.reference.real, "ref_im": rep.reference.imag, "rel_error": rep.errors[-1],
        "converged_at": rep.converged_at, "slow_convergence": rep.slow_convergence,
    })
    return params, records, rep


# ---------------------------------------------------------------------------
# selfcheck


def _check_gaunt(quick: bool) -> str | None:
    lmax = 3 if quick else 5
    th, ph, w = sphere_grid(32, 64)
    y = spherical_harmonics_all(lmax, th, ph)  # (nt, np, l, m)
    for l1 in range(lmax + 1):
        for m1 in range(-l1, l1 + 1):
            for l2 in range(lmax + 1):
                for m2 in range(-l2, l2 + 1):
                    prod = y[..., l1, lmax + m1] * y[..., l2, lmax + m2] * w
                    for l3 in range(lmax + 1):
                        m3 = m1 + m2
                        if abs(m3) > l3:
                            continue
                        quad = complex(np.sum(np.conj(y[..., l3, lmax + m3]) * prod))
                        g = gaunt(GauntKey(l1, m1, l2, m2, l3, m3))
                        if abs(g - quad) > 1e-12:
                            return f"<{l3} {m3}|{l2} {m2}|{l1} {m1}>: {g!r} vs quadrature {quad.real!r}"
    return None


def _check_expdot(quick: bool) -> str | None:
    rng = np.random.default_rng(20011)
    for _ in range(10 if quick else 100):
        a, b = rng.normal(size=3), rng.normal(size=3)
        scale = rng.uniform(0.1, 4.0) / (np.linalg.norm(a) * np.linalg.norm(b))
        a = a * math.sqrt(scale)
        b = b * math.sqrt(scale)
        exact = math.exp(float(a @ b))
        for name, val in (("spherical", exp_dot_spherical(a, b, 30, 30)), ("legendre", exp_dot_legendre(a, b, 30))):
            if abs(val - exact) > 1e-12:
                return f"exp_dot_{name}: {val!r} vs exp {exact!r}"
    return None


def _check_conversions(quick: bool) -> str | None:
    rng = np.random.default_rng(7)
    pts = rng.normal(size=(25, 3))
    nmax = 3 if quick else 5
    for kind in KINDS:
        for n in range(1, nmax + 1):
            for ell in range(n):
                spec = RadialBasisSpec(kind, n, ell, ell, 0.9)
                d = eval_direct(spec, pts)
                x = expansion_eval(to_b(spec), pts)
                if np.any(np.abs(x - d) > np.maximum(1e-12 * np.abs(d), 1e-14)):
                    return f"{kind} ({n},{ell}) expansion differs from direct evaluation"
    return None


def _check_addition(quick: bool) -> str | None:
    idx = BIndex(2, 1, 0, 0.8)
    rs, rl = np.array([0.2, -0.1, 0.3]), np.array([0.6, 0.9, -1.1])
    _, rep = b_addition(idx, rs, rl, TruncationSpec(ell1_max=20 if quick else 30))
    if rep.errors[-1] > 1e-8:
        return f"addition theorem error {rep.errors[-1]:.3g} at l1 <= {len(rep.errors) - 1}"
    return None


CHECK_GROUPS = (
    ("gaunt", _check_gaunt),
    ("exp_dot", _check_expdot),
    ("conversions", _check_conversions),
    ("addition", _check_addition),
)


def cmd_selfcheck(args, out) -> int:
    if args.inject_gaunt_corruption:
        default_cache.poison(POISON_KEY, gaunt(POISON_KEY) + 1e-3)
    failed = 0
    for name, fn in CHECK_GROUPS:
        t0 = time.perf_counter()
        try:
            problem = fn(args.quick)
        except (DomainError, ConvergenceError) as exc:
            problem = f"{type(exc).__name__}: {exc}"
        dt = time.perf_counter() - t0
        if problem is None:
            out.write(f"PASS {name} ({dt:.2f} s)\n")
        else:
            failed += 1
            out.write(f"FAIL {name} ({dt:.2f} s): {problem}\n")
    out.write(f"{len(CHECK_GROUPS) - failed}/{len(CHECK_GROUPS)} groups passed\n")
    return EXIT_OK if failed == 0 else EXIT_NUMERIC


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # accepted before or after the subcommand; SUPPRESS keeps a later default
    # from overwriting a value given earlier
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)
    common.add_argument("--cache-dir", type=Path, default=argparse.SUPPRESS,
                        help="directory holding a Gaunt-table snapshot")
    parser = _Parser(prog="bfun", parents=[common],
                     description="B functions, basis conversions and their addition theorem.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def index_flags(p, with_m=True):
        p.add_argument("--n", type=int)
        p.add_argument("--l", type=int)
        if with_m:
            p.add_argument("--m", type=int)
        p.add_argument("--alpha", type=float)
        p.add_argument("--Z", type=float)

    p = sub.add_parser("eval", parents=[common], help="evaluate a function at points")
    p.add_argument("--function", required=True,
                   choices=("b", "rbf", "sto", "hydrogenic", "lambda", "sturmian", "ylm", "solid"))
    index_flags(p)
    p.add_argument("--nu", type=float, help="half-integer order for --function rbf")
    p.add_argument("--z", type=float, help="argument for --function rbf")
    p.add_argument("--point")
    p.add_argument("--grid", help="x0:x1:nx,y0:y1:ny,z0:z1:nz")

    p = sub.add_parser("expand", parents=[common], help="print the B-function expansion of a basis function")
    p.add_argument("--basis", required=True, choices=("sto", "slater") + KINDS[1:])
    index_flags(p)

    p = sub.add_parser("addition", parents=[common], help="evaluate the two-range addition theorem")
    index_flags(p)
    p.add_argument("--r-large", dest="r_large")
    p.add_argument("--r-small", dest="r_small")
    p.add_argument("--lmax", type=int, default=30)
    p.add_argument("--adaptive", action="store_true")
    p.add_argument("--tol", type=float, default=1e-14)
    p.add_argument("--table", help="comma-separated l1 cutoffs to report")

    p = sub.add_parser("selfcheck", parents=[common], help="run the embedded invariant checks")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--inject-gaunt-corruption", action="store_true", help=argparse.SUPPRESS)
    return parser


VECTOR_OPTIONS = ("--point", "--grid", "--r-large", "--r-small")


def _join_vector_values(argv: list) -> list:
    """Glue vector options to their value so "-0.3,1,0" is not read as a flag."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in VECTOR_OPTIONS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_vector_values(argv))
    args.format = getattr(args, "format", "json")
    args.cache_dir = getattr(args, "cache_dir", None)
    snapshot = args.cache_dir / CACHE_FILE if args.cache_dir else None
    if snapshot is not None and snapshot.exists():
        try:
            default_cache.load(snapshot)
        except (ValueError, OSError) as exc:
            sys.stderr.write(f"bfun: error: {exc}\n")
            return EXIT_USAGE
    try:
        if args.command == "selfcheck":
            status = cmd_selfcheck(args, out)
        else:
            status = EXIT_OK
            if args.command == "eval":
                params, records = cmd_eval(args)
            elif args.command == "expand":
                params, records = cmd_expand(args)
            else:
                params, records, rep = cmd_addition(args)
                if rep.slow_convergence:
                    status = EXIT_NUMERIC
            out.write(render(args.command, params, records, args.format))
            if status == EXIT_NUMERIC:
                sys.stderr.write("bfun: adaptive truncation did not converge within --lmax\n")
    except (UsageError, DomainError) as exc:
        sys.stderr.write(f"bfun: error: {exc}\n")
        return EXIT_USAGE
    except ConvergenceError as exc:
        sys.stderr.write(f"bfun: numerical failure: {exc}\n")
        return EXIT_NUMERIC
    if snapshot is not None:
        snapshot.parent.mkdir(parents=True, exist_ok=True)
        default_cache.save(snapshot)
    return status


if __name__ == "__main__":
    sys.exit(main())
