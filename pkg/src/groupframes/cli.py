"""Command-line front end: construct frames, analyze coherence, compare
against seeded random baselines, and emit bound curves.

All outputs are deterministic for a fixed configuration: JSON is written
with sorted keys and no timestamps, CSV cells are fixed-format, files are
written atomically (temp file in the target directory, or in
GROUPFRAMES_SCRATCH when set, then renamed).  Exit codes: 0 success,
2 validation error, 3 resource cap, 4 internal invariant violation, with
a one-line JSON error object on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import shutil
import statistics
import sys
import tempfile
from contextlib import contextmanager

import numpy as np

from .coherence import analyze, bound_general_kappa, bound_m_odd, \
    random_fourier_bound, welch_bound
from .errors import (
    InvariantViolation,
    ResourceError,
    ValidationError,
)
from .frames import (
    RNG_NAME,
    SignMatrix,
    build_field_frame,
    build_hadamard_frame,
    build_harmonic_frame,
    build_random_exponent_frame,
    build_random_hadamard_frame,
    load_frame,
    materialize,
    save_complex_csv,
    save_exponent_csv,
    save_sign_csv,
)
from .sl2 import sl2_report

TABLE_I = ((8, 51), (8, 85), (9, 73), (10, 341), (12, 455))
TABLE_II = ((3, 3, 13), (3, 5, 121), (3, 7, 1093), (7, 3, 171), (11, 3, 665))
TABLE_IV = ((4, 1), (8, 1), (8, 3))
DEFAULT_SEEDS = (1, 2, 3)


class UsageError(ValidationError):
    """Bad command line arguments."""


# ---------------------------------------------------------------------------
# deterministic output helpers
# ---------------------------------------------------------------------------

@contextmanager
def _atomic(path: str):
    """Yield a temp path; on success rename it onto the target.

    Symlinks, devices, and pipes (/dev/stdout and friends) are written
    through directly because renaming over them would replace the node.
    """
    path = os.path.abspath(path)
    if os.path.islink(path) or (os.path.exists(path)
                                and not os.path.isfile(path)):
        yield path
        return
    scratch = os.environ.get("GROUPFRAMES_SCRATCH")
    tmpdir = scratch if scratch else os.path.dirname(path)
    fd, tmp = tempfile.mkstemp(dir=tmpdir, prefix=".groupframes-")
    os.close(fd)
    try:
        yield tmp
        try:
            os.replace(tmp, path)
        except OSError:
            shutil.move(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def _write_text(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
        return
    with _atomic(path) as tmp:
        with open(tmp, "w", newline="\n") as fh:
            fh.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _csv_text(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    lines += [",".join(_cell(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _parse_log_base(text: str) -> float | None:
    if text == "e":
        return None
    try:
        base = float(text)
    except ValueError:
        raise UsageError(f"--log-base must be 'e' or a number, got {text!r}")
    if base <= 1.0:
        raise UsageError(f"--log-base must exceed 1, got {base}")
    return base


# ---------------------------------------------------------------------------
# frame construction from flags
# ---------------------------------------------------------------------------

def _build_from_args(args):
    if getattr(args, "infile", None):
        return load_frame(args.infile)
    if args.field is not None and args.harmonic is not None:
        raise UsageError("--field and --harmonic are mutually exclusive")
    if args.field is not None:
        p, r = args.field
        if args.m is None:
            raise UsageError("--field requires --m")
        if args.random:
            if args.seed is None:
                raise UsageError("--random requires --seed")
            if p == 2:
                return build_random_hadamard_frame(r, args.m, args.seed,
                                                   bernoulli=args.bernoulli)
            return build_random_exponent_frame(p, r, args.m, args.seed,
                                               bernoulli=args.bernoulli)
        if p == 2:
            return build_hadamard_frame(r, args.m)
        return build_field_frame(p, r, args.m)
    if args.harmonic is not None:
        n, m = args.harmonic
        if args.random:
            if args.seed is None:
                raise UsageError("--random requires --seed")
            return build_random_exponent_frame(n, 1, m, args.seed,
                                               bernoulli=args.bernoulli)
        return build_harmonic_frame(n, m)
    raise UsageError("specify a construction: --field P R --m M, "
                     "--harmonic N M, or --in FILE")


def _add_construction_flags(sub, with_infile: bool):
    sub.add_argument("--field", nargs=2, type=int, metavar=("P", "R"),
                     help="prime p and extension degree r")
    sub.add_argument("--m", type=int, default=None,
                     help="number of rows (subgroup order, or draw count "
                          "with --random)")
    sub.add_argument("--harmonic", nargs=2, type=int, metavar=("N", "M"),
                     help="prime n and row count m (degree-1 characters)")
    sub.add_argument("--random", action="store_true",
                     help="draw the row multipliers at random instead of "
                          "using the subgroup")
    sub.add_argument("--seed", type=int, default=None,
                     help="PRNG seed for --random")
    sub.add_argument("--bernoulli", action="store_true",
                     help="sample rows via independent Bernoulli(m/n) "
                          "instead of exactly m without replacement")
    if with_infile:
        sub.add_argument("--in", dest="infile", default=None,
                         help="read a frame from a CSV written by construct")


# ---------------------------------------------------------------------------
# construct
# ---------------------------------------------------------------------------

def cmd_construct(args) -> int:
    frame = _build_from_args(args)
    if isinstance(frame, SignMatrix):
        with _atomic(args.out) as tmp:
            save_sign_csv(frame, tmp)
    else:
        with _atomic(args.out) as tmp:
            save_exponent_csv(frame, tmp)
    _write_text(args.out + ".provenance.json", _json_text(frame.provenance))
    if args.exponent_out:
        ef = frame.as_exponent_frame() if isinstance(frame, SignMatrix) \
            else frame
        with _atomic(args.exponent_out) as tmp:
            save_exponent_csv(ef, tmp)
    if args.complex_out:
        cf = materialize(frame, normalize=not args.no_normalize)
        with _atomic(args.complex_out) as tmp:
            save_complex_csv(cf, tmp)
    sys.stdout.write(args.out + "\n")
    return 0


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def _histogram_csv(mag_entries: list[dict], bins: int) -> str:
    if bins < 1:
        raise UsageError(f"--bins must be >= 1, got {bins}")
    vals = np.array([e["value"] for e in mag_entries], dtype=np.float64)
    cnts = np.array([e["count"] for e in mag_entries], dtype=np.int64)
    hi = float(vals.max()) if len(vals) else 0.0
    if hi <= 0.0:
        hi = 1.0
    counts, edges = np.histogram(vals, bins=bins, range=(0.0, hi),
                                 weights=cnts)
    lines = ["bin_left,bin_right,count"]
    for i, c in enumerate(counts):
        lines.append(f"{edges[i]:.17g},{edges[i + 1]:.17g},{int(c)}")
    return "\n".join(lines) + "\n"


def cmd_analyze(args) -> int:
    log_base = _parse_log_base(args.log_base)
    if args.sl2 is not None:
        q, m = args.sl2
        report = sl2_report(q, m, args.mode, log_base=log_base)
    else:
        frame = _build_from_args(args)
        report = analyze(frame, brute=args.brute,
                         log_base=log_base).to_dict()
    _write_text(args.report, _json_text(report))
    if args.histogram:
        _write_text(args.histogram,
                    _histogram_csv(report["distinct_magnitudes"], args.bins))
    return 0


# ---------------------------------------------------------------------------
# compare
# ---------------------------------------------------------------------------

def _gaussian_mu(dim: int, n: int, seed: int) -> float:
    rng = np.random.default_rng(seed)
    mat = rng.standard_normal((dim, n)) + 1j * rng.standard_normal((dim, n))
    mat = mat / np.linalg.norm(mat, axis=0, keepdims=True)
    gram = mat.conj().T @ mat
    off = ~np.eye(n, dtype=bool)
    return float(np.max(np.abs(gram[off])))


def _compare_row_hadamard(r: int, m: int, seeds, bernoulli: bool) -> dict:
    group = analyze(build_hadamard_frame(r, m), brute="off")
    per_seed = [
        analyze(build_random_hadamard_frame(r, m, s, bernoulli=bernoulli),
                brute="off").mu
        for s in seeds]
    return {
        "label": f"({group.n}, {m})",
        "n": group.n,
        "m_dim": group.m_dim,
        "group_mu": group.mu,
        "welch": group.welch,
        "bound": group.bound_general,
        "bound_kind": "bound_general",
        "random_mu": per_seed,
        "random_median": statistics.median(per_seed),
        "flags": group.property_flags,
    }


def _compare_row_field(p: int, r: int, m: int, seeds, bernoulli: bool) -> dict:
    group = analyze(build_field_frame(p, r, m), brute="off")
    per_seed = [
        analyze(build_random_exponent_frame(p, r, m, s, bernoulli=bernoulli),
                brute="off").mu
        for s in seeds]
    return {
        "label": f"{p}^{r}",
        "n": group.n,
        "m_dim": group.m_dim,
        "group_mu": group.mu,
        "welch": group.welch,
        "bound": group.bound_general,
        "bound_kind": "bound_general",
        "random_mu": per_seed,
        "random_median": statistics.median(per_seed),
        "flags": group.property_flags,
    }


def _compare_row_sl2(q: int, m: int, seeds) -> dict:
    rep = sl2_report(q, m, "induced")
    per_seed = [_gaussian_mu(rep["m_dim"], rep["n"], s) for s in seeds]
    return {
        "label": f"{rep['m_dim']} x {rep['n']}",
        "n": rep["n"],
        "m_dim": rep["m_dim"],
        "group_mu": rep["mu"],
        "welch": rep["welch"],
        "bound": rep["sl2_bound"],
        "bound_kind": "sl2_bound",
        "random_mu": per_seed,
        "random_median": statistics.median(per_seed),
        "flags": rep["property_flags"],
    }


def cmd_compare(args) -> int:
    seeds = list(args.seeds)
    if len(seeds) < 3:
        raise UsageError(f"need at least 3 seeds, got {len(seeds)}")
    if len(set(seeds)) != len(seeds):
        raise UsageError("seeds must be distinct")
    if args.table == "I":
        rows = [_compare_row_hadamard(r, m, seeds, args.bernoulli)
                for r, m in TABLE_I]
        baseline = "random-hadamard-rows"
    elif args.table == "II":
        rows = [_compare_row_field(p, r, m, seeds, args.bernoulli)
                for p, r, m in TABLE_II]
        baseline = "random-multipliers"
    else:
        rows = [_compare_row_sl2(q, m, seeds) for q, m in TABLE_IV]
        baseline = "gaussian-column-normalized"
    report = {
        "schema_version": 1,
        "table": args.table,
        "seeds": seeds,
        "rng": RNG_NAME,
        "baseline": baseline,
        "sampling": ("bernoulli-rate-m-over-n" if args.bernoulli
                     else "without-replacement-draw-order"),
        "rows": rows,
    }
    if args.out_json:
        _write_text(args.out_json, _json_text(report))
    header = (["label", "n", "m_dim", "group_mu", "welch", "bound",
               "random_median"]
              + [f"random_seed_{s}" for s in seeds])
    csv_rows = []
    for row in rows:
        csv_rows.append([row["label"], row["n"], row["m_dim"],
                         row["group_mu"], row["welch"], row["bound"],
                         row["random_median"]] + row["random_mu"])
    text = _csv_text(header, csv_rows)
    _write_text(args.out_csv, text)
    return 0


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

def _divisors(x: int) -> list[int]:
    out = []
    d = 1
    while d * d <= x:
        if x % d == 0:
            out.append(d)
            if d != x // d:
                out.append(x // d)
        d += 1
    return sorted(out)


def _bound_row(n: int, m: int, kappa: int, m_requested: int | None,
               log_base: float | None) -> list:
    welch = welch_bound(n, m)
    bg = bound_general_kappa(m, kappa)
    bmo = bound_m_odd(m, kappa) if kappa % 2 == 0 and m % 2 == 1 else None
    rf = random_fourier_bound(n, m)
    log_n = math.log(n) if log_base is None else math.log(n, log_base)
    cp = 0.1 / math.sqrt(2.0 * log_n)
    scp = 1.0 / (164.0 * log_n)
    snapped = None if m_requested is None else (m != m_requested)
    return [n, m, kappa, m_requested, snapped, welch, bg, bmo, rf, cp, scp]


def cmd_bounds(args) -> int:
    log_base = _parse_log_base(args.log_base)
    if (args.kappa is None) == (args.regime is None):
        raise UsageError("choose exactly one of --kappa or --regime")
    if args.n_min < 2 or args.n_max < args.n_min:
        raise UsageError(f"need 2 <= n_min <= n_max, got "
                         f"[{args.n_min}, {args.n_max}]")
    rows = []
    if args.kappa is not None:
        if args.kappa < 1:
            raise UsageError(f"--kappa must be >= 1, got {args.kappa}")
        for n in range(args.n_min, args.n_max + 1, args.step):
            if (n - 1) % args.kappa:
                continue
            rows.append(_bound_row(n, (n - 1) // args.kappa, args.kappa,
                                   None, log_base))
    else:
        for n in range(args.n_min, args.n_max + 1, args.step):
            target = max(1, round(n ** 0.8))
            m = min(_divisors(n - 1), key=lambda d: (abs(d - target), d))
            rows.append(_bound_row(n, m, (n - 1) // m, target, log_base))
    header = ["n", "m", "kappa", "m_requested", "snapped", "welch",
              "bound_general", "bound_m_odd", "random_fourier_bound",
              "coherence_property_threshold", "strong_property_threshold"]
    _write_text(args.out, _csv_text(header, rows))
    return 0


# ---------------------------------------------------------------------------
# parser / entry point
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="groupframes",
                     description="Tight group frames from field characters "
                                 "and their coherence.")
    sub = parser.add_subparsers(dest="command", required=True)

    con = sub.add_parser("construct", help="build a frame and write it out")
    _add_construction_flags(con, with_infile=False)
    con.add_argument("--out", required=True,
                     help="matrix CSV path (sign rows for p=2, exponent "
                          "rows otherwise); provenance JSON written "
                          "alongside")
    con.add_argument("--exponent-out", default=None,
                     help="also write the reloadable exponent CSV")
    con.add_argument("--complex-out", default=None,
                     help="also write the materialized complex matrix")
    con.add_argument("--no-normalize", action="store_true",
                     help="skip unit-norm column scaling in --complex-out")
    con.set_defaults(func=cmd_construct)

    ana = sub.add_parser("analyze", help="coherence report for one frame")
    _add_construction_flags(ana, with_infile=True)
    ana.add_argument("--sl2", nargs=2, type=int, metavar=("Q", "M"),
                     default=None,
                     help="character-level analysis of the SL2(F_q) frame")
    ana.add_argument("--mode", choices=("induced", "cuspidal"),
                     default="induced", help="representation family "
                                             "for --sl2")
    ana.add_argument("--report", default=None,
                     help="report JSON path (default: stdout)")
    ana.add_argument("--histogram", default=None,
                     help="CSV of binned off-diagonal Gram magnitudes")
    ana.add_argument("--bins", type=int, default=200,
                     help="histogram bin count (default 200)")
    ana.add_argument("--brute", choices=("on", "off", "auto"),
                     default="auto", help="Gram-matrix oracle control")
    ana.add_argument("--log-base", default="e",
                     help="log base for the property thresholds "
                          "(default natural)")
    ana.set_defaults(func=cmd_analyze)

    cmp_ = sub.add_parser("compare",
                          help="group construction vs seeded random "
                               "baselines")
    cmp_.add_argument("--table", choices=("I", "II", "IV"), required=True,
                      help="which published comparison to reproduce")
    cmp_.add_argument("--seeds", nargs="+", type=int,
                      default=list(DEFAULT_SEEDS),
                      help="baseline seeds (>= 3, default 1 2 3)")
    cmp_.add_argument("--bernoulli", action="store_true",
                      help="Bernoulli(m/n) row sampling for the baselines")
    cmp_.add_argument("--out-json", default=None,
                      help="full-precision report JSON path")
    cmp_.add_argument("--out-csv", default=None,
                      help="6-significant-digit CSV path (default: stdout)")
    cmp_.set_defaults(func=cmd_compare)

    bnd = sub.add_parser("bounds", help="CSV of coherence bound curves")
    bnd.add_argument("--kappa", type=int, default=None,
                     help="fixed subgroup index; rows at every n with "
                          "kappa | n-1")
    bnd.add_argument("--regime", choices=("n45",), default=None,
                     help="m = n^(4/5) regime, m snapped to the nearest "
                          "divisor of n-1")
    bnd.add_argument("--n-min", type=int, required=True)
    bnd.add_argument("--n-max", type=int, required=True)
    bnd.add_argument("--step", type=int, default=1,
                     help="stride through the n range (default 1)")
    bnd.add_argument("--log-base", default="e",
                     help="log base for the property thresholds")
    bnd.add_argument("--out", default=None,
                     help="output CSV path (default: stdout)")
    bnd.set_defaults(func=cmd_bounds)
    return parser


def _error_exit(exc: Exception, code: int) -> int:
    sys.stderr.write(json.dumps(
        {"error": type(exc).__name__, "message": str(exc)},
        sort_keys=True) + "\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ValidationError as exc:
        return _error_exit(exc, 2)
    except ResourceError as exc:
        return _error_exit(exc, 3)
    except InvariantViolation as exc:
        return _error_exit(exc, 4)


if __name__ == "__main__":
    sys.exit(main())
