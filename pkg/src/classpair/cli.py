"""Command line interface.

Subcommands: profile, pair, bound, scan, rho, classnum.  Flags are
long-form only; a key=value config file can supply defaults (explicit
flags win); environment variables are never consulted.

Output is newline-delimited key=value records (or CSV with --format csv).
Real numbers print as value+-bound interval certificates.  Scan output
files begin with a '#'-prefixed manifest; rerunning an identical
configuration reproduces the record section byte for byte (only the
manifest timing line differs).

Exit codes: 0 success (scan: found records), 3 scan found nothing,
1 rho found mismatches, 2 bad usage or invalid input.
"""

import argparse
import sys
import time
from fractions import Fraction
from math import gcd

from mpmath import mp

from . import __version__
from .bounds import class_number_lower_bound, leading_constant, profile_curve
from .curve import curve_from_string, normalize_twist_point, point_from_string
from .forms import all_reduced_forms, class_number
from .heights import HeightValue
from .pairing import PairingInput, pair
from .forms import reduce_form
from .scan import (
    RhoUnhandledCase,
    ScanConfig,
    brute_table,
    compiled_kernel_available,
    root_count_closed,
    scan,
)

mp.dps = 30


def _fmt_real(v: HeightValue) -> str:
    from mpmath import nstr

    return f"{nstr(v.value, 12)}+-{nstr(v.error_bound, 3)}"


def _fail(reason: str) -> int:
    print(f"error={reason}", file=sys.stderr)
    return 2


def _emit(rows, columns, fmt):
    if fmt == "csv":
        print(",".join(columns))
        for row in rows:
            print(",".join(str(row[c]) for c in columns))
    else:
        for row in rows:
            print(" ".join(f"{c}={row[c]}" for c in columns))


# ---------------------------------------------------------------------------


def cmd_profile(args) -> int:
    E = curve_from_string(args.curve)
    gens = _parse_gens(args.gens)
    try:
        prof = profile_curve(E, gens, tol=args.tol)
    except ValueError as exc:
        return _fail(str(exc))
    row = {
        "curve": str(E),
        "rank": prof.rank,
        "torsion_order": prof.torsion_order,
        "regulator": _fmt_real(prof.regulator),
        "diameter": _fmt_real(prof.diameter),
        "offset": _fmt_real(prof.offset),
        "ball_volume": _fmt_real(prof.ball_volume),
    }
    if prof.rank >= 1:
        row["leading_constant"] = _fmt_real(leading_constant(prof))
    else:
        row["leading_constant"] = "na (rank 0)"
    _emit([row], list(row), args.format)
    return 0


def cmd_pair(args) -> int:
    E = curve_from_string(args.curve)
    P = point_from_string(args.point)
    tx, ty = (Fraction(s.strip()) for s in args.twist_point.split(","))
    try:
        Q = normalize_twist_point(E, args.disc, tx, ty)
        out = pair(PairingInput(E, P, Q, args.disc), ell=args.ell)
    except ValueError as exc:
        return _fail(str(exc))
    row = {
        "alpha": out.alpha,
        "g": out.G,
        "ell": out.ell,
        "form": out.form,
        "reduced": reduce_form(out.form),
        "disc": out.form.discriminant(),
    }
    _emit([row], list(row), args.format)
    return 0


def cmd_bound(args) -> int:
    E = curve_from_string(args.curve)
    gens = _parse_gens(args.gens)
    tx, ty = (Fraction(s.strip()) for s in args.twist_point.split(","))
    try:
        prof = profile_curve(E, gens, tol=args.tol)
        Q = normalize_twist_point(E, args.disc, tx, ty)
        report = class_number_lower_bound(prof, args.disc, Q)
    except ValueError as exc:
        return _fail(str(exc))
    row = {
        "disc": report.D,
        "u": Q.u,
        "v": Q.v,
        "w": Q.w,
        "suitable": str(report.suitable).lower(),
        "budget": _fmt_real(report.budget),
        "leading_constant": _fmt_real(report.leading),
        "error_constant": _fmt_real(report.error_term),
        "lower_bound": _fmt_real(report.lower_bound) if report.lower_bound else "na",
        "ggz_display": mp.nstr(report.ggz, 8) if report.ggz is not None else "na",
    }
    _emit([row], list(row), args.format)
    return 0


_SCAN_COLUMNS = ["a", "m", "n", "t", "d", "D", "u", "v", "w",
                 "suitable", "parity_even_rank", "lower_bound", "class_number"]


def _record_row(r):
    if r.report is not None and r.report.lower_bound is not None:
        lb = mp.nstr(r.report.lower_bound.value - r.report.lower_bound.error_bound, 10)
    else:
        lb = "na"
    return {
        "a": r.a, "m": r.m, "n": r.n, "t": r.t, "d": r.d, "D": r.D,
        "u": r.Q.u, "v": r.Q.v, "w": r.Q.w,
        "suitable": str(r.suitable).lower(),
        "parity_even_rank": "na" if r.parity_even_rank is None else str(r.parity_even_rank).lower(),
        "lower_bound": lb,
        "class_number": r.class_number if r.class_number is not None else "na",
    }


def cmd_scan(args) -> int:
    E = curve_from_string(args.curve) if args.curve else None
    gens = _parse_gens(args.gens)
    profile = None
    if E is not None:
        if E.a4 != 0 or E.a6 != -args.a:
            return _fail(f"curve {E} is not y^2 = x^3 - {args.a}")
        try:
            profile = profile_curve(E, gens, tol=args.tol)
        except ValueError as exc:
            return _fail(str(exc))
    try:
        config = ScanConfig(
            a=args.a, X=args.x_limit, T=args.t,
            A=Fraction(args.exponent_a), B=Fraction(args.exponent_b),
            h=args.h, modulus=args.modulus, conductor=args.conductor,
            root_number=args.root_number, profile=profile,
            workers=args.workers, class_number_cap=args.class_number_cap,
            kernel=args.kernel,
        )
    except ValueError as exc:
        return _fail(str(exc))
    started = time.time()
    records, uncertified = scan(config)
    elapsed = time.time() - started
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        mod = config.effective_modulus()
        print(f"# classpair scan v{__version__}", file=out)
        print(f"# config: a={config.a} x_limit={config.X} t={config.T} "
              f"exponent_a={config.A} exponent_b={config.B} h={config.h} "
              f"modulus={mod} conductor={config.conductor} "
              f"root_number={config.root_number} workers={config.workers} "
              f"class_number_cap={config.class_number_cap} "
              f"kernel={config.kernel or 'auto'} "
              f"compiled={str(compiled_kernel_available()).lower()}", file=out)
        print(f"# modulus_relaxed={str(config.modulus_relaxed()).lower()}", file=out)
        print(f"# elapsed_seconds={elapsed:.3f}", file=out)
        rows = [_record_row(r) for r in records]
        if args.format == "csv":
            print(",".join(_SCAN_COLUMNS), file=out)
            for row in rows:
                print(",".join(str(row[c]) for c in _SCAN_COLUMNS), file=out)
        else:
            for row in rows:
                print(" ".join(f"{c}={row[c]}" for c in _SCAN_COLUMNS), file=out)
        distinct = len({r.d for r in records})
        print(f"# summary: X={config.X} T={config.T} A={config.A} B={config.B} "
              f"h={config.h} modulus={mod} total_count={len(records)} "
              f"distinct_d_count={distinct} uncertified_excluded={uncertified}", file=out)
    finally:
        if args.out:
            out.close()
    return 0 if records else 3


def cmd_rho(args) -> int:
    if args.modulus is not None:
        # single cell
        try:
            closed = root_count_closed(args.a_max, args.m_max, args.modulus)
            status = "ok"
        except RhoUnhandledCase:
            closed = None
            status = "unhandled"
        from .scan import root_count_brute

        brute = root_count_brute(args.a_max, args.m_max, args.modulus)
        match = status == "unhandled" or closed == brute
        _emit([{"a": args.a_max, "m": args.m_max, "modulus": args.modulus,
                "closed": closed if closed is not None else "na",
                "brute": brute, "status": status,
                "match": str(match).lower()}],
              ["a", "m", "modulus", "closed", "brute", "status", "match"], args.format)
        return 0 if match else 1
    mismatches = 0
    unhandled = 0
    cells = 0
    rows = []
    prime_powers = _prime_powers_upto(args.prime_power_max)
    for a in range(1, args.a_max + 1):
        tables = {}
        for p, alpha, q in prime_powers:
            if q not in tables:
                tables[q] = brute_table(a, q)
            table = tables[q]
            for m in [x for x in range(-args.m_max, args.m_max + 1) if x]:
                cells += 1
                brute = table[pow(m, 3, q)]
                try:
                    closed = root_count_closed(a, m, q)
                except RhoUnhandledCase:
                    unhandled += 1
                    continue
                if closed != brute:
                    mismatches += 1
                    rows.append({"a": a, "m": m, "modulus": q,
                                 "closed": closed, "brute": brute,
                                 "status": "MISMATCH", "match": "false"})
    if rows:
        _emit(rows, ["a", "m", "modulus", "closed", "brute", "status", "match"], args.format)
    print(f"cells={cells} unhandled={unhandled} mismatches={mismatches}")
    return 1 if mismatches else 0


def _prime_powers_upto(limit: int):
    out = []
    sieve = list(range(limit + 1))
    for p in range(2, limit + 1):
        if sieve[p] == p:
            for k in range(2 * p, limit + 1, p):
                if sieve[k] == k:
                    sieve[k] = p
            q = p
            alpha = 1
            while q <= limit:
                out.append((p, alpha, q))
                q *= p
                alpha += 1
    return out


def cmd_classnum(args) -> int:
    try:
        h = class_number(args.disc)
    except ValueError as exc:
        return _fail(str(exc))
    row = {"disc": args.disc, "class_number": h}
    if args.forms:
        row["forms"] = ";".join(str(f) for f in all_reduced_forms(args.disc))
    _emit([row], list(row), args.format)
    return 0


# ---------------------------------------------------------------------------


def _parse_gens(text):
    if not text:
        return []
    return [point_from_string(part) for part in text.split(";") if part.strip()]


def _load_config_defaults(argv):
    """Pre-scan for --config and return its key=value pairs."""
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    if path is None:
        return {}
    defaults = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"config line is not key=value: {line!r}")
            key, value = line.split("=", 1)
            defaults[key.strip().replace("-", "_")] = value.strip()
    return defaults


def build_parser():
    top = argparse.ArgumentParser(prog="classpair", description=__doc__,
                                  formatter_class=argparse.RawDescriptionHelpFormatter)
    top.add_argument("--version", action="version", version=f"classpair {__version__}")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key=value file supplying defaults")
        p.add_argument("--format", choices=["kv", "csv"], default="kv")
        p.add_argument("--tol", type=float, default=1e-12)

    p = sub.add_parser("profile", help="rank profile: regulator, diameter, constants")
    common(p)
    p.add_argument("--curve", required=True, help="'a4,a6'")
    p.add_argument("--gens", default="", help="semicolon-separated points 'x,y;x,y'")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("pair", help="ideal class pairing of a point with a twist point")
    common(p)
    p.add_argument("--curve", required=True)
    p.add_argument("--point", required=True, help="'x,y' on E")
    p.add_argument("--twist-point", required=True, help="'x,y' on the -D model")
    p.add_argument("--disc", type=int, required=True, help="positive D (twist by -D)")
    p.add_argument("--ell", type=int, default=None, help="pin the integer l instead of searching")
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("bound", help="class number lower bound report for one (Q, D)")
    common(p)
    p.add_argument("--curve", required=True)
    p.add_argument("--gens", required=True)
    p.add_argument("--twist-point", required=True)
    p.add_argument("--disc", type=int, required=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("scan", help="enumerate -d t^2 = m^3 - a n^6 solutions")
    common(p)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--x-limit", type=int, required=True)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--exponent-a", default="3/10")
    p.add_argument("--exponent-b", default="8/25")
    p.add_argument("--h", type=int, default=1)
    p.add_argument("--modulus", type=int, default=None,
                   help="congruence modulus; omit for the strict 4*conductor")
    p.add_argument("--conductor", type=int, required=True)
    p.add_argument("--root-number", type=int, required=True, choices=[-1, 1])
    p.add_argument("--curve", default=None, help="'0,-a' to attach a bound profile")
    p.add_argument("--gens", default="")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--class-number-cap", type=int, default=0)
    p.add_argument("--kernel", choices=["c", "py"], default=None)
    p.add_argument("--out", default=None, help="output file (stdout otherwise)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("rho", help="verify closed-form root counts against brute force")
    common(p)
    p.add_argument("--a-max", type=int, default=50)
    p.add_argument("--m-max", type=int, default=50)
    p.add_argument("--prime-power-max", type=int, default=3000)
    p.add_argument("--modulus", type=int, default=None,
                   help="single-cell mode: treat --a-max/--m-max as a and m")
    p.set_defaults(func=cmd_rho)

    p = sub.add_parser("classnum", help="class number h(-D) by reduced form enumeration")
    common(p)
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--forms", action="store_true", help="also list the reduced forms")
    p.set_defaults(func=cmd_classnum)

    return top


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    try:
        defaults = _load_config_defaults(argv)
    except (OSError, ValueError) as exc:
        return _fail(str(exc))
    if defaults:
        for action in parser._subparsers._group_actions:
            for sp in action.choices.values():
                known = {a.dest for a in sp._actions}
                sp.set_defaults(**{k: _coerce(sp, k, v) for k, v in defaults.items() if k in known})
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        return _fail(str(exc))


def _coerce(subparser, dest, value):
    for action in subparser._actions:
        if action.dest == dest:
            if action.type is int:
                return int(value)
            if action.type is float:
                return float(value)
            if isinstance(action.const, bool) or isinstance(action.default, bool):
                return value.lower() in ("1", "true", "yes")
            return value
    return value


if __name__ == "__main__":
    sys.exit(main())
