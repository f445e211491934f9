"""Command-line interface: ``primezeta alpha | primezeta | verify``.

Exit codes: 0 success, 1 internal failure, 2 domain error, 3 verification failure.
Settings resolve as: command-line flag, then ``--config`` file (key=value
lines, ``#`` comments), then built-in defaults.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import mpmath

from .coefficients import MAX_ALPHA_ORDER, alpha_entry
from .empirical import EXTENDED_DIGITS, alpha_integral, limit_estimate
from .evaluate import (check_series_domain, prime_zeta_direct, prime_zeta_mobius,
                       prime_zeta_remainder_integral, prime_zeta_series)
from .errors import DomainError, UnsupportedOrderError
from .precision import PrecisionPolicy, make_real
from .tables import sieve_primes

EXIT_OK, EXIT_INTERNAL, EXIT_DOMAIN, EXIT_VERIFY = 0, 1, 2, 3

DEFAULTS = {
    "digits": 30,
    "guard_digits": 15,
    "sieve_limit": 10 ** 8,
    "method": None,
    "format": "text",
    "n_max": 10,
    "x_max": None,
    "T": 10 ** 6,
    "n_terms": 10,
    "jobs": 1,
    "report": "verify_report.csv",
    "stieltjes_file": None,
}
_INT_KEYS = {"digits", "guard_digits", "sieve_limit", "n_max", "x_max", "n_terms", "jobs"}

log = logging.getLogger("primezeta")


def read_config(path: str | Path) -> dict:
    """Parse key=value lines; keys may use dashes or underscores."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise DomainError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def _coerce(key: str, value):
    if value is None:
        return None
    try:
        if key in _INT_KEYS:
            return _int_arg(value) if isinstance(value, str) else int(value)
        if key == "T":
            return float(value)
    except (ValueError, argparse.ArgumentTypeError) as exc:
        raise DomainError(f"bad value for {key}: {value!r}") from exc
    return value


def resolve_settings(args: argparse.Namespace) -> dict:
    config = read_config(args.config) if getattr(args, "config", None) else {}
    settings = {}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            settings[key] = _coerce(key, flag)
        elif key in config:
            settings[key] = _coerce(key, config[key])
        else:
            settings[key] = default
    return settings


def _int_arg(text: str) -> int:
    """Integer flag accepting forms like 1e8."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if value != int(value):
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="primezeta",
                                     description="Prime zeta expansion coefficients about s = 1.")
    parser.add_argument("--config", help="key=value settings file")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--digits", type=int, help="target decimal digits (default 30)")
        p.add_argument("--guard-digits", type=int, dest="guard_digits")
        p.add_argument("--sieve-limit", type=_int_arg, dest="sieve_limit")
        p.add_argument("--format", choices=("text", "json", "csv"))
        p.add_argument("--config", default=argparse.SUPPRESS, help="key=value settings file")

    p = sub.add_parser("alpha", help="expansion coefficients alpha_0..alpha_N")
    common(p)
    p.add_argument("--n-max", type=int, dest="n_max")
    p.add_argument("--method", choices=("mobius", "limit", "integral"))
    p.add_argument("--x-max", type=_int_arg, dest="x_max", help="prime-sum cutoff for --method limit")
    p.add_argument("--T", type=float, dest="T", help="integration cutoff for --method integral")
    p.add_argument("--jobs", type=int, help="worker processes for --method mobius")

    p = sub.add_parser("primezeta", help="evaluate P(s) at real s > 1")
    common(p)
    p.add_argument("--s", required=True, help="decimal argument")
    p.add_argument("--method", choices=("direct", "mobius", "series", "integral"))
    p.add_argument("--T", type=float, dest="T")
    p.add_argument("--n-terms", type=int, dest="n_terms")

    p = sub.add_parser("verify", help="run the cross-validation battery")
    common(p)
    p.add_argument("--report", help="CSV report path")
    p.add_argument("--stieltjes-file", dest="stieltjes_file",
                   help="Stieltjes data file to use instead of the bundled one")
    return parser


def _emit(rows: list[dict], key: str, fmt: str, out) -> None:
    if fmt == "json":
        payload = rows if key == "n" else rows[0]
        out.write(json.dumps(payload, indent=None) + "\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow([key, "value", "method", "tolerance"])
        for r in rows:
            w.writerow([r[key], r["value"], r["method"], r["tolerance"]])
    else:
        for r in rows:
            out.write(f"{r[key]:>4}  {r['value']:>40}  {r['method']:<18}  {r['tolerance']}\n")


def _tol(x) -> str:
    return mpmath.nstr(getattr(x, "value", x), 6)


def _mobius_row(n: int, policy: PrecisionPolicy) -> dict:
    entry = alpha_entry(n, policy)
    return {"n": n, "value": entry.value.to_string(), "method": "mobius",
            "tolerance": _tol(entry.tolerance)}


def cmd_alpha(settings: dict, out) -> int:
    policy = PrecisionPolicy(settings["digits"], settings["guard_digits"])
    method = settings["method"] or "mobius"
    sieve_digits = min(policy.target_digits, EXTENDED_DIGITS)
    if not 0 <= settings["n_max"] <= MAX_ALPHA_ORDER:
        raise UnsupportedOrderError(f"--n-max must be in [0, {MAX_ALPHA_ORDER}]")
    ns = list(range(settings["n_max"] + 1))
    if method == "mobius":
        jobs = max(1, settings["jobs"])
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                rows = list(pool.map(_mobius_row, ns, [policy] * len(ns)))
        else:
            rows = [_mobius_row(n, policy) for n in ns]
    elif method == "limit":
        x_max = settings["x_max"] or settings["sieve_limit"]
        sieve = sieve_primes(x_max)
        rows = []
        for n in ns:
            est = limit_estimate(n, x_max, sieve, policy)
            rows.append({"n": n, "value": est.estimate.to_string(sieve_digits), "method": "limit",
                         "tolerance": _tol(est.tolerance)})
    else:
        T = settings["T"]
        sieve = sieve_primes(max(2, int(T)))
        rows = []
        for n in ns:
            est = alpha_integral(n, T, sieve, policy)
            rows.append({"n": n, "value": est.value.to_string(sieve_digits), "method": "integral",
                         "tolerance": _tol(est.tail_model)})
    _emit(rows, "n", settings["format"], out)
    return EXIT_OK


def cmd_primezeta(settings: dict, s_text: str, out) -> int:
    policy = PrecisionPolicy(settings["digits"], settings["guard_digits"])
    s = make_real(s_text, policy)
    method = settings["method"] or "mobius"
    if method == "direct":
        res = prime_zeta_direct(s, policy, sieve_primes(settings["sieve_limit"]))
    elif method == "mobius":
        res = prime_zeta_mobius(s, policy)
    elif method == "series":
        N = settings["n_terms"]
        check_series_domain(s.value)
        alphas = [alpha_entry(n, policy).value for n in range(N + 2)]
        res = prime_zeta_series(s, alphas, N, policy)
    else:
        T = settings["T"]
        res = prime_zeta_remainder_integral(s, T, sieve_primes(max(2, int(T))), policy)
    digits = policy.target_digits
    if res.method in ("direct", "remainder_integral"):
        digits = min(digits, EXTENDED_DIGITS)
    row = {"s": s_text, "value": res.value.to_string(digits), "method": res.method,
           "tolerance": _tol(res.error_estimate)}
    _emit([row], "s", settings["format"], out)
    return EXIT_OK


def cmd_verify(settings: dict, out) -> int:
    from .verify import report_csv, run_checks

    policy = PrecisionPolicy(settings["digits"], settings["guard_digits"])

    def progress(c):
        out.write(f"{'PASS' if c.passed else 'FAIL'}  {c.name:<36} residual={c.residual:.3e} "
                  f"tol={c.tolerance:.3e}\n")

    checks = run_checks(policy, settings["sieve_limit"], settings["stieltjes_file"], progress)
    Path(settings["report"]).write_text(report_csv(checks))
    failed = [c.name for c in checks if not c.passed]
    out.write(f"{len(checks) - len(failed)}/{len(checks)} checks passed; report: {settings['report']}\n")
    return EXIT_VERIFY if failed else EXIT_OK


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        settings = resolve_settings(args)
        if args.command == "alpha":
            return cmd_alpha(settings, out)
        if args.command == "primezeta":
            return cmd_primezeta(settings, args.s, out)
        return cmd_verify(settings, out)
    except DomainError as exc:
        print(f"primezeta: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except Exception as exc:  # noqa: BLE001 - the exit code is the contract
        log.exception("internal failure")
        print(f"primezeta: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
