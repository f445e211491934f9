"""Cross-validation battery behind ``primezeta verify``.

Each check yields one :class:`Check` row; the report is the CSV
``check,expected,actual,residual,tolerance,pass``.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass
from typing import Callable, Iterator

import mpmath
from mpmath import mpf

from .coefficients import alpha0_series, alpha_entry, special_case_residual, special_case_value
from .empirical import alpha_integral, limit_estimate, recombine, remainder_samples, remainder_shape_constant
from .evaluate import prime_zeta_direct, prime_zeta_mobius, prime_zeta_remainder_integral, prime_zeta_series
from .precision import PrecisionPolicy
from .tables import sieve_primes
from .zeta import StieltjesTable, g_series, load_stieltjes_table, oracle_stieltjes, stieltjes_table_for

log = logging.getLogger(__name__)

REFERENCE_ALPHA = (
    "-0.315718452053890076851085251473",
    "1.332582275733220881765828776071",
    "-2.555107615446445239595583797989",
    "10.2538270969110075387787767411",
    "-59.3323979717972728673195290222",
    "453.624590860932484915158069802",
    "-4359.12496004203984785669925342",
    "50684.8409784215596972318317143",
    "-692706.773919572383426686564824",
    "10884508.6063445498810870428549",
    "-193290090.992897724732297255085",
)
MEISSEL_MERTENS = "0.26149721284764278375"
SPECIAL_CASES = {
    1: "1.33258227573322088176",
    2: "-2.55510761544644523959",
    3: "10.25382709691100753877",
}


def stieltjes_g_polynomial(n: int, g: tuple) -> mpf:
    """g_n written out in Stieltjes constants g = (gamma, gamma_1, ..., gamma_5)."""
    c, c1, c2, c3, c4, c5 = (list(g) + [mpf(0)] * 6)[:6]
    return [
        lambda: mpf(0),
        lambda: c,
        lambda: -c ** 2 - 2 * c1,
        lambda: 2 * c ** 3 + 6 * c * c1 + 3 * c2,
        lambda: -6 * c ** 4 - 12 * c1 ** 2 - 24 * c ** 2 * c1 - 12 * c * c2 - 4 * c3,
        lambda: (120 * c ** 3 * c1 + 120 * c * c1 ** 2 + 60 * c ** 2 * c2 + 60 * c1 * c2
                 + 20 * c * c3 + 5 * c4 + 24 * c ** 5),
        lambda: (-720 * c ** 4 * c1 - 1080 * c ** 2 * c1 ** 2 - 240 * c1 ** 3 - 360 * c ** 3 * c2
                 - 720 * c * c1 * c2 - 90 * c2 ** 2 - 120 * c ** 2 * c3 - 120 * c1 * c3
                 - 30 * c * c4 - 6 * c5 - 120 * c ** 6),
    ][n]()


def ulp_of(text: str) -> mpf:
    """One unit in the last printed place of a decimal literal."""
    frac = text.split(".")[1] if "." in text else ""
    return mpf(10) ** (-len(frac))


@dataclass(frozen=True)
class Check:
    name: str
    expected: str
    actual: str
    residual: float
    tolerance: float
    passed: bool


def _check(name, expected, actual, tolerance, digits=12) -> Check:
    exp_v = mpf(expected) if isinstance(expected, str) else expected
    act_v = mpf(actual) if isinstance(actual, str) else actual
    residual = abs(act_v - exp_v)
    fmt = lambda v: v if isinstance(v, str) else mpmath.nstr(v, digits)
    return Check(name, fmt(expected), fmt(actual), float(residual), float(tolerance),
                 bool(residual <= tolerance))


def precision_checks(policy: PrecisionPolicy, table: StieltjesTable | None) -> Iterator[Check]:
    digits = policy.target_digits
    with policy.context():
        for n, printed in enumerate(REFERENCE_ALPHA):
            entry = alpha_entry(n, policy, table)
            shown = len(printed.lstrip("-").replace(".", "").lstrip("0"))
            actual = entry.value.to_string(min(digits, shown))
            # the coarser of the two last places, plus one unit of rounding
            tol = max(ulp_of(printed), ulp_of(actual)) * (1 + mpf("1e-6"))
            yield _check(f"reference_alpha_{n}", printed, actual, tol, digits=shown)

        mm = alpha0_series(policy) + mpmath.euler
        yield _check("meissel_mertens", MEISSEL_MERTENS, mm.value, mpf("1e-20"), 25)

        tight = mpf(10) ** (-(policy.target_digits - 5))
        for n, printed in SPECIAL_CASES.items():
            value = special_case_value(n, policy, table)
            yield _check(f"special_case_{n}_value", printed, value.value, mpf("1e-20"), 25)
            res = special_case_residual(n, policy, table)
            yield _check(f"special_case_{n}_residual", mpf(0), res.value, tight, 5)

        # g_n: series-log on the loaded table vs the written-out polynomials on
        # independently computed Stieltjes constants
        oracle = oracle_stieltjes(5, policy.working_digits)
        g_route = g_series(6, stieltjes_table_for(policy, 5, table))
        for n in range(7):
            poly = stieltjes_g_polynomial(n, oracle.values)
            yield _check(f"g_{n}_polynomial", poly, g_route[n], tight, 20)

        yield Check("stieltjes_checksum", "pinned", "ok" if table is None or table.checksum_ok else "mismatch",
                    0.0, 0.0, table is None or table.checksum_ok)


def sieve_checks(policy: PrecisionPolicy, sieve_limit: int, table: StieltjesTable | None,
                 T: int = 10 ** 6) -> Iterator[Check]:
    log.info("sieving to %d", sieve_limit)
    sieve = sieve_primes(sieve_limit)
    yield from _sieve_checks(policy, sieve, sieve_limit, table, T)


def _sieve_checks(policy, sieve, sieve_limit, table, T):
    T = min(T, sieve_limit)
    alpha = [alpha_entry(n, policy, table).value.value for n in range(12)]

    for n in (0, 1, 2):
        est = limit_estimate(n, sieve_limit, sieve, policy)
        yield _check(f"limit_alpha_{n}", alpha[n], est.estimate.value, 10 * est.tolerance.value)

    for n in (0, 1):
        est = alpha_integral(n, T, sieve, policy)
        yield _check(f"integral_alpha_{n}", alpha[n], est.value.value, est.tail_model.value)

    for m in (1, 2):
        value, tail = recombine(m, T, sieve, policy)
        yield _check(f"recombination_y_{m}", alpha[m], value.value, tail.value)

    N = min(10 ** 7, sieve_limit)
    direct = prime_zeta_direct(2, policy, sieve, limit=N)
    mob = prime_zeta_mobius(2, policy)
    tol = mpf("1e-10") if N >= 10 ** 7 else direct.error_estimate.value
    yield _check("primezeta_s2_direct_vs_mobius", mob.value.value, direct.value.value, tol, 15)

    series = prime_zeta_series("1.2", alpha, 10, policy)
    mob12 = prime_zeta_mobius("1.2", policy)
    yield _check("primezeta_s1.2_series_vs_mobius", mob12.value.value, series.value.value, mpf("1e-3"), 15)

    rem = prime_zeta_remainder_integral(2, T, sieve, policy)
    yield _check("primezeta_s2_remainder_vs_direct", direct.value.value, rem.value.value,
                 max(mpf("1e-5"), rem.error_estimate.value), 15)

    if sieve_limit > 2000:
        shape = remainder_shape_constant(remainder_samples(sieve, 1e3, sieve_limit))
        yield _check("remainder_shape_constant", mpf(0), mpf(shape), mpf(1), 6)


def run_checks(policy: PrecisionPolicy, sieve_limit: int, stieltjes_file=None,
               progress: Callable[[Check], None] | None = None) -> list[Check]:
    table = load_stieltjes_table(stieltjes_file) if stieltjes_file else None
    checks = []
    for gen in (precision_checks(policy, table), sieve_checks(policy, sieve_limit, table)):
        # drain each group under the working precision, report afterwards
        with policy.context():
            group = list(gen)
        for c in group:
            checks.append(c)
            if progress:
                progress(c)
    return checks


def report_csv(checks: list[Check]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["check", "expected", "actual", "residual", "tolerance", "pass"])
    for c in checks:
        w.writerow([c.name, c.expected, c.actual, f"{c.residual:.3e}", f"{c.tolerance:.3e}",
                    "pass" if c.passed else "fail"])
    return buf.getvalue()
