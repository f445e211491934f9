"""Expansion coefficients alpha_n of the prime zeta function about s = 1.

The precision route: alpha_n = g_n + sum_{k>=2} mu(k)/k * k^n (log zeta)^(n)(k),
where g_n are the log-zeta coefficients from :mod:`primezeta.zeta`. The k-th
term decays like k^(n-1) (log 2)^n 2^-k, so the sum is cut at the first
squarefree K with K^n 2^-K below the working resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
from mpmath import mp, mpf

from .errors import DomainError, UnsupportedOrderError
from .precision import DEFAULT_POLICY, HighPrecisionReal, PrecisionPolicy
from .tables import mobius_table
from .zeta import StieltjesTable, g_series, log_zeta_series, stieltjes_table_for, zeta_series_mpf

MAX_ALPHA_ORDER = 64
METHODS = ("mobius", "limit", "integral")


@dataclass(frozen=True)
class TruncationReport:
    terms_used: int
    last_term_magnitude: HighPrecisionReal
    tail_bound: HighPrecisionReal


@dataclass(frozen=True)
class AlphaEntry:
    n: int
    value: HighPrecisionReal
    method: str
    truncation: TruncationReport | None = None
    tolerance: HighPrecisionReal | None = None
    certified_digits: int = 0


@dataclass
class AlphaTable:
    """alpha_n values keyed by (n, method)."""

    entries: list = field(default_factory=list)

    def add(self, entry: AlphaEntry) -> None:
        if entry.method not in METHODS:
            raise DomainError(f"unknown method {entry.method!r}")
        if self.get(entry.n, entry.method) is not None:
            raise DomainError(f"duplicate entry for n={entry.n}, method={entry.method}")
        self.entries.append(entry)

    def get(self, n: int, method: str = "mobius") -> AlphaEntry | None:
        for e in self.entries:
            if e.n == n and e.method == method:
                return e
        return None

    def values(self, method: str = "mobius") -> dict:
        return {e.n: e.value for e in self.entries if e.method == method}

    def agree(self, n: int, m1: str, m2: str) -> bool:
        """Whether two methods agree within the weaker of their tolerances."""
        a, b = self.get(n, m1), self.get(n, m2)
        tol = max(float(a.tolerance.value), float(b.tolerance.value))
        return abs(float(a.value.value - b.value.value)) <= tol

    def __len__(self) -> int:
        return len(self.entries)


def mobius_cutoff(n: int, digits: int) -> int:
    """Smallest squarefree K >= 2 with K^n 2^-K < 10^-digits."""
    target = -digits * math.log(10)
    k = 2
    while True:
        if n * math.log(k) - k * math.log(2) < target and _squarefree(k):
            return k
        k += 1


def _squarefree(k: int) -> bool:
    d = 2
    while d * d <= k:
        if k % (d * d) == 0:
            return False
        d += 1
    return True


def _extra_digits(n: int, K: int) -> int:
    # k^n amplifies absolute errors of the log-zeta derivatives
    return int(math.ceil(n * math.log10(K))) + 5


def _report(K: int, n: int, last: mpf, policy: PrecisionPolicy) -> TruncationReport:
    with policy.context():
        tail = 4 * mpf(K) ** n * mpf(2) ** (-K)
        return TruncationReport(K, HighPrecisionReal(+abs(last), policy),
                                HighPrecisionReal(max(tail, abs(last)), policy))


def _certified(value: mpf, tail: mpf, policy: PrecisionPolicy, data_digits: int) -> int:
    floor_err = mpf(10) ** (-min(policy.working_digits, data_digits)) * max(1, abs(value)) * 10
    err = tail + floor_err
    if value == 0:
        return 0
    return max(0, min(policy.target_digits, int(mpmath.floor(mpmath.log10(abs(value) / err)))))


def mobius_sum(n: int, K: int, J: int | None = None) -> tuple[mpf, mpf]:
    """sum_{2<=k<=K} mu(k) k^(n-1) (log zeta)^(n)(k) at the current precision.

    Returns (sum, magnitude of the last nonzero term). Ascending k, sequential.
    """
    mu = mobius_table(K)
    total = mpf(0)
    last = mpf(0)
    fact = mpmath.factorial(n)
    for k in range(2, K + 1):
        if mu[k] == 0:
            continue
        deriv = log_zeta_series(k, n, J).coeffs[n] * fact
        # exact integer power, converted once
        term = mu[k] * mpf(k ** n) / k * deriv
        total += term
        last = term
    return total, last


def alpha_entry(n: int, policy: PrecisionPolicy = DEFAULT_POLICY,
                table: StieltjesTable | None = None, k_max: int | None = None) -> AlphaEntry:
    """alpha_n by the Moebius route, with truncation report and certificate."""
    if not 0 <= n <= MAX_ALPHA_ORDER:
        raise UnsupportedOrderError(f"alpha_n is supported for 0 <= n <= {MAX_ALPHA_ORDER}")
    K = k_max if k_max is not None else mobius_cutoff(n, policy.working_digits)
    tab = stieltjes_table_for(policy, max(n - 1, 0), table)
    with policy.context(_extra_digits(n, K)):
        g_n = g_series(n, tab)[n]
        s, last = mobius_sum(n, K)
        value = g_n + s
        report = _report(K, n, last, policy)
        certified = _certified(value, report.tail_bound.value, policy, tab.digits)
    with policy.context():
        hv = HighPrecisionReal(+value, policy)
    return AlphaEntry(n, hv, "mobius", report, report.tail_bound, certified)


def alpha_mobius(n: int, policy: PrecisionPolicy = DEFAULT_POLICY,
                 table: StieltjesTable | None = None) -> HighPrecisionReal:
    return alpha_entry(n, policy, table).value


def alpha0_entry(policy: PrecisionPolicy = DEFAULT_POLICY, k_max: int | None = None) -> AlphaEntry:
    """sum_{k>=2} mu(k)/k log zeta(k), summed on its own (no g_n, no Taylor series)."""
    K = k_max if k_max is not None else mobius_cutoff(0, policy.working_digits)
    mu = mobius_table(K)
    with policy.context(5):
        total = mpf(0)
        last = mpf(0)
        for k in range(2, K + 1):
            if mu[k] == 0:
                continue
            term = mu[k] * mpmath.log(zeta_series_mpf(k, 0)[0]) / k
            total += term
            last = term
        report = _report(K, 0, last, policy)
        certified = _certified(total, report.tail_bound.value, policy, policy.working_digits)
    with policy.context():
        hv = HighPrecisionReal(+total, policy)
    return AlphaEntry(0, hv, "mobius", report, report.tail_bound, certified)


def alpha0_series(policy: PrecisionPolicy = DEFAULT_POLICY) -> HighPrecisionReal:
    return alpha0_entry(policy).value


def special_case_value(n: int, policy: PrecisionPolicy = DEFAULT_POLICY,
                       table: StieltjesTable | None = None) -> HighPrecisionReal:
    """Hand-expanded closed forms for alpha_1, alpha_2, alpha_3.

    Written out term by term (no series log) so they check the generic path.
    """
    if n not in (1, 2, 3):
        raise UnsupportedOrderError("closed forms exist only for n in {1, 2, 3}")
    K = mobius_cutoff(n, policy.working_digits)
    tab = stieltjes_table_for(policy, 2, table)
    mu = mobius_table(K)
    with policy.context(_extra_digits(n, K)):
        g, g1, g2 = tab[0], tab[1], tab[2]
        if n == 1:
            total = +g
        elif n == 2:
            total = -g ** 2 - 2 * g1
        else:
            total = 2 * g ** 3 + 6 * g * g1 + 3 * g2
        for k in range(2, K + 1):
            if mu[k] == 0:
                continue
            z, z1, z2, z3 = zeta_series_mpf(k, 3)
            r1, r2, r3 = z1 / z, z2 / z, z3 / z
            if n == 1:
                bracket = r1
            elif n == 2:
                bracket = k * (-r1 ** 2 + r2)
            else:
                bracket = k ** 2 * (2 * r1 ** 3 - 3 * r1 * r2 + r3)
            total += mu[k] * bracket
    with policy.context():
        return HighPrecisionReal(+total, policy)


def special_case_residual(n: int, policy: PrecisionPolicy = DEFAULT_POLICY,
                          table: StieltjesTable | None = None) -> HighPrecisionReal:
    """Closed form minus the generic Moebius-route value."""
    closed = special_case_value(n, policy, table)
    generic = alpha_mobius(n, policy, table)
    return closed - generic


def alpha_table_mobius(n_max: int, policy: PrecisionPolicy = DEFAULT_POLICY,
                       table: StieltjesTable | None = None) -> AlphaTable:
    out = AlphaTable()
    for n in range(n_max + 1):
        out.add(alpha_entry(n, policy, table))
    return out
