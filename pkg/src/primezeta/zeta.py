"""Riemann zeta derivatives at real points, log-zeta Taylor series,
Stieltjes constants and the g_n coefficients of log((s-1) zeta(s)).

zeta^(m)(a) = sum_j (-log j)^m j^-a is summed directly up to a cutoff J and
the tail is replaced by its Euler-Maclaurin expansion. For f(x) = x^-a P(log x)
every derivative has the same shape, f^(r)(x) = x^-(a+r) P_r(log x) with
P_{r+1} = P_r' - (a+r) P_r, which is all the machinery needs.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import mpmath
from mpmath import mp, mpf

from .errors import DataIntegrityError, DomainError, UnsupportedOrderError
from .precision import DEFAULT_POLICY, HighPrecisionReal, PowerSeries, PrecisionPolicy, series_log

MAX_DERIVATIVE_ORDER = 64
STIELTJES_FILE = "stieltjes.txt"
STIELTJES_DIGITS = 50
STIELTJES_SHA256 = "72a9c88319af16f6fa9208030dc8bcccde380395f60343ee450639a74a348534"


# ---------------------------------------------------------------------------
# Euler-Maclaurin helpers
# ---------------------------------------------------------------------------

def _poly_eval(coeffs, x):
    acc = mpf(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_step(coeffs, shift):
    """P' - shift * P for a coefficient list in ascending powers."""
    out = [-shift * c for c in coeffs]
    for k in range(1, len(coeffs)):
        out[k - 1] += k * coeffs[k]
    return out


def _em_corrections(a, poly, x, eps, max_terms=200):
    """sum_{i>=1} B_2i/(2i)! f^(2i-1)(x) for f(t) = t^-a poly(log t).

    Returns None when the asymptotic terms start growing before falling
    below ``eps`` (the cutoff x is too small for this a).
    """
    L = mpmath.log(x)
    xinv = 1 / x
    p = list(poly)
    scale = x ** (-a)
    total = mpf(0)
    prev = None
    r = 0
    for i in range(1, max_terms + 1):
        while r < 2 * i - 1:
            p = _poly_step(p, a + r)
            scale *= xinv
            r += 1
        term = mpmath.bernoulli(2 * i) / mpmath.factorial(2 * i) * scale * _poly_eval(p, L)
        total += term
        mag = abs(term)
        if mag < eps:
            return total
        if prev is not None and mag > prev:
            return None
        prev = mag
    return None


def _power_log_integral(a, m, L):
    """int_{e^L}^oo (log t)^m t^-a dt for a > 1 and integer m >= 0."""
    b = a - 1
    acc = mpf(0)
    fact_m = mpmath.factorial(m)
    for k in range(m + 1):
        acc += fact_m / mpmath.factorial(k) * L ** k / b ** (m - k + 1)
    return mpmath.exp(-b * L) * acc


def _direct_cutoff(a: float, M: int, digits: int) -> int | None:
    """Smallest J with sum_{j>=J} (log j)^M j^-a < 10^-digits, if modest."""
    target = -digits * math.log(10)
    for J in range(3, 4097):
        lj = math.log(J)
        if lj < M / a:
            continue
        bound = M * math.log(lj) - a * lj + math.log1p(J / (a - 1))
        if bound < target:
            return J
    return None


def _zeta_series_raw(a: mpf, M: int, J: int | None = None) -> list:
    """[zeta^(m)(a) for m = 0..M] at the current mpmath precision; a > 1."""
    digits = mp.dps + 2
    eps = mpf(10) ** (-digits)
    af = float(a)
    if J is None:
        direct = _direct_cutoff(af, M, digits)
        em_J = max(12, int(0.45 * digits) + 1)
        if direct is not None and direct <= em_J:
            return _head_sums(a, M, direct)
        J = em_J
    while True:
        head = _head_sums(a, M, J)
        L = mpmath.log(J)
        Jpow = mpf(J) ** (-a)
        out = []
        for m in range(M + 1):
            poly = [mpf(0)] * m + [mpf(-1) ** m]
            corr = _em_corrections(a, poly, mpf(J), eps)
            if corr is None:
                break
            fJ = Jpow * poly[-1] * L ** m
            tail = (-1) ** m * _power_log_integral(a, m, L) + fJ / 2 - corr
            out.append(head[m] + tail)
        else:
            return out
        J *= 2


def _head_sums(a, M, J):
    """sum_{j<J} (-log j)^m j^-a for m = 0..M."""
    sums = [mpf(0)] * (M + 1)
    sums[0] = mpf(1)
    for j in range(2, J):
        w = mpf(j) ** (-a)
        nl = -mpmath.log(j)
        for m in range(M + 1):
            sums[m] += w
            w *= nl
    return sums


@lru_cache(maxsize=4096)
def _zeta_series_cached(a_key: str, M: int, prec: int, J: int | None) -> tuple:
    with mp.workprec(prec):
        return tuple(_zeta_series_raw(mpf(a_key), M, J))


def zeta_series_mpf(a, M: int, J: int | None = None) -> tuple:
    """Cached zeta^(m)(a), m = 0..M, at the current precision (a > 1 allowed)."""
    a = mpf(a)
    if a <= 1:
        raise DomainError("zeta sum needs a > 1")
    return _zeta_series_cached(mpmath.nstr(a, mp.dps + 5), M, mp.prec, J)


# ---------------------------------------------------------------------------
# Public zeta operations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZetaDerivatives:
    point: mpf
    order: int
    values: tuple  # zeta(a), zeta'(a), ..., zeta^(M)(a)
    policy: PrecisionPolicy = DEFAULT_POLICY

    def __getitem__(self, m: int) -> mpf:
        return self.values[m]


@dataclass(frozen=True)
class LogZetaTaylor:
    point: mpf
    order: int
    coeffs: tuple  # (log zeta)^(m)(a) / m!

    def derivative(self, m: int) -> mpf:
        return self.coeffs[m] * mpmath.factorial(m)


def zeta_derivatives(a, order: int, policy: PrecisionPolicy = DEFAULT_POLICY,
                     cutoff: int | None = None) -> ZetaDerivatives:
    """zeta(a), zeta'(a), ..., zeta^(order)(a) for real a >= 2.

    ``cutoff`` forces the Euler-Maclaurin split point J (otherwise chosen from
    the policy); used to cross-check the tail handling.
    """
    if not 0 <= order <= MAX_DERIVATIVE_ORDER:
        raise UnsupportedOrderError(f"derivative order must be in [0, {MAX_DERIVATIVE_ORDER}]")
    with policy.context():
        av = mpf(getattr(a, "value", a))
        if av < 2:
            raise DomainError("zeta_derivatives is only supported for a >= 2")
        vals = zeta_series_mpf(av, order, cutoff)
        return ZetaDerivatives(av, order, vals, policy)


def log_zeta_series(a, order: int, J: int | None = None) -> PowerSeries:
    """Taylor series of log zeta about a at the current precision."""
    derivs = zeta_series_mpf(a, order, J)
    return series_log(PowerSeries.from_derivatives(a, derivs))


def log_zeta_taylor(a, order: int, policy: PrecisionPolicy = DEFAULT_POLICY) -> LogZetaTaylor:
    """Taylor coefficients of log zeta about a >= 2 up to ``order``."""
    with policy.context():
        av = mpf(getattr(a, "value", a))
        if av < 2:
            raise DomainError("log_zeta_taylor is only supported for a >= 2")
        return LogZetaTaylor(av, order, log_zeta_series(av, order).coeffs)


# ---------------------------------------------------------------------------
# Stieltjes constants
# ---------------------------------------------------------------------------

def stieltjes_oracle(n: int, digits: int) -> mpf:
    """gamma_n from its defining limit, with the Euler-Maclaurin tail.

    gamma_n = sum_{k<=m} (log k)^n / k - (log m)^(n+1)/(n+1)
              - f(m)/2 - sum_i B_2i/(2i)! f^(2i-1)(m),  f(x) = (log x)^n / x.
    Independent of the bundled data; slow but exact to ``digits``.
    """
    if n < 0:
        raise DomainError("Stieltjes index must be non-negative")
    with mp.workdps(digits + 10):
        eps = mpf(10) ** (-(digits + 5))
        m = max(20, digits // 2 + 2 * n + 10)
        while True:
            L = mpmath.log(m)
            poly = [mpf(0)] * n + [mpf(1)]
            corr = _em_corrections(mpf(1), poly, mpf(m), eps)
            if corr is not None:
                break
            m *= 2
        head = mpmath.fsum(mpmath.log(k) ** n / k for k in range(2, m + 1))
        if n == 0:
            head += 1
        val = head - L ** (n + 1) / (n + 1) - L ** n / m / 2 - corr
    with mp.workdps(digits):
        return +val


@dataclass(frozen=True)
class StieltjesTable:
    order: int
    values: tuple  # gamma_0..gamma_order as mpf
    provenance: str  # "bundled" or "oracle"
    digits: int
    checksum_ok: bool = True

    def __getitem__(self, n: int) -> mpf:
        if not 0 <= n <= self.order:
            raise UnsupportedOrderError(f"gamma_{n} is beyond the table order {self.order}")
        return self.values[n]


def _bundled_path() -> Path:
    return Path(str(resources.files("primezeta") / "data" / STIELTJES_FILE))


def file_sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def load_stieltjes_table(path: str | Path | None = None, strict: bool = False) -> StieltjesTable:
    """Read "index value" lines. ``strict`` raises when the checksum differs."""
    p = Path(path) if path is not None else _bundled_path()
    ok = file_sha256(p) == STIELTJES_SHA256
    if strict and not ok:
        raise DataIntegrityError(f"{p}: checksum mismatch")
    values = {}
    with mp.workdps(STIELTJES_DIGITS + 10):
        for line in p.read_text().splitlines():
            if not line.strip():
                continue
            idx, text = line.split()
            values[int(idx)] = mpf(text)
    order = max(values)
    if sorted(values) != list(range(order + 1)):
        raise DataIntegrityError(f"{p}: indices are not contiguous from 0")
    return StieltjesTable(order, tuple(values[i] for i in range(order + 1)),
                          "bundled", STIELTJES_DIGITS, ok)


@lru_cache(maxsize=1)
def bundled_stieltjes() -> StieltjesTable:
    return load_stieltjes_table(strict=True)


@lru_cache(maxsize=8)
def oracle_stieltjes(order: int, digits: int) -> StieltjesTable:
    return StieltjesTable(order, tuple(stieltjes_oracle(n, digits) for n in range(order + 1)),
                          "oracle", digits)


def stieltjes_table_for(policy: PrecisionPolicy, order: int,
                        table: StieltjesTable | None = None) -> StieltjesTable:
    """The explicit table if given, else bundled data, else the oracle above 50 digits."""
    if table is not None:
        return table
    if policy.working_digits <= STIELTJES_DIGITS:
        return bundled_stieltjes()
    return oracle_stieltjes(max(order, 16), policy.working_digits)


def stieltjes(n: int, policy: PrecisionPolicy = DEFAULT_POLICY,
              table: StieltjesTable | None = None) -> HighPrecisionReal:
    tab = stieltjes_table_for(policy, n, table)
    value = tab[n]
    with policy.context():
        return HighPrecisionReal(+value, policy)


def g_series(n_max: int, table: StieltjesTable) -> list:
    """g_0..g_{n_max} as mpf at the current precision."""
    if n_max > table.order + 1:
        raise UnsupportedOrderError(f"g_{n_max} needs gamma_{n_max - 1}; table order is {table.order}")
    # (s-1) zeta(s) = 1 + sum_{k>=0} (-1)^k gamma_k / k! (s-1)^(k+1)
    coeffs = [mpf(1)] + [(-1) ** (m - 1) * table[m - 1] / mpmath.factorial(m - 1)
                         for m in range(1, n_max + 1)]
    logs = series_log(PowerSeries(1, coeffs)).coeffs
    return [mpf(0)] + [logs[m] * mpmath.factorial(m) for m in range(1, n_max + 1)]


def g_coefficients(n_max: int, policy: PrecisionPolicy = DEFAULT_POLICY,
                   table: StieltjesTable | None = None) -> list[HighPrecisionReal]:
    """Taylor coefficients g_n of log zeta(s) + log(s-1) about s = 1, scaled by n!."""
    tab = stieltjes_table_for(policy, max(n_max - 1, 0), table)
    with policy.context():
        return [HighPrecisionReal(g, policy) for g in g_series(n_max, tab)]
