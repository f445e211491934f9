"""Sieve-backed routes to alpha_n: prime-sum limits and the remainder integral.

Prime sums S_i(x) = sum_{p<=x} (log p)^i / p are accumulated in 80-bit
extended precision: pairwise within a segment, then Neumaier-compensated
across segments in ascending order, so results do not depend on how the
sieve was produced.

The integral route never integrates numerically. pi(t) is a step function
and every weight used here has a closed antiderivative, so the pi-part is a
finite sum over primes; the li-part is integrated by parts with the log log
divergence at t = 1 cancelled in closed form. What remains is

    int_1^T (log^n t - n log^(n-1) t) / t^2 f(t) dt
        = S_n(T) - log^n(T)/n - log^n(T) f(T)/T              (n >= 1)
        = S_0(T) - log log T - gamma - f(T)/T                 (n = 0)

    (-1)^j c_j(T) = sum_{i<=j} j!/i! S_i(T) + V_j(T) f(T)
                    - j! (gamma + log log T + sum_{1<=i<=j} log^i(T)/(i i!))

with V_j(t) = -(1/t) sum_{i<=j} j!/i! log^i t and f = pi - li.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import mpmath
import numpy as np
from mpmath import mpf

from .errors import DomainError, OutOfRangeError
from .precision import DEFAULT_POLICY, HighPrecisionReal, PrecisionPolicy, log_integral_mpf
from .tables import PrimeSieve

DEFAULT_CHECKPOINTS = tuple(10 ** k for k in range(2, 9))
# significant digits carried by the 80-bit prime sums
EXTENDED_DIGITS = 18


def longdouble_to_mpf(x: np.longdouble) -> mpf:
    return mpf(np.format_float_positional(x, unique=True, trim="-"))


class _Neumaier:
    __slots__ = ("s", "c")

    def __init__(self) -> None:
        self.s = np.longdouble(0)
        self.c = np.longdouble(0)

    def add(self, x: np.longdouble) -> None:
        t = self.s + x
        if abs(self.s) >= abs(x):
            self.c += (self.s - t) + x
        else:
            self.c += (x - t) + self.s
        self.s = t

    @property
    def value(self) -> np.longdouble:
        return self.s + self.c


def prime_log_sums(sieve: PrimeSieve, n_max: int, xs: Sequence[int]) -> dict:
    """{x: [S_0(x), ..., S_{n_max}(x)]} for each x, as mpf, in one sieve pass."""
    xs = sorted({int(x) for x in xs})
    if not xs:
        return {}
    if xs[-1] > sieve.limit:
        raise OutOfRangeError(f"x = {xs[-1]} exceeds sieve limit {sieve.limit}")
    acc = [_Neumaier() for _ in range(n_max + 1)]
    out = {}
    pending = list(xs)
    for ps in sieve.iter_primes(xs[-1]):
        pieces = []
        start = 0
        while pending and (len(ps) == 0 or pending[0] < ps[-1]):
            cut = int(np.searchsorted(ps, pending[0], side="right"))
            pieces.append((ps[start:cut], pending.pop(0)))
            start = cut
        pieces.append((ps[start:], None))
        for chunk, checkpoint in pieces:
            if len(chunk):
                p = chunk.astype(np.longdouble)
                inv = 1 / p
                logs = np.log(p)
                term = inv
                for i in range(n_max + 1):
                    acc[i].add(np.sum(term, dtype=np.longdouble))
                    term = term * logs
            if checkpoint is not None:
                out[checkpoint] = [longdouble_to_mpf(a.value) for a in acc]
    for x in pending:
        out[x] = [longdouble_to_mpf(a.value) for a in acc]
    return out


def _mertens_from_sums(n: int, x, sums) -> mpf:
    L = mpmath.log(x)
    if n == 0:
        return sums[0] - mpmath.log(L)
    return sums[n] - L ** n / n


def mertens_partial(n: int, x: int, sieve: PrimeSieve,
                    policy: PrecisionPolicy = DEFAULT_POLICY) -> HighPrecisionReal:
    """sum_{p<=x} log^n p / p - log^n x / n   (n >= 1), or  sum 1/p - log log x (n = 0)."""
    if n < 0:
        raise DomainError("n must be non-negative")
    if x < 2:
        raise DomainError("x must be at least 2")
    with policy.context():
        sums = prime_log_sums(sieve, n, [x])[int(x)]
        return HighPrecisionReal(_mertens_from_sums(n, int(x), sums), policy)


@dataclass(frozen=True)
class PrimeSumSeries:
    n: int
    checkpoints: tuple  # ((x, partial_value), ...) with x strictly increasing


class LimitEstimate(NamedTuple):
    estimate: HighPrecisionReal
    tolerance: HighPrecisionReal


def _limit_tolerance(n: int, x) -> mpf:
    L = mpmath.log(x)
    return L ** (n + 1) / mpmath.sqrt(x)


def _estimate_from_partial(n: int, partial: mpf) -> mpf:
    value = (-1) ** n * partial
    return value - mpmath.euler if n == 0 else value


def prime_sum_series(n: int, sieve: PrimeSieve, checkpoints: Iterable[int] = DEFAULT_CHECKPOINTS,
                     policy: PrecisionPolicy = DEFAULT_POLICY) -> PrimeSumSeries:
    xs = sorted(int(x) for x in checkpoints if x <= sieve.limit)
    with policy.context():
        sums = prime_log_sums(sieve, n, xs)
        rows = tuple((x, HighPrecisionReal(_mertens_from_sums(n, x, sums[x]), policy)) for x in xs)
    return PrimeSumSeries(n, rows)


def limit_estimate(n: int, x_max: int, sieve: PrimeSieve,
                   policy: PrecisionPolicy = DEFAULT_POLICY) -> LimitEstimate:
    """alpha_n from the truncated limit formula, with tolerance log^(n+1)(x)/sqrt(x)."""
    partial = mertens_partial(n, x_max, sieve, policy)
    with policy.context():
        est = _estimate_from_partial(n, partial.value)
        return LimitEstimate(HighPrecisionReal(est, policy),
                             HighPrecisionReal(_limit_tolerance(n, x_max), policy))


def convergence_csv(series: PrimeSumSeries) -> str:
    """CSV with header x,n,partial,estimate,tolerance."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "n", "partial", "estimate", "tolerance"])
    for x, partial in series.checkpoints:
        with partial.policy.context():
            est = _estimate_from_partial(series.n, partial.value)
            tol = _limit_tolerance(series.n, x)
            digits = min(partial.policy.target_digits, EXTENDED_DIGITS)
            w.writerow([x, series.n, partial.to_string(digits),
                        mpmath.nstr(est, digits), mpmath.nstr(tol, 6)])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Integral route
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntegralEstimate:
    n: int
    T: float
    value: HighPrecisionReal
    tail_model: HighPrecisionReal

    @property
    def tolerance(self) -> HighPrecisionReal:
        return self.tail_model


@dataclass(frozen=True)
class RemainderSample:
    t: float
    f_value: float


def _remainder_at(T: mpf, sieve: PrimeSieve) -> mpf:
    # plain right-closed count: the weight's antiderivative vanishes at a jump at T
    return sieve.count_upto(int(mpmath.floor(T))) - log_integral_mpf(T)


def _integral_setup(T, sieve: PrimeSieve, n_max: int):
    Tv = mpf(getattr(T, "value", T))
    if Tv < 2:
        raise DomainError("integral route needs T >= 2")
    if Tv > sieve.limit:
        raise OutOfRangeError(f"T = {T} exceeds sieve limit {sieve.limit}")
    xi = int(mpmath.floor(Tv))
    sums = prime_log_sums(sieve, n_max, [xi])[xi]
    return Tv, sums, _remainder_at(Tv, sieve)


def alpha_integral(n: int, T, sieve: PrimeSieve,
                   policy: PrecisionPolicy = DEFAULT_POLICY) -> IntegralEstimate:
    """(-1)^n int_1^T (log^n t - n log^(n-1) t)/t^2 (pi(t) - li(t)) dt."""
    if n < 0:
        raise DomainError("n must be non-negative")
    with policy.context():
        Tv, sums, f = _integral_setup(T, sieve, n)
        L = mpmath.log(Tv)
        if n == 0:
            value = sums[0] - mpmath.log(L) - mpmath.euler - f / Tv
        else:
            value = (-1) ** n * (sums[n] - L ** n / n - L ** n * f / Tv)
        return IntegralEstimate(n, float(Tv), HighPrecisionReal(value, policy),
                                HighPrecisionReal(_limit_tolerance(n, Tv), policy))


def c_integral(j: int, T, sieve: PrimeSieve,
               policy: PrecisionPolicy = DEFAULT_POLICY) -> IntegralEstimate:
    """c_j(T) = (-1)^j int_1^T log^j(t)/t^2 (pi(t) - li(t)) dt."""
    if j < 0:
        raise DomainError("j must be non-negative")
    with policy.context():
        Tv, sums, f = _integral_setup(T, sieve, j)
        L = mpmath.log(Tv)
        fj = mpmath.factorial(j)
        weights = [fj / mpmath.factorial(i) for i in range(j + 1)]
        prime_part = mpmath.fsum(w * s for w, s in zip(weights, sums))
        V = -mpmath.fsum(w * L ** i for i, w in enumerate(weights)) / Tv
        li_series = mpmath.fsum(L ** i / (i * mpmath.factorial(i)) for i in range(1, j + 1))
        value = (-1) ** j * (prime_part + V * f - fj * (mpmath.euler + mpmath.log(L) + li_series))
        return IntegralEstimate(j, float(Tv), HighPrecisionReal(value, policy),
                                HighPrecisionReal(_limit_tolerance(j, Tv), policy))


def recombine(m: int, T, sieve: PrimeSieve, policy: PrecisionPolicy = DEFAULT_POLICY
              ) -> tuple[HighPrecisionReal, HighPrecisionReal]:
    """(m c_{m-1}(T) + c_m(T), combined tail model); m = 0 gives c_0."""
    cm = c_integral(m, T, sieve, policy)
    if m == 0:
        return cm.value, cm.tail_model
    prev = c_integral(m - 1, T, sieve, policy)
    return prev.value * m + cm.value, prev.tail_model * m + cm.tail_model


def remainder_samples(sieve: PrimeSieve, lo: float = 1e3, hi: float | None = None,
                      count: int = 200) -> list[RemainderSample]:
    """f(t) = pi(t) - li(t) on a log-spaced grid, nudged to t + 1/2 off the jumps."""
    hi = min(hi or sieve.limit, sieve.limit - 1)
    out = []
    with mpmath.workdps(25):
        for t in np.unique(np.geomspace(lo, hi, count).astype(np.int64)):
            tt = mpf(int(t)) + mpf("0.5")
            out.append(RemainderSample(float(tt), float(_remainder_at(tt, sieve))))
    return out


def remainder_shape_constant(samples: Sequence[RemainderSample]) -> float:
    """max |f(t)| / (sqrt(t) log t) over the samples."""
    return max(abs(s.f_value) / (math.sqrt(s.t) * math.log(s.t)) for s in samples)
