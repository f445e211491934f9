"""P(s) = sum_p p^-s on the real axis s > 1, by four independent routes.

direct             partial sum over the sieve plus the li-model tail
mobius             sum_k mu(k)/k log zeta(ks)
series             log(1/(s-1)) + sum_n alpha_n (s-1)^n / n!
remainder_integral log(1/(s-1)) + s int_1^T t^(-s-1) (pi(t) - li(t)) dt

Derivatives follow the positive-sum convention: :func:`prime_zeta_derivative`
returns sum_p log^m(p) p^-s, and P^(m)(s) is (-1)^m times that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import mpmath
import numpy as np
from mpmath import mpf

from .coefficients import AlphaTable
from .empirical import _Neumaier, _remainder_at, longdouble_to_mpf
from .errors import DomainError, OutOfRangeError
from .precision import DEFAULT_POLICY, HighPrecisionReal, PrecisionPolicy, as_mpf
from .tables import PrimeSieve, mobius_table
from .zeta import zeta_series_mpf

ROUTES = ("direct", "mobius", "series", "remainder_integral")


@dataclass(frozen=True)
class PrimeZetaValue:
    s: mpf
    value: HighPrecisionReal
    method: str
    error_estimate: HighPrecisionReal


def _real_s(s) -> mpf:
    return as_mpf(s) if not isinstance(s, str) else mpf(s)


def _require_convergent(s: mpf, what: str) -> None:
    if s <= 1:
        raise DomainError(f"{what}: s = {mpmath.nstr(s, 10)} is not > 1 "
                          "(the prime sum diverges at s <= 1; the real segment (1/2, 1] is a branch cut)")


def _prime_power_log_sum(sieve: PrimeSieve, s: mpf, m: int, upto: int) -> mpf:
    """sum_{p<=upto} log^m(p) p^-s in extended precision."""
    acc = _Neumaier()
    sl = np.longdouble(mpmath.nstr(s, 25))
    for ps in sieve.iter_primes(upto):
        if not len(ps):
            continue
        logs = np.log(ps.astype(np.longdouble))
        terms = np.exp(-sl * logs)
        if m:
            terms = terms * logs ** m
        acc.add(np.sum(terms, dtype=np.longdouble))
    return longdouble_to_mpf(acc.value)


def _li_tail(s: mpf, m: int, N) -> mpf:
    """int_N^oo log^(m-1)(t) t^-s dt, the li-density model of sum_{p>N} log^m(p) p^-s."""
    z = (s - 1) * mpmath.log(N)
    return mpmath.gammainc(m, z) / (s - 1) ** m


def _rh_shape_error(s: mpf, m: int, N) -> mpf:
    # |f(t)| <= sqrt(t) log t with constant 1, pushed through the partial summation
    L = mpmath.log(N)
    return (1 + s / (s - mpf(1) / 2)) * mpf(N) ** (mpf(1) / 2 - s) * L ** (m + 1)


def prime_zeta_direct(s, policy: PrecisionPolicy = DEFAULT_POLICY, sieve: PrimeSieve | None = None,
                      limit: int | None = None, tail: str = "li") -> PrimeZetaValue:
    """sum_{p<=N} p^-s over the sieve, N = ``limit`` or the sieve limit.

    ``tail="li"`` adds int_N^oo t^-s / log t dt (= E1((s-1) log N)) for the
    primes beyond N and reports the remainder-shape error of that model;
    ``tail="none"`` reports the crude bound N^(1-s)/(s-1) instead.
    """
    if sieve is None:
        raise DomainError("prime_zeta_direct needs a sieve")
    if tail not in ("li", "none"):
        raise DomainError(f"unknown tail model {tail!r}")
    with policy.context():
        sv = _real_s(s)
        _require_convergent(sv, "direct prime sum")
        N = sieve.limit if limit is None else int(limit)
        if N > sieve.limit:
            raise OutOfRangeError(f"N = {N} exceeds sieve limit {sieve.limit}")
        total = _prime_power_log_sum(sieve, sv, 0, N)
        rounding = abs(total) * mpf(10) ** -17
        if tail == "li":
            total += _li_tail(sv, 0, N)
            err = _rh_shape_error(sv, 0, N) + rounding
        else:
            err = mpf(N) ** (1 - sv) / (sv - 1) + rounding
        return PrimeZetaValue(sv, HighPrecisionReal(total, policy), "direct",
                              HighPrecisionReal(err, policy))


def prime_zeta_derivative(m: int, s, sieve: PrimeSieve, policy: PrecisionPolicy = DEFAULT_POLICY,
                          limit: int | None = None, tail: bool = True) -> HighPrecisionReal:
    """sum_p log^m(p) p^-s  (so P^(m)(s) = (-1)^m times this value)."""
    if m < 0:
        raise DomainError("derivative order must be non-negative")
    with policy.context():
        sv = _real_s(s)
        _require_convergent(sv, "prime zeta derivative")
        N = sieve.limit if limit is None else int(limit)
        total = _prime_power_log_sum(sieve, sv, m, N)
        if tail:
            total += _li_tail(sv, m, N)
        return HighPrecisionReal(total, policy)


def prime_zeta_mobius(s, policy: PrecisionPolicy = DEFAULT_POLICY) -> PrimeZetaValue:
    """sum_{k>=1} mu(k)/k log zeta(ks), cut when 2^(-ks) drops below the resolution."""
    with policy.context(5):
        sv = _real_s(s)
        _require_convergent(sv, "Moebius series")
        digits = policy.working_digits
        K = max(2, int(math.ceil(digits * math.log2(10) / float(sv))) + 1)
        mu = mobius_table(K)
        total = mpf(0)
        for k in range(1, K + 1):
            if mu[k] == 0:
                continue
            total += mu[k] * mpmath.log(zeta_series_mpf(k * sv, 0)[0]) / k
        err = 2 * mpf(2) ** (-(K + 1) * sv) + mpf(10) ** (-digits)
    with policy.context():
        return PrimeZetaValue(sv, HighPrecisionReal(+total, policy), "mobius",
                              HighPrecisionReal(+err, policy))


def _alpha_values(alpha) -> list:
    if isinstance(alpha, AlphaTable):
        vals = alpha.values("mobius")
        return [as_mpf(vals[n]) for n in range(len(vals))]
    return [as_mpf(a) for a in alpha]


def check_series_domain(s) -> None:
    """Raise unless 1 < s < 3/2 (inside the disk, off the cut)."""
    if s <= 1:
        raise DomainError("series route: s <= 1 lies on or beyond the branch cut (1/2, 1]")
    if s - 1 >= mpf(1) / 2:
        raise DomainError("series route: |s - 1| must be below the radius 1/2")


def prime_zeta_series(s, alpha: AlphaTable | Sequence, N: int = 10,
                      policy: PrecisionPolicy = DEFAULT_POLICY) -> PrimeZetaValue:
    """log(1/(s-1)) + sum_{n<=N} alpha_n (s-1)^n / n!  for 1 < s < 3/2.

    The error model is |alpha_{N+1}| |s-1|^(N+1) / (N+1)!. Without alpha_{N+1}
    in the table it is extrapolated as 2 alpha_N^2 / alpha_{N-1}.
    """
    with policy.context():
        sv = _real_s(s)
        check_series_domain(sv)
        h = sv - 1
        a = _alpha_values(alpha)
        if len(a) < N + 1:
            raise DomainError(f"series route needs alpha_0..alpha_{N}; got {len(a)} values")
        total = -mpmath.log(h)
        for n in range(N + 1):
            total += a[n] * h ** n / mpmath.factorial(n)
        if len(a) > N + 1:
            nxt = abs(a[N + 1])
        else:
            nxt = 2 * a[N] ** 2 / abs(a[N - 1]) if N >= 1 else abs(a[N])
        err = nxt * h ** (N + 1) / mpmath.factorial(N + 1)
        return PrimeZetaValue(sv, HighPrecisionReal(total, policy), "series",
                              HighPrecisionReal(abs(err), policy))


def prime_zeta_remainder_integral(s, T, sieve: PrimeSieve,
                                  policy: PrecisionPolicy = DEFAULT_POLICY) -> PrimeZetaValue:
    """log(1/(s-1)) + s int_1^T t^(-s-1) f(t) dt, f = pi - li.

    The pi-part is exact between jumps; by parts the li-part leaves
    -log(s-1) - T^-s li(T) - E1((s-1) log T) once the log log divergences at
    t = 1 cancel, so the whole expression collapses to
    sum_{p<=T} p^-s - T^-s f(T) + E1((s-1) log T).
    """
    with policy.context():
        sv = _real_s(s)
        _require_convergent(sv, "remainder integral")
        Tv = as_mpf(T)
        if Tv < 2:
            raise DomainError("remainder integral needs T >= 2")
        if Tv > sieve.limit:
            raise OutOfRangeError(f"T = {T} exceeds sieve limit {sieve.limit}")
        upto = int(mpmath.floor(Tv))
        prime_part = _prime_power_log_sum(sieve, sv, 0, upto)
        f = _remainder_at(Tv, sieve)
        value = prime_part - Tv ** (-sv) * f + mpmath.e1((sv - 1) * mpmath.log(Tv))
        err = Tv ** (mpf(1) / 2 - sv) * mpmath.log(Tv) + abs(prime_part) * mpf(10) ** -17
        return PrimeZetaValue(sv, HighPrecisionReal(value, policy), "remainder_integral",
                              HighPrecisionReal(err, policy))
