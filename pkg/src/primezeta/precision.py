"""Working-precision policy, decimal I/O, truncated power series and li(x).

All multiprecision arithmetic goes through mpmath. A :class:`PrecisionPolicy`
fixes the number of decimal digits the caller wants (``target_digits``) plus
guard digits; every computation runs inside ``policy.context()`` so the
global mpmath precision is restored afterwards.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import mpmath
from mpmath import mp, mpf

from .errors import DomainError, ParseError

_DECIMAL_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


@dataclass(frozen=True)
class PrecisionPolicy:
    target_digits: int = 30
    guard_digits: int = 15
    rounding: str = "nearest-even"

    def __post_init__(self) -> None:
        if self.target_digits < 1:
            raise DomainError("target_digits must be positive")
        if self.guard_digits < 10:
            raise DomainError("guard_digits must be at least 10")
        if self.rounding != "nearest-even":
            raise DomainError(f"unsupported rounding mode {self.rounding!r}")

    @property
    def working_digits(self) -> int:
        return self.target_digits + self.guard_digits

    @property
    def epsilon(self) -> mpf:
        """10^-working_digits, the absolute resolution used in stopping rules."""
        with self.context():
            return mpf(10) ** (-self.working_digits)

    def context(self, extra_digits: int = 0):
        """Context manager setting mpmath to the working precision."""
        return mp.workdps(self.working_digits + extra_digits)


DEFAULT_POLICY = PrecisionPolicy()


def format_decimal(value: mpf, digits: int) -> str:
    """Fixed-point string with ``digits`` significant digits, zeros kept."""
    return mpmath.nstr(value, digits, strip_zeros=False,
                       min_fixed=-mpmath.inf, max_fixed=mpmath.inf)


@dataclass(frozen=True)
class HighPrecisionReal:
    """A multiprecision real tied to the policy it was computed under."""

    value: mpf
    policy: PrecisionPolicy = DEFAULT_POLICY

    @classmethod
    def parse(cls, text: str, policy: PrecisionPolicy = DEFAULT_POLICY) -> "HighPrecisionReal":
        return make_real(text, policy)

    def to_string(self, digits: int | None = None) -> str:
        with self.policy.context():
            return format_decimal(self.value, digits or self.policy.target_digits)

    def exact_string(self) -> str:
        """Enough digits that parsing at the same policy round-trips exactly."""
        with self.policy.context():
            return format_decimal(self.value, mpmath.libmp.repr_dps(mp.prec))

    def __str__(self) -> str:
        return self.to_string()

    def __float__(self) -> float:
        return float(self.value)

    def _wrap(self, v) -> "HighPrecisionReal":
        return HighPrecisionReal(v, self.policy)

    @staticmethod
    def _raw(other):
        return other.value if isinstance(other, HighPrecisionReal) else other

    def _binary(self, other, op):
        with self.policy.context():
            return self._wrap(op(self.value, mpf(self._raw(other))))

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b)

    def __neg__(self):
        return self._wrap(-self.value)

    def __abs__(self):
        return self._wrap(abs(self.value))

    def __eq__(self, other) -> bool:
        if isinstance(other, (HighPrecisionReal, int, float, mpf)):
            return self.value == self._raw(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.value)

    def __lt__(self, other) -> bool:
        return self.value < self._raw(other)

    def __le__(self, other) -> bool:
        return self.value <= self._raw(other)

    def __gt__(self, other) -> bool:
        return self.value > self._raw(other)

    def __ge__(self, other) -> bool:
        return self.value >= self._raw(other)


def make_real(text: str, policy: PrecisionPolicy = DEFAULT_POLICY) -> HighPrecisionReal:
    """Parse a signed decimal literal, rounding to the working precision."""
    if not isinstance(text, str) or not _DECIMAL_RE.match(text.strip()):
        raise ParseError(f"not a decimal literal: {text!r}")
    with policy.context():
        return HighPrecisionReal(mpf(text.strip()), policy)


def as_mpf(x) -> mpf:
    """Coerce HighPrecisionReal / str / number to an mpf at current precision."""
    if isinstance(x, HighPrecisionReal):
        return +x.value
    return mpf(x)


# ---------------------------------------------------------------------------
# Truncated power series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PowerSeries:
    """Taylor coefficients c_0..c_N of a function about ``center``.

    Arithmetic keeps the smaller order of the two operands; coefficients
    beyond ``order`` are unknown, not zero.
    """

    center: mpf
    coeffs: tuple

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise DomainError("a power series needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(mpf(c) for c in self.coeffs))
        object.__setattr__(self, "center", mpf(self.center))

    @classmethod
    def from_derivatives(cls, center, derivs: Sequence) -> "PowerSeries":
        """Build from f(a), f'(a), ..., f^(N)(a)."""
        return cls(center, tuple(mpf(d) / mpmath.factorial(m) for m, d in enumerate(derivs)))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def derivatives(self) -> list:
        """f^(m)(center) for m = 0..order."""
        return [c * mpmath.factorial(m) for m, c in enumerate(self.coeffs)]

    def truncate(self, order: int) -> "PowerSeries":
        return PowerSeries(self.center, self.coeffs[: order + 1])

    def _check(self, other: "PowerSeries") -> int:
        if self.center != other.center:
            raise DomainError("power series expanded about different points")
        return min(self.order, other.order)

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        n = self._check(other)
        return PowerSeries(self.center, [self.coeffs[i] + other.coeffs[i] for i in range(n + 1)])

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        n = self._check(other)
        return PowerSeries(self.center, [self.coeffs[i] - other.coeffs[i] for i in range(n + 1)])

    def __neg__(self) -> "PowerSeries":
        return PowerSeries(self.center, [-c for c in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, PowerSeries):
            k = mpf(other)
            return PowerSeries(self.center, [k * c for c in self.coeffs])
        n = self._check(other)
        a, b = self.coeffs, other.coeffs
        return PowerSeries(self.center,
                           [mpmath.fsum(a[i] * b[m - i] for i in range(m + 1)) for m in range(n + 1)])

    __rmul__ = __mul__

    def __call__(self, x) -> mpf:
        h = mpf(x) - self.center
        return mpmath.polyval(list(reversed(self.coeffs)), h)


def series_log(f: PowerSeries) -> PowerSeries:
    """Taylor coefficients of log f, from f' = f (log f)'.

    Requires a positive constant term; a non-positive one would need a
    branch choice, which is refused.
    """
    c = f.coeffs
    if c[0] <= 0:
        raise DomainError("series_log needs a positive constant coefficient")
    inv = 1 / c[0]
    out = [mpmath.log(c[0])]
    for m in range(1, len(c)):
        acc = m * c[m] - mpmath.fsum(k * out[k] * c[m - k] for k in range(1, m))
        out.append(acc * inv / m)
    return PowerSeries(f.center, out)


def series_exp(f: PowerSeries) -> PowerSeries:
    """Taylor coefficients of exp f."""
    c = f.coeffs
    out = [mpmath.exp(c[0])]
    for m in range(1, len(c)):
        out.append(mpmath.fsum(k * c[k] * out[m - k] for k in range(1, m + 1)) / m)
    return PowerSeries(f.center, out)


# ---------------------------------------------------------------------------
# Logarithmic integral
# ---------------------------------------------------------------------------

def sum_positive_series(terms: Iterable[mpf], eps: mpf) -> tuple[mpf, int]:
    """Sum a series of positive terms that eventually decay geometrically.

    Stops once a term is below ``eps`` and the ratio to its predecessor is
    under 1/2, so the remaining tail is below one more ``eps``.
    """
    total = mpf(0)
    prev = None
    count = 0
    for t in terms:
        total += t
        count += 1
        if prev is not None and t < eps and t < prev / 2:
            break
        prev = t
    return total, count


def _li_terms(logx: mpf):
    term = mpf(1)
    k = 0
    while True:
        k += 1
        term = term * logx / k
        yield term / k


def log_integral_mpf(x: mpf, eps: mpf | None = None) -> mpf:
    """li(x) for x > 1 at the current mpmath precision (mpf in, mpf out)."""
    if x <= 1:
        raise DomainError("log_integral is defined here only for x > 1")
    if eps is None:
        eps = mpf(2) ** (-mp.prec)
    L = mpmath.log(x)
    tail, _ = sum_positive_series(_li_terms(L), eps)
    return mpmath.euler + mpmath.log(L) + tail


def log_integral(x, policy: PrecisionPolicy = DEFAULT_POLICY) -> HighPrecisionReal:
    """li(x) = gamma + log log x + sum_k (log x)^k / (k k!), x > 1."""
    with policy.context():
        xv = as_mpf(x)
        return HighPrecisionReal(log_integral_mpf(xv, policy.epsilon), policy)
