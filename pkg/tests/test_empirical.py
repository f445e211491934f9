import csv
import io

import mpmath
import pytest
from mpmath import mpf

from primezeta.coefficients import alpha_entry
from primezeta.empirical import (DEFAULT_CHECKPOINTS, alpha_integral, c_integral, convergence_csv,
                                 limit_estimate, mertens_partial, prime_log_sums, prime_sum_series,
                                 recombine, remainder_samples, remainder_shape_constant)
from primezeta.errors import DomainError, OutOfRangeError
from primezeta.precision import PrecisionPolicy
from primezeta.tables import sieve_primes

P30 = PrecisionPolicy(30, 15)
PRIMES_100 = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
              89, 97]


@pytest.fixture(scope="module")
def alphas():
    return [alpha_entry(n, P30).value.value for n in range(4)]


def test_mertens_partial_small():
    sieve = sieve_primes(1000)
    with mpmath.workdps(30):
        ref = mpmath.fsum(mpf(1) / p for p in PRIMES_100) - mpmath.log(mpmath.log(100))
        got = mertens_partial(0, 100, sieve, P30).value
        assert abs(got - ref) < mpf("1e-17")
        assert abs(got - mpf("0.2757")) < mpf("1e-4")


def test_mertens_partial_higher_power():
    sieve = sieve_primes(1000)
    with mpmath.workdps(30):
        L = mpmath.log(100)
        ref = mpmath.fsum(mpmath.log(p) ** 2 / p for p in PRIMES_100) - L ** 2 / 2
        assert abs(mertens_partial(2, 100, sieve, P30).value - ref) < mpf("1e-15")


def test_mertens_partial_errors():
    sieve = sieve_primes(1000)
    with pytest.raises(DomainError):
        mertens_partial(0, 1, sieve)
    with pytest.raises(DomainError):
        mertens_partial(-1, 100, sieve)
    with pytest.raises(OutOfRangeError):
        mertens_partial(0, 2000, sieve)


def test_prime_sums_independent_of_segmentation():
    a = sieve_primes(300_000, segment_size=1 << 12)
    b = sieve_primes(300_000)
    xs = [1000, 4096, 123_457, 300_000]
    sa, sb = prime_log_sums(a, 3, xs), prime_log_sums(b, 3, xs)
    for x in xs:
        for u, v in zip(sa[x], sb[x]):
            assert abs(u - v) <= abs(v) * mpf("1e-17")


@pytest.mark.parametrize("n", [0, 1, 2])
def test_limit_route_agreement(sieve_1e8, alphas, n):
    est = limit_estimate(n, 10 ** 8, sieve_1e8, P30)
    with mpmath.workdps(30):
        assert abs(est.estimate.value - alphas[n]) <= 10 * est.tolerance.value


def test_limit_route_stated_accuracy(sieve_1e8, alphas):
    with mpmath.workdps(30):
        assert abs(limit_estimate(0, 10 ** 8, sieve_1e8, P30).estimate.value - alphas[0]) < mpf("1e-2")
        assert abs(limit_estimate(1, 10 ** 8, sieve_1e8, P30).estimate.value - alphas[1]) < mpf("1e-1")
        # the raw partial sum carries the (-1)^n sign
        assert abs(mertens_partial(1, 10 ** 8, sieve_1e8, P30).value + alphas[1]) < mpf("1e-1")


def test_limit_route_coarse_checkpoint(sieve_1e5, alphas):
    est = limit_estimate(0, 100, sieve_1e5, P30)
    with mpmath.workdps(30):
        off = abs(est.estimate.value - alphas[0])
        assert mpf("1e-2") < off < mpf("0.1")
        assert off <= 10 * est.tolerance.value


def test_checkpoint_tolerance_decreases(sieve_1e8):
    # log^(n+1)(x)/sqrt(x) peaks at x = e^(2(n+1)); only checkpoints past the peak are compared
    for n in (0, 1, 2, 3):
        series = prime_sum_series(n, sieve_1e8, DEFAULT_CHECKPOINTS, P30)
        xs = [x for x, _ in series.checkpoints]
        assert xs == sorted(set(xs))
        rows = list(csv.DictReader(io.StringIO(convergence_csv(series))))
        tols = [float(r["tolerance"]) for r, x in zip(rows, xs) if x >= mpmath.exp(2 * (n + 1))]
        assert len(tols) >= 5
        assert all(a > b for a, b in zip(tols, tols[1:]))


def test_convergence_csv_header(sieve_1e5):
    text = convergence_csv(prime_sum_series(0, sieve_1e5, (100, 1000, 10 ** 4), P30))
    lines = text.splitlines()
    assert lines[0] == "x,n,partial,estimate,tolerance"
    assert len(lines) == 4


@pytest.mark.parametrize("n", [0, 1])
def test_integral_route(sieve_1e6, alphas, n):
    est = alpha_integral(n, 10 ** 6, sieve_1e6, P30)
    assert est.tolerance is est.tail_model
    with mpmath.workdps(30):
        assert abs(est.value.value - alphas[n]) < mpf("5e-2")
        assert abs(est.value.value - alphas[n]) <= est.tail_model.value


def test_integral_route_t_doubled(sieve_1e7):
    a = alpha_integral(0, 10 ** 6, sieve_1e7, P30)
    b = alpha_integral(0, 2 * 10 ** 6, sieve_1e7, P30)
    with mpmath.workdps(30):
        assert abs(a.value.value - b.value.value) < a.tail_model.value


def test_integral_route_small_t_matches_direct_quadrature():
    # numeric quadrature of the defining integral on [2, 50] plus the closed-form [1, 2] piece
    sieve = sieve_primes(100)
    T = 50
    with mpmath.workdps(30):
        def f(t):
            return sieve.count_upto(int(mpmath.floor(t))) - mpmath.li(t)

        def weight(t):
            return (mpmath.log(t) - 1) / t ** 2

        pieces = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 50]
        quad = mpmath.fsum(mpmath.quad(lambda t: weight(t) * f(t), [a, b]) for a, b in zip(pieces, pieces[1:]))
        # on (1, 2) pi(t) = 0 and the integrand is -weight(t) li(t)
        quad += mpmath.quad(lambda t: -weight(t) * mpmath.li(t), [1, 2])
        got = alpha_integral(1, T, sieve, P30).value.value
        assert abs(got - (-quad)) < mpf("1e-12")


def test_integral_route_tiny_t():
    sieve = sieve_primes(100)
    est = alpha_integral(1, 10, sieve, P30)
    assert est.tail_model.value > 1
    with pytest.raises(DomainError):
        alpha_integral(0, 1.5, sieve, P30)
    with pytest.raises(DomainError):
        c_integral(-1, 10, sieve, P30)


def test_c0_equals_alpha_integral(sieve_1e6, alphas):
    c0 = c_integral(0, 10 ** 6, sieve_1e6, P30)
    a0 = alpha_integral(0, 10 ** 6, sieve_1e6, P30)
    with mpmath.workdps(30):
        assert abs(c0.value.value - a0.value.value) < mpf("1e-15")
        assert abs(c0.value.value - alphas[0]) < c0.tail_model.value


@pytest.mark.parametrize("m", [1, 2])
def test_recombination(sieve_1e6, alphas, m):
    # m c_{m-1} + c_m reproduces alpha_m itself
    value, tail = recombine(m, 10 ** 6, sieve_1e6, P30)
    with mpmath.workdps(30):
        assert abs(value.value - alphas[m]) <= tail.value


def test_recombination_matches_integral_route(sieve_1e6):
    # the c_j recombination and the direct integral route are the same integral
    value, _ = recombine(1, 10 ** 6, sieve_1e6, P30)
    direct = alpha_integral(1, 10 ** 6, sieve_1e6, P30)
    with mpmath.workdps(30):
        assert abs(value.value - direct.value.value) < mpf("1e-12")


def test_remainder_shape(sieve_1e8):
    samples = remainder_samples(sieve_1e8, 1e3, 1e8)
    assert len(samples) > 100
    assert all(1e3 <= s.t <= 1e8 for s in samples)
    c = remainder_shape_constant(samples)
    assert 0 < c < 1
