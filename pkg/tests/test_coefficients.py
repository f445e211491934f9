import mpmath
import pytest
from mpmath import mpf

from primezeta.coefficients import (AlphaEntry, AlphaTable, alpha0_entry, alpha0_series, alpha_entry,
                                    alpha_mobius, alpha_table_mobius, mobius_cutoff,
                                    special_case_residual, special_case_value)
from primezeta.errors import DomainError, UnsupportedOrderError
from primezeta.precision import HighPrecisionReal, PrecisionPolicy
from primezeta.verify import REFERENCE_ALPHA, ulp_of

P30 = PrecisionPolicy(30, 15)


@pytest.fixture(scope="module")
def table30():
    return alpha_table_mobius(10, P30)


@pytest.mark.parametrize("n", range(11))
def test_reference_rows(table30, n):
    printed = REFERENCE_ALPHA[n]
    value = table30.get(n).value
    with mpmath.workdps(50):
        # the reference rows may differ from correct rounding by one unit in the last place
        assert abs(value.value - mpf(printed)) <= ulp_of(printed) * mpf("1.000001")


def test_alpha0_series_matches_generic(table30):
    with P30.context():
        assert abs(alpha0_series(P30).value - table30.get(0).value.value) < mpf(10) ** -30


def test_alpha0_printed_value():
    with P30.context():
        assert abs(alpha0_series(P30).value - mpf("-0.31571845205389007685")) < mpf(10) ** -20


def test_meissel_mertens():
    with P30.context():
        m = alpha0_series(P30).value + mpmath.euler
        assert abs(m - mpf("0.26149721284764278375")) < mpf(10) ** -20


@pytest.mark.parametrize("n,printed", [(1, "1.33258227573322088176"), (2, "-2.55510761544644523959"),
                                       (3, "10.25382709691100753877")])
def test_special_cases(n, printed):
    with P30.context():
        assert abs(special_case_value(n, P30).value - mpf(printed)) < mpf(10) ** -20
        assert abs(alpha_mobius(n, P30).value - mpf(printed)) < mpf(10) ** -20
        assert abs(special_case_residual(n, P30).value) < mpf(10) ** -25


def test_special_case_rejects_other_orders():
    with pytest.raises(UnsupportedOrderError):
        special_case_value(4, P30)
    with pytest.raises(UnsupportedOrderError):
        alpha_entry(65, P30)


def test_sign_alternation(table30):
    vals = [table30.get(n).value.value for n in range(11)]
    assert all((v > 0) == (n % 2 == 1) for n, v in enumerate(vals))


def test_ratio_growth(table30):
    vals = [abs(table30.get(n).value.value) for n in range(11)]
    ratios = [vals[n + 1] / vals[n] for n in range(2, 10)]
    assert all(a < b for a, b in zip(ratios, ratios[1:]))


@pytest.mark.parametrize("n", [0, 4, 10])
def test_truncation_robustness(table30, n):
    entry = table30.get(n)
    wider = alpha_entry(n, P30, k_max=2 * entry.truncation.terms_used)
    with mpmath.workdps(50):
        scale = mpf(10) ** (-entry.certified_digits) * abs(entry.value.value)
        assert abs(wider.value.value - entry.value.value) < scale


def test_truncation_report_invariants(table30):
    for e in table30.entries:
        rep = e.truncation
        assert rep.tail_bound.value >= rep.last_term_magnitude.value
        assert rep.tail_bound.value < mpf(10) ** -P30.target_digits
        assert e.certified_digits >= 25


def test_certificate_grows_with_precision():
    low = alpha_entry(2, PrecisionPolicy(15, 10))
    high = alpha_entry(2, PrecisionPolicy(40, 15))
    assert low.certified_digits < high.certified_digits
    with mpmath.workdps(50):
        assert abs(low.value.value - high.value.value) < mpf(10) ** -14


def test_mobius_cutoff_is_squarefree_and_sufficient():
    for n in (0, 5, 10):
        K = mobius_cutoff(n, 45)
        assert all(K % (d * d) for d in range(2, int(K ** 0.5) + 1))
        assert n * mpmath.log(K) - K * mpmath.log(2) < -45 * mpmath.log(10)


def test_alpha_table_uniqueness_and_agreement():
    t = AlphaTable()
    with P30.context():
        a = AlphaEntry(0, HighPrecisionReal(mpf("-0.3157"), P30), "mobius",
                       tolerance=HighPrecisionReal(mpf("1e-30"), P30))
        b = AlphaEntry(0, HighPrecisionReal(mpf("-0.3155"), P30), "limit",
                       tolerance=HighPrecisionReal(mpf("1e-3"), P30))
    t.add(a)
    t.add(b)
    assert len(t) == 2
    assert t.agree(0, "mobius", "limit")
    with pytest.raises(DomainError):
        t.add(a)
    with pytest.raises(DomainError):
        t.add(AlphaEntry(1, a.value, "guess"))


def test_alpha0_entry_report():
    e = alpha0_entry(P30)
    assert e.n == 0 and e.method == "mobius"
    assert e.truncation.terms_used == mobius_cutoff(0, P30.working_digits)
