from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import direct_steiner_verdict, pascal_table
from steinerroots.polyroots import truncated_binomial
from steinerroots.ulc_core import (
    EXACT,
    NUMERIC,
    CoeffSequence,
    QuermassTuple,
    SteinerRejection,
    SupportGapError,
    af_equalities,
    binomial,
    c_coeff,
    check_ulc,
    coeffs_from_quermass,
    is_steiner,
    newton_check,
    quermass_from_coeffs,
    support_interval,
    validate_steiner,
)

PASCAL = pascal_table(64)


@pytest.mark.parametrize("n,i,expected", [(4, 2, 6), (10, 3, 120), (20, 7, 77520)])
def test_binomial_examples(n, i, expected):
    assert binomial(n, i) == expected == PASCAL[n][i]


def test_binomial_matches_pascal_up_to_64():
    for n in range(65):
        assert [binomial(n, i) for i in range(n + 1)] == PASCAL[n]


@pytest.mark.parametrize("n,i", [(3, -1), (3, 4)])
def test_binomial_out_of_range(n, i):
    with pytest.raises(ValueError, match="index out of range"):
        binomial(n, i)


@pytest.mark.parametrize("n,i,expected", [(2, 1, Fraction(1, 4)), (4, 2, Fraction(4, 9)), (11, 3, Fraction(2, 3))])
def test_c_coeff_examples(n, i, expected):
    # (11, 3): (3/4)(8/9) = C(11,2) C(11,4) / C(11,3)^2 = 55 * 330 / 165^2
    assert c_coeff(n, i) == expected


def test_c_coeff_is_binomial_ratio():
    for n in range(2, 30):
        for i in range(1, n):
            ratio = Fraction(PASCAL[n][i - 1] * PASCAL[n][i + 1], PASCAL[n][i] ** 2)
            assert c_coeff(n, i) == ratio


def test_c_coeff_grows_one_dimension_up():
    for n in range(2, 40):
        for j in range(1, n):
            assert c_coeff(n, j) < c_coeff(n + 1, j + 1)


@pytest.mark.parametrize("i", [0, 4])
def test_c_coeff_range(i):
    with pytest.raises(ValueError):
        c_coeff(4, i)


def test_all_zero_rejected():
    with pytest.raises(ValueError, match="vanish"):
        CoeffSequence(3, (0, 0, 0, 0))


def test_negative_and_length_rejected():
    with pytest.raises(ValueError):
        CoeffSequence(2, (1, -1, 1))
    with pytest.raises(ValueError):
        CoeffSequence(2, (1, 1))


def test_support_interval():
    assert support_interval(CoeffSequence(4, (0, 4, 6, 4, 1))) == (1, 4)
    assert support_interval(CoeffSequence(2, (1, 2, 1))) == (0, 2)
    with pytest.raises(SupportGapError, match="support gap at index 1"):
        support_interval(CoeffSequence(2, (1, 0, 1)))


def test_check_ulc_examples():
    rep = check_ulc(CoeffSequence(2, (1, 2, 1)))
    assert rep.passed and rep.rows[0].lhs == 1 and rep.rows[0].rhs == 1 and rep.rows[0].equality
    assert check_ulc(CoeffSequence(4, (0, 4, 6, 4, 1))).passed
    bad = check_ulc(CoeffSequence(2, (1, 1, 1)))
    assert not bad.passed and bad.failures == (1,)
    assert "fail at i = [1]" in bad.format()


def test_validate_examples():
    assert validate_steiner(CoeffSequence(5, (0, 5, 10, 10, 5, 0))) == (4, 4)
    assert validate_steiner(CoeffSequence(6, (0,) * 6 + (1,))) == (6, 0)
    with pytest.raises(SteinerRejection) as err:
        validate_steiner(CoeffSequence(2, (1, 1, 1)))
    assert err.value.index == 1 and err.value.reason == "ulc"
    with pytest.raises(SteinerRejection) as err:
        validate_steiner(CoeffSequence(3, (1, 0, 0, 1)))
    assert err.value.index == 1 and err.value.reason == "support_gap"


def test_truncated_binomials_accepted():
    for n in range(1, 21):
        for j in range(n):
            for k in range(j + 1, n + 1):
                assert validate_steiner(truncated_binomial(n, j, k)) == (k, n - j)


def test_numeric_mode_tolerance():
    # lhs = rhs * (1 - 1e-12): a numeric near-equality, an exact failure
    a = (1.0, 2.0 * (1 - 1e-12), 1.0)
    assert is_steiner(CoeffSequence(2, a, NUMERIC))
    assert not is_steiner(CoeffSequence(2, a, EXACT))


def test_exact_mode_converts_floats_exactly():
    seq = CoeffSequence(2, (0.1, 1, 2))
    assert seq.a[0] == Fraction(0.1) != Fraction(1, 10)


def test_normalization_keeps_verdict():
    seq = CoeffSequence(4, (0, 4, 6, 4, 1))
    assert sum(seq.normalized().a) == 1
    assert is_steiner(seq.normalized())
    assert not is_steiner(CoeffSequence(2, (1, 1, 1)).normalized())


def test_dictionary_examples():
    assert coeffs_from_quermass(QuermassTuple(4, (0, 1, 1, 1, 1))).a == (0, 4, 6, 4, 1)
    assert coeffs_from_quermass(QuermassTuple(2, (1, 1, 1))).a == (1, 2, 1)


def test_quermass_dimension_mismatch():
    with pytest.raises(SteinerRejection, match="dim E"):
        quermass_from_coeffs(CoeffSequence(4, (0, 4, 6, 4, 1)), r=3)
    with pytest.raises(SteinerRejection, match="dim K"):
        quermass_from_coeffs(CoeffSequence(4, (0, 4, 6, 4, 1)), s=4)
    q = quermass_from_coeffs(CoeffSequence(4, (0, 4, 6, 4, 1)), r=4, s=3)
    assert (q.r, q.s) == (4, 3)


def test_quermass_af_check():
    with pytest.raises(SteinerRejection, match="Aleksandrov-Fenchel"):
        QuermassTuple(2, (1, 1, 2))
    q = QuermassTuple(2, (1, 1, 2), check_af=False)
    assert (q.r, q.s) == (2, 2)


def test_af_equalities_examples():
    assert af_equalities(QuermassTuple(4, (0, 1, 1, 1, 1))) == [2, 3]
    W = (2, 1, Fraction(1, 2), Fraction(1, 4), 0)
    assert af_equalities(QuermassTuple(4, W)) == [1, 2]
    assert af_equalities(QuermassTuple(2, (1, 1, 1))) == [1]


def test_newton_check_examples():
    assert newton_check([-1, -1, -1]).sequence.a == (1, 3, 3, 1)
    res = newton_check([0, 0, -2])
    assert support_interval(res.sequence) == (2, 3)
    with pytest.raises(ValueError):
        newton_check([1, -1])


# ---------------------------------------------------------------------------
# properties

small_seq = st.integers(1, 8).flatmap(
    lambda n: st.lists(st.integers(0, 12), min_size=n + 1, max_size=n + 1).filter(any).map(lambda a: (n, a))
)


@settings(max_examples=400, deadline=None)
@given(small_seq)
def test_verdict_matches_direct_oracle(na):
    n, a = na
    assert is_steiner(CoeffSequence(n, tuple(a))) == direct_steiner_verdict(a)


@settings(max_examples=200, deadline=None)
@given(small_seq, st.fractions(min_value=Fraction(1, 100), max_value=100))
def test_verdict_scale_invariant(na, t):
    n, a = na
    seq = CoeffSequence(n, tuple(a))
    assert is_steiner(seq) == is_steiner(seq.scaled(t))


@settings(max_examples=200, deadline=None)
@given(small_seq)
def test_verdict_reversal_invariant(na):
    n, a = na
    assert is_steiner(CoeffSequence(n, tuple(a))) == is_steiner(CoeffSequence(n, tuple(reversed(a))))


@st.composite
def quermass_tuples(draw):
    """Valid tuples: log-concave W built from decreasing rational ratios."""
    n = draw(st.integers(1, 8))
    lo = draw(st.integers(0, n))
    hi = draw(st.integers(lo, n))
    ratios = sorted(draw(st.lists(st.fractions(Fraction(1, 8), 8), min_size=hi - lo, max_size=hi - lo)), reverse=True)
    W = [Fraction(0)] * (n + 1)
    W[lo] = draw(st.fractions(Fraction(1, 8), 8))
    for t, r in enumerate(ratios):
        W[lo + t + 1] = W[lo + t] * r
    return QuermassTuple(n, tuple(W))


@settings(max_examples=300, deadline=None)
@given(quermass_tuples())
def test_dictionary_round_trip(q):
    seq = coeffs_from_quermass(q)
    assert validate_steiner(seq) == (q.r, q.s)
    back = quermass_from_coeffs(seq, q.r, q.s)
    assert back.W == q.W


@settings(max_examples=300, deadline=None)
@given(st.lists(st.floats(-10, 0), min_size=1, max_size=8))
def test_newton_accepts_nonpositive_roots(gammas):
    res = newton_check(gammas)
    assert res.r == len(gammas)
    assert res.s == sum(1 for g in gammas if g != 0)


@settings(max_examples=200, deadline=None)
@given(small_seq.filter(lambda na: direct_steiner_verdict(na[1])), st.data())
def test_report_rows_are_local(na, data):
    """Scaling one coefficient only changes the three rows that contain it."""
    n, a = na
    i = data.draw(st.integers(0, n))
    bumped = list(a)
    bumped[i] = bumped[i] * 7 + 1
    before = check_ulc(CoeffSequence(n, tuple(a))).rows
    after = check_ulc(CoeffSequence(n, tuple(bumped))).rows
    for r0, r1 in zip(before, after):
        if abs(r0.i - i) > 1:
            assert (r0.lhs, r0.rhs) == (r1.lhs, r1.rhs)
