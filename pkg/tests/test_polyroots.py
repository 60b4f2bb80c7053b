import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import all_subsets_sum, match_multisets, mp_roots
from steinerroots import conescan
from steinerroots.polyroots import (
    ComplexPolynomial,
    RootFindingError,
    aberth_batch,
    antiderivative_cap,
    antiderivative_steiner,
    derivative_steiner,
    elem_sym,
    eval_poly,
    min_angle_root,
    poly_from_roots,
    reciprocal,
    residual_bound,
    roots,
    sequence_roots,
    steiner_from_roots,
    truncated_binomial,
)
from steinerroots.ulc_core import EXACT, CoeffSequence, SteinerRejection, is_steiner

P414 = truncated_binomial(4, 1, 4)


def test_truncated_binomial_examples():
    assert P414.a == (0, 4, 6, 4, 1)
    assert truncated_binomial(6, 0, 6).a == (1, 6, 15, 20, 15, 6, 1)
    seq = truncated_binomial(10, 3, 8)
    assert [i for i, x in enumerate(seq.a) if x] == list(range(3, 9))
    with pytest.raises(ValueError):
        truncated_binomial(4, 2, 2)


def test_eval_examples():
    assert abs(eval_poly(np.array(P414.as_floats()), complex(-1, 1))) <= 1e-12
    assert eval_poly([1, 3, 3, 1], 0) == 1
    p5 = np.array(truncated_binomial(5, 1, 4).as_floats())
    assert abs(eval_poly(p5, complex(-0.5, 0.8660254))) < 1e-6
    assert abs(eval_poly(p5, cmath.exp(2j * math.pi / 3))) < 1e-9


def test_polynomial_trims_and_differentiates():
    p = ComplexPolynomial([1, 2, 3, 0, 0])
    assert p.degree == 2 and p.is_real
    assert list(p.derivative().coeffs) == [2, 6]
    assert p(1) == 6


def test_roots_examples():
    rs = roots([2, 2, 1])
    assert rs.values == (complex(-1, -1), complex(-1, 1))
    rs = roots(truncated_binomial(3, 1, 3))
    assert rs.zero_multiplicity == 1
    assert match_multisets(rs.nonzero(), [complex(-1.5, math.sqrt(3) / 2), complex(-1.5, -math.sqrt(3) / 2)]) < 1e-12


@pytest.mark.parametrize("n", [2, 3, 5, 8, 12])
def test_full_binomial_is_one_multiple_root(n):
    rs = roots(truncated_binomial(n, 0, n))
    assert rs.values == (-1,) and rs.multiplicities == (n,)


def test_mixed_multiplicities():
    # (z+1)^3 (z+2)^2 (z^2+1)
    c = np.polynomial.polynomial.polyfromroots([-1, -1, -1, -2, -2, 1j, -1j]).real
    rs = roots(list(c))
    want = [(-2, 2), (-1, 3), (-1j, 1), (1j, 1)]
    assert rs.multiplicities == tuple(m for _, m in want)
    assert all(abs(v - w) < 1e-12 for v, (w, _) in zip(rs.values, want))


def test_zero_roots_are_deflated_exactly():
    rs = roots(truncated_binomial(7, 3, 5))
    assert rs.zero_multiplicity == 3
    assert sum(rs.multiplicities) + rs.zero_multiplicity == rs.degree == 5
    assert rs.all_roots().count(0j) == 3


def test_non_convergence_raises():
    with pytest.raises(RootFindingError) as err:
        roots(truncated_binomial(12, 2, 9), max_iter=1)
    assert err.value.best is not None and err.value.residuals is not None


def test_batch_converges():
    rows = np.array([truncated_binomial(6, 0, k).as_floats()[: k + 1] for k in (6,)] * 3)
    rows[1, 0] = 2.0
    z, ok = aberth_batch(rows)
    assert z.shape == (3, 6)
    assert ok[1].all()


@pytest.mark.parametrize("n", [6, 10, 15, 20])
def test_truncated_binomial_roots_match_mpmath(n):
    for j in range(0, n, 2):
        for k in range(j + 1, n + 1, 3):
            seq = truncated_binomial(n, j, k)
            rs = roots(seq)
            assert match_multisets(rs.all_roots(), mp_roots(seq.a)) < 1e-8


def test_root_residuals_within_bound():
    for n in range(2, 21):
        for j in range(0, n):
            for k in range(j + 1, n + 1):
                seq = truncated_binomial(n, j, k)
                p = ComplexPolynomial.from_sequence(seq)
                rs = roots(p)
                for g, res in zip(rs.values, rs.residuals):
                    assert res <= residual_bound(p, g)


def test_conjugate_closure_is_exact():
    for n in (9, 13, 20):
        rs = roots(truncated_binomial(n, 2, n - 1))
        vals = list(zip(rs.values, rs.multiplicities))
        for v, m in vals:
            if v.imag != 0:
                assert (v.conjugate(), m) in vals


def test_no_positive_real_roots():
    for n in range(2, 21):
        for j in range(n):
            for k in range(j + 1, n + 1):
                assert not any(g.imag == 0 and g.real > 0 for g in roots(truncated_binomial(n, j, k)).values)


def test_min_angle_root_examples():
    ar = min_angle_root(roots(P414))
    assert abs(ar.gamma - complex(-1, 1)) < 1e-12 and abs(ar.alpha - 3 * math.pi / 4) < 1e-12
    ar = min_angle_root(roots(truncated_binomial(5, 0, 5)))
    assert ar.gamma == -1 and ar.alpha == math.pi
    ar = min_angle_root(roots(truncated_binomial(10, 3, 8)))
    assert abs(ar.alpha - 1.5574) < 1e-3 and abs(ar.gamma.real - 0.0158) < 1e-3
    with pytest.raises(ValueError, match="only trivial roots"):
        min_angle_root([0j, 0j])


def test_min_angle_tie_prefers_larger_modulus():
    ar = min_angle_root([complex(-1, 1), complex(-2, 2), complex(-2, -2)])
    assert ar.gamma == complex(-2, 2)


def test_elem_sym_examples():
    assert [int(x.real) for x in elem_sym([1] * 6)] == [math.comb(6, i) for i in range(7)]
    e = elem_sym([complex(-1, 1), complex(-1, -1)])
    assert e == [1, -2, 2]
    assert list(poly_from_roots([complex(-1, 1), complex(-1, -1)]).coeffs) == [2, 2, 1]


@settings(max_examples=100, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False), min_size=1, max_size=6))
def test_elem_sym_matches_subset_sums(vals):
    e = elem_sym(vals)
    for k in range(len(vals) + 1):
        ref = all_subsets_sum(vals, k)
        assert abs(e[k] - ref) <= 1e-9 * max(1.0, abs(ref))


conj_closed = st.lists(
    st.tuples(st.floats(-3, -0.2), st.floats(0.3, 3)), min_size=1, max_size=5
).flatmap(
    lambda pairs: st.lists(st.floats(-3, -0.2), min_size=0, max_size=2).map(
        lambda reals: [complex(x, y) for x, y in pairs] + [complex(x, -y) for x, y in pairs] + [complex(r) for r in reals]
    )
)


def _separated(S, gap=0.05):
    return all(abs(a - b) > gap for i, a in enumerate(S) for b in S[i + 1 :])


@settings(max_examples=150, deadline=None)
@given(conj_closed.filter(_separated))
def test_roots_of_poly_from_roots(S):
    p = poly_from_roots(S)
    assert p.is_real
    assert match_multisets(roots(p).all_roots(), S) < 1e-8


@settings(max_examples=100, deadline=None)
@given(st.integers(3, 20).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n - 1)).flatmap(
    lambda nj: st.tuples(st.just(nj[0]), st.just(nj[1]), st.integers(nj[1] + 1, nj[0])))))
def test_poly_from_roots_recovers_coefficients(njk):
    n, j, k = njk
    seq = truncated_binomial(n, j, k)
    p = poly_from_roots(roots(seq).all_roots())
    a = np.array(seq.as_floats()[: k + 1]) / float(seq.a[k])
    assert np.max(np.abs(p.coeffs - a) / np.maximum(1.0, np.abs(a))) < 1e-8


def test_steiner_from_roots_examples():
    seq = steiner_from_roots([complex(-1, 1), complex(-1, -1), -2, 0], n=4, r=4, s=3)
    assert np.allclose(seq.as_floats(), [0, 4, 6, 4, 1])
    seq = steiner_from_roots([-1] * 5, n=5, r=5, s=5)
    assert np.allclose(seq.as_floats(), [1, 5, 10, 10, 5, 1])


def test_steiner_from_roots_rejects_outside_window():
    # -1 +- 3i lies outside the 3-dimensional cone, so any cubic containing it fails
    with pytest.raises(SteinerRejection):
        steiner_from_roots([complex(-1, 3), complex(-1, -3), -0.1], n=3, r=3, s=3)
    with pytest.raises(ValueError):
        conescan.r3_real_root_compat(1, 3, 0.1)


def test_steiner_from_roots_sign_and_count_errors():
    with pytest.raises(SteinerRejection) as err:
        steiner_from_roots([1, -1], n=2, r=2, s=2)
    assert err.value.reason == "sign"
    with pytest.raises(ValueError, match="nonzero roots"):
        steiner_from_roots([-1, -1], n=2, r=2, s=1)


def test_derivative_and_antiderivative_examples():
    d = derivative_steiner(CoeffSequence(3, (1, 3, 3, 1)))
    assert d.n == 2 and d.a == (3, 6, 3)
    a = antiderivative_steiner(P414)
    assert a.n == 5 and is_steiner(a)
    base = CoeffSequence(2, (1, 2, 1))
    assert antiderivative_cap(base) == Fraction(1, 3)
    assert is_steiner(antiderivative_steiner(base, Fraction(1, 3)))
    with pytest.raises(SteinerRejection, match="exceeds"):
        antiderivative_steiner(base, Fraction(7, 10))
    with pytest.raises(ValueError, match="a_0 > 0"):
        antiderivative_steiner(P414, 1)


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 12).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n - 1))).flatmap(
    lambda nl: st.tuples(st.just(nl[0]), st.just(nl[1]), st.integers(nl[1] + 1, nl[0]), st.integers(0, 2**32 - 1))))
def test_closure_under_calculus(args):
    n, lo, hi, seed = args
    seq = conescan.random_ulc_sequence(n, (lo, hi), seed)
    assert is_steiner(derivative_steiner(seq))
    assert is_steiner(antiderivative_steiner(seq))
    if seq.a[0] > 0:
        assert is_steiner(antiderivative_steiner(seq, antiderivative_cap(seq)))


def test_reciprocal_examples():
    for n in range(2, 9):
        for j in range(n):
            for k in range(j + 1, n + 1):
                assert reciprocal(truncated_binomial(n, j, k)) == truncated_binomial(n, n - k, n - j)
    assert reciprocal(CoeffSequence(2, (1, 2, 1))).a == (1, 2, 1)
    got = roots(reciprocal(P414)).nonzero()
    want = [1 / complex(-1, 1), 1 / complex(-1, -1), -0.5]
    assert match_multisets(got, want) < 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(3, 12).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n - 2))).flatmap(
    lambda nl: st.tuples(st.just(nl[0]), st.just(nl[1]), st.integers(nl[1] + 2, nl[0]), st.integers(0, 2**32 - 1))))
def test_reciprocal_inverts_roots(args):
    n, lo, hi, seed = args
    seq = conescan.random_ulc_sequence(n, (lo, hi), seed)
    assert reciprocal(reciprocal(seq)) == seq
    inv = [1 / g for g in roots(seq).nonzero()]
    got = roots(reciprocal(seq)).nonzero()
    scale = max(1.0, max(abs(g) for g in inv))
    assert match_multisets(got, inv) < 1e-6 * scale
    a, b = min_angle_root(roots(seq)), min_angle_root(roots(reciprocal(seq)))
    assert abs(a.alpha - b.alpha) < 1e-6


def test_sequence_roots_zero_multiplicity_is_codimension():
    seq = truncated_binomial(9, 4, 7)
    assert sequence_roots(seq).zero_multiplicity == 9 - 5


def test_degree_160_roots_converge():
    rs = roots(truncated_binomial(160, 0, 80))
    assert rs.zero_multiplicity == 0 and sum(rs.multiplicities) == 80
    p = ComplexPolynomial.from_sequence(truncated_binomial(160, 0, 80))
    assert all(res <= residual_bound(p, g) for g, res in zip(rs.values, rs.residuals))


def test_exact_sequence_input():
    assert roots(CoeffSequence(2, (Fraction(1, 2), 1, Fraction(1, 2)), EXACT)).values == (-1,)
