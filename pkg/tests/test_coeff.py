import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from skewseries.coeff import CoefficientDomain, scalar_standard_form, teichmuller

from oracles import digits, teichmuller_power


@pytest.fixture
def z3():
    return CoefficientDomain("B", 3, precision=8)


def test_teichmuller_fixpoint_mod_81():
    dom = CoefficientDomain("B", 3, precision=4)
    assert dom.teichmuller(2) == 80
    assert dom.teichmuller(0) == 0
    assert dom.teichmuller(1) == 1


@pytest.mark.parametrize("p,N", [(2, 6), (3, 8), (5, 5), (7, 3)])
def test_teichmuller_matches_power_formula(p, N):
    dom = CoefficientDomain("B", p, precision=N)
    for c in range(p):
        t = dom.teichmuller(c)
        assert t == teichmuller_power(c, p, N)
        assert t % p == c
        assert pow(t, p, p ** N) == t


def test_case_a_section_is_identity():
    dom = CoefficientDomain("A", 2, m=3)
    for c in range(8):
        assert dom.teichmuller(c) == c


def test_standard_form_examples(z3):
    t = z3.teichmuller
    assert z3.scalar_standard_form(2) == [(0, t(2)), (1, t(1))]
    assert z3.scalar_standard_form(6) == [(1, t(2)), (2, t(1))]
    assert z3.scalar_standard_form(0) == []


def test_valuation_examples(z3):
    assert z3.scalar_valuation(6) == 1
    assert z3.scalar_valuation(1) == 0
    assert z3.scalar_valuation(0) == math.inf


def test_digit_product_and_sum(z3):
    t = z3.teichmuller
    assert z3.digit_mul(t(2), t(2)) == 1
    assert z3.digit_mul(1, t(2)) == t(2)
    assert z3.digit_mul(0, t(2)) == 0
    s = z3.scalar_add(1, 1)
    assert s == 2 and not z3.is_digit(s)
    assert [j for j, _ in z3.scalar_standard_form(s)] == [0, 1]
    assert CoefficientDomain("B", 3, precision=4).scalar_add(26, 55) == 0


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 3 ** 8 - 1))
def test_standard_form_matches_greedy_oracle_and_round_trips(a):
    dom = CoefficientDomain("B", 3, precision=8)
    sf = dom.scalar_standard_form(a)
    assert sf == digits(a, 3, 8)
    assert all(dom.is_digit(d) for _, d in sf)
    assert dom.from_digits(sf) == a


def test_digit_closure_all_pairs():
    for p, N in [(3, 8), (5, 4), (2, 10)]:
        dom = CoefficientDomain("B", p, precision=N)
        ds = [dom.teichmuller(c) for c in range(p)]
        for a in ds:
            for b in ds:
                assert dom.is_digit(dom.digit_mul(a, b))


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (3, 2), (5, 2), (2, 6)])
def test_finite_field_axioms(p, m):
    dom = CoefficientDomain("A", p, m=m)
    q = p ** m
    rng = np.random.default_rng(0)
    for _ in range(200):
        a, b, c = (int(x) for x in rng.integers(0, q, 3))
        assert dom.mul(a, dom.add(b, c)) == dom.add(dom.mul(a, b), dom.mul(a, c))
        assert dom.mul(dom.mul(a, b), c) == dom.mul(a, dom.mul(b, c))
        assert dom.add(a, dom.neg(a)) == 0
        if a:
            assert dom.mul(a, dom.inv(a)) == 1
        assert pow_fq(dom, a, q) == a


def pow_fq(dom, a, e):
    r = 1
    for _ in range(e):
        r = dom.mul(r, a)
    return r


def test_bad_domains():
    with pytest.raises(ValueError):
        CoefficientDomain("B", 4)
    with pytest.raises(ValueError):
        CoefficientDomain("B", 3, m=2)
    with pytest.raises(ValueError):
        CoefficientDomain("A", 2, m=2, irreducible=(1, 0, 1))


def test_module_wrappers(z3):
    assert teichmuller(z3, 2) == z3.teichmuller(2)
    assert scalar_standard_form(z3, 6) == z3.scalar_standard_form(6)
