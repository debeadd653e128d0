import numpy as np
import pytest

from skewseries import apps
from skewseries.ring import Ring, RingPresentation, preset

from oracles import falling_factorial_valuation


@pytest.fixture(scope="module")
def R():
    return apps.flagship_ring(12)


def test_partial_derivative_examples(R):
    p, x, y = R.var(1), R.var(2), R.var(3)
    assert apps.partial_derivative(x ** 3, "x") == 3 * x * x
    d = apps.partial_derivative(2 * x ** 3, "x")
    assert d == 6 * x * x
    assert set(d.support()) == {(1, 2, 0), (2, 2, 0)}
    assert apps.partial_derivative(x ** 3, "x", 3) == R.from_int(6)
    assert apps.partial_derivative(y, "x").is_zero()
    assert apps.partial_derivative(x * y, "y") == x
    assert apps.partial_derivative(x ** 4 * y ** 2, "x", 2) == 12 * x * x * y * y
    with pytest.raises(ValueError):
        apps.partial_derivative(Ring(preset("delta-x2")).var(1), "x")
    with pytest.raises(ValueError):
        apps.partial_derivative(x, "z")


def test_commutators_are_derivatives(R):
    x, y = R.var(2), R.var(3)
    p2 = R.var(1) ** 2
    for b in range(5):
        for c in range(5 - b):
            f = x ** b * y ** c
            assert apps.commutator(y, f) == p2 * apps.partial_derivative(f, "x")
            assert apps.commutator(x, f) == -(p2 * apps.partial_derivative(f, "y"))


def test_valuation_examples():
    assert apps.factorial_ratio_valuation(4, 1, 3) == (1, True)
    assert apps.factorial_ratio_valuation(9, 1, 3) == (2, False)
    assert apps.factorial_ratio_valuation(3, 1, 3) == (1, True)
    with pytest.raises(ValueError):
        apps.factorial_ratio_valuation(2, 1, 3)


def test_valuation_matches_factorials():
    for p in (2, 3, 5):
        for r in (1, 2):
            for a in range(p ** r, 80):
                assert apps.factorial_ratio_valuation(a, r, p)[0] == falling_factorial_valuation(a, r, p)


def test_window_criterion_decides_equality():
    for p in (2, 3, 5):
        for r in (1, 2, 3):
            for a in range(p ** r, 201):
                assert apps.factorial_ratio_valuation(a, r, p)[1] == apps.window_criterion(a, r, p)


def test_exclusion_set_criterion_misses_other_multiples():
    # a = 18 = 2 * 9 lies in no window {3^s, ..., 3^s + 2} yet the valuation is strict
    assert apps.exclusion_set_criterion(18, 1, 3)
    assert apps.factorial_ratio_valuation(18, 1, 3) == (2, False)
    # the set itself is always strict
    for s in (2, 3, 4):
        for a in range(3 ** s, 3 ** s + 3):
            assert not apps.factorial_ratio_valuation(a, 1, 3)[1]


def test_lm_derivative_step_examples(R):
    x, y = R.var(2), R.var(3)
    op, res, obs, pred = apps.lm_derivative_step(x ** 3)
    assert op == "d_x^3" and res == R.from_int(6) and obs == pred == (1, 0, 0)
    op, res, obs, pred = apps.lm_derivative_step(x)
    assert res == R.one and obs == pred == (0, 0, 0)
    op, res, obs, pred = apps.lm_derivative_step(y)
    assert op == "d_y^1" and res == R.one
    with pytest.raises(ValueError):
        apps.lm_derivative_step(R.var(1))


def test_prime_demo_examples(R):
    x, p = R.var(2), R.var(1)
    tr = apps.prime_height1_demo(x)
    assert tr.status == "unit" and [s.operator for s in tr.steps] == ["d_x^1"]
    tr = apps.prime_height1_demo(x ** 3)
    assert tr.status == "unit" and [s.operator for s in tr.steps] == ["d_x^3", "p^-1"]
    assert tr.steps[0].result == R.from_int(6) and tr.steps[1].result == R.from_int(2)
    assert apps.prime_height1_demo(p).status == "p-divisible"
    assert apps.prime_height1_demo(x ** 9, budget=1).status == "budget-exhausted"
    assert tr.lines() == ["d_x^3 LM=(1,0,0) deg=1", "p^-1 LM=(0,0,0) deg=0", "terminal unit"]


def test_prime_demo_strips_p_first(R):
    p, x = R.var(1), R.var(2)
    tr = apps.prime_height1_demo(p * p * x)
    assert tr.steps[0].operator == "p^-2" and tr.status == "unit"


def test_delta_power_formula():
    for m in (2, 3, 4):
        P = RingPresentation("A", 5, 2, 14, delta={(2, 1): [(1, (m, 0))]})
        R = Ring(P)
        X = R.var(1)
        for n in range(1, 6):
            for ell in range(0, 5):
                deg = n + ell * (m - 1)
                coeff = 1
                for i in range(ell):
                    coeff *= n + i * (m - 1)
                expect = R.from_int(coeff) * X ** deg if deg < R.N else R.zero
                assert apps.delta_power(R, 2, X ** n, ell) == expect


def test_delta_p_power_vanishes():
    # m = 3 is not 1 mod 5, so delta^5 kills every monomial
    R = Ring(RingPresentation("A", 5, 2, 30, delta={(2, 1): [(1, (3, 0))]}))
    X = R.var(1)
    for n in range(1, 6):
        assert apps.delta_power(R, 2, X ** n, 5).is_zero()


def test_ladder_examples(dring):
    X, Y = dring.var(1), dring.var(2)
    lad = apps.build_ladder([], [X, Y])
    assert lad.G(1) == [X] and lad.passes
    with pytest.raises(apps.LadderError):
        apps.build_ladder([], [Y, X])
    G = apps.two_sided_closure([X, Y])
    trivial = apps.build_ladder(G.elements, [])
    assert trivial.s == 0 and trivial.passes
    with pytest.raises(apps.LadderError):
        apps.build_ladder([X], [X * X])


def test_two_sidedness_examples(dring):
    X, Y = dring.var(1), dring.var(2)
    rep = apps.two_sidedness_check(apps.build_ladder([], [X]), 1)
    assert rep.ok
    lad = apps.build_ladder([], [Y])
    rep = apps.two_sidedness_check(lad, 1)
    assert not rep.ok
    bad = [(a, r) for _, a, r in rep.failures if a == X]
    assert bad and bad[0][1] == X * X
    C = Ring(RingPresentation("A", 3, 2, 8))
    lad = apps.build_ladder([], [C.var(1) ** 2 + C.var(2) ** 3])
    assert apps.two_sidedness_check(lad, 1).ok


def test_witness_examples(dring):
    X, Y = dring.var(1), dring.var(2)
    lad = apps.build_ladder([], [X, Y])
    w = apps.polynormal_witness(lad, panel=[Y])
    assert w.ok and w.pairs[0][1] == Y - X
    C = Ring(RingPresentation("A", 3, 2, 8))
    lad = apps.build_ladder([], [C.var(1) + C.var(2) ** 2])
    rng = np.random.default_rng(0)
    panel = [C.random_element(rng) for _ in range(5)]
    w = apps.polynormal_witness(lad, panel=panel)
    assert w.ok and all(r == rp for r, rp in w.pairs)


def test_closure_ladder_has_two_sided_levels(qring):
    X, Y = qring.var(1), qring.var(2)
    GJ = apps.two_sided_closure([Y ** 3 + X ** 4])
    GI = apps.two_sided_closure(GJ.elements + [X * Y])
    lad = apps.build_ladder(GJ.elements, apps.ladder_extension(GI.elements, GJ.elements))
    assert lad.s >= 1 and lad.passes
    for r in range(lad.s + 1):
        assert apps.two_sidedness_check(lad, r, samples=5).ok
    assert apps.polynormal_witness(lad, samples=5).ok


def test_remark_counterexample():
    ring, G, Gp = apps.remark_counterexample()
    lad = apps.build_ladder([], G)
    assert not lad.gb_checks[2].ok and not lad.passes
    x, z = ring.var(1), ring.var(3)
    assert lad.gb_checks[2].witness[2] == x * z ** 3
    assert apps.build_ladder([], Gp).passes
