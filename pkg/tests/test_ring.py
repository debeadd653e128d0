import threading

import numpy as np
import pytest

from skewseries.ring import (NonTriangularLexError, PresentationError, Ring, RingPresentation,
                             equal, preset, validate_presentation)
from skewseries.order import INF
from skewseries.text import Digit, ParseError, parse_element, print_canonical


def test_flagship_relation(flagship):
    R = flagship
    p, x, y = R.var(1), R.var(2), R.var(3)
    yx = R.mul(y, x)
    assert print_canonical(yx) == "T(1)*x2^1*x3^1 + T(1)*x1^2"
    assert yx.terms == {(0, 1, 1): 1, (2, 0, 0): 1}
    assert (yx - R.mul(x, y) - p * p).is_zero()
    assert R.rewrite_word([3, 2]) == yx
    assert R.rewrite_word([2, 3]) == R.mul(x, y)


def test_flagship_y_times_x_squared(flagship):
    R = flagship
    t = R.domain.teichmuller
    prod = R.mul(R.var(3), R.var(2) ** 2)
    assert prod.terms == {(0, 2, 1): 1, (2, 1, 0): t(2), (3, 1, 0): 1}


def test_lm_lc(flagship):
    R = flagship
    yx = R.mul(R.var(3), R.var(2))
    assert R.lm(yx) == (0, 1, 1) and R.lc(yx) == 1
    assert R.lm(R.zero) is INF
    Z = Ring(RingPresentation("B", 3, 2, 6))
    assert Z.lm(Z.from_int(6) * Z.var(2)) == (1, 1)
    with pytest.raises(ValueError):
        R.lc(R.zero)


def test_normalize_examples():
    Z = Ring(RingPresentation("B", 3, 2, 6))
    t = Z.domain.teichmuller
    e = Z.normalize([(2, (0, 1))])
    assert e.terms == {(0, 1): t(2), (1, 1): t(1)}
    assert Z.normalize([(1, (0, 1)), (-1, (0, 1))]).is_zero()
    F = Ring(preset("delta-x2"))
    assert F.normalize([(7, (1, 1))]).terms == {(1, 1): 2}


def test_add_examples(dring):
    Z = Ring(RingPresentation("B", 3, 2, 6))
    x = Z.var(2)
    assert set((x + x).support()) == {(0, 1), (1, 1)}
    assert equal(x + Z.zero, x)
    X, Y = dring.var(1), dring.var(2)
    assert (X + Y) + 4 * X == Y


def test_equal_paths_agree():
    Z = Ring(RingPresentation("B", 3, 2, 6))
    a = Z.normalize([(2, (0, 1))])
    b = Z.monomial((0, 1)) + Z.monomial((0, 1))
    assert Z.equal(a, b) and Z.equal_via_support(a, b)
    x = Z.var(2)
    assert not Z.equal(x, 2 * x) and not Z.equal_via_support(x, 2 * x)


def test_delta_ring_word_and_delta(dring):
    R = dring
    X = R.var(1)
    assert R.rewrite_word([2, 1, 1]) == X * X * R.var(2) + 2 * X ** 3
    assert R.apply_delta(2, R.apply_delta(2, X)) == 2 * X ** 3
    assert R.apply_delta(2, R.one).is_zero()
    assert R.apply_sigma(2, X * X) == X * X
    with pytest.raises(ValueError):
        R.apply_delta(2, R.var(2))


def test_qcomm(qring):
    X, Y = qring.var(1), qring.var(2)
    assert qring.mul(Y, X) == 2 * X * Y


def test_validation_examples():
    ok = validate_presentation(preset("delta-x2"))
    assert ok.ok and ok.triangular
    bad = validate_presentation(RingPresentation("A", 5, 2, 10, delta={(2, 1): [(1, (1, 0))]}))
    assert not bad.ok and "locality" in bad.summary()
    bad = validate_presentation(RingPresentation("A", 5, 2, 10, sigma={(2, 1): [(1, (1, 0)), (1, (0, 0))]}))
    assert not bad.ok
    bad = validate_presentation(RingPresentation("A", 5, 2, 10, sigma={(2, 1): [(5, (1, 0))]}))
    assert not bad.ok
    with pytest.raises(PresentationError):
        Ring(RingPresentation("A", 5, 2, 10, delta={(2, 1): [(1, (1, 0))]}))


def test_inconsistent_relations_rejected():
    # sigma_3 must respect x2 x1 = 2 x1 x2; sending x1 -> x1 and x2 -> x1 + x2 does not
    P = RingPresentation("A", 5, 3, 6, "deglex",
                         sigma={(2, 1): [(2, (1, 0, 0))], (3, 2): [(1, (0, 1, 0)), (1, (1, 0, 0))]})
    rep = validate_presentation(P)
    assert not rep.ok


def test_non_triangular_lex_refused():
    P = RingPresentation("A", 5, 3, 6, "lex", sigma={(3, 1): [(1, (1, 0, 0)), (1, (0, 1, 0))]})
    R = Ring(P)
    assert not R.triangular
    with pytest.raises(NonTriangularLexError):
        R.mul(R.var(3), R.var(1))
    Rd = R.with_order("deglex")
    assert Rd.mul(Rd.var(3), Rd.var(1)) == Rd.var(1) * Rd.var(3) + Rd.var(2) * Rd.var(3)


@pytest.mark.parametrize("name", ["qcomm(2)", "delta-x2", "yx-p2"])
def test_engine_matches_word_rewriting(name):
    R = Ring(preset(name, precision=7))
    rng = np.random.default_rng(1)
    for _ in range(40):
        w = [int(v) for v in rng.integers(1 + (R.case == "B"), R.n + 1, size=int(rng.integers(1, 6)))]
        prod = R.one
        for v in w:
            prod = R.mul(prod, R.var(v))
        assert prod == R.rewrite_word(w), w


@pytest.mark.parametrize("name", ["qcomm(2)", "delta-x2", "yx-p2"])
def test_print_parse_round_trip(name, rings):
    R = rings[name]
    rng = np.random.default_rng(7)
    for _ in range(100):
        e = R.random_element(rng, density=0.2)
        assert parse_element(R, print_canonical(e)) == e


def test_parse_errors(flagship):
    assert parse_element(flagship, "1") == flagship.one
    with pytest.raises(ParseError) as exc:
        parse_element(flagship, "x2*x1")
    assert "mul" in str(exc.value)
    with pytest.raises(ParseError):
        parse_element(flagship, "2*x9")
    with pytest.raises(ParseError):
        parse_element(flagship, "2 +")


def test_truncation_flag(dring):
    e = dring.from_raw([(1, (5, 5)), (1, (0, 1))])
    assert e.truncated and e == dring.var(2)


def test_precision_and_order_views(dring):
    hi = dring.at_precision(14)
    assert hi.N == 14 and dring.at_precision(14) is hi
    e = dring.var(1) + dring.var(2) ** 3
    assert dring.convert(hi.convert(e)) == e
    assert dring.with_order("deglex").lm(dring.with_order("deglex").convert(e)) == (1, 0)


def test_extension_field_ring():
    R = Ring(RingPresentation("A", 2, 2, 6, "deglex", m=2, sigma={(2, 1): [(Digit(2), (1, 0))]}))
    X, Y = R.var(1), R.var(2)
    assert R.mul(Y, X).terms == {(1, 1): 2}
    a, b, c = (R.random_element(np.random.default_rng(s)) for s in range(3))
    assert R.mul(R.mul(a, b), c) == R.mul(a, R.mul(b, c))


def test_concurrent_engine_build():
    R = Ring(preset("yx-p2", precision=9))
    a = R.random_element(np.random.default_rng(0))
    b = R.random_element(np.random.default_rng(1))
    out = []

    def work():
        out.append(R.mul(a, b))

    ts = [threading.Thread(target=work) for _ in range(6)]
    for t in ts:
        t.start()
    for t in ts:
        t.join()
    assert len(out) == 6 and all(o == out[0] for o in out)
    S = Ring(preset("yx-p2", precision=9))
    assert out[0].vec.tolist() == S.mul(S.element(a.vec), S.element(b.vec)).vec.tolist()


def test_convert_reduces_scalars_from_wide_ring():
    R = Ring(preset("yx-p2", precision=8))
    H = R.at_precision(70)
    assert H.dtype is object
    big = H.element(H._zeros())
    vec = big.vec.copy()
    vec[H.index[(0, 0)]] = 2 ** 100 + 5
    e = R.convert(H.element(vec))
    assert int(e.vec[R.index[(0, 0)]]) == (2 ** 100 + 5) % 3 ** 8
