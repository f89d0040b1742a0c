from fractions import Fraction

import pytest

from hallforge.exactnum import InterpolationError, LaurentPoly, QuadScalar, RationalFn
from hallforge.generic import (
    GenericComposition,
    HeldOutMismatch,
    PrimeSide,
    fit_laurent,
    flag_count,
    hall_matching_nu,
)
from hallforge.hall import HallAlgebra
from hallforge.quiver import A2, B_QUIVER, JORDAN, TWO_LOOP, dims_up_to, words_of_dim
from hallforge.repmod import count_subspaces

V = LaurentPoly.monomial(1)
V2 = LaurentPoly.monomial(2)
ONE = LaurentPoly.const(1)
NU1 = RationalFn(V2, V2 - ONE)


@pytest.fixture(scope="module")
def generics():
    return {q.vertices + (len(q.arrows),): GenericComposition(q) for q in (JORDAN, TWO_LOOP, A2, B_QUIVER)}


def gen_of(generics, quiver):
    return generics[quiver.vertices + (len(quiver.arrows),)]


def hall_e_word(alg, word):
    out = alg.one()
    for i, l in word:
        out = out * alg.e(i, l)
    return out


@pytest.mark.parametrize("quiver", [JORDAN, TWO_LOOP, A2, B_QUIVER])
@pytest.mark.parametrize("q", [2, 3])
def test_flag_engine_matches_hall_algebra(quiver, q):
    """Pairings of e-words: flag counting against products of iso classes."""
    if quiver is TWO_LOOP and q == 3:
        height = 2
    else:
        height = 3
    alg = HallAlgebra(quiver, q)
    side = PrimeSide(quiver, q)
    for d in dims_up_to(quiver, height):
        words = words_of_dim(quiver, d, 3)
        elems = {w: hall_e_word(alg, w) for w in words}
        for u in words:
            for w in words:
                assert side.e_pair(u, w) == alg.green_pair(elems[u], elems[w]), (u, w)


def test_flag_count_is_grassmannian():
    # flags of type ((i,1),(i,2)) in F_q^3 are the 2-dim subspaces X_1
    for q in (2, 3, 5):
        assert flag_count(JORDAN, (("i", 1), ("i", 2)), q) == count_subspaces(3, 2, q)


def test_pair_values_example(generics):
    gen = gen_of(generics, JORDAN)
    vals = dict(gen.pair_values((("i", 1), ("i", 1)), (("i", 1), ("i", 1)), [2]))
    assert vals[2] == 8


def test_p_polynomial_examples(generics):
    w = (("i", 1), ("i", 1))
    assert gen_of(generics, JORDAN).p_polynomial(w, w) == LaurentPoly.const(2)
    assert gen_of(generics, A2).p_polynomial(w, w) == ONE + V2
    assert gen_of(generics, TWO_LOOP).p_polynomial(w, w) == LaurentPoly({-2: 1, 0: 1})
    for quiver in (JORDAN, A2, B_QUIVER):
        assert gen_of(generics, quiver).p_polynomial((("i", 1),), (("i", 1),)) == ONE
    # A2 mixed block
    assert gen_of(generics, A2).p_polynomial((("i", 1), ("j", 1)), (("j", 1), ("i", 1))) == LaurentPoly.monomial(-1)


def test_mixed_refined_weights_vanish(generics):
    for quiver in (JORDAN, TWO_LOOP):
        gen = gen_of(generics, quiver)
        for q in (2, 3, 5):
            side = gen.side(q)
            assert side.s_pair((("i", 2),), (("i", 1), ("i", 1))).is_zero()
            assert side.s_pair((("i", 3),), (("i", 1), ("i", 2))).is_zero()
            assert side.s_pair((("i", 1), ("i", 2)), (("i", 1), ("i", 1), ("i", 1))).is_zero()
        assert gen.p_polynomial((("i", 2),), (("i", 1), ("i", 1))) == LaurentPoly()


def test_generic_gram_examples(generics):
    gen = gen_of(generics, JORDAN)
    g = gen.generic_gram((("i", 1), ("i", 1)))
    assert g.matrix == [[NU1 * NU1 * 2]]
    g2 = gen.generic_gram((("i", 2),))
    assert g2.matrix == [[RationalFn(LaurentPoly.monomial(4), (LaurentPoly.monomial(4) - ONE) * 2)]]
    assert g2.to_dict()["verified_prime"] == 11


def test_s_norms(generics):
    gen = gen_of(generics, JORDAN)
    for l in (1, 2, 3):
        v2l = LaurentPoly.monomial(2 * l)
        assert gen.s_norm(("i", l)) == RationalFn(v2l, (v2l - ONE) * l)
    two = gen_of(generics, TWO_LOOP)
    den = LaurentPoly({6: 1, 4: -1, 2: 1, 0: -1})
    assert two.s_norm(("i", 3)) == RationalFn(LaurentPoly.monomial(6), den)


def test_e_norms_and_positivity(generics):
    for quiver in (JORDAN, TWO_LOOP):
        gen = gen_of(generics, quiver)
        for l in (1, 2, 3):
            assert gen.e_norm(("i", l)) == hall_matching_nu(l)
    for l in (1, 2, 3):
        series = hall_matching_nu(l).series_at_infinity(10)
        assert series[0] == 1
        assert all(c >= 0 and Fraction(c).denominator == 1 for c in series.values())
        assert all(e <= 0 for e in series)


def test_radical_test_examples(generics):
    jd = gen_of(generics, JORDAN)
    assert not jd.radical_test({(("i", 1), ("i", 2)): RationalFn(1)})
    # [s_1, s_2] = [e_1, e_2] since s_2 - e_2 is a multiple of e_1^2
    assert jd.radical_test({(("i", 1), ("i", 2)): RationalFn(1), (("i", 2), ("i", 1)): RationalFn(-1)})
    a2 = gen_of(generics, A2)
    d = RationalFn(V, ONE + V2)  # 1/[2]
    serre = {
        (("i", 1), ("i", 1), ("j", 1)): d,
        (("i", 1), ("j", 1), ("i", 1)): RationalFn(-1),
        (("j", 1), ("i", 1), ("i", 1)): d,
    }
    assert a2.radical_test(serre)
    broken = dict(serre)
    broken[(("j", 1), ("i", 1), ("i", 1))] = RationalFn(1)
    assert not a2.radical_test(broken)


def test_fit_laurent():
    p = LaurentPoly({-2: 1, 0: 3, 1: -2})
    samples = [(q, p.evaluate(q)) for q in (2, 3, 5, 7)]
    assert fit_laurent(samples, (11, p.evaluate(11)), 2) == p
    with pytest.raises(HeldOutMismatch):
        fit_laurent(samples, (11, p.evaluate(11) + 1), 2, max_bound=4)
    with pytest.raises(InterpolationError):
        fit_laurent([(q, QuadScalar(q, Fraction(1, 3))) for q in (2, 3, 5, 7)], (11, QuadScalar(11, Fraction(1, 3))), 2)


def test_config_validation():
    with pytest.raises(ValueError):
        GenericComposition(JORDAN, primes=(2, 2, 3))
    with pytest.raises(ValueError):
        GenericComposition(JORDAN, primes=(2, 3, 5, 7), held_out=7)
