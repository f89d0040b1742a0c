import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hallforge.exactnum import LaurentPoly, RationalFn
from hallforge.generic import GenericComposition, hall_matching_nu
from hallforge.quiver import A2, B_QUIVER, JORDAN, TWO_LOOP, refined_weights_up_to, words_of_dim, words_of_weight
from hallforge.uq import PositiveHalf, SymElement

ONE = LaurentPoly.const(1)
V2 = LaurentPoly.monomial(2)
NU1 = RationalFn(V2, V2 - ONE)


def letter(i, l):
    return ((i, l),)


def test_delta_examples():
    uq = PositiveHalf(JORDAN)
    e1 = letter("i", 1)
    assert uq.delta_sym(uq.e("i", 1)) == {(e1, ()): RationalFn(1), ((), e1): RationalFn(1)}
    two = PositiveHalf(TWO_LOOP)
    got = two.delta_sym(two.e("i", 2))
    # v_(i) = v^{1-2} = v^-1
    assert got == {
        (letter("i", 2), ()): RationalFn(1),
        (e1, e1): RationalFn(LaurentPoly.monomial(-1)),
        ((), letter("i", 2)): RationalFn(1),
    }
    a2 = PositiveHalf(A2)
    ei, ej = letter("i", 1), letter("j", 1)
    got = a2.delta_sym(a2.e("i", 1) * a2.e("j", 1))
    assert got == {
        (ei + ej, ()): RationalFn(1),
        (ei, ej): RationalFn(1),
        (ej, ei): RationalFn(LaurentPoly.monomial(-1)),
        ((), ei + ej): RationalFn(1),
    }


def test_pair_examples():
    for quiver, vi in ((JORDAN, ONE), (TWO_LOOP, LaurentPoly.monomial(-1))):
        uq = PositiveHalf(quiver)
        nu1 = uq.nu[("i", 1)]
        e11 = (("i", 1), ("i", 1))
        assert uq.pair_words(e11, letter("i", 2)) == RationalFn(vi) * nu1 * nu1
        aa = 2 * (1 - quiver.loops("i"))
        assert uq.pair_words(e11, e11) == RationalFn(ONE + LaurentPoly.monomial(aa)) * nu1 * nu1
    a2 = PositiveHalf(A2)
    assert a2.pair_words(letter("i", 1), letter("j", 1)).is_zero()
    assert a2.pair_words((("i", 1), ("i", 1)), letter("i", 1)).is_zero()


def _random_words(quiver, d):
    return words_of_dim(quiver, d, 3)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([JORDAN, TWO_LOOP, A2, B_QUIVER]), st.data())
def test_pair_symmetric(quiver, data):
    uq = PositiveHalf(quiver)
    dims = [d for d in ((3,), (2,), (4,)) if len(d) == len(quiver.vertices)] or [(1, 1), (2, 1), (1, 2), (2, 2)]
    d = data.draw(st.sampled_from(dims))
    words = _random_words(quiver, d)
    coeff = st.integers(-3, 3)
    x = SymElement({w: data.draw(coeff) for w in data.draw(st.lists(st.sampled_from(words), max_size=3))})
    y = SymElement({w: data.draw(coeff) for w in data.draw(st.lists(st.sampled_from(words), max_size=3))})
    assert uq.pair_sym(x, y) == uq.pair_sym(y, x)


def test_pair_symmetric_with_arbitrary_nu():
    nu = {("i", 1): RationalFn(LaurentPoly({0: 3, 1: 1})), ("i", 2): RationalFn(7), ("i", 3): RationalFn(LaurentPoly({-1: 2}))}
    uq = PositiveHalf(TWO_LOOP, nu=nu)
    words = words_of_dim(TWO_LOOP, (3,), 3)
    for u in words:
        for w in words:
            assert uq.pair_words(u, w) == uq.pair_words(w, u)


def test_hopf_property():
    # (x, yz) = (delta x, y (x) z) with x, y, z words on B
    uq = PositiveHalf(B_QUIVER)
    for x in words_of_dim(B_QUIVER, (1, 2), 2):
        dx = uq.delta_sym(SymElement.word(x))
        for y in words_of_dim(B_QUIVER, (1, 1), 2):
            for z in words_of_dim(B_QUIVER, (0, 1), 2):
                lhs = uq.pair_sym(SymElement.word(x), SymElement.word(y + z))
                assert lhs == uq.pair_tensor(dx, SymElement.word(y), SymElement.word(z))


def test_nu_must_be_nonzero():
    with pytest.raises(ValueError):
        PositiveHalf(JORDAN, nu={("i", 1): RationalFn(0)})


def test_s_examples():
    uq = PositiveHalf(JORDAN)
    assert uq.s_sym("i", 1) == uq.e("i", 1)
    s2 = uq.s_sym("i", 2)
    assert s2 == uq.e("i", 2) - uq.e("i", 1) * uq.e("i", 1) * RationalFn(LaurentPoly({0: 1}), LaurentPoly.const(2))


@pytest.mark.parametrize("quiver", [JORDAN, TWO_LOOP, B_QUIVER])
def test_s_primitive(quiver):
    i = "j" if quiver is B_QUIVER else "i"
    uq = PositiveHalf(quiver)
    for l in (2, 3):
        s = uq.s_sym(i, l)
        d = uq.delta_sym(s)
        expect = {}
        for w, c in s.coeffs.items():
            expect[(w, ())] = c
            expect[((), w)] = c
        assert d == expect


def test_unitriangular():
    uq = PositiveHalf(TWO_LOOP)
    for l in (1, 2, 3):
        s = uq.s_sym("i", l)
        assert s.coeffs[letter("i", l)] == RationalFn(1)
    w = (("i", 2), ("i", 1))
    assert uq.s_word(w).coeffs[w] == RationalFn(1)


@pytest.mark.parametrize("quiver", [JORDAN, TWO_LOOP, A2, B_QUIVER])
def test_s_basis_roundtrip(quiver):
    uq = PositiveHalf(quiver)
    for beta in refined_weights_up_to(quiver, 3):
        for w in words_of_weight(quiver, beta):
            back = SymElement()
            for sw, c in uq.e_word_in_s_basis(w).items():
                back = back + uq.s_word(sw) * c
            assert back == SymElement.word(w)


def test_gram_examples():
    uq = PositiveHalf(JORDAN)
    words, mat = uq.gram_block_sym((("i", 1), ("i", 1)))
    assert mat == [[NU1 * NU1 * 2]]
    words, mat = uq.gram_block_sym((("i", 2),))
    nu2 = hall_matching_nu(2)
    assert mat == [[nu2 - NU1 * NU1 * RationalFn(1, 2)]]
    a2 = PositiveHalf(A2)
    words, mat = a2.gram_block_sym((("i", 1), ("j", 1)))
    assert len(words) == 2 and mat[0][1] == mat[1][0] and not mat[0][1].is_zero()


def test_graded_dims():
    jd = PositiveHalf(JORDAN)
    assert [jd.graded_dim((n,)) for n in (1, 2, 3)] == [1, 2, 3]
    assert PositiveHalf(A2).graded_dim((1, 1)) == 2
    # A2 at 2a_i + a_j: the Serre relation kills one of three words
    assert PositiveHalf(A2).graded_dim((2, 1)) == 2
    # full Gram rank over all e-words agrees with the blockwise count
    assert jd.full_gram_rank((3,)) == 3


def test_radical_examples():
    a2 = PositiveHalf(A2)
    assert a2.serre_radical_sym("serre", "i", "j", 1)
    jd = PositiveHalf(JORDAN)
    assert jd.serre_radical_sym("commute", "i", 1, "i", 2)
    assert not jd.in_radical(jd.e("i", 1) * jd.e("i", 1))
    with pytest.raises(ValueError):
        a2.serre_radical_sym("commute", "i", 1, "j", 1)


@pytest.fixture(scope="module")
def generics():
    return {id(q): GenericComposition(q) for q in (JORDAN, TWO_LOOP, A2, B_QUIVER)}


@pytest.mark.parametrize("quiver", [JORDAN, TWO_LOOP, A2, B_QUIVER])
def test_green_theorem_symbolic(quiver, generics):
    gen = generics[id(quiver)]
    uq = PositiveHalf(quiver)
    for beta in refined_weights_up_to(quiver, 3):
        norm = RationalFn(1)
        for x in beta:
            norm = norm * uq.pair_sym(uq.s_sym(*x), uq.s_sym(*x))
        words, mat = uq.gram_block_sym(beta)
        for a, w in enumerate(words):
            for b, w2 in enumerate(words):
                p = mat[a][b] / norm
                assert p.is_laurent() and p.as_laurent().is_integral()
                assert p.as_laurent() == gen.p_polynomial(w, w2)


def test_mixed_blocks_vanish():
    uq = PositiveHalf(JORDAN)
    assert uq.pair_sym(uq.s_word((("i", 2),)), uq.s_word((("i", 1), ("i", 1)))).is_zero()
    assert uq.pair_sym(uq.s_word((("i", 1), ("i", 2))), uq.s_word((("i", 3),))).is_zero()


def test_verify_phi(generics):
    uq = PositiveHalf(JORDAN)
    rep = uq.verify_phi((("i", 1), ("i", 1)), generics[id(JORDAN)])
    assert rep.verdict and rep.symbolic == [[NU1 * NU1 * 2]]
    assert rep.to_dict()["verify_phi"] is True
    a2 = PositiveHalf(A2)
    for beta in refined_weights_up_to(A2, 3):
        assert a2.verify_phi(beta, generics[id(A2)]).verdict
    bad = PositiveHalf(JORDAN, nu={("i", 2): hall_matching_nu(2) + 1})
    assert not bad.verify_phi((("i", 2),), generics[id(JORDAN)]).verdict
