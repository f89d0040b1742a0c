import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hallforge.quiver import (
    A2,
    B_QUIVER,
    JORDAN,
    TWO_LOOP,
    DimVector,
    Quiver,
    cartan,
    euler_form,
    generator_index_set,
    refined_weight,
    refined_weights_of_dim,
    sym_form,
    words_of_dim,
    words_of_weight,
)

ALL = [JORDAN, TWO_LOOP, A2, B_QUIVER]


def test_euler_form_examples():
    assert euler_form(A2, (1, 0), (0, 1)) == -1
    assert euler_form(A2, (0, 1), (1, 0)) == 0
    assert euler_form(JORDAN, (1,), (1,)) == 0
    assert euler_form(TWO_LOOP, (1,), (1,)) == -1


def test_sym_form_examples():
    assert sym_form(A2, (1, 0), (0, 1)) == -1
    assert sym_form(JORDAN, (1,), (1,)) == 0
    assert sym_form(TWO_LOOP, (1,), (1,)) == -2


def test_cartan_examples():
    assert cartan(JORDAN).matrix == ((0,),)
    assert cartan(JORDAN).kind("i") == "isotropic"
    a = cartan(A2)
    assert a.matrix == ((2, -1), (-1, 2)) and a.real == ("i", "j")
    b = cartan(B_QUIVER)
    assert b.matrix == ((2, -1), (-1, 0))
    assert b.real == ("i",) and b.isotropic == ("j",) and b.imaginary == ("j",)
    assert cartan(TWO_LOOP).kind("i") == "imaginary"


def test_generator_index_set():
    assert generator_index_set(A2, 3) == [("i", 1), ("j", 1)]
    assert generator_index_set(JORDAN, 3) == [("i", 1), ("i", 2), ("i", 3)]
    assert generator_index_set(B_QUIVER, 2) == [("i", 1), ("j", 1), ("j", 2)]
    with pytest.raises(ValueError):
        generator_index_set(A2, 0)


def test_json_roundtrip():
    text = '{"vertices": ["i","j"], "arrows": [["i","j"],["j","j"]]}'
    q = Quiver.from_json(text)
    assert q == B_QUIVER
    assert Quiver.from_json(q.canonical_json()) == q
    assert json.loads(q.canonical_json()) == {"vertices": ["i", "j"], "arrows": [["i", "j"], ["j", "j"]]}


def test_bad_quivers():
    with pytest.raises(ValueError):
        Quiver.from_json('{"vertices": ["i"], "arrows": [["i", "k"]]}')
    with pytest.raises(ValueError):
        Quiver.from_json('{"vertices": ["i", "i"], "arrows": []}')
    with pytest.raises(ValueError):
        Quiver.from_json('{"vertices": ["i"]}')


quivers = st.builds(
    lambda n, arrows: Quiver(tuple(f"v{k}" for k in range(n)), tuple((f"v{s % n}", f"v{t % n}") for s, t in arrows)),
    st.integers(1, 3),
    st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=5),
)


@given(quivers)
def test_cartan_properties(q):
    a = cartan(q)
    n = len(q.vertices)
    for x in range(n):
        assert a.matrix[x][x] <= 2 and a.matrix[x][x] % 2 == 0
        for y in range(n):
            assert a.matrix[x][y] == a.matrix[y][x]
            ex = [int(k == x) for k in range(n)]
            ey = [int(k == y) for k in range(n)]
            assert sym_form(q, ex, ey) == a.matrix[x][y]
            if x != y:
                assert a.matrix[x][y] == -q.arrow_count(q.vertices[x], q.vertices[y]) - q.arrow_count(
                    q.vertices[y], q.vertices[x]
                )


@given(quivers, st.data())
def test_euler_bilinear(q, data):
    n = len(q.vertices)
    vec = st.lists(st.integers(0, 4), min_size=n, max_size=n)
    a, b, c = data.draw(vec), data.draw(vec), data.draw(vec)
    ab = [x + y for x, y in zip(a, b)]
    assert euler_form(q, ab, c) == euler_form(q, a, c) + euler_form(q, b, c)
    assert euler_form(q, c, ab) == euler_form(q, c, a) + euler_form(q, c, b)


def test_dimvector():
    d = DimVector((1, 2)) + DimVector((0, 1))
    assert d == (1, 3) and d.total() == 4
    assert DimVector((0, 1)) <= d


def test_words():
    beta = refined_weight((("i", 2), ("i", 1)))
    assert beta == (("i", 1), ("i", 2))
    assert words_of_weight(JORDAN, beta) == [(("i", 1), ("i", 2)), (("i", 2), ("i", 1))]
    # compositions of 3: 4 words
    assert len(words_of_dim(JORDAN, (3,), 3)) == 4
    # partitions of 3
    assert len(refined_weights_of_dim(JORDAN, (3,), 3)) == 3
    assert len(words_of_dim(A2, (1, 1), 3)) == 2
