"""Quivers with loops, dimension vectors, Euler forms and the Borcherds-Cartan matrix."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

Letter = tuple  # (vertex name, level)
Word = tuple  # tuple of letters


class DimVector(tuple):
    """Per-vertex dimensions in the quiver's vertex order; + is entrywise."""

    def __new__(cls, entries: Iterable[int]):
        entries = tuple(int(x) for x in entries)
        if any(x < 0 for x in entries):
            raise ValueError(f"negative dimension in {entries}")
        return super().__new__(cls, entries)

    def __add__(self, other):
        if len(self) != len(other):
            raise ValueError("dimension vectors of different length")
        return DimVector(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        return DimVector(a - b for a, b in zip(self, other))

    def __le__(self, other):
        return all(a <= b for a, b in zip(self, other))

    def total(self) -> int:
        return sum(self)

    def is_zero(self) -> bool:
        return not any(self)


@dataclass(frozen=True)
class CartanData:
    vertices: tuple
    matrix: tuple  # tuple of row tuples

    def entry(self, i, j) -> int:
        return self.matrix[self.vertices.index(i)][self.vertices.index(j)]

    @property
    def real(self) -> tuple:
        return tuple(v for k, v in enumerate(self.vertices) if self.matrix[k][k] == 2)

    @property
    def imaginary(self) -> tuple:
        return tuple(v for k, v in enumerate(self.vertices) if self.matrix[k][k] <= 0)

    @property
    def isotropic(self) -> tuple:
        return tuple(v for k, v in enumerate(self.vertices) if self.matrix[k][k] == 0)

    def kind(self, i) -> str:
        a = self.entry(i, i)
        if a == 2:
            return "real"
        return "isotropic" if a == 0 else "imaginary"

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "matrix": [list(r) for r in self.matrix],
            "classes": {v: self.kind(v) for v in self.vertices},
        }


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple  # ((source, target), ...)
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        verts = tuple(self.vertices)
        arrows = tuple((s, t) for s, t in self.arrows)
        if len(set(verts)) != len(verts):
            raise ValueError("duplicate vertex names")
        for s, t in arrows:
            if s not in verts or t not in verts:
                raise ValueError(f"arrow ({s}, {t}) has an undeclared endpoint")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "arrows", arrows)
        object.__setattr__(self, "_index", {v: k for k, v in enumerate(verts)})

    # -- construction / serialization ------------------------------------
    @classmethod
    def from_dict(cls, data: dict) -> "Quiver":
        if "vertices" not in data or "arrows" not in data:
            raise ValueError("quiver JSON needs 'vertices' and 'arrows'")
        return cls(tuple(str(v) for v in data["vertices"]), tuple((str(s), str(t)) for s, t in data["arrows"]))

    @classmethod
    def from_json(cls, text: str) -> "Quiver":
        return cls.from_dict(json.loads(text))

    @classmethod
    def load(cls, path) -> "Quiver":
        with open(path) as fh:
            return cls.from_json(fh.read())

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "arrows": [list(a) for a in self.arrows]}

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    # -- structure ------------------------------------------------------------
    def index(self, v) -> int:
        return self._index[v]

    def loops(self, i) -> int:
        return sum(1 for s, t in self.arrows if s == i and t == i)

    def arrow_count(self, i, j) -> int:
        return sum(1 for s, t in self.arrows if s == i and t == j)

    def simple(self, i) -> DimVector:
        return DimVector(int(v == i) for v in self.vertices)

    def dim(self, entries: dict | Sequence[int]) -> DimVector:
        if isinstance(entries, dict):
            return DimVector(entries.get(v, 0) for v in self.vertices)
        return DimVector(entries)

    def zero_dim(self) -> DimVector:
        return DimVector(0 for _ in self.vertices)


def euler_form(quiver: Quiver, a: Sequence[int], b: Sequence[int]) -> int:
    """<a, b> = sum_i (1 - g_i) a_i b_i - sum_{arrows i->j, i != j} a_i b_j."""
    total = 0
    for k, v in enumerate(quiver.vertices):
        total += a[k] * b[k]
    for s, t in quiver.arrows:
        total -= a[quiver.index(s)] * b[quiver.index(t)]
    return total


def sym_form(quiver: Quiver, a: Sequence[int], b: Sequence[int]) -> int:
    return euler_form(quiver, a, b) + euler_form(quiver, b, a)


def cartan(quiver: Quiver) -> CartanData:
    n = len(quiver.vertices)
    rows = []
    for i in quiver.vertices:
        row = []
        for j in quiver.vertices:
            if i == j:
                row.append(2 * (1 - quiver.loops(i)))
            else:
                row.append(-quiver.arrow_count(i, j) - quiver.arrow_count(j, i))
        rows.append(tuple(row))
    assert len(rows) == n
    return CartanData(quiver.vertices, tuple(rows))


def generator_index_set(quiver: Quiver, l_max: int) -> list[Letter]:
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    a = cartan(quiver)
    out = []
    for i in quiver.vertices:
        top = 1 if a.entry(i, i) == 2 else l_max
        out.extend((i, l) for l in range(1, top + 1))
    return out


# -- words and refined weights ------------------------------------------------


def letter_dim(quiver: Quiver, letter: Letter) -> DimVector:
    i, l = letter
    return DimVector(l if v == i else 0 for v in quiver.vertices)


def word_dim(quiver: Quiver, word: Word) -> DimVector:
    out = quiver.zero_dim()
    for letter in word:
        out = out + letter_dim(quiver, letter)
    return out


def refined_weight(word: Word) -> tuple:
    """The multiset of letters, as a sorted tuple."""
    return tuple(sorted(word, key=_letter_key))


def _letter_key(letter):
    return (str(letter[0]), letter[1])


def lambda_form(quiver: Quiver, x: Letter, y: Letter) -> int:
    """(alpha_{ik}, alpha_{jl}) = k l a_ij."""
    return x[1] * y[1] * cartan(quiver).entry(x[0], y[0])


def v_exponent_self(quiver: Quiver, i) -> int:
    """Exponent of v_(i) = v^{1 - g_i}."""
    return 1 - quiver.loops(i)


def words_of_weight(quiver: Quiver, beta: tuple) -> list[Word]:
    """All distinct orderings of the refined weight beta, sorted (graded lex)."""
    from itertools import permutations

    return sorted(set(permutations(beta)), key=lambda w: [_letter_key(x) for x in w])


def words_of_dim(quiver: Quiver, d: Sequence[int], l_max: int) -> list[Word]:
    """All words in I^infinity (levels <= l_max) whose coarse weight is d."""
    letters = generator_index_set(quiver, l_max)
    d = tuple(d)
    out: list = []

    def rec(prefix, remaining):
        if not any(remaining):
            out.append(tuple(prefix))
            return
        for letter in letters:
            k = quiver.index(letter[0])
            if remaining[k] >= letter[1]:
                rem = list(remaining)
                rem[k] -= letter[1]
                rec(prefix + [letter], rem)

    rec([], list(d))
    return sorted(out, key=lambda w: (len(w), [_letter_key(x) for x in w]))


def refined_weights_of_dim(quiver: Quiver, d: Sequence[int], l_max: int) -> list[tuple]:
    seen = []
    for w in words_of_dim(quiver, d, l_max):
        rw = refined_weight(w)
        if rw not in seen:
            seen.append(rw)
    return seen


def dims_up_to(quiver: Quiver, height: int) -> list[DimVector]:
    """Nonzero dimension vectors of total size <= height."""
    n = len(quiver.vertices)
    out = []
    for d in product(range(height + 1), repeat=n):
        if 0 < sum(d) <= height:
            out.append(DimVector(d))
    return sorted(out, key=lambda d: (sum(d), tuple(d)))


# -- standard test quivers ----------------------------------------------------

JORDAN = Quiver(("i",), (("i", "i"),))
TWO_LOOP = Quiver(("i",), (("i", "i"), ("i", "i")))
A2 = Quiver(("i", "j"), (("i", "j"),))
B_QUIVER = Quiver(("i", "j"), (("i", "j"), ("j", "j")))


def refined_weights_up_to(quiver: Quiver, height: int, l_max: int = 3) -> list[tuple]:
    """Refined weights whose coarse weight has total size <= height."""
    out = []
    for d in dims_up_to(quiver, height):
        out.extend(refined_weights_of_dim(quiver, d, l_max))
    return out
