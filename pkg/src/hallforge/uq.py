"""The symbolic positive half: the free algebra on e_{il} over Q(v), its
twisted coproduct, the pairing determined by (x, yz) = (delta x, y (x) z),
primitive generators s_{il}, Gram blocks and the comparison with the generic
Hall side."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .comp import compositions, primitive_coefficients
from .exactnum import LaurentPoly, RationalFn, quantum_factorial
from .linalg import rank
from .quiver import (
    Quiver,
    cartan,
    generator_index_set,
    refined_weight,
    refined_weights_of_dim,
    sym_form,
    word_dim,
    words_of_dim,
    words_of_weight,
)
from .generic import hall_matching_nu


class SymElement:
    """Q(v)-combination of e-words."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[tuple, RationalFn] | None = None):
        self.coeffs = {tuple(w): RationalFn.coerce(c) for w, c in (coeffs or {}).items() if c}

    @classmethod
    def word(cls, word, coeff=1) -> "SymElement":
        return cls({tuple(word): coeff})

    def __add__(self, other):
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out[w] + c if w in out else c
        return SymElement(out)

    def __neg__(self):
        return SymElement({w: -c for w, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, SymElement):
            out: dict = {}
            for a, ca in self.coeffs.items():
                for b, cb in other.coeffs.items():
                    k = a + b
                    out[k] = out[k] + ca * cb if k in out else ca * cb
            return SymElement(out)
        c = RationalFn.coerce(other)
        return SymElement({w: x * c for w, x in self.coeffs.items()})

    def __rmul__(self, other):
        c = RationalFn.coerce(other)
        return SymElement({w: c * x for w, x in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, SymElement):
            return NotImplemented
        return self.coeffs == other.coeffs

    def to_dict(self) -> dict:
        return {" ".join(f"e{i},{l}" for i, l in w) or "1": str(c) for w, c in self.coeffs.items()}

    def __repr__(self):
        return f"SymElement({self.to_dict()})"


def _tensor_add(acc: dict, key, c):
    if key in acc:
        s = acc[key] + c
        if s:
            acc[key] = s
        else:
            del acc[key]
    elif c:
        acc[key] = c


@dataclass
class PhiReport:
    beta: tuple
    words: list
    symbolic: list
    generic: list
    rank: int
    verdict: bool

    def to_dict(self) -> dict:
        return {
            "beta": [list(x) for x in self.beta],
            "words": [[list(x) for x in w] for w in self.words],
            "symbolic": [[str(x) for x in r] for r in self.symbolic],
            "generic": [[str(x) for x in r] for r in self.generic],
            "rank": self.rank,
            "verify_phi": self.verdict,
        }


class PositiveHalf:
    """U_v^+ realised as the free algebra E modulo the radical of its pairing."""

    def __init__(self, quiver: Quiver, nu: Mapping[tuple, RationalFn] | None = None, l_max: int = 3):
        self.quiver = quiver
        self.l_max = l_max
        self.cartan = cartan(quiver)
        letters = generator_index_set(quiver, l_max)
        nu = dict(nu or {})
        self.nu = {x: RationalFn.coerce(nu.get(x, hall_matching_nu(x[1]))) for x in letters}
        for x, val in self.nu.items():
            if val.is_zero():
                raise ValueError(f"nu{x} must be nonzero")
        self._delta: dict = {}
        self._pair: dict = {}
        self._s: dict = {}
        self._e_in_s: dict = {}

    # -- coproduct ----------------------------------------------------------
    def _deg(self, word):
        return word_dim(self.quiver, word)

    def delta_letter(self, letter) -> dict:
        i, l = letter
        vi = 1 - self.quiver.loops(i)
        out = {}
        for m in range(l + 1):
            n = l - m
            a = ((i, m),) if m else ()
            b = ((i, n),) if n else ()
            out[(a, b)] = LaurentPoly.monomial(vi * m * n)
        return out

    def delta_word(self, word) -> dict:
        """delta of an e-word: {(left word, right word): Laurent coefficient}."""
        word = tuple(word)
        hit = self._delta.get(word)
        if hit is not None:
            return hit
        if not word:
            out = {((), ()): LaurentPoly.const(1)}
        else:
            head = self.delta_word(word[:-1])
            last = self.delta_letter(word[-1])
            out: dict = {}
            for (x1, x2), c in head.items():
                d2 = self._deg(x2)
                for (y1, y2), c2 in last.items():
                    tw = sym_form(self.quiver, d2, self._deg(y1))
                    _tensor_add(out, (x1 + y1, x2 + y2), (c * c2).shift(tw))
        self._delta[word] = out
        return out

    def delta_sym(self, x: SymElement) -> dict:
        out: dict = {}
        for w, c in x.coeffs.items():
            for key, lc in self.delta_word(w).items():
                _tensor_add(out, key, c * RationalFn(lc))
        return out

    # -- pairing ------------------------------------------------------------
    def pair_words(self, u, w) -> RationalFn:
        u, w = tuple(u), tuple(w)
        key = (u, w)
        hit = self._pair.get(key)
        if hit is not None:
            return hit
        if self._deg(u) != self._deg(w):
            res = RationalFn(0)
        elif not w:
            res = RationalFn(1)
        elif len(w) == 1:
            if len(u) == 1:
                res = self.nu[u[0]] if u == w else RationalFn(0)
            else:
                res = self.pair_words(w, u)
        else:
            z = w[-1:]
            head = w[:-1]
            dz = self._deg(z)
            res = RationalFn(0)
            for (a, b), c in self.delta_word(u).items():
                if self._deg(b) != dz:
                    continue
                pz = self.pair_words(b, z)
                if pz.is_zero():
                    continue
                ph = self.pair_words(a, head)
                if ph.is_zero():
                    continue
                res = res + RationalFn(c) * ph * pz
        self._pair[key] = res
        return res

    def pair_sym(self, x: SymElement, y: SymElement) -> RationalFn:
        total = RationalFn(0)
        for a, ca in x.coeffs.items():
            for b, cb in y.coeffs.items():
                p = self.pair_words(a, b)
                if p:
                    total = total + ca * cb * p
        return total

    def pair_tensor(self, t: Mapping, y: SymElement, z: SymElement) -> RationalFn:
        total = RationalFn(0)
        for (a, b), c in t.items():
            total = total + c * self.pair_sym(SymElement.word(a), y) * self.pair_sym(SymElement.word(b), z)
        return total

    # -- generators ---------------------------------------------------------
    def e(self, i, l: int) -> SymElement:
        return SymElement.word(((i, l),))

    def s_sym(self, i, l: int) -> SymElement:
        key = (i, l)
        hit = self._s.get(key)
        if hit is not None:
            return hit
        target = ((i, l),)
        lower = [tuple((i, m) for m in c) for c in compositions(l) if c != (l,)]
        coeffs = primitive_coefficients(lower, target, self.pair_words)
        out = SymElement.word(target)
        for word, c in coeffs:
            out = out - SymElement.word(word, c)
        self._s[key] = out
        return out

    def s_word(self, word) -> SymElement:
        out = SymElement.word(())
        for i, l in word:
            out = out * self.s_sym(i, l)
        return out

    def e_in_s_basis(self, letter) -> dict:
        """e_{il} written as {s-word: coefficient}."""
        hit = self._e_in_s.get(letter)
        if hit is not None:
            return hit
        s = self.s_sym(*letter)
        out = {(letter,): RationalFn(1)}
        for word, c in s.coeffs.items():
            if word == (letter,):
                continue
            # e_{il} = s_{il} - sum_{lower} c_u e_u
            for sw, sc in self.e_word_in_s_basis(word).items():
                _tensor_add(out, sw, -c * sc)
        self._e_in_s[letter] = out
        return out

    def e_word_in_s_basis(self, word) -> dict:
        out = {(): RationalFn(1)}
        for letter in word:
            part = self.e_in_s_basis(letter)
            nxt: dict = {}
            for a, ca in out.items():
                for b, cb in part.items():
                    _tensor_add(nxt, a + b, ca * cb)
            out = nxt
        return out

    def to_s_basis(self, x: SymElement) -> dict:
        out: dict = {}
        for w, c in x.coeffs.items():
            for sw, sc in self.e_word_in_s_basis(w).items():
                _tensor_add(out, sw, c * sc)
        return out

    # -- Gram blocks ----------------------------------------------------------
    def gram_block_sym(self, beta) -> tuple[list, list]:
        beta = refined_weight(beta)
        words = words_of_weight(self.quiver, beta)
        elems = {w: self.s_word(w) for w in words}
        mat = [[self.pair_sym(elems[a], elems[b]) for b in words] for a in words]
        return words, mat

    def graded_dim(self, gamma: Sequence[int]) -> int:
        total = 0
        for beta in refined_weights_of_dim(self.quiver, gamma, self.l_max):
            _, mat = self.gram_block_sym(beta)
            total += rank(mat)
        return total

    def full_gram_rank(self, gamma: Sequence[int]) -> int:
        """Rank of the pairing on all e-words of coarse weight gamma."""
        words = words_of_dim(self.quiver, gamma, self.l_max)
        return rank([[self.pair_words(a, b) for b in words] for a in words])

    # -- relations ------------------------------------------------------------
    def divided_power(self, i, k: int) -> SymElement:
        out = SymElement.word(())
        for _ in range(k):
            out = out * self.e(i, 1)
        return out * (RationalFn(1) / RationalFn(quantum_factorial(k)))

    def serre_element(self, i, j, l: int) -> SymElement:
        if self.cartan.entry(i, i) != 2:
            raise ValueError(f"{i} is not a real vertex")
        if (i, 1) == (j, l):
            raise ValueError("Serre relation needs (i,1) != (j,l)")
        n_total = 1 - l * self.cartan.entry(i, j)
        out = SymElement()
        for k in range(n_total + 1):
            term = self.divided_power(i, k) * self.e(j, l) * self.divided_power(i, n_total - k)
            out = out + term * ((-1) ** k)
        return out

    def commutator(self, i, k: int, j, l: int) -> SymElement:
        if self.cartan.entry(i, j) != 0:
            raise ValueError(f"commutator relation needs a_ij = 0 for ({i}, {j})")
        x, y = self.e(i, k), self.e(j, l)
        return x * y - y * x

    def in_radical(self, x: SymElement) -> bool:
        """x pairs to zero with every e-word of its coarse weights."""
        dims = {self._deg(w) for w in x.coeffs}
        for d in dims:
            part = SymElement({w: c for w, c in x.coeffs.items() if self._deg(w) == d})
            for w in words_of_dim(self.quiver, d, self.l_max):
                if not self.pair_sym(part, SymElement.word(w)).is_zero():
                    return False
        return True

    def serre_radical_sym(self, kind: str, *params) -> bool:
        if kind == "serre":
            return self.in_radical(self.serre_element(*params))
        if kind == "commute":
            return self.in_radical(self.commutator(*params))
        raise ValueError(f"unknown relation kind {kind!r}")

    # -- comparison with the generic Hall side ---------------------------------
    def verify_phi(self, beta, generic) -> PhiReport:
        beta = refined_weight(beta)
        words, sym = self.gram_block_sym(beta)
        gen = generic.generic_gram(beta)
        if gen.words != words:
            raise AssertionError("word orders differ between the two sides")
        ok = all(a == b for ra, rb in zip(sym, gen.matrix) for a, b in zip(ra, rb))
        return PhiReport(beta, words, sym, gen.matrix, rank(sym), ok)
