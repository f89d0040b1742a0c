"""The generic composition algebra: the same Hall computation over several
primes, interpolated into Laurent polynomials in v.

Green pairings of e-monomials are counted through flags instead of through
class tables, which keeps q = 11 reachable at dimension 3.  As a function on
the representation space, e_u = c_u * (number of x-compatible flags of type
u), where a flag of type u = ((i_1,l_1), ..., (i_r,l_r)) is a chain
V = X_0 > X_1 > ... > X_r = 0 of graded subspaces with X_{k-1}/X_k of
dimension l_k at vertex i_k, and x is compatible when every arrow map sends
X_{k-1} into X_k.  Hence

    (e_u, e_u')_G = c_u c_u' / |G_d| * #flags(u) * sum_{F' of type u'} q^{dim C(F_u, F')}

with F_u one fixed flag and C(F, F') the linear space of representations
compatible with both flags.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .comp import compositions, primitive_coefficients
from .exactnum import (
    InterpolationError,
    LaurentPoly,
    QuadScalar,
    RationalFn,
    gl_order_poly,
)
from .linalg import nullspace_mod, rank_mod, rref_mod
from .quiver import (
    Quiver,
    cartan,
    euler_form,
    letter_dim,
    refined_weight,
    word_dim,
    words_of_weight,
)
from .repmod import group_order, subspaces, _grassmann_count

DEFAULT_PRIMES = (2, 3, 5, 7)
DEFAULT_HELD_OUT = 11
NORM_PRIMES = (2, 3, 5, 7, 11, 13, 17)
NORM_HELD_OUT = 19


class HeldOutMismatch(InterpolationError):
    pass


# ---------------------------------------------------------------------------
# flags
# ---------------------------------------------------------------------------


def _flag_steps(quiver: Quiver, word) -> list[int]:
    return [quiver.index(i) for i, _ in word]


def _standard_flag(quiver: Quiver, word) -> list[list[list[list[int]]]]:
    """flag[k][v] = basis of X_{k,v}, spanned by the first coordinates."""
    d = list(word_dim(quiver, word))
    cur = list(d)
    flag = [[_unit_rows(cur[v], d[v]) for v in range(len(d))]]
    for i, l in word:
        cur[quiver.index(i)] -= l
        flag.append([_unit_rows(cur[v], d[v]) for v in range(len(d))])
    return flag


def _unit_rows(k: int, n: int) -> list[list[int]]:
    return [[int(r == c) for c in range(n)] for r in range(k)]


def _subspaces_within(basis: list[list[int]], k: int, q: int) -> Iterable[list[list[int]]]:
    n = len(basis)
    for s in subspaces(n, k, q):
        yield [[sum(s[r][a] * basis[a][c] for a in range(n)) % q for c in range(len(basis[0]))] for r in range(k)]


def iter_flags(quiver: Quiver, word, q: int) -> Iterable[list]:
    d = list(word_dim(quiver, word))
    start = [_unit_rows(d[v], d[v]) for v in range(len(d))]

    def rec(k, cur, acc):
        if k == len(word):
            yield acc
            return
        i, l = word[k]
        v = quiver.index(i)
        for sub in _subspaces_within(cur[v], len(cur[v]) - l, q) if cur[v] else [[]]:
            nxt = list(cur)
            nxt[v] = sub
            yield from rec(k + 1, nxt, acc + [nxt])

    yield from rec(0, start, [start])


def flag_count(quiver: Quiver, word, q: int) -> int:
    d = list(word_dim(quiver, word))
    total = 1
    for i, l in word:
        v = quiver.index(i)
        total *= _grassmann_count(d[v], l, q)
        d[v] -= l
    return total


def _constraints(quiver: Quiver, flag, q: int) -> list[list[list[int]]]:
    """Per arrow: linear constraints on x_h (flattened d_t x d_s) from one flag."""
    d = [len(b) for b in flag[0]]
    out = []
    for s, t in quiver.arrows:
        si, ti = quiver.index(s), quiver.index(t)
        ds, dt = d[si], d[ti]
        rows = []
        for k in range(1, len(flag)):
            A = flag[k - 1][si]
            B = flag[k][ti]
            if not A or len(B) == dt:
                continue
            ann = nullspace_mod(B, q, dt) if B else _unit_rows(dt, dt)
            for a in A:
                for beta in ann:
                    rows.append([beta[r] * a[c] % q for r in range(dt) for c in range(ds)])
        if rows:
            rows, _ = rref_mod(rows, q, dt * ds)
        out.append(rows)
    return out


def compatible_dim_sum(quiver: Quiver, fixed_word, moving_word, q: int) -> int:
    """sum over flags F' of type moving_word of q^{dim C(F_fixed, F')}."""
    fixed = _constraints(quiver, _standard_flag(quiver, fixed_word), q)
    d = list(word_dim(quiver, fixed_word))
    sizes = [d[quiver.index(t)] * d[quiver.index(s)] for s, t in quiver.arrows]
    total = 0
    for flag in iter_flags(quiver, moving_word, q):
        moving = _constraints(quiver, flag, q)
        dim = 0
        for size, a, b in zip(sizes, fixed, moving):
            dim += size - (rank_mod(a + b, q, size) if (a or b) else 0)
        total += q**dim
    return total


# ---------------------------------------------------------------------------
# one prime
# ---------------------------------------------------------------------------


class PrimeSide:
    """Pairings of e- and s-monomials in C_q(Q), for one prime q."""

    def __init__(self, quiver: Quiver, q: int, l_max: int = 3):
        self.quiver = quiver
        self.q = q
        self.l_max = l_max
        self._epair: dict = {}
        self._sexp: dict = {}

    def v(self, k: int) -> QuadScalar:
        return QuadScalar.v_power(self.q, k)

    def twist(self, word) -> int:
        """Exponent of c_u = v^{sum l^2 + sum_{a<b} <dim a, dim b>}."""
        exp = sum(l * l for _, l in word)
        acc = self.quiver.zero_dim()
        for letter in word:
            dl = letter_dim(self.quiver, letter)
            exp += euler_form(self.quiver, acc, dl)
            acc = acc + dl
        return exp

    def e_pair(self, u, w) -> QuadScalar:
        u, w = tuple(u), tuple(w)
        if word_dim(self.quiver, u) != word_dim(self.quiver, w):
            return QuadScalar(self.q, 0)
        key = (u, w) if (u, w) <= (w, u) else (w, u)
        hit = self._epair.get(key)
        if hit is not None:
            return hit
        q = self.q
        fu, fw = flag_count(self.quiver, u, q), flag_count(self.quiver, w, q)
        if fu >= fw:
            count = fu * compatible_dim_sum(self.quiver, u, w, q)
        else:
            count = fw * compatible_dim_sum(self.quiver, w, u, q)
        g = group_order(word_dim(self.quiver, u), q)
        val = self.v(self.twist(u) + self.twist(w)) * Fraction(count, g)
        self._epair[key] = val
        return val

    def s_expansion(self, letter) -> dict:
        """s_{il} as {e-word: coefficient}."""
        hit = self._sexp.get(letter)
        if hit is not None:
            return hit
        i, l = letter
        target = ((i, l),)
        lower = [tuple((i, m) for m in c) for c in compositions(l) if c != (l,)]
        coeffs = primitive_coefficients(lower, target, self.e_pair)
        out = {target: QuadScalar(self.q, 1)}
        for word, c in coeffs:
            out[word] = out.get(word, QuadScalar(self.q, 0)) - c
        self._sexp[letter] = out
        return out

    def s_word_expansion(self, word) -> dict:
        out = {(): QuadScalar(self.q, 1)}
        for letter in word:
            exp = self.s_expansion(letter)
            nxt: dict = {}
            for a, ca in out.items():
                for b, cb in exp.items():
                    key = a + b
                    nxt[key] = nxt.get(key, QuadScalar(self.q, 0)) + ca * cb
            out = nxt
        return out

    def s_pair(self, w, w2) -> QuadScalar:
        total = QuadScalar(self.q, 0)
        ew = self.s_word_expansion(w)
        ew2 = self.s_word_expansion(w2)
        for a, ca in ew.items():
            for b, cb in ew2.items():
                total = total + ca * cb * self.e_pair(a, b)
        return total

    def s_norm(self, letter) -> QuadScalar:
        return self.s_pair((letter,), (letter,))

    def e_norm(self, letter) -> QuadScalar:
        return self.e_pair((letter,), (letter,))

    def norm_product(self, beta) -> QuadScalar:
        out = QuadScalar(self.q, 1)
        for letter in beta:
            out = out * self.s_norm(letter)
        return out


# ---------------------------------------------------------------------------
# interpolation with held-out verification
# ---------------------------------------------------------------------------


def fit_laurent(
    samples: Sequence[tuple[int, QuadScalar]],
    held_out: tuple[int, QuadScalar],
    bound: int,
    *,
    integral: bool = True,
    max_bound: int | None = None,
) -> LaurentPoly:
    """Laurent polynomial through samples, exponents within [-B, B], checked on held_out.

    For each parity a window of consecutive same-parity exponents (as many as
    samples) slides across [-B, B]; every exact solution (integral when asked)
    that also reproduces the held-out value is a candidate.  B starts at
    ``bound`` and doubles until a candidate appears.  Distinct surviving
    candidates are an error.
    """
    max_bound = max_bound if max_bound is not None else 8 * max(bound, 1)
    b = max(bound, 1)
    while True:
        try:
            return _fit_window(samples, held_out, b, integral)
        except HeldOutMismatch:
            if b >= max_bound:
                raise
            b *= 2


def _fit_window(samples, held_out, bound, integral) -> LaurentPoly:
    hq, hval = held_out
    result = LaurentPoly()
    for parity in (0, 1):
        exps = [e for e in range(-bound, bound + 1) if e % 2 == parity]
        width = min(len(samples), len(exps))
        found = set()
        for start in range(len(exps) - width + 1):
            try:
                fit = _fit_exact(samples, exps[start : start + width], integral)
            except InterpolationError:
                continue
            comp = fit.evaluate(hq)
            if (comp.b if parity else comp.a) == (hval.b if parity else hval.a):
                found.add(fit)
        if not found:
            raise HeldOutMismatch(f"no window within [-{bound}, {bound}] reproduces the held-out prime {hq}")
        if len(found) > 1:
            raise InterpolationError(f"ambiguous interpolation: {sorted(map(str, found))}")
        result = result + found.pop()
    return result


def _fit_exact(samples, window, integral) -> LaurentPoly:
    from .linalg import solve

    parity = window[0] % 2
    rows = [[Fraction(q) ** ((e - parity) // 2) for e in window] for q, _ in samples]
    rhs = [(val.b if parity else val.a) for _, val in samples]
    try:
        sol = solve(rows, rhs)
    except ValueError as exc:
        raise InterpolationError("inconsistent samples") from exc
    coeffs = {}
    for e, c in zip(window, sol):
        if c:
            if integral and Fraction(c).denominator != 1:
                raise InterpolationError("non-integer coefficients")
            coeffs[e] = c
    return LaurentPoly(coeffs)


# ---------------------------------------------------------------------------
# the generic side
# ---------------------------------------------------------------------------


@dataclass
class GenericGram:
    beta: tuple
    words: list
    matrix: list  # RationalFn entries
    p_matrix: list  # LaurentPoly entries
    norms: dict
    verified_prime: int

    def to_dict(self) -> dict:
        return {
            "beta": [list(x) for x in self.beta],
            "words": [[list(x) for x in w] for w in self.words],
            "P_matrix": [[str(p) for p in row] for row in self.p_matrix],
            "gram": [[str(x) for x in row] for row in self.matrix],
            "norms": {f"{i},{l}": str(n) for (i, l), n in self.norms.items()},
            "verified_prime": self.verified_prime,
        }


class GenericComposition:
    """C(Q) sampled at primes, with interpolated P_{w,w'} and s-norms."""

    def __init__(
        self,
        quiver: Quiver,
        primes: Sequence[int] = DEFAULT_PRIMES,
        held_out: int = DEFAULT_HELD_OUT,
        l_max: int = 3,
        norm_primes: Sequence[int] = NORM_PRIMES,
        norm_held_out: int = NORM_HELD_OUT,
    ):
        if len(set(primes)) != len(primes):
            raise ValueError("primes must be distinct")
        if held_out in primes:
            raise ValueError("held-out prime must not be among the interpolation primes")
        self.quiver = quiver
        self.primes = tuple(primes)
        self.held_out = held_out
        self.l_max = l_max
        self.norm_primes = tuple(norm_primes)
        self.norm_held_out = norm_held_out
        self._sides: dict[int, PrimeSide] = {}
        self._p: dict = {}
        self._snorm: dict = {}
        a = cartan(quiver)
        self._amax = max(abs(x) for row in a.matrix for x in row) or 1

    def side(self, q: int) -> PrimeSide:
        s = self._sides.get(q)
        if s is None:
            s = self._sides[q] = PrimeSide(self.quiver, q, self.l_max)
        return s

    def degree_bound(self, beta) -> int:
        ht = len(beta)
        lmax = max((l for _, l in beta), default=1)
        return max(2, ht * lmax * self._amax)

    def pair_values(self, w, w2, primes: Sequence[int] | None = None) -> list[tuple[int, QuadScalar]]:
        primes = self.primes if primes is None else primes
        return [(q, self.side(q).s_pair(w, w2)) for q in primes]

    def p_polynomial(self, w, w2) -> LaurentPoly:
        w, w2 = tuple(w), tuple(w2)
        beta = refined_weight(w)
        if refined_weight(w2) != beta:
            return LaurentPoly()
        key = (w, w2)
        hit = self._p.get(key)
        if hit is not None:
            return hit

        def sample(q):
            s = self.side(q)
            return (q, s.s_pair(w, w2) / s.norm_product(beta))

        samples = [sample(q) for q in self.primes]
        p = fit_laurent(samples, sample(self.held_out), self.degree_bound(beta))
        self._p[key] = p
        self._p[(w2, w)] = p
        return p

    def s_norm(self, letter) -> RationalFn:
        """(s_{il}, s_{il}) as a rational function: 1 / (interpolated reciprocal)."""
        hit = self._snorm.get(letter)
        if hit is not None:
            return hit
        samples = [(q, self.side(q).s_norm(letter).inverse()) for q in self.primes]
        held = (self.held_out, self.side(self.held_out).s_norm(letter).inverse())
        recip = fit_laurent(samples, held, 2 * letter[1] * letter[1], integral=False)
        out = RationalFn(1) / RationalFn(recip)
        self._snorm[letter] = out
        return out

    def e_norm(self, letter) -> RationalFn:
        """(e_{il}, e_{il}) as a rational function, interpolated on the norm primes."""
        l = letter[1]
        samples = [(q, self.side(q).e_norm(letter).inverse()) for q in self.norm_primes]
        held = (self.norm_held_out, self.side(self.norm_held_out).e_norm(letter).inverse())
        recip = fit_laurent(samples, held, 2 * l * l)
        return RationalFn(1) / RationalFn(recip)

    def generic_gram(self, beta) -> GenericGram:
        beta = refined_weight(beta)
        words = words_of_weight(self.quiver, beta)
        norms = {letter: self.s_norm(letter) for letter in dict.fromkeys(beta)}
        b = RationalFn(1)
        for letter in beta:
            b = b * norms[letter]
        pm = [[self.p_polynomial(w, w2) for w2 in words] for w in words]
        mat = [[RationalFn(p) * b for p in row] for row in pm]
        return GenericGram(beta, words, mat, pm, norms, self.held_out)

    def radical_test(self, coeffs: Mapping[tuple, RationalFn]) -> bool:
        """sum_w c_w P_{w,w'} == 0 for all w' of the same refined weight, per block."""
        blocks: dict = {}
        for w, c in coeffs.items():
            blocks.setdefault(refined_weight(w), {})[tuple(w)] = RationalFn.coerce(c)
        for beta, part in blocks.items():
            for w2 in words_of_weight(self.quiver, beta):
                total = RationalFn(0)
                for w, c in part.items():
                    total = total + c * RationalFn(self.p_polynomial(w, w2))
                if not total.is_zero():
                    return False
        return True


def hall_matching_nu(l: int) -> RationalFn:
    """v^{2l^2} / (v^{3/2 l(l-1)} (v^2-1)^l [l]!), i.e. v^{2l^2} / #GL_l(F_q)."""
    return RationalFn(LaurentPoly.monomial(2 * l * l), gl_order_poly(l))
