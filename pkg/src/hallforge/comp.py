"""The composition subalgebra over one prime field: e_{il}, primitive s_{il},
quantum Serre / commutation relations and the subspace counts behind them."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .exactnum import QuadScalar, gauss_binomial
from .hall import HallAlgebra, HallElement
from .linalg import independent_subset, solve
from .quiver import cartan
from .repmod import RepClass, count_subspaces, kernel_of, span_of, subspaces


class DegenerateGram(ArithmeticError):
    pass


@dataclass(frozen=True)
class CompGenerator:
    vertex: object
    level: int
    element: HallElement


@dataclass(frozen=True)
class PrimitiveGenerator:
    vertex: object
    level: int
    element: HallElement
    # s_{il} = e_{il} - sum coeff * e_u over lower e-words u
    lower: tuple  # ((word of levels, coefficient), ...)


def compositions(n: int, max_part: int | None = None) -> list[tuple[int, ...]]:
    """Ordered compositions of n (parts <= max_part), shortest first."""
    max_part = n if max_part is None else max_part
    out: list = []

    def rec(prefix, rem):
        if rem == 0:
            out.append(tuple(prefix))
            return
        for k in range(1, min(rem, max_part) + 1):
            rec(prefix + [k], rem - k)

    rec([], n)
    return sorted(out, key=lambda c: (len(c), c))


def primitive_coefficients(lower: Sequence, target, pair: Callable) -> list[tuple]:
    """Coefficients c_u with target - sum c_u u orthogonal to span(lower).

    A maximal subset of ``lower`` with nonsingular Gram matrix is used, so
    linear dependencies among lower monomials are harmless.
    """
    basis = independent_subset(pair, list(lower))
    if not basis:
        return []
    gram = [[pair(a, b) for b in basis] for a in basis]
    rhs = [pair(a, target) for a in basis]
    try:
        sol = solve(gram, rhs)
    except ValueError as exc:
        raise DegenerateGram(str(exc)) from exc
    return list(zip(basis, sol))


def e_generator(alg: HallAlgebra, i, l: int) -> CompGenerator:
    if cartan(alg.quiver).entry(i, i) == 2 and l != 1:
        raise ValueError(f"real vertex {i} only has level 1")
    return CompGenerator(i, l, alg.e(i, l))


def e_word(alg: HallAlgebra, i, levels: Sequence[int]) -> HallElement:
    out = alg.one()
    for m in levels:
        out = out * alg.e(i, m)
    return out


def orthogonalize_s(alg: HallAlgebra, i, l: int) -> PrimitiveGenerator:
    target = (l,)
    lower = [c for c in compositions(l) if c != target]
    elems = {c: e_word(alg, i, c) for c in lower + [target]}
    coeffs = primitive_coefficients(lower, target, lambda a, b: alg.green_pair(elems[a], elems[b]))
    s = elems[target]
    for word, c in coeffs:
        s = s - elems[word] * c
    return PrimitiveGenerator(i, l, s, tuple(coeffs))


# ---------------------------------------------------------------------------
# relations
# ---------------------------------------------------------------------------


def serre_length(alg: HallAlgebra, i, j, l: int) -> int:
    a = cartan(alg.quiver)
    if a.entry(i, i) != 2:
        raise ValueError(f"{i} is not a real vertex")
    if (i, 1) == (j, l):
        raise ValueError("Serre relation needs (i,1) != (j,l)")
    return 1 - l * a.entry(i, j)


def serre_element(alg: HallAlgebra, i, j, l: int, *, via_factorial: bool = False) -> HallElement:
    """sum_k (-1)^k [E_i]^(k) [E_{j,l}] [E_i]^(N-k), N = 1 - l a_ij."""
    n_total = serre_length(alg, i, j, l)
    dp = alg.divided_power_by_factorial if via_factorial else alg.divided_power
    out = alg.zero()
    for k in range(n_total + 1):
        term = dp(i, k) * alg.E(j, l) * dp(i, n_total - k)
        out = out + term * (-1) ** k
    return out


def serre_check(alg: HallAlgebra, i, j, l: int) -> tuple[bool, HallElement]:
    witness = serre_element(alg, i, j, l)
    return witness.is_zero(), witness


def commute_check(alg: HallAlgebra, i, k: int, j, l: int) -> bool:
    if cartan(alg.quiver).entry(i, j) != 0:
        raise ValueError(f"commutation relation needs a_ij = 0 for ({i}, {j})")
    x, y = alg.E(i, k), alg.E(j, l)
    return x * y == y * x


def serre_support(alg: HallAlgebra, i, j, l: int) -> list[tuple[RepClass, int]]:
    """(P, n) for every class P in [E_i]^(k)[E_{j,l}][E_i]^(n), all k + n = N."""
    n_total = serre_length(alg, i, j, l)
    out = []
    for k in range(n_total + 1):
        n = n_total - k
        term = alg.divided_power(i, k) * alg.E(j, l) * alg.divided_power(i, n)
        for cid in sorted(term.coeffs):
            out.append((alg.cls(cid), n))
    return out


def stable_subspace_count(alg: HallAlgebra, P: RepClass, n: int, i, j) -> tuple[int, int, int]:
    """#{n-dim Y with J_P <= Y <= K_P} together with (m_P, n_P).

    K_P is the joint kernel on P_i of the arrows i -> j, J_P the sum of the
    images in P_i of the arrows j -> i.
    """
    quiver, q = alg.quiver, alg.q
    rep = P.rep
    di = rep.dim[quiver.index(i)]
    out_maps = [rep.mat(k) for k, (s, t) in enumerate(quiver.arrows) if s == i and t == j]
    images = []
    for k, (s, t) in enumerate(quiver.arrows):
        if s == j and t == i:
            mat = rep.mat(k)
            images.extend([list(col) for col in zip(*mat)] if mat else [])
    K = kernel_of(out_maps, di, q)
    J = span_of(images, di, q)
    m_p, n_p = len(K), len(J)
    if n < n_p or n > m_p:
        return 0, m_p, n_p
    count = 0
    for Y in subspaces(di, n, q):
        if _contains(Y, J, q) and _contains(K, Y, q):
            count += 1
    return count, m_p, n_p


def _contains(big: Sequence, small: Sequence, q: int) -> bool:
    from .linalg import rank_mod

    if not small:
        return True
    if not big:
        return False
    n = len(small[0])
    return rank_mod([list(r) for r in big] + [list(r) for r in small], q, n) == len(big)


def stable_subspace_closed_form(q: int, m_p: int, n_p: int, n: int) -> QuadScalar:
    """v^{(m_P - n)(n - n_P)} [m_P - n_P choose n - n_P] at v = sqrt(q)."""
    if n < n_p or n > m_p:
        return QuadScalar(q, 0)
    return gauss_binomial(m_p - n_p, n - n_p).shift((m_p - n) * (n - n_p)).evaluate(q)


def beta_via_hall(alg: HallAlgebra, P: RepClass, n: int, i) -> int:
    """sum_L alpha^P_{L, E_i^{+n}} read off the subrepresentation table of P."""
    from .repmod import direct_sum, make_E

    if n == 0:
        sub = alg.catalog.unit()
    else:
        rep = make_E(alg.quiver, i, 1, alg.q)
        acc = rep
        for _ in range(n - 1):
            acc = direct_sum(acc, rep)
        sub = alg.catalog.classify(acc)
    return sum(c for (m_id, n_id), c in alg.subrep_table(P).items() if n_id == sub.class_id)


def grassmannian_count(n: int, k: int, q: int) -> int:
    return count_subspaces(n, k, q)
