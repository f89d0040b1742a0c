"""The Ringel-Hall algebra of a quiver over one prime field.

Two independent routes to structure constants are kept:

* ``hall_number`` / ``comultiply`` enumerate subrepresentations of L directly
  (echelon subspace tuples, stability check, classification of X and L/X);
* ``multiply`` enumerates extensions 0 -> N -> L_f -> M -> 0 with L_f the
  block upper-triangular representation [[y, f], [0, x]] and converts the
  count c_L = #{f : L_f ~ L} via
  alpha^L_{M,N} = c_L * a_L / (a_M * a_N * q^{sum_i dim M_i dim N_i}).
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Mapping

from .exactnum import QuadScalar, quantum_factorial
from .quiver import DimVector, Quiver, euler_form, sym_form
from .repmod import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    Rep,
    RepCatalog,
    RepClass,
    direct_sum,
    make_E,
    split_rep,
    stable_subspace_tuples,
)


class HallAlgebra:
    """H_q(Q) with exact QuadScalar coefficients and cached Hall numbers."""

    def __init__(self, quiver: Quiver, q: int, budget: int = DEFAULT_BUDGET, cache=None):
        self.quiver = quiver
        self.q = q
        self.budget = budget
        self.catalog = RepCatalog(quiver, q, budget)
        self.cache = cache  # optional HallCache (records hall numbers)
        self._hall: dict[tuple[str, str, str], int] = {}
        self._subreps: dict[str, dict[tuple[str, str], int]] = {}
        self._products: dict[tuple[str, str], dict[str, Fraction]] = {}
        if cache is not None:
            cache.verify = self._count_direct
            self._hall.update(cache.load())

    # -- scalars / basis ----------------------------------------------------
    def scalar(self, a=0, b=0) -> QuadScalar:
        return QuadScalar(self.q, a, b)

    def v(self, k: int) -> QuadScalar:
        return QuadScalar.v_power(self.q, k)

    def one(self) -> "HallElement":
        return self.basis(self.catalog.unit())

    def zero(self) -> "HallElement":
        return HallElement(self, {})

    def basis(self, cls: RepClass | Rep) -> "HallElement":
        if isinstance(cls, Rep):
            cls = self.catalog.classify(cls)
        return HallElement(self, {cls.class_id: self.scalar(1)})

    def cls(self, class_id: str) -> RepClass:
        return self.catalog.get(class_id)

    def E(self, i, l: int) -> "HallElement":
        return self.basis(make_E(self.quiver, i, l, self.q))

    def e(self, i, l: int) -> "HallElement":
        """e_{il} = v^{l^2} [E_{i,l}]."""
        return self.E(i, l) * self.v(l * l)

    # -- Hall numbers -------------------------------------------------------
    def subrep_table(self, L: RepClass) -> dict[tuple[str, str], int]:
        """{(M_id, N_id): #{X <= L : X ~ N, L/X ~ M}} over all sub-dimension vectors."""
        hit = self._subreps.get(L.class_id)
        if hit is not None:
            return hit
        table: dict[tuple[str, str], int] = {}
        rep = L.rep
        for sub_dim in product(*(range(n + 1) for n in rep.dim)):
            for sub in stable_subspace_tuples(rep, sub_dim, self.budget):
                x, quo = split_rep(rep, sub)
                n_id = self.catalog.classify(x).class_id
                m_id = self.catalog.classify(quo).class_id
                table[(m_id, n_id)] = table.get((m_id, n_id), 0) + 1
        self._subreps[L.class_id] = table
        for (m_id, n_id), c in table.items():
            self._record(m_id, n_id, L.class_id, c)
        return table

    def hall_number(self, M: RepClass, N: RepClass, L: RepClass) -> int:
        """#{X <= L : X ~ N, L/X ~ M}, by subspace enumeration."""
        if M.dim + N.dim != L.dim:
            return 0
        key = (M.class_id, N.class_id, L.class_id)
        if key in self._hall:
            return self._hall[key]
        table = self._subreps.get(L.class_id)
        if table is not None:
            return table.get((M.class_id, N.class_id), 0)
        count = self._count_direct(*key)
        self._record(*key, count)
        return count

    def _count_direct(self, m_id: str, n_id: str, l_id: str) -> int:
        L, N = self.cls(l_id), self.cls(n_id)
        count = 0
        for sub in stable_subspace_tuples(L.rep, N.dim, self.budget):
            x, quo = split_rep(L.rep, sub)
            if self.catalog.classify(x).class_id == n_id and self.catalog.classify(quo).class_id == m_id:
                count += 1
        return count

    def _record(self, m_id: str, n_id: str, l_id: str, count: int):
        key = (m_id, n_id, l_id)
        if key not in self._hall:
            self._hall[key] = count
            if self.cache is not None:
                self.cache.append(m_id, n_id, l_id, count)

    def extension_counts(self, M: RepClass, N: RepClass) -> dict[str, int]:
        """{L_id: #{f : L_f ~ L}} over all block upper-triangular extensions."""
        quiver, q = self.quiver, self.q
        blocks = []
        for s, t in quiver.arrows:
            blocks.append((N.dim[quiver.index(t)], M.dim[quiver.index(s)]))
        nfree = sum(r * c for r, c in blocks)
        if q**nfree > self.budget:
            raise BudgetExceeded(f"{q}^{nfree} extensions exceed budget {self.budget}")
        dim = M.dim + N.dim
        counts: dict[str, int] = {}
        for vals in product(range(q), repeat=nfree):
            pos = 0
            mats = []
            for k, (s, t) in enumerate(quiver.arrows):
                rows_n, cols_m = blocks[k]
                y = N.rep.mat(k)
                x = M.rep.mat(k)
                ns = N.dim[quiver.index(s)]
                mt = M.dim[quiver.index(t)]
                f = [list(vals[pos + r * cols_m : pos + (r + 1) * cols_m]) for r in range(rows_n)]
                pos += rows_n * cols_m
                top = [list(y[r]) + f[r] for r in range(rows_n)]
                bottom = [[0] * ns + list(x[r]) for r in range(mt)]
                mats.append(tuple(tuple(r) for r in top + bottom))
            L = self.catalog.classify(Rep(quiver, q, dim, tuple(mats)))
            counts[L.class_id] = counts.get(L.class_id, 0) + 1
        return counts

    def product_numbers(self, M: RepClass, N: RepClass) -> dict[str, Fraction]:
        """{L_id: alpha^L_{M,N}} computed from extension counts."""
        key = (M.class_id, N.class_id)
        hit = self._products.get(key)
        if hit is not None:
            return hit
        shared = sum(m * n for m, n in zip(M.dim, N.dim))
        out = {}
        for l_id, c in self.extension_counts(M, N).items():
            a_l = self.cls(l_id).aut_count
            alpha = Fraction(c * a_l, M.aut_count * N.aut_count * self.q**shared)
            if alpha.denominator != 1:
                raise ArithmeticError(f"non-integral Hall number {alpha} for {key} -> {l_id}")
            out[l_id] = alpha
            self._record(M.class_id, N.class_id, l_id, int(alpha))
        self._products[key] = out
        return out

    # -- algebra operations -------------------------------------------------
    def multiply(self, x: "HallElement", y: "HallElement") -> "HallElement":
        out: dict[str, QuadScalar] = {}
        for m_id, a in x.coeffs.items():
            M = self.cls(m_id)
            for n_id, b in y.coeffs.items():
                N = self.cls(n_id)
                tw = self.v(euler_form(self.quiver, M.dim, N.dim))
                ab = a * b * tw
                for l_id, alpha in self.product_numbers(M, N).items():
                    out[l_id] = out.get(l_id, self.scalar()) + ab * alpha
        return HallElement(self, out)

    def comultiply(self, x: "HallElement") -> "TensorElement":
        out: dict[tuple[str, str], QuadScalar] = {}
        for l_id, c in x.coeffs.items():
            L = self.cls(l_id)
            for (m_id, n_id), alpha in self.subrep_table(L).items():
                M, N = self.cls(m_id), self.cls(n_id)
                coeff = c * self.v(euler_form(self.quiver, M.dim, N.dim)) * Fraction(
                    alpha * M.aut_count * N.aut_count, L.aut_count
                )
                key = (m_id, n_id)
                out[key] = out.get(key, self.scalar()) + coeff
        return TensorElement(self, out)

    def green_pair(self, x: "HallElement", y: "HallElement") -> QuadScalar:
        total = self.scalar()
        for cid, a in x.coeffs.items():
            b = y.coeffs.get(cid)
            if b is not None:
                total = total + a * b * Fraction(1, self.cls(cid).aut_count)
        return total

    def tensor_pair(self, t: "TensorElement", y: "HallElement", z: "HallElement") -> QuadScalar:
        total = self.scalar()
        for (m_id, n_id), c in t.coeffs.items():
            a = y.coeffs.get(m_id)
            b = z.coeffs.get(n_id)
            if a is not None and b is not None:
                total = total + c * a * b * Fraction(1, self.cls(m_id).aut_count * self.cls(n_id).aut_count)
        return total

    def tensor(self, x: "HallElement", y: "HallElement") -> "TensorElement":
        out = {}
        for a_id, a in x.coeffs.items():
            for b_id, b in y.coeffs.items():
                out[(a_id, b_id)] = a * b
        return TensorElement(self, out)

    def tensor_multiply(self, s: "TensorElement", t: "TensorElement") -> "TensorElement":
        out: dict[tuple[str, str], QuadScalar] = {}
        for (m1, m2), a in s.coeffs.items():
            d2 = self.cls(m2).dim
            for (n1, n2), b in t.coeffs.items():
                tw = self.v(sym_form(self.quiver, d2, self.cls(n1).dim))
                left = self.multiply(self.basis(self.cls(m1)), self.basis(self.cls(n1)))
                right = self.multiply(self.basis(self.cls(m2)), self.basis(self.cls(n2)))
                ab = a * b * tw
                for l1, c1 in left.coeffs.items():
                    for l2, c2 in right.coeffs.items():
                        key = (l1, l2)
                        out[key] = out.get(key, self.scalar()) + ab * c1 * c2
        return TensorElement(self, out)

    def power(self, x: "HallElement", k: int) -> "HallElement":
        out = self.one()
        for _ in range(k):
            out = out * x
        return out

    def divided_power(self, i, k: int) -> "HallElement":
        """[E_i]^{(k)} = v^{k(k-1)} [E_i^{+k}] for a real vertex i."""
        rep = make_E(self.quiver, i, 1, self.q)
        acc = make_E(self.quiver, i, 1, self.q) if k else None
        if k == 0:
            return self.one()
        for _ in range(k - 1):
            acc = direct_sum(acc, rep)
        return self.basis(acc) * self.v(k * (k - 1))

    def divided_power_by_factorial(self, i, k: int) -> "HallElement":
        """[E_i]^k / [k]! evaluated at v = sqrt(q)."""
        return self.power(self.E(i, 1), k) * quantum_factorial(k).evaluate(self.q).inverse()


class HallElement:
    """Finite QuadScalar combination of isomorphism classes."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: HallAlgebra, coeffs: Mapping[str, QuadScalar]):
        self.algebra = algebra
        self.coeffs = {k: c for k, c in coeffs.items() if not c.is_zero()}

    def _coerce_scalar(self, c) -> QuadScalar:
        if isinstance(c, QuadScalar):
            return c
        return self.algebra.scalar(c)

    def __add__(self, other: "HallElement"):
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, self.algebra.scalar()) + c
        return HallElement(self.algebra, out)

    def __neg__(self):
        return HallElement(self.algebra, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HallElement):
            return self.algebra.multiply(self, other)
        c = self._coerce_scalar(other)
        return HallElement(self.algebra, {k: v * c for k, v in self.coeffs.items()})

    def __rmul__(self, other):
        c = self._coerce_scalar(other)
        return HallElement(self.algebra, {k: c * v for k, v in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, HallElement):
            return NotImplemented
        return self.coeffs == other.coeffs

    def degrees(self) -> set[DimVector]:
        return {self.algebra.cls(k).dim for k in self.coeffs}

    def to_dict(self) -> dict:
        return {k: str(c) for k, c in sorted(self.coeffs.items())}

    def __repr__(self):
        return f"HallElement({self.to_dict()})"


class TensorElement:
    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: HallAlgebra, coeffs: Mapping[tuple[str, str], QuadScalar]):
        self.algebra = algebra
        self.coeffs = {k: c for k, c in coeffs.items() if not c.is_zero()}

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, self.algebra.scalar()) + c
        return TensorElement(self.algebra, out)

    def __neg__(self):
        return TensorElement(self.algebra, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TensorElement):
            return self.algebra.tensor_multiply(self, other)
        c = other if isinstance(other, QuadScalar) else self.algebra.scalar(other)
        return TensorElement(self.algebra, {k: v * c for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.coeffs == other.coeffs

    def to_dict(self) -> dict:
        return {f"{a} (x) {b}": str(c) for (a, b), c in sorted(self.coeffs.items())}

    def __repr__(self):
        return f"TensorElement({self.to_dict()})"


def hall_number(M: RepClass, N: RepClass, L: RepClass, budget: int = DEFAULT_BUDGET) -> int:
    alg = HallAlgebra(L.rep.quiver, L.rep.q, budget)
    for c in (M, N, L):
        alg.catalog.classify(c.rep)
    return alg.hall_number(M, N, L)
