"""Representations of a quiver over a prime field F_q.

Isomorphism classes are found by walking orbits of prod_i GL_{d_i}(F_q) on
the representation space.  A point of the space is the concatenation of all
arrow matrices (arrow order, row-major); its integer code reads these entries
as base-q digits, most significant first, so numeric order on codes is the
lexicographic order on matrix tuples.  The canonical representative of a class
is the minimal code in its orbit.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from math import prod
from typing import Iterator, Sequence

import numpy as np

from .linalg import inverse_mod, matmul_mod, nullspace_mod, rank_mod, rref_mod
from .quiver import DimVector, Quiver, euler_form

DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def gl_order(n: int, q: int) -> int:
    return prod(q**n - q**s for s in range(n))


def group_order(dim: Sequence[int], q: int) -> int:
    return prod(gl_order(n, q) for n in dim)


Matrix = tuple  # tuple of row tuples over F_q


def zero_matrix(rows: int, cols: int) -> Matrix:
    return tuple(tuple(0 for _ in range(cols)) for _ in range(rows))


@dataclass(frozen=True)
class Rep:
    quiver: Quiver
    q: int
    dim: DimVector
    mats: tuple  # one d_in x d_out matrix per arrow

    def __post_init__(self):
        object.__setattr__(self, "dim", DimVector(self.dim))
        if len(self.mats) != len(self.quiver.arrows):
            raise ValueError("one matrix per arrow required")
        mats = []
        for (s, t), m in zip(self.quiver.arrows, self.mats):
            rows, cols = self.dim[self.quiver.index(t)], self.dim[self.quiver.index(s)]
            m = tuple(tuple(int(x) % self.q for x in r) for r in m)
            if len(m) != rows or any(len(r) != cols for r in m):
                raise ValueError(f"matrix for arrow {s}->{t} must be {rows}x{cols}")
            if rows == 0:
                m = ()
            mats.append(m)
        object.__setattr__(self, "mats", tuple(mats))

    def point(self) -> tuple:
        return tuple(x for m in self.mats for r in m for x in r)

    def mat(self, k: int) -> list[list[int]]:
        s, t = self.quiver.arrows[k]
        rows, cols = self.dim[self.quiver.index(t)], self.dim[self.quiver.index(s)]
        if rows == 0:
            return []
        return [list(r) for r in self.mats[k]] if cols else [[] for _ in range(rows)]


def space_layout(quiver: Quiver, dim: Sequence[int]) -> list[tuple[int, int, int]]:
    """(offset, rows, cols) of each arrow block inside a flattened point."""
    out = []
    off = 0
    for s, t in quiver.arrows:
        rows, cols = dim[quiver.index(t)], dim[quiver.index(s)]
        out.append((off, rows, cols))
        off += rows * cols
    return out


def space_size(quiver: Quiver, dim: Sequence[int]) -> int:
    return sum(r * c for _, r, c in space_layout(quiver, dim))


def rep_from_point(quiver: Quiver, q: int, dim: Sequence[int], point: Sequence[int]) -> Rep:
    mats = []
    for off, rows, cols in space_layout(quiver, dim):
        block = point[off : off + rows * cols]
        mats.append(tuple(tuple(block[r * cols : (r + 1) * cols]) for r in range(rows)))
    return Rep(quiver, q, DimVector(dim), tuple(mats))


def make_E(quiver: Quiver, i, l: int, q: int) -> Rep:
    """k^l at vertex i, zero elsewhere, every arrow map zero."""
    if l < 1:
        raise ValueError("level must be >= 1")
    dim = DimVector(l if v == i else 0 for v in quiver.vertices)
    return zero_rep(quiver, q, dim)


def zero_rep(quiver: Quiver, q: int, dim: Sequence[int]) -> Rep:
    dim = DimVector(dim)
    mats = tuple(zero_matrix(rows, cols) for _, rows, cols in space_layout(quiver, dim))
    return Rep(quiver, q, dim, mats)


def direct_sum(m: Rep, n: Rep) -> Rep:
    quiver, q = m.quiver, m.q
    dim = m.dim + n.dim
    mats = []
    for k, (s, t) in enumerate(quiver.arrows):
        a, b = m.mat(k), n.mat(k)
        cs_m = m.dim[quiver.index(s)]
        cs_n = n.dim[quiver.index(s)]
        rows = [list(r) + [0] * cs_n for r in a] + [[0] * cs_m + list(r) for r in b]
        mats.append(tuple(tuple(r) for r in rows))
    return Rep(quiver, q, dim, tuple(mats))


# ---------------------------------------------------------------------------
# Hom / Ext
# ---------------------------------------------------------------------------


def hom_dim(m: Rep, n: Rep) -> int:
    """dim of {(phi_i: M_i -> N_i) : phi_t x_h = y_h phi_s for every arrow h}."""
    quiver, q = m.quiver, m.q
    if n.quiver != quiver or n.q != q:
        raise ValueError("representations over different quivers or fields")
    offsets = {}
    off = 0
    for k, v in enumerate(quiver.vertices):
        offsets[v] = off
        off += n.dim[k] * m.dim[k]
    nvars = off

    def var(v, r, c):  # entry (r, c) of phi_v, an N_v x M_v matrix
        return offsets[v] + r * m.dim[quiver.index(v)] + c

    eqs = []
    for k, (s, t) in enumerate(quiver.arrows):
        x = m.mat(k)  # M_t x M_s
        y = n.mat(k)  # N_t x N_s
        dt_n = n.dim[quiver.index(t)]
        ds_m = m.dim[quiver.index(s)]
        dt_m = m.dim[quiver.index(t)]
        ds_n = n.dim[quiver.index(s)]
        for r in range(dt_n):
            for c in range(ds_m):
                row = [0] * nvars
                # (phi_t x)[r, c] = sum_a phi_t[r, a] x[a, c]
                for a in range(dt_m):
                    if x[a][c]:
                        row[var(t, r, a)] += x[a][c]
                # (y phi_s)[r, c] = sum_b y[r, b] phi_s[b, c]
                for b in range(ds_n):
                    if y[r][b]:
                        row[var(s, b, c)] -= y[r][b]
                eqs.append(row)
    if nvars == 0:
        return 0
    return nvars - rank_mod(eqs, q, nvars)


def ext_dim(m: Rep, n: Rep) -> int:
    return hom_dim(m, n) - euler_form(m.quiver, m.dim, n.dim)


# ---------------------------------------------------------------------------
# orbits
# ---------------------------------------------------------------------------


def _gl_generators(n: int, q: int) -> list[list[list[int]]]:
    """Transvections I + E_ab plus diag(g, 1, ..., 1) with g a primitive root."""
    if n == 0:
        return []
    gens = []
    for a in range(n):
        for b in range(n):
            if a != b:
                m = [[int(r == c) for c in range(n)] for r in range(n)]
                m[a][b] = 1
                gens.append(m)
    g = _primitive_root(q)
    if g != 1:
        m = [[int(r == c) for c in range(n)] for r in range(n)]
        m[0][0] = g
        gens.append(m)
    return gens


def _primitive_root(q: int) -> int:
    if q == 2:
        return 1
    phi = q - 1
    factors = {p for p in range(2, phi + 1) if phi % p == 0 and is_prime(p)}
    for g in range(2, q):
        if all(pow(g, phi // p, q) != 1 for p in factors):
            return g
    raise ValueError(f"no primitive root mod {q}")


class OrbitSpace:
    """The representation space of one dimension vector with its group action."""

    def __init__(self, quiver: Quiver, q: int, dim: Sequence[int], budget: int = DEFAULT_BUDGET):
        self.quiver = quiver
        self.q = q
        self.dim = DimVector(dim)
        self.budget = budget
        self.layout = space_layout(quiver, self.dim)
        self.n = sum(r * c for _, r, c in self.layout)
        self.size = q**self.n
        self.group_order = group_order(self.dim, q)
        if self.size >= 2**62:
            raise BudgetExceeded(f"representation space q^{self.n} too large to encode")
        self.weights = np.array([q ** (self.n - 1 - k) for k in range(self.n)], dtype=np.int64)
        self._maps = self._generator_maps()
        self._canon: dict[int, tuple[int, int]] = {}  # code -> (canonical code, orbit size)

    def _generator_maps(self) -> list[np.ndarray]:
        """Each group generator as an n x n matrix acting on flattened points."""
        maps = []
        q = self.q
        for vi, v in enumerate(self.quiver.vertices):
            for g in _gl_generators(self.dim[vi], q):
                ginv = inverse_mod(g, q)
                t = np.zeros((self.n, self.n), dtype=np.int64)
                for k, ((s, tv), (off, rows, cols)) in enumerate(zip(self.quiver.arrows, self.layout)):
                    left = g if tv == v else None
                    right = ginv if s == v else None
                    # x -> left @ x @ right on the block
                    for r in range(rows):
                        for c in range(cols):
                            dst = off + r * cols + c
                            for a in range(rows):
                                lf = (left[r][a] if left is not None else int(r == a))
                                if not lf:
                                    continue
                                for b in range(cols):
                                    rf = (right[b][c] if right is not None else int(b == c))
                                    if rf:
                                        t[dst, off + a * cols + b] += lf * rf
                maps.append(t % q)
        return maps

    def encode(self, pts: np.ndarray) -> np.ndarray:
        return pts @ self.weights

    def decode(self, code: int) -> tuple:
        out = []
        for _ in range(self.n):
            code, r = divmod(code, self.q)
            out.append(r)
        return tuple(reversed(out))

    def orbit_codes(self, point: Sequence[int]) -> np.ndarray:
        """All codes in the orbit of point (sorted)."""
        start = np.array([list(point)], dtype=np.int64).reshape(1, self.n)
        if self.n == 0 or not self._maps:
            return self.encode(start)
        visited = np.unique(self.encode(start))
        frontier = start
        while len(frontier):
            new = np.concatenate([(frontier @ t.T) % self.q for t in self._maps])
            codes = self.encode(new)
            codes, idx = np.unique(codes, return_index=True)
            fresh = ~np.isin(codes, visited, assume_unique=True)
            codes, idx = codes[fresh], idx[fresh]
            if not len(codes):
                break
            visited = np.union1d(visited, codes)
            if len(visited) > self.budget:
                raise BudgetExceeded(
                    f"orbit exploration exceeded budget {self.budget} "
                    f"(dim {tuple(self.dim)}, q={self.q}, group order {self.group_order})"
                )
            frontier = new[idx]
        return visited

    def canonical(self, point: Sequence[int]) -> tuple[int, int]:
        """(canonical code, orbit size) of the orbit through point."""
        code = int(self.encode(np.array(point, dtype=np.int64).reshape(1, self.n))[0]) if self.n else 0
        hit = self._canon.get(code)
        if hit is not None:
            return hit
        orbit = self.orbit_codes(point)
        res = (int(orbit[0]), len(orbit))
        for c in orbit.tolist():
            self._canon[c] = res
        return res

    def enumerate(self) -> list[tuple[int, int]]:
        """(canonical code, orbit size) for every orbit, in increasing code order."""
        if self.size > self.budget or self.group_order > self.budget:
            raise BudgetExceeded(
                f"enumeration of dim {tuple(self.dim)} over F_{self.q}: "
                f"{self.size} points, group order {self.group_order}, budget {self.budget}"
            )
        seen = np.zeros(self.size, dtype=bool)
        out = []
        code = 0
        while code < self.size:
            if not seen[code]:
                orbit = self.orbit_codes(self.decode(code))
                seen[orbit] = True
                res = (code, len(orbit))
                for c in orbit.tolist():
                    self._canon[c] = res
                out.append(res)
            code += 1
            nxt = np.flatnonzero(~seen[code:])
            if not len(nxt):
                break
            code += int(nxt[0])
        return out


# ---------------------------------------------------------------------------
# classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RepClass:
    rep: Rep  # canonical representative
    aut_count: int
    class_id: str
    code: int = field(compare=False)

    @property
    def dim(self) -> DimVector:
        return self.rep.dim


def class_id_for(dim: Sequence[int], code: int) -> str:
    return ",".join(str(x) for x in dim) + "#" + str(code)


class RepCatalog:
    """Canonicalization of representations over one (quiver, q), with memoized orbits."""

    def __init__(self, quiver: Quiver, q: int, budget: int = DEFAULT_BUDGET):
        if not is_prime(q):
            raise ValueError(f"q={q} is not prime")
        self.quiver = quiver
        self.q = q
        self.budget = budget
        self._spaces: dict[DimVector, OrbitSpace] = {}
        self._classes: dict[str, RepClass] = {}

    def space(self, dim: Sequence[int]) -> OrbitSpace:
        dim = DimVector(dim)
        sp = self._spaces.get(dim)
        if sp is None:
            sp = self._spaces[dim] = OrbitSpace(self.quiver, self.q, dim, self.budget)
        return sp

    def _make_class(self, dim: DimVector, code: int, orbit: int) -> RepClass:
        cid = class_id_for(dim, code)
        cls = self._classes.get(cid)
        if cls is None:
            sp = self.space(dim)
            rep = rep_from_point(self.quiver, self.q, dim, sp.decode(code))
            cls = RepClass(rep, sp.group_order // orbit, cid, code)
            assert cls.aut_count * orbit == sp.group_order
            self._classes[cid] = cls
        return cls

    def classify(self, rep: Rep) -> RepClass:
        if rep.quiver != self.quiver or rep.q != self.q:
            raise ValueError("representation belongs to another catalog")
        sp = self.space(rep.dim)
        code, orbit = sp.canonical(rep.point())
        return self._make_class(rep.dim, code, orbit)

    def get(self, class_id: str) -> RepClass:
        cls = self._classes.get(class_id)
        if cls is not None:
            return cls
        # rebuild from the id (used when reading persisted records)
        dims, _, code = class_id.partition("#")
        dim = DimVector(int(x) for x in dims.split(",")) if dims else self.quiver.zero_dim()
        return self.classify(rep_from_point(self.quiver, self.q, dim, self.space(dim).decode(int(code))))

    def unit(self) -> RepClass:
        return self.classify(zero_rep(self.quiver, self.q, self.quiver.zero_dim()))

    def enumerate_classes(self, dim: Sequence[int]) -> list[RepClass]:
        dim = DimVector(dim)
        sp = self.space(dim)
        return [self._make_class(dim, code, orbit) for code, orbit in sp.enumerate()]

    def E(self, i, l: int) -> RepClass:
        return self.classify(make_E(self.quiver, i, l, self.q))


def enumerate_classes(quiver: Quiver, dim: Sequence[int], q: int, budget: int = DEFAULT_BUDGET) -> list[RepClass]:
    return RepCatalog(quiver, q, budget).enumerate_classes(dim)


# ---------------------------------------------------------------------------
# subspaces, subrepresentations, quotients
# ---------------------------------------------------------------------------


def subspaces(n: int, k: int, q: int) -> Iterator[tuple]:
    """All k-dim subspaces of F_q^n as reduced row echelon bases (tuple of rows)."""
    if k == 0:
        yield ()
        return
    for pivots in combinations(range(n), k):
        free = [(r, c) for r in range(k) for c in range(pivots[r] + 1, n) if c not in pivots]
        for vals in product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for r, p in enumerate(pivots):
                rows[r][p] = 1
            for (r, c), x in zip(free, vals):
                rows[r][c] = x
            yield tuple(tuple(r) for r in rows)


def count_subspaces(n: int, k: int, q: int) -> int:
    return sum(1 for _ in subspaces(n, k, q))


def _apply(mat: list[list[int]], vec: Sequence[int], q: int) -> list[int]:
    return [sum(a * b for a, b in zip(row, vec)) % q for row in mat]


def _complement(basis: Sequence[Sequence[int]], n: int) -> list[list[int]]:
    """Unit vectors at the non-pivot columns of an echelon basis."""
    piv = set()
    for r in basis:
        piv.add(next(c for c, x in enumerate(r) if x))
    return [[int(c == j) for c in range(n)] for j in range(n) if j not in piv]


def is_stable(rep: Rep, sub: Sequence[Sequence[Sequence[int]]]) -> bool:
    """sub[v] is an echelon basis of X_v; checks x_h(X_s) in X_t for all arrows."""
    quiver, q = rep.quiver, rep.q
    for k, (s, t) in enumerate(quiver.arrows):
        xs = sub[quiver.index(s)]
        if not xs:
            continue
        xt = sub[quiver.index(t)]
        mat = rep.mat(k)
        base = len(xt)
        for b in xs:
            img = _apply(mat, b, q)
            if not any(img):
                continue
            if rank_mod([list(r) for r in xt] + [img], q, len(img)) != base:
                return False
    return True


def split_rep(rep: Rep, sub: Sequence[Sequence[Sequence[int]]]) -> tuple[Rep, Rep]:
    """(X, L/X) for a stable subspace tuple X of L = rep, in adapted bases."""
    quiver, q = rep.quiver, rep.q
    bases = []
    invs = []
    for k, v in enumerate(quiver.vertices):
        n = rep.dim[k]
        b = [list(r) for r in sub[k]]
        full = b + _complement(b, n)
        bases.append((len(b), full))
        invs.append(inverse_mod(full, q) if n else [])
    sub_mats, quo_mats = [], []
    for k, (s, t) in enumerate(quiver.arrows):
        si, ti = quiver.index(s), quiver.index(t)
        ks, full_s = bases[si]
        kt, full_t = bases[ti]
        mat = rep.mat(k)
        # column a of the new matrix = coordinates of x_h(basis vector a)
        cols = []
        for vec in full_s:
            img = _apply(mat, vec, q)
            coords = matmul_mod([img], invs[ti], q)[0] if rep.dim[ti] else []
            cols.append(coords)
        sub_m = [[cols[a][r] for a in range(ks)] for r in range(kt)]
        quo_m = [[cols[a][r] for a in range(ks, len(full_s))] for r in range(kt, len(full_t))]
        sub_mats.append(tuple(tuple(r) for r in sub_m))
        quo_mats.append(tuple(tuple(r) for r in quo_m))
    sub_dim = DimVector(len(sub[k]) for k in range(len(quiver.vertices)))
    return (
        Rep(quiver, q, sub_dim, tuple(sub_mats)),
        Rep(quiver, q, rep.dim - sub_dim, tuple(quo_mats)),
    )


def stable_subspace_tuples(rep: Rep, sub_dim: Sequence[int], budget: int = DEFAULT_BUDGET) -> Iterator[tuple]:
    q = rep.q
    total = 1
    for n, k in zip(rep.dim, sub_dim):
        if k > n:
            return
        total *= _grassmann_count(n, k, q)
    if total > budget:
        raise BudgetExceeded(f"{total} subspace tuples exceed budget {budget}")
    per_vertex = [list(subspaces(n, k, q)) for n, k in zip(rep.dim, sub_dim)]
    for combo in product(*per_vertex):
        if is_stable(rep, combo):
            yield combo


def _grassmann_count(n: int, k: int, q: int) -> int:
    num = 1
    den = 1
    for s in range(k):
        num *= q ** (n - s) - 1
        den *= q ** (k - s) - 1
    return num // den


def kernel_of(mats: Sequence[list[list[int]]], n: int, q: int) -> list[list[int]]:
    """Echelon basis of the joint kernel of maps F_q^n -> ..."""
    rows = [r for m in mats for r in m]
    basis = nullspace_mod(rows, q, n) if rows else [[int(i == j) for j in range(n)] for i in range(n)]
    if not basis:
        return []
    red, _ = rref_mod(basis, q, n)
    return red


def span_of(vectors: Sequence[Sequence[int]], n: int, q: int) -> list[list[int]]:
    vecs = [list(v) for v in vectors if any(v)]
    if not vecs:
        return []
    red, _ = rref_mod(vecs, q, n)
    return red
