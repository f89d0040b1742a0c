"""Exact scalars: Laurent polynomials in v, rational functions, and a + b*sqrt(q).

Everything here is immutable and uses Python integers / Fractions only.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence


class InterpolationError(ValueError):
    pass


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------


class LaurentPoly:
    """Finite sum of c_k v^k, k in Z.

    Coefficients are ints by default; Fractions are allowed (interpolated
    norms can have rational coefficients) and are demoted to int when integral.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, coeffs: Mapping[int, int | Fraction] | None = None):
        items = []
        for k, c in (coeffs or {}).items():
            if c:
                if isinstance(c, Fraction) and c.denominator == 1:
                    c = c.numerator
                items.append((int(k), c))
        items.sort()
        self._terms: tuple = tuple(items)
        self._hash = None

    # construction helpers
    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, k: int, c=1) -> "LaurentPoly":
        return cls({k: c})

    @classmethod
    def coerce(cls, x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")

    @property
    def terms(self) -> tuple:
        return self._terms

    def coeffs(self) -> dict:
        return dict(self._terms)

    def coeff(self, k: int):
        for e, c in self._terms:
            if e == k:
                return c
        return 0

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def min_exp(self) -> int:
        return self._terms[0][0]

    def max_exp(self) -> int:
        return self._terms[-1][0]

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for _, c in self._terms)

    # arithmetic
    def __add__(self, other):
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        d = dict(self._terms)
        for k, c in other._terms:
            d[k] = d.get(k, 0) + c
        return LaurentPoly(d)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self._terms})

    def __sub__(self, other):
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other):
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        d: dict = {}
        for k1, c1 in self._terms:
            for k2, c2 in other._terms:
                d[k1 + k2] = d.get(k1 + k2, 0) + c1 * c2
        return LaurentPoly(d)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._terms) == 1:
                (k, c), = self._terms
                return LaurentPoly({-k * (-n): Fraction(1, 1) / Fraction(c) ** (-n)})
            raise ValueError("negative power of a non-monomial Laurent polynomial")
        out = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by v^k."""
        return LaurentPoly({e + k: c for e, c in self._terms})

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact division; raises ValueError if other does not divide self."""
        other = LaurentPoly.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if self.is_zero():
            return self
        num = _to_poly(self)
        den = _to_poly(other)
        q, r = _poly_divmod(num[1], den[1])
        if any(r):
            raise ValueError("not an exact division")
        return _from_poly(q, num[0] - den[0])

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("LaurentPoly", self._terms))
        return self._hash

    def evaluate(self, q: int) -> "QuadScalar":
        """Value at v = sqrt(q)."""
        a = Fraction(0)
        b = Fraction(0)
        for k, c in self._terms:
            half, odd = divmod(k, 2)
            term = Fraction(c) * Fraction(q) ** half
            if odd:
                b += term
            else:
                a += term
        return QuadScalar(q, a, b)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for k, c in self._terms:
            if k == 0:
                body = str(abs(c))
            else:
                mono = "v" if k == 1 else f"v^{k}"
                body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"LaurentPoly({self})"


def _to_poly(p: LaurentPoly) -> tuple[int, list]:
    """(min exponent, coefficient list low->high)."""
    lo = p.min_exp()
    hi = p.max_exp()
    out = [0] * (hi - lo + 1)
    for k, c in p.terms:
        out[k - lo] = c
    return lo, out


def _from_poly(coeffs: Sequence, shift: int) -> LaurentPoly:
    return LaurentPoly({i + shift: c for i, c in enumerate(coeffs) if c})


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: list, b: list) -> tuple[list, list]:
    """Division of polynomials with Fraction arithmetic (low->high lists)."""
    a = [Fraction(c) for c in a]
    b = _trim([Fraction(c) for c in b])
    if not b:
        raise ZeroDivisionError
    if len(a) < len(b):
        return [0], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, bc in enumerate(b):
                a[i + j] -= c * bc
    return q, _trim(a[: len(b) - 1])


def _content(p: list) -> int:
    g = 0
    for c in p:
        g = gcd(g, c)
    return g


def _primitive(p: list) -> list:
    c = _content(p)
    if c == 0:
        return p
    if p[-1] < 0:
        c = -c
    return [x // c for x in p]


def _int_poly(p: list) -> list:
    """Scale a Fraction polynomial to a primitive integer polynomial."""
    den = 1
    for c in p:
        c = Fraction(c)
        den = den * c.denominator // gcd(den, c.denominator)
    return _primitive(_trim([int(Fraction(c) * den) for c in p]))


def _poly_gcd(a: list, b: list) -> list:
    """Primitive gcd of two integer polynomials (positive leading coefficient)."""
    a = _primitive(_trim(list(a)))
    b = _primitive(_trim(list(b)))
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, (_int_poly(r) if r else [])
    return a


def _poly_exact_div_int(a: list, b: list) -> list:
    q, r = _poly_divmod(a, b)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return [int(c) if Fraction(c).denominator == 1 else Fraction(c) for c in q]


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------


class RationalFn:
    """num/den with Laurent numerator and polynomial denominator in lowest terms.

    The denominator has minimal exponent 0, integer coefficients with content 1
    and a positive leading coefficient; all v-power and scalar factors live in
    the numerator.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=1, *, _normalized=False):
        num = LaurentPoly.coerce(num)
        den = LaurentPoly.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _normalized:
            num, den = _normalize(num, den)
        self.num: LaurentPoly = num
        self.den: LaurentPoly = den
        self._hash = None

    @classmethod
    def coerce(cls, x) -> "RationalFn":
        if isinstance(x, RationalFn):
            return x
        return cls(x)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den == LaurentPoly.const(1)

    def as_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise ValueError(f"{self} is not a Laurent polynomial")
        return self.num

    def __add__(self, other):
        try:
            other = RationalFn.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == other.den:
            return RationalFn(self.num + other.num, self.den)
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        try:
            other = RationalFn.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return RationalFn.coerce(other) - self

    def __mul__(self, other):
        try:
            other = RationalFn.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RationalFn(0)
        return RationalFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = RationalFn.coerce(other)
        except TypeError:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFn(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RationalFn.coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFn(1) / (self ** (-n))
        return RationalFn(self.num ** n, self.den ** n)

    def __eq__(self, other):
        try:
            other = RationalFn.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("RationalFn", self.num, self.den))
        return self._hash

    def evaluate(self, q: int) -> "QuadScalar":
        return self.num.evaluate(q) / self.den.evaluate(q)

    def series_at_infinity(self, order: int) -> dict:
        """Expansion in v^{-1}: {exponent: coeff} for exponents >= -order."""
        n = self.num
        d = self.den
        if n.is_zero():
            return {}
        dtop = d.max_exp()
        dlead = Fraction(d.coeff(dtop))
        # normalize d = dlead v^dtop (1 + sum_{k>0} r_k v^{-k})
        r = {dtop - k: Fraction(c) / dlead for k, c in d.terms if k != dtop}
        top = n.max_exp() - dtop
        # inverse series of (1 + sum r_k v^{-k}) up to needed depth
        depth = top + order
        inv = [Fraction(1)] + [Fraction(0)] * max(depth, 0)
        for m in range(1, depth + 1):
            inv[m] = -sum(r.get(k, 0) * inv[m - k] for k in range(1, m + 1))
        out: dict = {}
        for k, c in n.terms:
            base = k - dtop
            for m, ic in enumerate(inv):
                e = base - m
                if e < -order:
                    break
                if ic:
                    out[e] = out.get(e, 0) + Fraction(c) / dlead * ic
        return {e: c for e, c in sorted(out.items(), reverse=True) if c}

    def __str__(self):
        if self.is_laurent():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFn({self})"


def _normalize(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    if num.is_zero():
        return num, LaurentPoly.const(1)
    nlo, np_ = _to_poly(num)
    dlo, dp = _to_poly(den)
    # clear fractions
    scale = Fraction(1)
    if not all(isinstance(c, int) for c in np_ + dp):
        nd = 1
        for c in np_:
            c = Fraction(c)
            nd = nd * c.denominator // gcd(nd, c.denominator)
        dd = 1
        for c in dp:
            c = Fraction(c)
            dd = dd * c.denominator // gcd(dd, c.denominator)
        np_ = [int(Fraction(c) * nd) for c in np_]
        dp = [int(Fraction(c) * dd) for c in dp]
        scale = Fraction(dd, nd)
    shift = nlo - dlo
    if len(dp) > 1:
        g = _poly_gcd(np_, dp)
        if len(g) > 1:
            np_ = _poly_exact_div_int(np_, g)
            dp = _poly_exact_div_int(dp, g)
    cd = _content(dp)
    if dp[-1] < 0:
        cd = -cd
    dp = [c // cd for c in dp]
    scale /= cd
    new_num = _from_poly([Fraction(c) * scale for c in np_], shift)
    return new_num, _from_poly(dp, 0)


# ---------------------------------------------------------------------------
# a + b sqrt(q)
# ---------------------------------------------------------------------------


class QuadScalar:
    """a + b*sqrt(q) with rational a, b; the scalar field of one Hall algebra."""

    __slots__ = ("q", "a", "b")

    def __init__(self, q: int, a=0, b=0):
        self.q = q
        self.a = _as_fraction(a)
        self.b = _as_fraction(b)

    @classmethod
    def v_power(cls, q: int, k: int) -> "QuadScalar":
        half, odd = divmod(k, 2)
        c = Fraction(q) ** half
        return cls(q, 0, c) if odd else cls(q, c, 0)

    def _lift(self, other) -> "QuadScalar":
        if isinstance(other, QuadScalar):
            if other.q != self.q:
                raise ValueError(f"mixing scalars over q={self.q} and q={other.q}")
            return other
        return QuadScalar(self.q, _as_fraction(other), 0)

    def __add__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return QuadScalar(self.q, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadScalar(self.q, -self.a, -self.b)

    def __sub__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return QuadScalar(self.q, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return QuadScalar(self.q, self.a * o.a + self.b * o.b * self.q, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def inverse(self) -> "QuadScalar":
        n = self.a * self.a - self.q * self.b * self.b
        if n == 0:
            raise ZeroDivisionError("zero QuadScalar")
        return QuadScalar(self.q, self.a / n, -self.b / n)

    def __truediv__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = QuadScalar(self.q, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if not isinstance(other, QuadScalar):
            return NotImplemented
        return self.q == other.q and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.q, self.a, self.b))

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        root = f"sqrt({self.q})"
        if self.b == 1:
            irr = root
        elif self.b == -1:
            irr = f"-{root}"
        else:
            irr = f"{self.b}*{root}"
        if self.a == 0:
            return irr
        if irr.startswith("-"):
            return f"{self.a} - {irr[1:]}"
        return f"{self.a} + {irr}"

    def __repr__(self):
        return f"QuadScalar({self})"


# ---------------------------------------------------------------------------
# quantum numbers
# ---------------------------------------------------------------------------

V = LaurentPoly.monomial(1)


def quantum_integer(n: int) -> LaurentPoly:
    """[n] = (v^n - v^-n)/(v - v^-1) = v^{n-1} + v^{n-3} + ... + v^{1-n}."""
    if n < 0:
        raise ValueError("quantum_integer needs n >= 0")
    return LaurentPoly({n - 1 - 2 * k: 1 for k in range(n)})


def quantum_factorial(n: int) -> LaurentPoly:
    out = LaurentPoly.const(1)
    for k in range(1, n + 1):
        out = out * quantum_integer(k)
    return out


def gauss_binomial(m: int, k: int) -> LaurentPoly:
    """Balanced q-binomial [m choose k]."""
    if k < 0 or k > m:
        raise ValueError(f"gauss_binomial needs 0 <= k <= m, got m={m}, k={k}")
    return quantum_factorial(m).exact_div(quantum_factorial(k) * quantum_factorial(m - k))


def vanishing_sum(m: int, d: int) -> LaurentPoly:
    """sum_{k=0}^m (-1)^k v^{dk} [m choose k]."""
    if m < 0:
        raise ValueError("vanishing_sum needs m >= 0")
    out = LaurentPoly()
    for k in range(m + 1):
        out = out + gauss_binomial(m, k).shift(d * k) * (-1) ** k
    return out


def gl_order_poly(l: int) -> LaurentPoly:
    """#GL_l(F_q) as a polynomial in v (q = v^2)."""
    out = LaurentPoly.const(1)
    for s in range(l):
        out = out * (LaurentPoly.monomial(2 * l) - LaurentPoly.monomial(2 * s))
    return out


# ---------------------------------------------------------------------------
# interpolation across primes
# ---------------------------------------------------------------------------


def solve_rational(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Solve a square-or-tall system exactly; None if inconsistent or underdetermined."""
    from .linalg import solve

    try:
        return solve(matrix, rhs)
    except ValueError:
        return None


def interpolate_laurent(
    samples: Iterable[tuple[int, QuadScalar]],
    degree_bound: int,
    *,
    center: int = 0,
    integral: bool = True,
) -> LaurentPoly:
    """Laurent polynomial P with exponents in [center-bound, center+bound] and P(sqrt q) = sample.

    Even exponents are fitted against the rational part of each sample, odd
    exponents against the sqrt(q) part, each by an exact Vandermonde solve in q.
    """
    samples = list(samples)
    primes = [q for q, _ in samples]
    if len(set(primes)) != len(primes):
        raise ValueError("interpolation primes must be distinct")
    lo, hi = center - degree_bound, center + degree_bound
    result: dict = {}
    for parity in (0, 1):
        exps = [e for e in range(lo, hi + 1) if e % 2 == parity]
        if not exps:
            continue
        if len(samples) < len(exps):
            raise InterpolationError(
                f"need {len(exps)} samples for parity {parity}, have {len(samples)}"
            )
        rows = []
        rhs = []
        for q, val in samples:
            if val.q != q:
                raise ValueError("sample scalar does not match its prime")
            rows.append([Fraction(q) ** ((e - parity) // 2) for e in exps])
            rhs.append(val.b if parity else val.a)
        sol = solve_rational(rows, rhs)
        if sol is None:
            raise InterpolationError("inconsistent samples")
        for e, c in zip(exps, sol):
            if c:
                if integral and c.denominator != 1:
                    raise InterpolationError("non-integer coefficients")
                result[e] = c
    return LaurentPoly(result)
