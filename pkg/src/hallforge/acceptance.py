"""Acceptance checks, shared by ``hallforge selftest`` and the test suite.

Each check returns a CheckResult; ``passed`` is an exact comparison, there are
no tolerances anywhere.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import product
from math import prod
from typing import Callable

from .comp import (
    commute_check,
    serre_check,
    serre_support,
    stable_subspace_closed_form,
    stable_subspace_count,
)
from .exactnum import LaurentPoly, RationalFn, vanishing_sum
from .generic import GenericComposition, hall_matching_nu
from .hall import HallAlgebra
from .quiver import A2, B_QUIVER, JORDAN, TWO_LOOP, cartan, dims_up_to, refined_weights_up_to, words_of_weight
from .uq import PositiveHalf

QUIVERS = {"jordan": JORDAN, "two-loop": TWO_LOOP, "A2": A2, "B": B_QUIVER}


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str = ""
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number:2d}: {self.name} ({self.detail}; {self.seconds:.1f}s)"

    def to_dict(self) -> dict:
        return {
            "criterion": self.number,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "failures": [str(f) for f in self.failures[:20]],
        }


class _Tally:
    def __init__(self):
        self.checked = 0
        self.failures: list = []

    def check(self, ok: bool, what):
        self.checked += 1
        if not ok:
            self.failures.append(what)


# -- independent oracles ------------------------------------------------------


def grassmannian_oracle(n: int, k: int, q: int) -> int:
    """#k-subspaces of F_q^n from the ordered-basis count."""
    num = prod(q**n - q**s for s in range(k))
    den = prod(q**k - q**s for s in range(k))
    return num // den


def gl_oracle(l: int, q: int) -> int:
    return prod(q**l - q**s for s in range(l))


def partition_count(n: int) -> int:
    """p(n) by listing nonincreasing sequences."""

    def rec(rem, top):
        if rem == 0:
            return 1
        return sum(rec(rem - k, k) for k in range(1, min(rem, top) + 1))

    return rec(n, n)


# -- criteria -----------------------------------------------------------------


def check_cartan() -> _Tally:
    t = _Tally()
    expected = {
        "jordan": ([[0]], {"i": "isotropic"}),
        "two-loop": ([[-2]], {"i": "imaginary"}),
        "A2": ([[2, -1], [-1, 2]], {"i": "real", "j": "real"}),
        "B": ([[2, -1], [-1, 0]], {"i": "real", "j": "isotropic"}),
    }
    for name, (mat, kinds) in expected.items():
        c = cartan(QUIVERS[name])
        t.check([list(r) for r in c.matrix] == mat, (name, c.matrix))
        for v, k in kinds.items():
            t.check(c.kind(v) == k, (name, v, c.kind(v)))
    return t


def check_counting() -> _Tally:
    t = _Tally()
    for q in (2, 3, 5):
        alg = HallAlgebra(TWO_LOOP, q)
        for l in (1, 2, 3):
            t.check(alg.catalog.E("i", l).aut_count == gl_oracle(l, q), ("aut", q, l))
    for q in (2, 3):
        alg = HallAlgebra(JORDAN, q)
        cat = alg.catalog
        for m, n in product(range(1, 4), repeat=2):
            if m + n > 4:
                continue
            got = alg.hall_number(cat.E("i", m), cat.E("i", n), cat.E("i", m + n))
            t.check(got == grassmannian_oracle(m + n, n, q), ("hall", q, m, n, got))
    return t


def check_coproduct() -> _Tally:
    t = _Tally()
    for quiver in (JORDAN, TWO_LOOP):
        vi = 1 - quiver.loops("i")
        for q in (2, 3):
            alg = HallAlgebra(quiver, q)
            for l in (1, 2, 3):
                lhs = alg.comultiply(alg.e("i", l))
                rhs = None
                for m in range(l + 1):
                    x = alg.e("i", m) if m else alg.one()
                    y = alg.e("i", l - m) if l - m else alg.one()
                    term = alg.tensor(x, y) * alg.v(vi * m * (l - m))
                    rhs = term if rhs is None else rhs + term
                t.check(lhs == rhs, (quiver.vertices, len(quiver.arrows), q, l))
    return t


def _classes_up_to(alg: HallAlgebra, height: int) -> list:
    out = [alg.catalog.unit()]
    for d in dims_up_to(alg.quiver, height):
        out.extend(alg.catalog.enumerate_classes(d))
    return out


def check_bialgebra() -> _Tally:
    t = _Tally()
    for quiver in (A2, JORDAN):
        alg = HallAlgebra(quiver, 2)
        classes = _classes_up_to(alg, 3)
        basis = [alg.basis(c) for c in classes]
        dims = [c.dim.total() for c in classes]
        for a, x in enumerate(basis):
            for b, y in enumerate(basis):
                if dims[a] + dims[b] > 3:
                    continue
                lhs = alg.comultiply(x * y)
                rhs = alg.comultiply(x) * alg.comultiply(y)
                t.check(lhs == rhs, ("delta", classes[a].class_id, classes[b].class_id))
        for a, x in enumerate(basis):
            dx = alg.comultiply(x)
            for b, y in enumerate(basis):
                for c, z in enumerate(basis):
                    if classes[b].dim + classes[c].dim != classes[a].dim:
                        continue
                    lhs = alg.green_pair(x, y * z)
                    rhs = alg.tensor_pair(dx, y, z)
                    t.check(lhs == rhs, ("pair", classes[a].class_id, classes[b].class_id, classes[c].class_id))
    return t


SERRE_CASES = [(A2, "i", "j", 1), (A2, "j", "i", 1), (B_QUIVER, "i", "j", 1), (B_QUIVER, "i", "j", 2)]
COMMUTE_CASES = [(k, l) for k in range(1, 4) for l in range(1, 4) if k + l <= 4]


def check_serre() -> _Tally:
    t = _Tally()
    for q in (2, 3):
        for quiver, i, j, l in SERRE_CASES:
            ok, witness = serre_check(HallAlgebra(quiver, q), i, j, l)
            t.check(ok, ("serre", quiver.vertices, i, j, l, q, witness))
        alg = HallAlgebra(JORDAN, q)
        for k, l in COMMUTE_CASES:
            t.check(commute_check(alg, "i", k, "i", l), ("commute", k, l, q))
    return t


def check_beta_closed_form() -> _Tally:
    t = _Tally()
    for q in (2, 3):
        for quiver, i, j, l in SERRE_CASES:
            alg = HallAlgebra(quiver, q)
            for P, n in serre_support(alg, i, j, l):
                count, m_p, n_p = stable_subspace_count(alg, P, n, i, j)
                closed = stable_subspace_closed_form(q, m_p, n_p, n)
                t.check(closed == count, (quiver.vertices, q, P.class_id, n, count, str(closed)))
    return t


def check_green_theorem(generics: dict) -> _Tally:
    t = _Tally()
    for name in ("jordan", "A2", "B"):
        gen = generics[name]
        held = gen.side(gen.held_out)
        for beta in refined_weights_up_to(gen.quiver, 3, gen.l_max):
            words = words_of_weight(gen.quiver, beta)
            norm = held.norm_product(beta)
            for w in words:
                for w2 in words:
                    p = gen.p_polynomial(w, w2)
                    t.check(p.is_integral(), (name, w, w2, str(p)))
                    t.check(p.evaluate(gen.held_out) * norm == held.s_pair(w, w2), (name, w, w2, "held-out"))
    return t


def _radical_cases():
    a2 = PositiveHalf(A2)
    bq = PositiveHalf(B_QUIVER)
    jd = PositiveHalf(JORDAN)
    return [
        ("jordan", jd, jd.commutator("i", 1, "i", 2)),
        ("A2", a2, a2.serre_element("i", "j", 1)),
        ("A2", a2, a2.serre_element("j", "i", 1)),
        ("B", bq, bq.serre_element("i", "j", 1)),
    ]


def check_radical(generics: dict) -> _Tally:
    t = _Tally()
    for name, uq, element in _radical_cases():
        coeffs = uq.to_s_basis(element)
        t.check(generics[name].radical_test(coeffs), ("accept", name, element))
    for name in ("jordan", "A2", "B"):
        gen = generics[name]
        for beta in refined_weights_up_to(gen.quiver, 3, gen.l_max):
            for w in words_of_weight(gen.quiver, beta):
                t.check(not gen.radical_test({w: RationalFn(1)}), ("reject", name, w))
    return t


def check_norms(generics: dict, order: int = 10) -> _Tally:
    t = _Tally()
    for name in ("jordan", "two-loop"):
        gen = generics[name]
        for l in (1, 2, 3):
            t.check(gen.e_norm(("i", l)) == hall_matching_nu(l), (name, l))
    for l in (1, 2, 3):
        series = generics["two-loop"].e_norm(("i", l)).series_at_infinity(order)
        t.check(series.get(0) == 1 and max(series) == 0, ("leading", l, series))
        t.check(all(c >= 0 and int(c) == c for c in series.values()), ("coefficients", l, series))
        t.check(min(series) <= -order, ("order", l, min(series)))
    return t


def check_phi(generics: dict) -> _Tally:
    t = _Tally()
    for name, quiver in QUIVERS.items():
        uq = PositiveHalf(quiver)
        for beta in refined_weights_up_to(quiver, 3, uq.l_max):
            report = uq.verify_phi(beta, generics[name])
            t.check(report.verdict, (name, beta))
    # negative control: scale one nu value
    nu = {("i", 1): hall_matching_nu(1) * 2}
    bad = PositiveHalf(JORDAN, nu=nu)
    t.check(not bad.verify_phi((("i", 1), ("i", 1)), generics["jordan"]).verdict, "perturbed nu accepted")
    return t


def check_graded_dims() -> _Tally:
    t = _Tally()
    uq = PositiveHalf(JORDAN)
    for n in (1, 2, 3):
        got = uq.graded_dim((n,))
        t.check(got == partition_count(n), (n, got))
    return t


def check_vanishing() -> _Tally:
    t = _Tally()
    for m in range(1, 7):
        for d in range(-m + 1, m):
            if (d - (m - 1)) % 2 == 0:
                t.check(vanishing_sum(m, d) == LaurentPoly(), (m, d))
    return t


def make_generics(primes=None, held_out=None) -> dict:
    kw = {}
    if primes is not None:
        kw["primes"] = tuple(primes)
    if held_out is not None:
        kw["held_out"] = held_out
    return {name: GenericComposition(q, **kw) for name, q in QUIVERS.items()}


CRITERIA: list[tuple[int, str, Callable]] = [
    (1, "Cartan matrix and vertex classes", lambda g: check_cartan()),
    (2, "automorphism and Grassmannian counts", lambda g: check_counting()),
    (3, "coproduct of e_{i,l}", lambda g: check_coproduct()),
    (4, "delta multiplicative, pairing adjoint", lambda g: check_bialgebra()),
    (5, "Serre and commutation relations vanish", lambda g: check_serre()),
    (6, "stable subspace counts match closed form", lambda g: check_beta_closed_form()),
    (7, "pairing polynomials integral and predict held-out prime", check_green_theorem),
    (8, "radical test accepts relations, rejects s-words", check_radical),
    (9, "e-norms match closed form, positive expansion", check_norms),
    (10, "symbolic Gram equals generic Gram", check_phi),
    (11, "graded dimensions are partition numbers", lambda g: check_graded_dims()),
    (12, "q-binomial alternating sums vanish", lambda g: check_vanishing()),
]


def run_criterion(number: int, generics: dict | None = None) -> CheckResult:
    generics = make_generics() if generics is None else generics
    _, name, fn = CRITERIA[number - 1]
    start = time.perf_counter()
    tally = fn(generics)
    res = CheckResult(number, name, not tally.failures and tally.checked > 0, "", tally.failures)
    res.detail = f"{tally.checked - len(tally.failures)}/{tally.checked} checks"
    res.seconds = time.perf_counter() - start
    return res


def run_all(generics: dict | None = None, echo: Callable[[str], None] | None = None) -> list[CheckResult]:
    generics = make_generics() if generics is None else generics
    out = []
    for number, _, _ in CRITERIA:
        res = run_criterion(number, generics)
        if echo:
            echo(res.line())
        out.append(res)
    return out
