"""Command-line interface.

Exit codes: 0 success, 1 budget / interpolation failure or a failed
verification, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import acceptance
from .cache import HallCache, default_cache_dir
from .comp import (
    commute_check,
    orthogonalize_s,
    serre_check,
    serre_length,
)
from .exactnum import InterpolationError
from .generic import DEFAULT_HELD_OUT, DEFAULT_PRIMES, GenericComposition
from .hall import HallAlgebra, HallElement
from .linalg import rank
from .quiver import Quiver, cartan, generator_index_set, refined_weight, refined_weights_up_to
from .repmod import DEFAULT_BUDGET, BudgetExceeded, is_prime
from .uq import PositiveHalf


class BadInput(ValueError):
    pass


@dataclass
class Config:
    quiver_path: str | None = None
    primes: tuple = DEFAULT_PRIMES
    held_out: int = DEFAULT_HELD_OUT
    height: int = 3
    l_max: int = 3
    budget: int = DEFAULT_BUDGET
    cache_dir: Path | None = None
    output: str = "json"

    def validate(self):
        if len(set(self.primes)) != len(self.primes):
            raise BadInput("primes must be distinct")
        for p in (*self.primes, self.held_out):
            if not is_prime(p):
                raise BadInput(f"{p} is not prime")
        if self.held_out in self.primes:
            raise BadInput("held-out prime must not be in the prime list")
        if self.height < 1 or self.l_max < 1 or self.budget < 1:
            raise BadInput("budgets must be positive")
        if self.output not in ("json", "table"):
            raise BadInput("output format is json or table")


# -- parsing helpers ------------------------------------------------------------


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise BadInput(f"expected comma-separated integers, got {text!r}") from exc


def parse_word(quiver: Quiver, text: str) -> tuple:
    """'i:1,i:2' -> (('i', 1), ('i', 2))."""
    letters = generator_index_set(quiver, 99)
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        vertex, sep, level = tok.rpartition(":")
        if not sep:
            raise BadInput(f"letter {tok!r} should look like vertex:level")
        try:
            letter = (vertex, int(level))
        except ValueError as exc:
            raise BadInput(f"bad level in {tok!r}") from exc
        if letter not in letters:
            raise BadInput(f"{tok!r} is not a generator of this quiver")
        out.append(letter)
    return tuple(out)


def parse_element(alg: HallAlgebra, text: str) -> HallElement:
    """Product of space-separated factors: 'E:i:2', 'e:i:1' or a class id 'd1,d2#code'."""
    out = alg.one()
    for tok in text.split():
        if tok.startswith(("E:", "e:")):
            kind, _, rest = tok.partition(":")
            vertex, _, level = rest.rpartition(":")
            if vertex not in alg.quiver.vertices:
                raise BadInput(f"unknown vertex in {tok!r}")
            try:
                lv = int(level)
            except ValueError as exc:
                raise BadInput(f"bad level in {tok!r}") from exc
            if lv < 1:
                raise BadInput(f"level must be positive in {tok!r}")
            factor = alg.E(vertex, lv) if kind == "E" else alg.e(vertex, lv)
        elif "#" in tok:
            dims, _, code = tok.partition("#")
            d = _int_list(dims)
            if len(d) != len(alg.quiver.vertices) or any(x < 0 for x in d):
                raise BadInput(f"class id {tok!r} has a bad dimension vector")
            space = alg.catalog.space(d)
            if not code.isdigit() or int(code) >= alg.q**space.n:
                raise BadInput(f"class id {tok!r} has a bad code")
            factor = alg.basis(alg.catalog.get(tok))
        else:
            raise BadInput(f"cannot parse element factor {tok!r}")
        out = out * factor
    return out


# -- report rendering ---------------------------------------------------------------


def _cell(x) -> str:
    if isinstance(x, (list, tuple)):
        if x and isinstance(x[0], (list, tuple)):
            return " ".join("[" + _cell(y) + "]" for y in x)
        return " ".join(_cell(y) for y in x)
    if isinstance(x, dict):
        return "; ".join(f"{k}={_cell(v)}" for k, v in x.items())
    return str(x)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2)
    lines = []
    rows = report.get("rows")
    for k, v in report.items():
        if k != "rows":
            lines.append(f"{k}: {_cell(v)}")
    if rows:
        cols = list(rows[0])
        table = [[_cell(r.get(c, "")) for c in cols] for r in rows]
        widths = [max(len(c), *(len(t[k]) for t in table)) for k, c in enumerate(cols)]
        lines.append("  ".join(c.ljust(w) for c, w in zip(cols, widths)))
        for t in table:
            lines.append("  ".join(x.ljust(w) for x, w in zip(t, widths)))
    return "\n".join(lines)


# -- commands ---------------------------------------------------------------------


class Context:
    def __init__(self, cfg: Config, args):
        self.cfg = cfg
        self.args = args
        self._quiver = None

    @property
    def quiver(self) -> Quiver:
        if self._quiver is None:
            path = self.cfg.quiver_path
            try:
                self._quiver = Quiver.load(path)
            except FileNotFoundError as exc:
                raise BadInput(f"quiver file not found: {path}") from exc
            except (ValueError, TypeError, KeyError) as exc:
                raise BadInput(f"invalid quiver JSON in {path}: {exc}") from exc
            if not self._quiver.vertices:
                raise BadInput("quiver has no vertices")
        return self._quiver

    def hall(self) -> HallAlgebra:
        q = self.args.q
        if not is_prime(q):
            raise BadInput(f"q={q} is not prime")
        cache = None
        if self.cfg.cache_dir is not None:
            cache = HallCache(self.cfg.cache_dir, self.quiver, q, self.cfg.budget)
        return HallAlgebra(self.quiver, q, self.cfg.budget, cache=cache)

    def generic(self) -> GenericComposition:
        return GenericComposition(self.quiver, self.cfg.primes, self.cfg.held_out, self.cfg.l_max)

    def positive_half(self) -> PositiveHalf:
        return PositiveHalf(self.quiver, l_max=self.cfg.l_max)

    def betas(self) -> list:
        if self.args.beta:
            return [refined_weight(parse_word(self.quiver, self.args.beta))]
        return refined_weights_up_to(self.quiver, self.cfg.height, self.cfg.l_max)


def _word_str(w) -> str:
    return ",".join(f"{i}:{l}" for i, l in w)


def cmd_cartan(ctx: Context) -> tuple[dict, int]:
    c = cartan(ctx.quiver)
    rep = c.to_dict()
    rep["rows"] = [{"vertex": v, "a_ii": c.entry(v, v), "class": c.kind(v), "loops": ctx.quiver.loops(v)} for v in c.vertices]
    return rep, 0


def cmd_classify(ctx: Context) -> tuple[dict, int]:
    alg = ctx.hall()
    d = _int_list(ctx.args.dim)
    if len(d) != len(ctx.quiver.vertices) or any(x < 0 for x in d):
        raise BadInput("dimension vector must have one nonnegative entry per vertex")
    classes = alg.catalog.enumerate_classes(d)
    rows = [
        {"class": c.class_id, "aut": c.aut_count, "maps": [[list(r) for r in c.rep.mat(k)] for k in range(len(ctx.quiver.arrows))]}
        for c in classes
    ]
    return {"q": alg.q, "dim": list(d), "count": len(classes), "rows": rows}, 0


def cmd_mult(ctx: Context) -> tuple[dict, int]:
    alg = ctx.hall()
    x, y = parse_element(alg, ctx.args.x), parse_element(alg, ctx.args.y)
    return {"q": alg.q, "x": x.to_dict(), "y": y.to_dict(), "product": (x * y).to_dict()}, 0


def cmd_delta(ctx: Context) -> tuple[dict, int]:
    alg = ctx.hall()
    x = parse_element(alg, ctx.args.x)
    return {"q": alg.q, "x": x.to_dict(), "delta": alg.comultiply(x).to_dict()}, 0


def cmd_pair(ctx: Context) -> tuple[dict, int]:
    alg = ctx.hall()
    x, y = parse_element(alg, ctx.args.x), parse_element(alg, ctx.args.y)
    return {"q": alg.q, "pairing": str(alg.green_pair(x, y))}, 0


def _serre_instances(quiver: Quiver, l_max: int, height: int):
    c = cartan(quiver)
    for i in c.real:
        for j, l in generator_index_set(quiver, l_max):
            if (j, l) == (i, 1):
                continue
            n_total = 1 - l * c.entry(i, j)
            if n_total + l <= height:
                yield i, j, l


def _commute_instances(quiver: Quiver, l_max: int, height: int):
    c = cartan(quiver)
    letters = generator_index_set(quiver, l_max)
    for a, (i, k) in enumerate(letters):
        for j, l in letters[a + 1 :]:
            if c.entry(i, j) == 0 and k + l <= height:
                yield i, k, j, l


def cmd_serre(ctx: Context) -> tuple[dict, int]:
    alg = ctx.hall()
    rows = []
    for i, j, l in _serre_instances(ctx.quiver, ctx.cfg.l_max, ctx.cfg.height):
        ok, witness = serre_check(alg, i, j, l)
        rows.append({"i": i, "j": j, "l": l, "N": serre_length(alg, i, j, l), "value": "0" if ok else witness.to_dict()})
    ok = all(r["value"] == "0" for r in rows)
    return {"q": alg.q, "all_zero": ok, "rows": rows}, 0 if ok else 1


def cmd_commute(ctx: Context) -> tuple[dict, int]:
    alg = ctx.hall()
    rows = []
    for i, k, j, l in _commute_instances(ctx.quiver, ctx.cfg.l_max, ctx.cfg.height):
        ok = commute_check(alg, i, k, j, l)
        rows.append({"left": f"{i}:{k}", "right": f"{j}:{l}", "value": "0" if ok else "nonzero"})
    ok = all(r["value"] == "0" for r in rows)
    return {"q": alg.q, "all_zero": ok, "rows": rows}, 0 if ok else 1


def cmd_s_gen(ctx: Context) -> tuple[dict, int]:
    rows = []
    if ctx.args.q is not None:
        alg = ctx.hall()
        for i, l in generator_index_set(ctx.quiver, ctx.cfg.l_max):
            s = orthogonalize_s(alg, i, l)
            lower = {"+".join(map(str, w)): str(c) for w, c in s.lower}
            rows.append({"generator": f"{i}:{l}", "lower_coefficients": lower, "element": s.element.to_dict()})
        return {"q": alg.q, "rows": rows}, 0
    uq = ctx.positive_half()
    for i, l in generator_index_set(ctx.quiver, ctx.cfg.l_max):
        s = uq.s_sym(i, l)
        rows.append({"generator": f"{i}:{l}", "element": {_word_str(w): str(c) for w, c in s.coeffs.items()}})
    return {"field": "Q(v)", "rows": rows}, 0


def cmd_p_poly(ctx: Context) -> tuple[dict, int]:
    gen = ctx.generic()
    w, w2 = parse_word(ctx.quiver, ctx.args.w), parse_word(ctx.quiver, ctx.args.w2)
    p = gen.p_polynomial(w, w2)
    return {"w": _word_str(w), "w2": _word_str(w2), "P": str(p), "primes": list(gen.primes), "verified_prime": gen.held_out}, 0


def cmd_radical(ctx: Context) -> tuple[dict, int]:
    uq = ctx.positive_half()
    gen = ctx.generic()
    a = ctx.args
    try:
        if a.serre:
            i, j, l = a.serre.split(",")
            element, label = uq.serre_element(i, j, int(l)), f"serre {a.serre}"
        elif a.commute:
            i, k, j, l = a.commute.split(",")
            element, label = uq.commutator(i, int(k), j, int(l)), f"commute {a.commute}"
        elif a.word:
            w = parse_word(ctx.quiver, a.word)
            element, label = None, f"s-word {a.word}"
        else:
            raise BadInput("radical needs one of --serre, --commute, --word")
    except (KeyError, ValueError) as exc:
        raise BadInput(f"bad relation parameters: {exc}") from exc
    if element is None:
        coeffs = {w: 1}
        symbolic = uq.in_radical(uq.s_word(w))
    else:
        coeffs = uq.to_s_basis(element)
        symbolic = uq.in_radical(element)
    verdict = gen.radical_test(coeffs)
    report = {
        "element": label,
        "s_basis": {_word_str(w): str(c) for w, c in coeffs.items()},
        "generic_radical": verdict,
        "symbolic_radical": symbolic,
    }
    return report, 0


def cmd_gram(ctx: Context) -> tuple[dict, int]:
    uq = ctx.positive_half()
    blocks = []
    for beta in ctx.betas():
        words, mat = uq.gram_block_sym(beta)
        blocks.append(
            {
                "beta": _word_str(beta),
                "words": [_word_str(w) for w in words],
                "gram": [[str(x) for x in row] for row in mat],
                "rank": rank(mat),
            }
        )
    return {"blocks": blocks}, 0


def cmd_gram_generic(ctx: Context) -> tuple[dict, int]:
    gen = ctx.generic()
    blocks = []
    for beta in ctx.betas():
        g = gen.generic_gram(beta)
        blocks.append(
            {
                "beta": _word_str(beta),
                "words": [_word_str(w) for w in g.words],
                "P_matrix": [[str(p) for p in row] for row in g.p_matrix],
                "gram": [[str(x) for x in row] for row in g.matrix],
                "norms": {f"{i}:{l}": str(n) for (i, l), n in g.norms.items()},
                "verified_prime": g.verified_prime,
            }
        )
    return {"primes": list(gen.primes), "blocks": blocks}, 0


def cmd_verify_phi(ctx: Context) -> tuple[dict, int]:
    uq = ctx.positive_half()
    gen = ctx.generic()
    rows = []
    for beta in ctx.betas():
        r = uq.verify_phi(beta, gen)
        rows.append({"beta": _word_str(beta), "size": len(r.words), "rank": r.rank, "verify_phi": r.verdict})
    ok = all(r["verify_phi"] for r in rows)
    return {"overall": "pass" if ok else "fail", "primes": list(gen.primes), "held_out": gen.held_out, "rows": rows}, 0 if ok else 1


def cmd_selftest(ctx: Context) -> tuple[dict, int]:
    echo = (lambda s: print(s, file=sys.stderr)) if ctx.cfg.output == "json" else None
    results = acceptance.run_all(echo=echo)
    ok = all(r.passed for r in results)
    rows = [{"criterion": r.number, "name": r.name, "result": "PASS" if r.passed else "FAIL", "detail": r.detail} for r in results]
    return {"overall": "pass" if ok else "fail", "rows": rows}, 0 if ok else 1


COMMANDS = {
    "cartan": (cmd_cartan, "Borcherds-Cartan matrix and vertex classes"),
    "classify": (cmd_classify, "isomorphism classes at a dimension vector"),
    "mult": (cmd_mult, "Hall product of two elements"),
    "delta": (cmd_delta, "Hall coproduct of an element"),
    "pair": (cmd_pair, "Green pairing of two elements"),
    "serre": (cmd_serre, "quantum Serre relations over F_q"),
    "commute": (cmd_commute, "commutation relations for a_ij = 0 over F_q"),
    "s-gen": (cmd_s_gen, "primitive generators s_{il}"),
    "p-poly": (cmd_p_poly, "interpolated pairing polynomial of two s-words"),
    "radical": (cmd_radical, "radical membership of a relation or word"),
    "gram": (cmd_gram, "symbolic Gram blocks"),
    "gram-generic": (cmd_gram_generic, "interpolated Hall Gram blocks"),
    "verify-phi": (cmd_verify_phi, "compare symbolic and generic Gram blocks"),
    "selftest": (cmd_selftest, "run the acceptance suite"),
}

NEEDS_Q = {"classify", "mult", "delta", "pair", "serre", "commute"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--primes", default=",".join(map(str, DEFAULT_PRIMES)), help="interpolation primes")
    common.add_argument("--held-out", type=int, default=DEFAULT_HELD_OUT)
    common.add_argument("--ht", type=int, default=3, help="coarse dimension budget")
    common.add_argument("--l-max", type=int, default=3)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="enumeration budget")
    common.add_argument("--cache-dir", default=None, help="Hall number cache (default $HALLFORGE_CACHE_DIR)")
    common.add_argument("--format", dest="output", choices=("json", "table"), default="json")
    common.add_argument("--q", type=int, default=None, help="prime field size")

    parser = argparse.ArgumentParser(prog="hallforge", description="Hall algebras of quivers with loops")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name != "selftest":
            p.add_argument("quiver", help="quiver JSON file")
        if name == "classify":
            p.add_argument("--dim", required=True, help="dimension vector, e.g. 1,2")
        if name in ("mult", "pair"):
            p.add_argument("x")
            p.add_argument("y")
        if name == "delta":
            p.add_argument("x")
        if name == "p-poly":
            p.add_argument("w")
            p.add_argument("w2")
        if name in ("gram", "gram-generic", "verify-phi"):
            p.add_argument("--beta", default=None, help="refined weight as a word, e.g. i:1,i:1")
        if name == "radical":
            g = p.add_mutually_exclusive_group(required=True)
            g.add_argument("--serre", help="i,j,l")
            g.add_argument("--commute", help="i,k,j,l")
            g.add_argument("--word", help="single s-word, e.g. i:1,i:2")
    return parser


def make_config(args) -> Config:
    cache_dir = Path(args.cache_dir) if args.cache_dir else default_cache_dir()
    cfg = Config(
        quiver_path=getattr(args, "quiver", None),
        primes=_int_list(args.primes),
        held_out=args.held_out,
        height=args.ht,
        l_max=args.l_max,
        budget=args.budget,
        cache_dir=cache_dir,
        output=args.output,
    )
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        cfg = make_config(args)
        if args.command in NEEDS_Q and args.q is None:
            raise BadInput(f"{args.command} needs --q")
        report, code = COMMANDS[args.command][0](Context(cfg, args))
    except BadInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (BudgetExceeded, InterpolationError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(render(report, cfg.output))
    return code


if __name__ == "__main__":
    sys.exit(main())
