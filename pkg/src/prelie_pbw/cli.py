"""Command-line front end.

Exit codes: 0 when every check passes (or a computation succeeds), 1 when a
verification fails, 2 for usage and parse errors.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from . import suite
from .envelope import T, CapExceeded, GhatAlgebra, build_phi, pbw_action_failures, verify_phi
from .expr import ExpressionSyntaxError, UnknownLabel, format_forest, format_lincomb, parse_expression
from .freemod import LinComb
from .hopf import SymAlgebra, ck_forest_product
from .identities import (
    NotFound,
    PrimeTooLarge,
    cohn_counterexample,
    lambda_p,
    verify_adid,
    verify_touid,
    verify_zassenhaus,
    zassenhaus_oracle,
)
from .prelie import (
    FreePreLie,
    LieAlgebra,
    StructurePreLie,
    Tree,
    dual_numbers,
    graft,
    nilpotent_square,
    non_prelie_control,
    truncated_free_prelie,
    upper_triangular_2x2,
    zero_algebra,
)
from .report import CheckResult, Report, timed
from .scalars import RingSpec, UnsupportedRing
from .twisted import check_pltwlie_equivalence, check_word_poisson, suspended_twisted, verify_twisted_coproduct, verify_twisted_star

SCHEMA = "report_v1"
DEFAULT_CAP = {"star": 4, "phi": 4, "pbw-check": 4, "ghat-star": 4, "circ-ext": 4, "coproduct": 4,
               "twisted-check": 3, "twisted-star": 3, "suspend": 2}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# algebras
# ---------------------------------------------------------------------------

BUILTIN = {
    "nilpotent_square": nilpotent_square,
    "dual_numbers": dual_numbers,
    "upper_triangular": upper_triangular_2x2,
}


def load_algebra(source: str, ring: RingSpec) -> StructurePreLie:
    """A built-in name (``nilpotent_square``, ``zero:N``, ``truncated_free:N``, ``control``) or a JSON file."""
    name, _, arg = source.partition(":")
    if name in BUILTIN:
        return BUILTIN[name](ring)
    if name == "zero":
        return zero_algebra(ring, int(arg or 2))
    if name == "truncated_free":
        return truncated_free_prelie(ring, int(arg or 3))
    if name == "control":
        return non_prelie_control()
    path = Path(source)
    if not path.is_file():
        raise UsageError(f"no built-in algebra or file named {source!r}")
    try:
        data = json.loads(path.read_text())
        return StructurePreLie.from_json(data, checked=False)
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise UsageError(f"cannot read algebra from {source}: {exc}") from exc


def _names_to_indices(e: LinComb, A: StructurePreLie) -> LinComb:
    index = {n: i for i, n in enumerate(A.names)}

    def conv(forest: tuple) -> tuple:
        out = []
        for t in forest:
            if t.children:
                raise UsageError(f"{t} is not a basis element of the algebra")
            out.append(index[t.label])
        return tuple(out)

    return e.map_keys(conv)


def _index_text(A: StructurePreLie) -> Callable[[tuple], str]:
    return lambda m: " · ".join(A.names[i] for i in m)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def jsonable(obj: Any) -> Any:
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if obj is T:
        return "t"
    if isinstance(obj, Tree):
        return str(obj)
    if isinstance(obj, LinComb):
        return {"ring": str(obj.ring),
                "terms": [{"coeff": obj.ring.format(c), "key": jsonable(k)} for k, c in obj.sorted_items()]}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    return str(obj)


def emit(args: argparse.Namespace, rep: Report, result: str | None = None, extra: dict | None = None) -> int:
    if args.format == "json":
        checks = []
        for c in sorted(rep.checks, key=lambda c: c.name):
            entry = {"name": c.name, "status": "pass" if c.passed else "fail",
                     "detail": c.detail, "counterexample": jsonable(c.counterexample)}
            if args.timings:
                entry["runtime"] = round(c.runtime, 4)
            checks.append(entry)
        doc = {"schema": SCHEMA, "command": args.command, "seed": args.seed,
               "passed": rep.passed, "checks": checks}
        if result is not None:
            doc["result"] = result
        if extra:
            doc.update(jsonable(extra))
        print(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        if result is not None:
            print(result)
        if rep.checks:
            print(f"seed: {args.seed}")
            for c in sorted(rep.checks, key=lambda c: c.name):
                status = "PASS" if c.passed else "FAIL"
                timing = f" ({c.runtime:.2f}s)" if args.timings else ""
                detail = f" -- {c.detail}" if c.detail else ""
                print(f"[{status}] {c.name}{timing}{detail}")
                if not c.passed and c.counterexample is not None:
                    print(f"    counterexample: {c.counterexample!r}")
            print(f"result: {'PASS' if rep.passed else 'FAIL'} ({len(rep.checks)} checks)")
    return 0 if rep.passed else 1


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _check_cap(weights: Sequence[int], cap: int) -> None:
    if sum(weights) > cap:
        raise UsageError(f"input weight {sum(weights)} exceeds --cap {cap}")


def _forest_weight(e: LinComb) -> int:
    return max((sum(t.size for t in k) for k in e), default=0)


def _algebra_or_none(args: argparse.Namespace) -> StructurePreLie | None:
    return load_algebra(args.algebra, args.ring) if args.algebra else None


def cmd_graft(args: argparse.Namespace) -> int:
    a, b = (parse_expression(s, args.ring) for s in (args.left, args.right))
    for e in (a, b):
        if any(len(k) != 1 for k in e):
            raise UsageError("graft takes combinations of single trees")
    out = LinComb.zero(args.ring)
    for ka, ca in a.items():
        for kb, cb in b.items():
            g = graft(ka[0], kb[0], args.ring).map_keys(lambda t: (t,))
            out = out + g.scale(args.ring.mul(ca, cb))
    return emit(args, Report(), format_lincomb(out, format_forest))


def _sym_setup(args: argparse.Namespace, *sources: str) -> tuple[SymAlgebra, list[LinComb], Callable]:
    A = _algebra_or_none(args)
    if A is None:
        elems = [parse_expression(s, args.ring) for s in sources]
        labels = sorted({lab for e in elems for k in e for t in k for lab in t.labels()}) or ["x"]
        _check_cap([_forest_weight(e) for e in elems], args.cap)
        return SymAlgebra(FreePreLie(args.ring, labels)), elems, format_forest
    if A.ring != args.ring:
        raise UsageError(f"algebra is over {A.ring}, but --ring is {args.ring}")
    elems = [_names_to_indices(parse_expression(s, args.ring, A.names), A) for s in sources]
    _check_cap([max((len(k) for k in e), default=0) for e in elems], args.cap)
    return SymAlgebra(A), elems, _index_text(A)


def cmd_star(args: argparse.Namespace) -> int:
    S, (a, b), text = _sym_setup(args, args.left, args.right)
    return emit(args, Report(), format_lincomb(S.star(a, b), text))


def cmd_circ_ext(args: argparse.Namespace) -> int:
    S, (a, b), text = _sym_setup(args, args.left, args.right)
    return emit(args, Report(), format_lincomb(S.circ_ext(a, b), text))


def cmd_coproduct(args: argparse.Namespace) -> int:
    S, (a,), text = _sym_setup(args, args.expr)
    pair = lambda k: f"{text(k[0]) or '1'} ⊗ {text(k[1]) or '1'}"  # noqa: E731
    return emit(args, Report(), format_lincomb(S.coproduct(a), pair))


def cmd_ck_star(args: argparse.Namespace) -> int:
    a, b = (parse_expression(s, args.ring) for s in (args.left, args.right))
    out = LinComb.zero(args.ring)
    for ka, ca in a.items():
        for kb, cb in b.items():
            out = out + ck_forest_product(ka, kb, args.ring).scale(args.ring.mul(ca, cb))
    return emit(args, Report(), format_lincomb(out, format_forest))


def _require_algebra(args: argparse.Namespace) -> StructurePreLie:
    A = load_algebra(args.algebra or "nilpotent_square", args.ring)
    if A.ring != args.ring:
        raise UsageError(f"algebra is over {A.ring}, but --ring is {args.ring}")
    return A


def cmd_phi(args: argparse.Namespace) -> int:
    A = _require_algebra(args)
    a = _names_to_indices(parse_expression(args.expr, args.ring, A.names), A)
    _check_cap([max((len(k) for k in a), default=0)], args.cap)
    phi = build_phi(A, args.cap)
    words = lambda w: " ".join(A.names[i] for i in w)  # noqa: E731
    return emit(args, Report(), format_lincomb(phi(a), words))


def cmd_pbw_check(args: argparse.Namespace) -> int:
    A = _require_algebra(args)
    rep = Report()
    try:
        rep.checks.extend(verify_phi(A, args.cap).checks)
    except ValueError as exc:
        rep.add(CheckResult("construction", False, f"{type(exc).__name__}: {exc}"))
    L = LieAlgebra.from_prelie(A)
    for n in range(2, args.cap + 1):
        rep.add(timed(f"action_relations_n{n}", lambda: (lambda f: (not f, f[:1]))(pbw_action_failures(L, n))))
    return emit(args, rep)


def cmd_ghat_star(args: argparse.Namespace) -> int:
    A = _algebra_or_none(args)
    if A is None:
        raw = [parse_expression(s, args.ring, ordered=True) for s in (args.left, args.right)]
        labels = sorted({lab for e in raw for k in e for t in k for lab in t.labels()} - {"t"}) or ["x"]
        algebra = FreePreLie(args.ring, labels)
        conv = lambda w: tuple(T if (t.label == "t" and not t.children) else t for t in w)  # noqa: E731
        text = lambda w: " · ".join("t" if x is T else str(x) for x in w)  # noqa: E731
    else:
        raw = [parse_expression(s, args.ring, list(A.names) + ["t"], ordered=True) for s in (args.left, args.right)]
        algebra = A
        index = {n: i for i, n in enumerate(A.names)}
        conv = lambda w: tuple(T if t.label == "t" else index[t.label] for t in w)  # noqa: E731
        text = lambda w: " · ".join("t" if x is T else A.names[x] for x in w)  # noqa: E731
    a, b = (e.map_keys(conv) for e in raw)
    G = GhatAlgebra(algebra, args.cap)
    return emit(args, Report(), format_lincomb(G.star(a, b), text))


def cmd_twisted_check(args: argparse.Namespace) -> int:
    cfg = suite.SuiteConfig(seed=args.seed)
    rng = random.Random(args.seed)
    ring = args.ring
    mods = [(suite.random_smodule(ring, rng), suite.random_smodule(ring, rng)) for _ in range(3)]
    rep = Report()
    rep.add(timed("block_permutation_composition", lambda: suite._composition_law(cfg.seed)))
    rep.add(timed("tensor_dimension_formula", lambda: suite._tensor_dimensions(mods)))
    rep.add(timed("braiding_involution", lambda: suite._beta_involution(mods)))
    T2 = suite.random_two_step(ring, rng)
    rep.checks.extend(verify_twisted_coproduct(T2, args.cap).checks)
    return emit(args, rep)


def cmd_suspend(args: argparse.Namespace) -> int:
    A = _require_algebra(args)
    same, info = check_pltwlie_equivalence(A, t_cap=args.cap)
    rep = Report()
    rep.add(CheckResult("verdicts_agree", same, None if same else info,
                        f"pre-Lie: {info['prelie']}, twisted Lie: {info['twisted_lie']}"))
    if info["prelie"]:
        rep.checks.extend(check_word_poisson(A).checks)
    return emit(args, rep, extra={"prelie": info["prelie"], "twisted_lie": info["twisted_lie"]})


def cmd_twisted_star(args: argparse.Namespace) -> int:
    A = _require_algebra(args)
    T = suspended_twisted(A, 1)
    rep = Report()
    rep.checks.extend(verify_twisted_coproduct(T, args.cap).checks)
    rep.checks.extend(verify_twisted_star(T, args.cap).checks)
    return emit(args, rep)


def cmd_lambda_p(args: argparse.Namespace) -> int:
    lam = lambda_p(args.p)
    rep = Report()
    rep.add(timed("bracket_expansion_consistent", lambda: (lam.is_consistent(), None)))
    rep.add(timed("matches_free_associative_expansion", lambda: (lam.expansion == zassenhaus_oracle(args.p), None)))
    return emit(args, rep, str(lam))


def cmd_zassenhaus(args: argparse.Namespace) -> int:
    rep = Report()
    rep.add(timed(f"zassenhaus_p{args.p}", lambda: (verify_zassenhaus(args.p), None)))
    return emit(args, rep)


def cmd_touid(args: argparse.Namespace) -> int:
    rep = Report()
    rep.add(timed(f"pre_lie_powers_p{args.p}", lambda: (verify_touid(args.p), None)))
    return emit(args, rep)


def cmd_adid(args: argparse.Namespace) -> int:
    ring = RingSpec.prime_field(args.p)
    if args.algebra:
        algebras = [(args.algebra, load_algebra(args.algebra, ring))]
    else:
        algebras = suite.prime_field_algebras(args.p)
    rep = Report()
    for label, A in algebras:
        rep.add(suite.guarded(f"ad_power_defect[{label}]", lambda: (verify_adid(A, args.p), None)))
    return emit(args, rep)


def cmd_cohn(args: argparse.Namespace) -> int:
    return emit(args, cohn_counterexample(args.p))


def cmd_verify_all(args: argparse.Namespace) -> int:
    extra = []
    if args.algebra:
        extra.append((Path(args.algebra).stem, load_algebra(args.algebra, args.ring)))
    if args.inject_control:
        extra.append(("control", non_prelie_control()))
    cfg = suite.SuiteConfig(seed=args.seed, extra_algebras=extra)
    results = suite.run_suite(cfg, args.only)
    rep = suite.flatten(results)
    if not args.timings:
        rep.checks = [c for c in rep.checks if not c.name.endswith("/within_time_limit") or not c.passed]
    return emit(args, rep)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _ring(text: str) -> RingSpec:
    try:
        return RingSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", type=_ring, default=RingSpec.rational(), help="Q, Fp or Fp[a,b,..] (default Q)")
    common.add_argument("--p", type=int, default=2, help="prime for the characteristic-p commands (default 2)")
    common.add_argument("--cap", type=int, default=None, help="degree/weight cap (default per command)")
    common.add_argument("--algebra", default=None, help="built-in algebra name or JSON structure-constant file")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks (default 0)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--timings", action="store_true", help="include runtimes (makes output nondeterministic)")

    parser = argparse.ArgumentParser(prog="prelie-pbw", description="Pre-Lie algebras, star products and PBW checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, helptext: str, *positional: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=helptext)
        for p in positional:
            sp.add_argument(p)
        sp.set_defaults(func=fn)
        return sp

    add("graft", cmd_graft, "graft product of two tree combinations", "left", "right")
    add("star", cmd_star, "star product on Sym g", "left", "right")
    add("ck-star", cmd_ck_star, "forest grafting product", "left", "right")
    add("coproduct", cmd_coproduct, "unshuffle coproduct on Sym g", "expr")
    add("circ-ext", cmd_circ_ext, "extended pre-Lie product on Sym g", "left", "right")
    add("phi", cmd_phi, "image of a Sym monomial combination in U g", "expr")
    add("pbw-check", cmd_pbw_check, "verify the coalgebra isomorphism Sym g -> U g")
    add("ghat-star", cmd_ghat_star, "star product on words in g and t", "left", "right")
    add("twisted-check", cmd_twisted_check, "S-module calculus checks")
    add("suspend", cmd_suspend, "pre-Lie verdict against the suspended twisted bracket")
    add("twisted-star", cmd_twisted_star, "twisted star product checks on a suspension")
    add("lambda-p", cmd_lambda_p, "the Zassenhaus Lie polynomial")
    add("zassenhaus", cmd_zassenhaus, "check the Zassenhaus identity")
    add("touid", cmd_touid, "check the pre-Lie power identity")
    add("adid", cmd_adid, "check the ad-power defect identity")
    add("cohn", cmd_cohn, "the non-injective graded PBW example")
    va = add("verify-all", cmd_verify_all, "run the acceptance suite")
    va.add_argument("--inject-control", action="store_true", help="add the non-pre-Lie control table")
    va.add_argument("--only", type=int, nargs="+", default=None, help="criterion numbers to run")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cap is None:
        args.cap = DEFAULT_CAP.get(args.command, 4)
    try:
        return args.func(args)
    except (ExpressionSyntaxError, UnknownLabel, UsageError, CapExceeded, PrimeTooLarge,
            UnsupportedRing, NotFound) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
