"""The acceptance suite: numbered criteria, each a bundle of named checks.

Every criterion returns a :class:`Report`; ``run_suite`` times each one
against its limit.  Extra algebras passed in the configuration are added to
the criteria that quantify over test algebras, which is how a broken table
is injected to watch the suite catch it.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from .envelope import (
    GhatAlgebra,
    SymmetryViolation,
    build_phi,
    check_xx_condition,
    pbw_action_failures,
    projection_matches_sym,
    verify_ghat_theorem,
    verify_phi,
)
from .freemod import FpVectorSpace, span_membership
from .hopf import star_equals_ck, verify_star_theorem
from .identities import (
    NotFound,
    PrimeTooLarge,
    cohn_counterexample,
    cohn_model,
    find_nonrestricted_witness,
    lambda_p,
    verify_adid,
    verify_right_power_identity,
    verify_touid,
    verify_zassenhaus,
)
from .prelie import (
    FreePreLie,
    LieAlgebra,
    StructurePreLie,
    check_jacobi,
    check_prelie_axiom,
    dual_numbers,
    find_non_jacobi,
    non_prelie_control,
    nilpotent_square,
    random_prelie,
    random_table,
    truncated_free_prelie,
    upper_triangular_2x2,
    zero_algebra,
)
from .report import CheckResult, Report, timed
from .scalars import PRIME, RingSpec, UnsupportedRing
from .twisted import (
    SModule,
    TwistedSym,
    block_perm_expand,
    braiding,
    check_pltwlie_equivalence,
    compose,
    permuted_sizes,
    random_smodule,
    random_two_step,
    smod_tensor,
    suspended_twisted,
    verify_twisted_coproduct,
    verify_twisted_star,
)

Q = RingSpec.rational()
F2 = RingSpec.prime_field(2)
F3 = RingSpec.prime_field(3)
F5 = RingSpec.prime_field(5)


@dataclass
class SuiteConfig:
    seed: int = 0
    extra_algebras: list[tuple[str, StructurePreLie]] = field(default_factory=list)


@dataclass
class Criterion:
    number: int
    title: str
    limit: float
    run: Callable[[SuiteConfig], Report]

    @property
    def name(self) -> str:
        return f"c{self.number:02d}_{self.title}"


@dataclass
class CriterionResult:
    criterion: Criterion
    report: Report
    elapsed: float

    @property
    def in_time(self) -> bool:
        return self.elapsed < self.criterion.limit

    @property
    def passed(self) -> bool:
        return self.report.passed and self.in_time


def guarded(name: str, fn: Callable[[], tuple[bool, Any]], detail: str = "") -> CheckResult:
    """Like :func:`timed`, but a domain error raised by ``fn`` becomes a failed check."""
    start = time.perf_counter()
    try:
        ok, witness = fn()
    except (ValueError, ArithmeticError, LookupError) as exc:
        ok, witness = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(name, bool(ok), None if ok else witness, detail, time.perf_counter() - start)


def _merge(rep: Report, sub: Report, suffix: str) -> None:
    for c in sub.checks:
        rep.add(CheckResult(f"{c.name}[{suffix}]", c.passed, c.counterexample, c.detail, c.runtime))


def _guarded_report(rep: Report, label: str, fn: Callable[[], Report]) -> None:
    try:
        _merge(rep, fn(), label)
    except (ValueError, ArithmeticError, LookupError) as exc:
        rep.add(CheckResult(f"construction[{label}]", False, f"{type(exc).__name__}: {exc}"))


# ---------------------------------------------------------------------------
# test algebras
# ---------------------------------------------------------------------------

def star_algebras(seed: int) -> list[tuple[str, StructurePreLie]]:
    """Structure-constant pre-Lie algebras over Q, F2 and F5."""
    rng = random.Random(seed)
    return [
        ("upper_triangular_Q", upper_triangular_2x2(Q)),
        ("truncated_free3_F2", truncated_free_prelie(F2, 3)),
        ("dual_numbers_transport_F5", random_prelie(F5, dual_numbers(F5), rng)),
    ]


def free_basis_algebras(seed: int) -> list[tuple[str, StructurePreLie]]:
    rng = random.Random(seed)
    return [
        ("nilpotent_square_Q", nilpotent_square(Q)),
        ("upper_triangular_Q", upper_triangular_2x2(Q)),
        ("truncated_free3_F2", truncated_free_prelie(F2, 3)),
        ("dual_numbers_F5", dual_numbers(F5)),
        ("zero_F3", zero_algebra(F3, 2)),
        ("nilpotent_square_transport_F5", random_prelie(F5, nilpotent_square(F5), rng)),
    ]


def prime_field_algebras(p: int) -> list[tuple[str, StructurePreLie]]:
    R = RingSpec.prime_field(p)
    return [
        ("zero", zero_algebra(R, 2)),
        ("nilpotent_square", nilpotent_square(R)),
        ("dual_numbers", dual_numbers(R)),
        ("upper_triangular", upper_triangular_2x2(R)),
        ("truncated_free3", truncated_free_prelie(R, 3)),
        ("nilpotent_square_transport", random_prelie(R, nilpotent_square(R), random.Random(p))),
    ]


def nonabelian_2d(ring: RingSpec) -> LieAlgebra:
    """``{e1, e2} = e1``."""
    return LieAlgebra(ring, ["e1", "e2"], {(0, 1): {0: ring.one}, (1, 0): {0: ring.neg(ring.one)}})


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

def c01_grafting_axiom(cfg: SuiteConfig) -> Report:
    rep = Report()
    for labels in (("x",), ("x", "y")):
        A = FreePreLie(Q, labels)
        rep.add(timed(f"prelie_axiom[{''.join(labels)}]", lambda: check_prelie_axiom(A, degree_cap=6),
                      "all tree triples, total <= 6 vertices"))
    return rep


def c02_star_theorem(cfg: SuiteConfig) -> Report:
    rep = Report()
    _merge(rep, verify_star_theorem(FreePreLie(Q, ("x",)), 5), "free_x_Q_deg5")
    for label, A in star_algebras(cfg.seed) + cfg.extra_algebras:
        _guarded_report(rep, label, lambda: verify_star_theorem(A, 4))
    return rep


def c03_forest_oracle(cfg: SuiteConfig) -> Report:
    rep = Report()
    rep.add(timed("star_equals_forest_product[x]", lambda: star_equals_ck(5, ("x",))))
    rep.add(timed("star_equals_forest_product[xy]", lambda: star_equals_ck(5, ("x", "y"))))
    return rep


def c04_pbw_map(cfg: SuiteConfig) -> Report:
    rep = Report()
    for label, A in free_basis_algebras(cfg.seed) + cfg.extra_algebras:
        _guarded_report(rep, label, lambda: verify_phi(A, 4))
    return rep


def c05_ghat_star(cfg: SuiteConfig) -> Report:
    rep = Report()
    algebras: list[tuple[str, Any]] = [
        ("free_x_Q", FreePreLie(Q, ("x",))),
        ("nilpotent_square_F5", nilpotent_square(F5)),
        ("upper_triangular_Q", upper_triangular_2x2(Q)),
        ("truncated_free3_F2", truncated_free_prelie(F2, 3)),
    ] + cfg.extra_algebras
    for label, A in algebras:
        G = GhatAlgebra(A)
        _guarded_report(rep, label, lambda: verify_ghat_theorem(A, 4, G))
        rep.add(guarded(f"projection_matches_sym[{label}]", lambda: projection_matches_sym(A, 4, G)))
    return rep


def pltwlie_cases(seed: int, count: int = 50) -> list[tuple[str, StructurePreLie]]:
    """Seeded bilinear products of dimension <= 2 over F2, F3, F5: random tables and pre-Lie transports."""
    rng = random.Random(seed)
    rings = (F2, F3, F5)
    out = []
    for i in range(count):
        ring = rings[i % 3]
        if i % 2 == 0:
            A = random_table(ring, rng.randint(1, 2), rng)
        else:
            base = rng.choice([nilpotent_square(ring), dual_numbers(ring), zero_algebra(ring, 2)])
            A = random_prelie(ring, base, rng)
        out.append((f"case{i:02d}_{ring}", A))
    out.append(("control_F2", non_prelie_control()))
    return out


def c06_pltwlie(cfg: SuiteConfig) -> Report:
    cases = pltwlie_cases(cfg.seed)
    verdicts: list[bool] = []

    def agree() -> tuple[bool, Any]:
        for label, A in cases:
            same, info = check_pltwlie_equivalence(A, t_cap=2)
            verdicts.append(info["prelie"])
            if not same:
                return False, {"case": label, **info}
        return True, None

    rep = Report()
    rep.add(timed("verdicts_agree", agree, f"{len(cases)} seeded products"))
    rep.add(timed("includes_violators", lambda: (not all(verdicts), None)))
    rep.add(timed("includes_prelie", lambda: (any(verdicts), None)))
    return rep


def _composition_law(seed: int, cases: int = 500) -> tuple[bool, Any]:
    rng = random.Random(seed)
    for _ in range(cases):
        k = rng.randint(1, 4)
        s = tuple(rng.sample(range(k), k))
        t = tuple(rng.sample(range(k), k))
        sizes = tuple(rng.randint(0, 3) for _ in range(k))
        st = compose(s, t)
        lhs = block_perm_expand(st, sizes)
        rhs = compose(block_perm_expand(s, permuted_sizes(t, sizes)), block_perm_expand(t, sizes))
        if lhs != rhs:
            return False, {"sigma": s, "tau": t, "sizes": sizes}
    return True, None


def _tensor_dimensions(mods: list[tuple[SModule, SModule]]) -> tuple[bool, Any]:
    for g, h in mods:
        T = smod_tensor(g, h)
        for n in range(g.max_degree + h.max_degree + 1):
            expected = sum(math.comb(n, i) * g.dimension(i) * h.dimension(n - i) for i in range(n + 1))
            if T.dimension(n) != expected:
                return False, {"degree": n, "got": T.dimension(n), "expected": expected}
    return True, None


def _beta_involution(mods: list[tuple[SModule, SModule]]) -> tuple[bool, Any]:
    for g, h in mods:
        T = smod_tensor(g, h)
        back = smod_tensor(h, g)
        ring = T.ring
        for n in T.degrees():
            for key in T.basis(n):
                acc: dict = {}
                for k2, c in braiding(T, key).items():
                    for k3, c3 in braiding(back, k2).items():
                        acc[k3] = ring.add(acc.get(k3, ring.zero), ring.mul(c, c3))
                acc = {k: v for k, v in acc.items() if not ring.is_zero(v)}
                if acc != {key: ring.one}:
                    return False, {"key": key, "image": acc}
    return True, None


def twisted_test_algebras(seed: int) -> list[tuple[str, TwistedSym]]:
    rng = random.Random(seed)
    return [
        ("two_step_F5", random_two_step(F5, rng)),
        ("two_step_F3_d2_1", random_two_step(F3, rng, 2, 1)),
        ("suspended_trivial_F5", suspended_twisted(truncated_free_prelie(F5, 1), 1)),
        ("suspended_zero_F3", suspended_twisted(zero_algebra(F3, 1), 1)),
    ]


def c07_twisted(cfg: SuiteConfig) -> Report:
    rng = random.Random(cfg.seed)
    mods = []
    for ring in (F2, F3, F5):
        for _ in range(3):
            mods.append((random_smodule(ring, rng), random_smodule(ring, rng)))
    rep = Report()
    rep.add(timed("block_permutation_composition", lambda: _composition_law(cfg.seed), "500 random cases"))
    rep.add(timed("tensor_dimension_formula", lambda: _tensor_dimensions(mods)))
    rep.add(timed("braiding_involution", lambda: _beta_involution(mods)))
    for label, T in twisted_test_algebras(cfg.seed):
        _merge(rep, verify_twisted_coproduct(T, 4), label)
        _merge(rep, verify_twisted_star(T, 4), label)
    return rep


def c08_pbw_action(cfg: SuiteConfig) -> Report:
    rep = Report()
    algebras = [("abelian_Q", LieAlgebra(Q, ["e1", "e2"], {})), ("nonabelian_Q", nonabelian_2d(Q)),
                ("nonabelian_F5", nonabelian_2d(F5))]
    for label, L in algebras:
        for n in range(2, 5):
            rep.add(timed(f"relations_n{n}[{label}]",
                          lambda: (lambda f: (not f, f[:1]))(pbw_action_failures(L, n))))
    L, s = find_non_jacobi(F5, 3, cfg.seed)
    rep.add(timed("non_jacobi_breaks_braid",
                  lambda: (any(name == "braid" for name, _, _ in pbw_action_failures(L, 3)), None),
                  f"table seed {s}"))
    return rep


def c09_identities(cfg: SuiteConfig) -> Report:
    rep = Report()
    for p in (2, 3, 5, 7):
        rep.add(timed(f"zassenhaus_p{p}", lambda: (verify_zassenhaus(p), None)))
    for p in (2, 3, 5):
        rep.add(timed(f"pre_lie_powers_p{p}", lambda: (verify_touid(p), None)))
    for p in (2, 3):
        extra = [(n, A) for n, A in cfg.extra_algebras if A.ring.kind == PRIME and A.ring.p == p]
        for label, A in prime_field_algebras(p) + extra:
            rep.add(guarded(f"ad_power_defect_p{p}[{label}]", lambda: (verify_adid(A, p), None)))
            rep.add(guarded(f"right_power_defect_p{p}[{label}]", lambda: (verify_right_power_identity(A), None)))
    return rep


def c10_cohn(cfg: SuiteConfig) -> Report:
    rep = Report()
    _merge(rep, cohn_counterexample(2), "p2")
    return rep


def _raises(exc: type, fn: Callable[[], Any]) -> tuple[bool, Any]:
    try:
        out = fn()
    except exc:
        return True, None
    return False, {"returned": out}


def c11_negative_controls(cfg: SuiteConfig) -> Report:
    """Each check passes when the expected failure is detected."""
    control = non_prelie_control()
    rep = Report()
    add = lambda name, fn: rep.add(guarded(name, fn))  # noqa: E731

    add("span_excludes_unit_vector", lambda: (not span_membership(FpVectorSpace(2, 2, [[1, 1]]), [1, 0]), None))
    M = cohn_model(2)
    add("relation_span_excludes_cohn_vector",
        lambda: (not M.tensor_relations.contains(M.flat(M.target)), None))
    add("control_violates_prelie_axiom", lambda: (not check_prelie_axiom(control)[0], None))
    L, _ = find_non_jacobi(F5, 3, cfg.seed)
    add("random_antisymmetric_violates_jacobi", lambda: (not check_jacobi(L)[0], None))
    add("control_breaks_star_associativity", lambda: (not verify_star_theorem(control, 3)["associativity"].passed, None))
    add("control_breaks_phi_symmetry", lambda: _raises(SymmetryViolation, lambda: build_phi(control, 3)))
    add("non_jacobi_breaks_braid_relation",
        lambda: (any(n == "braid" for n, _, _ in pbw_action_failures(L, 3)), None))
    sq = LieAlgebra(F2, ["e1", "e2"], {(0, 0): {1: 1}})
    add("square_bracket_violates_xx", lambda: (not check_xx_condition(sq), None))
    for cap in (3, 4):
        add(f"control_breaks_ghat_equivariance_cap{cap}",
            lambda: (not verify_ghat_theorem(control, cap)["equivariance"].passed, None))

    def pltwlie_violator() -> tuple[bool, Any]:
        rng = random.Random(cfg.seed)
        for _ in range(200):
            A = random_table(F3, 2, rng)
            if not check_prelie_axiom(A)[0]:
                same, info = check_pltwlie_equivalence(A, 2)
                return same and not info["prelie"] and not info["twisted_lie"], info
        return False, "no non-pre-Lie table drawn"

    add("random_non_prelie_fails_both_verdicts", pltwlie_violator)
    add("zero_product_has_no_witness",
        lambda: _raises(NotFound, lambda: find_nonrestricted_witness(2, algebras=[zero_algebra(F2, 2)])))
    add("associative_has_no_ad_witness",
        lambda: _raises(NotFound, lambda: find_nonrestricted_witness(
            2, algebras=[dual_numbers(F2), upper_triangular_2x2(F2)])))
    add("seeded_search_finds_witness", lambda: (bool(find_nonrestricted_witness(2, 3, cfg.seed)), None))
    add("large_prime_rejected", lambda: _raises(PrimeTooLarge, lambda: lambda_p(11)))
    add("cohn_rejects_odd_prime", lambda: _raises(UnsupportedRing, lambda: cohn_counterexample(3)))
    return rep


CRITERIA: list[Criterion] = [
    Criterion(1, "grafting_prelie_axiom", 30, c01_grafting_axiom),
    Criterion(2, "star_product_theorem", 60, c02_star_theorem),
    Criterion(3, "forest_product_oracle", 30, c03_forest_oracle),
    Criterion(4, "pbw_coalgebra_isomorphism", 60, c04_pbw_map),
    Criterion(5, "noncommutative_star", 60, c05_ghat_star),
    Criterion(6, "prelie_vs_twisted_lie", 60, c06_pltwlie),
    Criterion(7, "twisted_calculus", 120, c07_twisted),
    Criterion(8, "pbw_action_relations", 30, c08_pbw_action),
    Criterion(9, "characteristic_p_identities", 120, c09_identities),
    Criterion(10, "cohn_counterexample", 30, c10_cohn),
    Criterion(11, "negative_controls", float("inf"), c11_negative_controls),
]


def criterion(number: int) -> Criterion:
    for c in CRITERIA:
        if c.number == number:
            return c
    raise KeyError(number)


def run_criterion(c: Criterion, cfg: SuiteConfig) -> CriterionResult:
    start = time.perf_counter()
    rep = c.run(cfg)
    return CriterionResult(c, rep, time.perf_counter() - start)


def run_suite(cfg: SuiteConfig | None = None, only: list[int] | None = None) -> list[CriterionResult]:
    cfg = cfg or SuiteConfig()
    chosen = [c for c in CRITERIA if only is None or c.number in only]
    return [run_criterion(c, cfg) for c in chosen]


def flatten(results: list[CriterionResult]) -> Report:
    """One report with checks named ``<criterion>/<check>``, sorted by name."""
    rep = Report()
    for r in results:
        for chk in r.report.checks:
            rep.add(CheckResult(f"{r.criterion.name}/{chk.name}", chk.passed, chk.counterexample, chk.detail, chk.runtime))
        limit = r.criterion.limit
        if math.isfinite(limit):
            rep.add(CheckResult(f"{r.criterion.name}/within_time_limit", r.in_time,
                                None if r.in_time else {"elapsed": round(r.elapsed, 2)},
                                f"limit {limit:g}s", r.elapsed))
    rep.checks.sort(key=lambda c: c.name)
    return rep
