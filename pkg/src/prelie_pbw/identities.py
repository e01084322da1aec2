"""Characteristic-p identities and the non-injective PBW example.

Free associative words are tuples of generator names; a Lie polynomial is
kept both as a combination of left-normed bracket words and as its
associative expansion, so either side can be used as a check on the other.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Any, Callable, Sequence

from .freemod import FpVectorSpace, LinComb, accumulate, bilinear, flatten_to_fp, tensor, unflatten_from_fp
from .prelie import (
    FreePreLie,
    PreLieAlgebra,
    StructurePreLie,
    check_prelie_axiom,
    commutator_bracket,
    dual_numbers,
    leaf,
    nilpotent_square,
    prelie_product,
    random_prelie,
    random_table,
    upper_triangular_2x2,
)
from .report import Report, timed
from .scalars import PRIME, RingSpec, UnsupportedRing, fp_basis_exponents

MAX_PRIME = 7


class PrimeTooLarge(ValueError):
    pass


class NotFound(LookupError):
    """No witness was found within the search budget."""


# ---------------------------------------------------------------------------
# free associative algebra on named generators
# ---------------------------------------------------------------------------

def word(ring: RingSpec, *letters: str) -> LinComb:
    return LinComb.basis(ring, tuple(letters))


def assoc_multiply(a: LinComb, b: LinComb) -> LinComb:
    one = a.ring.one
    return bilinear(a, b, lambda u, v: {u + v: one})


def assoc_power(a: LinComb, n: int) -> LinComb:
    out = LinComb.basis(a.ring, ())
    for _ in range(n):
        out = assoc_multiply(out, a)
    return out


def assoc_bracket(a: LinComb, b: LinComb) -> LinComb:
    return assoc_multiply(a, b) - assoc_multiply(b, a)


def expand_left_normed(ring: RingSpec, letters: Sequence[str]) -> LinComb:
    """Associative expansion of ``[[..[g1, g2], ..], gk]``."""
    acc = word(ring, letters[0])
    for g in letters[1:]:
        acc = assoc_bracket(acc, word(ring, g))
    return acc


@dataclass(frozen=True)
class LiePolynomial:
    """A combination of left-normed bracket words with its associative expansion."""

    ring: RingSpec
    brackets: LinComb
    expansion: LinComb

    @classmethod
    def from_brackets(cls, brackets: LinComb) -> "LiePolynomial":
        ring = brackets.ring
        acc = LinComb.zero(ring)
        for w, c in brackets.items():
            acc = acc + expand_left_normed(ring, w).scale(c)
        return cls(ring, brackets, acc)

    def is_consistent(self) -> bool:
        return LiePolynomial.from_brackets(self.brackets).expansion == self.expansion

    def evaluate(self, bracket: Callable[[Any, Any], Any], values: dict[str, Any], zero: Any) -> Any:
        """Substitute ``values`` for the generators, reading brackets with ``bracket``."""
        total = zero
        for w, c in self.brackets.sorted_items():
            acc = values[w[0]]
            for g in w[1:]:
                acc = bracket(acc, values[g])
            total = total + acc.scale(c)
        return total

    def degree(self) -> int:
        return max((len(w) for w in self.brackets), default=0)

    def __str__(self) -> str:
        parts = []
        for w, c in self.brackets.sorted_items():
            text = w[0]
            for g in w[1:]:
                text = f"[{text},{g}]"
            coeff = self.ring.format(c)
            parts.append(text if coeff == "1" else f"{coeff}*{text}")
        return " + ".join(parts) or "0"


def lambda_p(p: int, letters: tuple[str, str] = ("x", "y")) -> LiePolynomial:
    """The Lie polynomial with ``(x+y)^p = x^p + y^p + Lambda_p(x, y)`` mod ``p``.

    Jacobson's recipe: ``i * s_i`` is the coefficient of ``lam^(i-1)`` in
    ``ad(lam x + y)^(p-1)(x)``.  Each ad-word ``ad(z1)..ad(z_{p-1})(x)`` is
    rewritten as the left-normed word ``(x, z_{p-1}, .., z1)`` up to the sign
    ``(-1)^(p-1)``.
    """
    if p > MAX_PRIME:
        raise PrimeTooLarge(f"p = {p} exceeds the expansion guard p <= {MAX_PRIME}")
    ring = RingSpec.prime_field(p)
    x, y = letters
    sign = ring.from_int((-1) ** (p - 1))
    acc: dict = {}
    for zs in itertools.product((x, y), repeat=p - 1):
        i = zs.count(x) + 1
        if i >= p:
            continue  # ad(x)^(p-1)(x) = 0 contributes to s_p, which is not part of the sum
        w = (x,) + tuple(reversed(zs))
        if w[1] == w[0]:
            continue  # [x, x] = 0
        accumulate(ring, acc, w, ring.mul(sign, ring.inv(ring.from_int(i))))
    return LiePolynomial.from_brackets(LinComb(ring, acc, _clean=True))


def zassenhaus_oracle(p: int, letters: tuple[str, str] = ("x", "y")) -> LinComb:
    """``(x+y)^p - x^p - y^p`` by direct multiplication in the free associative algebra."""
    ring = RingSpec.prime_field(p)
    x, y = (word(ring, g) for g in letters)
    return assoc_power(x + y, p) - assoc_power(x, p) - assoc_power(y, p)


def verify_zassenhaus(p: int) -> bool:
    lam = lambda_p(p)
    return lam.is_consistent() and lam.expansion == zassenhaus_oracle(p)


# ---------------------------------------------------------------------------
# pre-Lie powers
# ---------------------------------------------------------------------------

def right_iterate(A: PreLieAlgebra, z: LinComb, x: LinComb, i: int) -> LinComb:
    """``(..((z o x) o x)..) o x`` with ``i`` factors of ``x``."""
    out = z
    for _ in range(i):
        out = prelie_product(A, out, x)
    return out


def prelie_power(A: PreLieAlgebra, x: LinComb, i: int) -> LinComb:
    if i < 1:
        raise ValueError("pre-Lie powers start at 1")
    return right_iterate(A, x, x, i - 1)


def ad_power(A: PreLieAlgebra, x: LinComb, z: LinComb, n: int) -> LinComb:
    """``{x, {x, .. {x, z}}}`` with ``n`` brackets."""
    out = z
    for _ in range(n):
        out = commutator_bracket(A, x, out)
    return out


def verify_touid(p: int) -> bool:
    """Pre-Lie powers reproduce the Zassenhaus polynomial in the free pre-Lie algebra."""
    lam = lambda_p(p)
    ring = lam.ring
    A = FreePreLie(ring, ("x", "y"))
    x = LinComb.basis(ring, leaf("x"))
    y = LinComb.basis(ring, leaf("y"))
    lhs = prelie_power(A, x + y, p) - prelie_power(A, x, p) - prelie_power(A, y, p)
    rhs = lam.evaluate(lambda a, b: commutator_bracket(A, a, b), {"x": x, "y": y}, LinComb.zero(ring))
    return lhs == rhs


def _require_prime_field(A: PreLieAlgebra) -> int:
    if A.ring.kind != PRIME:
        raise UnsupportedRing(f"expected a prime field, got {A.ring}")
    return A.ring.p


def adid_defect(A: StructurePreLie, x: LinComb, y: LinComb, z: LinComb) -> LinComb:
    p = _require_prime_field(A)
    s = x + y
    lhs = ad_power(A, s, z, p) - ad_power(A, x, z, p) - ad_power(A, y, z, p)
    u = prelie_power(A, s, p) - prelie_power(A, x, p) - prelie_power(A, y, p)
    return lhs - commutator_bracket(A, u, z)


def verify_adid(A: StructurePreLie, p: int | None = None) -> bool:
    """The additivity defect of ``ad^p`` equals ``ad`` of the defect of pre-Lie powers, on basis triples."""
    q = _require_prime_field(A)
    if p is not None and p != q:
        raise UnsupportedRing(f"algebra is over F{q}, not F{p}")
    basis = [A.basis_element(k) for k in A.basis_keys]
    for x, y, z in itertools.product(basis, repeat=3):
        if not adid_defect(A, x, y, z).is_zero():
            return False
    return True


def right_power_defect(A: StructurePreLie, x: LinComb, y: LinComb, z: LinComb) -> LinComb:
    """Additivity defect of ``z o^p -`` minus ``z o`` (defect of pre-Lie powers)."""
    p = _require_prime_field(A)
    s = x + y
    lhs = right_iterate(A, z, s, p) - right_iterate(A, z, x, p) - right_iterate(A, z, y, p)
    u = prelie_power(A, s, p) - prelie_power(A, x, p) - prelie_power(A, y, p)
    return lhs - prelie_product(A, z, u)


def verify_right_power_identity(A: StructurePreLie) -> bool:
    basis = [A.basis_element(k) for k in A.basis_keys]
    return all(right_power_defect(A, x, y, z).is_zero() for x, y, z in itertools.product(basis, repeat=3))


# ---------------------------------------------------------------------------
# witnesses that pre-Lie powers are not restricted structures
# ---------------------------------------------------------------------------

def _all_vectors(A: StructurePreLie) -> list[LinComb]:
    ring = A.ring
    keys = A.basis_keys
    out = []
    for coeffs in itertools.product(range(ring.p), repeat=len(keys)):
        if any(coeffs):
            out.append(LinComb(ring, {k: ring.from_int(c) for k, c in zip(keys, coeffs)}))
    return out


def _restricted_failure(A: StructurePreLie, kind: str) -> dict | None:
    p = A.ring.p
    for x in _all_vectors(A):
        xp = prelie_power(A, x, p)
        for k in A.basis_keys:
            z = A.basis_element(k)
            if kind == "ad":
                lhs, rhs = ad_power(A, x, z, p), commutator_bracket(A, xp, z)
            else:
                lhs, rhs = right_iterate(A, z, x, p), prelie_product(A, z, xp)
            if lhs != rhs:
                return {"kind": kind, "algebra": A.to_json(), "x": x, "z": z, "lhs": lhs, "rhs": rhs}
    return None


def _candidate_algebras(p: int, dim_cap: int, rng: random.Random, attempts: int):
    ring = RingSpec.prime_field(p)
    seeds = [nilpotent_square(ring), dual_numbers(ring)]
    if dim_cap >= 3:
        seeds.append(upper_triangular_2x2(ring))
    for _ in range(attempts):
        if rng.random() < 0.5:
            A = random_table(ring, rng.randint(2, max(2, dim_cap)), rng)
            if check_prelie_axiom(A)[0]:
                yield StructurePreLie(ring, A.names, A.table)
        else:
            base = rng.choice([s for s in seeds if s.dim <= dim_cap])
            yield random_prelie(ring, base, rng)


def find_nonrestricted_witness(
    p: int,
    dim_cap: int = 3,
    seed: int = 0,
    *,
    kind: str = "ad",
    algebras: Sequence[StructurePreLie] | None = None,
    attempts: int = 200,
) -> dict:
    """First ``(algebra, x, z)`` where ``p``-th powers fail a restricted identity.

    ``kind="ad"`` compares ``ad(x)^p z`` with ``{x^(o p), z}``; ``kind="circ"``
    compares ``z o^p x`` with ``z o x^(o p)``.  With ``algebras`` given only
    those are searched; otherwise seeded random pre-Lie algebras of dimension
    at most ``dim_cap``.  Raises :class:`NotFound` when nothing turns up.
    """
    if kind not in ("ad", "circ"):
        raise ValueError(f"unknown identity {kind!r}")
    if algebras is None:
        if p not in (2, 3):
            raise ValueError("the random search supports p in {2, 3}")
        if not 2 <= dim_cap <= 3:
            raise ValueError("dim_cap must be 2 or 3")
        pool = _candidate_algebras(p, dim_cap, random.Random(seed), attempts)
    else:
        pool = algebras
    for A in pool:
        if A.ring.kind != PRIME or A.ring.p != p:
            raise UnsupportedRing(f"algebra over {A.ring}, expected F{p}")
        hit = _restricted_failure(A, kind)
        if hit is not None:
            return hit
    raise NotFound(f"no {kind} witness over F{p}")


# ---------------------------------------------------------------------------
# the non-free module whose graded PBW map is not injective
# ---------------------------------------------------------------------------

COHN_VARIABLES = ("alpha", "beta", "gamma")
COHN_GENERATORS = ("x", "y", "z")


@dataclass
class CohnModel:
    """``L = k^3 / k*(alpha, -beta, -gamma)`` over ``k = F_2[alpha, beta, gamma]/(squares)``.

    ``L`` is held as ``F_2^24`` modulo the 8 monomial multiples of the
    relation; degree-2 tensors live in ``k^9`` (``F_2^72``) modulo relation
    insertions in either slot.
    """

    ring: RingSpec
    monomials: list
    module_relations: FpVectorSpace
    l_basis: list[LinComb]
    insertions: list[list[int]]
    tensor_relations: FpVectorSpace
    lam_image: LinComb  # [beta y, gamma z] read in L (x) L
    target: LinComb  # beta gamma (y (x) z)

    @property
    def dim_l(self) -> int:
        return len(self.l_basis)

    def flat(self, v: LinComb) -> list[int]:
        return flatten_to_fp(v, [(a, b) for a in COHN_GENERATORS for b in COHN_GENERATORS])

    def squares_space(self) -> FpVectorSpace:
        """Relation insertions plus every monomial multiple of ``b_i (x) b_i`` and ``b_i (x) b_j + b_j (x) b_i``."""
        space = FpVectorSpace(2, self.tensor_relations.n, self.insertions)
        for i, bi in enumerate(self.l_basis):
            for j in range(i, len(self.l_basis)):
                bj = self.l_basis[j]
                sq = tensor(bi, bi) if i == j else tensor(bi, bj) + tensor(bj, bi)
                for m in self.monomials:
                    space.add(self.flat(sq.scale(m)))
        return space


def cohn_model(p: int = 2) -> CohnModel:
    if p != 2:
        raise UnsupportedRing(
            f"p = {p}: the analogous tensor square has a {27 * p ** 3}-dimensional ambient space "
            "and a squares submodule quadratic in dim L; memory makes this impractical, "
            "so only p = 2 is supported"
        )
    k = RingSpec.truncated(p, COHN_VARIABLES)
    alpha, beta, gamma = (k.variable(v) for v in COHN_VARIABLES)
    monos = [k.monomial(e) for e in fp_basis_exponents(k)]
    gens = {g: LinComb.basis(k, g) for g in COHN_GENERATORS}
    rel = LinComb(k, {"x": alpha, "y": k.neg(beta), "z": k.neg(gamma)})
    n_mod = 3 * len(monos)

    rel_multiples = [rel.scale(m) for m in monos]
    module_rel = FpVectorSpace(p, n_mod, (flatten_to_fp(v, COHN_GENERATORS) for v in rel_multiples))
    # an F_2-basis of L: unit vectors off the pivot columns of the relation span
    pivots = {row.index(1) for row in module_rel.basis()}
    l_basis = []
    for col in range(n_mod):
        if col not in pivots:
            unit = [0] * n_mod
            unit[col] = 1
            l_basis.append(unflatten_from_fp(k, unit, COHN_GENERATORS))

    pair_order = [(a, b) for a in COHN_GENERATORS for b in COHN_GENERATORS]
    flat = lambda v: flatten_to_fp(v, pair_order)  # noqa: E731
    insertions = [flat(tensor(r, g)) for r in rel_multiples for g in gens.values()]
    insertions += [flat(tensor(g, r)) for r in rel_multiples for g in gens.values()]
    width = len(pair_order) * len(monos)

    by = gens["y"].scale(beta)
    gz = gens["z"].scale(gamma)
    return CohnModel(
        ring=k,
        monomials=monos,
        module_relations=module_rel,
        l_basis=l_basis,
        insertions=insertions,
        tensor_relations=FpVectorSpace(p, width, insertions),
        lam_image=tensor(by, gz) + tensor(gz, by),  # the bracket in characteristic 2
        target=tensor(gens["y"], gens["z"]).scale(k.mul(beta, gamma)),
    )


def cohn_counterexample(p: int = 2) -> Report:
    """Both span-membership verdicts and their conjunction.

    The degree-2 free-Lie model is ``L (x) L`` modulo relation insertions and
    the span of ``w (x) w`` for ``w`` in ``L``.
    """
    M = cohn_model(p)
    width = M.tensor_relations.n

    def zero_in_tensor() -> tuple[bool, Any]:
        ok = M.tensor_relations.contains(M.flat(M.lam_image))
        return ok, None if ok else {"vector": M.lam_image}

    def nonzero_in_free_lie() -> tuple[bool, Any]:
        squares = M.squares_space()
        ok = not squares.contains(M.flat(M.target))
        return ok, None if ok else {"vector": M.target, "squares_rank": squares.rank}

    rep = Report()
    a = rep.add(timed("zero_in_tensor_algebra", zero_in_tensor,
                      f"relation insertions span {M.tensor_relations.rank} of {width} dims"))
    b = rep.add(timed("nonzero_in_free_lie_model", nonzero_in_free_lie,
                      f"dim L over F2 = {M.dim_l}; model L(x)L / <w(x)w>"))
    rep.add(timed("graded_pbw_not_injective", lambda: (a.passed and b.passed, None),
                  "both verdicts hold"))
    return rep
