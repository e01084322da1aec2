"""The symmetric algebra Sym g of a pre-Lie algebra and its star product.

Monomials are sorted tuples of basis keys of the pre-Lie algebra (for the
free pre-Lie algebra these are forests).  The extension of the pre-Lie
product to Sym g is evaluated with three rules, applied in this order:

    a o 1      = a
    (x a) o c  = sum (x o c') (a o c'')          split the left factor
    x o (b y)  = (x o b) o y - x o (b o y)       peel the right factor

with the product on g as the base case; then ``a * b = sum (a o b') b''``.
"""
from __future__ import annotations

import itertools
from typing import Any, Callable, Hashable, Iterable, Sequence

from .freemod import LinComb, accumulate, bilinear, linear, sub_multisets, sym_product
from .prelie import FreePreLie, PreLieAlgebra, Tree, attach, forests_up_to
from .report import Report, timed
from .scalars import RingSpec


class NonHomogeneousInput(ValueError):
    pass


Monomial = tuple


class SymAlgebra:
    """Sym g for a pre-Lie algebra ``g``, with the star product."""

    def __init__(self, algebra: PreLieAlgebra) -> None:
        self.algebra = algebra
        self.ring: RingSpec = algebra.ring
        self._circ: dict[tuple[Monomial, Monomial], dict] = {}
        self._star: dict[tuple[Monomial, Monomial], dict] = {}
        self._coprod: dict[Monomial, dict] = {}

    # -- elements ---------------------------------------------------------
    def monomial(self, factors: Iterable[Hashable], coeff: Any = None) -> LinComb:
        return LinComb.basis(self.ring, tuple(sorted(factors)), coeff)

    def one(self) -> LinComb:
        return LinComb.basis(self.ring, ())

    def generator(self, key: Hashable) -> LinComb:
        return LinComb.basis(self.ring, (key,))

    # -- commutative structure -------------------------------------------------
    def multiply(self, a: LinComb, b: LinComb) -> LinComb:
        one = self.ring.one
        return bilinear(a, b, lambda m, n: {sym_product(m, n): one})

    def _coproduct_mono(self, m: Monomial) -> dict:
        hit = self._coprod.get(m)
        if hit is None:
            f = self.ring.from_int
            hit = {}
            for left, right, count in sub_multisets(m):
                accumulate(self.ring, hit, (left, right), f(count))
            self._coprod[m] = hit
        return hit

    def coproduct(self, a: LinComb) -> LinComb:
        """Generators primitive, extended multiplicatively; keys are monomial pairs."""
        return linear(a, self._coproduct_mono)

    def counit(self, a: LinComb) -> Any:
        return a.coeff(())

    # -- the extended pre-Lie product --------------------------------------
    def _circ_mono(self, a: Monomial, b: Monomial) -> dict:
        key = (a, b)
        hit = self._circ.get(key)
        if hit is not None:
            return hit
        ring = self.ring
        if not b:
            out = {a: ring.one}
        elif not a:
            out = {}
        elif len(a) >= 2:
            head, rest = (a[0],), a[1:]
            acc: dict = {}
            for b1, b2, count in sub_multisets(b):
                left = self._circ_mono(head, b1)
                if not left:
                    continue
                right = self._circ_mono(rest, b2)
                if not right:
                    continue
                c0 = ring.from_int(count)
                for m1, c1 in left.items():
                    for m2, c2 in right.items():
                        accumulate(ring, acc, sym_product(m1, m2), ring.mul(c0, ring.mul(c1, c2)))
            out = acc
        elif len(b) == 1:
            out = {(k,): c for k, c in self.algebra.product_keys(a[0], b[0]).items()}
        else:
            rest, last = b[:-1], (b[-1],)
            acc = {}
            for m, c in self._circ_mono(a, rest).items():
                for m2, c2 in self._circ_mono(m, last).items():
                    accumulate(ring, acc, m2, ring.mul(c, c2))
            for m, c in self._circ_mono(rest, last).items():
                for m2, c2 in self._circ_mono(a, m).items():
                    accumulate(ring, acc, m2, ring.neg(ring.mul(c, c2)))
            out = acc
        self._circ[key] = out
        return out

    def circ_ext(self, a: LinComb, b: LinComb) -> LinComb:
        return bilinear(a, b, self._circ_mono)

    def _star_mono(self, a: Monomial, b: Monomial) -> dict:
        key = (a, b)
        hit = self._star.get(key)
        if hit is not None:
            return hit
        ring = self.ring
        acc: dict = {}
        for b1, b2, count in sub_multisets(b):
            c0 = ring.from_int(count)
            for m, c in self._circ_mono(a, b1).items():
                accumulate(ring, acc, sym_product(m, b2), ring.mul(c0, c))
        self._star[key] = acc
        return acc

    def star(self, a: LinComb, b: LinComb) -> LinComb:
        return bilinear(a, b, self._star_mono)

    def star_tensor(self, u: LinComb, v: LinComb) -> LinComb:
        """Componentwise star on Sym g (x) Sym g (pair keys)."""
        ring = self.ring

        def op(p: tuple, q: tuple) -> dict:
            acc: dict = {}
            left = self._star_mono(p[0], q[0])
            right = self._star_mono(p[1], q[1])
            for m1, c1 in left.items():
                for m2, c2 in right.items():
                    accumulate(ring, acc, (m1, m2), ring.mul(c1, c2))
            return acc

        return bilinear(u, v, op)


def degree(m: Monomial) -> int:
    return len(m)


def projection(a: LinComb, n: int) -> LinComb:
    """The degree-``n`` component."""
    return a.filter(lambda m: len(m) == n)


def filtration_degree(a: LinComb) -> int:
    return max((len(m) for m in a), default=-1)


# -- convenience wrappers matching the operation names -----------------------

def sym_multiply(S: SymAlgebra, a: LinComb, b: LinComb) -> LinComb:
    return S.multiply(a, b)


def coproduct(S: SymAlgebra, a: LinComb) -> LinComb:
    return S.coproduct(a)


def circ_ext(S: SymAlgebra, a: LinComb, b: LinComb) -> LinComb:
    return S.circ_ext(a, b)


def star(S: SymAlgebra, a: LinComb, b: LinComb) -> LinComb:
    return S.star(a, b)


def circ_from_star(star_op: Callable[[LinComb, LinComb], LinComb], g: LinComb, h: LinComb) -> LinComb:
    """``pi_n(g * h)`` for ``g`` homogeneous of degree ``n``."""
    degrees = {len(m) for m in g}
    if len(degrees) > 1:
        raise NonHomogeneousInput(f"degrees {sorted(degrees)}")
    if not degrees:
        return LinComb.zero(g.ring)
    return projection(star_op(g, h), degrees.pop())


# ---------------------------------------------------------------------------
# Connes-Kreimer style forest product (independent of the formulas above)
# ---------------------------------------------------------------------------

def ck_forest_product(x: Sequence[Tree], y: Sequence[Tree], ring: RingSpec | None = None) -> LinComb:
    """Sum over all maps from the trees of ``y`` to (vertices of ``x``) + {stay}.

    Each tree of ``y`` is either grafted onto the chosen vertex of ``x`` (its
    root becoming a new child there) or kept as a separate tree of the forest.
    """
    ring = ring or RingSpec.rational()
    sites = [(ti, v) for ti, t in enumerate(x) for v in range(t.size)]
    options = list(range(len(sites))) + [None]
    acc: dict = {}
    one = ring.one
    for choice in itertools.product(options, repeat=len(y)):
        per_tree: dict[int, dict[int, list[Tree]]] = {}
        stay: list[Tree] = []
        for s, target in zip(y, choice):
            if target is None:
                stay.append(s)
            else:
                ti, v = sites[target]
                per_tree.setdefault(ti, {}).setdefault(v, []).append(s)
        trees = [attach(t, per_tree.get(ti, {})) for ti, t in enumerate(x)]
        accumulate(ring, acc, tuple(sorted(trees + stay)), one)
    return LinComb(ring, acc, _clean=True)


# ---------------------------------------------------------------------------
# verification of the star-product theorem
# ---------------------------------------------------------------------------

def _weight(A: PreLieAlgebra) -> Callable[[Monomial], int]:
    if isinstance(A, FreePreLie):
        return lambda m: sum(t.size for t in m)
    return len


def sample_monomials(A: PreLieAlgebra, cap: int) -> list[Monomial]:
    """Monomials of weight <= cap: total vertices for trees, degree otherwise."""
    if isinstance(A, FreePreLie):
        return forests_up_to(cap, A.labels)
    keys = A.basis_keys
    return [m for n in range(cap + 1) for m in itertools.combinations_with_replacement(keys, n)]


def verify_star_theorem(A: PreLieAlgebra, degree_cap: int, S: SymAlgebra | None = None) -> Report:
    """Associativity, bialgebra compatibility, graded product and degree floor.

    Pairs and triples of monomials are taken with total weight at most
    ``degree_cap`` (vertex count for trees, polynomial degree otherwise).
    """
    S = S or SymAlgebra(A)
    ring = A.ring
    w = _weight(A)
    monos = sample_monomials(A, degree_cap)
    pairs = [(a, b) for a in monos for b in monos if w(a) + w(b) <= degree_cap]
    triples = [(a, b, c) for a, b in pairs for c in monos if w(a) + w(b) + w(c) <= degree_cap]
    basis = lambda m: LinComb.basis(ring, m)  # noqa: E731

    def assoc() -> tuple[bool, Any]:
        for a, b, c in triples:
            x, y, z = basis(a), basis(b), basis(c)
            lhs = S.star(S.star(x, y), z)
            rhs = S.star(x, S.star(y, z))
            if lhs != rhs:
                return False, {"a": a, "b": b, "c": c, "difference": lhs - rhs}
        return True, None

    def bialgebra() -> tuple[bool, Any]:
        for a, b in pairs:
            x, y = basis(a), basis(b)
            lhs = S.coproduct(S.star(x, y))
            rhs = S.star_tensor(S.coproduct(x), S.coproduct(y))
            if lhs != rhs:
                return False, {"a": a, "b": b, "difference": lhs - rhs}
        return True, None

    def graded() -> tuple[bool, Any]:
        for a, b in pairs:
            prod = S.star(basis(a), basis(b))
            n = len(a) + len(b)
            if filtration_degree(prod) > n or projection(prod, n) != S.multiply(basis(a), basis(b)):
                return False, {"a": a, "b": b, "product": prod}
        return True, None

    def floor() -> tuple[bool, Any]:
        for a, b in pairs:
            prod = S.star(basis(a), basis(b))
            low = [m for m in prod if len(m) < len(a)]
            if low:
                return False, {"a": a, "b": b, "low_terms": low}
        return True, None

    rep = Report()
    rep.add(timed("associativity", assoc))
    rep.add(timed("bialgebra", bialgebra))
    rep.add(timed("associated_graded", graded))
    rep.add(timed("degree_floor", floor))
    return rep


def star_equals_ck(cap: int, labels: tuple[str, ...] = ("x",), ring: RingSpec | None = None) -> tuple[bool, Any]:
    """Compare the star product with the forest-grafting product on all pairs of total size <= cap."""
    ring = ring or RingSpec.rational()
    S = SymAlgebra(FreePreLie(ring, labels))
    monos = forests_up_to(cap, labels)
    w = lambda m: sum(t.size for t in m)  # noqa: E731
    for a in monos:
        for b in monos:
            if w(a) + w(b) > cap:
                continue
            lhs = S.star(LinComb.basis(ring, a), LinComb.basis(ring, b))
            rhs = ck_forest_product(a, b, ring)
            if lhs != rhs:
                return False, {"a": a, "b": b, "star": lhs, "forest": rhs}
    return True, None


def circ_agrees_with_star(S: SymAlgebra, monos: Sequence[Monomial], weight: Callable[[Monomial], int], cap: int) -> tuple[bool, Any]:
    """``circ_ext`` against ``pi_n(g * h)`` on all monomial pairs up to ``cap``."""
    ring = S.ring
    for a in monos:
        for b in monos:
            if weight(a) + weight(b) > cap:
                continue
            x, y = LinComb.basis(ring, a), LinComb.basis(ring, b)
            if S.circ_ext(x, y) != circ_from_star(S.star, x, y):
                return False, {"a": a, "b": b}
    return True, None
