"""Enveloping algebras, the coalgebra isomorphism Sym g -> U g, and the
noncommutative star product on the tensor algebra of g + <t>.

Elements of U g are ``LinComb`` over weakly increasing tuples of basis
indices (PBW words).  Words in the tensor algebra on g + <t> are tuples whose
letters are basis keys of the pre-Lie algebra or the marker ``T``.
"""
from __future__ import annotations

import itertools
from typing import Any, Iterable, Sequence

from .freemod import LinComb, accumulate, bilinear, linear, rank_over_field, unshuffles
from .hopf import SymAlgebra
from .prelie import (
    FreePreLie,
    LieAlgebra,
    NotALieAlgebra,
    PreLieAlgebra,
    StructurePreLie,
    check_jacobi,
    trees_up_to,
)
from .report import Report, timed
from .scalars import RATIONAL, RingSpec, UnsupportedRing


class SymmetryViolation(ValueError):
    pass


class CapExceeded(ValueError):
    pass


# ---------------------------------------------------------------------------
# U g in PBW normal form
# ---------------------------------------------------------------------------

def _normal_form(L: LieAlgebra, word: tuple, memo: dict) -> dict:
    """Rewrite the leftmost descent ``b a`` (b > a) as ``a b + {b, a}`` until sorted."""
    hit = memo.get(word)
    if hit is not None:
        return hit
    ring = L.ring
    for i in range(len(word) - 1):
        if word[i] > word[i + 1]:
            b, a = word[i], word[i + 1]
            acc: dict = {}
            for w, c in _normal_form(L, word[:i] + (a, b) + word[i + 2:], memo).items():
                accumulate(ring, acc, w, c)
            for k, ck in L.bracket_keys(b, a).items():
                for w, c in _normal_form(L, word[:i] + (k,) + word[i + 2:], memo).items():
                    accumulate(ring, acc, w, ring.mul(ck, c))
            break
    else:
        acc = {word: ring.one}
    memo[word] = acc
    return acc


class UEnvelope:
    """U g for a Lie algebra on an ordered free basis ``0..d-1``."""

    def __init__(self, L: LieAlgebra, *, check: bool = True) -> None:
        if check:
            if not L.is_antisymmetric():
                raise NotALieAlgebra("bracket is not antisymmetric")
            ok, witness = check_jacobi(L)
            if not ok:
                raise NotALieAlgebra(f"Jacobi fails on {witness[:3]}")
        self.lie = L
        self.ring: RingSpec = L.ring
        self._memo: dict = {}

    def normal_form(self, word: Sequence[int]) -> LinComb:
        return LinComb(self.ring, dict(_normal_form(self.lie, tuple(word), self._memo)), _clean=True)

    def _nf(self, word: tuple) -> dict:
        return _normal_form(self.lie, word, self._memo)

    def word(self, letters: Sequence[int]) -> LinComb:
        return self.normal_form(letters)

    def one(self) -> LinComb:
        return LinComb.basis(self.ring, ())

    def generator(self, i: int) -> LinComb:
        return LinComb.basis(self.ring, (i,))

    def multiply(self, u: LinComb, v: LinComb) -> LinComb:
        return bilinear(u, v, lambda a, b: self._nf(a + b))

    def multiply_tensor(self, u: LinComb, v: LinComb) -> LinComb:
        """Componentwise product on U g (x) U g (pair keys)."""
        ring = self.ring

        def op(p: tuple, q: tuple) -> dict:
            acc: dict = {}
            for w1, c1 in self._nf(p[0] + q[0]).items():
                for w2, c2 in self._nf(p[1] + q[1]).items():
                    accumulate(ring, acc, (w1, w2), ring.mul(c1, c2))
            return acc

        return bilinear(u, v, op)

    def coproduct(self, u: LinComb) -> LinComb:
        """Generators primitive, extended as an algebra map into U g (x) U g."""
        ring = self.ring

        def on_word(w: tuple) -> LinComb:
            out = LinComb.basis(ring, ((), ()))
            for letter in w:
                prim = LinComb(ring, {((letter,), ()): ring.one, ((), (letter,)): ring.one}, _clean=True)
                out = self.multiply_tensor(out, prim)
            return out

        return linear(u, on_word)


def ue_multiply(L: LieAlgebra | UEnvelope, u: LinComb, v: LinComb) -> LinComb:
    U = L if isinstance(L, UEnvelope) else UEnvelope(L)
    return U.multiply(u, v)


def is_normal(word: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(word, word[1:]))


# ---------------------------------------------------------------------------
# the isomorphism Sym g -> U g
# ---------------------------------------------------------------------------

class PhiMap:
    """Images of Sym monomials (sorted index tuples) in U g, up to ``cap``."""

    def __init__(self, A: StructurePreLie, U: UEnvelope, cap: int) -> None:
        self.algebra = A
        self.envelope = U
        self.cap = cap
        self.table: dict[tuple, dict] = {(): {(): A.ring.one}}

    def of_monomial(self, m: tuple) -> LinComb:
        if len(m) > self.cap:
            raise CapExceeded(f"degree {len(m)} above cap {self.cap}")
        return LinComb(self.algebra.ring, dict(self.table[tuple(sorted(m))]), _clean=True)

    def __call__(self, a: LinComb) -> LinComb:
        return linear(a, self.of_monomial)

    def tensor(self, a: LinComb) -> LinComb:
        """Phi (x) Phi on pair-keyed elements."""
        ring = self.algebra.ring

        def op(pair: tuple) -> dict:
            acc: dict = {}
            for w1, c1 in self.table[pair[0]].items():
                for w2, c2 in self.table[pair[1]].items():
                    accumulate(ring, acc, (w1, w2), ring.mul(c1, c2))
            return acc

        return linear(a, op)


def _phi_peeling(A: StructurePreLie, U: UEnvelope, table: dict, rest: tuple, x: int) -> dict:
    """``Phi(rest) . x - sum_i Phi(rest with rest[i] replaced by rest[i] o x)``."""
    ring = A.ring
    acc: dict = {}
    for w, c in table[rest].items():
        for w2, c2 in U._nf(w + (x,)).items():
            accumulate(ring, acc, w2, ring.mul(c, c2))
    for i, y in enumerate(rest):
        for k, ck in A.product_keys(y, x).items():
            m = tuple(sorted(rest[:i] + (k,) + rest[i + 1:]))
            for w, c in table[m].items():
                accumulate(ring, acc, w, ring.neg(ring.mul(ck, c)))
    return acc


def build_phi(A: StructurePreLie, cap: int) -> PhiMap:
    """Build Phi degree by degree, computing each monomial from two orderings.

    The last factor and the first factor are each peeled off in turn; the two
    results must coincide.
    """
    U = UEnvelope(LieAlgebra.from_prelie(A))
    phi = PhiMap(A, U, cap)
    keys = A.basis_keys
    for n in range(1, cap + 1):
        for m in itertools.combinations_with_replacement(keys, n):
            if n == 1:
                phi.table[m] = {m: A.ring.one}
                continue
            last = _phi_peeling(A, U, phi.table, m[:-1], m[-1])
            first = _phi_peeling(A, U, phi.table, m[1:], m[0])
            if LinComb(A.ring, last) != LinComb(A.ring, first):
                raise SymmetryViolation(f"orderings disagree on monomial {m}")
            phi.table[m] = LinComb(A.ring, last).terms
    return phi


def verify_phi(A: StructurePreLie, cap: int, phi: PhiMap | None = None) -> Report:
    phi = phi or build_phi(A, cap)
    U = phi.envelope
    S = SymAlgebra(A)
    ring = A.ring
    keys = A.basis_keys
    monos = [m for n in range(cap + 1) for m in itertools.combinations_with_replacement(keys, n)]
    basis = lambda m: LinComb.basis(ring, m)  # noqa: E731

    def coalgebra() -> tuple[bool, Any]:
        for m in monos:
            lhs = U.coproduct(phi.of_monomial(m))
            rhs = phi.tensor(S.coproduct(basis(m)))
            if lhs != rhs:
                return False, {"monomial": m, "difference": lhs - rhs}
        return True, None

    def multiplicative() -> tuple[bool, Any]:
        for a in monos:
            for b in monos:
                if len(a) + len(b) > cap:
                    continue
                lhs = phi(S.star(basis(a), basis(b)))
                rhs = U.multiply(phi.of_monomial(a), phi.of_monomial(b))
                if lhs != rhs:
                    return False, {"a": a, "b": b, "difference": lhs - rhs}
        return True, None

    def graded_identity() -> tuple[bool, Any]:
        for m in monos:
            img = phi.of_monomial(m)
            top = img.filter(lambda w: len(w) >= len(m))
            if top != basis(m):
                return False, {"monomial": m, "top": top}
        return True, None

    def bijective() -> tuple[bool, Any]:
        if not ring.is_field:
            # unit upper-triangular against the PBW basis, so invertible
            return graded_identity()
        for n in range(cap + 1):
            rows_keys = [m for m in monos if len(m) <= n]
            col = {w: i for i, w in enumerate(rows_keys)}
            rows = []
            for m in rows_keys:
                row = [ring.zero] * len(col)
                for w, c in phi.table[m].items():
                    if w not in col:
                        return False, {"monomial": m, "word": w, "reason": "image not in PBW basis"}
                    row[col[w]] = c
                rows.append(row)
            if rank_over_field(ring, rows) != len(rows):
                return False, {"degree": n}
        return True, None

    rep = Report()
    rep.add(timed("coalgebra_morphism", coalgebra))
    rep.add(timed("multiplicative", multiplicative))
    rep.add(timed("bijective", bijective))
    rep.add(timed("graded_identity", graded_identity))
    return rep


# ---------------------------------------------------------------------------
# the S_n action on T^n g + (T^{<n} g / J)
# ---------------------------------------------------------------------------

def _act(L: LieAlgebra, memo: dict, i: int, vec: dict) -> dict:
    """Transposition (i, i+1): swap letters in T^n, add the bracket into the quotient."""
    ring = L.ring
    out: dict = {}
    for (kind, w), c in vec.items():
        if kind == "U":
            accumulate(ring, out, (kind, w), c)
            continue
        accumulate(ring, out, ("T", w[:i] + (w[i + 1], w[i]) + w[i + 2:]), c)
        for k, ck in L.bracket_keys(w[i], w[i + 1]).items():
            for nw, cn in _normal_form(L, w[:i] + (k,) + w[i + 2:], memo).items():
                accumulate(ring, out, ("U", nw), ring.mul(c, ring.mul(ck, cn)))
    return {k: v for k, v in out.items() if not ring.is_zero(v)}


def pbw_action_failures(L: LieAlgebra, n: int) -> list[tuple[str, tuple, tuple]]:
    """Every (relation, transpositions, word) for which the relation fails."""
    memo: dict = {}
    act = lambda seq, vec: _apply_seq(L, memo, seq, vec)  # noqa: E731
    relations: list[tuple[str, tuple, tuple]] = []
    for i in range(n - 1):
        relations.append(("square", (i, i), ()))
    for i in range(n - 2):
        relations.append(("braid", (i, i + 1, i), (i + 1, i, i + 1)))
    for i in range(n - 1):
        for j in range(i + 2, n - 1):
            relations.append(("commute", (i, j), (j, i)))
    failures = []
    for w in itertools.product(range(L.dim), repeat=n):
        start = {("T", w): L.ring.one}
        for name, lhs, rhs in relations:
            if act(lhs, start) != act(rhs, start):
                failures.append((name, lhs, w))
    return failures


def _apply_seq(L: LieAlgebra, memo: dict, seq: tuple, vec: dict) -> dict:
    for i in reversed(seq):
        vec = _act(L, memo, i, vec)
    return vec


def check_pbw_action(L: LieAlgebra, n: int) -> bool:
    return not pbw_action_failures(L, n)


def check_xx_condition(L: LieAlgebra) -> bool:
    """``{x, x} = 0`` for every x, via ``{e_i, e_i} = 0`` and ``{e_i, e_j} + {e_j, e_i} = 0``."""
    if L.ring.kind == RATIONAL:
        raise UnsupportedRing("the condition is automatic over Q; use the antisymmetry check")
    return L.has_zero_diagonal() and L.is_antisymmetric()


# ---------------------------------------------------------------------------
# the star product on T(g + <t>)
# ---------------------------------------------------------------------------

class _TMarker:
    """The letter t; sorts before every basis key."""

    _instance = None

    def __new__(cls) -> "_TMarker":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __reduce__(self) -> str:
        return "T"

    def __repr__(self) -> str:
        return "t"

    def __eq__(self, other: object) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("_TMarker")

    def __lt__(self, other: object) -> bool:
        return other is not self

    def __le__(self, other: object) -> bool:
        return True

    def __gt__(self, other: object) -> bool:
        return False

    def __ge__(self, other: object) -> bool:
        return other is self


T = _TMarker()


def g_letters(word: Iterable) -> int:
    return sum(1 for x in word if x is not T)


class GhatAlgebra:
    """T_k(g + <t>) with the star product.

    Internally letters carry labels (their final positions); the pre-Lie
    operations only ever change the letter sitting at a label, which is how
    the noncommutative versions of the Sym formulas are evaluated.
    """

    def __init__(self, algebra: PreLieAlgebra, cap: int | None = None) -> None:
        self.algebra = algebra
        self.ring: RingSpec = algebra.ring
        self.cap = cap
        self._circ: dict = {}
        self._star: dict = {}
        self._phi: dict = {}
        self._phi_inv: dict = {}

    # -- labelled formulas ---------------------------------------------
    def _merge(self, u: tuple, v: tuple) -> tuple:
        return tuple(sorted(u + v, key=lambda pl: pl[0]))

    def _circ_l(self, a: tuple, c: tuple) -> dict:
        """Extended operation on labelled monomials; t-letters ride along untouched."""
        ta = tuple(pl for pl in a if pl[1] is T)
        tc = tuple(pl for pl in c if pl[1] is T)
        if not ta and not tc:
            return self._circ_g(a, c)
        passengers = ta + tc
        ga = tuple(pl for pl in a if pl[1] is not T)
        gc = tuple(pl for pl in c if pl[1] is not T)
        return {self._merge(m, passengers): x for m, x in self._circ_g(ga, gc).items()}

    def _circ_g(self, a: tuple, c: tuple) -> dict:
        key = (a, c)
        hit = self._circ.get(key)
        if hit is not None:
            return hit
        ring = self.ring
        if not c:
            out = {a: ring.one}
        elif not a:
            out = {}
        elif len(a) >= 2:
            head, rest = a[:1], a[1:]
            out = {}
            for c1, c2, _ in unshuffles(c):
                left = self._circ_g(head, c1)
                if not left:
                    continue
                right = self._circ_g(rest, c2)
                for m1, x1 in left.items():
                    for m2, x2 in right.items():
                        accumulate(ring, out, self._merge(m1, m2), ring.mul(x1, x2))
        elif len(c) == 1:
            (p, x), (q, y) = a[0], c[0]
            out = {self._merge(((p, k),), ((q, T),)): ck for k, ck in self.algebra.product_keys(x, y).items()}
        else:
            rest, last = c[:-1], c[-1:]
            out = {}
            for m, x1 in self._circ_l(a, rest).items():
                for m2, x2 in self._circ_l(m, last).items():
                    accumulate(ring, out, m2, ring.mul(x1, x2))
            for m, x1 in self._circ_l(rest, last).items():
                for m2, x2 in self._circ_l(a, m).items():
                    accumulate(ring, out, m2, ring.neg(ring.mul(x1, x2)))
        self._circ[key] = out
        return out

    def _check_cap(self, n: int) -> None:
        if self.cap is not None and n > self.cap:
            raise CapExceeded(f"total word length {n} above cap {self.cap}")

    def _star_word(self, a: tuple, b: tuple) -> dict:
        key = (a, b)
        hit = self._star.get(key)
        if hit is not None:
            return hit
        ring = self.ring
        m = len(a)
        la = tuple(enumerate(a))
        lb = tuple((m + j, y) for j, y in enumerate(b))
        out: dict = {}
        passengers = tuple(pl for pl in lb if pl[1] is T)
        for b1, b2, _ in unshuffles(tuple(pl for pl in lb if pl[1] is not T)):
            b2 = b2 + passengers
            for mono, c in self._circ_l(la, b1).items():
                word = tuple(x for _, x in self._merge(mono, b2))
                accumulate(ring, out, word, c)
        self._star[key] = out
        return out

    def star(self, a: LinComb, b: LinComb) -> LinComb:
        for wa in a:
            for wb in b:
                self._check_cap(len(wa) + len(wb))
        return bilinear(a, b, self._star_word)

    def circ(self, a: LinComb, b: LinComb) -> LinComb:
        """The extended pre-Lie operation on words (labels dropped)."""

        def op(u: tuple, v: tuple) -> dict:
            m = len(u)
            res = self._circ_l(tuple(enumerate(u)), tuple((m + j, y) for j, y in enumerate(v)))
            acc: dict = {}
            for mono, c in res.items():
                acc_key = tuple(x for _, x in mono)
                accumulate(self.ring, acc, acc_key, c)
            return acc

        return bilinear(a, b, op)

    # -- second route: conjugating concatenation by Phi ------------------
    def phi_word(self, w: tuple) -> dict:
        """``Phi(w x) = Phi(w) x - sum_i Phi(w with w_i -> w_i o x) t``."""
        hit = self._phi.get(w)
        if hit is not None:
            return hit
        ring = self.ring
        if len(w) <= 1:
            out = {w: ring.one}
        else:
            rest, x = w[:-1], w[-1]
            out = {}
            for u, c in self.phi_word(rest).items():
                accumulate(ring, out, u + (x,), c)
            if x is not T:
                for i, y in enumerate(rest):
                    if y is T:
                        continue
                    for k, ck in self.algebra.product_keys(y, x).items():
                        for u, c in self.phi_word(rest[:i] + (k,) + rest[i + 1:]).items():
                            accumulate(ring, out, u + (T,), ring.neg(ring.mul(ck, c)))
        self._phi[w] = out
        return out

    def phi_inverse_word(self, w: tuple) -> dict:
        """Triangular inversion: the non-leading terms of Phi(w) have fewer g-letters."""
        hit = self._phi_inv.get(w)
        if hit is not None:
            return hit
        ring = self.ring
        out = {w: ring.one}
        for u, c in self.phi_word(w).items():
            if u == w:
                continue
            for v, cv in self.phi_inverse_word(u).items():
                accumulate(ring, out, v, ring.neg(ring.mul(c, cv)))
        self._phi_inv[w] = out
        return out

    def star_by_conjugation(self, a: LinComb, b: LinComb) -> LinComb:
        def op(u: tuple, v: tuple) -> LinComb:
            ring = self.ring
            acc: dict = {}
            for x, cx in self.phi_word(u).items():
                for y, cy in self.phi_word(v).items():
                    for z, cz in self.phi_inverse_word(x + y).items():
                        accumulate(ring, acc, z, ring.mul(cz, ring.mul(cx, cy)))
            return acc

        return bilinear(a, b, op)

    # -- coproduct -------------------------------------------------------
    def coproduct(self, a: LinComb) -> LinComb:
        """Unshuffle coproduct over k[t]: g-letters split, t-letters stay scalars.

        A key is the word with every letter tagged: ``"L"`` or ``"R"`` for the
        side of a g-letter, ``None`` for t.  Keeping positions makes this the
        labelled (twisted) coproduct.
        """
        one = self.ring.one

        def on_word(w: tuple) -> dict:
            g_pos = [i for i, x in enumerate(w) if x is not T]
            out = {}
            for sides in itertools.product("LR", repeat=len(g_pos)):
                tag = dict(zip(g_pos, sides))
                out[tuple((x, tag.get(i)) for i, x in enumerate(w))] = one
            return out

        return linear(a, on_word)

    def star_tensor(self, u: LinComb, v: LinComb) -> LinComb:
        """Componentwise star of two tagged tensors, relabelled into the concatenation."""
        ring = self.ring

        def op(p: tuple, q: tuple) -> dict:
            joined = p + q
            base = [(x, None) if side is None else None for x, side in joined]
            parts = []
            for side in "LR":
                pos_a = [i for i, (_, s) in enumerate(p) if s == side]
                pos_b = [len(p) + i for i, (_, s) in enumerate(q) if s == side]
                prod = self._star_word(tuple(joined[i][0] for i in pos_a), tuple(joined[i][0] for i in pos_b))
                parts.append((side, pos_a + pos_b, prod))
            acc: dict = {}
            (s1, pos1, prod1), (s2, pos2, prod2) = parts
            for w1, c1 in prod1.items():
                for w2, c2 in prod2.items():
                    key = list(base)
                    for side, pos, w in ((s1, pos1, w1), (s2, pos2, w2)):
                        for i, x in zip(pos, w):
                            key[i] = (x, None if x is T else side)
                    accumulate(ring, acc, tuple(key), ring.mul(c1, c2))
            return acc

        return bilinear(u, v, op)

    def basis_word(self, w: Sequence) -> LinComb:
        return LinComb.basis(self.ring, tuple(w))


def ghat_star(A: PreLieAlgebra, a: LinComb, b: LinComb, cap: int | None = None) -> LinComb:
    return GhatAlgebra(A, cap).star(a, b)


def _letters(A: PreLieAlgebra, cap: int) -> list:
    if isinstance(A, FreePreLie):
        return list(trees_up_to(cap, A.labels))
    return list(A.basis_keys)


def sample_words(A: PreLieAlgebra, cap: int) -> list[tuple]:
    """Words of weight <= cap; a tree letter weighs its vertex count, t weighs 1."""
    letters = _letters(A, cap) + [T]
    weight = _letter_weight(A)
    out: list[tuple] = [()]
    frontier: list[tuple[tuple, int]] = [((), 0)]
    while frontier:
        nxt = []
        for w, s in frontier:
            for x in letters:
                s2 = s + weight(x)
                if s2 <= cap:
                    nxt.append((w + (x,), s2))
        out.extend(w for w, _ in nxt)
        frontier = nxt
    return out


def _letter_weight(A: PreLieAlgebra):
    if isinstance(A, FreePreLie):
        return lambda x: 1 if x is T else x.size
    return lambda x: 1


def verify_ghat_theorem(A: PreLieAlgebra, cap: int, G: GhatAlgebra | None = None) -> Report:
    G = G or GhatAlgebra(A)
    ring = A.ring
    lw = _letter_weight(A)
    weight = lambda w: sum(lw(x) for x in w)  # noqa: E731
    words = sample_words(A, cap)
    pairs = [(a, b) for a in words for b in words if weight(a) + weight(b) <= cap]
    triples = [(a, b, c) for a, b in pairs for c in words if weight(a) + weight(b) + weight(c) <= cap]
    basis = lambda w: LinComb.basis(ring, w)  # noqa: E731

    def assoc() -> tuple[bool, Any]:
        for a, b, c in triples:
            x, y, z = basis(a), basis(b), basis(c)
            lhs = G.star(G.star(x, y), z)
            rhs = G.star(x, G.star(y, z))
            if lhs != rhs:
                return False, {"a": a, "b": b, "c": c, "difference": lhs - rhs}
        return True, None

    def coalgebra() -> tuple[bool, Any]:
        for a, b in pairs:
            x, y = basis(a), basis(b)
            if G.coproduct(G.star(x, y)) != G.star_tensor(G.coproduct(x), G.coproduct(y)):
                return False, {"a": a, "b": b}
        return True, None

    def filtration() -> tuple[bool, Any]:
        for a, b in pairs:
            prod = G.star(basis(a), basis(b))
            n = g_letters(a) + g_letters(b)
            if any(g_letters(w) > n for w in prod):
                return False, {"a": a, "b": b, "reason": "g-degree increased"}
            top = prod.filter(lambda w: g_letters(w) == n)
            if top != basis(a + b):
                return False, {"a": a, "b": b, "top": top}
        return True, None

    def floor() -> tuple[bool, Any]:
        for a, b in pairs:
            if T in a:
                continue
            m = len(a)
            for w in G.star(basis(a), basis(b)):
                if any(x is T for x in w[:m]):
                    return False, {"a": a, "b": b, "word": w}
        return True, None

    def t_central() -> tuple[bool, Any]:
        t = basis((T,))
        for a in words:
            if weight(a) + 1 > cap:
                continue
            f = basis(a)
            if G.star(f, t) != basis(a + (T,)) or G.star(t, f) != basis((T,) + a):
                return False, {"word": a}
        return True, None

    def equivariant() -> tuple[bool, Any]:
        # adjacent transpositions inside either factor act on the product's positions
        for a, b in pairs:
            prod = G.star(basis(a), basis(b))
            m = len(a)
            for i in range(len(a) + len(b) - 1):
                if i == m - 1:
                    continue
                if i < m:
                    moved = G.star(basis(_swap(a, i)), basis(b))
                else:
                    moved = G.star(basis(a), basis(_swap(b, i - m)))
                if moved != prod.map_keys(lambda w: _swap(w, i)):
                    return False, {"a": a, "b": b, "transposition": (i, i + 1)}
        return True, None

    def two_routes() -> tuple[bool, Any]:
        for a, b in pairs:
            x, y = basis(a), basis(b)
            if G.star(x, y) != G.star_by_conjugation(x, y):
                return False, {"a": a, "b": b}
        return True, None

    rep = Report()
    rep.add(timed("associativity", assoc))
    rep.add(timed("coproduct_compatibility", coalgebra))
    rep.add(timed("filtration", filtration))
    rep.add(timed("degree_floor", floor))
    rep.add(timed("t_central", t_central))
    rep.add(timed("equivariance", equivariant))
    rep.add(timed("agrees_with_conjugation", two_routes))
    return rep


def _swap(w: tuple, i: int) -> tuple:
    return w[:i] + (w[i + 1], w[i]) + w[i + 2:]


def project_to_sym(a: LinComb) -> LinComb:
    """Set t = 1 and forget the order of letters."""
    ring = a.ring
    acc: dict = {}
    for w, c in a.items():
        accumulate(ring, acc, tuple(sorted(x for x in w if x is not T)), c)
    return LinComb(ring, acc, _clean=True)


def projection_matches_sym(A: PreLieAlgebra, cap: int, G: GhatAlgebra | None = None, S: SymAlgebra | None = None) -> tuple[bool, Any]:
    """On t-free words, the projected star agrees with the Sym star of the monomials."""
    G = G or GhatAlgebra(A)
    S = S or SymAlgebra(A)
    ring = A.ring
    lw = _letter_weight(A)
    words = [w for w in sample_words(A, cap) if T not in w]
    for a in words:
        for b in words:
            if sum(map(lw, a)) + sum(map(lw, b)) > cap:
                continue
            lhs = project_to_sym(G.star(LinComb.basis(ring, a), LinComb.basis(ring, b)))
            rhs = S.star(LinComb.basis(ring, tuple(sorted(a))), LinComb.basis(ring, tuple(sorted(b))))
            if lhs != rhs:
                return False, {"a": a, "b": b, "ghat": lhs, "sym": rhs}
    return True, None
