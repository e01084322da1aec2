"""Pre-Lie algebras.

Two concrete kinds share one small interface (``ring``, ``basis_keys`` and a
``product_keys(a, b)`` returning a coefficient dict):

* :class:`FreePreLie` -- labeled rooted trees under grafting;
* :class:`StructurePreLie` -- a finite basis with a table of structure constants.

Also here: the commutator Lie bracket, :class:`LieAlgebra` tables, checkers for
the right pre-Lie identity and the Jacobi identity, and a few generators of
test algebras (truncations of the free algebra, algebras coming from
associative ones, and transport of structure along an invertible matrix).
"""
from __future__ import annotations

import itertools
import random
import re
from functools import lru_cache
from typing import Any, Hashable, Iterable, Sequence

from .freemod import LinComb, accumulate, bilinear
from .scalars import RATIONAL, RingSpec


class BasisMismatch(ValueError):
    pass


class NotPreLie(ValueError):
    pass


# ---------------------------------------------------------------------------
# labeled rooted trees
# ---------------------------------------------------------------------------

_LABEL = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


class Tree:
    """A labeled rooted tree in canonical form.

    Children are kept sorted by their serialization, so two trees are equal
    exactly when their serializations agree.  Trees order by serialization.
    """

    __slots__ = ("label", "children", "key", "size", "_hash")

    def __init__(self, label: str, children: Iterable["Tree"] = ()) -> None:
        kids = tuple(sorted(children, key=lambda t: t.key))
        self.label = label
        self.children = kids
        if kids:
            self.key = label + "[" + ",".join(c.key for c in kids) + "]"
        else:
            self.key = label
        self.size = 1 + sum(c.size for c in kids)
        self._hash = hash(self.key)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Tree) and other.key == self.key

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, Tree):
            return NotImplemented
        return self.key < other.key

    def __le__(self, other: object) -> bool:
        if not isinstance(other, Tree):
            return NotImplemented
        return self.key <= other.key

    def __gt__(self, other: object) -> bool:
        if not isinstance(other, Tree):
            return NotImplemented
        return self.key > other.key

    def __ge__(self, other: object) -> bool:
        if not isinstance(other, Tree):
            return NotImplemented
        return self.key >= other.key

    def __repr__(self) -> str:
        return f"Tree({self.key!r})"

    def __str__(self) -> str:
        return self.key

    def labels(self) -> set[str]:
        out = {self.label}
        for c in self.children:
            out |= c.labels()
        return out

    def vertex_count(self) -> int:
        return self.size


def leaf(label: str = "x") -> Tree:
    return Tree(label)


def chain(n: int, label: str = "x") -> Tree:
    """The ``n``-vertex ladder."""
    t = Tree(label)
    for _ in range(n - 1):
        t = Tree(label, [t])
    return t


def corolla(n_leaves: int, label: str = "x") -> Tree:
    return Tree(label, [Tree(label) for _ in range(n_leaves)])


class TreeSyntaxError(ValueError):
    def __init__(self, message: str, column: int) -> None:
        super().__init__(f"{message} (column {column})")
        self.column = column


def parse_tree(src: str, pos: int = 0) -> tuple[Tree, int]:
    """Parse one tree starting at offset ``pos``; returns ``(tree, end)``.

    Grammar: ``Tree := Label ('[' Tree (',' Tree)* ']')?``.  Whitespace is not
    allowed inside a tree.  Column numbers in errors are 1-based; a bracket
    left open at the end of input is reported at the bracket itself.
    """
    m = _LABEL.match(src, pos)
    if not m:
        raise TreeSyntaxError("expected a label", pos + 1)
    label = m.group(0)
    pos = m.end()
    if pos < len(src) and src[pos] == "[":
        open_at = pos
        kids = []
        pos += 1
        while True:
            if pos >= len(src):
                raise TreeSyntaxError("unclosed '['", open_at + 1)
            kid, pos = parse_tree(src, pos)
            kids.append(kid)
            if pos >= len(src):
                raise TreeSyntaxError("unclosed '['", open_at + 1)
            if src[pos] == ",":
                pos += 1
                continue
            if src[pos] == "]":
                pos += 1
                break
            raise TreeSyntaxError("expected ',' or ']'", pos + 1)
        return Tree(label, kids), pos
    return Tree(label), pos


def tree(src: str) -> Tree:
    t, end = parse_tree(src)
    if end != len(src):
        raise TreeSyntaxError("trailing characters", end + 1)
    return t


def _graft_everywhere(t: Tree, s: Tree) -> list[Tree]:
    out = [Tree(t.label, t.children + (s,))]
    kids = t.children
    for i, c in enumerate(kids):
        for g in _graft_everywhere(c, s):
            out.append(Tree(t.label, kids[:i] + (g,) + kids[i + 1:]))
    return out


@lru_cache(maxsize=None)
def _graft_cached(t: Tree, s: Tree) -> tuple[tuple[Tree, int], ...]:
    counts: dict[Tree, int] = {}
    for g in _graft_everywhere(t, s):
        counts[g] = counts.get(g, 0) + 1
    return tuple(sorted(counts.items()))


def graft_counts(t: Tree, s: Tree) -> dict[Tree, int]:
    """Grafting ``s`` onto every vertex of ``t``, as integer multiplicities."""
    return dict(_graft_cached(t, s))


def graft(t: Tree, s: Tree, ring: RingSpec | None = None) -> LinComb:
    ring = ring or RingSpec.rational()
    return LinComb.from_pairs(ring, ((g, ring.from_int(n)) for g, n in _graft_cached(t, s)))


def attach(t: Tree, assignments: dict[int, list[Tree]]) -> Tree:
    """Attach extra subtrees to vertices of ``t`` (numbered in preorder)."""
    counter = itertools.count()

    def rec(node: Tree) -> Tree:
        idx = next(counter)
        kids = [rec(c) for c in node.children]
        kids.extend(assignments.get(idx, ()))
        return Tree(node.label, kids)

    return rec(t)


# -- enumeration --------------------------------------------------------------

@lru_cache(maxsize=None)
def trees_of_size(n: int, labels: tuple[str, ...] = ("x",)) -> tuple[Tree, ...]:
    """All canonical trees with exactly ``n`` vertices over ``labels``, sorted."""
    if n < 1:
        return ()
    out = set()
    for lab in labels:
        for forest in forests_of_size(n - 1, labels):
            out.add(Tree(lab, forest))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def forests_of_size(n: int, labels: tuple[str, ...] = ("x",)) -> tuple[tuple[Tree, ...], ...]:
    """All multisets of trees with ``n`` vertices in total, as sorted tuples."""
    if n == 0:
        return ((),)
    out = set()
    for first in range(1, n + 1):
        for t in trees_of_size(first, labels):
            for rest in forests_of_size(n - first, labels):
                out.add(tuple(sorted((t,) + rest)))
    return tuple(sorted(out))


def trees_up_to(n: int, labels: tuple[str, ...] = ("x",)) -> list[Tree]:
    return [t for k in range(1, n + 1) for t in trees_of_size(k, labels)]


def forests_up_to(n: int, labels: tuple[str, ...] = ("x",)) -> list[tuple[Tree, ...]]:
    return [f for k in range(0, n + 1) for f in forests_of_size(k, labels)]


def random_tree(rng: random.Random, n: int, labels: Sequence[str] = ("x",)) -> Tree:
    """A random tree on ``n`` vertices built from a random parent array."""
    lab = [rng.choice(labels) for _ in range(n)]
    parent = [None] + [rng.randrange(i) for i in range(1, n)]
    kids: list[list[int]] = [[] for _ in range(n)]
    for i in range(1, n):
        kids[parent[i]].append(i)

    def build(i: int) -> Tree:
        sub = [build(j) for j in kids[i]]
        rng.shuffle(sub)
        return Tree(lab[i], sub)

    return build(0)


# ---------------------------------------------------------------------------
# pre-Lie algebras
# ---------------------------------------------------------------------------

class PreLieAlgebra:
    """Common interface; subclasses provide ``product_keys``."""

    ring: RingSpec

    def product_keys(self, a: Hashable, b: Hashable) -> dict:
        raise NotImplementedError

    def owns(self, key: Hashable) -> bool:
        raise NotImplementedError

    def basis_element(self, key: Hashable) -> LinComb:
        return LinComb.basis(self.ring, key)

    def key_name(self, key: Hashable) -> str:
        return str(key)


class FreePreLie(PreLieAlgebra):
    """The free pre-Lie algebra on ``labels``: rooted trees under grafting.

    Products are exact unless ``vertex_cap`` is given, in which case trees with
    more than ``vertex_cap`` vertices are dropped (this quotient is again a
    pre-Lie algebra because such trees span an ideal).
    """

    def __init__(self, ring: RingSpec, labels: Sequence[str] = ("x",), vertex_cap: int | None = None) -> None:
        self.ring = ring
        self.labels = tuple(labels)
        self.vertex_cap = vertex_cap
        self._cache: dict = {}

    def owns(self, key: Hashable) -> bool:
        return isinstance(key, Tree) and key.labels() <= set(self.labels)

    def product_keys(self, a: Tree, b: Tree) -> dict:
        hit = self._cache.get((a, b))
        if hit is not None:
            return hit
        cap = self.vertex_cap
        if cap is not None and a.size + b.size > cap:
            out: dict = {}
        else:
            f = self.ring.from_int
            out = {}
            for g, n in _graft_cached(a, b):
                c = f(n)
                if not self.ring.is_zero(c):
                    out[g] = c
        self._cache[(a, b)] = out
        return out

    def basis_up_to(self, n: int) -> list[Tree]:
        return trees_up_to(n, self.labels)

    def __repr__(self) -> str:
        return f"FreePreLie({self.ring}, labels={self.labels}, cap={self.vertex_cap})"


class StructurePreLie(PreLieAlgebra):
    """A pre-Lie algebra on basis ``0..d-1`` given by structure constants.

    ``table[(i, j)]`` is a dict ``k -> raw coefficient`` for ``e_i o e_j``.
    The right pre-Lie identity is verified at construction unless
    ``checked=False`` (used to build deliberately broken tables).
    """

    def __init__(
        self,
        ring: RingSpec,
        names: Sequence[str],
        table: dict[tuple[int, int], dict[int, Any]],
        *,
        checked: bool = True,
    ) -> None:
        self.ring = ring
        self.names = tuple(names)
        d = len(self.names)
        clean: dict[tuple[int, int], dict[int, Any]] = {}
        for (i, j), row in table.items():
            if not (0 <= i < d and 0 <= j < d):
                raise BasisMismatch(f"index pair {(i, j)} outside basis of size {d}")
            entry = {}
            for k, c in row.items():
                if not 0 <= k < d:
                    raise BasisMismatch(f"index {k} outside basis of size {d}")
                if not ring.is_zero(c):
                    entry[k] = c
            if entry:
                clean[(i, j)] = entry
        self.table = clean
        self.checked = checked
        if checked:
            ok, bad = check_prelie_axiom(self)
            if not ok:
                raise NotPreLie(f"pre-Lie identity fails on {bad}")

    @property
    def dim(self) -> int:
        return len(self.names)

    @property
    def basis_keys(self) -> list[int]:
        return list(range(self.dim))

    def owns(self, key: Hashable) -> bool:
        return isinstance(key, int) and 0 <= key < self.dim

    def product_keys(self, a: int, b: int) -> dict:
        return self.table.get((a, b), {})

    def key_name(self, key: int) -> str:
        return self.names[key]

    def is_zero_product(self) -> bool:
        return not self.table

    def to_json(self) -> dict:
        return {
            "ring": str(self.ring),
            "basis": list(self.names),
            "product": [
                {"left": self.names[i], "right": self.names[j],
                 "value": {self.names[k]: self.ring.format(c) for k, c in sorted(row.items())}}
                for (i, j), row in sorted(self.table.items())
            ],
            "checked": self.checked,
        }

    @classmethod
    def from_json(cls, data: dict, *, checked: bool | None = None) -> "StructurePreLie":
        ring = RingSpec.parse(data["ring"])
        names = list(data["basis"])
        index = {n: i for i, n in enumerate(names)}
        table: dict = {}
        for entry in data.get("product", []):
            i, j = index[entry["left"]], index[entry["right"]]
            row = table.setdefault((i, j), {})
            for name, coeff in entry["value"].items():
                row[index[name]] = ring.add(row.get(index[name], ring.zero), ring.parse_scalar(str(coeff)))
        flag = data.get("checked", True) if checked is None else checked
        return cls(ring, names, table, checked=flag)

    def __repr__(self) -> str:
        return f"StructurePreLie({self.ring}, {self.names}, {len(self.table)} nonzero products)"


def prelie_product(A: PreLieAlgebra, x: LinComb, y: LinComb) -> LinComb:
    if x.ring != A.ring or y.ring != A.ring:
        raise BasisMismatch("element ring differs from algebra ring")
    for k in itertools.chain(x.keys(), y.keys()):
        if not A.owns(k):
            raise BasisMismatch(f"{k!r} is not a basis key of {A!r}")
    return bilinear(x, y, A.product_keys)


def commutator_bracket(A: PreLieAlgebra, x: LinComb, y: LinComb) -> LinComb:
    return prelie_product(A, x, y) - prelie_product(A, y, x)


def associator(A: PreLieAlgebra, x: LinComb, y: LinComb, z: LinComb) -> LinComb:
    """``(x o y) o z - x o (y o z)``."""
    op = A.product_keys
    return bilinear(bilinear(x, y, op), z, op) - bilinear(x, bilinear(y, z, op), op)


def _prelie_defect(A: PreLieAlgebra, a: Hashable, b: Hashable, c: Hashable) -> LinComb:
    # right pre-Lie: the associator is symmetric in its last two slots
    r = A.ring
    x, y, z = LinComb.basis(r, a), LinComb.basis(r, b), LinComb.basis(r, c)
    return associator(A, x, y, z) - associator(A, x, z, y)


def check_prelie_axiom(A: PreLieAlgebra, degree_cap: int | None = None) -> tuple[bool, Any]:
    """Verify the right pre-Lie identity on basis triples.

    For a structure-constant algebra every triple is checked; for the free
    algebra every tree triple with at most ``degree_cap`` vertices in total.
    Returns ``(True, None)`` or ``(False, (x, y, z, difference))``.
    """
    if isinstance(A, FreePreLie):
        cap = 6 if degree_cap is None else degree_cap
        triples: Iterable = (
            (x, y, z)
            for nx in range(1, cap + 1)
            for ny in range(1, cap + 1 - nx)
            for nz in range(1, cap + 1 - nx - ny)
            for x in trees_of_size(nx, A.labels)
            for y in trees_of_size(ny, A.labels)
            for z in trees_of_size(nz, A.labels)
        )
    else:
        keys = A.basis_keys
        triples = itertools.product(keys, keys, keys)
    for a, b, c in triples:
        diff = _prelie_defect(A, a, b, c)
        if not diff.is_zero():
            return False, (a, b, c, diff)
    return True, None


# ---------------------------------------------------------------------------
# Lie algebras given by structure constants
# ---------------------------------------------------------------------------

class NotALieAlgebra(ValueError):
    pass


class LieAlgebra:
    """Bracket structure constants on an ordered basis ``0..d-1``.

    ``table[(i, j)]`` is the coefficient dict of ``{e_i, e_j}``.  Nothing is
    enforced at construction; see :meth:`is_antisymmetric` and
    :func:`check_jacobi`.
    """

    def __init__(self, ring: RingSpec, names: Sequence[str], table: dict[tuple[int, int], dict[int, Any]]) -> None:
        self.ring = ring
        self.names = tuple(names)
        self.table = {k: {i: c for i, c in v.items() if not ring.is_zero(c)} for k, v in table.items()}
        self.table = {k: v for k, v in self.table.items() if v}

    @property
    def dim(self) -> int:
        return len(self.names)

    def bracket_keys(self, a: int, b: int) -> dict:
        return self.table.get((a, b), {})

    def bracket(self, x: LinComb, y: LinComb) -> LinComb:
        return bilinear(x, y, self.bracket_keys)

    def is_antisymmetric(self) -> bool:
        """``{e_i, e_j} = -{e_j, e_i}`` for all basis pairs (diagonal not tested)."""
        r = self.ring
        d = self.dim
        for i in range(d):
            for j in range(i + 1, d):
                a = LinComb(r, dict(self.bracket_keys(i, j)))
                b = LinComb(r, dict(self.bracket_keys(j, i)))
                if not (a + b).is_zero():
                    return False
        return True

    def has_zero_diagonal(self) -> bool:
        return all(not self.bracket_keys(i, i) for i in range(self.dim))

    @classmethod
    def from_prelie(cls, A: StructurePreLie) -> "LieAlgebra":
        r = A.ring
        table = {}
        for i in range(A.dim):
            for j in range(A.dim):
                v = LinComb(r, dict(A.product_keys(i, j))) - LinComb(r, dict(A.product_keys(j, i)))
                if not v.is_zero():
                    table[(i, j)] = dict(v.terms)
        return cls(r, A.names, table)

    def to_json(self) -> dict:
        return {
            "ring": str(self.ring),
            "basis": list(self.names),
            "bracket": [
                {"left": self.names[i], "right": self.names[j],
                 "value": {self.names[k]: self.ring.format(c) for k, c in sorted(row.items())}}
                for (i, j), row in sorted(self.table.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LieAlgebra":
        ring = RingSpec.parse(data["ring"])
        names = list(data["basis"])
        index = {n: i for i, n in enumerate(names)}
        table: dict = {}
        for entry in data.get("bracket", []):
            row = table.setdefault((index[entry["left"]], index[entry["right"]]), {})
            for name, coeff in entry["value"].items():
                row[index[name]] = ring.add(row.get(index[name], ring.zero), ring.parse_scalar(str(coeff)))
        return cls(ring, names, table)

    def __repr__(self) -> str:
        return f"LieAlgebra({self.ring}, {self.names})"


def check_jacobi(L: LieAlgebra) -> tuple[bool, Any]:
    """Jacobi identity on all basis triples; returns the first failure."""
    r = L.ring
    op = L.bracket_keys
    for a, b, c in itertools.product(range(L.dim), repeat=3):
        x, y, z = (LinComb.basis(r, k) for k in (a, b, c))
        total = (
            bilinear(x, bilinear(y, z, op), op)
            + bilinear(y, bilinear(z, x, op), op)
            + bilinear(z, bilinear(x, y, op), op)
        )
        if not total.is_zero():
            return False, (a, b, c, total)
    return True, None


def random_antisymmetric(ring: RingSpec, dim: int, rng: random.Random, *, zero_diagonal: bool = True) -> LieAlgebra:
    table: dict = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            row = {k: ring.random(rng) for k in range(dim)}
            table[(i, j)] = row
            table[(j, i)] = {k: ring.neg(c) for k, c in row.items()}
    return LieAlgebra(ring, [f"e{i + 1}" for i in range(dim)], table)


def find_non_jacobi(ring: RingSpec, dim: int, seed: int = 0, attempts: int = 1000) -> tuple[LieAlgebra, int]:
    """Random antisymmetric tables until one violates Jacobi; returns it and the seed used."""
    for s in range(seed, seed + attempts):
        L = random_antisymmetric(ring, dim, random.Random(s))
        if not check_jacobi(L)[0]:
            return L, s
    raise RuntimeError("no Jacobi violation found")


# ---------------------------------------------------------------------------
# test-algebra factories
# ---------------------------------------------------------------------------

def truncated_free_prelie(ring: RingSpec, max_vertices: int, labels: Sequence[str] = ("x",)) -> StructurePreLie:
    """The free pre-Lie algebra modulo trees with more than ``max_vertices`` vertices."""
    basis = trees_up_to(max_vertices, tuple(labels))
    index = {t: i for i, t in enumerate(basis)}
    table: dict = {}
    for a in basis:
        for b in basis:
            if a.size + b.size > max_vertices:
                continue
            row = {index[g]: ring.from_int(n) for g, n in _graft_cached(a, b)}
            table[(index[a], index[b])] = row
    return StructurePreLie(ring, [t.key for t in basis], table)


def from_associative(ring: RingSpec, names: Sequence[str], mult: dict[tuple[int, int], dict[int, Any]]) -> StructurePreLie:
    """An associative product is in particular right pre-Lie."""
    return StructurePreLie(ring, names, mult)


def upper_triangular_2x2(ring: RingSpec) -> StructurePreLie:
    """Upper-triangular 2x2 matrices with basis E11, E12, E22 (associative)."""
    one = ring.one
    mult = {
        (0, 0): {0: one},
        (0, 1): {1: one},
        (1, 2): {1: one},
        (2, 2): {2: one},
    }
    return from_associative(ring, ["E11", "E12", "E22"], mult)


def dual_numbers(ring: RingSpec) -> StructurePreLie:
    """k[eps]/(eps^2) with basis 1, eps (associative and commutative)."""
    one = ring.one
    return from_associative(ring, ["u", "eps"], {(0, 0): {0: one}, (0, 1): {1: one}, (1, 0): {1: one}})


def nilpotent_square(ring: RingSpec) -> StructurePreLie:
    """Two-dimensional algebra with ``e1 o e1 = e2`` and all other products zero."""
    return StructurePreLie(ring, ["e1", "e2"], {(0, 0): {1: ring.one}})


def zero_algebra(ring: RingSpec, dim: int) -> StructurePreLie:
    return StructurePreLie(ring, [f"e{i + 1}" for i in range(dim)], {})


def transport(A: StructurePreLie, mat: Sequence[Sequence[Any]], inv: Sequence[Sequence[Any]], names: Sequence[str] | None = None) -> StructurePreLie:
    """Rewrite ``A`` in the basis ``f_j = sum_i mat[i][j] e_i`` (``inv`` is the inverse matrix)."""
    r = A.ring
    d = A.dim
    table: dict = {}
    for a in range(d):
        for b in range(d):
            # f_a o f_b expanded in e, then converted back to f via inv
            acc: dict = {}
            for i in range(d):
                if r.is_zero(mat[i][a]):
                    continue
                for j in range(d):
                    if r.is_zero(mat[j][b]):
                        continue
                    c = r.mul(mat[i][a], mat[j][b])
                    for k, v in A.product_keys(i, j).items():
                        accumulate(r, acc, k, r.mul(c, v))
            out: dict = {}
            for k, v in acc.items():
                for m in range(d):
                    if not r.is_zero(inv[m][k]):
                        accumulate(r, out, m, r.mul(inv[m][k], v))
            if out:
                table[(a, b)] = out
    new_names = names or [f"f{i + 1}" for i in range(d)]
    return StructurePreLie(r, new_names, table, checked=A.checked)


def random_invertible(ring: RingSpec, d: int, rng: random.Random, steps: int = 12) -> tuple[list[list[Any]], list[list[Any]]]:
    """A random product of elementary matrices and its inverse.

    Over the rationals only integer shears are used, so coefficients stay
    integral; over F_p scalings by units are mixed in.
    """
    one, zero = ring.one, ring.zero
    mat = [[one if i == j else zero for j in range(d)] for i in range(d)]
    inv = [[one if i == j else zero for j in range(d)] for i in range(d)]
    if d == 1:
        if ring.kind != RATIONAL:
            c = ring.from_int(rng.randrange(1, ring.p))
            return [[c]], [[ring.inv(c)]]
        return mat, inv
    for _ in range(steps):
        i, j = rng.sample(range(d), 2)
        if ring.kind == RATIONAL:
            c = ring.from_int(rng.choice([-2, -1, 1, 2]))
        else:
            c = ring.from_int(rng.randrange(1, ring.p))
        # mat <- mat * (I + c E_ij): column j += c * column i
        for row in mat:
            row[j] = ring.add(row[j], ring.mul(c, row[i]))
        # inv <- (I - c E_ij) * inv: row i -= c * row j
        inv[i] = [ring.sub(a, ring.mul(c, b)) for a, b in zip(inv[i], inv[j])]
    return mat, inv


def random_prelie(ring: RingSpec, base: StructurePreLie, rng: random.Random) -> StructurePreLie:
    """A random change of basis of ``base`` (still pre-Lie, generally dense)."""
    mat, inv = random_invertible(ring, base.dim, rng)
    return transport(base, mat, inv)


def random_table(ring: RingSpec, dim: int, rng: random.Random, density: float = 0.6) -> StructurePreLie:
    """A random, unchecked bilinear product table."""
    table: dict = {}
    for i in range(dim):
        for j in range(dim):
            row = {}
            for k in range(dim):
                if rng.random() < density:
                    c = ring.random(rng)
                    if not ring.is_zero(c):
                        row[k] = c
            if row:
                table[(i, j)] = row
    return StructurePreLie(ring, [f"e{i + 1}" for i in range(dim)], table, checked=False)


def non_prelie_control() -> StructurePreLie:
    """The broken F_2 table used as a negative control throughout the suite."""
    r = RingSpec.prime_field(2)
    return StructurePreLie(r, ["e1", "e2"], {(0, 0): {0: 1}, (0, 1): {0: 1}, (1, 0): {1: 1}}, checked=False)
