"""Free modules over the coefficient rings.

``LinComb`` is the single container for elements of every algebra in the
package: a finite map from opaque, totally ordered basis keys to nonzero raw
coefficients.  Tensor words are plain tuples (order matters), symmetric
monomials are sorted tuples.  The F_p linear algebra at the bottom of the file
(row reduction and span membership) is used to decide questions about modules
over the finite truncated rings by flattening them to F_p-vector spaces.
"""
from __future__ import annotations

import itertools
from typing import Any, Callable, Hashable, Iterable, Iterator, Sequence

from .scalars import PRIME, RATIONAL, RingMismatch, RingSpec, Scalar, UnsupportedRing, fp_basis_exponents


class UnknownBasisKey(KeyError):
    pass


class DimensionMismatch(ValueError):
    pass


class LinComb:
    """Immutable formal linear combination ``sum c_k * k`` with nonzero ``c_k``."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: RingSpec, terms: dict | None = None, *, _clean: bool = False) -> None:
        self.ring = ring
        if terms is None:
            self._terms = {}
        elif _clean:
            self._terms = terms
        else:
            is_zero = ring.is_zero
            self._terms = {k: c for k, c in terms.items() if not is_zero(c)}
        self._hash = None

    # -- construction ---------------------------------------------------
    @classmethod
    def zero(cls, ring: RingSpec) -> "LinComb":
        return cls(ring)

    @classmethod
    def basis(cls, ring: RingSpec, key: Hashable, coeff: Any = None) -> "LinComb":
        c = ring.one if coeff is None else coeff
        if ring.is_zero(c):
            return cls(ring)
        return cls(ring, {key: c}, _clean=True)

    @classmethod
    def from_pairs(cls, ring: RingSpec, pairs: Iterable[tuple[Hashable, Any]]) -> "LinComb":
        acc: dict = {}
        for k, c in pairs:
            accumulate(ring, acc, k, c)
        return cls(ring, acc, _clean=True)

    # -- access -----------------------------------------------------------
    @property
    def terms(self) -> dict:
        return self._terms

    def items(self):
        return self._terms.items()

    def keys(self):
        return self._terms.keys()

    def __iter__(self) -> Iterator:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __contains__(self, key: Hashable) -> bool:
        return key in self._terms

    def coeff(self, key: Hashable) -> Any:
        return self._terms.get(key, self.ring.zero)

    def scalar(self, key: Hashable) -> Scalar:
        return Scalar(self.ring, self.coeff(key))

    def is_zero(self) -> bool:
        return not self._terms

    def sorted_items(self) -> list:
        return sorted(self._terms.items(), key=lambda kv: kv[0])

    # -- arithmetic --------------------------------------------------------
    def _same_ring(self, other: "LinComb") -> None:
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other: "LinComb") -> "LinComb":
        self._same_ring(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            accumulate(self.ring, acc, k, c)
        return LinComb(self.ring, acc, _clean=True)

    def __sub__(self, other: "LinComb") -> "LinComb":
        return self + (-other)

    def __neg__(self) -> "LinComb":
        neg = self.ring.neg
        return LinComb(self.ring, {k: neg(c) for k, c in self._terms.items()}, _clean=True)

    def scale(self, c: Any) -> "LinComb":
        if isinstance(c, Scalar):
            if c.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {c.ring}")
            c = c.value
        elif isinstance(c, int):
            c = self.ring.from_int(c)
        mul = self.ring.mul
        return LinComb(self.ring, {k: mul(c, v) for k, v in self._terms.items()})

    def __rmul__(self, c: Any) -> "LinComb":
        return self.scale(c)

    def map_keys(self, f: Callable[[Hashable], Hashable]) -> "LinComb":
        return LinComb.from_pairs(self.ring, ((f(k), c) for k, c in self._terms.items()))

    def filter(self, pred: Callable[[Hashable], bool]) -> "LinComb":
        return LinComb(self.ring, {k: c for k, c in self._terms.items() if pred(k)}, _clean=True)

    # -- comparison --------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinComb):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        body = " + ".join(f"{self.ring.format(c)}*{k!r}" for k, c in self.sorted_items())
        return f"LinComb[{self.ring}]({body or '0'})"

    # -- serialization -------------------------------------------------------
    def to_json(self, key_to_json: Callable[[Hashable], Any] = lambda k: k) -> dict:
        return {
            "ring": str(self.ring),
            "terms": [{"coeff": self.ring.format(c), "key": key_to_json(k)} for k, c in self.sorted_items()],
        }

    @classmethod
    def from_json(cls, data: dict, key_from_json: Callable[[Any], Hashable] = lambda k: k) -> "LinComb":
        ring = RingSpec.parse(data["ring"])
        return cls.from_pairs(ring, ((key_from_json(t["key"]), ring.parse_scalar(t["coeff"])) for t in data["terms"]))


def accumulate(ring: RingSpec, acc: dict, key: Hashable, c: Any) -> None:
    """In-place ``acc[key] += c`` that purges zeros."""
    old = acc.get(key)
    if old is None:
        if not ring.is_zero(c):
            acc[key] = c
        return
    s = ring.add(old, c)
    if ring.is_zero(s):
        del acc[key]
    else:
        acc[key] = s


def lincomb_add(x: LinComb, y: LinComb) -> LinComb:
    return x + y


def lincomb_scale(x: LinComb, c: Any) -> LinComb:
    return x.scale(c)


def bilinear(
    x: LinComb,
    y: LinComb,
    op: Callable[[Hashable, Hashable], LinComb | dict],
) -> LinComb:
    """Extend ``op`` on basis keys bilinearly to ``x`` and ``y``."""
    ring = x.ring
    x._same_ring(y)
    acc: dict = {}
    mul = ring.mul
    for kx, cx in x.items():
        for ky, cy in y.items():
            out = op(kx, ky)
            terms = out.terms if isinstance(out, LinComb) else out
            if not terms:
                continue
            c = mul(cx, cy)
            for k, v in terms.items():
                accumulate(ring, acc, k, mul(c, v))
    return LinComb(ring, acc, _clean=True)


def linear(x: LinComb, op: Callable[[Hashable], LinComb | dict]) -> LinComb:
    """Extend ``op`` on basis keys linearly."""
    ring = x.ring
    acc: dict = {}
    mul = ring.mul
    for k, c in x.items():
        out = op(k)
        terms = out.terms if isinstance(out, LinComb) else out
        for k2, v in terms.items():
            accumulate(ring, acc, k2, mul(c, v))
    return LinComb(ring, acc, _clean=True)


def tensor(x: LinComb, y: LinComb) -> LinComb:
    """``x (x) y`` with pair keys."""
    return bilinear(x, y, lambda a, b: {(a, b): x.ring.one})


# -- words and monomials ------------------------------------------------------

def sym_monomial(factors: Iterable) -> tuple:
    """Canonical symmetric monomial: the factors sorted ascending."""
    return tuple(sorted(factors))


def sym_product(a: tuple, b: tuple) -> tuple:
    return tuple(sorted(a + b))


def sub_multisets(m: tuple) -> list[tuple[tuple, tuple, int]]:
    """All splittings ``m = a * b`` of a sorted monomial with multiplicities.

    Returns ``(a, b, count)`` where ``count`` is the number of ways of choosing
    the positions of ``a`` inside ``m`` (a product of binomials).
    """
    groups: list[tuple[Any, int]] = []
    for key, grp in itertools.groupby(m):
        groups.append((key, len(list(grp))))
    out = []
    for choice in itertools.product(*(range(n + 1) for _, n in groups)):
        a: list = []
        b: list = []
        count = 1
        for (key, n), j in zip(groups, choice):
            a.extend([key] * j)
            b.extend([key] * (n - j))
            count *= _binom(n, j)
        out.append((tuple(a), tuple(b), count))
    return out


def _binom(n: int, k: int) -> int:
    from math import comb

    return comb(n, k)


def unshuffles(word: Sequence) -> Iterator[tuple[tuple, tuple, tuple[int, ...]]]:
    """All splittings of ``word`` into two subwords, keeping relative order.

    Yields ``(left, right, positions_of_left)``; the positions identify the
    splitting, so repeated letters give repeated terms.
    """
    n = len(word)
    for r in range(n + 1):
        for pos in itertools.combinations(range(n), r):
            chosen = set(pos)
            left = tuple(word[i] for i in pos)
            right = tuple(word[i] for i in range(n) if i not in chosen)
            yield left, right, pos


# -- F_p linear algebra -------------------------------------------------------

def _ring_p(ring: RingSpec) -> int:
    if ring.kind == RATIONAL:
        raise UnsupportedRing("F_p flattening needs a finite ring")
    return ring.p


def flatten_to_fp(x: LinComb, basis_order: Sequence[Hashable]) -> list[int]:
    """Coordinates of ``x`` over F_p: one block of ``|fp_basis|`` entries per key."""
    ring = x.ring
    _ring_p(ring)
    monos = fp_basis_exponents(ring)
    index = {k: i for i, k in enumerate(basis_order)}
    width = len(monos)
    vec = [0] * (len(basis_order) * width)
    for key, c in x.items():
        if key not in index:
            raise UnknownBasisKey(key)
        base = index[key] * width
        for j, e in enumerate(monos):
            vec[base + j] = ring.coefficient_of(c, e)
    return vec


def unflatten_from_fp(ring: RingSpec, vec: Sequence[int], basis_order: Sequence[Hashable]) -> LinComb:
    """Inverse of :func:`flatten_to_fp`."""
    monos = fp_basis_exponents(ring)
    width = len(monos)
    if len(vec) != width * len(basis_order):
        raise DimensionMismatch(f"vector of length {len(vec)} for {len(basis_order)} keys")
    acc: dict = {}
    for i, key in enumerate(basis_order):
        c = ring.zero
        for j, e in enumerate(monos):
            v = vec[i * width + j] % ring.p
            if v:
                term = ring.from_int(v) if ring.kind == PRIME else ring.mul(ring.from_int(v), ring.monomial(e))
                c = ring.add(c, term)
        if not ring.is_zero(c):
            acc[key] = c
    return LinComb(ring, acc, _clean=True)


class FpVectorSpace:
    """A subspace of ``F_p^n`` held as a reduced row-echelon basis.

    Rows are bit-packed Python integers when ``p == 2`` and lists of residues
    otherwise.
    """

    def __init__(self, p: int, n: int, generators: Iterable[Sequence[int]] = ()) -> None:
        self.p = p
        self.n = n
        # pivot column -> row; rows are kept fully reduced against each other
        self._rows: dict[int, Any] = {}
        for g in generators:
            self.add(g)

    # bit layout for p == 2: column j is bit (n - 1 - j) so ints sort like rows
    def _pack(self, v: Sequence[int]) -> Any:
        if len(v) != self.n:
            raise DimensionMismatch(f"expected length {self.n}, got {len(v)}")
        if self.p == 2:
            out = 0
            for x in v:
                out = (out << 1) | (x & 1)
            return out
        return [x % self.p for x in v]

    def _pivot(self, row: Any) -> int | None:
        if self.p == 2:
            return None if row == 0 else self.n - row.bit_length()
        for j, x in enumerate(row):
            if x:
                return j
        return None

    def _reduce(self, row: Any) -> Any:
        p = self.p
        if p == 2:
            for col, r in self._rows.items():
                if (row >> (self.n - 1 - col)) & 1:
                    row ^= r
            return row
        row = list(row)
        for col, r in self._rows.items():
            c = row[col]
            if c:
                for j in range(col, self.n):
                    if r[j]:
                        row[j] = (row[j] - c * r[j]) % p
        return row

    def add(self, v: Sequence[int]) -> bool:
        """Insert a generator; returns True if the rank grew."""
        row = self._reduce(self._pack(v))
        col = self._pivot(row)
        if col is None:
            return False
        p = self.p
        if p != 2:
            inv = pow(row[col], p - 2, p)
            row = [(x * inv) % p for x in row]
        # back-substitute so every stored row has zeros in the new pivot column
        for c2, r in list(self._rows.items()):
            if p == 2:
                if (r >> (self.n - 1 - col)) & 1:
                    self._rows[c2] = r ^ row
            else:
                f = r[col]
                if f:
                    self._rows[c2] = [(a - f * b) % p for a, b in zip(r, row)]
        self._rows[col] = row
        return True

    @property
    def rank(self) -> int:
        return len(self._rows)

    def contains(self, v: Sequence[int]) -> bool:
        return self._pivot(self._reduce(self._pack(v))) is None

    def basis(self) -> list[list[int]]:
        """Reduced row-echelon basis, rows ordered by pivot column."""
        out = []
        for col in sorted(self._rows):
            r = self._rows[col]
            if self.p == 2:
                out.append([(r >> (self.n - 1 - j)) & 1 for j in range(self.n)])
            else:
                out.append(list(r))
        return out


def span_membership(space: FpVectorSpace, v: Sequence[int]) -> bool:
    return space.contains(v)


def rank_over_field(ring: RingSpec, rows: Sequence[Sequence[Any]]) -> int:
    """Rank of a dense matrix of raw scalars over a field (Q or F_p)."""
    if not ring.is_field:
        raise UnsupportedRing("rank needs a field")
    mat = [list(r) for r in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(mat)) if not ring.is_zero(mat[i][col])), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = ring.inv(mat[rank][col])
        mat[rank] = [ring.mul(inv, x) for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and not ring.is_zero(mat[i][col]):
                f = mat[i][col]
                mat[i] = [ring.sub(a, ring.mul(f, b)) for a, b in zip(mat[i], mat[rank])]
        rank += 1
    return rank
