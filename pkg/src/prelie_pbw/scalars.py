"""Exact coefficient rings: the rationals, prime fields F_p, and truncated
polynomial rings F_p[v1..vk]/(v1^p, ..., vk^p).

Arithmetic lives on :class:`RingSpec`, which operates on *raw* canonical
values so that the linear-combination layer can stay fast:

* rational        -> ``fractions.Fraction``
* prime field     -> ``int`` in ``[0, p)``
* truncated ring  -> ``tuple`` of ``(exponents, residue)`` pairs, sorted by
  exponent vector, residues in ``[1, p)``; the empty tuple is zero.

:class:`Scalar` wraps a raw value together with its ring for the public,
operator-friendly API.
"""
from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable


class RingMismatch(ValueError):
    """Operands live in different coefficient rings."""


class UnsupportedRing(ValueError):
    """The operation is not available for this kind of ring."""


RATIONAL = "rational"
PRIME = "prime"
TRUNCATED = "truncated"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class RingSpec:
    """Description of a coefficient ring together with its raw arithmetic."""

    kind: str
    p: int | None = None
    variables: tuple[str, ...] = ()
    _ops: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        if self.kind == RATIONAL:
            if self.p is not None or self.variables:
                raise ValueError("the rational ring takes no modulus or variables")
        elif self.kind in (PRIME, TRUNCATED):
            if self.p is None or not is_prime(self.p):
                raise ValueError(f"modulus {self.p!r} is not prime")
            if self.kind == PRIME and self.variables:
                raise ValueError("a prime field takes no variables")
            if self.kind == TRUNCATED:
                if not self.variables:
                    raise ValueError("a truncated ring needs at least one variable")
                if len(set(self.variables)) != len(self.variables):
                    raise ValueError("repeated variable name")
                for v in self.variables:
                    if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", v):
                        raise ValueError(f"bad variable name {v!r}")
        else:
            raise ValueError(f"unknown ring kind {self.kind!r}")
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "_ops", _build_ops(self))

    # -- constructors -------------------------------------------------
    @staticmethod
    def rational() -> "RingSpec":
        return RingSpec(RATIONAL)

    @staticmethod
    def prime_field(p: int) -> "RingSpec":
        return RingSpec(PRIME, p)

    @staticmethod
    def truncated(p: int, variables: Iterable[str]) -> "RingSpec":
        return RingSpec(TRUNCATED, p, tuple(variables))

    @staticmethod
    def parse(text: str) -> "RingSpec":
        """Parse ``Q``, ``F5`` / ``F_5`` / ``GF(5)``, or ``F2[a,b,c]``."""
        s = text.strip().replace(" ", "")
        if s in ("Q", "QQ", "rational"):
            return RingSpec.rational()
        m = re.fullmatch(r"(?:F_?|GF\()(\d+)\)?(?:\[([A-Za-z0-9_,]+)\])?", s)
        if not m:
            raise ValueError(f"cannot parse ring {text!r}")
        p = int(m.group(1))
        if m.group(2):
            return RingSpec.truncated(p, m.group(2).split(","))
        return RingSpec.prime_field(p)

    def __str__(self) -> str:
        if self.kind == RATIONAL:
            return "Q"
        if self.kind == PRIME:
            return f"F{self.p}"
        return f"F{self.p}[{','.join(self.variables)}]"

    @property
    def is_field(self) -> bool:
        return self.kind != TRUNCATED

    @property
    def characteristic(self) -> int:
        return 0 if self.kind == RATIONAL else self.p

    # -- raw arithmetic (delegates to the closures built once per ring) --
    @property
    def zero(self) -> Any:
        return self._ops["zero"]

    @property
    def one(self) -> Any:
        return self._ops["one"]

    def from_int(self, n: int) -> Any:
        return self._ops["from_int"](n)

    def add(self, a: Any, b: Any) -> Any:
        return self._ops["add"](a, b)

    def sub(self, a: Any, b: Any) -> Any:
        return self._ops["add"](a, self._ops["neg"](b))

    def neg(self, a: Any) -> Any:
        return self._ops["neg"](a)

    def mul(self, a: Any, b: Any) -> Any:
        return self._ops["mul"](a, b)

    def is_zero(self, a: Any) -> bool:
        return self._ops["is_zero"](a)

    def inv(self, a: Any) -> Any:
        if self.kind == TRUNCATED:
            return _trunc_inv(self, a)
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        if self.kind == RATIONAL:
            return 1 / a
        return pow(a, self.p - 2, self.p)

    def power(self, a: Any, n: int) -> Any:
        out = self.one
        for _ in range(n):
            out = self.mul(out, a)
        return out

    def variable(self, name: str) -> Any:
        if self.kind != TRUNCATED or name not in self.variables:
            raise UnsupportedRing(f"{name!r} is not a variable of {self}")
        exps = tuple(1 if v == name else 0 for v in self.variables)
        return ((exps, 1),)

    def monomial(self, exps: tuple[int, ...]) -> Any:
        if self.kind != TRUNCATED:
            raise UnsupportedRing("monomials need a truncated ring")
        if any(e >= self.p for e in exps):
            return ()
        return ((tuple(exps), 1),)

    def coefficient_of(self, a: Any, exps: tuple[int, ...]) -> int:
        """F_p coordinate of ``a`` along the monomial ``exps``."""
        if self.kind == PRIME:
            return a if not any(exps) else 0
        if self.kind != TRUNCATED:
            raise UnsupportedRing("F_p coordinates need a finite ring")
        for e, c in a:
            if e == exps:
                return c
        return 0

    def random(self, rng: random.Random, *, constant: bool = True, height: int = 5) -> Any:
        if self.kind == RATIONAL:
            return Fraction(rng.randint(-height, height), rng.randint(1, height))
        if self.kind == PRIME:
            return rng.randrange(self.p)
        terms = {}
        for exps in fp_basis_exponents(self):
            if not constant and not any(exps):
                continue
            c = rng.randrange(self.p)
            if c:
                terms[exps] = c
        return tuple(sorted(terms.items()))

    # -- text ---------------------------------------------------------
    def format(self, a: Any) -> str:
        if self.kind == RATIONAL:
            return str(a)
        if self.kind == PRIME:
            return str(a)
        if not a:
            return "0"
        parts = []
        for exps, c in sorted(a, reverse=True):
            factors = []
            for v, e in zip(self.variables, exps):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)

    def parse_scalar(self, text: str) -> Any:
        return _ScalarParser(self, text).parse()

    def scalar(self, value: Any) -> "Scalar":
        if isinstance(value, str):
            return Scalar(self, self.parse_scalar(value))
        if isinstance(value, int):
            return Scalar(self, self.from_int(value))
        if isinstance(value, Fraction) and self.kind == RATIONAL:
            return Scalar(self, value)
        raise TypeError(f"cannot coerce {value!r} into {self}")


def _build_ops(ring: RingSpec) -> dict[str, Callable]:
    if ring.kind == RATIONAL:
        return {
            "zero": Fraction(0),
            "one": Fraction(1),
            "from_int": lambda n: Fraction(n),
            "add": lambda a, b: a + b,
            "neg": lambda a: -a,
            "mul": lambda a, b: a * b,
            "is_zero": lambda a: a == 0,
        }
    p = ring.p
    if ring.kind == PRIME:
        return {
            "zero": 0,
            "one": 1 % p,
            "from_int": lambda n: n % p,
            "add": lambda a, b: (a + b) % p,
            "neg": lambda a: (-a) % p,
            "mul": lambda a, b: (a * b) % p,
            "is_zero": lambda a: a == 0,
        }

    k = len(ring.variables)
    unit = (((0,) * k, 1),)

    def from_int(n: int):
        n %= p
        return (((0,) * k, n),) if n else ()

    def add(a, b):
        if not a:
            return b
        if not b:
            return a
        acc = dict(a)
        for e, c in b:
            s = (acc.get(e, 0) + c) % p
            if s:
                acc[e] = s
            else:
                acc.pop(e, None)
        return tuple(sorted(acc.items()))

    def neg(a):
        return tuple((e, p - c) for e, c in a)

    def mul(a, b):
        if not a or not b:
            return ()
        acc: dict = {}
        for e1, c1 in a:
            for e2, c2 in b:
                e = tuple(x + y for x, y in zip(e1, e2))
                if any(x >= p for x in e):
                    continue
                s = (acc.get(e, 0) + c1 * c2) % p
                if s:
                    acc[e] = s
                else:
                    acc.pop(e, None)
        return tuple(sorted(acc.items()))

    return {
        "zero": (),
        "one": unit,
        "from_int": from_int,
        "add": add,
        "neg": neg,
        "mul": mul,
        "is_zero": lambda a: not a,
    }


def _trunc_inv(ring: RingSpec, a: Any) -> Any:
    # A unit of the local ring is c + n with c a nonzero constant and n
    # nilpotent; invert through the finite geometric series.
    const = ring.coefficient_of(a, (0,) * len(ring.variables))
    if const == 0:
        raise ZeroDivisionError("element is not a unit")
    c_inv = pow(const, ring.p - 2, ring.p)
    u = ring.mul(a, ring.from_int(c_inv))
    n = ring.sub(u, ring.one)
    total, term = ring.one, ring.one
    for _ in range(len(ring.variables) * (ring.p - 1) + 1):
        term = ring.neg(ring.mul(term, n))
        total = ring.add(total, term)
    return ring.mul(total, ring.from_int(c_inv))


def fp_basis_exponents(ring: RingSpec) -> list[tuple[int, ...]]:
    """Exponent vectors of the F_p-basis of ``ring``, in the fixed basis order."""
    if ring.kind == RATIONAL:
        raise UnsupportedRing("the rationals have no finite F_p basis")
    if ring.kind == PRIME:
        return [()]
    return list(itertools.product(range(ring.p), repeat=len(ring.variables)))


def fp_basis(ring: RingSpec) -> list["Scalar"]:
    """The F_p-basis of a finite ring as monomials (``[1]`` for a prime field)."""
    if ring.kind == PRIME:
        return [Scalar(ring, ring.one)]
    return [Scalar(ring, ring.monomial(e)) for e in fp_basis_exponents(ring)]


@dataclass(frozen=True)
class Scalar:
    """An immutable element of a coefficient ring, in canonical form."""

    ring: RingSpec
    value: Any

    def _check(self, other: Any) -> "Scalar":
        if isinstance(other, int):
            return Scalar(self.ring, self.ring.from_int(other))
        if not isinstance(other, Scalar):
            return NotImplemented
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        return other

    def __add__(self, other: Any) -> "Scalar":
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Scalar(self.ring, self.ring.add(self.value, other.value))

    __radd__ = __add__

    def __sub__(self, other: Any) -> "Scalar":
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Scalar(self.ring, self.ring.sub(self.value, other.value))

    def __rsub__(self, other: Any) -> "Scalar":
        return (-self) + other

    def __mul__(self, other: Any) -> "Scalar":
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Scalar(self.ring, self.ring.mul(self.value, other.value))

    __rmul__ = __mul__

    def __neg__(self) -> "Scalar":
        return Scalar(self.ring, self.ring.neg(self.value))

    def __pow__(self, n: int) -> "Scalar":
        return Scalar(self.ring, self.ring.power(self.value, n))

    def inverse(self) -> "Scalar":
        return Scalar(self.ring, self.ring.inv(self.value))

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.value)

    def __str__(self) -> str:
        return self.ring.format(self.value)


def add(a: Scalar, b: Scalar) -> Scalar:
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    return a + b


def mul(a: Scalar, b: Scalar) -> Scalar:
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    return a * b


class _ScalarParser:
    """Recursive descent for ``expr := term (('+'|'-') term)*``,
    ``term := factor ('*' factor)*``, ``factor := int ['/' int] | var ['^' int] | '(' expr ')'``."""

    _token = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(.))")

    def __init__(self, ring: RingSpec, text: str) -> None:
        self.ring = ring
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = self._token.match(text, pos)
            if m.group(0).strip() == "":
                break
            col = m.start(m.lastindex) + 1
            if m.group(1):
                self.tokens.append(("int", m.group(1), col))
            elif m.group(2):
                self.tokens.append(("var", m.group(2), col))
            else:
                self.tokens.append(("op", m.group(3), col))
            pos = m.end()
        self.i = 0

    def _peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _fail(self, msg: str) -> None:
        tok = self._peek()
        col = tok[2] if tok else len(self.text) + 1
        raise ValueError(f"scalar syntax error at column {col}: {msg}")

    def parse(self) -> Any:
        if not self.tokens:
            self._fail("empty scalar")
        value = self._expr()
        if self._peek() is not None:
            self._fail("unexpected token")
        return value

    def _expr(self) -> Any:
        r = self.ring
        sign = 1
        tok = self._peek()
        if tok and tok[0] == "op" and tok[1] in "+-":
            sign = -1 if tok[1] == "-" else 1
            self.i += 1
        value = self._term()
        if sign < 0:
            value = r.neg(value)
        while (tok := self._peek()) and tok[0] == "op" and tok[1] in "+-":
            self.i += 1
            rhs = self._term()
            value = r.add(value, rhs) if tok[1] == "+" else r.sub(value, rhs)
        return value

    def _term(self) -> Any:
        value = self._factor()
        while (tok := self._peek()) and tok[0] == "op" and tok[1] == "*":
            self.i += 1
            value = self.ring.mul(value, self._factor())
        return value

    def _factor(self) -> Any:
        r = self.ring
        tok = self._peek()
        if tok is None:
            self._fail("expected a number, variable or '('")
        kind, text, _ = tok
        if kind == "int":
            self.i += 1
            nxt = self._peek()
            if nxt and nxt[0] == "op" and nxt[1] == "/":
                self.i += 1
                den = self._peek()
                if den is None or den[0] != "int" or int(den[1]) == 0:
                    self._fail("expected a nonzero denominator")
                self.i += 1
                if r.kind == RATIONAL:
                    return Fraction(int(text), int(den[1]))
                return r.mul(r.from_int(int(text)), r.inv(r.from_int(int(den[1]))))
            return r.from_int(int(text))
        if kind == "var":
            if r.kind != TRUNCATED or text not in r.variables:
                self._fail(f"unknown variable {text!r}")
            self.i += 1
            value = r.variable(text)
            nxt = self._peek()
            if nxt and nxt[0] == "op" and nxt[1] == "^":
                self.i += 1
                ex = self._peek()
                if ex is None or ex[0] != "int":
                    self._fail("expected an exponent")
                self.i += 1
                value = r.power(value, int(ex[1]))
            return value
        if text == "(":
            self.i += 1
            value = self._expr()
            close = self._peek()
            if close is None or close[1] != ")":
                self._fail("expected ')'")
            self.i += 1
            return value
        self._fail(f"unexpected {text!r}")
