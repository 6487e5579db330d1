"""Sparse multivariate polynomials over Q or F_p.

Monomials are exponent tuples of length ``nvars``. Printing uses graded-lex
order (higher total degree first, then lexicographically larger exponent
tuples first), e.g. ``3 x1^2 x3 + 6 x2 + 1``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .scalars import FieldScalar, FieldSpec


class PolyError(ValueError):
    pass


class DivisibilityError(PolyError):
    def __init__(self, message: str, remainder: "MPoly") -> None:
        super().__init__(message)
        self.remainder = remainder


class MPoly:
    __slots__ = ("nvars", "spec", "terms")

    def __init__(self, nvars: int, spec: FieldSpec, terms: Mapping[tuple[int, ...], FieldScalar] | None = None) -> None:
        self.nvars = nvars
        self.spec = spec
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    @classmethod
    def var(cls, nvars: int, spec: FieldSpec, i: int) -> "MPoly":
        """The variable ``x_i`` (1-based)."""
        e = tuple(int(j == i - 1) for j in range(nvars))
        return cls(nvars, spec, {e: spec.one()})

    @classmethod
    def const(cls, nvars: int, spec: FieldSpec, c) -> "MPoly":
        return cls(nvars, spec, {(0,) * nvars: spec(c)})

    @classmethod
    def linear(cls, spec: FieldSpec, coeffs: Sequence) -> "MPoly":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            terms[tuple(int(j == i) for j in range(n))] = spec(c)
        return cls(n, spec, terms)

    def _check(self, other: "MPoly") -> None:
        if self.nvars != other.nvars or self.spec != other.spec:
            raise PolyError("polynomial ring mismatch")

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "MPoly") -> "MPoly":
        self._check(other)
        acc = dict(self.terms)
        for e, c in other.terms.items():
            prev = acc.get(e)
            acc[e] = c if prev is None else prev + c
        return MPoly(self.nvars, self.spec, acc)

    def __neg__(self) -> "MPoly":
        return MPoly(self.nvars, self.spec, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "MPoly") -> "MPoly":
        self._check(other)
        acc = dict(self.terms)
        for e, c in other.terms.items():
            prev = acc.get(e)
            acc[e] = -c if prev is None else prev - c
        return MPoly(self.nvars, self.spec, acc)

    def __mul__(self, other) -> "MPoly":
        if not isinstance(other, MPoly):
            s = self.spec(other)
            return MPoly(self.nvars, self.spec, {e: c * s for e, c in self.terms.items()})
        self._check(other)
        acc: dict[tuple[int, ...], FieldScalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = c1 * c2
                prev = acc.get(e)
                acc[e] = v if prev is None else prev + v
        return MPoly(self.nvars, self.spec, acc)

    def __rmul__(self, other) -> "MPoly":
        return self * other

    def __pow__(self, k: int) -> "MPoly":
        out = MPoly.const(self.nvars, self.spec, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.spec == other.spec and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, self.spec, frozenset(self.terms.items())))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if d is not None:
            return degs <= {d}
        return len(degs) <= 1

    def eval(self, point: Sequence) -> FieldScalar:
        if len(point) != self.nvars:
            raise PolyError("point has the wrong number of coordinates")
        xs = [self.spec(v) for v in point]
        total = self.spec.zero()
        for e, c in self.terms.items():
            v = c
            for x, k in zip(xs, e):
                if k:
                    v = v * x**k
            total = total + v
        return total

    def derivative(self, i: int) -> "MPoly":
        """Formal partial derivative in ``x_i`` (1-based)."""
        j = i - 1
        acc = {}
        for e, c in self.terms.items():
            k = e[j]
            if k:
                d = list(e)
                d[j] = k - 1
                acc[tuple(d)] = c * k
        return MPoly(self.nvars, self.spec, acc)

    def gradient(self) -> list["MPoly"]:
        return [self.derivative(i) for i in range(1, self.nvars + 1)]

    def reduce_mod(self, spec: FieldSpec) -> "MPoly":
        """Reduce a rational polynomial into a prime field."""
        if self.spec.p is not None:
            raise PolyError("only rational polynomials can be reduced")
        return MPoly(self.nvars, spec, {e: spec(c.value) for e, c in self.terms.items()})

    def sorted_terms(self) -> list[tuple[tuple[int, ...], FieldScalar]]:
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"MPoly({self.nvars}, {self.spec.token}, {format_poly(self)})"


def add(f: MPoly, g: MPoly) -> MPoly:
    return f + g


def mul(f: MPoly, g: MPoly) -> MPoly:
    return f * g


def evaluate(f: MPoly, point: Sequence) -> FieldScalar:
    return f.eval(point)


def gradient(f: MPoly) -> list[MPoly]:
    return f.gradient()


def divide_exact(f: MPoly, ell: MPoly) -> MPoly:
    """Exact quotient ``f / ell`` for a nonzero linear form ``ell``.

    Dividing by a single variable shifts exponents. A general linear form is
    handled by division along its leading variable in lex order.
    """
    f._check(ell)
    if ell.is_zero() or not ell.is_homogeneous(1):
        raise PolyError("divisor must be a nonzero linear form")
    n = f.nvars
    lead_e = max(ell.terms)
    lead_var = lead_e.index(1)
    lead_inv = ell.terms[lead_e].inv()
    if len(ell.terms) == 1:
        quot, rem = {}, {}
        for e, c in f.terms.items():
            if e[lead_var]:
                d = list(e)
                d[lead_var] -= 1
                quot[tuple(d)] = c * lead_inv
            else:
                rem[e] = c
        if rem:
            raise DivisibilityError("not divisible", MPoly(n, f.spec, rem))
        return MPoly(n, f.spec, quot)
    rest = f
    quot = MPoly(n, f.spec)
    while True:
        hits = [e for e in rest.terms if e[lead_var]]
        if not hits:
            break
        e = max(hits)
        d = list(e)
        d[lead_var] -= 1
        t = MPoly(n, f.spec, {tuple(d): rest.terms[e] * lead_inv})
        quot = quot + t
        rest = rest - t * ell
    if rest:
        raise DivisibilityError("not divisible", rest)
    return quot


def _format_coeff(c: FieldScalar) -> str:
    v = c.value
    if isinstance(v, Fraction) and v.denominator == 1:
        return str(v.numerator)
    return str(v)


def format_poly(f: MPoly) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for e, c in f.sorted_terms():
        bits = [_format_coeff(c)]
        for i, k in enumerate(e, 1):
            if k == 1:
                bits.append(f"x{i}")
            elif k > 1:
                bits.append(f"x{i}^{k}")
        parts.append(" ".join(bits))
    return " + ".join(parts)


_TERM_VAR = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def parse_poly(text: str, nvars: int, spec: FieldSpec) -> MPoly:
    """Inverse of :func:`format_poly`."""
    text = text.strip()
    if text == "0":
        return MPoly(nvars, spec)
    acc: dict[tuple[int, ...], FieldScalar] = {}
    for chunk in text.split(" + "):
        toks = chunk.split()
        if not toks:
            raise PolyError(f"empty term in {text!r}")
        try:
            c = spec(Fraction(toks[0]))
        except ValueError:
            raise PolyError(f"bad coefficient {toks[0]!r}") from None
        e = [0] * nvars
        for tok in toks[1:]:
            m = _TERM_VAR.match(tok)
            if not m or not 1 <= int(m.group(1)) <= nvars:
                raise PolyError(f"bad variable token {tok!r}")
            e[int(m.group(1)) - 1] += int(m.group(2) or 1)
        key = tuple(e)
        acc[key] = acc[key] + c if key in acc else c
    return MPoly(nvars, spec, acc)


def monomials(f: MPoly) -> Iterable[tuple[int, ...]]:
    return (e for e, _ in f.sorted_terms())
