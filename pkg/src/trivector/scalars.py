"""Exact scalars over the rationals and prime fields F_p.

A :class:`FieldSpec` names the field; a :class:`FieldScalar` is an immutable
value tagged with its field. Prime moduli are restricted to ``p < 2**31``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

MAX_PRIME = 2**31

# bases sufficient for a deterministic Miller-Rabin below 3.4e14
_MR_BASES = (2, 3, 5, 7, 11, 13, 17)

# sample_uniform over Q draws integers from this closed range
RATIONAL_SAMPLE_RANGE = (-5, 5)


class FieldError(ValueError):
    """Base class for field related failures."""


class SpecMismatchError(FieldError):
    pass


class DivisionByZeroError(FieldError, ZeroDivisionError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for small in _MR_BASES:
        if n % small == 0:
            return n == small
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    kind: str
    p: int | None = None

    def __post_init__(self) -> None:
        if self.kind == "rationals":
            if self.p is not None:
                raise FieldError("the rational field takes no modulus")
        elif self.kind == "prime-field":
            if self.p is None or not 2 <= self.p < MAX_PRIME or not is_prime(self.p):
                raise FieldError(f"modulus must be a prime below 2^31, got {self.p}")
        else:
            raise FieldError(f"unknown field kind {self.kind!r}")

    @property
    def is_prime_field(self) -> bool:
        return self.kind == "prime-field"

    @property
    def characteristic(self) -> int:
        return self.p if self.p is not None else 0

    @property
    def token(self) -> str:
        return "Q" if self.p is None else f"Fp:{self.p}"

    def __str__(self) -> str:
        return self.token

    # raw-value helpers, used by the hot loops that skip FieldScalar boxing

    def reduce(self, value: Union[int, Fraction, str]) -> Union[int, Fraction]:
        """Canonical raw representative of an integer, Fraction or ``a/b`` string."""
        if isinstance(value, str):
            value = Fraction(value.strip())
        if self.p is None:
            return Fraction(value)
        if isinstance(value, Fraction):
            num, den = value.numerator % self.p, value.denominator % self.p
            if den == 0:
                raise DivisionByZeroError(f"denominator {value.denominator} vanishes mod {self.p}")
            return num * pow(den, -1, self.p) % self.p
        return int(value) % self.p

    def __call__(self, value: Union[int, Fraction, str, "FieldScalar"]) -> "FieldScalar":
        if isinstance(value, FieldScalar):
            if value.spec == self:
                return value
            if value.spec.p is None:
                return FieldScalar(self, self.reduce(value.value))
            raise SpecMismatchError(f"cannot coerce {value.spec} scalar into {self}")
        return FieldScalar(self, self.reduce(value))

    def zero(self) -> "FieldScalar":
        return self(0)

    def one(self) -> "FieldScalar":
        return self(1)

    def elements(self):
        """All elements of a prime field, in residue order."""
        if self.p is None:
            raise FieldError("the rational field is infinite")
        return [FieldScalar(self, v) for v in range(self.p)]


@lru_cache(maxsize=None)
def prime_field(p: int) -> FieldSpec:
    return FieldSpec("prime-field", p)


QQ = FieldSpec("rationals")
F2 = prime_field(2)


def parse_field(token: str) -> FieldSpec:
    """Parse the ``Q`` / ``Fp:<prime>`` field token."""
    token = token.strip()
    if token == "Q":
        return QQ
    if token.startswith("Fp:"):
        try:
            p = int(token[3:])
        except ValueError:
            raise FieldError(f"bad field token {token!r}") from None
        return prime_field(p)
    raise FieldError(f"bad field token {token!r}")


class FieldScalar:
    """An immutable element of Q or F_p."""

    __slots__ = ("spec", "value")

    def __init__(self, spec: FieldSpec, value: Union[int, Fraction]) -> None:
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("FieldScalar is immutable")

    def _other(self, other) -> Union[int, Fraction]:
        if isinstance(other, FieldScalar):
            if other.spec is not self.spec and other.spec != self.spec:
                raise SpecMismatchError(f"{self.spec} vs {other.spec}")
            return other.value
        if isinstance(other, (int, Fraction)):
            return self.spec.reduce(other)
        return NotImplemented

    def _wrap(self, raw) -> "FieldScalar":
        p = self.spec.p
        return FieldScalar(self.spec, raw % p if p is not None else raw)

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.value - o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(o - self.value)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.value * o)

    __rmul__ = __mul__

    def __neg__(self) -> "FieldScalar":
        return self._wrap(-self.value)

    def inv(self) -> "FieldScalar":
        if not self.value:
            raise DivisionByZeroError(f"inverse of zero in {self.spec}")
        if self.spec.p is None:
            return FieldScalar(self.spec, 1 / self.value)
        return FieldScalar(self.spec, pow(self.value, -1, self.spec.p))

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * FieldScalar(self.spec, o).inv()

    def __pow__(self, e: int) -> "FieldScalar":
        if e < 0:
            return self.inv() ** (-e)
        if self.spec.p is None:
            return FieldScalar(self.spec, self.value**e)
        return FieldScalar(self.spec, pow(self.value, e, self.spec.p))

    def __bool__(self) -> bool:
        return bool(self.value)

    def is_zero(self) -> bool:
        return not self.value

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldScalar):
            return self.spec == other.spec and self.value == other.value
        if isinstance(other, (int, Fraction)):
            try:
                return self.value == self.spec.reduce(other)
            except DivisionByZeroError:
                return False
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.spec, self.value))

    def __int__(self) -> int:
        if self.spec.p is not None:
            return self.value
        if self.value.denominator != 1:
            raise ValueError(f"{self.value} is not an integer")
        return self.value.numerator

    def __str__(self) -> str:
        return str(self.value)

    def __repr__(self) -> str:
        return f"FieldScalar({self.spec.token}, {self.value})"


def add(a: FieldScalar, b: FieldScalar) -> FieldScalar:
    return a + b


def sub(a: FieldScalar, b: FieldScalar) -> FieldScalar:
    return a - b


def mul(a: FieldScalar, b: FieldScalar) -> FieldScalar:
    return a * b


def neg(a: FieldScalar) -> FieldScalar:
    return -a


def inv(a: FieldScalar) -> FieldScalar:
    return a.inv()


def make_rng(seed: int) -> random.Random:
    """A private seeded stream; callers own it and thread it through."""
    return random.Random(seed & (2**64 - 1))


def sample_uniform(spec: FieldSpec, rng: Union[int, random.Random]) -> FieldScalar:
    """Draw one scalar from ``rng`` (a seed or an existing stream).

    Over F_p the draw is uniform. Over Q it is an integer drawn uniformly from
    ``RATIONAL_SAMPLE_RANGE``.
    """
    if isinstance(rng, int):
        rng = make_rng(rng)
    if spec.p is None:
        lo, hi = RATIONAL_SAMPLE_RANGE
        return spec(rng.randint(lo, hi))
    return FieldScalar(spec, rng.randrange(spec.p))
