"""Sparse exterior algebra on k^n.

Basis monomials ``e_S`` are keyed by bitmasks (bit ``i-1`` for index ``i``).
Covectors act by contraction from the left:
``contract(e_i*, e_S) = (-1)^(pos(i, S) - 1) e_{S - i}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .linalg import Matrix, SkewMatrix, inverse
from .scalars import FieldError, FieldScalar, FieldSpec, parse_field

MAX_DIM = 16


class ExteriorError(ValueError):
    pass


class UnsupportedCharacteristicError(ExteriorError):
    pass


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << (i - 1)
    return m


def indices_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def wedge_sign(s: int, t: int) -> int:
    """Sign of ``e_S ^ e_T`` relative to ``e_{S|T}`` for disjoint masks."""
    inversions = 0
    while t:
        low = t & -t
        inversions += (s & ~((low << 1) - 1)).bit_count()
        t ^= low
    return -1 if inversions & 1 else 1


@dataclass(frozen=True, eq=False)
class Multivector:
    n: int
    k: int
    spec: FieldSpec
    terms: Mapping[int, FieldScalar]

    def __post_init__(self) -> None:
        if not 0 <= self.n <= MAX_DIM:
            raise ExteriorError(f"ambient dimension {self.n} outside 0..{MAX_DIM}")
        if not 0 <= self.k <= self.n:
            raise ExteriorError(f"degree {self.k} outside 0..{self.n}")
        top = 1 << self.n
        for m, c in self.terms.items():
            if m >= top or m.bit_count() != self.k:
                raise ExteriorError(f"monomial {indices_of(m)} does not fit degree {self.k} in dim {self.n}")
            if not c:
                raise ExteriorError("zero coefficients must not be stored")

    @classmethod
    def build(cls, n: int, k: int, spec: FieldSpec, raw: Mapping[int, object]) -> "Multivector":
        """Canonicalize a ``mask -> value`` mapping, dropping zeros."""
        terms = {}
        for m, v in raw.items():
            s = spec(v)
            if s:
                terms[m] = s
        return cls(n, k, spec, terms)

    @classmethod
    def from_indices(cls, n: int, spec: FieldSpec, coeffs: Mapping[tuple[int, ...], object]) -> "Multivector":
        """From ``{(i, j, k): c}``; index tuples may be unsorted (sign applied)."""
        if not coeffs:
            raise ExteriorError("degree is ambiguous for an empty mapping; use zero()")
        k = len(next(iter(coeffs)))
        acc: dict[int, FieldScalar] = {}
        for idx, v in coeffs.items():
            if len(idx) != k:
                raise ExteriorError("mixed degrees")
            if len(set(idx)) != k:
                continue
            sign = _perm_sign(idx)
            m = mask_of(idx)
            acc[m] = acc.get(m, spec.zero()) + spec(v) * sign
        return cls.build(n, k, spec, acc)

    @classmethod
    def zero(cls, n: int, k: int, spec: FieldSpec) -> "Multivector":
        return cls(n, k, spec, {})

    @classmethod
    def basis(cls, n: int, spec: FieldSpec, *indices: int) -> "Multivector":
        return cls.from_indices(n, spec, {tuple(indices): 1})

    def coeff(self, *indices: int) -> FieldScalar:
        """Coefficient of ``e_{i1} ^ ... ^ e_{ik}`` in the given index order."""
        if len(set(indices)) != len(indices):
            return self.spec.zero()
        c = self.terms.get(mask_of(indices))
        if c is None:
            return self.spec.zero()
        return c * _perm_sign(indices)

    def items(self):
        """``(indices, coeff)`` pairs in increasing mask order."""
        for m in sorted(self.terms):
            yield indices_of(m), self.terms[m]

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _check(self, other: "Multivector") -> None:
        if self.n != other.n or self.spec != other.spec:
            raise ExteriorError("dimension or field mismatch")

    def __add__(self, other: "Multivector") -> "Multivector":
        self._check(other)
        if self.k != other.k and self.terms and other.terms:
            raise ExteriorError("adding multivectors of different degree")
        k = self.k if self.terms or not other.terms else other.k
        acc = dict(self.terms)
        z = self.spec.zero()
        for m, c in other.terms.items():
            acc[m] = acc.get(m, z) + c
        return Multivector.build(self.n, k, self.spec, acc)

    def __neg__(self) -> "Multivector":
        return Multivector(self.n, self.k, self.spec, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Multivector") -> "Multivector":
        return self + (-other)

    def scale(self, c) -> "Multivector":
        s = self.spec(c)
        return Multivector.build(self.n, self.k, self.spec, {m: v * s for m, v in self.terms.items()})

    def __rmul__(self, c) -> "Multivector":
        return self.scale(c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multivector):
            return NotImplemented
        if self.n != other.n or self.spec != other.spec:
            return False
        if self.terms != other.terms:
            return False
        return self.k == other.k or not self.terms

    def __hash__(self) -> int:
        return hash((self.n, self.k, self.spec, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*e{''.join(map(str, idx))}" for idx, c in self.items()) or "0"
        return f"Multivector(n={self.n}, k={self.k}, {self.spec.token}: {body})"


def _perm_sign(idx: Sequence[int]) -> int:
    inv = sum(1 for a, b in combinations(idx, 2) if a > b)
    return -1 if inv & 1 else 1


@dataclass(frozen=True)
class Covector:
    n: int
    spec: FieldSpec
    coords: tuple[FieldScalar, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != self.n:
            raise ExteriorError("covector length does not match dimension")

    @classmethod
    def of(cls, spec: FieldSpec, coords: Iterable) -> "Covector":
        cs = tuple(spec(c) for c in coords)
        return cls(len(cs), spec, cs)

    @classmethod
    def basis(cls, n: int, spec: FieldSpec, i: int) -> "Covector":
        return cls.of(spec, [int(j == i) for j in range(1, n + 1)])

    def is_zero(self) -> bool:
        return not any(self.coords)


def wedge(a: Multivector, b: Multivector) -> Multivector:
    a._check(b)
    k = a.k + b.k
    if k > a.n:
        raise ExteriorError("degree exceeds ambient dimension")
    acc: dict[int, FieldScalar] = {}
    z = a.spec.zero()
    for s, cs in a.terms.items():
        for t, ct in b.terms.items():
            if s & t:
                continue
            v = cs * ct
            if wedge_sign(s, t) < 0:
                v = -v
            acc[s | t] = acc.get(s | t, z) + v
    return Multivector.build(a.n, k, a.spec, acc)


def contract(x: Covector, a: Multivector) -> Multivector:
    if x.n != a.n or x.spec != a.spec:
        raise ExteriorError("dimension or field mismatch")
    if a.k < 1:
        raise ExteriorError("cannot contract a degree-0 element")
    acc: dict[int, FieldScalar] = {}
    z = a.spec.zero()
    nz = [(i, c) for i, c in enumerate(x.coords) if c]
    for m, c in a.terms.items():
        for i, xi in nz:
            bit = 1 << i
            if not m & bit:
                continue
            v = xi * c
            if (m & (bit - 1)).bit_count() & 1:
                v = -v
            r = m ^ bit
            acc[r] = acc.get(r, z) + v
    return Multivector.build(a.n, a.k - 1, a.spec, acc)


def trilinear_eval(g: Multivector, x: Covector, y: Covector, z: Covector) -> FieldScalar:
    if g.k != 3:
        raise ExteriorError("trilinear evaluation needs a trivector")
    r = contract(z, contract(y, contract(x, g)))
    return r.terms.get(0, g.spec.zero())


def qsquare(a: Multivector) -> Multivector:
    """Characteristic-2 squaring map into degree 2k (sum over lex-ordered pairs)."""
    if a.spec.characteristic != 2:
        raise UnsupportedCharacteristicError("qsquare is defined in characteristic 2 only")
    if 2 * a.k > a.n:
        raise ExteriorError("2k exceeds ambient dimension")
    masks = sorted(a.terms)
    acc: dict[int, int] = {}
    for i, s in enumerate(masks):
        for t in masks[i + 1:]:
            if s & t:
                continue
            acc[s | t] = acc.get(s | t, 0) ^ 1
    return Multivector.build(a.n, 2 * a.k, a.spec, acc)


def complement_dual(b: Multivector) -> Multivector:
    """``delta`` of degree ``n - k`` with ``e_T ^ b = delta_T * e_{1..n}``."""
    full = (1 << b.n) - 1
    acc = {}
    for s, c in b.terms.items():
        t = full ^ s
        acc[t] = c if wedge_sign(t, s) > 0 else -c
    return Multivector(b.n, b.n - b.k, b.spec, acc)


def volume_pair_to_skew(b: Multivector) -> SkewMatrix:
    """Skew ``N`` with ``e_j ^ e_k ^ b = N[j][k] * e_{1..n}`` for ``b`` of degree n-2."""
    if b.k != b.n - 2:
        raise ExteriorError("volume pairing needs degree n-2")
    d = complement_dual(b)
    upper = {}
    for m, c in d.terms.items():
        j, k = indices_of(m)
        upper[(j - 1, k - 1)] = c
    return SkewMatrix.from_upper(b.spec, b.n, upper)


def dualize_6_to_3(b: Multivector) -> Multivector:
    if b.n != 9 or b.k != 6:
        raise ExteriorError("dualize_6_to_3 needs n=9, k=6")
    return complement_dual(b)


def transform(a: Multivector, A: Matrix) -> Multivector:
    """Push ``a`` forward along ``A`` (column ``i`` is the image of ``e_i``)."""
    if A.cols != a.n:
        raise ExteriorError("matrix columns must match the ambient dimension")
    n_out = A.rows
    images: list[list[tuple[int, FieldScalar]]] = []
    for i in range(a.n):
        images.append([(1 << r, A.entries[r][i]) for r in range(n_out) if A.entries[r][i]])
    z = a.spec.zero()
    acc: dict[int, FieldScalar] = {}
    for m, c in a.terms.items():
        partial = {0: c}
        for i in indices_of(m):
            nxt: dict[int, FieldScalar] = {}
            for pm, pc in partial.items():
                for bit, v in images[i - 1]:
                    if pm & bit:
                        continue
                    w = pc * v
                    if (pm & ~((bit << 1) - 1)).bit_count() & 1:
                        w = -w
                    nxt[pm | bit] = nxt.get(pm | bit, z) + w
            partial = nxt
        for pm, pc in partial.items():
            acc[pm] = acc.get(pm, z) + pc
    return Multivector.build(n_out, a.k, a.spec, acc)


def quotient_basis(u: Sequence, spec: FieldSpec) -> Matrix:
    """Basis ``(u/u_piv, e_j for j != piv)`` as columns, ``piv`` the first nonzero coordinate."""
    u = [spec(x) for x in u]
    piv = next((i for i, x in enumerate(u) if x), None)
    if piv is None:
        raise ExteriorError("cannot project along the zero vector")
    scale = u[piv].inv()
    cols = [[x * scale for x in u]]
    for j in range(len(u)):
        if j != piv:
            cols.append([int(r == j) for r in range(len(u))])
    return Matrix.from_rows(spec, zip(*cols))


def quotient_project(g: Multivector, u: Sequence, complement: Sequence[Sequence] | None = None) -> Multivector:
    """Image of ``g`` in the exterior power of ``V / <u>``.

    With no ``complement``, ``u`` is completed by the standard basis vectors at
    the non-pivot positions. An explicit ``complement`` supplies the n-1 vectors
    whose images form the quotient basis instead.
    """
    spec = g.spec
    if len(u) != g.n:
        raise ExteriorError("projection vector has the wrong length")
    if complement is None:
        B = quotient_basis(u, spec)
    else:
        if not any(spec(x) for x in u):
            raise ExteriorError("cannot project along the zero vector")
        cols = [list(u)] + [list(c) for c in complement]
        B = Matrix.from_rows(spec, zip(*cols))
    coords = transform(g, inverse(B))
    acc = {m >> 1: c for m, c in coords.terms.items() if not m & 1}
    return Multivector(g.n - 1, g.k, spec, acc)


class TrivectorParseError(ValueError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_trivector(text: str) -> Multivector:
    """Parse the ``field`` / ``dim`` / ``i j k coeff`` text format."""
    lines = [(no, ln.strip()) for no, ln in enumerate(text.splitlines(), 1)]
    lines = [(no, ln) for no, ln in lines if ln and not ln.startswith("#")]
    if len(lines) < 2:
        raise TrivectorParseError("expected 'field' and 'dim' header lines")
    no, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != "field":
        raise TrivectorParseError("expected 'field <Q|Fp:p>'", no)
    try:
        spec = parse_field(parts[1])
    except FieldError as exc:
        raise TrivectorParseError(str(exc), no) from None
    no, head = lines[1]
    parts = head.split()
    if len(parts) != 2 or parts[0] != "dim" or not parts[1].isdigit():
        raise TrivectorParseError("expected 'dim <n>'", no)
    n = int(parts[1])
    if not 3 <= n <= MAX_DIM:
        raise TrivectorParseError(f"dimension {n} outside 3..{MAX_DIM}", no)
    acc: dict[int, FieldScalar] = {}
    for no, ln in lines[2:]:
        parts = ln.split()
        if len(parts) != 4:
            raise TrivectorParseError("expected '<i> <j> <k> <coeff>'", no)
        try:
            i, j, k = (int(x) for x in parts[:3])
            c = spec(Fraction(parts[3]))
        except (ValueError, ZeroDivisionError) as exc:
            raise TrivectorParseError(f"bad entry: {exc}", no) from None
        if not 1 <= i < j < k <= n:
            raise TrivectorParseError(f"indices must satisfy 1 <= i < j < k <= {n}", no)
        m = mask_of((i, j, k))
        acc[m] = acc.get(m, spec.zero()) + c
    return Multivector.build(n, 3, spec, acc)


def format_trivector(g: Multivector) -> str:
    if g.k != 3:
        raise ExteriorError("only trivectors have a text format")
    out = [f"field {g.spec.token}", f"dim {g.n}"]
    for idx, c in g.items():
        out.append(f"{idx[0]} {idx[1]} {idx[2]} {c}")
    return "\n".join(out) + "\n"


def change_field(g: Multivector, spec: FieldSpec) -> Multivector:
    """Reduce a rational multivector into ``spec`` (identity if already there)."""
    if g.spec == spec:
        return g
    if g.spec.p is not None:
        raise FieldError(f"cannot move a {g.spec} multivector into {spec}")
    return Multivector.build(g.n, g.k, spec, {m: spec.reduce(c.value) for m, c in g.terms.items()})
