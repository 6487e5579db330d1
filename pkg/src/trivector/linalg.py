"""Exact dense linear algebra over Q and F_p.

Elimination runs on raw values (ints mod p, or Fractions) and results are
boxed back into :class:`~trivector.scalars.FieldScalar`. The Pfaffian works on
any commutative ring whose elements support ``+``, ``*``, unary ``-`` and
truthiness, so the same routine expands polynomial matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .scalars import FieldScalar, FieldSpec


MAX_BATCH_PRIME = 1 << 16


class LinalgError(ValueError):
    pass


class NotSkewError(LinalgError):
    pass


@dataclass(frozen=True)
class Matrix:
    spec: FieldSpec
    entries: tuple[tuple[FieldScalar, ...], ...]

    @classmethod
    def from_rows(cls, spec: FieldSpec, rows: Iterable[Iterable]) -> "Matrix":
        return cls(spec, tuple(tuple(spec(v) for v in row) for row in rows))

    @classmethod
    def zeros(cls, spec: FieldSpec, rows: int, cols: int) -> "Matrix":
        z = spec.zero()
        return cls(spec, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, spec: FieldSpec, n: int) -> "Matrix":
        return cls.from_rows(spec, [[int(i == j) for j in range(n)] for i in range(n)])

    def __post_init__(self) -> None:
        widths = {len(r) for r in self.entries}
        if len(widths) > 1:
            raise LinalgError("ragged matrix")

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __getitem__(self, ij: tuple[int, int]) -> FieldScalar:
        i, j = ij
        return self.entries[i][j]

    def raw(self) -> list[list]:
        return [[x.value for x in row] for row in self.entries]

    def transpose(self) -> "Matrix":
        return Matrix(self.spec, tuple(zip(*self.entries)) if self.entries else ())

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise LinalgError("shape mismatch in product")
        cols = list(zip(*other.entries))
        z = self.spec.zero()
        out = []
        for row in self.entries:
            out.append(tuple(sum((a * b for a, b in zip(row, col)), z) for col in cols))
        return Matrix(self.spec, tuple(out))

    def apply(self, vec: Sequence[FieldScalar]) -> list[FieldScalar]:
        z = self.spec.zero()
        return [sum((a * b for a, b in zip(row, vec)), z) for row in self.entries]

    def __str__(self) -> str:
        return "\n".join(" ".join(str(x) for x in row) for row in self.entries)


class SkewMatrix(Matrix):
    """Square matrix with ``S.T == -S`` and an explicitly zero diagonal."""

    def __post_init__(self) -> None:
        super().__post_init__()
        m = len(self.entries)
        if any(len(r) != m for r in self.entries):
            raise NotSkewError("skew matrix must be square")
        for i in range(m):
            if self.entries[i][i]:
                raise NotSkewError(f"nonzero diagonal entry at {i + 1}")
            for j in range(i + 1, m):
                if self.entries[i][j] != -self.entries[j][i]:
                    raise NotSkewError(f"entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) are not opposite")

    @classmethod
    def from_upper(cls, spec: FieldSpec, m: int, upper: dict[tuple[int, int], object]) -> "SkewMatrix":
        """Build from 0-based ``(i, j) -> value`` entries with ``i < j``."""
        z = spec.zero()
        rows = [[z] * m for _ in range(m)]
        for (i, j), v in upper.items():
            s = spec(v)
            rows[i][j] = s
            rows[j][i] = -s
        return cls(spec, tuple(tuple(r) for r in rows))

    @property
    def size(self) -> int:
        return len(self.entries)


def _raw_ops(spec: FieldSpec):
    p = spec.p
    if p is None:
        return (lambda x: x), (lambda x: 1 / x)
    return (lambda x: x % p), (lambda x: pow(x, -1, p))


def _rref_raw(rows: list[list], spec: FieldSpec) -> tuple[list[list], list[int]]:
    norm, inverse = _raw_ops(spec)
    work = [list(r) for r in rows]
    pivots: list[int] = []
    nrows = len(work)
    ncols = len(work[0]) if work else 0
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if work[i][c]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        s = inverse(work[r][c])
        work[r] = [norm(x * s) for x in work[r]]
        pr = work[r]
        for i in range(nrows):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [norm(a - f * b) for a, b in zip(work[i], pr)]
        pivots.append(c)
        r += 1
    return work, pivots


def _box(spec: FieldSpec, raw_rows: list[list]) -> Matrix:
    if spec.p is None:
        return Matrix(spec, tuple(tuple(FieldScalar(spec, Fraction(x)) for x in row) for row in raw_rows))
    return Matrix(spec, tuple(tuple(FieldScalar(spec, x) for x in row) for row in raw_rows))


def rref(M: Matrix) -> Matrix:
    out, _ = _rref_raw(M.raw(), M.spec)
    return _box(M.spec, out)


def rank(M: Matrix) -> int:
    if not M.entries:
        return 0
    return len(_rref_raw(M.raw(), M.spec)[1])


def kernel(M: Matrix) -> list[list[FieldScalar]]:
    """Right kernel basis, one vector per free column in increasing order.

    The vector for free column ``f`` has a 1 at ``f``, zeros at the other free
    columns and ``-rref[r][f]`` at pivot column ``r``.
    """
    spec = M.spec
    ncols = M.cols
    red, pivots = _rref_raw(M.raw(), spec) if M.entries else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        vec = [0] * ncols
        vec[f] = 1
        for r, c in enumerate(pivots):
            vec[c] = -red[r][f]
        basis.append([spec(v) for v in vec])
    return basis


def det(M: Matrix) -> FieldScalar:
    if M.rows != M.cols:
        raise LinalgError("determinant of a non-square matrix")
    spec = M.spec
    norm, inverse = _raw_ops(spec)
    work = M.raw()
    n = len(work)
    acc = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if work[i][c]), None)
        if piv is None:
            return spec.zero()
        if piv != c:
            work[c], work[piv] = work[piv], work[c]
            acc = -acc
        acc = norm(acc * work[c][c])
        s = inverse(work[c][c])
        for i in range(c + 1, n):
            if work[i][c]:
                f = norm(work[i][c] * s)
                work[i] = [norm(a - f * b) for a, b in zip(work[i], work[c])]
    return spec(acc)


def inverse(M: Matrix) -> Matrix:
    n = M.rows
    if n != M.cols:
        raise LinalgError("inverse of a non-square matrix")
    aug = [row + [int(i == j) for j in range(n)] for i, row in enumerate(M.raw())]
    red, pivots = _rref_raw(aug, M.spec)
    if pivots[:n] != list(range(n)):
        raise LinalgError("matrix is singular")
    return _box(M.spec, [row[n:] for row in red])


def pfaffian_table(entries: Sequence[Sequence], zero, one) -> Callable[[int], object]:
    """Memoized Pfaffian of principal submatrices, keyed by index bitmask.

    Expands along the smallest remaining index:
    ``Pf(S) = sum_{t>=2} (-1)^t S[r1][rt] Pf(S without r1, rt)``.
    Division free, so it works in characteristic 2 and over polynomial rings.
    """
    memo: dict[int, object] = {0: one}

    def pf(mask: int):
        hit = memo.get(mask)
        if hit is not None:
            return hit
        if mask.bit_count() % 2:
            memo[mask] = zero
            return zero
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        total = zero
        sign = 1
        bits = rest
        row = entries[i]
        while bits:
            j = (bits & -bits).bit_length() - 1
            bits &= bits - 1
            e = row[j]
            if e:
                term = e * pf(rest & ~(1 << j))
                total = total + term if sign > 0 else total - term
            sign = -sign
        memo[mask] = total
        return total

    return pf


def pfaffian(S: SkewMatrix) -> FieldScalar:
    """Pfaffian of a skew matrix; zero for odd size."""
    m = S.size
    if m % 2:
        return S.spec.zero()
    return pfaffian_table(S.entries, S.spec.zero(), S.spec.one())((1 << m) - 1)


def sub_pfaffians_signed(entries: Sequence[Sequence], m: int, zero, one) -> list:
    """``[(-1)^(j+1) Pf(S with row/col j removed)]`` for 1-based ``j``."""
    pf = pfaffian_table(entries, zero, one)
    full = (1 << m) - 1
    out = []
    for j in range(m):
        v = pf(full & ~(1 << j))
        out.append(v if j % 2 == 0 else -v)
    return out


def sub_pfaffian_kernel(S: SkewMatrix) -> list[FieldScalar]:
    """Kernel vector of an odd skew matrix built from its signed sub-Pfaffians."""
    m = S.size
    if m % 2 == 0:
        raise LinalgError("sub-Pfaffian kernel needs odd size")
    return sub_pfaffians_signed(S.entries, m, S.spec.zero(), S.spec.one())


def batch_rank_mod_p(mats: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a stack of integer matrices over F_p.

    ``mats`` has shape ``(N, r, c)``. Elimination runs column by column on all
    matrices at once; a row that has served as pivot is never chosen again, so
    no row swaps are needed.
    """
    if p >= MAX_BATCH_PRIME:
        raise LinalgError(f"batched elimination supports p < {MAX_BATCH_PRIME}")
    work = np.array(mats, dtype=np.int64, copy=True) % p
    n, nr, nc = work.shape
    used = np.zeros((n, nr), dtype=bool)
    ranks = np.zeros(n, dtype=np.int64)
    idx = np.arange(n)
    inv_table = np.array([0] + [pow(a, -1, p) for a in range(1, p)], dtype=np.int64)
    for c in range(nc):
        cand = (work[:, :, c] != 0) & ~used
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = np.argmax(cand, axis=1)
        pinv = inv_table[work[idx, piv, c]] * has
        pivot_rows = work[idx, piv, :] * pinv[:, None] % p
        factors = work[:, :, c].copy()
        factors[idx, piv] = 0
        factors *= has[:, None]
        work -= factors[:, :, None] * pivot_rows[:, None, :]
        work %= p
        used[idx, piv] |= has
        ranks += has
    return ranks
