"""Invariant theory of trivectors on k^8.

Contents: the trace trilinear form on pgl_3, its rank test, the infinitesimal
stabilizer dimension, the brute-force instability oracle over F_2 and F_3,
the one-parameter-subgroup weight test, and the characteristic-2
hyperdiscriminant ``Pf(Q(w))``.

Only the set-theoretic instability test is available outside characteristic 2;
there is no evaluator for the degree-16 invariant itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np

from .exterior import Covector, Multivector, contract, qsquare, transform, volume_pair_to_skew, wedge
from .linalg import Matrix, SkewMatrix, inverse, kernel, pfaffian, rank, rref
from .scalars import FieldScalar, FieldSpec

PGL3_BASIS_NAMES = ("E12", "E13", "E21", "E23", "E31", "E32", "H1", "H2")


def _unit(i: int, j: int) -> list[list[int]]:
    m = [[0] * 3 for _ in range(3)]
    m[i][j] = 1
    return m


def _pgl3_basis_ints() -> list[list[list[int]]]:
    h1 = [[1, 0, 0], [0, -1, 0], [0, 0, 0]]
    h2 = [[0, 0, 0], [0, 1, 0], [0, 0, -1]]
    return [_unit(0, 1), _unit(0, 2), _unit(1, 0), _unit(1, 2), _unit(2, 0), _unit(2, 1), h1, h2]


Mat3 = list[list[FieldScalar]]


def _mat(spec: FieldSpec, rows) -> Mat3:
    return [[spec(v) for v in row] for row in rows]


def _mm(a: Mat3, b: Mat3) -> Mat3:
    n = len(a)
    return [[sum((a[i][t] * b[t][j] for t in range(1, n)), a[i][0] * b[0][j]) for j in range(n)] for i in range(n)]


def _trace(a: Mat3) -> FieldScalar:
    return sum((a[i][i] for i in range(1, len(a))), a[0][0])


def trace_triple(x1: Mat3, x2: Mat3, x3: Mat3) -> FieldScalar:
    """``tr(X1 X2 X3) - tr(X2 X1 X3)`` on any lifts."""
    return _trace(_mm(_mm(x1, x2), x3)) - _trace(_mm(_mm(x2, x1), x3))


@dataclass(frozen=True)
class PglElement:
    """A class in pgl_n represented by a lift; equal when lifts differ by a scalar."""

    spec: FieldSpec
    lift: tuple[tuple[FieldScalar, ...], ...]

    @classmethod
    def of(cls, spec: FieldSpec, rows) -> "PglElement":
        return cls(spec, tuple(tuple(spec(v) for v in row) for row in rows))

    @property
    def n(self) -> int:
        return len(self.lift)

    def matrix(self) -> Mat3:
        return [list(r) for r in self.lift]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PglElement):
            return NotImplemented
        if self.spec != other.spec or self.n != other.n:
            return False
        d = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.lift, other.lift)]
        c = d[0][0]
        return all(d[i][j] == (c if i == j else 0) for i in range(self.n) for j in range(self.n))

    def __hash__(self) -> int:
        return hash((self.spec, self.n))


@dataclass(frozen=True)
class TraceForm:
    n: int
    spec: FieldSpec
    basis: tuple[PglElement, ...]
    coeffs: Multivector

    def __call__(self, x1, x2, x3) -> FieldScalar:
        return trace_triple(_as_mat(x1), _as_mat(x2), _as_mat(x3))


def _as_mat(x) -> Mat3:
    return x.matrix() if isinstance(x, PglElement) else x


def trace_form(n: int, spec: FieldSpec) -> TraceForm:
    """The trace form on pgl_3 as a trivector on the 8-dim dual.

    Coefficient of ``e_a ^ e_b ^ e_c`` (a<b<c) is ``alpha(B_a, B_b, B_c)`` for
    the basis ``E12, E13, E21, E23, E31, E32, E11-E22, E22-E33``.
    """
    if n != 3:
        raise ValueError("only n = 3 is supported")
    mats = [_mat(spec, b) for b in _pgl3_basis_ints()]
    raw = {}
    for a, b, c in combinations(range(8), 3):
        raw[(1 << a) | (1 << b) | (1 << c)] = trace_triple(mats[a], mats[b], mats[c])
    coeffs = Multivector.build(8, 3, spec, raw)
    basis = tuple(PglElement.of(spec, b) for b in _pgl3_basis_ints())
    return TraceForm(3, spec, basis, coeffs)


def alpha_form_matrix(tf: TraceForm, X) -> SkewMatrix:
    x = _as_mat(X)
    mats = [b.matrix() for b in tf.basis]
    upper = {}
    for a, b in combinations(range(8), 2):
        v = trace_triple(x, mats[a], mats[b])
        if v:
            upper[(a, b)] = v
    return SkewMatrix.from_upper(tf.spec, 8, upper)


def skew_form_rank(tf: TraceForm, X) -> int:
    """Rank of the alternating form ``alpha(X, -, -)`` on pgl_3."""
    return rank(alpha_form_matrix(tf, X))


def rank_one_lift(X, spec: FieldSpec) -> Mat3 | None:
    """A rank-1 matrix ``X - c I`` over a prime field, or None if none exists."""
    x = _as_mat(X)
    n = len(x)
    for c in spec.elements():
        shifted = [[x[i][j] - (c if i == j else 0) for j in range(n)] for i in range(n)]
        if rank(Matrix(spec, tuple(tuple(r) for r in shifted))) == 1:
            return shifted
    return None


def stabilizer_dim(w: Multivector) -> int:
    """Dimension of ``{g in gl_n : g . w = 0}`` under the derivation action."""
    if w.k != 3:
        raise ValueError("stabilizer_dim needs a trivector")
    n = w.n
    rows_idx = list(combinations(range(1, n + 1), 3))
    cols = []
    for i in range(1, n + 1):
        ei = Multivector.basis(n, w.spec, i)
        for j in range(1, n + 1):
            # E_ij . w = e_i ^ contract(e_j*, w)
            c = contract(Covector.basis(n, w.spec, j), w)
            img = wedge(ei, c) if c else Multivector.zero(n, 3, w.spec)
            cols.append([img.coeff(*t) for t in rows_idx])
    return n * n - rank(Matrix(w.spec, tuple(zip(*cols))))


# ---------------------------------------------------------------------------
# instability


@dataclass
class StabilityVerdict:
    status: str
    witness: list[list[int]] | None = None
    index: int | None = None

    @property
    def unstable(self) -> bool:
        return self.status == "unstable"

    def as_dict(self) -> dict:
        return {"status": self.status, "witness_rows": self.witness, "index": self.index}


class WitnessRankError(ValueError):
    pass


def check_witness(w: Multivector, V3: Sequence[Sequence]) -> bool:
    """True iff ``w(v_a, v_b, -) = 0`` for all pairs of the three covectors."""
    spec = w.spec
    rows = [[spec(x) for x in v] for v in V3]
    if len(rows) != 3 or rank(Matrix(spec, tuple(tuple(r) for r in rows))) != 3:
        raise WitnessRankError("witness must consist of three independent covectors")
    covs = [Covector(w.n, spec, tuple(r)) for r in rows]
    for a, b in combinations(range(3), 2):
        if contract(covs[b], contract(covs[a], w)):
            return False
    return True


def _encode_weights(q: int, n: int) -> np.ndarray:
    return q ** np.arange(n - 1, -1, -1, dtype=np.int64)


def _all_vectors(q: int, n: int) -> np.ndarray:
    idx = np.arange(q**n, dtype=np.int64)
    out = np.zeros((q**n, n), dtype=np.int64)
    for d in range(n):
        out[:, n - 1 - d] = idx % q
        idx //= q
    return out


def echelon_patterns(q: int, n: int = 8, k: int = 3):
    """Yield ``(pivots, free_positions)`` in enumeration order.

    ``free_positions`` lists ``(row, col)`` slots in product order (row-major).
    """
    for piv in combinations(range(n), k):
        free = [(r, c) for r in range(k) for c in range(piv[r] + 1, n) if c not in piv]
        yield piv, free


def subspace_count(q: int, n: int = 8, k: int = 3) -> int:
    return sum(q ** len(free) for _, free in echelon_patterns(q, n, k))


def _pattern_rows(q: int, n: int, piv, free, lo: int, hi: int) -> np.ndarray:
    """Encoded basis rows for echelon forms ``lo..hi-1`` of one pivot pattern."""
    k = len(piv)
    weights = _encode_weights(q, n)
    t = np.arange(lo, hi, dtype=np.int64)
    codes = np.zeros((hi - lo, k), dtype=np.int64)
    for r in range(k):
        codes[:, r] = weights[piv[r]]
    for r, c in reversed(free):
        codes[:, r] += (t % q) * weights[c]
        t //= q
    return codes


def _decode(code: int, q: int, n: int) -> list[int]:
    out = [0] * n
    for d in range(n):
        out[n - 1 - d] = code % q
        code //= q
    return out


@lru_cache(maxsize=4)
def _enumeration_q2(n: int = 8) -> np.ndarray:
    chunks = [_pattern_rows(2, n, piv, free, 0, 2 ** len(free)) for piv, free in echelon_patterns(2, n)]
    return np.concatenate(chunks)


def _int_tensor(w: Multivector) -> np.ndarray:
    n = w.n
    T = np.zeros((n, n, n), dtype=np.int64)
    for (i, j, k), c in w.items():
        v = int(c)
        i, j, k = i - 1, j - 1, k - 1
        for a, b, d, s in ((i, j, k, 1), (j, k, i, 1), (k, i, j, 1), (j, i, k, -1), (i, k, j, -1), (k, j, i, -1)):
            T[a, b, d] = s * v
    return T


def _pair_table(w: Multivector, q: int, block: int = 256) -> np.ndarray:
    """``table[a, b]`` is True iff ``w(v_a, v_b, -) != 0`` for encoded vectors."""
    n = w.n
    T = _int_tensor(w) % q
    A = _all_vectors(q, n)
    N = len(A)
    X = (A @ T.reshape(n, n * n)).reshape(N, n, n) % q
    table = np.zeros((N, N), dtype=bool)
    At = A.T
    for lo in range(0, N, block):
        hi = min(N, lo + block)
        # Y[a, k, b] = sum_j X[a, j, k] * A[b, j]
        Y = np.einsum("ajk,jb->akb", X[lo:hi], At) % q
        table[lo:hi] = Y.any(axis=1)
    return table


def is_unstable_bruteforce(w: Multivector, q: int | None = None) -> StabilityVerdict:
    """Search every 3-dim ``V3`` in ``(F_q^8)*`` for a pairwise-annihilating witness.

    Subspaces are visited by reduced echelon representatives: pivot triples in
    lexicographic order, then free entries in product order. The first witness
    found is returned.
    """
    q = q if q is not None else w.spec.p
    if q not in (2, 3) or w.spec.p != q:
        raise ValueError("brute force supports trivectors over F_2 or F_3")
    if w.n != 8 or w.k != 3:
        raise ValueError("brute force expects a trivector on k^8")
    n = w.n
    table = _pair_table(w, q)
    base = 0
    if q == 2:
        codes = _enumeration_q2(n)
        ok = ~(table[codes[:, 0], codes[:, 1]] | table[codes[:, 0], codes[:, 2]] | table[codes[:, 1], codes[:, 2]])
        hit = int(np.argmax(ok)) if ok.any() else None
        if hit is None:
            return StabilityVerdict("no-witness-found")
        return StabilityVerdict("unstable", [_decode(int(c), q, n) for c in codes[hit]], hit)
    step = 1 << 20
    for piv, free in echelon_patterns(q, n):
        size = q ** len(free)
        for lo in range(0, size, step):
            hi = min(size, lo + step)
            codes = _pattern_rows(q, n, piv, free, lo, hi)
            ok = ~(table[codes[:, 0], codes[:, 1]] | table[codes[:, 0], codes[:, 2]] | table[codes[:, 1], codes[:, 2]])
            if ok.any():
                hit = int(np.argmax(ok))
                return StabilityVerdict("unstable", [_decode(int(c), q, n) for c in codes[hit]], base + lo + hit)
        base += size
    return StabilityVerdict("no-witness-found")


def annihilator(V3: Sequence[Sequence], spec: FieldSpec) -> list[list[FieldScalar]]:
    """Vectors killed by every covector in ``V3`` (a basis of the common kernel)."""
    return kernel(Matrix.from_rows(spec, V3))


def adapted_basis(U: Sequence[Sequence], spec: FieldSpec) -> Matrix:
    """Columns: echelon basis of ``U`` followed by standard vectors at its non-pivot columns."""
    red = rref(Matrix.from_rows(spec, U))
    rows = [list(r) for r in red.entries if any(r)]
    if len(rows) != len(U):
        raise ValueError("subspace generators are dependent")
    n = red.cols
    pivots = [next(j for j, x in enumerate(r) if x) for r in rows]
    cols = [r for r in rows]
    for j in range(n):
        if j not in pivots:
            cols.append([spec(int(t == j)) for t in range(n)])
    return Matrix(spec, tuple(zip(*cols)))


def min_1ps_weight(w: Multivector, U: Sequence[Sequence]) -> int | None:
    """Least weight of ``w`` under ``diag(t^3 x5, t^-5 x3)`` adapted to ``U``.

    Returns None for ``w = 0`` (every weight test passes vacuously).
    """
    if len(U) != 5:
        raise ValueError("U must be 5-dimensional")
    B = adapted_basis(U, w.spec)
    wn = transform(w, inverse(B))
    weights = []
    for idx, _ in wn.items():
        weights.append(sum(3 if i <= 5 else -5 for i in idx))
    return min(weights) if weights else None


def hyperdisc2(w: Multivector) -> FieldScalar:
    """``Pf`` of the squaring map of ``w``; vanishes exactly on unstable ``w`` over F_2."""
    if w.spec.characteristic != 2 or w.n != 8 or w.k != 3:
        raise ValueError("hyperdisc2 needs a trivector on F_2^8")
    return pfaffian(volume_pair_to_skew(qsquare(w)))
