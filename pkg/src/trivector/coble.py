"""The skew family of a trivector on k^9 and its Coble cubic.

A trivector ``g`` on ``V = k^9`` gives, for every covector ``x``, the skew
matrix ``M(x)[j][k] = g(x, e_j*, e_k*)``. The signed 8x8 sub-Pfaffians of
``M(x)`` form a kernel vector proportional to ``x``; the proportionality
factor is the cubic ``P`` whose zero set is the rank <= 6 locus.

Finite-field scans are vectorized with numpy over chunks of projective points.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .exterior import (
    Covector,
    ExteriorError,
    Multivector,
    change_field,
    contract,
    dualize_6_to_3,
    qsquare,
    quotient_project,
)
from .linalg import Matrix, SkewMatrix, batch_rank_mod_p, kernel, rank, sub_pfaffians_signed
from .mpoly import DivisibilityError, MPoly, divide_exact
from .scalars import FieldScalar, FieldSpec, prime_field
from .w38 import hyperdisc2

NVARS = 9
SCAN_PRIMES = (2, 3, 5, 7)
DEFAULT_CHUNK = 1 << 15


class DegenerateTrivectorError(ValueError):
    """All sub-Pfaffians vanish identically, so no cubic can be extracted."""


class InvariantViolation(AssertionError):
    """An identity that must hold for every input failed."""


@dataclass(frozen=True)
class PfaffianFamily:
    spec: FieldSpec
    entries: tuple[tuple[MPoly, ...], ...]

    def at(self, x: Sequence) -> SkewMatrix:
        rows = tuple(tuple(e.eval(x) for e in row) for row in self.entries)
        return SkewMatrix(self.spec, rows)

    def times_variables(self) -> list[MPoly]:
        """``M(x) . x`` as polynomials; identically zero for a genuine family."""
        xs = [MPoly.var(NVARS, self.spec, i) for i in range(1, NVARS + 1)]
        out = []
        for row in self.entries:
            acc = MPoly(NVARS, self.spec)
            for e, xv in zip(row, xs):
                if e:
                    acc = acc + e * xv
            out.append(acc)
        return out


def _check_shape(g: Multivector) -> None:
    if g.n != NVARS or g.k != 3:
        raise ExteriorError("expected a trivector on k^9")


def coefficient_tensor(g: Multivector) -> list[list[list[FieldScalar]]]:
    """Full antisymmetric array ``T[i][j][k] = g(e_i*, e_j*, e_k*)`` (0-based)."""
    n = g.n
    z = g.spec.zero()
    T = [[[z] * n for _ in range(n)] for _ in range(n)]
    for (i, j, k), c in g.items():
        i, j, k = i - 1, j - 1, k - 1
        for (a, b, d), s in (((i, j, k), 1), ((j, k, i), 1), ((k, i, j), 1),
                             ((j, i, k), -1), ((i, k, j), -1), ((k, j, i), -1)):
            T[a][b][d] = c if s > 0 else -c
    return T


def phi_matrix(g: Multivector) -> PfaffianFamily:
    _check_shape(g)
    spec = g.spec
    T = coefficient_tensor(g)
    rows = []
    for j in range(NVARS):
        row = []
        for k in range(NVARS):
            row.append(MPoly.linear(spec, [T[i][j][k] for i in range(NVARS)]))
        rows.append(tuple(row))
    fam = PfaffianFamily(spec, tuple(rows))
    if any(not r.is_zero() for r in fam.times_variables()):
        raise InvariantViolation("M(x) . x is not identically zero")
    return fam


@dataclass(frozen=True)
class CubicExtraction:
    cubic: MPoly
    pivot: int
    identities: tuple[bool, ...]


def extract_cubic(g: Multivector) -> CubicExtraction:
    """Cubic from the least nonvanishing sub-Pfaffian, with all nine cross-checks.

    ``identities[i-1]`` records ``(-1)^(i+1) Pf_i == x_i * P``.
    """
    fam = phi_matrix(g)
    spec = g.spec
    kappa = sub_pfaffians_signed(fam.entries, NVARS, MPoly(NVARS, spec), MPoly.const(NVARS, spec, 1))
    pivot = next((j for j, v in enumerate(kappa) if v), None)
    if pivot is None:
        raise DegenerateTrivectorError("every 8x8 sub-Pfaffian vanishes; the trivector is degenerate")
    xj = MPoly.var(NVARS, spec, pivot + 1)
    try:
        P = divide_exact(kappa[pivot], xj)
    except DivisibilityError as exc:
        raise InvariantViolation(f"x{pivot + 1} does not divide its sub-Pfaffian") from exc
    checks = tuple(kappa[i] == MPoly.var(NVARS, spec, i + 1) * P for i in range(NVARS))
    return CubicExtraction(P, pivot + 1, checks)


def coble_cubic(g: Multivector) -> MPoly:
    ext = extract_cubic(g)
    if not all(ext.identities) or not ext.cubic.is_homogeneous(3):
        raise InvariantViolation("sub-Pfaffian identities failed")
    return ext.cubic


def rank_at(g: Multivector, x: Sequence) -> int:
    _check_shape(g)
    if not any(g.spec(v) for v in x):
        raise ValueError("rank_at needs a nonzero point")
    return rank(phi_matrix(g).at(x))


def comul_rank(g: Multivector) -> int:
    """Rank of ``V* -> wedge^2 V``, ``e_i* -> contract(e_i*, g)``."""
    if g.k != 3:
        raise ExteriorError("comul_rank needs a trivector")
    pairs = list(combinations(range(1, g.n + 1), 2))
    cols = []
    for i in range(1, g.n + 1):
        c = contract(Covector.basis(g.n, g.spec, i), g)
        cols.append([c.coeff(a, b) for a, b in pairs])
    return rank(Matrix(g.spec, tuple(zip(*cols))))


# ---------------------------------------------------------------------------
# finite-field enumeration


def projective_count(n: int, p: int) -> int:
    return (p**n - 1) // (p - 1)


def projective_points(n: int, p: int) -> Iterator[tuple[int, ...]]:
    """Normalized points of P^(n-1)(F_p) in sweep order.

    Points with the leading 1 in an earlier position come first; within a
    block the trailing coordinates run in lexicographic order.
    """
    for chunk in _point_chunks(n, p, DEFAULT_CHUNK):
        for row in chunk[1]:
            yield tuple(int(v) for v in row)


def _block_ranges(n: int, p: int, chunk: int) -> list[tuple[int, int, int]]:
    """``(lead, lo, hi)`` index ranges covering every projective point once."""
    out = []
    for lead in range(n):
        size = p ** (n - 1 - lead)
        for lo in range(0, size, chunk):
            out.append((lead, lo, min(size, lo + chunk)))
    return out


def _block_points(n: int, p: int, lead: int, lo: int, hi: int) -> np.ndarray:
    width = n - 1 - lead
    idx = np.arange(lo, hi, dtype=np.int64)
    pts = np.zeros((hi - lo, n), dtype=np.int64)
    pts[:, lead] = 1
    for d in range(width):
        col = n - 1 - d
        pts[:, col] = idx % p
        idx //= p
    return pts


def _point_chunks(n: int, p: int, chunk: int):
    start = 0
    for lead, lo, hi in _block_ranges(n, p, chunk):
        yield start, _block_points(n, p, lead, lo, hi)
        start += hi - lo


def _int_tensor(g: Multivector, p: int) -> np.ndarray:
    gp = change_field(g, prime_field(p)) if g.spec.p != p else g
    T = coefficient_tensor(gp)
    return np.array([[[int(v) for v in row] for row in plane] for plane in T], dtype=np.int64)


class _VecPoly:
    """Homogeneous polynomial compiled for batched evaluation mod p."""

    def __init__(self, f: MPoly, p: int) -> None:
        self.p = p
        degs = {sum(e) for e in f.terms}
        if len(degs) > 1:
            raise ValueError("vectorized evaluation expects a homogeneous polynomial")
        self.deg = degs.pop() if degs else 0
        self.coeffs = np.array([int(c) for c in f.terms.values()], dtype=np.int64) % p
        idx = []
        for e in f.terms:
            row = []
            for i, k in enumerate(e):
                row.extend([i] * k)
            idx.append(row)
        self.idx = np.array(idx, dtype=np.int64).reshape(len(idx), self.deg)

    def __call__(self, X: np.ndarray) -> np.ndarray:
        if not len(self.coeffs):
            return np.zeros(len(X), dtype=np.int64)
        p = self.p
        # entries stay below p^deg, so reduce only once at the end
        prod = X[:, self.idx[:, 0]] if self.deg else np.ones((len(X), len(self.coeffs)), dtype=np.int64)
        for d in range(1, self.deg):
            prod = prod * X[:, self.idx[:, d]]
        if p ** (self.deg + 1) * len(self.coeffs) >= 1 << 53:
            return (prod % p) @ self.coeffs % p
        return (prod.astype(np.float64) @ self.coeffs.astype(np.float64)).astype(np.int64) % p


@dataclass
class ScanReport:
    p: int
    total_points: int
    points_Y: int
    points_X: int
    rank2_count: int
    cubic_zero_count: int
    singular_count: int
    rank_histogram: dict[int, int]
    sing_mismatches: list[list[int]]
    cubic_mismatches: list[list[int]]
    weil_bounds: tuple[int, int]

    @property
    def weil_ok(self) -> bool:
        lo, hi = self.weil_bounds
        return lo <= self.points_X <= hi

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "total_points": self.total_points,
            "points_Y": self.points_Y,
            "points_X": self.points_X,
            "rank2_count": self.rank2_count,
            "cubic_zero_count": self.cubic_zero_count,
            "singular_count": self.singular_count,
            "rank_histogram": {str(k): v for k, v in sorted(self.rank_histogram.items())},
            "sing_mismatches": self.sing_mismatches,
            "cubic_mismatches": self.cubic_mismatches,
            "weil_bounds": list(self.weil_bounds),
            "weil_ok": self.weil_ok,
        }


def weil_bounds(p: int, genus: int = 2) -> tuple[int, int]:
    """Integer hull of ``[(sqrt p - 1)^(2g), (sqrt p + 1)^(2g)]``, exact."""
    # (sqrt p +- 1)^(2g) = A +- B sqrt p with integers A, B
    a, b = 1, 0
    for _ in range(2 * genus):
        a, b = a + b * p, a + b
    root = math.isqrt(b * b * p)
    return a - root, a + root


def _scan_chunk(args):
    T, cubic, grads, p, lead, lo, hi, n = args
    X = _block_points(n, p, lead, lo, hi)
    M = (X @ T.reshape(n, n * n)) % p
    ranks = batch_rank_mod_p(M.reshape(-1, n, n), p)
    pv = cubic(X)
    gz = np.ones(len(X), dtype=bool)
    for gpoly in grads:
        gz &= gpoly(X) == 0
    return X, ranks, pv == 0, gz


def scan_loci(g: Multivector, p: int, threads: int = 1, chunk: int = DEFAULT_CHUNK,
              cubic: MPoly | None = None) -> ScanReport:
    """Classify every point of P^8(F_p) by the rank of ``M(x)``.

    A mismatch is a point where ``P = 0 and grad P = 0`` disagrees with
    ``rank <= 4`` (singular-locus check), or where ``P = 0`` disagrees with
    ``rank <= 6`` (hypersurface check). Output does not depend on ``threads``.
    """
    if p not in SCAN_PRIMES:
        raise ValueError(f"scans support p in {SCAN_PRIMES}")
    _check_shape(g)
    spec = prime_field(p)
    gp = change_field(g, spec) if g.spec != spec else g
    P = cubic if cubic is not None else coble_cubic(gp)
    T = _int_tensor(gp, p)
    vp = _VecPoly(P, p)
    vg = [_VecPoly(d, p) for d in P.gradient() if d]
    n = NVARS
    jobs = [(T, vp, vg, p, lead, lo, hi, n) for lead, lo, hi in _block_ranges(n, p, chunk)]
    hist = {r: 0 for r in range(0, n + 1, 2)}
    sing_mm: list[list[int]] = []
    cubic_mm: list[list[int]] = []
    zero_count = sing_count = 0
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = pool.map(_scan_chunk, jobs)
            for res in results:
                zero_count, sing_count = _merge(res, hist, sing_mm, cubic_mm, zero_count, sing_count)
    else:
        for job in jobs:
            zero_count, sing_count = _merge(_scan_chunk(job), hist, sing_mm, cubic_mm, zero_count, sing_count)
    return ScanReport(
        p=p,
        total_points=projective_count(n, p),
        points_Y=sum(v for r, v in hist.items() if r <= 6),
        points_X=sum(v for r, v in hist.items() if r <= 4),
        rank2_count=sum(v for r, v in hist.items() if r <= 2),
        cubic_zero_count=zero_count,
        singular_count=sing_count,
        rank_histogram=hist,
        sing_mismatches=sing_mm,
        cubic_mismatches=cubic_mm,
        weil_bounds=weil_bounds(p),
    )


def _merge(res, hist, sing_mm, cubic_mm, zero_count, sing_count):
    X, ranks, pzero, gzero = res
    vals, counts = np.unique(ranks, return_counts=True)
    for r, c in zip(vals.tolist(), counts.tolist()):
        if r % 2:
            raise InvariantViolation(f"odd rank {r} for a skew matrix")
        hist[r] += c
    sing = pzero & gzero
    bad_sing = sing != (ranks <= 4)
    bad_cubic = pzero != (ranks <= 6)
    sing_mm.extend(X[bad_sing].tolist())
    cubic_mm.extend(X[bad_cubic].tolist())
    return zero_count + int(pzero.sum()), sing_count + int(sing.sum())


# ---------------------------------------------------------------------------
# projective duality certificates


@dataclass
class DualityCertificate:
    y: list[int]
    rank_at_y: int
    V3: list[list[int]]
    h: list[int]
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    def as_dict(self) -> dict:
        return {
            "y": self.y,
            "rank_at_y": self.rank_at_y,
            "V3": self.V3,
            "h": self.h,
            "checks": dict(self.checks),
            "valid": self.valid,
        }


def normalize_point(spec: FieldSpec, y: Sequence) -> list[FieldScalar]:
    ys = [spec(v) for v in y]
    lead = next((v for v in ys if v), None)
    if lead is None:
        raise ValueError("zero vector is not a projective point")
    s = lead.inv()
    return [v * s for v in ys]


def _in_span(w: Sequence[FieldScalar], h: Sequence[FieldScalar]) -> bool:
    """Whether ``w`` is a multiple of ``h`` (all 2x2 minors vanish)."""
    if not any(h):
        return not any(w)
    n = len(w)
    return all(not (w[i] * h[j] - w[j] * h[i]) for i in range(n) for j in range(i + 1, n))


def duality_certificate(g: Multivector, y: Sequence, cubic: MPoly | None = None,
                        family: PfaffianFamily | None = None) -> DualityCertificate:
    """Check the tangent-hyperplane witness at a point ``y`` of the cubic.

    Failed checks are recorded, never raised.
    """
    _check_shape(g)
    spec = g.spec
    P = cubic if cubic is not None else coble_cubic(g)
    fam = family if family is not None else phi_matrix(g)
    yv = normalize_point(spec, y)
    S = fam.at(yv)
    r = rank(S)
    h = [d.eval(yv) for d in P.gradient()]
    ker = kernel(S)
    on_cubic = P.eval(yv).is_zero()
    smooth = any(h) and r == 6
    in_tangent = all(not sum((a * b for a, b in zip(h, v)), spec.zero()) for v in ker)
    witness = len(ker) == 3
    if witness:
        covs = [Covector(NVARS, spec, tuple(v)) for v in ker]
        for a, b in combinations(range(3), 2):
            w = contract(covs[b], contract(covs[a], g))
            wv = [w.coeff(i) for i in range(1, NVARS + 1)]
            if not _in_span(wv, h):
                witness = False
                break
    return DualityCertificate(
        y=[int(v) if spec.p else str(v.value) for v in yv],
        rank_at_y=r,
        V3=[[int(x) if spec.p else str(x.value) for x in v] for v in ker],
        h=[int(v) if spec.p else str(v.value) for v in h],
        checks={
            "on_cubic": on_cubic,
            "smooth": smooth,
            "kernel_in_tangent": in_tangent,
            "witness_vanishing": witness,
        },
    )


def smooth_points(g: Multivector, p: int, count: int, cubic: MPoly | None = None) -> list[list[int]]:
    """First ``count`` points in sweep order with ``P = 0``, ``grad P != 0`` and rank 6."""
    spec = prime_field(p)
    gp = change_field(g, spec) if g.spec != spec else g
    P = cubic if cubic is not None else coble_cubic(gp)
    T = _int_tensor(gp, p)
    vp = _VecPoly(P, p)
    vg = [_VecPoly(d, p) for d in P.gradient() if d]
    found: list[list[int]] = []
    for lead, lo, hi in _block_ranges(NVARS, p, 4096):
        X, ranks, pzero, gzero = _scan_chunk((T, vp, vg, p, lead, lo, hi, NVARS))
        hit = pzero & ~gzero & (ranks == 6)
        found.extend(X[hit][: count - len(found)].tolist())
        if len(found) >= count:
            break
    return found


def certificate_sweep(g: Multivector, p: int, count: int = 20) -> list[DualityCertificate]:
    spec = prime_field(p)
    gp = change_field(g, spec) if g.spec != spec else g
    P = coble_cubic(gp)
    fam = phi_matrix(gp)
    return [duality_certificate(gp, y, P, fam) for y in smooth_points(gp, p, count, P)]


# ---------------------------------------------------------------------------
# characteristic 2


def char2_dual_cubic(g: Multivector) -> MPoly:
    """Cubic in coordinates on V built from the dual of the squaring map."""
    _check_shape(g)
    if g.spec.characteristic != 2:
        raise ValueError("char2_dual_cubic needs a trivector over F_2")
    delta = dualize_6_to_3(qsquare(g))
    return coble_cubic(delta)


def char2_equivalence(g: Multivector, cubic: MPoly | None = None) -> list[dict]:
    """Per-point comparison of the dual cubic and the quotient hyperdiscriminant."""
    P = cubic if cubic is not None else char2_dual_cubic(g)
    rows = []
    for u in projective_points(NVARS, 2):
        pv = int(P.eval(u))
        hd = int(hyperdisc2(quotient_project(g, u)))
        rows.append({"u": list(u), "cubic": pv, "hyperdisc2": hd, "agree": (pv == 0) == (hd == 0)})
    return rows
