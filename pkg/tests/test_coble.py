import itertools
import math
import random
from decimal import Decimal, getcontext

import pytest

from helpers import F5, F7, random_invertible, random_trivector
from trivector.coble import (
    DegenerateTrivectorError,
    _block_points,
    _block_ranges,
    _int_tensor,
    char2_dual_cubic,
    char2_equivalence,
    coble_cubic,
    comul_rank,
    duality_certificate,
    extract_cubic,
    phi_matrix,
    projective_count,
    projective_points,
    rank_at,
    scan_loci,
    smooth_points,
    weil_bounds,
)
from trivector.data import fixture_text
from trivector.exterior import (
    Covector,
    ExteriorError,
    Multivector,
    change_field,
    contract,
    qsquare,
    quotient_project,
    transform,
)
from trivector.linalg import Matrix, batch_rank_mod_p, det, kernel, rank, sub_pfaffian_kernel
from trivector.mpoly import MPoly, parse_poly
from trivector.scalars import F2, QQ, prime_field
from trivector.w38 import check_witness


def x(i, spec=QQ):
    return MPoly.var(9, spec, i)


@pytest.fixture(scope="module")
def gamma7(gamma_star):
    return change_field(gamma_star, F7)


@pytest.fixture(scope="module")
def cubic7(gamma7):
    return coble_cubic(gamma7)


# the skew family


def test_phi_of_single_monomial():
    g = Multivector.basis(9, QQ, 1, 2, 3)
    M = phi_matrix(g).entries
    assert M[1][2] == x(1) and M[0][2] == -x(2) and M[0][1] == x(3)
    nonzero = {(j, k) for j in range(9) for k in range(9) if M[j][k]}
    assert nonzero == {(1, 2), (2, 1), (0, 2), (2, 0), (0, 1), (1, 0)}


def test_phi_of_zero():
    fam = phi_matrix(Multivector.zero(9, 3, QQ))
    assert all(e.is_zero() for row in fam.entries for e in row)


def test_phi_annihilates_the_point(rng):
    g = random_trivector(9, F7, rng)
    fam = phi_matrix(g)
    for _ in range(20):
        pt = [F7(rng.randrange(7)) for _ in range(9)]
        assert not any(fam.at(pt).apply(pt))


def test_phi_rejects_wrong_shape():
    with pytest.raises(ExteriorError):
        phi_matrix(Multivector.basis(8, QQ, 1, 2, 3))


# cubic extraction


def test_degenerate_trivector():
    with pytest.raises(DegenerateTrivectorError):
        coble_cubic(Multivector.basis(9, QQ, 1, 2, 3))


def test_fixture_cubic_matches_golden(gamma7, cubic7):
    golden = parse_poly(fixture_text("gamma_star_cubic_F7.txt"), 9, F7)
    assert cubic7 == golden
    assert cubic7.is_homogeneous(3) and cubic7.degree() == 3


def test_fixture_identities_hold_for_every_index(gamma7):
    ext = extract_cubic(gamma7)
    assert ext.pivot == 1
    assert ext.identities == (True,) * 9


def test_rational_cubic_reduces_to_prime_cubic(gamma_star, cubic7):
    ext = extract_cubic(gamma_star)
    assert all(ext.identities)
    assert ext.cubic.reduce_mod(F7) == cubic7


def test_cubic_is_proportionality_factor_of_kernel(gamma7, cubic7, rng):
    fam = phi_matrix(gamma7)
    for _ in range(10):
        pt = [F7(rng.randrange(7)) for _ in range(9)]
        kappa = sub_pfaffian_kernel(fam.at(pt))
        val = cubic7.eval(pt)
        assert kappa == [c * val for c in pt]


def test_equivariance(gamma7, cubic7):
    rng = random.Random(31)
    dets = set()
    for _ in range(3):
        A = random_invertible(F7, 9, rng)
        d = det(A)
        dets.add(int(d))
        moved = coble_cubic(transform(gamma7, A))
        At = A.transpose()
        for _ in range(20):
            pt = [F7(rng.randrange(7)) for _ in range(9)]
            assert moved.eval(pt) == d * cubic7.eval(At.apply(pt))
    assert len(dets) > 1


# ranks


def test_rank_examples():
    g = Multivector.basis(9, QQ, 1, 2, 3)
    e = lambda i: [int(j == i) for j in range(1, 10)]
    assert rank_at(g, e(4)) == 0
    assert rank_at(g, e(1)) == 2
    with pytest.raises(ValueError):
        rank_at(g, [0] * 9)


def test_generic_rank_is_eight(gamma7, rng):
    ranks = [rank_at(gamma7, [rng.randrange(7) for _ in range(9)]) for _ in range(30)]
    assert all(r % 2 == 0 for r in ranks)
    assert ranks.count(8) >= 20


def test_comul_rank_examples(gamma_star, rng):
    assert comul_rank(Multivector.basis(9, QQ, 1, 2, 3)) == 3
    assert comul_rank(gamma_star) == 9
    for _ in range(5):
        g8 = random_trivector(8, QQ, rng)
        g = Multivector(9, 3, QQ, dict(g8.terms))
        assert comul_rank(g) <= 8


def test_low_comul_rank_means_a_killed_covector(rng):
    for _ in range(5):
        g8 = random_trivector(8, F7, rng)
        A = random_invertible(F7, 9, rng)
        g = transform(Multivector(9, 3, F7, dict(g8.terms)), A)
        assert comul_rank(g) == 8
        # the missing direction: a covector contracting g to zero
        cols = []
        pairs = list(itertools.combinations(range(1, 10), 2))
        for i in range(1, 10):
            c = contract(Covector.basis(9, F7, i), g)
            cols.append([c.coeff(a, b) for a, b in pairs])
        (v,) = kernel(Matrix(F7, tuple(zip(*cols))))
        assert not contract(Covector(9, F7, tuple(v)), g)


# point enumeration


@pytest.mark.parametrize("p", [2, 3])
def test_projective_points_are_normalized_and_distinct(p):
    pts = list(projective_points(9, p))
    assert len(pts) == len(set(pts)) == projective_count(9, p) == (p**9 - 1) // (p - 1)
    assert all(next(v for v in pt if v) == 1 for pt in pts)
    assert pts[0] == (1,) + (0,) * 8 and pts[-1] == (0,) * 8 + (1,)


def test_chunked_points_follow_sweep_order():
    p = 3
    blocks = [_block_points(9, p, lead, lo, hi).tolist() for lead, lo, hi in _block_ranges(9, p, 1000)]
    flat = [tuple(pt) for block in blocks for pt in block]
    assert flat == list(projective_points(9, p))


def _weil_oracle(p):
    getcontext().prec = 50
    r = Decimal(p).sqrt()
    return math.ceil((r - 1) ** 4), math.floor((r + 1) ** 4)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_weil_bounds(p):
    assert weil_bounds(p) == _weil_oracle(p)


def test_weil_bounds_at_five():
    assert weil_bounds(5) == (3, 109)


# scans at small primes; the full p = 5 scan lives in the acceptance suite


@pytest.mark.parametrize("p", [2, 3])
def test_small_scan_cubic_zero_set_is_rank_six_locus(gamma_star, p):
    rep = scan_loci(gamma_star, p)
    assert rep.total_points == sum(rep.rank_histogram.values())
    assert rep.cubic_mismatches == []
    assert rep.points_Y == rep.cubic_zero_count


def test_scan_is_partition_independent(gamma_star):
    a = scan_loci(gamma_star, 3, chunk=1 << 15).as_dict()
    b = scan_loci(gamma_star, 3, chunk=777, threads=4).as_dict()
    assert a == b


def test_scan_rejects_unsupported_prime(gamma_star):
    with pytest.raises(ValueError):
        scan_loci(gamma_star, 11)


def test_scan_rank_agrees_with_exact_rank(gamma_star):
    g3 = change_field(gamma_star, prime_field(3))
    for lead, lo, hi in _block_ranges(9, 3, 200)[:3]:
        pts = _block_points(9, 3, lead, lo, hi)[:40]
        fam = phi_matrix(g3)
        T = _int_tensor(g3, 3)
        M = (pts @ T.reshape(9, 81)) % 3
        fast = batch_rank_mod_p(M.reshape(-1, 9, 9), 3).tolist()
        assert fast == [rank(fam.at(pt.tolist())) for pt in pts]


# certificates


def test_certificate_off_the_cubic(gamma7, cubic7):
    pt = next(pt for pt in projective_points(9, 7) if cubic7.eval(pt))
    cert = duality_certificate(gamma7, pt, cubic7)
    assert cert.checks["on_cubic"] is False
    assert not cert.valid


def test_certificate_at_a_rank_four_point(gamma_star):
    g5 = change_field(gamma_star, F5)
    P = coble_cubic(g5)
    for lead, lo, hi in _block_ranges(9, 5, 1 << 15):
        pts = _block_points(9, 5, lead, lo, hi)
        M = (pts @ _int_tensor(g5, 5).reshape(9, 81)) % 5
        hits = pts[batch_rank_mod_p(M.reshape(-1, 9, 9), 5) == 4]
        if len(hits):
            break
    cert = duality_certificate(g5, hits[0].tolist(), P)
    assert cert.rank_at_y == 4
    assert cert.checks["on_cubic"] and not cert.checks["smooth"]
    assert not cert.valid


def test_smooth_points_are_in_sweep_order(gamma_star):
    g5 = change_field(gamma_star, F5)
    pts = smooth_points(g5, 5, 5)
    order = {pt: i for i, pt in enumerate(itertools.islice(projective_points(9, 5), 200_000))}
    idx = [order[tuple(pt)] for pt in pts]
    assert idx == sorted(idx)


def test_certificate_witness_is_quotient_instability(gamma_star):
    """The kernel V3 at a smooth point destabilizes the quotient at the tangent hyperplane."""
    g5 = change_field(gamma_star, F5)
    P = coble_cubic(g5)
    for y in smooth_points(g5, 5, 3, P):
        cert = duality_certificate(g5, y, P)
        assert cert.valid
        h = [F5(v) for v in cert.h]
        # V3 lies in h-perp; restrict to V/<h>-dual coordinates via the quotient along h
        piv = next(i for i, v in enumerate(h) if v)
        hnorm = [v * h[piv].inv() for v in h]
        w = quotient_project(g5, hnorm)
        # a covector v with <v, h> = 0 descends to the quotient basis (u, e_j j != piv)
        V3 = [[F5(c) for j, c in enumerate(v) if j != piv] for v in cert.V3]
        assert check_witness(w, V3)


# characteristic 2


def test_char2_degenerate():
    with pytest.raises(DegenerateTrivectorError):
        char2_dual_cubic(Multivector.basis(9, F2, 1, 2, 3))


def test_char2_requires_f2(gamma_star):
    with pytest.raises(ValueError):
        char2_dual_cubic(gamma_star)


def test_char2_equivalence_on_fixture(gamma2_star):
    rows = char2_equivalence(gamma2_star)
    assert len(rows) == 511
    assert all(r["agree"] for r in rows)
    zeros = sum(r["cubic"] == 0 for r in rows)
    assert 0 < zeros < 511


def test_char2_naturality_on_fixture(gamma2_star):
    Q = qsquare(gamma2_star)
    for u in projective_points(9, 2):
        assert quotient_project(Q, u) == qsquare(quotient_project(gamma2_star, u))
