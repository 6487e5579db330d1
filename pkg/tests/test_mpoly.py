import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import F7
from trivector.mpoly import (
    DivisibilityError,
    MPoly,
    PolyError,
    divide_exact,
    evaluate,
    format_poly,
    gradient,
    monomials,
    parse_poly,
)
from trivector.scalars import QQ, prime_field

F3 = prime_field(3)
seeds = st.integers(min_value=0, max_value=2**32)


def x(i, n=3, spec=QQ):
    return MPoly.var(n, spec, i)


def random_poly(n, spec, rng, max_deg=3, terms=6):
    f = MPoly(n, spec)
    for _ in range(terms):
        e = [0] * n
        for _ in range(rng.randint(0, max_deg)):
            e[rng.randrange(n)] += 1
        c = rng.randint(-4, 4) if spec.p is None else rng.randrange(spec.p)
        f = f + MPoly(n, spec, {tuple(e): spec(c)})
    return f


def test_gradient_of_product():
    assert gradient(x(1) * x(2)) == [x(2), x(1), MPoly(3, QQ)]


def test_derivative_in_characteristic_three():
    f = MPoly.var(3, F3, 1) ** 3
    assert f.derivative(1).is_zero()


def test_evaluation():
    assert evaluate(x(1, 2) ** 2 + x(2, 2), (2, 3)) == 7
    with pytest.raises(PolyError):
        (x(1, 2)).eval((1, 2, 3))


def test_exact_division_examples():
    f = x(1) ** 2 * x(2) + x(1) * x(3)
    assert divide_exact(f, x(1)) == x(1) * x(2) + x(3)
    with pytest.raises(DivisibilityError) as info:
        divide_exact(x(1) + x(2), x(1))
    assert info.value.remainder == x(2)


def test_division_by_general_linear_form():
    ell = x(1) + x(2) * 2 - x(3)
    q = x(1) * x(3) + x(2) ** 2
    assert divide_exact(q * ell, ell) == q
    with pytest.raises(DivisibilityError):
        divide_exact(q * ell + x(3) ** 2, ell)


def test_division_needs_linear_divisor():
    with pytest.raises(PolyError):
        divide_exact(x(1), x(1) * x(2))
    with pytest.raises(PolyError):
        divide_exact(x(1), MPoly(3, QQ))


@given(seeds)
def test_division_round_trip(seed):
    rng = random.Random(seed)
    for spec in (QQ, F7):
        f = random_poly(5, spec, rng)
        j = rng.randint(1, 5)
        xj = MPoly.var(5, spec, j)
        assert divide_exact(f * xj, xj) == f


@given(seeds)
def test_leibniz_rule(seed):
    rng = random.Random(seed)
    f, g = random_poly(4, QQ, rng), random_poly(4, QQ, rng)
    for i, d in enumerate((f * g).gradient()):
        assert d == f * g.derivative(i + 1) + g * f.derivative(i + 1)


@given(seeds)
def test_euler_identity(seed):
    rng = random.Random(seed)
    n, d = 4, 3
    f = MPoly(n, QQ)
    for _ in range(6):
        e = [0] * n
        for _ in range(d):
            e[rng.randrange(n)] += 1
        f = f + MPoly(n, QQ, {tuple(e): QQ(rng.randint(-5, 5))})
    euler = MPoly(n, QQ)
    for i, g in enumerate(f.gradient(), 1):
        euler = euler + MPoly.var(n, QQ, i) * g
    assert euler == f * d


@given(seeds)
def test_evaluation_is_a_ring_map(seed):
    rng = random.Random(seed)
    f, g = random_poly(3, F7, rng), random_poly(3, F7, rng)
    pt = [rng.randrange(7) for _ in range(3)]
    assert (f * g).eval(pt) == f.eval(pt) * g.eval(pt)
    assert (f - g).eval(pt) == f.eval(pt) - g.eval(pt)


def test_print_format():
    f = x(1) ** 2 * x(3) * 3 + x(2) * 6 + MPoly.const(3, QQ, 1)
    assert format_poly(f) == "3 x1^2 x3 + 6 x2 + 1"
    assert format_poly(MPoly(3, QQ)) == "0"
    assert str(MPoly.const(2, QQ, 1) * QQ("-1/2")) == "-1/2"


def test_graded_lex_order():
    f = x(3) ** 2 + x(1) * x(2) + x(1) ** 2 + x(2) + x(1)
    assert list(monomials(f)) == [(2, 0, 0), (1, 1, 0), (0, 0, 2), (1, 0, 0), (0, 1, 0)]


@given(seeds)
def test_print_round_trip(seed):
    rng = random.Random(seed)
    for spec in (QQ, F7):
        f = random_poly(9, spec, rng)
        assert parse_poly(format_poly(f), 9, spec) == f


def test_parse_errors():
    with pytest.raises(PolyError):
        parse_poly("3 y1", 3, QQ)
    with pytest.raises(PolyError):
        parse_poly("3 x4", 3, QQ)
    with pytest.raises(PolyError):
        parse_poly("a x1", 3, QQ)


def test_ring_mismatch():
    with pytest.raises(PolyError):
        x(1) + MPoly.var(3, F7, 1)
    with pytest.raises(PolyError):
        x(1) + x(1, 4)


def test_reduce_mod():
    f = x(1) * QQ("1/2") + x(2) * 9
    assert f.reduce_mod(F7) == MPoly.var(3, F7, 1) * 4 + MPoly.var(3, F7, 2) * 2
    with pytest.raises(PolyError):
        f.reduce_mod(F7).reduce_mod(F7)


def test_homogeneity_and_degree():
    assert (x(1) * x(2) + x(3) ** 2).is_homogeneous(2)
    assert not (x(1) + x(2) ** 2).is_homogeneous()
    assert MPoly(3, QQ).degree() == -1
