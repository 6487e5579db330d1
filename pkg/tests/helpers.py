import itertools

from trivector.exterior import Multivector, mask_of
from trivector.linalg import Matrix, SkewMatrix, det
from trivector.scalars import prime_field

F5 = prime_field(5)
F7 = prime_field(7)


def random_trivector(n, spec, rng, lo=-2, hi=2):
    triples = itertools.combinations(range(1, n + 1), 3)
    if spec.p is not None:
        lo, hi = 0, spec.p - 1
    return Multivector.build(n, 3, spec, {mask_of(t): rng.randint(lo, hi) for t in triples})


def random_skew(spec, m, rng):
    upper = {(i, j): rng.randint(-4, 4) for i in range(m) for j in range(i + 1, m)}
    return SkewMatrix.from_upper(spec, m, upper)


def random_invertible(spec, n, rng):
    while True:
        lo, hi = (-3, 3) if spec.p is None else (0, spec.p - 1)
        A = Matrix.from_rows(spec, [[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])
        if det(A):
            return A


# acceptance results, printed in the terminal summary
ACCEPTANCE = []
