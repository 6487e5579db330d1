"""Hilbert series of a weighted hypersurface against a closed-form polynomial.

The ring is generated in the given weights modulo one relation, so its
Hilbert series is ``(1 - t^r) / prod_w (1 - t^w)``. Coefficients are expanded
with plain integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial


@dataclass(frozen=True)
class GradedRingSpec:
    weights: tuple[int, ...] = field(default=(1,) * 9 + (3,))
    relation_degree: int = 6

    def __post_init__(self) -> None:
        if not self.weights or any(w < 1 for w in self.weights):
            raise ValueError("weights must be a nonempty list of positive integers")
        if self.relation_degree < 1:
            raise ValueError("relation degree must be positive")


SU3_RING = GradedRingSpec()


def hilbert_series(spec: GradedRingSpec, max_d: int) -> list[int]:
    """Coefficients of t^0 .. t^max_d."""
    if max_d < 0:
        return []
    coeffs = [0] * (max_d + 1)
    coeffs[0] = 1
    for w in spec.weights:
        # multiply by 1/(1 - t^w): running sum with stride w
        for d in range(w, max_d + 1):
            coeffs[d] += coeffs[d - w]
    r = spec.relation_degree
    return [c - (coeffs[d - r] if d >= r else 0) for d, c in enumerate(coeffs)]


def hilbert_coefficient(spec: GradedRingSpec, d: int) -> int:
    if d < 0:
        return 0
    return hilbert_series(spec, d)[d]


def verlinde_value(d: int) -> Fraction:
    """``2/8! (d+1)(d+2)(d+3)^2(d+4)(d+5)(d^2+6d+56)``, always an integer."""
    v = Fraction(2 * (d + 1) * (d + 2) * (d + 3) ** 2 * (d + 4) * (d + 5) * (d * d + 6 * d + 56), factorial(8))
    assert v.denominator == 1, f"non-integral value at d={d}"
    return v


def verlinde_table(max_d: int, spec: GradedRingSpec = SU3_RING) -> list[tuple[int, int, int]]:
    """Rows ``(d, series coefficient, closed form)`` for ``0 <= d <= max_d``."""
    series = hilbert_series(spec, max_d)
    return [(d, series[d], int(verlinde_value(d))) for d in range(max_d + 1)]
