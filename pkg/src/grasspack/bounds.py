"""Rankin-type upper bounds on the minimal squared chordal distance."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import Packing, min_distance
from .errors import DimensionMismatch

#: ratio above which a packing counts as meeting its bound
MEETS_THRESHOLD = 1 - 1e-7


def embedding_dim(m: int) -> int:
    """Dimension (m-1)(m+2)/2 of the space of traceless symmetric m x m matrices."""
    return (m - 1) * (m + 2) // 2


def _check(m: int, n: int) -> None:
    if not 1 <= n <= m - 1:
        raise DimensionMismatch(f"bounds need 1 <= n <= m-1, got m={m}, n={n}")


def orthoplex_bound(m: int, n: int) -> float:
    """Upper bound n(m-n)/m on d_c^2, valid once N exceeds D + 1."""
    _check(m, n)
    return n * (m - n) / m


def simplex_bound(m: int, n: int, N: int) -> float:
    """``n(m-n)/m * N/(N-1)``, capped by the trivial bound ``min(n, m-n)``.

    At most ``min(n, m-n)`` principal angles are nonzero, so d_c^2 never
    exceeds that; the cap keeps G(m, n) and G(m, m-n) on equal footing.
    """
    _check(m, n)
    if N < 2:
        raise ValueError("the simplex bound needs N >= 2")
    return min(float(min(n, m - n)), orthoplex_bound(m, n) * N / (N - 1))


def bound(m: int, n: int, N: int) -> float:
    """The tightest of the two bounds applicable to N planes in G(m, n)."""
    s = simplex_bound(m, n, N)
    if N <= embedding_dim(m) + 1:
        return s
    return min(s, orthoplex_bound(m, n))


@dataclass(frozen=True)
class BoundReport:
    m: int
    n: int
    N: int
    simplex_bound: float
    orthoplex_bound: Optional[float]
    achieved: float
    bound: float
    ratio: float
    meets: bool
    which: str

    @property
    def D(self) -> int:
        return embedding_dim(self.m)


def audit(packing: Packing) -> BoundReport:
    """Compare the packing's minimal d_c^2 against the applicable bound.

    The simplex bound is used while N <= D + 1, the orthoplex bound after
    that.  ``meets`` is False whenever N > 2D, where equality is impossible.
    """
    m, n, N = packing.m, packing.n, packing.N
    D = embedding_dim(m)
    d, _ = min_distance(packing, "chordal")
    achieved = d * d
    s = simplex_bound(m, n, N)
    if N <= D + 1:
        o, b, which = None, s, "simplex"
    else:
        o = orthoplex_bound(m, n)
        b = min(s, o)
        which = "orthoplex" if o <= s else "simplex"
    ratio = achieved / b
    meets = ratio > MEETS_THRESHOLD and N <= 2 * D
    return BoundReport(m, n, N, s, o, achieved, b, ratio, bool(meets), which)
