"""Integer partitions as plain tuples.

A partition is a weakly decreasing tuple of positive ints; ``()`` is the
unique partition of 0.  Enumeration is in descending lexicographic order
within a fixed weight.
"""

from __future__ import annotations

from collections import Counter
from functools import cmp_to_key, lru_cache
from math import factorial, prod

KINDS = ("all", "odd", "strict")


def partition(parts) -> tuple[int, ...]:
    """Validate and return ``parts`` as a partition tuple (sorting it)."""
    p = tuple(sorted((int(x) for x in parts), reverse=True))
    if p and p[-1] <= 0:
        raise ValueError(f"partition parts must be positive: {parts!r}")
    return p


def weight(lam) -> int:
    return sum(lam)


def is_odd(lam) -> bool:
    return all(x % 2 for x in lam)


def is_strict(lam) -> bool:
    return all(a > b for a, b in zip(lam, lam[1:]))


def in_class(lam, kind: str) -> bool:
    if kind == "all":
        return True
    if kind == "odd":
        return is_odd(lam)
    if kind == "strict":
        return is_strict(lam)
    raise ValueError(f"unknown partition class {kind!r}")


@lru_cache(maxsize=None)
def _all_partitions(n: int, largest: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _all_partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions(n: int, kind: str = "all") -> list[tuple[int, ...]]:
    """All partitions of ``n`` in ``kind`` ('all', 'odd', 'strict'), descending lex."""
    if kind not in KINDS:
        raise ValueError(f"unknown partition class {kind!r}")
    if n < 0:
        return []
    return [lam for lam in _all_partitions(n, n) if in_class(lam, kind)]


def partitions_upto(d: int, kind: str = "all") -> list[tuple[int, ...]]:
    """Partitions of weight 0..d, ascending weight then descending lex."""
    return [lam for n in range(d + 1) for lam in partitions(n, kind)]


def multiplicities(lam) -> dict[int, int]:
    """``{i: m_i}`` where ``m_i`` counts the parts equal to ``i``."""
    return dict(Counter(lam))


def z_lambda(lam) -> int:
    """``prod_i i^{m_i} m_i!``."""
    return prod(i ** m * factorial(m) for i, m in Counter(lam).items())


def merge(lam, mu) -> tuple[int, ...]:
    """Multiset union, the index of ``p_lam * p_mu``."""
    if not lam:
        return mu
    if not mu:
        return lam
    return tuple(sorted(lam + mu, reverse=True))


def cmp_succ(kappa, mu) -> int:
    """Compare under the order used to eliminate even q's.

    Returns 1 if ``kappa`` is greater (heavier, or same weight and
    lexicographically smaller), -1 if smaller, 0 if equal.
    """
    wk, wm = sum(kappa), sum(mu)
    if wk != wm:
        return 1 if wk > wm else -1
    if kappa == mu:
        return 0
    return 1 if tuple(kappa) < tuple(mu) else -1


def cmp_succ_prime(kappa, mu) -> int:
    """Like :func:`cmp_succ` but same-weight ties go to the lex-greater side."""
    wk, wm = sum(kappa), sum(mu)
    if wk != wm:
        return 1 if wk > wm else -1
    if kappa == mu:
        return 0
    return 1 if tuple(kappa) > tuple(mu) else -1


succ_key = cmp_to_key(cmp_succ)
succ_prime_key = cmp_to_key(cmp_succ_prime)


def canonical_key(lam):
    """Sort key for serialized output: weight ascending, then descending lex."""
    return (sum(lam), tuple(-x for x in lam) + (0,))
