"""Constructors for the b-deformed families.

G-side (infinite sums, truncated at x-degree ``D``):

* ``pG``   -- ``p_n(x / (1 + (b/2) x))``
* ``qG``   -- coefficients of ``prod_i (1 - xbar_i z) / (1 - x_i z)``
* ``ovqG`` -- the same with ``x -> xbar``; the inverse generating function
* ``GQ``   -- one-row K-theoretic Q-functions

g-side (finite symmetric functions, exact):

* ``pg``   -- ``sum_{k<n} C(n, k) (b/2)^k p_{n-k}``
* ``qg``   -- coefficients of ``prod_i (1 - x_i zbar) / (1 - x_i z)``
* ``ovqg`` -- the same series with ``z -> zbar``
* ``gp``   -- the dual family to ``GQ``

Here ``xbar = -x / (1 + b x)``.  q-families are built from their
logarithms, which are linear in power sums, then exponentiated.
"""

from __future__ import annotations

import warnings
from functools import lru_cache
from math import comb

from .coeff import BETA, HALF, ONE, ZERO, binom_signed, is_in_z_beta, is_laurent_integral, scalar
from .finvar import (
    FinitePoly,
    IntegralityError,
    complete_homogeneous,
    divide_out_linear,
    one_plus_beta_z_power,
    specialize,
)
from .psym import PSeries, ZSeries, substitute_zbar, zbar_power, zseries_exp, zseries_invert

FAMILIES = ("pG", "pg", "qG", "qg", "ovqG", "ovqg", "GQ", "gp")
G_SIDE = ("pG", "qG", "ovqG", "GQ")
G_SIDE_DUAL = ("pg", "qg", "ovqg", "gp")


class NotInGGammaWarning(UserWarning):
    """An even-index ``pG`` was requested; it is computable but lacks K-Q cancellation."""


# ---------------------------------------------------------------------------
# power sums

def p_beta_G(n: int, D: int) -> PSeries:
    """``sum_k C(-n, k) (b/2)^k p_{n+k}``, terms with ``n + k <= D``.

    Even ``n`` is allowed but emits :class:`NotInGGammaWarning`.
    """
    if n < 1:
        raise ValueError("index must be positive")
    if n % 2 == 0:
        warnings.warn(f"pG{n} has even index and does not lie in GGamma", NotInGGammaWarning,
                      stacklevel=2)
    return _p_beta_G(n, D)


@lru_cache(maxsize=None)
def _p_beta_G(n: int, D: int) -> PSeries:
    half_beta = BETA * HALF
    terms = {(n + k,): half_beta ** k * binom_signed(-n, k) for k in range(D - n + 1)}
    return PSeries(D, terms)


@lru_cache(maxsize=None)
def p_beta_g(n: int) -> PSeries:
    """``sum_{k=0}^{n-1} C(n, k) (b/2)^k p_{n-k}``, exact at degree ``n``."""
    if n < 1:
        raise ValueError("index must be positive")
    half_beta = BETA * HALF
    return PSeries(n, {(n - k,): half_beta ** k * comb(n, k) for k in range(n)})


# ---------------------------------------------------------------------------
# q-functions

@lru_cache(maxsize=None)
def q_beta_G(n_max: int, D: int) -> ZSeries:
    """``Q(z) = sum q_n z^n``, via ``log Q = sum_k z^k/k (p_k(x) - p_k(xbar))``."""
    log_coeffs = [PSeries.zero(D)]
    for k in range(1, n_max + 1):
        # p_k(xbar) = (-1)^k sum_j C(-k, j) b^j p_{k+j}
        sign = -1 if k % 2 else 1
        terms = {(k,): ONE} if k <= D else {}
        for j in range(D - k + 1):
            key = (k + j,)
            terms[key] = terms.get(key, ZERO) - BETA ** j * (sign * binom_signed(-k, j))
        log_coeffs.append(PSeries(D, terms).scale(scalar(1) / k))
    return zseries_exp(ZSeries(log_coeffs, D, n_max))


def q_G(n: int, D: int) -> PSeries:
    if n < 0 or n > D:
        return PSeries.zero(D)
    return q_beta_G(max(D, 1), D)[n]


@lru_cache(maxsize=None)
def ovq_beta_G(n_max: int, D: int) -> ZSeries:
    """``Qbar(z) = 1 / Q(z)``."""
    return zseries_invert(q_beta_G(n_max, D))


def ovq_G(n: int, D: int) -> PSeries:
    if n < 0 or n > D:
        return PSeries.zero(D)
    return ovq_beta_G(max(D, 1), D)[n]


@lru_cache(maxsize=None)
def _q_at_minus_beta(D: int) -> PSeries:
    # Q(-b) = sum_l (-b)^l q_l; q_l vanishes past degree D
    Q = q_beta_G(D, D)
    acc = PSeries.zero(D)
    for l in range(D + 1):
        acc = acc + Q[l].scale((-BETA) ** l)
    return acc


@lru_cache(maxsize=None)
def _q_at_minus_beta_inverse(D: int) -> PSeries:
    return _q_at_minus_beta(D).inverse()


def ovq_G_closed(k: int, D: int) -> PSeries:
    """``qbar_k`` from ``(-1)^k sum_l C(k+l, k) (-b)^l q_{k+l} / Q(-b)``.

    Independent of :func:`ovq_beta_G`; used as a cross-check.
    """
    Q = q_beta_G(D, D)
    num = PSeries.zero(D)
    for l in range(D - k + 1):
        num = num + Q[k + l].scale((-BETA) ** l * comb(k + l, k))
    out = num * _q_at_minus_beta_inverse(D)
    return -out if k % 2 else out


@lru_cache(maxsize=None)
def q_beta_g(n_max: int) -> ZSeries:
    """``Q[b](z) = sum q[b]_n z^n``, exact; ``log Q[b] = sum_k p_k (z^k - zbar^k) / k``."""
    D = n_max
    log_terms: list[dict] = [dict() for _ in range(n_max + 1)]
    for k in range(1, n_max + 1):
        zb = zbar_power(k, n_max)
        for m in range(k, n_max + 1):
            c = (ONE if m == k else ZERO) - zb[m]
            if c:
                log_terms[m][(k,)] = c / k
    log_series = ZSeries([PSeries(D, t) for t in log_terms], D, n_max)
    return zseries_exp(log_series)


def q_g(n: int, degree: int | None = None) -> PSeries:
    """``q[b]_n`` at its natural degree ``n`` (or embedded at ``degree``)."""
    if n < 0:
        raise ValueError("index must be non-negative")
    out = q_beta_g(max(n, 1))[n].with_degree(n)
    return out if degree is None else out.with_degree(degree)


@lru_cache(maxsize=None)
def ovq_beta_g(n: int) -> PSeries:
    """``(-1)^n sum_{l=0}^{n-1} C(n-1, l) b^l q[b]_{n-l}``, exact at degree ``n``."""
    if n < 1:
        raise ValueError("index must be positive")
    Q = q_beta_g(n)
    acc = PSeries.zero(n)
    for l in range(n):
        acc = acc + Q[n - l].scale(BETA ** l * comb(n - 1, l))
    return -acc if n % 2 else acc


def ovq_beta_g_series(n_max: int) -> ZSeries:
    """``Qbar[b](z) = Q[b](zbar)``, computed by substitution."""
    return substitute_zbar(q_beta_g(n_max))


def ovq_g(n: int, degree: int | None = None) -> PSeries:
    out = ovq_beta_g(n)
    return out if degree is None else out.with_degree(degree)


# ---------------------------------------------------------------------------
# GQ and gp

@lru_cache(maxsize=None)
def GQ(n: int, D: int) -> PSeries:
    """One-row ``GQ_n`` truncated at degree ``D``.

    ``GQ_{-n} = (-b)^n`` for ``n >= 0``; otherwise
    ``(sum_j (-b)^j q_{n+j}) / (sum_l (-b)^l q_l)``.
    """
    if n <= 0:
        return PSeries.constant((-BETA) ** (-n), D)
    Q = q_beta_G(max(D, 1), D)
    num = PSeries.zero(D)
    for j in range(D - n + 1):
        num = num + Q[n + j].scale((-BETA) ** j)
    return num * _q_at_minus_beta_inverse(D)


@lru_cache(maxsize=None)
def gp(n: int) -> PSeries:
    """``(1/2) sum_{k=0}^{n-1} (-b/2)^k q[b]_{n-k}``, exact at degree ``n``."""
    if n < 1:
        raise ValueError("index must be positive")
    Q = q_beta_g(n)
    step = -BETA * HALF
    acc = PSeries.zero(n)
    for k in range(n):
        acc = acc + Q[n - k].scale(step ** k)
    return acc.scale(HALF)


def _check_integral(poly: FinitePoly, what: str) -> FinitePoly:
    for e, c in poly.terms.items():
        if not is_in_z_beta(c):
            raise IntegralityError(f"{what}: coefficient {c} of x^{list(e)} is not in Z[b]")
    return poly


def _gq_numerator(N: int) -> FinitePoly:
    # prod_i (1 + x_i (z + b)) * prod_i (1 + b x_i) - prod_i (1 - x_i z); z is variable N
    nv = N + 1
    z = FinitePoly.var(N, nv)
    one = FinitePoly.constant(ONE, nv)
    left = one
    right = one
    for i in range(N):
        x = FinitePoly.var(i, nv)
        left = left * (one + x * (z + BETA)) * (one + x.scale(BETA))
        right = right * (one - x * z)
    return left - right


def _gp_numerator(N: int) -> FinitePoly:
    # prod_i (1 + b z + x_i z) - prod_i (1 - x_i z)(1 + b z); z is variable N
    nv = N + 1
    z = FinitePoly.var(N, nv)
    one = FinitePoly.constant(ONE, nv)
    left = one
    right = one
    for i in range(N):
        x = FinitePoly.var(i, nv)
        left = left * (one + z.scale(BETA) + x * z)
        right = right * (one - x * z) * (one + z.scale(BETA))
    return left - right


@lru_cache(maxsize=None)
def _gq_quotient(N: int) -> dict:
    return divide_out_linear(_gq_numerator(N), N, "-beta").coefficients_in(N)


@lru_cache(maxsize=None)
def _gp_quotient(N: int) -> dict:
    return divide_out_linear(_gp_numerator(N), N, "-2/beta").coefficients_in(N)


@lru_cache(maxsize=None)
def GQ_finite(n: int, N: int) -> FinitePoly:
    """``GQ_n(x_1..x_N)`` by the factor theorem; coefficients checked in Z[b].

    ``sum_n GQ_n z^n = z * (numerator / (z + b)) / prod_i (1 - x_i z)``.
    """
    if n < 1:
        raise ValueError("index must be positive")
    quo = _gq_quotient(N)
    acc = FinitePoly(N, {}, None, check=False)
    for j, qj in quo.items():
        k = n - 1 - j
        if k >= 0:
            acc = acc + qj * complete_homogeneous(k, N)
    return _check_integral(acc, f"GQ_{n}({N} variables)")


@lru_cache(maxsize=None)
def gp_finite(n: int, N: int) -> FinitePoly:
    """``gp_n(x_1..x_N)`` through division by ``2 + b z``.

    The quotient route only certifies Z[b, 1/b]; the generating-function
    route (:func:`gp`) only certifies Z[b, 1/2].  Both are computed and
    must agree, and the common value is then checked to be in Z[b].
    """
    if n < 1:
        raise ValueError("index must be positive")
    quo = _gp_quotient(N)
    damp = one_plus_beta_z_power(-N, n)
    acc = FinitePoly(N, {}, None, check=False)
    for j, qj in quo.items():
        for k in range(n - j + 1):
            l = n - j - k
            acc = acc + (qj * complete_homogeneous(k, N)).scale(damp[l])
    for c in acc.terms.values():
        if not is_laurent_integral(c):
            raise IntegralityError(f"gp_{n}: coefficient {c} is not in Z[b, 1/b]")
    series_route = specialize(gp(n), N)
    if not series_route.same_terms(acc):
        raise ArithmeticError(f"gp_{n}: factor-theorem and series routes disagree")
    return _check_integral(acc, f"gp_{n}({N} variables)")


# ---------------------------------------------------------------------------

def family(tag: str, n: int, D: int) -> PSeries:
    """Dispatch on the CLI family tag.

    G-side members come back truncated at ``D``; g-side members are exact
    at their natural degree ``n``.
    """
    if tag not in FAMILIES:
        raise ValueError(f"unknown family {tag!r}; expected one of {', '.join(FAMILIES)}")
    if tag != "GQ" and n < 1:
        raise ValueError(f"{tag} needs a positive index, got {n}")
    if tag == "pG":
        return p_beta_G(n, D)
    if tag == "pg":
        return p_beta_g(n)
    if tag == "qG":
        return q_G(n, D)
    if tag == "qg":
        return q_g(n)
    if tag == "ovqG":
        return ovq_G(n, D)
    if tag == "ovqg":
        return ovq_g(n)
    if tag == "GQ":
        return GQ(n, D)
    return gp(n)


__all__ = [
    "FAMILIES",
    "G_SIDE",
    "G_SIDE_DUAL",
    "NotInGGammaWarning",
    "p_beta_G",
    "p_beta_g",
    "q_beta_G",
    "q_G",
    "ovq_beta_G",
    "ovq_G",
    "ovq_G_closed",
    "q_beta_g",
    "q_g",
    "ovq_beta_g",
    "ovq_beta_g_series",
    "ovq_g",
    "GQ",
    "GQ_finite",
    "gp",
    "gp_finite",
    "family",
]
