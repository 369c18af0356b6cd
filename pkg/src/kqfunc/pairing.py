"""Bilinear form between G-side truncations and g-side polynomials.

The form is diagonal in odd power-sum monomials:
``<pG_lam, pg_mu> = 2^(-len(lam)) z_lam`` when ``lam == mu`` and 0 otherwise.
The Cauchy-kernel check here is a test oracle only; :func:`pair` never
goes through the kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .coeff import BETA, ONE, ZERO, BetaScalar, scalar
from .expand import MembershipError, to_pG_coords, to_pg_coords
from .finvar import FinitePoly, specialize
from .kqfam import p_beta_G, p_beta_g
from .partitions import partitions_upto, z_lambda
from .psym import PSeries


@dataclass(frozen=True)
class PairingResult:
    value: BetaScalar
    degree_used: int

    def to_json(self) -> dict:
        return {"value": self.value.to_text(), "degree_used": self.degree_used}


def pairing_weight(lam) -> Fraction:
    """``2^(-len(lam)) z_lam``."""
    return Fraction(z_lambda(lam), 2 ** len(lam))


def pair(f: PSeries, g: PSeries) -> PairingResult:
    """``<f, g>`` with ``f`` on the G-side and ``g`` a g-side polynomial.

    Only coordinates of ``f`` up to the top degree of ``g`` are read, so
    ``f`` needs to be known at least that far.
    """
    g_coords, g_res = to_pg_coords(g)
    if g_res:
        lam, c = g_res.sorted_terms()[0]
        raise MembershipError(f"second argument has the even pg monomial ({c.to_text()})*pg{list(lam)}", g_res)
    used = g.top_degree() or 0
    if f.degree < used:
        raise ValueError(f"first argument is truncated at {f.degree} but degree {used} is needed")
    f_coords, f_res = to_pG_coords(f.truncate(used), used)
    if f_res:
        lam, c = f_res.sorted_terms()[0]
        raise MembershipError(f"first argument has the even pG monomial ({c.to_text()})*pG{list(lam)}", f_res)
    acc = ZERO
    for lam, gc in g_coords.coords.items():
        fc = f_coords.coeff(lam)
        if fc:
            acc = acc + fc * gc * scalar(pairing_weight(lam))
    return PairingResult(acc, used)


def pG_monomial(lam, D: int) -> PSeries:
    acc = PSeries.one(D)
    for n in lam:
        acc = acc * p_beta_G(n, D)
    return acc


def pg_monomial(lam) -> PSeries:
    D = sum(lam)
    acc = PSeries.one(D)
    for n in lam:
        acc = acc * p_beta_g(n).with_degree(D)
    return acc


# ---------------------------------------------------------------------------
# Cauchy kernel

def _kernel_lhs(N: int, M: int, D: int, beta) -> FinitePoly:
    nv = N + M
    x_single: dict[int, FinitePoly] = {}
    y_single: dict[int, FinitePoly] = {}

    def xs(n):
        if n not in x_single:
            x_single[n] = specialize(p_beta_G(n, D), N, nvars=nv).at_beta(beta)
        return x_single[n]

    def ys(n):
        if n not in y_single:
            y_single[n] = specialize(p_beta_g(n).with_degree(D), M, offset=N, nvars=nv).at_beta(beta)
        return y_single[n]

    acc = FinitePoly.constant(ONE, nv, D)
    for lam in partitions_upto(D - 1, "odd"):
        if not lam:
            continue
        term = FinitePoly.constant(scalar(Fraction(2 ** len(lam), z_lambda(lam))), nv, D)
        for n in lam:
            term = term * xs(n) * ys(n)
        acc = acc + term
    return acc


def _kernel_rhs(N: int, M: int, D: int, beta) -> FinitePoly:
    # prod_{i,j} (1 + x_i y_j / (1 + b x_i)) / (1 - x_i y_j), expanded factor by factor
    nv = N + M
    b = scalar(beta)
    acc = FinitePoly.constant(ONE, nv, D)
    for i in range(N):
        x = FinitePoly.var(i, nv, D)
        geo_x = FinitePoly.constant(ONE, nv, D)
        for k in range(1, D + 1):
            geo_x = geo_x + (x ** k).scale((-b) ** k)
        for j in range(M):
            xy = x * FinitePoly.var(N + j, nv, D)
            num = FinitePoly.constant(ONE, nv, D) + xy * geo_x
            den = FinitePoly.constant(ONE, nv, D)
            for k in range(1, D // 2 + 1):
                den = den + xy ** k
            acc = acc * num * den
    return acc


def _classical_kernel(N: int, M: int, D: int) -> FinitePoly:
    # prod (1 + x y) / (1 - x y) = prod (1 + 2 sum_{k>=1} (x y)^k)
    nv = N + M
    acc = FinitePoly.constant(ONE, nv, D)
    for i in range(N):
        for j in range(M):
            xy = FinitePoly.var(i, nv, D) * FinitePoly.var(N + j, nv, D)
            f = FinitePoly.constant(ONE, nv, D)
            for k in range(1, D // 2 + 1):
                f = f + (xy ** k).scale(2)
            acc = acc * f
    return acc


@lru_cache(maxsize=None)
def cauchy_kernel_sides(N: int, M: int, D: int, beta_zero: bool = False):
    """``(sum side, product side)`` as truncated polynomials in x_1..x_N, y_1..y_M."""
    beta = 0 if beta_zero else BETA
    return _kernel_lhs(N, M, D, beta), _kernel_rhs(N, M, D, beta)


def cauchy_kernel_check(N: int, M: int, D: int, beta_zero: bool = False) -> bool:
    """Exact equality of both kernel routes at total degree ``D``.

    With ``beta_zero`` both sides are taken at b = 0 and must also agree
    with the classical ``prod (1 + x y) / (1 - x y)``.
    """
    if min(N, M, D) < 1:
        raise ValueError("N, M and D must be positive")
    lhs, rhs = cauchy_kernel_sides(N, M, D, beta_zero)
    if not lhs.same_terms(rhs):
        return False
    if beta_zero:
        return lhs.same_terms(_classical_kernel(N, M, D))
    return True


__all__ = [
    "PairingResult",
    "pair",
    "pairing_weight",
    "pG_monomial",
    "pg_monomial",
    "cauchy_kernel_sides",
    "cauchy_kernel_check",
]
