"""Polynomials and truncated series in finitely many variables.

:class:`FinitePoly` maps exponent vectors to :class:`BetaScalar`.  When
``degree`` is set the object is a truncated series: every monomial of total
degree above it has been dropped and products keep dropping them.  With
``degree=None`` it is an honest polynomial.

Two substitution checks live here:

* dual cancellation, ``x1 = t, x2 = -t - b``, done as an exact polynomial
  identity;
* K-Q cancellation, ``x1 = t, x2 = tbar = -t/(1 + b t)``, done with ``tbar``
  expanded as a power series, exact through the truncation degree.
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from math import comb

from .coeff import (
    BETA,
    ONE,
    ZERO,
    BetaScalar,
    binom_signed,
    is_in_z_beta,
    is_laurent_integral,
    scalar,
)
from .psym import PSeries, zbar_power


class IntegralityError(ArithmeticError):
    """A value that must lie in Z[b] (or Z[b, 1/b]) does not."""


class FactorError(ArithmeticError):
    """Synthetic division left a nonzero remainder."""


def _min_degree(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class FinitePoly:
    __slots__ = ("nvars", "terms", "degree")

    def __init__(self, nvars: int, terms=None, degree: int | None = None, *, check: bool = True):
        self.nvars = nvars
        self.degree = degree
        if terms is None:
            self.terms = {}
        elif check:
            clean: dict = {}
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nvars or any(x < 0 for x in e):
                    raise ValueError(f"bad exponent vector {e} for {nvars} variables")
                if degree is not None and sum(e) > degree:
                    continue
                c = scalar(c)
                if c:
                    clean[e] = clean.get(e, ZERO) + c
            self.terms = {k: v for k, v in clean.items() if v}
        else:
            self.terms = terms

    @classmethod
    def constant(cls, c, nvars: int, degree: int | None = None) -> "FinitePoly":
        c = scalar(c)
        return cls(nvars, {(0,) * nvars: c} if c else {}, degree, check=False)

    @classmethod
    def var(cls, i: int, nvars: int, degree: int | None = None, coeff=ONE) -> "FinitePoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): coeff}, degree)

    # -- inspection -------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, FinitePoly):
            return (self.nvars, self.degree, self.terms) == (other.nvars, other.degree, other.terms)
        return NotImplemented

    def same_terms(self, other: "FinitePoly") -> bool:
        return self.nvars == other.nvars and self.terms == other.terms

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=None)

    def coeff(self, e) -> BetaScalar:
        return self.terms.get(tuple(e), ZERO)

    def is_integral(self) -> bool:
        return all(is_in_z_beta(c) for c in self.terms.values())

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), tuple(-x for x in kv[0])))

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if not isinstance(other, FinitePoly):
            return FinitePoly.constant(other, self.nvars, self.degree)
        if other.nvars != self.nvars:
            raise ValueError("variable count mismatch")
        return other

    def truncate(self, degree: int | None) -> "FinitePoly":
        if degree is None:
            return self
        return FinitePoly(self.nvars, {e: c for e, c in self.terms.items() if sum(e) <= degree},
                          _min_degree(self.degree, degree), check=False)

    def __add__(self, other):
        other = self._coerce(other)
        D = _min_degree(self.degree, other.degree)
        out = dict(self.terms)
        for e, c in other.terms.items():
            prev = out.get(e)
            out[e] = c if prev is None else prev + c
        return FinitePoly(self.nvars, {e: c for e, c in out.items() if c and (D is None or sum(e) <= D)},
                          D, check=False)

    __radd__ = __add__

    def __neg__(self):
        return FinitePoly(self.nvars, {e: -c for e, c in self.terms.items()}, self.degree, check=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "FinitePoly":
        c = scalar(c)
        if not c:
            return FinitePoly(self.nvars, {}, self.degree, check=False)
        return FinitePoly(self.nvars, {e: v * c for e, v in self.terms.items()}, self.degree, check=False)

    def __mul__(self, other):
        if not isinstance(other, FinitePoly):
            return self.scale(other)
        other = self._coerce(other)
        D = _min_degree(self.degree, other.degree)
        out: dict = {}
        right = [(e, sum(e), c) for e, c in other.terms.items()]
        for e1, c1 in self.terms.items():
            w1 = sum(e1)
            for e2, w2, c2 in right:
                if D is not None and w1 + w2 > D:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                t = c1 * c2
                prev = out.get(e)
                out[e] = t if prev is None else prev + t
        return FinitePoly(self.nvars, {e: c for e, c in out.items() if c}, D, check=False)

    __rmul__ = scale

    def __pow__(self, k: int):
        out = FinitePoly.constant(ONE, self.nvars, self.degree)
        for _ in range(k):
            out = out * self
        return out

    def at_beta(self, value) -> "FinitePoly":
        return FinitePoly(self.nvars, {e: c.at_beta(value) for e, c in self.terms.items()}, self.degree)

    def coefficients_in(self, var: int) -> dict[int, "FinitePoly"]:
        """Split by the exponent of ``var``; the returned polys drop that variable."""
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            rest = e[:var] + e[var + 1:]
            out.setdefault(e[var], {})[rest] = c
        return {k: FinitePoly(self.nvars - 1, v, None, check=False) for k, v in out.items()}

    @classmethod
    def from_coefficients_in(cls, var: int, parts: dict[int, "FinitePoly"]) -> "FinitePoly":
        """Inverse of :meth:`coefficients_in`."""
        nv = None
        out: dict = {}
        for k, poly in parts.items():
            nv = poly.nvars + 1
            for e, c in poly.terms.items():
                out[e[:var] + (k,) + e[var:]] = c
        if nv is None:
            raise ValueError("cannot infer variable count from no parts")
        return cls(nv, {e: c for e, c in out.items() if c}, None, check=False)

    # -- display ----------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "num_vars": self.nvars,
            "degree": self.degree,
            "terms": [{"monomial": list(e), "coeff": c.to_text()} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FinitePoly":
        return cls(int(data["num_vars"]),
                   {tuple(t["monomial"]): scalar(t["coeff"]) for t in data["terms"]},
                   data.get("degree"))

    def to_text(self, names=None) -> str:
        if names is None:
            names = [f"x{i + 1}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if not mono:
                parts.append(f"({c.to_text()})")
            elif c == ONE:
                parts.append(mono)
            else:
                parts.append(f"({c.to_text()})*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"FinitePoly(nvars={self.nvars}, degree={self.degree}, {self.to_text()})"


# ---------------------------------------------------------------------------

def power_sum(k: int, N: int, *, offset: int = 0, nvars: int | None = None,
              degree: int | None = None) -> FinitePoly:
    """``x_{offset+1}^k + ... + x_{offset+N}^k`` inside ``nvars`` variables."""
    nv = N + offset if nvars is None else nvars
    terms = {}
    for i in range(N):
        e = [0] * nv
        e[offset + i] = k
        terms[tuple(e)] = ONE
    return FinitePoly(nv, terms, degree)


def complete_homogeneous(k: int, N: int) -> FinitePoly:
    """``h_k(x_1..x_N)``: every monomial of total degree ``k`` with coefficient 1."""
    terms = {}
    for combo in combinations_with_replacement(range(N), k):
        e = [0] * N
        for i in combo:
            e[i] += 1
        terms[tuple(e)] = ONE
    return FinitePoly(N, terms, None, check=False)


def specialize(a: PSeries, N: int, *, offset: int = 0, nvars: int | None = None) -> FinitePoly:
    """Set ``p_k = x_1^k + ... + x_N^k``; keeps the truncation degree of ``a``.

    ``offset``/``nvars`` place the variables inside a larger polynomial ring,
    which the Cauchy check uses to hold ``x`` and ``y`` side by side.
    """
    nv = N + offset if nvars is None else nvars
    D = a.degree
    single: dict[int, FinitePoly] = {}
    memo: dict[tuple, FinitePoly] = {(): FinitePoly.constant(ONE, nv, D)}

    def image(lam):
        got = memo.get(lam)
        if got is None:
            k = lam[-1]
            if k not in single:
                single[k] = power_sum(k, N, offset=offset, nvars=nv, degree=D)
            got = image(lam[:-1]) * single[k]
            memo[lam] = got
        return got

    acc: dict = {}
    for lam, c in a.terms.items():
        for e, v in image(lam).terms.items():
            t = v * c
            prev = acc.get(e)
            acc[e] = t if prev is None else prev + t
    return FinitePoly(nv, {e: v for e, v in acc.items() if v}, D, check=False)


# ---------------------------------------------------------------------------
# cancellation checks

def _substitute_pair(f: FinitePoly, x2_powers, t_bound, total_bound):
    """Substitute ``x1 = t`` and ``x2 = series(t)``; returns {(t_exp, rest...): coeff}.

    ``x2_powers(e)`` gives the scalar coefficient list of ``x2^e`` in ``t``.
    """
    out: dict = {}
    for e, c in f.terms.items():
        a, b, rest = e[0], e[1], e[2:]
        wrest = sum(rest)
        for j, s in enumerate(x2_powers(b)):
            if not s:
                continue
            tdeg = a + j
            if t_bound is not None and tdeg > t_bound:
                break
            if total_bound is not None and tdeg + wrest > total_bound:
                break
            key = (tdeg,) + rest
            t = c * s
            prev = out.get(key)
            out[key] = t if prev is None else prev + t
    return {k: v for k, v in out.items() if v}


def dual_cancellation_residual(f: FinitePoly) -> dict:
    """t-dependent part of ``f(t, -t - b, x3, ...)`` as ``{(t_exp, rest...): coeff}``."""
    if f.nvars < 2:
        raise ValueError("dual cancellation needs at least two variables")
    cache: dict[int, list] = {}

    def powers(e):
        # (-t - b)^e = (-1)^e sum_j C(e, j) b^(e-j) t^j
        if e not in cache:
            sign = -1 if e % 2 else 1
            cache[e] = [BETA ** (e - j) * (sign * comb(e, j)) for j in range(e + 1)]
        return cache[e]

    sub = _substitute_pair(f, powers, None, None)
    return {k: v for k, v in sub.items() if k[0] > 0}


def check_dual_cancellation(f: FinitePoly) -> bool:
    """``f(t, -t - b, x3, ...)`` is independent of ``t`` (as a polynomial identity).

    ``f`` is read as a polynomial; a truncation degree, if any, is ignored,
    so pass the exact specialization of a finite element.
    """
    return not dual_cancellation_residual(f)


def kq_cancellation_residual(f: FinitePoly, t_order: int | None = None) -> dict:
    """t-dependent part of ``f(t, tbar, x3, ...)`` through ``t^t_order``.

    Terms are kept only up to the total degree bound of ``f`` (``tbar`` has
    no constant term, so every such term is exact).
    """
    if f.nvars < 2:
        raise ValueError("K-Q cancellation needs at least two variables")
    if t_order is None:
        t_order = f.degree
    if t_order is None:
        raise ValueError("t_order is required for an untruncated polynomial")
    cache: dict[int, list] = {}

    def powers(e):
        if e not in cache:
            cache[e] = zbar_power(e, t_order)
        return cache[e]

    sub = _substitute_pair(f, powers, t_order, f.degree)
    return {k: v for k, v in sub.items() if k[0] > 0}


def check_kq_cancellation(f: FinitePoly, t_order: int | None = None) -> bool:
    """``f(t, tbar, x3, ...)`` has no ``t^1 .. t^t_order`` terms (default order: ``f.degree``)."""
    return not kq_cancellation_residual(f, t_order)


# ---------------------------------------------------------------------------
# factor theorem

ROOTS = ("-beta", "-2/beta")


def divide_out_linear(a: FinitePoly, var: int, root: str) -> FinitePoly:
    """Exact quotient of ``a`` by ``(z + b)`` or ``(2 + b z)``, ``z`` being ``var``.

    ``root`` is ``'-beta'`` or ``'-2/beta'``.  A nonzero remainder raises
    :class:`FactorError`.  In the ``'-2/beta'`` case the quotient
    coefficients must lie in Z[b, 1/b]; anything else raises
    :class:`IntegralityError`.
    """
    if root not in ROOTS:
        raise ValueError(f"root must be one of {ROOTS}")
    parts = a.coefficients_in(var)
    if not parts:
        return FinitePoly(a.nvars, {}, None, check=False)
    top = max(parts)
    zero = FinitePoly(a.nvars - 1, {}, None, check=False)
    r = BETA if root == "-beta" else scalar(2) / BETA
    # synthetic division by (z + r): q_{k-1} = c_k - r q_k, remainder c_0 - r q_0
    q: dict[int, FinitePoly] = {}
    carry = zero
    for k in range(top, 0, -1):
        carry = parts.get(k, zero) - carry.scale(r)
        q[k - 1] = carry
    remainder = parts.get(0, zero) - carry.scale(r)
    if remainder:
        raise FactorError(f"polynomial does not vanish at z = {root}")
    if root == "-2/beta":
        inv = ONE / BETA
        q = {k: v.scale(inv) for k, v in q.items()}
        for v in q.values():
            for c in v.terms.values():
                if not is_laurent_integral(c):
                    raise IntegralityError(f"quotient coefficient {c} is not in Z[b, 1/b]")
    q = {k: v for k, v in q.items() if v}
    if not q:
        return FinitePoly(a.nvars, {}, None, check=False)
    return FinitePoly.from_coefficients_in(var, q)


def linear_divisor(nvars: int, var: int, root: str) -> FinitePoly:
    """``z + b`` or ``2 + b z`` as a FinitePoly."""
    z = FinitePoly.var(var, nvars)
    if root == "-beta":
        return z + BETA
    if root == "-2/beta":
        return z.scale(BETA) + 2
    raise ValueError(f"root must be one of {ROOTS}")


def geometric_inverse_coefficients(N: int, upto: int) -> list[FinitePoly]:
    """Coefficients ``h_0..h_upto`` of ``1 / prod_i (1 - x_i z)``."""
    return [complete_homogeneous(k, N) for k in range(upto + 1)]


def one_plus_beta_z_power(e: int, upto: int) -> list[BetaScalar]:
    """Scalar coefficients of ``(1 + b z)^e`` (``e`` may be negative) up to ``z^upto``."""
    return [BETA ** j * binom_signed(e, j) for j in range(upto + 1)]


__all__ = [
    "FinitePoly",
    "IntegralityError",
    "FactorError",
    "power_sum",
    "complete_homogeneous",
    "specialize",
    "check_dual_cancellation",
    "dual_cancellation_residual",
    "check_kq_cancellation",
    "kq_cancellation_residual",
    "divide_out_linear",
    "linear_divisor",
    "geometric_inverse_coefficients",
    "one_plus_beta_z_power",
]
