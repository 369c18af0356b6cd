"""Degree-truncated symmetric functions in power-sum coordinates.

:class:`PSeries` holds ``sum c_lam p_lam`` over partitions ``lam`` with
``|lam| <= degree``; everything heavier is discarded.  ``b`` counts as
degree 0 for truncation.  :class:`ZSeries` is a power series in an
auxiliary variable ``z`` truncated at ``z^order``, with PSeries
coefficients sharing one truncation degree.
"""

from __future__ import annotations

from fractions import Fraction

from .coeff import BETA, ONE, ZERO, BetaScalar, binom_signed, scalar
from .partitions import canonical_key, merge


class PSeries:
    """Truncated symmetric function, ``terms[lam]`` is the coefficient of ``p_lam``.

    Instances are treated as immutable; ``terms`` must not be mutated after
    construction.
    """

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms=None, *, check: bool = True):
        if degree < 0:
            raise ValueError("truncation degree must be non-negative")
        self.degree = degree
        if terms is None:
            self.terms = {}
        elif check:
            clean = {}
            for lam, c in terms.items():
                lam = tuple(lam)
                if sum(lam) > degree:
                    continue
                c = scalar(c)
                if c:
                    clean[lam] = clean.get(lam, ZERO) + c
            self.terms = {k: v for k, v in clean.items() if v}
        else:
            self.terms = terms

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, degree: int) -> "PSeries":
        return cls(degree, {}, check=False)

    @classmethod
    def one(cls, degree: int) -> "PSeries":
        return cls.constant(ONE, degree)

    @classmethod
    def constant(cls, c, degree: int) -> "PSeries":
        c = scalar(c)
        return cls(degree, {(): c} if c else {}, check=False)

    @classmethod
    def p(cls, n: int, degree: int, coeff=ONE) -> "PSeries":
        """``coeff * p_n`` (zero if ``n`` exceeds the degree)."""
        if n < 1:
            raise ValueError("power sums are indexed from 1")
        c = scalar(coeff)
        if n > degree or not c:
            return cls.zero(degree)
        return cls(degree, {(n,): c}, check=False)

    @classmethod
    def monomial(cls, lam, degree: int, coeff=ONE) -> "PSeries":
        lam = tuple(sorted(lam, reverse=True))
        return cls(degree, {lam: coeff})

    # -- inspection -------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def coeff(self, lam) -> BetaScalar:
        return self.terms.get(tuple(lam), ZERO)

    def constant_term(self) -> BetaScalar:
        return self.terms.get((), ZERO)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: canonical_key(kv[0]))

    def component(self, d: int) -> "PSeries":
        """Homogeneous part of x-degree ``d``."""
        return PSeries(self.degree, {k: v for k, v in self.terms.items() if sum(k) == d}, check=False)

    def components(self) -> dict[int, dict]:
        out: dict[int, dict] = {}
        for k, v in self.terms.items():
            out.setdefault(sum(k), {})[k] = v
        return out

    def lowest_degree(self):
        return min((sum(k) for k in self.terms), default=None)

    def top_degree(self):
        return max((sum(k) for k in self.terms), default=None)

    def truncate(self, degree: int) -> "PSeries":
        if degree > self.degree:
            raise ValueError("cannot raise the truncation degree of a PSeries")
        return PSeries(degree, {k: v for k, v in self.terms.items() if sum(k) <= degree}, check=False)

    def with_degree(self, degree: int) -> "PSeries":
        """Reinterpret the same terms at another truncation degree.

        Raising the degree is only meaningful for exact (finite) elements.
        """
        if degree < self.degree:
            return self.truncate(degree)
        return PSeries(degree, self.terms, check=False)

    def __eq__(self, other):
        if isinstance(other, PSeries):
            return self.degree == other.degree and self.terms == other.terms
        if isinstance(other, (int, Fraction, BetaScalar)):
            return self == PSeries.constant(other, self.degree)
        return NotImplemented

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    # -- arithmetic -------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, PSeries):
            return PSeries.constant(other, self.degree)
        if other.degree != self.degree:
            raise ValueError(
                f"truncation degree mismatch: {self.degree} vs {other.degree}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if not other.terms:
            return self
        out = dict(self.terms)
        for k, v in other.terms.items():
            c = out.get(k)
            if c is None:
                out[k] = v
            else:
                c = c + v
                if c:
                    out[k] = c
                else:
                    del out[k]
        return PSeries(self.degree, out, check=False)

    __radd__ = __add__

    def __neg__(self):
        return PSeries(self.degree, {k: -v for k, v in self.terms.items()}, check=False)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def scale(self, c) -> "PSeries":
        c = scalar(c)
        if not c:
            return PSeries.zero(self.degree)
        if c == ONE:
            return self
        return PSeries(self.degree, {k: v * c for k, v in self.terms.items()}, check=False)

    def __mul__(self, other):
        if not isinstance(other, PSeries):
            return self.scale(other)
        other = self._check(other)
        D = self.degree
        if not self.terms or not other.terms:
            return PSeries.zero(D)
        # bucket the right factor by weight so heavy pairs are skipped
        right: dict[int, list] = {}
        for k, v in other.terms.items():
            right.setdefault(sum(k), []).append((k, v))
        rweights = sorted(right)
        out: dict = {}
        for k1, v1 in self.terms.items():
            w1 = sum(k1)
            room = D - w1
            for w2 in rweights:
                if w2 > room:
                    break
                for k2, v2 in right[w2]:
                    key = merge(k1, k2)
                    c = v1 * v2
                    prev = out.get(key)
                    out[key] = c if prev is None else prev + c
        return PSeries(D, {k: v for k, v in out.items() if v}, check=False)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        if isinstance(other, PSeries):
            return self * other.inverse()
        return self.scale(scalar(other).inverse())

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = PSeries.one(self.degree)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def inverse(self) -> "PSeries":
        """Multiplicative inverse; needs a nonzero constant term."""
        a0 = self.constant_term()
        if not a0:
            raise ZeroDivisionError("PSeries with zero constant term is not invertible")
        D = self.degree
        inv0 = a0.inverse()
        comps = self.components()
        parts = {0: {(): inv0}}
        # graded recurrence: b_d = -inv0 * sum_{k=1..d} a_k b_{d-k}
        for d in range(1, D + 1):
            acc: dict = {}
            for k in range(1, d + 1):
                ak = comps.get(k)
                bk = parts.get(d - k)
                if not ak or not bk:
                    continue
                for l1, v1 in ak.items():
                    for l2, v2 in bk.items():
                        key = merge(l1, l2)
                        c = v1 * v2
                        prev = acc.get(key)
                        acc[key] = c if prev is None else prev + c
            neg = -inv0
            parts[d] = {key: v * neg for key, v in acc.items() if v}
        out = {}
        for comp in parts.values():
            out.update(comp)
        return PSeries(D, {k: v for k, v in out.items() if v}, check=False)

    def map_coefficients(self, fn) -> "PSeries":
        return PSeries(self.degree, {k: fn(v) for k, v in self.terms.items()})

    def at_beta(self, value) -> "PSeries":
        """Specialize ``b`` to a rational value."""
        return self.map_coefficients(lambda c: c.at_beta(value))

    # -- display ----------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "terms": [
                {"partition": list(k), "coeff": v.to_text()}
                for k, v in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PSeries":
        return cls(int(data["degree"]),
                   {tuple(t["partition"]): scalar(t["coeff"]) for t in data["terms"]})

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for lam, c in self.sorted_terms():
            mono = "*".join(f"p{x}" for x in lam)
            if not mono:
                parts.append(f"({c.to_text()})")
            elif c == ONE:
                parts.append(mono)
            else:
                parts.append(f"({c.to_text()})*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"PSeries(degree={self.degree}, {self.to_text()})"


def is_homogeneous_beta_graded(a: PSeries, n: int, beta_degree: int = -1) -> bool:
    """Homogeneity of degree ``n`` when ``x_i`` has degree 1 and ``b`` has ``beta_degree``.

    The G-side families are homogeneous with ``beta_degree=-1``; the finite
    dual families with ``beta_degree=+1``.
    """
    if beta_degree not in (1, -1):
        raise ValueError("beta_degree must be +1 or -1")
    for lam, c in a.terms.items():
        e = c.beta_monomial_exponent()
        if e is None:
            return False
        if sum(lam) + beta_degree * e != n:
            return False
    return True


# ---------------------------------------------------------------------------

class ZSeries:
    """``sum_{k <= order} coeffs[k] z^k`` with PSeries coefficients."""

    __slots__ = ("order", "degree", "coeffs")

    def __init__(self, coeffs, degree: int | None = None, order: int | None = None):
        coeffs = list(coeffs)
        if degree is None:
            if not coeffs:
                raise ValueError("degree needed for an empty ZSeries")
            degree = coeffs[0].degree
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("order must be non-negative")
        coeffs = coeffs[: order + 1]
        coeffs += [PSeries.zero(degree)] * (order + 1 - len(coeffs))
        for c in coeffs:
            if c.degree != degree:
                raise ValueError("all ZSeries coefficients must share one truncation degree")
        self.order = order
        self.degree = degree
        self.coeffs = coeffs

    @classmethod
    def zero(cls, order: int, degree: int) -> "ZSeries":
        return cls([], degree, order)

    @classmethod
    def one(cls, order: int, degree: int) -> "ZSeries":
        return cls([PSeries.one(degree)], degree, order)

    @classmethod
    def from_scalars(cls, values, order: int, degree: int) -> "ZSeries":
        return cls([PSeries.constant(v, degree) for v in values], degree, order)

    def __getitem__(self, k: int) -> PSeries:
        if k < 0 or k > self.order:
            return PSeries.zero(self.degree)
        return self.coeffs[k]

    def __eq__(self, other):
        if not isinstance(other, ZSeries):
            return NotImplemented
        return (self.order, self.degree, self.coeffs) == (other.order, other.degree, other.coeffs)

    def _check(self, other):
        if not isinstance(other, ZSeries):
            raise TypeError("expected ZSeries")
        if (other.order, other.degree) != (self.order, self.degree):
            raise ValueError(
                f"ZSeries shape mismatch: (order, degree) {(self.order, self.degree)} "
                f"vs {(other.order, other.degree)}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return ZSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.degree, self.order)

    def __sub__(self, other):
        other = self._check(other)
        return ZSeries([a - b for a, b in zip(self.coeffs, other.coeffs)], self.degree, self.order)

    def __neg__(self):
        return ZSeries([-a for a in self.coeffs], self.degree, self.order)

    def scale(self, c) -> "ZSeries":
        if isinstance(c, PSeries):
            return ZSeries([a * c for a in self.coeffs], self.degree, self.order)
        return ZSeries([a.scale(c) for a in self.coeffs], self.degree, self.order)

    def __mul__(self, other):
        if not isinstance(other, ZSeries):
            return self.scale(other)
        return zseries_mul(self, other)

    def is_one(self) -> bool:
        return self.coeffs[0] == PSeries.one(self.degree) and all(not c for c in self.coeffs[1:])

    def truncate_order(self, order: int) -> "ZSeries":
        return ZSeries(self.coeffs[: order + 1], self.degree, order)

    def __repr__(self):
        return f"ZSeries(order={self.order}, degree={self.degree})"


def zseries_mul(a: ZSeries, b: ZSeries) -> ZSeries:
    """Cauchy product truncated at the common order."""
    b = a._check(b)
    M, D = a.order, a.degree
    out = []
    for n in range(M + 1):
        acc = PSeries.zero(D)
        for k in range(n + 1):
            x, y = a.coeffs[k], b.coeffs[n - k]
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return ZSeries(out, D, M)


def zseries_invert(a: ZSeries) -> ZSeries:
    """Inverse series; the z^0 coefficient must have a nonzero constant term."""
    M, D = a.order, a.degree
    if not a.coeffs[0].constant_term():
        raise ZeroDivisionError("ZSeries constant coefficient is not invertible")
    b0 = a.coeffs[0].inverse()
    out = [b0]
    for n in range(1, M + 1):
        acc = PSeries.zero(D)
        for k in range(1, n + 1):
            x, y = a.coeffs[k], out[n - k]
            if x and y:
                acc = acc + x * y
        out.append(-(acc * b0))
    return ZSeries(out, D, M)


def zseries_exp(a: ZSeries) -> ZSeries:
    """``exp(a)`` for ``a`` with vanishing z^0 coefficient."""
    if a.coeffs[0]:
        raise ValueError("exp needs a series without constant z-term")
    M, D = a.order, a.degree
    out = [PSeries.one(D)]
    # n b_n = sum_{k=1..n} k a_k b_{n-k}
    for n in range(1, M + 1):
        acc = PSeries.zero(D)
        for k in range(1, n + 1):
            x, y = a.coeffs[k], out[n - k]
            if x and y:
                acc = acc + (x * y).scale(k)
        out.append(acc.scale(Fraction(1, n)))
    return ZSeries(out, D, M)


def zseries_log(a: ZSeries) -> ZSeries:
    """``log(a)`` for ``a`` with z^0 coefficient exactly 1."""
    M, D = a.order, a.degree
    if a.coeffs[0] != PSeries.one(D):
        raise ValueError("log needs a series with constant z-term 1")
    out = [PSeries.zero(D)]
    # n l_n = n a_n - sum_{k=1..n-1} k l_k a_{n-k}
    for n in range(1, M + 1):
        acc = a.coeffs[n].scale(n)
        for k in range(1, n):
            x, y = out[k], a.coeffs[n - k]
            if x and y:
                acc = acc - (x * y).scale(k)
        out.append(acc.scale(Fraction(1, n)))
    return ZSeries(out, D, M)


def zbar_power(n: int, order: int) -> list[BetaScalar]:
    """Scalar coefficients of ``zbar^n = (-z / (1 + b z))^n`` up to ``z^order``."""
    out = [ZERO] * (order + 1)
    if n == 0:
        out[0] = ONE
        return out
    sign = -1 if n % 2 else 1
    for j in range(order - n + 1):
        out[n + j] = BETA ** j * (sign * binom_signed(-n, j))
    return out


def substitute_zbar(a: ZSeries) -> ZSeries:
    """Replace ``z`` by ``zbar = -z / (1 + b z)``."""
    M, D = a.order, a.degree
    out = [PSeries.zero(D) for _ in range(M + 1)]
    for n, c in enumerate(a.coeffs):
        if not c:
            continue
        for m, s in enumerate(zbar_power(n, M)):
            if s:
                out[m] = out[m] + c.scale(s)
    return ZSeries(out, D, M)


def substitute_affine(a: ZSeries, scale, shift) -> ZSeries:
    """``sum_n a_n (scale*z + shift)^n``, truncated at the same order.

    Only exact when ``a`` is a polynomial in ``z`` of degree <= order
    (true for any family at ``order >= degree``).
    """
    M, D = a.order, a.degree
    scale, shift = scalar(scale), scalar(shift)
    out = [PSeries.zero(D) for _ in range(M + 1)]
    for n, c in enumerate(a.coeffs):
        if not c:
            continue
        # (s z + t)^n = sum_k C(n,k) s^k t^(n-k) z^k
        for k in range(min(n, M) + 1):
            w = scale ** k * shift ** (n - k) * binom_signed(n, k)
            if w:
                out[k] = out[k] + c.scale(w)
    return ZSeries(out, D, M)


def evaluate_at(a: ZSeries, value) -> PSeries:
    """``sum_n a_n value^n`` as a PSeries (same exactness caveat as above)."""
    value = scalar(value)
    acc = PSeries.zero(a.degree)
    for n, c in enumerate(a.coeffs):
        if c:
            acc = acc + c.scale(value ** n)
    return acc


def psum_substitute(a: PSeries, images, degree: int | None = None) -> PSeries:
    """Apply the ring map ``p_n -> images(n)`` to ``a``.

    ``images(n)`` returns a PSeries at truncation ``degree`` (default
    ``a.degree``).  Monomials are built incrementally and memoized.
    """
    D = a.degree if degree is None else degree
    single: dict[int, PSeries] = {}
    memo: dict[tuple, PSeries] = {(): PSeries.one(D)}

    def image_of(lam):
        got = memo.get(lam)
        if got is not None:
            return got
        n = lam[-1]
        if n not in single:
            single[n] = images(n)
        got = image_of(lam[:-1]) * single[n]
        memo[lam] = got
        return got

    acc: dict = {}
    for lam, c in sorted(a.terms.items(), key=lambda kv: canonical_key(kv[0])):
        for k, v in image_of(lam).terms.items():
            t = v * c
            prev = acc.get(k)
            acc[k] = t if prev is None else prev + t
    return PSeries(D, {k: v for k, v in acc.items() if v}, check=False)


__all__ = [
    "PSeries",
    "ZSeries",
    "zseries_mul",
    "zseries_invert",
    "zseries_exp",
    "zseries_log",
    "substitute_zbar",
    "substitute_affine",
    "evaluate_at",
    "zbar_power",
    "psum_substitute",
    "is_homogeneous_beta_graded",
]
