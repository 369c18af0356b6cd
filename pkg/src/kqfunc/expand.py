"""Expansions of symmetric series in the b-deformed bases.

Everything here is exact linear algebra over Q(b).  G-side bases are
infinite sums, so their expansions are solved from the lowest x-degree
upwards and carry a truncation degree.  g-side elements are polynomials,
so their expansions start at the top degree and are exact.

The second half holds the symbolic machinery expressing ``gp_{2n}`` as a
polynomial in the odd ``gp``'s: :class:`FormalGPPoly`, :func:`keven_reduce`
and :func:`gp_even_to_odd`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial, prod

from .coeff import (
    BETA,
    HALF,
    ONE,
    ZERO,
    BetaScalar,
    LaurentBetaPoly,
    binom_signed,
    parse_scalar,
    scalar,
)
from .kqfam import GQ, ovq_G, ovq_g, p_beta_G, p_beta_g, q_G, q_g
from .partitions import canonical_key, in_class, is_odd, multiplicities, partitions
from .psym import PSeries, psum_substitute

BASES = (
    "pG_odd", "qG_odd", "ovqG_odd", "qG_strict", "ovqG_strict",
    "pg_odd", "qg_odd", "ovqg_odd", "qg_strict", "ovqg_strict",
    "GQ_odd",
)
G_SIDE_BASES = ("pG_odd", "qG_odd", "ovqG_odd", "qG_strict", "ovqG_strict", "GQ_odd")


class ExpansionError(ArithmeticError):
    """A graded block could not be solved."""


class MembershipError(ExpansionError):
    """The input is not in the span of the requested basis.

    ``residual`` holds the offending part, in the coordinates that were
    being matched when the failure was detected.
    """

    def __init__(self, message: str, residual: PSeries | None = None):
        super().__init__(message)
        self.residual = residual

    def leading_term(self):
        if self.residual is None or not self.residual:
            return None
        return self.residual.sorted_terms()[0]


def basis_class(basis: str) -> str:
    if basis not in BASES:
        raise ValueError(f"unknown basis {basis!r}; expected one of {', '.join(BASES)}")
    return basis.rsplit("_", 1)[1]


def is_g_side(basis: str) -> bool:
    basis_class(basis)
    return basis not in G_SIDE_BASES


def _family_element(basis: str, n: int, D: int) -> PSeries:
    fam = basis.rsplit("_", 1)[0]
    if fam == "pG":
        return p_beta_G(n, D)
    if fam == "qG":
        return q_G(n, D)
    if fam == "ovqG":
        return ovq_G(n, D)
    if fam == "GQ":
        return GQ(n, D)
    if fam == "pg":
        return p_beta_g(n).with_degree(D)
    if fam == "qg":
        return q_g(n, D)
    if fam == "ovqg":
        return ovq_g(n, D)
    raise ValueError(f"unknown basis {basis!r}")


class _BasisProducts:
    """Memoized products ``b_lam = prod_i b_{lam_i}`` at a fixed degree."""

    def __init__(self, basis: str, D: int):
        self.basis = basis
        self.D = D
        self._single: dict[int, PSeries] = {}
        self._memo: dict[tuple, PSeries] = {(): PSeries.one(D)}

    def __call__(self, lam) -> PSeries:
        lam = tuple(lam)
        got = self._memo.get(lam)
        if got is None:
            n = lam[-1]
            one = self._single.get(n)
            if one is None:
                one = self._single[n] = _family_element(self.basis, n, self.D)
            got = self(lam[:-1]) * one
            self._memo[lam] = got
        return got


@lru_cache(maxsize=64)
def basis_products(basis: str, D: int) -> _BasisProducts:
    basis_class(basis)
    return _BasisProducts(basis, D)


def basis_element(basis: str, lam, D: int) -> PSeries:
    """The product of basis family members indexed by the parts of ``lam``."""
    lam = tuple(sorted(lam, reverse=True))
    if not in_class(lam, basis_class(basis)):
        raise ValueError(f"{lam} is not a valid index for basis {basis}")
    return basis_products(basis, D)(lam)


# ---------------------------------------------------------------------------
# Expansion

@dataclass
class Expansion:
    basis: str
    degree: int
    coords: dict = field(default_factory=dict)

    def __post_init__(self):
        kind = basis_class(self.basis)
        clean = {}
        for lam, c in self.coords.items():
            lam = tuple(lam)
            if not in_class(lam, kind) or sum(lam) > self.degree:
                raise ValueError(f"partition {lam} not allowed in {self.basis} at degree {self.degree}")
            c = scalar(c)
            if c:
                clean[lam] = c
        self.coords = clean

    def coeff(self, lam) -> BetaScalar:
        return self.coords.get(tuple(lam), ZERO)

    def sorted_coords(self):
        return sorted(self.coords.items(), key=lambda kv: canonical_key(kv[0]))

    def nonzero_count(self) -> int:
        return len(self.coords)

    def recombine(self) -> PSeries:
        """``sum coords[lam] * b_lam`` at the expansion's degree."""
        prods = basis_products(self.basis, self.degree)
        acc = PSeries.zero(self.degree)
        for lam, c in self.sorted_coords():
            acc = acc + prods(lam).scale(c)
        return acc

    def to_json(self) -> dict:
        return {
            "basis": self.basis,
            "degree": self.degree,
            "coords": [{"partition": list(lam), "coeff": c.to_text()} for lam, c in self.sorted_coords()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Expansion":
        coords = {tuple(t["partition"]): parse_scalar(t["coeff"]) for t in data["coords"]}
        return cls(data["basis"], int(data["degree"]), coords)

    def to_text(self) -> str:
        if not self.coords:
            return "0"
        tag = self.basis.rsplit("_", 1)[0]
        parts = []
        for lam, c in self.sorted_coords():
            name = "1" if not lam else "*".join(f"{tag}{k}" for k in lam)
            parts.append(f"({c.to_text()})*{name}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# coordinate changes

def _pG_image(n: int, D: int) -> PSeries:
    # p_n = sum_k C(-n, k) (-b/2)^k pG_{n+k}; keys name pG monomials
    step = -BETA * HALF
    return PSeries(D, {(n + k,): step ** k * binom_signed(-n, k) for k in range(D - n + 1)})


def _pg_image(n: int, D: int) -> PSeries:
    # p_n = sum_{k<n} C(n, k) (-b/2)^k pg_{n-k}; exact
    step = -BETA * HALF
    return PSeries(D, {(n - k,): step ** k * comb(n, k) for k in range(n)})


def _split_odd(a: PSeries):
    odd = {lam: c for lam, c in a.terms.items() if is_odd(lam)}
    rest = {lam: c for lam, c in a.terms.items() if not is_odd(lam)}
    return odd, PSeries(a.degree, rest, check=False)


def pG_coordinates(a: PSeries, D: int | None = None) -> PSeries:
    """All of ``a`` rewritten in ``pG`` monomials (keys name ``pG`` partitions)."""
    D = a.degree if D is None else D
    a = a.truncate(D)
    return psum_substitute(a, lambda n: _pG_image(n, D), D)


def pg_coordinates(a: PSeries) -> PSeries:
    """All of ``a`` rewritten in ``pg`` monomials; exact, no truncation introduced."""
    return psum_substitute(a, lambda n: _pg_image(n, a.degree), a.degree)


def to_pG_coords(a: PSeries, D: int | None = None) -> tuple[Expansion, PSeries]:
    """Split ``a`` into its odd ``pG`` part and the even-touching residual.

    A zero residual certifies membership up to degree ``D``.
    """
    D = a.degree if D is None else D
    odd, residual = _split_odd(pG_coordinates(a, D))
    return Expansion("pG_odd", D, odd), residual


def to_pg_coords(a: PSeries) -> tuple[Expansion, PSeries]:
    """Same as :func:`to_pG_coords` on the g-side, where the rewrite is exact."""
    odd, residual = _split_odd(pg_coordinates(a))
    return Expansion("pg_odd", a.degree, odd), residual


def certify(a: PSeries, g_side: bool, D: int | None = None) -> None:
    """Raise :class:`MembershipError` unless the coordinate residual vanishes."""
    if g_side:
        _, residual = to_pg_coords(a)
        where = "pg"
    else:
        _, residual = to_pG_coords(a, D)
        where = "pG"
    if residual:
        lam, c = residual.sorted_terms()[0]
        raise MembershipError(
            f"input has {len(residual)} {where} monomials with an even part; "
            f"leading one is ({c.to_text()})*{where}{list(lam)}",
            residual,
        )


# ---------------------------------------------------------------------------
# graded solver

def _solve_block(columns: list[dict], rhs: dict):
    """Solve ``sum_j x_j columns[j] == rhs`` exactly; None if inconsistent.

    Raises :class:`ExpansionError` when the columns are dependent.
    """
    rows = set(rhs)
    for col in columns:
        rows.update(col)
    rows = sorted(rows, key=canonical_key)
    ncol = len(columns)
    mat = [[col.get(r, ZERO) for col in columns] + [rhs.get(r, ZERO)] for r in rows]
    pivots = []
    r = 0
    for j in range(ncol):
        piv = next((i for i in range(r, len(mat)) if mat[i][j]), None)
        if piv is None:
            raise ExpansionError("graded block is singular; the basis columns are dependent")
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = mat[r][j].inverse()
        mat[r] = [v * inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][j]:
                f = mat[i][j]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(j)
        r += 1
    if any(mat[i][ncol] for i in range(r, len(mat))):
        return None
    return [mat[i][ncol] for i in range(ncol)]


def expand_in_basis(a: PSeries, basis: str, D: int | None = None, *, seed: int | None = None,
                    certify_input: bool = True) -> Expansion:
    """Coordinates of ``a`` in products of ``basis`` members, to degree ``D``.

    The system is graded by x-degree: G-side blocks are matched on lowest
    components (ascending), g-side blocks on top components (descending).
    ``seed`` shuffles the unknowns inside each block, which must not change
    the answer.
    """
    kind = basis_class(basis)
    g_side = is_g_side(basis)
    if D is None:
        D = a.degree
    if D > a.degree:
        if not g_side:
            raise ValueError(f"input is only known to degree {a.degree}, asked for {D}")
        a = a.with_degree(D)
    elif D < a.degree:
        if g_side and a.top_degree() is not None and a.top_degree() > D:
            raise ValueError(f"g-side input has degree {a.top_degree()} > {D}")
        a = a.truncate(D)
    if certify_input:
        certify(a, g_side, D)

    prods = basis_products(basis, D)
    rng = random.Random(seed) if seed is not None else None
    residual = a
    coords: dict = {}
    order = range(D, -1, -1) if g_side else range(D + 1)
    for d in order:
        target = {lam: c for lam, c in residual.terms.items() if sum(lam) == d}
        unknowns = partitions(d, kind)
        if rng is not None:
            unknowns = list(unknowns)
            rng.shuffle(unknowns)
        if not target:
            continue
        columns = [{k: v for k, v in prods(lam).terms.items() if sum(k) == d} for lam in unknowns]
        sol = _solve_block(columns, target)
        if sol is None:
            raise MembershipError(
                f"degree-{d} block of the input is outside the span of {basis}",
                PSeries(D, target, check=False),
            )
        for lam, c in zip(unknowns, sol):
            if c:
                coords[lam] = c
                residual = residual - prods(lam).scale(c)
    if residual:
        raise MembershipError(f"non-zero remainder after expanding in {basis}", residual)
    return Expansion(basis, D, coords)


def expand_GQ_basis(a: PSeries, D: int | None = None, *, seed: int | None = None) -> Expansion:
    """Coordinates in monomials of ``GQ_1, GQ_3, GQ_5, ...``."""
    return expand_in_basis(a, "GQ_odd", D, seed=seed)


def recombine(e: Expansion) -> PSeries:
    return e.recombine()


# ---------------------------------------------------------------------------
# formal polynomials in odd generators

def _laurent(x) -> LaurentBetaPoly:
    if isinstance(x, LaurentBetaPoly):
        return x
    return LaurentBetaPoly.from_scalar(scalar(x)) if not isinstance(x, int) else LaurentBetaPoly({0: x})


class FormalGPPoly:
    """Polynomial in formal generators ``<symbol>1, <symbol>2, ...``.

    ``terms`` maps a sorted tuple of indices (a monomial) to a Laurent
    polynomial in b.  The class does not insist on odd indices because the
    intermediate stages use even ones too; :meth:`has_odd_indices` checks
    the final shape.
    """

    __slots__ = ("terms", "symbol")

    def __init__(self, terms=None, symbol: str = "gp"):
        clean: dict[tuple, LaurentBetaPoly] = {}
        for mono, c in (terms or {}).items():
            mono = tuple(sorted(mono))
            if any(i < 1 for i in mono):
                raise ValueError("generator indices must be positive")
            c = _laurent(c)
            if c:
                prev = clean.get(mono)
                clean[mono] = c if prev is None else prev + c
        self.terms = {k: v for k, v in clean.items() if v}
        self.symbol = symbol

    @classmethod
    def gen(cls, i: int, symbol: str = "gp") -> "FormalGPPoly":
        return cls({(i,): 1}, symbol)

    @classmethod
    def const(cls, c, symbol: str = "gp") -> "FormalGPPoly":
        return cls({(): c}, symbol)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, FormalGPPoly):
            return self.symbol == other.symbol and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.symbol, frozenset(self.terms.items())))

    def _new(self, terms):
        out = FormalGPPoly.__new__(FormalGPPoly)
        out.terms = {k: v for k, v in terms.items() if v}
        out.symbol = self.symbol
        return out

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            prev = out.get(k)
            out[k] = v if prev is None else prev + v
        return self._new(out)

    def __neg__(self):
        return self._new({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "FormalGPPoly":
        c = _laurent(c)
        return self._new({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, FormalGPPoly):
            return self.scale(other)
        out: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(sorted(k1 + k2))
                prev = out.get(k)
                t = v1 * v2
                out[k] = t if prev is None else prev + t
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = FormalGPPoly.const(1, self.symbol)
        for _ in range(e):
            out = out * self
        return out

    def indices(self) -> set[int]:
        return {i for mono in self.terms for i in mono}

    def has_odd_indices(self) -> bool:
        return all(i % 2 for i in self.indices())

    def is_beta_polynomial(self) -> bool:
        return all(v.is_polynomial() for v in self.terms.values())

    def substitute(self, images: dict, symbol: str | None = None) -> "FormalGPPoly":
        """Replace generator ``i`` by ``images[i]`` where given."""
        sym = self.symbol if symbol is None else symbol
        out = FormalGPPoly({}, sym)
        for mono, c in self.terms.items():
            term = FormalGPPoly({(): c}, sym)
            kept = []
            for i in mono:
                if i in images:
                    term = term * images[i]
                else:
                    kept.append(i)
            if kept:
                term = term * FormalGPPoly({tuple(kept): 1}, sym)
            out = out + term
        out.symbol = sym
        return out

    def evaluate(self, values, degree: int) -> PSeries:
        """Substitute PSeries values ``values(i)`` (or ``values[i]``) for the generators."""
        get = values if callable(values) else values.__getitem__
        cache: dict[int, PSeries] = {}
        acc = PSeries.zero(degree)
        for mono, c in self.terms.items():
            term = PSeries.constant(c.to_scalar(), degree)
            for i in mono:
                if i not in cache:
                    cache[i] = get(i).with_degree(degree)
                term = term * cache[i]
            acc = acc + term
        return acc

    def _monomials(self):
        # one entry per (integer coefficient, b-exponent, generator tuple)
        for mono, c in self.terms.items():
            for e, k in c.coefficients.items():
                yield k, e, mono

    def _sort_key(self, item):
        k, e, mono = item
        return (e, -len(mono), mono)

    def to_text(self) -> str:
        items = sorted(self._monomials(), key=self._sort_key)
        if not items:
            return "0"
        out = []
        for k, e, mono in items:
            factors = []
            for i, m in sorted(multiplicities(mono).items()):
                factors.append(f"{self.symbol}{i}" + (f"^{m}" if m > 1 else ""))
            if e:
                factors.append("b" if e == 1 else f"b^{e}")
            mag = abs(k)
            if not factors:
                body = str(mag)
            else:
                body = "*".join(([str(mag)] if mag != 1 else []) + factors)
            if not out:
                out.append(("-" if k < 0 else "") + body)
            else:
                out.append((" - " if k < 0 else " + ") + body)
        return "".join(out)

    __str__ = to_text

    def __repr__(self):
        return f"FormalGPPoly({self.to_text()!r})"

    def to_json(self) -> dict:
        keys = sorted(self.terms, key=lambda m: (-sum(m), -len(m), m))
        return {"terms": [{"indices": list(m), "coeff": self.terms[m].to_text()} for m in keys]}

    @classmethod
    def from_json(cls, data: dict, symbol: str = "gp") -> "FormalGPPoly":
        return cls({tuple(t["indices"]): LaurentBetaPoly.from_scalar(parse_scalar(t["coeff"]))
                    for t in data["terms"]}, symbol)


# ---------------------------------------------------------------------------
# K-even reduction

def _series_mul(a: list, b: list, top: int, symbol: str) -> list:
    out = [FormalGPPoly({}, symbol) for _ in range(top + 1)]
    for i, x in enumerate(a):
        if not x:
            continue
        for j in range(min(len(b), top + 1 - i)):
            if b[j]:
                out[i + j] = out[i + j] + x * b[j]
    return out


def _z_plus_zbar_power(k: int, top: int) -> list[LaurentBetaPoly]:
    """Coefficients of ``(z + zbar)^k`` up to ``z^top``; ``z + zbar = sum_j (-1)^j b^(j+1) z^(j+2)``."""
    base = [LaurentBetaPoly()] * 2 + [LaurentBetaPoly({j + 1: (-1) ** j}) for j in range(max(top - 1, 0))]
    out = [LaurentBetaPoly({0: 1})] + [LaurentBetaPoly()] * top
    for _ in range(k):
        nxt = [LaurentBetaPoly()] * (top + 1)
        for i, x in enumerate(out):
            if not x:
                continue
            for j in range(2, top + 1 - i):
                nxt[i + j] = nxt[i + j] + x * base[j]
        out = nxt
    return out


def keven_reduce(M: int) -> dict[int, FormalGPPoly]:
    """``c_{2k}`` for ``2k <= M`` as polynomials in the odd ``c``'s.

    ``F(z) = sum_k c_k z^(k+1)`` is assumed K-even.  Step ``k`` removes the
    leading coefficient ``alpha`` at ``z^(2k+2)`` with
    ``alpha * b^(-k-1) * (z + zbar)^(k+1)``; the next coefficient must then
    vanish, which fixes ``c_{2k+2}``.
    """
    if M < 1:
        raise ValueError("M must be positive")
    top = M + 1
    F = [FormalGPPoly({}, "c") for _ in range(top + 1)]
    for k in range(1, M + 1):
        F[k + 1] = FormalGPPoly.gen(k, "c")
    solved: dict[int, FormalGPPoly] = {}
    for k in range(M // 2):
        alpha = F[2 * k + 2]
        zz = _z_plus_zbar_power(k + 1, top)
        shift = LaurentBetaPoly({-(k + 1): 1})
        for j in range(2 * k + 2, top + 1):
            if zz[j]:
                F[j] = F[j] - alpha.scale(zz[j] * shift)
        # F[2k+3] = c_{2k+2} + (terms in lower c's) must vanish
        idx = 2 * k + 2
        rest = F[2 * k + 3] - FormalGPPoly.gen(idx, "c")
        if idx in rest.indices():
            raise ExpansionError(f"c{idx} does not enter linearly at z^{2 * k + 3}")
        value = -rest
        solved[idx] = value
        F = [f.substitute({idx: value}) for f in F]
    for idx, poly in solved.items():
        if not poly.is_beta_polynomial():
            raise ExpansionError(f"c{idx} = {poly} keeps a negative power of b")
        if not poly.has_odd_indices():
            raise ExpansionError(f"c{idx} = {poly} still involves an even generator")
    return solved


def _multinomial(lam) -> int:
    m = multiplicities(lam)
    return factorial(len(lam)) // prod(factorial(v) for v in m.values())


def gp_in_c(n_max: int, *, cross_check: bool = True) -> dict[int, FormalGPPoly]:
    """``gp_n`` in the formal ``c``'s from ``f = phi / (1 - phi)``, ``phi = sum c_k z^k``."""
    phi = [FormalGPPoly({}, "c")] + [FormalGPPoly.gen(k, "c") for k in range(1, n_max + 1)]
    f = [FormalGPPoly({}, "c") for _ in range(n_max + 1)]
    power = phi
    for _ in range(n_max):
        f = [x + y for x, y in zip(f, power)]
        power = _series_mul(power, phi, n_max, "c")
    out = {n: f[n] for n in range(1, n_max + 1)}
    if cross_check:
        for n in range(1, min(n_max, 4) + 1):
            expect = FormalGPPoly({lam: _multinomial(lam) for lam in partitions(n)}, "c")
            if out[n] != expect:
                raise ExpansionError(f"series and multinomial forms of gp{n} disagree")
    return out


@dataclass
class EvenToOdd:
    """Intermediate and final tables of :func:`gp_even_to_odd`."""

    c_even: dict          # c_{2k} in odd c's
    c_in_gp: dict         # every c_n in odd gp's
    gp_even: dict         # gp_{2k} in odd gp's


def gp_even_to_odd_tables(n_max: int) -> EvenToOdd:
    if n_max < 1:
        raise ValueError("n_max must be positive")
    c_even = keven_reduce(n_max)
    gp_c = {n: p.substitute(c_even) for n, p in gp_in_c(n_max).items()}
    c_gp: dict[int, FormalGPPoly] = {}
    for n in range(1, n_max + 1, 2):
        # gp_n = c_n + R(c_1, ..., c_{n-2}); invert for c_n
        rest = gp_c[n] - FormalGPPoly.gen(n, "c")
        if n in rest.indices():
            raise ExpansionError(f"c{n} does not enter gp{n} linearly")
        c_gp[n] = FormalGPPoly.gen(n, "gp") - rest.substitute(c_gp, symbol="gp")
    gp_even = {}
    for n in range(2, n_max + 1, 2):
        gp_even[n] = gp_c[n].substitute(c_gp, symbol="gp")
        c_gp[n] = c_even[n].substitute(c_gp, symbol="gp")
    for n, poly in list(gp_even.items()) + list(c_gp.items()):
        if not poly.is_beta_polynomial() or not poly.has_odd_indices():
            raise ExpansionError(f"index {n}: {poly} is not a Z[b]-polynomial in odd gp's")
    return EvenToOdd(c_even, dict(sorted(c_gp.items())), gp_even)


def gp_even_to_odd(n_max: int) -> dict[int, FormalGPPoly]:
    """``{2n: gp_{2n} as a Z[b]-polynomial in gp_1, gp_3, ...}`` for ``2n <= n_max``."""
    return gp_even_to_odd_tables(n_max).gp_even


__all__ = [
    "BASES",
    "G_SIDE_BASES",
    "Expansion",
    "ExpansionError",
    "MembershipError",
    "FormalGPPoly",
    "EvenToOdd",
    "basis_element",
    "basis_class",
    "is_g_side",
    "pG_coordinates",
    "pg_coordinates",
    "to_pG_coords",
    "to_pg_coords",
    "certify",
    "expand_in_basis",
    "expand_GQ_basis",
    "recombine",
    "keven_reduce",
    "gp_in_c",
    "gp_even_to_odd",
    "gp_even_to_odd_tables",
]
