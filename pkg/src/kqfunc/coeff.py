"""Exact scalars: Z[b], Z[b, 1/b] and the field Q(b).

``b`` is the formal deformation parameter.  Integer polynomials are stored
densely as tuples of Python ints, lowest exponent first, with no trailing
zeros; the zero polynomial is ``()``.  A :class:`BetaScalar` is a reduced
fraction of two such tuples:

* ``gcd(num, den) == 1`` over Q[b];
* the combined integer content of ``num`` and ``den`` is 1;
* the leading coefficient of ``den`` is positive.

Equal values therefore have identical representations, so ``==`` and
``hash`` are structural.

The canonical text form writes ``b^k`` monomials in descending exponent
order, e.g. ``3*b^2 - b + 1`` or ``(b^2 + 1) / 2``.  :func:`parse_scalar`
reads it back.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import comb, gcd

__all__ = [
    "BetaPoly",
    "BetaScalar",
    "LaurentBetaPoly",
    "BETA",
    "ZERO",
    "ONE",
    "HALF",
    "scalar",
    "binom_signed",
    "is_in_z_beta",
    "is_in_q_beta",
    "is_laurent_integral",
    "parse_scalar",
]


# ---------------------------------------------------------------------------
# dense integer polynomial kernels (tuples, low degree first)

def _trim(a):
    n = len(a)
    while n and not a[n - 1]:
        n -= 1
    return tuple(a[:n]) if n != len(a) else tuple(a)


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _psub(a, b):
    if not b:
        return a
    n = max(len(a), len(b))
    out = list(a) + [0] * (n - len(a))
    for i, c in enumerate(b):
        out[i] -= c
    return _trim(out)


def _pneg(a):
    return tuple(-c for c in a)


def _pscale(a, k):
    if not k or not a:
        return ()
    if k == 1:
        return a
    return tuple(c * k for c in a)


def _pmul(a, b):
    if not a or not b:
        return ()
    if len(a) == 1:
        return _pscale(b, a[0])
    if len(b) == 1:
        return _pscale(a, b[0])
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _content(a):
    g = 0
    for c in a:
        g = gcd(g, c)
        if g == 1:
            break
    return g


def _pdivexact(a, k):
    return tuple(c // k for c in a)


def _primitive(a):
    if not a:
        return a
    g = _content(a)
    if a[-1] < 0:
        g = -g
    return _pdivexact(a, g) if g != 1 else a


def _pseudo_rem(a, b):
    # prem(a, b) = lc(b)^(deg a - deg b + 1) * a mod b, over Z
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(a) - 1 >= db and a:
        la = a[-1]
        shift = len(a) - 1 - db
        a = [c * lb for c in a]
        for i, c in enumerate(b):
            a[i + shift] -= la * c
        a = list(_trim(a))
    return tuple(a)


def _pgcd(a, b):
    """Primitive gcd with positive leading coefficient (ignores content)."""
    a, b = _primitive(a), _primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        if len(b) == 1:
            return (1,)
        r = _pseudo_rem(a, b)
        a, b = b, _primitive(r)
    return a


def _pquo_exact(a, b):
    """a / b over Z, assuming b divides a in Q[b] and b is primitive."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    q = [0] * (len(a) - db)
    while a and len(a) - 1 >= db:
        la = a[-1]
        if la % lb:
            raise ArithmeticError("inexact polynomial division")
        c = la // lb
        shift = len(a) - 1 - db
        q[shift] = c
        for i, bc in enumerate(b):
            a[i + shift] -= c * bc
        a = list(_trim(a))
    if a:
        raise ArithmeticError("inexact polynomial division")
    return _trim(q)


def _poly_text(a):
    if not a:
        return "0"
    parts = []
    for k in range(len(a) - 1, -1, -1):
        c = a[k]
        if not c:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            mono = "b" if k == 1 else f"b^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


def _nterms(a):
    return sum(1 for c in a if c)


# ---------------------------------------------------------------------------

class BetaPoly:
    """Integer polynomial in b."""

    __slots__ = ("_c",)

    def __init__(self, coefficients=()):
        if isinstance(coefficients, dict):
            if any(k < 0 for k in coefficients):
                raise ValueError("negative exponent in BetaPoly")
            n = max(coefficients, default=-1) + 1
            dense = [0] * n
            for k, v in coefficients.items():
                dense[k] += int(v)
            coefficients = dense
        self._c = _trim(tuple(int(c) for c in coefficients))

    @property
    def coefficients(self) -> dict[int, int]:
        return {k: c for k, c in enumerate(self._c) if c}

    @property
    def dense(self) -> tuple[int, ...]:
        return self._c

    def degree(self) -> int:
        return len(self._c) - 1

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if isinstance(other, BetaPoly):
            return self._c == other._c
        if isinstance(other, int):
            return self._c == _trim((other,))
        return NotImplemented

    def __hash__(self):
        return hash(("BetaPoly", self._c))

    def __add__(self, other):
        return BetaPoly(_padd(self._c, _as_poly(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return BetaPoly(_psub(self._c, _as_poly(other)))

    def __rsub__(self, other):
        return BetaPoly(_psub(_as_poly(other), self._c))

    def __neg__(self):
        return BetaPoly(_pneg(self._c))

    def __mul__(self, other):
        return BetaPoly(_pmul(self._c, _as_poly(other)))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = (1,)
        for _ in range(e):
            out = _pmul(out, self._c)
        return BetaPoly(out)

    def __call__(self, value):
        acc = 0
        for c in reversed(self._c):
            acc = acc * value + c
        return acc

    def __repr__(self):
        return f"BetaPoly({_poly_text(self._c)!r})"

    def __str__(self):
        return _poly_text(self._c)


def _as_poly(x):
    if isinstance(x, BetaPoly):
        return x._c
    if isinstance(x, int):
        return _trim((x,))
    raise TypeError(f"cannot use {type(x).__name__} as BetaPoly")


# ---------------------------------------------------------------------------

class BetaScalar:
    """Element of Q(b) in canonical reduced form."""

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1):
        n = _coerce_pair(num)
        d = _coerce_pair(den)
        # (n0/n1) / (d0/d1) = n0*d1 / (n1*d0)
        nn = _pmul(n[0], d[1])
        dd = _pmul(n[1], d[0])
        if not dd:
            raise ZeroDivisionError("BetaScalar with zero denominator")
        self.num, self.den = _normalize(nn, dd)

    @classmethod
    def _raw(cls, num, den):
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    @classmethod
    def from_poly(cls, coefficients) -> "BetaScalar":
        """Scalar from an integer coefficient sequence (low degree first)."""
        return cls._raw(_trim(tuple(int(c) for c in coefficients)), (1,))

    @classmethod
    def monomial(cls, coeff, exponent: int) -> "BetaScalar":
        """``coeff * b**exponent``; ``exponent`` may be negative."""
        c = scalar(coeff)
        if exponent >= 0:
            return c * cls._raw((0,) * exponent + (1,), (1,))
        return c / cls._raw((0,) * (-exponent) + (1,), (1,))

    # -- predicates -------------------------------------------------------
    def __bool__(self):
        return bool(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return len(self.num) <= 1 and len(self.den) == 1

    def to_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a rational constant")
        return Fraction(self.num[0] if self.num else 0, self.den[0])

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, BetaScalar):
            other = scalar(other)
        an, ad = self.num, self.den
        bn, bd = other.num, other.den
        if not an:
            return other
        if not bn:
            return self
        if len(ad) == 1 and len(bd) == 1:
            a, b = ad[0], bd[0]
            if a == b:
                if a == 1:
                    return BetaScalar._raw(_padd(an, bn), ad)
                return BetaScalar._raw(*_normalize_const(_padd(an, bn), a))
            return BetaScalar._raw(*_normalize_const(_padd(_pscale(an, b), _pscale(bn, a)), a * b))
        return BetaScalar._raw(*_normalize(_padd(_pmul(an, bd), _pmul(bn, ad)), _pmul(ad, bd)))

    __radd__ = __add__

    def __neg__(self):
        return BetaScalar._raw(_pneg(self.num), self.den)

    def __sub__(self, other):
        if not isinstance(other, BetaScalar):
            other = scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return scalar(other) - self

    def __mul__(self, other):
        if not isinstance(other, BetaScalar):
            if isinstance(other, int):
                if not other or not self.num:
                    return ZERO
                if len(self.den) == 1:
                    return BetaScalar._raw(*_normalize_const(_pscale(self.num, other), self.den[0]))
            other = scalar(other)
        an, ad = self.num, self.den
        bn, bd = other.num, other.den
        if not an or not bn:
            return ZERO
        if len(ad) == 1 and len(bd) == 1:
            d = ad[0] * bd[0]
            n = _pmul(an, bn)
            if d == 1:
                return BetaScalar._raw(n, (1,))
            return BetaScalar._raw(*_normalize_const(n, d))
        return BetaScalar._raw(*_normalize(_pmul(an, bn), _pmul(ad, bd)))

    __rmul__ = __mul__

    def inverse(self) -> "BetaScalar":
        if not self.num:
            raise ZeroDivisionError("division by zero in Q(b)")
        return BetaScalar._raw(*_normalize(self.den, self.num))

    def __truediv__(self, other):
        if not isinstance(other, BetaScalar):
            other = scalar(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return scalar(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = ONE
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- evaluation -------------------------------------------------------
    def at_beta(self, value) -> "BetaScalar":
        """Substitute a rational number (or scalar) for b."""
        v = scalar(value)
        n = _eval_poly(self.num, v)
        d = _eval_poly(self.den, v)
        if not d:
            raise ZeroDivisionError(f"denominator of {self} vanishes at b = {v}")
        return n / d

    def beta_monomial_exponent(self):
        """Return ``e`` if the value is ``c * b**e`` for a rational ``c``, else None."""
        if not self.num:
            return None
        nz = [k for k, c in enumerate(self.num) if c]
        dz = [k for k, c in enumerate(self.den) if c]
        if len(nz) != 1 or len(dz) != 1:
            return None
        return nz[0] - dz[0]

    # -- comparison / display --------------------------------------------
    def __eq__(self, other):
        if isinstance(other, BetaScalar):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, BetaPoly)):
            return self == scalar(other)
        return NotImplemented

    def __hash__(self):
        if len(self.num) <= 1 and self.den == (1,):
            return hash(self.num[0] if self.num else 0)
        return hash((self.num, self.den))

    def to_text(self) -> str:
        ntext = _poly_text(self.num)
        if self.den == (1,):
            return ntext
        if _nterms(self.num) > 1:
            ntext = f"({ntext})"
        dtext = _poly_text(self.den)
        nd = _nterms(self.den)
        composite = nd > 1 or (len(self.den) > 1 and self.den[-1] != 1)
        if composite:
            dtext = f"({dtext})"
        return f"{ntext} / {dtext}"

    __str__ = to_text

    def __repr__(self):
        return f"BetaScalar({self.to_text()!r})"


def _eval_poly(p, v):
    acc = ZERO
    for c in reversed(p):
        acc = acc * v + c
    return acc


def _normalize_const(num, d):
    if not num:
        return (), (1,)
    g = gcd(_content(num), d)
    if d < 0:
        g = -g
    if g == 1:
        return num, (d,)
    return _pdivexact(num, g), (d // g,)


def _normalize(num, den):
    if not den:
        raise ZeroDivisionError("division by zero in Q(b)")
    if not num:
        return (), (1,)
    if len(den) == 1:
        return _normalize_const(num, den[0])
    g = _pgcd(num, den)
    if len(g) > 1:
        num = _pquo_exact(num, g)
        den = _pquo_exact(den, g)
        if len(den) == 1:
            return _normalize_const(num, den[0])
    c = gcd(_content(num), _content(den))
    if den[-1] < 0:
        c = -c
    if c != 1:
        num = _pdivexact(num, c)
        den = _pdivexact(den, c)
    return num, den


def _coerce_pair(x):
    if isinstance(x, BetaScalar):
        return x.num, x.den
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return _trim((x,)), (1,)
    if isinstance(x, Fraction):
        return _trim((x.numerator,)), (x.denominator,)
    if isinstance(x, BetaPoly):
        return x._c, (1,)
    if isinstance(x, LaurentBetaPoly):
        s = x.to_scalar()
        return s.num, s.den
    if isinstance(x, str):
        s = parse_scalar(x)
        return s.num, s.den
    raise TypeError(f"cannot convert {type(x).__name__} to BetaScalar")


def scalar(x) -> BetaScalar:
    """Coerce ints, Fractions, polynomials and text to :class:`BetaScalar`."""
    if isinstance(x, BetaScalar):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        if x == 0:
            return ZERO
        if x == 1:
            return ONE
        return BetaScalar._raw((x,), (1,))
    return BetaScalar(x)


ZERO = BetaScalar._raw((), (1,))
ONE = BetaScalar._raw((1,), (1,))
HALF = BetaScalar._raw((1,), (2,))
BETA = BetaScalar._raw((0, 1), (1,))


def is_in_z_beta(a) -> bool:
    """True iff ``a`` lies in Z[b]."""
    return scalar(a).den == (1,)


def is_in_q_beta(a) -> bool:
    """True iff ``a`` lies in Q[b] (constant denominator)."""
    return len(scalar(a).den) == 1


def is_laurent_integral(a) -> bool:
    """True iff ``a`` lies in Z[b, 1/b]."""
    d = scalar(a).den
    return d[-1] == 1 and not any(d[:-1])


def binom_signed(n: int, k: int) -> int:
    """Generalized binomial ``n (n-1) ... (n-k+1) / k!`` for any integer ``n``."""
    if k < 0:
        return 0
    if n >= 0:
        return comb(n, k)
    return (-1) ** k * comb(-n + k - 1, k)


# ---------------------------------------------------------------------------

class LaurentBetaPoly:
    """Integer Laurent polynomial in b, stored as ``{exponent: coefficient}``."""

    __slots__ = ("_c",)

    def __init__(self, coefficients=None):
        c = {}
        for k, v in (coefficients or {}).items():
            v = int(v)
            if v:
                c[int(k)] = v
        self._c = c

    @classmethod
    def from_scalar(cls, a) -> "LaurentBetaPoly":
        a = scalar(a)
        if not is_laurent_integral(a):
            raise ValueError(f"{a} is not in Z[b, 1/b]")
        shift = len(a.den) - 1
        return cls({k - shift: c for k, c in enumerate(a.num)})

    @classmethod
    def monomial(cls, coeff: int, exponent: int) -> "LaurentBetaPoly":
        return cls({exponent: coeff})

    @property
    def coefficients(self) -> dict[int, int]:
        return dict(self._c)

    def min_exponent(self):
        return min(self._c, default=None)

    def is_polynomial(self) -> bool:
        return all(k >= 0 for k in self._c)

    def to_beta_poly(self) -> BetaPoly:
        if not self.is_polynomial():
            raise ValueError(f"{self} has negative powers of b")
        return BetaPoly(self._c)

    def to_scalar(self) -> BetaScalar:
        if not self._c:
            return ZERO
        lo = min(0, min(self._c))
        num = [0] * (max(self._c) - lo + 1)
        for k, v in self._c.items():
            num[k - lo] = v
        return BetaScalar._raw(*_normalize(_trim(tuple(num)), (0,) * (-lo) + (1,)))

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if isinstance(other, LaurentBetaPoly):
            return self._c == other._c
        if isinstance(other, int):
            return self._c == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __add__(self, other):
        other = _as_laurent(other)
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, 0) + v
        return LaurentBetaPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentBetaPoly({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-_as_laurent(other))

    def __rsub__(self, other):
        return _as_laurent(other) - self

    def __mul__(self, other):
        other = _as_laurent(other)
        out = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return LaurentBetaPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            if len(self._c) != 1:
                raise ValueError("only monomials are invertible in Z[b, 1/b]")
            (k, v), = self._c.items()
            if v not in (1, -1):
                raise ValueError("only unit monomials are invertible in Z[b, 1/b]")
            return LaurentBetaPoly({k * e: v ** (-e)})
        out = LaurentBetaPoly({0: 1})
        for _ in range(e):
            out = out * self
        return out

    def to_text(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for k in sorted(self._c, reverse=True):
            c = self._c[k]
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = "b" if k == 1 else f"b^{k}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    __str__ = to_text

    def __repr__(self):
        return f"LaurentBetaPoly({self.to_text()!r})"


def _as_laurent(x):
    if isinstance(x, LaurentBetaPoly):
        return x
    if isinstance(x, int):
        return LaurentBetaPoly({0: x})
    if isinstance(x, BetaPoly):
        return LaurentBetaPoly(x.coefficients)
    if isinstance(x, BetaScalar):
        return LaurentBetaPoly.from_scalar(x)
    raise TypeError(f"cannot use {type(x).__name__} as LaurentBetaPoly")


# ---------------------------------------------------------------------------
# text parser for the canonical form (and anything a bit looser)

_TOKEN = re.compile(r"\s*(?:(\d+)|(b)|(\^)|([-+*/()]))")


def parse_scalar(text: str) -> BetaScalar:
    """Parse ``'3*b^2 - b + 1'``, ``'(b + 1) / 2'``, ``'b^-1'`` and similar."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse scalar {text!r} at position {pos}")
        pos = m.end()
        if m.group(1):
            tokens.append(("int", int(m.group(1))))
        elif m.group(2):
            tokens.append(("b", None))
        elif m.group(3):
            tokens.append(("^", None))
        else:
            tokens.append((m.group(4), None))
    parser = _Parser(tokens, text)
    value = parser.expr()
    if parser.i != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return value


class _Parser:
    def __init__(self, tokens, text):
        self.t = tokens
        self.i = 0
        self.text = text

    def peek(self):
        return self.t[self.i][0] if self.i < len(self.t) else None

    def take(self, kind):
        if self.peek() != kind:
            raise ValueError(f"expected {kind!r} in {self.text!r}")
        tok = self.t[self.i]
        self.i += 1
        return tok

    def expr(self):
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take(self.peek())[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take(self.peek())[0]
            rhs = self.unary()
            value = value * rhs if op == "*" else value / rhs
        return value

    def unary(self):
        if self.peek() == "-":
            self.take("-")
            return -self.unary()
        if self.peek() == "+":
            self.take("+")
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take("^")
            sign = 1
            if self.peek() == "-":
                self.take("-")
                sign = -1
            e = self.take("int")[1] * sign
            base = base ** e
        return base

    def atom(self):
        kind = self.peek()
        if kind == "int":
            return scalar(self.take("int")[1])
        if kind == "b":
            self.take("b")
            return BETA
        if kind == "(":
            self.take("(")
            value = self.expr()
            self.take(")")
            return value
        raise ValueError(f"unexpected token in {self.text!r}")
