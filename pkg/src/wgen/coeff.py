"""Exact scalars: rationals and rational functions in the level ``k``.

A :class:`Scalar` is a reduced fraction ``num(k)/den(k)`` of polynomials with
rational coefficients.  Polynomials are stored as tuples of rationals, lowest
degree first, with no trailing zeros (the zero polynomial is ``()``).  The
denominator is always monic, so two scalars are equal iff their tuples are.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

try:
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover
    from fractions import Fraction as Rational

__all__ = ["Rational", "Scalar", "K", "ONE", "ZERO", "as_scalar", "scalar_eval"]

_Q0 = Rational(0)
_Q1 = Rational(1)
_NUMBER = (int, Fraction, type(_Q0))


# -- dense polynomial helpers over Q ---------------------------------------

def _trim(p):
    n = len(p)
    while n and not p[n - 1]:
        n -= 1
    return tuple(p[:n])


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _pneg(a):
    return tuple(-c for c in a)


def _psub(a, b):
    return _padd(a, _pneg(b))


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [_Q0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _pscale(a, c):
    if not c:
        return ()
    return tuple(x * c for x in a)


def _pdivmod(a, b):
    if not b:
        raise ZeroDivisionError("zero divisor")
    a = list(a)
    lb = b[-1]
    db = len(b) - 1
    if len(a) - 1 < db:
        return (), _trim(a)
    q = [_Q0] * (len(a) - db)
    for i in range(len(a) - 1 - db, -1, -1):
        c = a[i + db] / lb
        q[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] -= c * y
    return _trim(q), _trim(a[:db])


def _pmonic(a):
    lc = a[-1]
    if lc == 1:
        return a
    return tuple(c / lc for c in a)


def _pgcd(a, b):
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return _pmonic(a) if a else a


def _peval(a, x):
    acc = _Q0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _lcm(a, b):
    return a // gcd(a, b) * b


def _integral(p):
    """Write ``p = c * P`` with ``P`` a primitive integer polynomial, lc > 0."""
    den = 1
    for c in p:
        den = _lcm(den, int(Rational(c).denominator))
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    if ints[-1] < 0:
        g = -g
    return Rational(g, den), [c // g for c in ints]


# -- the scalar type --------------------------------------------------------

class Scalar:
    """Element of Q(k) in canonical reduced form.  Immutable."""

    __slots__ = ("num", "den")

    def __init__(self, value=0):
        if isinstance(value, Scalar):
            self.num, self.den = value.num, value.den
            return
        q = Rational(value)
        self.num = (q,) if q else ()
        self.den = (_Q1,)

    @classmethod
    def _raw(cls, num, den):
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    @classmethod
    def from_polys(cls, num, den=(1,)):
        """Build ``num(k)/den(k)`` from coefficient sequences (low degree first)."""
        num = _trim([Rational(c) for c in num])
        den = _trim([Rational(c) for c in den])
        if not den:
            raise ZeroDivisionError("zero divisor")
        return cls._reduce(num, den)

    @classmethod
    def _reduce(cls, num, den):
        if not num:
            return cls._raw((), (_Q1,))
        if len(den) > 1:
            g = _pgcd(num, den)
            if len(g) > 1:
                num = _pdivmod(num, g)[0]
                den = _pdivmod(den, g)[0]
        lc = den[-1]
        if lc != 1:
            num = tuple(c / lc for c in num)
            den = tuple(c / lc for c in den)
        return cls._raw(num, den)

    # structure
    def is_polynomial(self):
        return len(self.den) == 1

    def is_constant(self):
        return len(self.den) == 1 and len(self.num) <= 1

    def constant(self):
        """Return the rational value of a constant scalar."""
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.num[0] if self.num else _Q0

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            try:
                other = as_scalar(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant())
        return hash((self.num, self.den))

    # arithmetic
    def __add__(self, other):
        if not isinstance(other, Scalar):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            if len(self.den) == 1:
                return Scalar._raw(_padd(self.num, other.num), self.den)
            return Scalar._reduce(_padd(self.num, other.num), self.den)
        num = _padd(_pmul(self.num, other.den), _pmul(other.num, self.den))
        return Scalar._reduce(num, _pmul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(_pneg(self.num), self.den)

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, _NUMBER):
                if other == 1:
                    return self
                return Scalar._raw(_pscale(self.num, Rational(other)), self.den) \
                    if other else ZERO
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        if len(self.den) == 1 and len(other.den) == 1:
            return Scalar._raw(_pmul(self.num, other.num), self.den)
        return Scalar._reduce(_pmul(self.num, other.num), _pmul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("zero divisor")
        return Scalar._reduce(self.den, self.num)

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, _NUMBER):
                if not other:
                    raise ZeroDivisionError("zero divisor")
                return Scalar._raw(_pscale(self.num, 1 / Rational(other)), self.den)
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e):
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

    # evaluation
    def __call__(self, k0):
        return scalar_eval(self, k0)

    # formatting
    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        return self.format()

    def format(self, var="k", latex=False):
        if not self.num:
            return "0"
        c, P = _integral(self.num)
        cd, D = _integral(self.den)
        c = c / cd
        sign = "-" if c < 0 else ""
        c = abs(c)
        a, b = int(c.numerator), int(c.denominator)
        pstr = _format_int_poly(P, var, latex)
        dstr = _format_int_poly(D, var, latex)
        pmulti = sum(1 for x in P if x) > 1
        dmulti = sum(1 for x in D if x) > 1
        if P == [1]:
            top = str(a)
        elif a == 1:
            top = f"({pstr})" if pmulti and not latex else pstr
        else:
            top = f"{a}({pstr})" if latex and pmulti else \
                f"{a}*({pstr})" if pmulti else (f"{a}{pstr}" if latex else f"{a}*{pstr}")
        if D == [1]:
            bottom = "" if b == 1 else str(b)
        elif b == 1:
            bottom = dstr if latex or not dmulti else f"({dstr})"
        else:
            bottom = f"{b}({dstr})" if latex and dmulti else \
                f"({b}*({dstr}))" if dmulti else (f"{b}{dstr}" if latex else f"({b}*{dstr})")
        if latex:
            if bottom:
                if top.startswith("(") and top.endswith(")"):
                    top = top[1:-1]
                return f"{sign}\\frac{{{top}}}{{{bottom}}}"
            if sign and pmulti and a == 1 and P != [1]:
                return f"-({top})"
            return sign + top
        if not bottom:
            if sign and pmulti and a == 1:
                return f"-({pstr})"
            if a == 1 and pmulti:
                return pstr
            return sign + top
        return f"{sign}{top}/{bottom}"


def _format_int_poly(P, var, latex):
    parts = []
    for d in range(len(P) - 1, -1, -1):
        c = P[d]
        if not c:
            continue
        if d == 0:
            mono = str(abs(c))
        else:
            power = var if d == 1 else (f"{var}^{{{d}}}" if latex and d > 9 else f"{var}^{d}")
            if abs(c) == 1:
                mono = power
            else:
                mono = f"{abs(c)}{power}" if latex else f"{abs(c)}*{power}"
        if not parts:
            parts.append(("-" if c < 0 else "") + mono)
        else:
            parts.append(("- " if c < 0 else "+ ") + mono)
    return " ".join(parts)


ZERO = Scalar._raw((), (_Q1,))
ONE = Scalar._raw((_Q1,), (_Q1,))
K = Scalar._raw((_Q0, _Q1), (_Q1,))


def _coerce(x):
    if isinstance(x, _NUMBER):
        return Scalar(x)
    return None


def as_scalar(x):
    if isinstance(x, Scalar):
        return x
    s = _coerce(x)
    if s is None:
        raise TypeError(f"cannot interpret {x!r} as a scalar")
    return s


def scalar_arith(a, b, op):
    """Field operation ``op`` in {'add', 'sub', 'mul', 'div'}."""
    a, b = as_scalar(a), as_scalar(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def scalar_eval(a, k0):
    """Specialize the level: return ``a(k0)`` as an exact rational."""
    a = as_scalar(a)
    k0 = Rational(k0)
    d = _peval(a.den, k0)
    if not d:
        raise ZeroDivisionError("evaluation at pole")
    return _peval(a.num, k0) / d
