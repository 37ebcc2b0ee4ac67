"""Exact arithmetic in the biquadratic field Q(sqrt2, sqrt3).

Every element is stored as four rationals ``(q1, q2, q3, q6)`` standing for
``q1 + q2*sqrt(2) + q3*sqrt(3) + q6*sqrt(6)``.
"""

from __future__ import annotations

import re
from decimal import Decimal, localcontext
from fractions import Fraction
from numbers import Rational

__all__ = ["QuadScalar", "as_quad", "SQRT2", "SQRT3", "SQRT6"]

_PREC = 80


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class QuadScalar:
    """Immutable element of Q(sqrt2, sqrt3)."""

    __slots__ = ("q1", "q2", "q3", "q6")

    def __init__(self, q1=0, q2=0, q3=0, q6=0):
        object.__setattr__(self, "q1", _frac(q1))
        object.__setattr__(self, "q2", _frac(q2))
        object.__setattr__(self, "q3", _frac(q3))
        object.__setattr__(self, "q6", _frac(q6))

    def __setattr__(self, name, value):
        raise AttributeError("QuadScalar is immutable")

    # -- structure ---------------------------------------------------------
    @property
    def components(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.q1, self.q2, self.q3, self.q6)

    def is_zero(self) -> bool:
        return not (self.q1 or self.q2 or self.q3 or self.q6)

    def is_rational(self) -> bool:
        return not (self.q2 or self.q3 or self.q6)

    def conj2(self) -> "QuadScalar":
        """Galois conjugate sending sqrt2 to -sqrt2."""
        return QuadScalar(self.q1, -self.q2, self.q3, -self.q6)

    def conj3(self) -> "QuadScalar":
        """Galois conjugate sending sqrt3 to -sqrt3."""
        return QuadScalar(self.q1, self.q2, -self.q3, -self.q6)

    def norm(self) -> Fraction:
        """Field norm down to Q (product of the four conjugates)."""
        n = self * self.conj3()
        nn = n * n.conj2()
        assert nn.is_rational()
        return nn.q1

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return QuadScalar(self.q1 + o.q1, self.q2 + o.q2, self.q3 + o.q3, self.q6 + o.q6)

    __radd__ = __add__

    def __neg__(self):
        return QuadScalar(-self.q1, -self.q2, -self.q3, -self.q6)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        a1, a2, a3, a6 = self.components
        b1, b2, b3, b6 = o.components
        # sqrt2*sqrt3 = sqrt6, sqrt2*sqrt6 = 2 sqrt3, sqrt3*sqrt6 = 3 sqrt2
        c1 = a1 * b1 + 2 * a2 * b2 + 3 * a3 * b3 + 6 * a6 * b6
        c2 = a1 * b2 + a2 * b1 + 3 * (a3 * b6 + a6 * b3)
        c3 = a1 * b3 + a3 * b1 + 2 * (a2 * b6 + a6 * b2)
        c6 = a1 * b6 + a6 * b1 + a2 * b3 + a3 * b2
        return QuadScalar(c1, c2, c3, c6)

    __rmul__ = __mul__

    def inverse(self) -> "QuadScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(sqrt2, sqrt3)")
        n = self * self.conj3()          # lies in Q(sqrt2)
        m = n * n.conj2()                # lies in Q
        num = self.conj3() * n.conj2()
        return num * QuadScalar(1 / m.q1)

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out, base = QuadScalar(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparison --------------------------------------------------------
    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            if isinstance(other, float):
                return self.is_rational() and self.q1 == other
            return NotImplemented
        return self.components == o.components

    def __hash__(self):
        if self.is_rational():
            return hash(self.q1)
        return hash(self.components)

    def __bool__(self):
        return not self.is_zero()

    # -- conversion --------------------------------------------------------
    def to_decimal(self, prec: int = _PREC) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = prec
            s2, s3, s6 = Decimal(2).sqrt(), Decimal(3).sqrt(), Decimal(6).sqrt()

            def d(f: Fraction) -> Decimal:
                return Decimal(f.numerator) / Decimal(f.denominator)

            return d(self.q1) + d(self.q2) * s2 + d(self.q3) * s3 + d(self.q6) * s6

    def __float__(self) -> float:
        return float(self.to_decimal())

    def __repr__(self):
        return f"QuadScalar({self})"

    def __str__(self):
        return format_quad(self)


def _coerce(x) -> QuadScalar | None:
    if isinstance(x, QuadScalar):
        return x
    if isinstance(x, (int, Fraction, Rational)) and not isinstance(x, bool):
        return QuadScalar(x)
    return None


def as_quad(x) -> QuadScalar:
    """Convert an int, Fraction or QuadScalar to a QuadScalar."""
    q = _coerce(x)
    if q is None:
        raise TypeError(f"{type(x).__name__} is not an exact scalar")
    return q


def _fmt_frac(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def format_quad(q: QuadScalar) -> str:
    """Render as ``a+b√2+c√3+d√6`` with every component present."""
    out = _fmt_frac(q.q1)
    for comp, root in ((q.q2, "√2"), (q.q3, "√3"), (q.q6, "√6")):
        s = _fmt_frac(comp)
        out += (s if s.startswith("-") else "+" + s) + root
    return out


_QUAD_RE = re.compile(
    r"^(?P<a>-?\d+(?:/\d+)?)"
    r"(?P<b>[+-]\d+(?:/\d+)?)√2"
    r"(?P<c>[+-]\d+(?:/\d+)?)√3"
    r"(?P<d>[+-]\d+(?:/\d+)?)√6$"
)


def parse_quad(text: str) -> QuadScalar:
    """Inverse of :func:`format_quad`."""
    m = _QUAD_RE.match(text.strip())
    if m is None:
        raise ValueError(f"malformed exact coefficient: {text!r}")
    return QuadScalar(*(Fraction(m.group(k)) for k in "abcd"))


SQRT2 = QuadScalar(0, 1)
SQRT3 = QuadScalar(0, 0, 1)
SQRT6 = QuadScalar(0, 0, 0, 1)
