"""Exact Gaussian-rational scalars: the ground field Q(i)."""

from __future__ import annotations

import re
from fractions import Fraction


class Scalar:
    """A Gaussian rational re + im*i with exact Fraction components.

    All arithmetic is exact and closed; equality is exact.  Instances are
    immutable and hashable, so they can be used as sparse-map values freely.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- constructors ----------------------------------------------------

    @staticmethod
    def coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        return Scalar(x)

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = Scalar.coerce(other)
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __sub__(self, other):
        other = Scalar.coerce(other)
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        other = Scalar.coerce(other)
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("inverse of zero Scalar")
        return Scalar(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * Scalar.coerce(other).inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        for _ in range(k):
            out = out * self
        return out

    def conjugate(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    # -- comparison / hashing ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"Scalar({self.re!r}, {self.im!r})"

    def __str__(self):
        return format_scalar(self)


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def _parse_rational(text: str) -> Fraction:
    if not _RATIONAL_RE.match(text):
        raise ValueError(f"malformed rational literal: {text!r}")
    return Fraction(text)


def parse_scalar(text: str) -> Scalar:
    """Parse ``"p/q"`` or ``"p/q+r/s*i"`` (denominators optional) exactly."""
    t = text.replace(" ", "")
    if not t:
        raise ValueError("empty scalar literal")
    if not t.endswith("i"):
        return Scalar(_parse_rational(t))
    body = t[:-1]
    if body.endswith("*"):
        body = body[:-1]
    re_str, im_str = "", body
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "+-":
            re_str, im_str = body[:k], body[k:]
            break
    if im_str in ("", "+"):
        im_str = "1"
    elif im_str == "-":
        im_str = "-1"
    re_part = _parse_rational(re_str) if re_str else Fraction(0)
    return Scalar(re_part, _parse_rational(im_str))


def format_scalar(s: Scalar) -> str:
    """Canonical text form; inverse of parse_scalar on its own output."""
    if not s.im:
        return str(s.re)
    sign = "-" if s.im < 0 else "+"
    return f"{s.re}{sign}{abs(s.im)}*i"
