"""Exact scalars: Gaussian rationals with an optional radical factor.

A value is (re + im*i) * sqrt(rad) with re, im rational and rad a positive
integer kept free of small square factors.  Plain Gaussian rationals have
rad == 1.  The radical part exists so that moduli |a| of Gaussian rationals
stay exactly representable; sums of values with different radical parts are
refused rather than approximated.
"""

import math
import re as _re
from fractions import Fraction

_TRIAL_LIMIT = 10_000


def _square_part(n: int) -> tuple[int, int]:
    """Split n > 0 as s*s*m, extracting every square factor with a prime
    divisor below the trial limit, plus a full perfect-square remainder."""
    if n <= 0:
        raise ValueError("positive integer required")
    s, m = 1, n
    residue = 1
    d = 2
    while d * d <= m and d <= _TRIAL_LIMIT:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            s *= d ** (e // 2)
            if e % 2:
                residue *= d
        d = 3 if d == 2 else d + 2
    r = math.isqrt(m)
    if r * r == m:
        s *= r
        m = 1
    return s, m * residue


class GaussianRational:
    """Immutable exact scalar (re + im*i) * sqrt(rad)."""

    __slots__ = ("re", "im", "rad")

    def __init__(self, re=0, im=0, rad=1):
        re = Fraction(re)
        im = Fraction(im)
        rad = Fraction(rad)
        if rad <= 0:
            raise ValueError("radical part must be positive")
        if re == 0 and im == 0:
            rad = Fraction(1)
        if rad != 1:
            # sqrt(p/q) == (s/q) * sqrt(m) with p*q == s*s*m
            s, m = _square_part(rad.numerator * rad.denominator)
            scale = Fraction(s, rad.denominator)
            re *= scale
            im *= scale
            rad = Fraction(m)
            if re == 0 and im == 0:
                rad = Fraction(1)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)
        object.__setattr__(self, "rad", rad)

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # ---- predicates ----

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def is_real(self) -> bool:
        return self.im == 0

    @property
    def is_plain(self) -> bool:
        """True when the radical part is trivial."""
        return self.rad == 1

    def as_fraction(self) -> Fraction:
        if self.im != 0 or self.rad != 1:
            raise ValueError(f"{self!r} is not a plain rational")
        return self.re

    # ---- arithmetic ----

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im, self.rad)

    @property
    def modulus_squared(self) -> Fraction:
        return (self.re * self.re + self.im * self.im) * self.rad

    def __neg__(self):
        return GaussianRational(-self.re, -self.im, self.rad)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.rad != other.rad:
            raise ValueError(
                f"cannot add values with radical parts {self.rad} and {other.rad}"
            )
        return GaussianRational(self.re + other.re, self.im + other.im, self.rad)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        re = self.re * other.re - self.im * other.im
        im = self.re * other.im + self.im * other.re
        return GaussianRational(re, im, self.rad * other.rad)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        m2 = self.modulus_squared
        c = self.conjugate()
        return GaussianRational(c.re / m2, c.im / m2, self.rad)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    # ---- conversions and identity ----

    def __complex__(self) -> complex:
        scale = math.sqrt(self.rad)
        return complex(float(self.re) * scale, float(self.im) * scale)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im and self.rad == other.rad

    def __hash__(self):
        return hash((self.re, self.im, self.rad))

    def __bool__(self):
        return not self.is_zero

    def __repr__(self):
        if self.rad == 1:
            return f"GaussianRational({self.re}, {self.im})"
        return f"GaussianRational({self.re}, {self.im}, rad={self.rad})"


def _coerce(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    return NotImplemented


GR_ZERO = GaussianRational(0)
GR_ONE = GaussianRational(1)


# ---- text forms used by the graph file format ----

_RAT_RE = _re.compile(r"^[+-]?\d+(/\d+)?$")
_MIXED_RE = _re.compile(
    r"^(?P<re>[+-]?\d+(?:/\d+)?)(?P<im>[+-](?:\d+(?:/\d+)?)?)i$"
)
_IMAG_RE = _re.compile(r"^(?P<im>[+-]?(?:\d+(?:/\d+)?)?)i$")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not _RAT_RE.match(text):
        raise ValueError(f"bad rational literal {text!r}")
    return Fraction(text)


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_weight(text: str) -> GaussianRational:
    """Accepts forms like 2, -1/3, 3+4i, 1-1/2i, i, -2i."""
    text = text.strip().replace(" ", "")
    if text.endswith("i"):
        m = _MIXED_RE.match(text)
        if m:
            return GaussianRational(
                Fraction(m.group("re")), _imag_coeff(m.group("im"))
            )
        m = _IMAG_RE.match(text)
        if m:
            return GaussianRational(0, _imag_coeff(m.group("im")))
        raise ValueError(f"bad weight literal {text!r}")
    if _RAT_RE.match(text):
        return GaussianRational(Fraction(text))
    raise ValueError(f"bad weight literal {text!r}")


def _imag_coeff(body: str) -> Fraction:
    if body in ("", "+"):
        return Fraction(1)
    if body == "-":
        return Fraction(-1)
    return Fraction(body)


def format_weight(w: GaussianRational) -> str:
    if not w.is_plain:
        raise ValueError("graph files carry plain Gaussian rationals only")
    if w.im == 0:
        return format_rational(w.re)
    im_abs = format_rational(abs(w.im))
    sign = "+" if w.im > 0 else "-"
    if w.re == 0:
        return f"{'-' if w.im < 0 else ''}{im_abs}i"
    return f"{format_rational(w.re)}{sign}{im_abs}i"
