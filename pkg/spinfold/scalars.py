"""
Coefficient fields

Two fields are supported:
- EXACT: complex numbers with rational real and imaginary parts (ExactComplex)
- FLOAT: built-in complex (double precision)

An OperatorSum carries exactly one field; values are coerced on entry so the
two never mix inside one sum.
"""

import numbers
import re
from fractions import Fraction
from typing import Union

from spinfold.errors import ParameterError

EXACT = 'exact'
FLOAT = 'float'
FIELDS = (EXACT, FLOAT)

_COMPLEX_TEXT = re.compile(r'^\(?\s*([^,()]+?)\s*,\s*([^,()]+?)\s*\)?$')


class ExactComplex:
    """
    Complex number a + b*i with a, b rational.

    Immutable and hashable. Mixed arithmetic with int and Fraction is
    supported; floats are rejected so an exact computation never silently
    degrades.
    """

    __slots__ = ('re', 'im')

    def __init__(self, re_part=0, im_part=0):
        object.__setattr__(self, 're', _rational(re_part))
        object.__setattr__(self, 'im', _rational(im_part))

    def __setattr__(self, name, value):
        raise AttributeError("ExactComplex is immutable")

    @classmethod
    def _raw(cls, re_part: Fraction, im_part: Fraction) -> 'ExactComplex':
        obj = object.__new__(cls)
        object.__setattr__(obj, 're', re_part)
        object.__setattr__(obj, 'im', im_part)
        return obj

    @staticmethod
    def _lift(other):
        if isinstance(other, ExactComplex):
            return other
        if isinstance(other, (int, Fraction)):
            return ExactComplex._raw(Fraction(other), Fraction(0))
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return ExactComplex._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return ExactComplex._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return ExactComplex._raw(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not self.im and not o.im:
            return ExactComplex._raw(self.re * o.re, Fraction(0))
        return ExactComplex._raw(self.re * o.re - self.im * o.im,
                                 self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        norm = o.re * o.re + o.im * o.im
        if not norm:
            raise ZeroDivisionError("ExactComplex division by zero")
        return ExactComplex._raw((self.re * o.re + self.im * o.im) / norm,
                                 (self.im * o.re - self.re * o.im) / norm)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return ExactComplex._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __abs__(self) -> float:
        return abs(complex(self))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self) -> 'ExactComplex':
        return ExactComplex._raw(self.re, -self.im)

    def __repr__(self):
        return f"ExactComplex({self.re}, {self.im})"

    def __str__(self):
        return f"({self.re},{self.im})"


Scalar = Union[ExactComplex, complex]


def _rational(value) -> Fraction:
    if isinstance(value, bool):
        return Fraction(int(value))
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ParameterError(f"Not a rational number: {value!r}") from e
    if isinstance(value, numbers.Rational):
        return Fraction(value.numerator, value.denominator)
    raise ParameterError(f"Exact field needs int, Fraction or 'p/q' text, got {type(value).__name__}: {value!r}")


def check_field(field: str) -> str:
    if field not in FIELDS:
        raise ParameterError(f"Unknown field '{field}' (expected one of {FIELDS})")
    return field


def coerce(value, field: str) -> Scalar:
    """Convert `value` into the representation used by `field`."""
    if field == EXACT:
        if isinstance(value, ExactComplex):
            return value
        if isinstance(value, complex):
            raise ParameterError(f"Exact field cannot hold float value {value!r}")
        if isinstance(value, str):
            m = _COMPLEX_TEXT.match(value)
            if m and ',' in value:
                return ExactComplex(m.group(1), m.group(2))
        if isinstance(value, (list, tuple)) and len(value) == 2:
            return ExactComplex(value[0], value[1])
        return ExactComplex(value)
    if field == FLOAT:
        if isinstance(value, ExactComplex):
            return complex(value)
        if isinstance(value, str):
            m = _COMPLEX_TEXT.match(value)
            if m and ',' in value:
                return complex(float(Fraction(m.group(1))), float(Fraction(m.group(2))))
            return complex(float(Fraction(value.strip())))
        if isinstance(value, (list, tuple)) and len(value) == 2:
            return complex(float(Fraction(str(value[0]))), float(Fraction(str(value[1]))))
        try:
            return complex(value)
        except TypeError as e:
            raise ParameterError(f"Cannot use {value!r} as a float coefficient") from e
    raise ParameterError(f"Unknown field '{field}'")


def zero(field: str) -> Scalar:
    return ExactComplex._raw(Fraction(0), Fraction(0)) if field == EXACT else 0j


def one(field: str) -> Scalar:
    return ExactComplex._raw(Fraction(1), Fraction(0)) if field == EXACT else 1 + 0j


def magnitude(value) -> float:
    return abs(complex(value))


def parse_param(text, field: str):
    """
    Parse a model parameter (lambda, mu, folding constant) for `field`.

    Exact field: rational real numbers ("3/2", "0.6", 2). Float field: any
    real number. Returns a real scalar (Fraction or float).
    """
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        return Fraction(text) if field == EXACT else float(text)
    if isinstance(text, float):
        if field == EXACT:
            return Fraction(str(text))
        return text
    try:
        value = Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ParameterError(f"Not a real number: {text!r}") from e
    return value if field == EXACT else float(value)


def format_part(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return format(x, '.12g')


def format_scalar(value) -> str:
    """Render as "(re,im)"; exact values use p/q text."""
    if isinstance(value, ExactComplex):
        return f"({format_part(value.re)},{format_part(value.im)})"
    c = complex(value)
    return f"({format_part(c.real)},{format_part(c.imag)})"


def to_pair(value) -> list:
    """JSON encoding: [re, im], exact parts as "p/q" strings."""
    if isinstance(value, ExactComplex):
        return [format_part(value.re), format_part(value.im)]
    c = complex(value)
    return [c.real, c.imag]


def to_jsonable(value):
    """Scalar for reports: plain number when real, [re, im] otherwise."""
    if value is None:
        return None
    if isinstance(value, ExactComplex):
        if not value.im:
            return format_part(value.re)
        return to_pair(value)
    c = complex(value)
    if c.imag == 0:
        return c.real
    return [c.real, c.imag]
