"""
Exact arithmetic in Q(√3).

Every coefficient of the shadow tables is a + b·√3 with rational a and b.
Rationals are ``fractions.Fraction`` (arbitrary precision, always reduced).
"""
import math
from fractions import Fraction

SQRT3_FLOAT = math.sqrt(3)


class DivisionByZero(ZeroDivisionError):
    """Raised when inverting the zero element of Q(√3)."""


def as_rational(value):
    """Coerce an int, Fraction or "p/q" string to a Fraction. Floats are refused."""
    if isinstance(value, float):
        raise TypeError(f"Refusing float {value!r} in exact arithmetic")
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def format_rational(value):
    """Textual form used by the DSL and JSON: "p/q", or "p" when q = 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class ExtScalar:
    """
    Immutable element a + b·√3 of Q(√3).

    Radicals are rationalized on construction, so 1/√3 is stored as (0, 1/3)
    and equality is plain structural equality of (a, b).
    """
    __slots__ = ('_a', '_b')

    def __init__(self, a=0, b=0):
        object.__setattr__(self, '_a', as_rational(a))
        object.__setattr__(self, '_b', as_rational(b))

    def __setattr__(self, name, value):
        raise AttributeError("ExtScalar is immutable")

    @property
    def a(self):
        return self._a

    @property
    def b(self):
        return self._b

    @classmethod
    def coerce(cls, value):
        if isinstance(value, ExtScalar):
            return value
        return cls(value, 0)

    @classmethod
    def from_pair(cls, pair):
        a, b = pair
        return cls(as_rational(a), as_rational(b))

    def to_pair(self):
        return (format_rational(self._a), format_rational(self._b))

    def canonical(self):
        # Fractions are reduced on construction; rebuilding is a no-op by value.
        return ExtScalar(self._a, self._b)

    @property
    def is_rational(self):
        return self._b == 0

    def is_zero(self):
        return self._a == 0 and self._b == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExtScalar(other)
        if not isinstance(other, ExtScalar):
            return NotImplemented
        return self._a == other._a and self._b == other._b

    def __hash__(self):
        return hash((self._a, self._b))

    def __neg__(self):
        return ExtScalar(-self._a, -self._b)

    def __pos__(self):
        return self

    def __add__(self, other):
        if not isinstance(other, (ExtScalar, int, Fraction)):
            return NotImplemented
        other = ExtScalar.coerce(other)
        return ExtScalar(self._a + other._a, self._b + other._b)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (ExtScalar, int, Fraction)):
            return NotImplemented
        other = ExtScalar.coerce(other)
        return ExtScalar(self._a - other._a, self._b - other._b)

    def __rsub__(self, other):
        return ExtScalar.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (ExtScalar, int, Fraction)):
            return NotImplemented
        other = ExtScalar.coerce(other)
        return ExtScalar(
            self._a * other._a + 3 * self._b * other._b,
            self._a * other._b + self._b * other._a,
        )

    __rmul__ = __mul__

    def conjugate(self):
        return ExtScalar(self._a, -self._b)

    def norm(self):
        """Field norm a² − 3b², zero only for the zero element."""
        return self._a * self._a - 3 * self._b * self._b

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("0 has no inverse in Q(sqrt3)")
        n = self.norm()
        return ExtScalar(self._a / n, -self._b / n)

    def __truediv__(self, other):
        if not isinstance(other, (ExtScalar, int, Fraction)):
            return NotImplemented
        return self * ExtScalar.coerce(other).inverse()

    def __rtruediv__(self, other):
        return ExtScalar.coerce(other) * self.inverse()

    def __float__(self):
        return float(self._a) + float(self._b) * SQRT3_FLOAT

    def __repr__(self):
        return f"ExtScalar({format_rational(self._a)!r}, {format_rational(self._b)!r})"

    def __str__(self):
        if self._b == 0:
            return format_rational(self._a)
        sign = '-' if self._b < 0 else '+'
        return f"{format_rational(self._a)}{sign}{format_rational(abs(self._b))}r3"


ZERO = ExtScalar(0, 0)
ONE = ExtScalar(1, 0)
SQRT3 = ExtScalar(0, 1)


def ext_mul(x, y):
    return ExtScalar.coerce(x) * ExtScalar.coerce(y)


def ext_inv(x):
    return ExtScalar.coerce(x).inverse()


def ext_to_float(x):
    return float(ExtScalar.coerce(x))
