"""
Exact Scalars - Elements of the field Q(sqrt 5)
Used for root coordinates of the non-crystallographic types H3 and H4
"""

from fractions import Fraction
from typing import Union

Number = Union[int, Fraction, "QuadraticScalar"]


class QuadraticScalar:
    """Exact value a + b*sqrt(5) with rational a and b"""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def coerce(cls, value: Number) -> "QuadraticScalar":
        """Lift an int, Fraction or QuadraticScalar into the field"""
        if isinstance(value, QuadraticScalar):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value, 0)
        raise TypeError(f"Cannot coerce {type(value).__name__} to QuadraticScalar")

    @classmethod
    def golden_ratio(cls) -> "QuadraticScalar":
        return cls(Fraction(1, 2), Fraction(1, 2))

    def __add__(self, other):
        try:
            other = QuadraticScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return QuadraticScalar(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticScalar(-self.a, -self.b)

    def __sub__(self, other):
        try:
            other = QuadraticScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return QuadraticScalar(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return QuadraticScalar.coerce(other) - self

    def __mul__(self, other):
        try:
            other = QuadraticScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return QuadraticScalar(
            self.a * other.a + 5 * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Field norm a^2 - 5 b^2, zero only for the zero element"""
        return self.a * self.a - 5 * self.b * self.b

    def inverse(self) -> "QuadraticScalar":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadraticScalar division by zero")
        return QuadraticScalar(self.a / n, -self.b / n)

    def __truediv__(self, other):
        try:
            other = QuadraticScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return QuadraticScalar.coerce(other) * self.inverse()

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(5)"""
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        if self.a == 0:
            return (self.b > 0) - (self.b < 0)
        if (self.a > 0) == (self.b > 0):
            return 1 if self.a > 0 else -1
        # opposite signs: compare a^2 with 5 b^2
        dominant = self.a if self.a * self.a > 5 * self.b * self.b else self.b
        return 1 if dominant > 0 else -1

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadraticScalar):
            return self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __repr__(self):
        if self.b == 0:
            return f"{self.a}"
        if self.a == 0:
            return f"{self.b}*sqrt5"
        return f"({self.a} + {self.b}*sqrt5)"
