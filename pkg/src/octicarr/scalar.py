"""Exact field arithmetic for the coefficient domains used throughout the package.

Three kinds of field are supported: the rationals, a quadratic extension
Q(sqrt(d)) for a square-free integer d, and a prime field F_p.  Values never
mix field contexts; cross-field coercion is explicit via ``FieldContext.coerce``.
"""
from __future__ import annotations

from fractions import Fraction


class ScalarError(ValueError):
    pass


class MixedContextError(ScalarError):
    """Arithmetic between scalars of different field contexts."""


class DivisionByZeroError(ScalarError):
    pass


def _is_square_free(d: int) -> bool:
    if d in (0, 1):
        return False
    d = abs(d)
    f = 2
    while f * f <= d:
        if d % (f * f) == 0:
            return False
        f += 1
    return True


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


class FieldContext:
    """Tag describing which field a scalar lives in."""

    __slots__ = ("kind", "d", "p")

    def __init__(self, kind: str, d: int | None = None, p: int | None = None):
        self.kind = kind
        self.d = d
        self.p = p

    @staticmethod
    def rational() -> "FieldContext":
        return _QQ

    @staticmethod
    def quadratic(d: int) -> "FieldContext":
        if not _is_square_free(d):
            raise ScalarError(f"discriminant must be square-free and != 0, 1: {d}")
        return FieldContext("quad", d=d)

    @staticmethod
    def prime(p: int) -> "FieldContext":
        if not _is_prime(p):
            raise ScalarError(f"not a prime: {p}")
        return FieldContext("Fp", p=p)

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "Fp" else 0

    def __eq__(self, other):
        return (isinstance(other, FieldContext)
                and self.kind == other.kind and self.d == other.d and self.p == other.p)

    def __hash__(self):
        return hash((self.kind, self.d, self.p))

    def __repr__(self):
        if self.kind == "Q":
            return "Q"
        if self.kind == "quad":
            return f"Q(sqrt({self.d}))"
        return f"F{self.p}"

    # -- element constructors ------------------------------------------------

    def zero(self) -> "Scalar":
        return self.coerce(0)

    def one(self) -> "Scalar":
        return self.coerce(1)

    def sqrt_gen(self) -> "Scalar":
        """The generator sqrt(d) of a quadratic context."""
        if self.kind != "quad":
            raise ScalarError(f"no square root generator in {self!r}")
        return Scalar(self, Fraction(0), Fraction(1))

    def coerce(self, value) -> "Scalar":
        """Build a scalar of this context from an int, Fraction or rational Scalar."""
        if isinstance(value, Scalar):
            if value.ctx == self:
                return value
            if value.ctx.kind == "Q":
                value = value.a
            else:
                raise MixedContextError(f"cannot coerce {value!r} into {self!r}")
        if isinstance(value, int):
            value = Fraction(value)
        if not isinstance(value, Fraction):
            raise ScalarError(f"cannot coerce {value!r} into {self!r}")
        if self.kind == "Fp":
            den = value.denominator % self.p
            if den == 0:
                raise DivisionByZeroError(f"denominator of {value} vanishes mod {self.p}")
            r = value.numerator * pow(den, self.p - 2, self.p) % self.p
            return Scalar(self, r, None)
        return Scalar(self, value, Fraction(0) if self.kind == "quad" else None)


_QQ = FieldContext("Q")
QQ = _QQ


class Scalar:
    """An exact element of Q, Q(sqrt(d)) or F_p.

    Rational and quadratic values hold ``Fraction`` parts a (+ b*sqrt(d));
    prime-field values hold the residue in [0, p).
    """

    __slots__ = ("ctx", "a", "b")

    def __init__(self, ctx: FieldContext, a, b=None):
        self.ctx = ctx
        self.a = a
        self.b = b

    # -- helpers -------------------------------------------------------------

    def _match(self, other) -> "Scalar":
        if isinstance(other, (int, Fraction)):
            return self.ctx.coerce(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        if other.ctx != self.ctx:
            if other.ctx.kind == "Q" or self.ctx.kind == "Q":
                raise MixedContextError(
                    f"implicit mixing of {self.ctx!r} and {other.ctx!r}; coerce explicitly")
            raise MixedContextError(f"cannot mix {self.ctx!r} and {other.ctx!r}")
        return other

    def is_zero(self) -> bool:
        if self.ctx.kind == "Fp":
            return self.a == 0
        return self.a == 0 and (self.b is None or self.b == 0)

    def is_rational(self) -> bool:
        return self.ctx.kind != "Fp" and (self.b is None or self.b == 0)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        o = self._match(other)
        if o is NotImplemented:
            return o
        k = self.ctx.kind
        if k == "Fp":
            return Scalar(self.ctx, (self.a + o.a) % self.ctx.p)
        if k == "Q":
            return Scalar(self.ctx, self.a + o.a)
        return Scalar(self.ctx, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        k = self.ctx.kind
        if k == "Fp":
            return Scalar(self.ctx, -self.a % self.ctx.p)
        if k == "Q":
            return Scalar(self.ctx, -self.a)
        return Scalar(self.ctx, -self.a, -self.b)

    def __sub__(self, other):
        o = self._match(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._match(other)
        if o is NotImplemented:
            return o
        k = self.ctx.kind
        if k == "Fp":
            return Scalar(self.ctx, self.a * o.a % self.ctx.p)
        if k == "Q":
            return Scalar(self.ctx, self.a * o.a)
        d = self.ctx.d
        return Scalar(self.ctx,
                      self.a * o.a + d * self.b * o.b,
                      self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise DivisionByZeroError("inverse of zero")
        k = self.ctx.kind
        if k == "Fp":
            return Scalar(self.ctx, pow(self.a, self.ctx.p - 2, self.ctx.p))
        if k == "Q":
            return Scalar(self.ctx, 1 / self.a)
        n = self.a * self.a - self.ctx.d * self.b * self.b
        return Scalar(self.ctx, self.a / n, -self.b / n)

    def __truediv__(self, other):
        o = self._match(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.ctx.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            try:
                other = self.ctx.coerce(other)
            except ScalarError:
                return NotImplemented
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.ctx == other.ctx and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.ctx, self.a, self.b))

    def __bool__(self):
        return not self.is_zero()

    # -- conversions ---------------------------------------------------------

    def conjugate(self) -> "Scalar":
        if self.ctx.kind != "quad":
            return self
        return Scalar(self.ctx, self.a, -self.b)

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ScalarError(f"{self!r} is not rational")
        return self.a if self.ctx.kind != "Fp" else Fraction(self.a)

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        return serialize_scalar(self)


def serialize_scalar(s: Scalar) -> str:
    """Text form used verbatim in JSON reports.

    Rationals print as ``p/q`` (or ``p`` for integers), quadratic values as
    ``a+b*sqrt(d)``, prime-field values as ``r mod p``.
    """
    if s.ctx.kind == "Fp":
        return f"{s.a} mod {s.ctx.p}"

    def frac(x: Fraction) -> str:
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    if s.ctx.kind == "Q" or s.b == 0:
        return frac(s.a)
    b = frac(s.b)
    tail = f"sqrt({s.ctx.d})" if b == "1" else (f"-sqrt({s.ctx.d})" if b == "-1" else f"{b}*sqrt({s.ctx.d})")
    if s.a == 0:
        return tail
    sign = "+" if not tail.startswith("-") else ""
    return f"{frac(s.a)}{sign}{tail}"


def field_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Exact binary field operation; ``op`` is one of add, sub, mul, div."""
    if not isinstance(a, Scalar) or not isinstance(b, Scalar):
        raise ScalarError("field_arith expects Scalar operands")
    if a.ctx != b.ctx:
        raise MixedContextError(f"cannot mix {a.ctx!r} and {b.ctx!r}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b.is_zero():
            raise DivisionByZeroError("division by zero")
        return a / b
    raise ScalarError(f"unknown operation {op!r}")
