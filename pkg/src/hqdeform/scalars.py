"""Exact scalar fields, q-integers and multiplicative orders.

Two backends are supported: the rationals (``fractions.Fraction``) and prime
fields F_p with p < 2**31 (the :class:`ModP` value type below).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

INFINITE = "infinite"


class FieldError(ValueError):
    pass


class ModP:
    """Residue class modulo a prime p."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other) -> int:
        if isinstance(other, ModP):
            if other.p != self.p:
                raise FieldError(f"mixing F_{self.p} and F_{other.p}")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return ModP(-self.v, self.p)

    def __pos__(self):
        return self

    def inverse(self) -> "ModP":
        if self.v == 0:
            raise ZeroDivisionError(f"0 is not invertible in F_{self.p}")
        return ModP(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * ModP(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(o, self.p) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return ModP(pow(self.inverse().v, -e, self.p), self.p)
        return ModP(pow(self.v, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, ModP):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return (self.v - other) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v} mod {self.p}"


Scalar = Union[Fraction, ModP]

_MODP_RE = re.compile(r"^\s*(-?\d+)\s*mod\s*(\d+)\s*$")
_FRAC_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+))?\s*$")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (``characteristic == 0``) or F_p."""

    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if p != 0 and (not _is_prime(p) or p >= 2**31):
            raise FieldError(f"characteristic must be 0 or a prime below 2^31, got {p}")

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        t = str(text).strip().lower()
        if t in ("q", "qq", "rational", "rationals"):
            return cls(0)
        m = re.fullmatch(r"(?:fp|f|gf)[:_]?(\d+)", t)
        if m:
            return cls(int(m.group(1)))
        raise FieldError(f"unknown field spec {text!r}; use 'Q' or 'fp:<prime>'")

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    def __call__(self, x) -> Scalar:
        """Coerce ints, Fractions, ModP values and strings into this field."""
        p = self.characteristic
        if isinstance(x, str):
            return self.parse_scalar(x)
        if isinstance(x, bool):
            x = int(x)
        if p == 0:
            if isinstance(x, (int, Fraction)):
                return Fraction(x)
            raise FieldError(f"cannot coerce {x!r} into Q")
        if isinstance(x, ModP):
            if x.p != p:
                raise FieldError(f"cannot coerce {x!r} into F_{p}")
            return x
        if isinstance(x, int):
            return ModP(x, p)
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise FieldError(f"{x} has a denominator divisible by {p}")
            return ModP(x.numerator * pow(x.denominator, -1, p), p)
        raise FieldError(f"cannot coerce {x!r} into F_{p}")

    @property
    def zero(self) -> Scalar:
        return self(0)

    @property
    def one(self) -> Scalar:
        return self(1)

    def parse_scalar(self, text: str) -> Scalar:
        m = _MODP_RE.match(text)
        if m:
            if int(m.group(2)) != self.characteristic:
                raise FieldError(f"{text!r} does not live in {self.name}")
            return self(int(m.group(1)))
        m = _FRAC_RE.match(text.replace("−", "-"))
        if not m:
            raise FieldError(f"cannot parse scalar {text!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise FieldError(f"zero denominator in {text!r}")
        return self(Fraction(num, den))

    def format(self, x: Scalar) -> str:
        if isinstance(x, ModP):
            return f"{x.v} mod {x.p}"
        x = Fraction(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def inv(self, x: Scalar) -> Scalar:
        if x == 0:
            raise ZeroDivisionError("0 is not invertible")
        if isinstance(x, ModP):
            return x.inverse()
        return 1 / Fraction(x)

    def elements(self):
        """All elements of a prime field (used by exhaustive checks)."""
        if self.is_rational:
            raise FieldError("Q is infinite")
        return [self(i) for i in range(self.characteristic)]

    @property
    def name(self) -> str:
        return "Q" if self.is_rational else f"fp:{self.characteristic}"


def mult_order(x: Scalar):
    """Smallest l >= 1 with x**l == 1, or ``INFINITE``."""
    if x == 0:
        raise FieldError("0 has no multiplicative order")
    if isinstance(x, ModP):
        y, l = x, 1
        while y != 1:
            y = y * x
            l += 1
        return l
    if x == 1:
        return 1
    if x == -1:
        return 2
    return INFINITE


@dataclass(frozen=True)
class QParam:
    """The deformation parameter q together with its multiplicative order."""

    value: Scalar
    order: object  # int or INFINITE

    @classmethod
    def of(cls, value: Scalar) -> "QParam":
        return cls(value, mult_order(value))

    @property
    def truncation(self):
        """The nilpotency index l of D_1, D_2 (None when the D's are free)."""
        if isinstance(self.order, int) and self.order >= 2:
            return self.order
        return None

    def power(self, e: int) -> Scalar:
        return self.value**e


def qint(i: int, q: QParam | Scalar) -> Scalar:
    """1 + q + ... + q^(i-1)."""
    qv = q.value if isinstance(q, QParam) else q
    if i < 0:
        raise FieldError("q-integers need a nonnegative index")
    total = qv * 0
    term = qv * 0 + 1
    for _ in range(i):
        total = total + term
        term = term * qv
    return total


def qfactorial(i: int, q: QParam | Scalar) -> Scalar:
    qv = q.value if isinstance(q, QParam) else q
    out = qv * 0 + 1
    for m in range(1, i + 1):
        out = out * qint(m, qv)
    return out


def qbinomial(m: int, i: int, q: QParam | Scalar) -> Scalar:
    """Gaussian binomial via C(m,i) = C(m-1,i-1) + q^i C(m-1,i)."""
    qv = q.value if isinstance(q, QParam) else q
    if m < 0 or i < 0 or i > m:
        raise FieldError(f"qbinomial({m}, {i}) is out of range")
    one = qv * 0 + 1
    row = [one]
    for mm in range(1, m + 1):
        new = [one] * (mm + 1)
        for k in range(1, mm):
            new[k] = row[k - 1] + qv**k * row[k]
        row = new
    return row[i]
