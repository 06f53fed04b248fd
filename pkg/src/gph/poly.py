"""Exact integer polynomials and truncated power series over the rationals."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


def _trim(coeffs: Sequence[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class IntegerPolynomial:
    """Polynomial with big-integer coefficients in ascending degree.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = ()):
        object.__setattr__(self, "coeffs", _trim([int(c) for c in coeffs]))

    @classmethod
    def monomial(cls, degree: int, c: int = 1) -> IntegerPolynomial:
        return cls([0] * degree + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other: IntegerPolynomial) -> IntegerPolynomial:
        n = max(len(self.coeffs), len(other.coeffs))
        return IntegerPolynomial(self[i] + other[i] for i in range(n))

    def __neg__(self):
        return IntegerPolynomial(-c for c in self.coeffs)

    def __sub__(self, other: IntegerPolynomial) -> IntegerPolynomial:
        return self + (-other)

    def __mul__(self, other: IntegerPolynomial) -> IntegerPolynomial:
        if not self.coeffs or not other.coeffs:
            return IntegerPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntegerPolynomial(out)

    def __divmod__(self, divisor: IntegerPolynomial):
        """Long division; exact over the integers when the divisor is monic.

        A non-monic divisor raises ``ValueError`` if a non-integral quotient
        coefficient would be needed.
        """
        if not divisor:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = divisor.degree
        lead = divisor.leading
        quot = [0] * max(len(rem) - d, 0)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            q, r = divmod(c, lead)
            if r:
                raise ValueError("division is not exact over the integers")
            quot[i - d] = q
            for j, b in enumerate(divisor.coeffs):
                rem[i - d + j] -= q * b
        return IntegerPolynomial(quot), IntegerPolynomial(rem)

    def reversed(self, degree: int | None = None) -> IntegerPolynomial:
        """``u^degree * p(1/u)``; ``degree`` defaults to the actual degree."""
        n = self.degree if degree is None else degree
        if n < self.degree:
            raise ValueError("reversal degree is below the polynomial degree")
        padded = list(self.coeffs) + [0] * (n + 1 - len(self.coeffs))
        return IntegerPolynomial(reversed(padded))

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs] or ["0"]

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{'*' if mono else ''}{mono}"
            terms.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series ``c_0 + c_1 u + ... + c_M u^M`` known exactly through order ``M``."""

    order: int
    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable, order: int | None = None):
        c = [Fraction(v) for v in coeffs]
        if order is None:
            order = len(c) - 1
        if order < 0:
            raise ValueError("order must be non-negative")
        c = (c + [Fraction(0)] * (order + 1))[: order + 1]
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def one(cls, order: int) -> TruncatedSeries:
        return cls([1], order)

    @classmethod
    def from_polynomial(cls, p: IntegerPolynomial, order: int) -> TruncatedSeries:
        return cls(p.coeffs, order)

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i]

    def truncate(self, order: int) -> TruncatedSeries:
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return TruncatedSeries(self.coeffs, order)

    def _common(self, other: TruncatedSeries) -> int:
        return min(self.order, other.order)

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        m = self._common(other)
        return TruncatedSeries((self[i] + other[i] for i in range(m + 1)), m)

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        m = self._common(other)
        return TruncatedSeries((self[i] - other[i] for i in range(m + 1)), m)

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        m = self._common(other)
        out = [Fraction(0)] * (m + 1)
        for i in range(m + 1):
            a = self.coeffs[i]
            if a:
                for j in range(m + 1 - i):
                    out[i + j] += a * other.coeffs[j]
        return TruncatedSeries(out, m)

    def scale(self, c) -> TruncatedSeries:
        return TruncatedSeries((c * v for v in self.coeffs), self.order)

    def inverse(self) -> TruncatedSeries:
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("series with zero constant term has no inverse")
        out = [Fraction(0)] * (self.order + 1)
        out[0] = 1 / c0
        for n in range(1, self.order + 1):
            acc = sum((self.coeffs[k] * out[n - k] for k in range(1, n + 1)), Fraction(0))
            out[n] = -acc / c0
        return TruncatedSeries(out, self.order)

    def derivative(self) -> TruncatedSeries:
        if self.order == 0:
            return TruncatedSeries([0], 0)
        return TruncatedSeries((k * self.coeffs[k] for k in range(1, self.order + 1)), self.order - 1)

    def exp(self) -> TruncatedSeries:
        """Exponential of a series with zero constant term (``n g_n = sum k f_k g_{n-k}``)."""
        if self.coeffs[0] != 0:
            raise ValueError("exp needs a zero constant term to stay exact")
        out = [Fraction(0)] * (self.order + 1)
        out[0] = Fraction(1)
        for n in range(1, self.order + 1):
            acc = sum((k * self.coeffs[k] * out[n - k] for k in range(1, n + 1)), Fraction(0))
            out[n] = acc / n
        return TruncatedSeries(out, self.order)

    def log(self) -> TruncatedSeries:
        if self.coeffs[0] != 1:
            raise ValueError("log needs constant term 1")
        # log f = integral of f'/f
        q = self.derivative() * self.inverse().truncate(max(self.order - 1, 0)) if self.order else None
        out = [Fraction(0)] * (self.order + 1)
        if q is not None:
            for n in range(1, self.order + 1):
                out[n] = q.coeffs[n - 1] / n
        return TruncatedSeries(out, self.order)

    def __pow__(self, e: int) -> TruncatedSeries:
        if e < 0:
            return self.inverse() ** (-e)
        result = TruncatedSeries.one(self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def integers(self) -> list[int]:
        if not self.is_integral():
            raise ValueError("series has non-integral coefficients")
        return [int(c) for c in self.coeffs]

    def to_json(self) -> dict:
        return {"order": self.order, "coefficients": [str(c) for c in self.coeffs]}
