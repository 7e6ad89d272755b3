"""Exact arithmetic in the cyclotomic field Q(zeta_e).

Elements are rational coefficient vectors in the power basis
``1, z, ..., z^(phi(e)-1)`` after reduction modulo the e-th cyclotomic
polynomial.  Since ``Z[z]`` is the ring of integers of ``Q(z)``, a value is an
algebraic integer exactly when every coefficient is an integer.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from .errors import ParseError

Number = Union[int, Fraction, "CyclotomicNumber"]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _poly_divexact(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        q = num[i + len(den) - 1] // den[-1]
        out[i] = q
        for j, c in enumerate(den):
            num[i + j] -= q * c
    assert not any(num), "inexact polynomial division"
    return out


def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _power_table(e: int) -> tuple[tuple[int, ...], ...]:
    """Reduced coefficient vectors of z^k for k = 0 .. 2e-1."""
    phi = cyclotomic_polynomial(e)
    deg = len(phi) - 1
    rows = []
    vec = [1] + [0] * (deg - 1) if deg else []
    for _ in range(2 * e):
        rows.append(tuple(vec))
        # multiply by z, then reduce the overflow coefficient with the monic Phi_e
        top = vec[-1] if deg else 0
        vec = [0] + vec[:-1] if deg else []
        for j in range(deg):
            vec[j] -= top * phi[j]
    return tuple(rows)


def multiplication_tensor(e: int):
    """Integer array ``W[j, k, :]`` = reduced coefficients of ``z^(j+k)``.

    For integer coefficient vectors ``u, v`` the product is
    ``einsum('j,k,jka->a', u, v, W)``.
    """
    import numpy as np

    deg = euler_phi(e)
    table = np.array(_power_table(e), dtype=np.int64)
    idx = np.add.outer(np.arange(deg), np.arange(deg)) % e
    return table[idx]


class CyclotomicNumber:
    __slots__ = ("e", "coeffs")

    def __init__(self, e: int, coeffs: Iterable):
        self.e = e
        coeffs = tuple(Fraction(c) for c in coeffs)
        deg = euler_phi(e)
        if len(coeffs) < deg:
            coeffs = coeffs + (Fraction(0),) * (deg - len(coeffs))
        elif len(coeffs) > deg:
            coeffs = self._reduce(e, coeffs)
        self.coeffs = coeffs

    @staticmethod
    def _reduce(e: int, coeffs) -> tuple[Fraction, ...]:
        table = _power_table(e)
        deg = euler_phi(e)
        out = [Fraction(0)] * deg
        for k, c in enumerate(coeffs):
            if c:
                row = table[k % e]
                for j in range(deg):
                    if row[j]:
                        out[j] += c * row[j]
        return tuple(out)

    # -- constructors --------------------------------------------------------

    @classmethod
    def rational(cls, e: int, q) -> CyclotomicNumber:
        return cls(e, [q])

    @classmethod
    def root_of_unity(cls, e: int, k: int) -> CyclotomicNumber:
        """``z_e ** k``."""
        obj = cls.__new__(cls)
        obj.e = e
        obj.coeffs = tuple(Fraction(c) for c in _power_table(e)[k % e])
        return obj

    @classmethod
    def from_exponents(cls, e: int, multiplicities: Iterable[int]) -> CyclotomicNumber:
        """``sum_k m_k z^k`` for a list of multiplicities indexed by k."""
        return cls(e, cls._reduce(e, [Fraction(m) for m in multiplicities]))

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> CyclotomicNumber:
        if isinstance(other, CyclotomicNumber):
            if other.e == self.e:
                return other
            raise ValueError(f"mismatched conductors {self.e} and {other.e}; lift first")
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber.rational(self.e, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CyclotomicNumber(self.e, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.e, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CyclotomicNumber(self.e, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.e, [a * other for a in self.coeffs])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        prod = [Fraction(0)] * max(1, 2 * len(self.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        return CyclotomicNumber(self.e, self._reduce(self.e, prod))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.e, [a / other for a in self.coeffs])
        return NotImplemented

    def galois(self, a: int) -> CyclotomicNumber:
        """Image under ``z -> z^a`` (requires gcd(a, e) == 1)."""
        if math.gcd(a, self.e) != 1:
            raise ValueError(f"{a} is not a unit mod {self.e}")
        vec = [Fraction(0)] * self.e
        for j, c in enumerate(self.coeffs):
            vec[(a * j) % self.e] += c
        return CyclotomicNumber(self.e, self._reduce(self.e, vec))

    def conjugate(self) -> CyclotomicNumber:
        return self.galois(-1 % self.e) if self.e > 2 else self

    def lift(self, e: int) -> CyclotomicNumber:
        """The same number viewed in Q(z_e) for a multiple ``e`` of the conductor."""
        if e == self.e:
            return self
        if e % self.e:
            raise ValueError(f"{self.e} does not divide {e}")
        step = e // self.e
        vec = [Fraction(0)] * e
        for j, c in enumerate(self.coeffs):
            vec[(j * step) % e] += c
        return CyclotomicNumber(e, self._reduce(e, vec))

    # -- predicates ----------------------------------------------------------

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def is_algebraic_integer(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.to_fraction() == other
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        if other.e != self.e:
            e = math.lcm(self.e, other.e)
            return self.lift(e).coeffs == other.lift(e).coeffs
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.to_fraction())
        return hash((self.e, self.coeffs))

    def sort_key(self) -> tuple:
        return tuple(-c for c in self.coeffs)

    def to_complex(self) -> complex:
        z = complex(math.cos(2 * math.pi / self.e), math.sin(2 * math.pi / self.e))
        return sum(float(c) * z ** j for j, c in enumerate(self.coeffs))

    # -- serialization -------------------------------------------------------

    def serialize(self) -> str:
        if self.is_rational():
            return format_rational(self.to_fraction())
        return f"cyc({self.e})[" + ", ".join(format_rational(c) for c in self.coeffs) + "]"

    __str__ = serialize

    def __repr__(self) -> str:
        return f"CyclotomicNumber({self.serialize()})"


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


_CYC_RE = re.compile(r"^cyc\((\d+)\)\[(.*)\]$")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not re.fullmatch(r"-?\d+(/\d+)?", text):
        raise ParseError(f"malformed rational {text!r}")
    return Fraction(text)


def parse_cyclotomic(text: str, e: int) -> CyclotomicNumber:
    """Parse a serialized value; plain rationals are placed in Q(z_e)."""
    text = text.strip()
    m = _CYC_RE.match(text)
    if not m:
        return CyclotomicNumber.rational(e, parse_rational(text))
    ee = int(m.group(1))
    body = m.group(2).strip()
    coeffs = [parse_rational(t) for t in body.split(",")] if body else []
    if len(coeffs) != euler_phi(ee):
        raise ParseError(f"cyc({ee}) needs {euler_phi(ee)} coefficients, got {len(coeffs)}")
    val = CyclotomicNumber(ee, coeffs)
    return val.lift(e) if e % ee == 0 else val
