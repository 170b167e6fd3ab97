"""Exact arithmetic in cyclotomic fields with integer coordinates.

Values live in Q(zeta_e) for a fixed conductor ``e`` (the exponent of the
group under study) and are stored as integer coefficient vectors in the
power basis ``1, z, ..., z^(phi(e)-1)``, reduced modulo the e-th cyclotomic
polynomial.  Reduction keeps representations canonical, so equality is
coefficient equality and rational values are recognized by inspection.
No floating point is used anywhere except in the display helper.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache
from typing import Sequence

__all__ = ["Cyclotomic", "cyclotomic_polynomial"]


def _poly_divide_exact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (coefficients ascending)."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        lead = num[k + len(den) - 1]
        if lead % den[-1] != 0:
            raise ArithmeticError("non-exact polynomial division")
        q = lead // den[-1]
        out[k] = q
        if q:
            for i, c in enumerate(den):
                num[k + i] -= q * c
    if any(num):
        raise ArithmeticError("non-exact polynomial division (remainder)")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(e: int) -> tuple[int, ...]:
    """Coefficients (ascending) of the e-th cyclotomic polynomial."""
    if e < 1:
        raise ValueError("conductor must be positive")
    if e == 1:
        return (-1, 1)
    num = [0] * (e + 1)
    num[0], num[e] = -1, 1
    den = [1]
    for d in range(1, e):
        if e % d == 0:
            phi_d = cyclotomic_polynomial(d)
            new = [0] * (len(den) + len(phi_d) - 1)
            for i, a in enumerate(den):
                if a:
                    for j, b in enumerate(phi_d):
                        new[i + j] += a * b
            den = new
    return tuple(_poly_divide_exact(num, den))


@lru_cache(maxsize=None)
def _power_reductions(e: int) -> tuple[tuple[int, ...], ...]:
    """Reduced coordinates of z^k for k in 0..e-1 (basis length phi(e))."""
    phi = cyclotomic_polynomial(e)
    d = len(phi) - 1
    rows: list[tuple[int, ...]] = []
    for k in range(d):
        row = [0] * d
        row[k] = 1
        rows.append(tuple(row))
    for k in range(d, e):
        # z^k = z * z^(k-1); top coefficient folds through the polynomial
        prev = rows[k - 1]
        shifted = [0] + list(prev[:-1])
        top = prev[-1]
        if top:
            for i in range(d):
                shifted[i] -= top * phi[i]
        rows.append(tuple(shifted))
    return tuple(rows)


class Cyclotomic:
    """An element of Q(zeta_e) with integer coordinates, canonical form."""

    __slots__ = ("e", "coords", "_hash")

    def __init__(self, e: int, coords: Sequence[int]):
        d = len(cyclotomic_polynomial(e)) - 1
        coords = tuple(int(c) for c in coords)
        if len(coords) != d:
            raise ValueError(f"need {d} coordinates for conductor {e}, got {len(coords)}")
        self.e = e
        self.coords = coords
        self._hash = hash((e, coords))

    @classmethod
    def integer(cls, e: int, n: int) -> "Cyclotomic":
        d = len(cyclotomic_polynomial(e)) - 1
        return cls(e, (n,) + (0,) * (d - 1))

    @classmethod
    def root(cls, e: int, k: int) -> "Cyclotomic":
        """The root of unity z^k."""
        return cls(e, _power_reductions(e)[k % e])

    @classmethod
    def from_powers(cls, e: int, powers: Sequence[int]) -> "Cyclotomic":
        """Value sum(powers[k] * z^k), ``powers`` of length up to e."""
        d = len(cyclotomic_polynomial(e)) - 1
        table = _power_reductions(e)
        out = [0] * d
        for k, c in enumerate(powers):
            if c:
                row = table[k % e]
                for i in range(d):
                    out[i] += c * row[i]
        return cls(e, out)

    def _check(self, other: "Cyclotomic") -> None:
        if self.e != other.e:
            raise ValueError(f"conductor mismatch: {self.e} vs {other.e}")

    def __add__(self, other: "Cyclotomic") -> "Cyclotomic":
        self._check(other)
        return Cyclotomic(self.e, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Cyclotomic") -> "Cyclotomic":
        self._check(other)
        return Cyclotomic(self.e, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic(self.e, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, int):
            return Cyclotomic(self.e, tuple(a * other for a in self.coords))
        self._check(other)
        d = len(self.coords)
        conv = [0] * (2 * d - 1 if d else 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        conv[i + j] += a * b
        table = _power_reductions(self.e)
        out = [0] * d
        for k, c in enumerate(conv):
            if c:
                row = table[k % self.e]
                for i in range(d):
                    out[i] += c * row[i]
        return Cyclotomic(self.e, out)

    __rmul__ = __mul__

    def galois(self, k: int) -> "Cyclotomic":
        """Image under z -> z^k; requires gcd(k, e) = 1."""
        if math.gcd(k, self.e) != 1:
            raise ValueError(f"{k} is not coprime to the conductor {self.e}")
        table = _power_reductions(self.e)
        d = len(self.coords)
        out = [0] * d
        for j, c in enumerate(self.coords):
            if c:
                row = table[(j * k) % self.e]
                for i in range(d):
                    out[i] += c * row[i]
        return Cyclotomic(self.e, out)

    def conjugate(self) -> "Cyclotomic":
        """Complex conjugation: the Galois action inverting the root."""
        return self.galois(self.e - 1) if self.e > 1 else self

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational_value(self) -> int:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def halve(self) -> "Cyclotomic":
        """Exact division by 2; raises when any coordinate is odd."""
        if any(c % 2 for c in self.coords):
            raise ArithmeticError(f"{self} is not divisible by 2")
        return Cyclotomic(self.e, tuple(c // 2 for c in self.coords))

    def sort_key(self) -> tuple[int, ...]:
        return self.coords

    def approx(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.e)
        return sum(c * z**k for k, c in enumerate(self.coords))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Cyclotomic)
            and self.e == other.e
            and self.coords == other.coords
        )

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coords):
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
                continue
            mag = "" if abs(c) == 1 else str(abs(c)) + "*"
            term = f"{mag}z" if k == 1 else f"{mag}z^{k}"
            if not parts:
                parts.append(term if c > 0 else "-" + term)
            else:
                parts.append(("+ " if c > 0 else "- ") + term)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Cyclotomic(e={self.e}, {self})"
