"""Truncated complex Taylor-series (jet) arithmetic.

A jet stores the first six Taylor coefficients c0..c5 of a holomorphic
function at a base point, i.e. f^(k)(z0)/k!.  Degree 5 is the minimal
truncation for the pole-coefficient formulas: a third-order zero needs
derivatives up to order 5 of the trace formula.  Coefficients are kept
in Taylor form so products are plain Cauchy convolutions.

Only field operations are provided; every closed form evaluated on jets
in this package is rational in z, so no transcendental jets are needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DivisionByZeroJet, JetBaseMismatch, OrderOutOfRange

DEGREE = 5
NCOEFF = DEGREE + 1

_Scalar = (int, float, complex)


@dataclass(frozen=True)
class Jet:
    """Degree-5 Taylor expansion of a holomorphic function at ``base``."""

    base: complex
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != NCOEFF:
            raise ValueError(f"jet needs {NCOEFF} coefficients, got {len(self.coeffs)}")

    @property
    def value(self) -> complex:
        return self.coeffs[0]

    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.base != self.base:
                raise JetBaseMismatch(f"base points differ: {self.base} vs {other.base}")
            return other
        if isinstance(other, _Scalar):
            return jet_const(other, self.base)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Jet(self.base, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.base, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Jet(self.base, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        out = [0j] * NCOEFF
        for k in range(NCOEFF):
            out[k] = sum(a[j] * b[k - j] for j in range(k + 1))
        return Jet(self.base, tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return _div(self, o)

    def __rtruediv__(self, other):
        return _div(jet_const(other, self.base), self)

    def __pow__(self, p):
        if not isinstance(p, int):
            return NotImplemented
        return jet_int_pow(self, p)


def jet_var(z0: complex) -> Jet:
    """Jet of the identity function f(z) = z at z0."""
    return Jet(complex(z0), (complex(z0), 1 + 0j, 0j, 0j, 0j, 0j))


def jet_const(c: complex, z0: complex = 0j) -> Jet:
    """Jet of a constant function at z0."""
    return Jet(complex(z0), (complex(c), 0j, 0j, 0j, 0j, 0j))


def _div(a: Jet, b: Jet) -> Jet:
    # long division of truncated series; c_k = (a_k - sum_{j<k} c_j b_{k-j}) / b_0
    if b.coeffs[0] == 0:
        raise DivisionByZeroJet(f"division by jet with zero constant term at base {b.base}")
    out = [0j] * NCOEFF
    for k in range(NCOEFF):
        s = a.coeffs[k]
        for j in range(k):
            s -= out[j] * b.coeffs[k - j]
        out[k] = s / b.coeffs[0]
    return Jet(a.base, tuple(out))


def jet_arith(a: Jet, b: Jet, op: str) -> Jet:
    """Apply a field operation to two jets at the same base point."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def jet_int_pow(a: Jet, p: int) -> Jet:
    """Integer power of a jet; negative powers via series reciprocal."""
    if p < 0:
        a = _div(jet_const(1.0, a.base), a)
        p = -p
    out = jet_const(1.0, a.base)
    acc = a
    while p:
        if p & 1:
            out = out * acc
        p >>= 1
        if p:
            acc = acc * acc
    return out


def derivative(a: Jet, k: int) -> complex:
    """k-th derivative of the expanded function at the base point."""
    if not 0 <= k <= DEGREE:
        raise OrderOutOfRange(f"order {k} outside 0..{DEGREE}")
    return math.factorial(k) * a.coeffs[k]
