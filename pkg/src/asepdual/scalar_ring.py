"""Exact Laurent polynomials in ``t`` with rational coefficients.

The ring variable is ``t`` with ``tau = t**2``, so every half-integer power of
the asymmetry parameter is an ordinary integer power of ``t``.  Coefficients
are :class:`fractions.Fraction` (stored as plain ``int`` when integral, which
keeps the common case fast).
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterator, Tuple, Union

Coefficient = Union[int, Fraction]
ScalarLike = Union["LaurentScalar", int, Fraction]


def _canon_coeff(c: Coefficient) -> Coefficient:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class LaurentScalar:
    """Immutable element of Q[t, 1/t].

    ``terms`` maps integer exponents to nonzero rational coefficients.  No
    zero coefficient is ever stored, so two scalars are equal iff their term
    maps are equal.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Dict[int, Coefficient] | None = None):
        clean: Dict[int, Coefficient] = {}
        if terms:
            for e in sorted(terms):
                c = terms[e]
                if not isinstance(c, (int, Fraction)):
                    if isinstance(c, Rational):
                        c = Fraction(c)
                    else:
                        raise TypeError(f"coefficient must be rational, got {type(c).__name__}")
                if c:
                    clean[int(e)] = _canon_coeff(c)
        self._terms = clean
        self._hash = None

    # construction helpers -------------------------------------------------

    @classmethod
    def _raw(cls, terms: Dict[int, Coefficient]) -> "LaurentScalar":
        # terms already canonical and zero-free; skips validation in hot loops
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c: Coefficient) -> "LaurentScalar":
        return cls({0: c})

    @classmethod
    def coerce(cls, x: ScalarLike) -> "LaurentScalar":
        if isinstance(x, LaurentScalar):
            return x
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, (int, Fraction)):
            return cls({0: x}) if x else _ZERO
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentScalar")

    # inspection -----------------------------------------------------------

    @property
    def terms(self) -> Dict[int, Coefficient]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[int, Coefficient]]:
        return iter(sorted(self._terms.items()))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {0}

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def constant_value(self) -> Coefficient:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get(0, 0)

    def degree_range(self) -> Tuple[int, int]:
        if not self._terms:
            raise ValueError("zero polynomial has no degree range")
        return min(self._terms), max(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    # ring operations ------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self
            out = dict(self._terms)
            c = out.get(0, 0) + other
            if c:
                out[0] = _canon_coeff(c)
            else:
                out.pop(0, None)
            return LaurentScalar._raw(out)
        if not isinstance(other, LaurentScalar):
            return NotImplemented
        if len(other._terms) > len(self._terms):
            self, other = other, self
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = _canon_coeff(s)
            else:
                del out[e]
        return LaurentScalar._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentScalar":
        return LaurentScalar._raw({e: -c for e, c in self._terms.items()})

    def __pos__(self) -> "LaurentScalar":
        return self

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, LaurentScalar)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return _ZERO
            if other == 1:
                return self
            return LaurentScalar._raw({e: _canon_coeff(c * other) for e, c in self._terms.items()})
        if not isinstance(other, LaurentScalar):
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return _ZERO
        out: Dict[int, Coefficient] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentScalar._raw({e: _canon_coeff(c) for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero rational or by a monomial (the units of the ring)."""
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return self * (Fraction(1) / other)
        if isinstance(other, LaurentScalar):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def inverse(self) -> "LaurentScalar":
        if not self.is_monomial():
            raise ZeroDivisionError(f"{self} is not a unit of Q[t, 1/t]")
        (e, c), = self._terms.items()
        return LaurentScalar._raw({-e: _canon_coeff(Fraction(1) / c)})

    def __pow__(self, k: int) -> "LaurentScalar":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if self.is_monomial():
            (e, c), = self._terms.items()
            return LaurentScalar._raw({e * k: _canon_coeff(Fraction(c) ** k)})
        out = _ONE
        for _ in range(k):
            out = out * self
        return out

    # comparison / hashing -------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentScalar):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self._terms
            return self._terms == {0: other}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if not self._terms:
                self._hash = hash(0)
            elif self.is_constant():
                self._hash = hash(self._terms[0])
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # evaluation / display ---------------------------------------------------

    def evaluate(self, t0: float) -> float:
        return laurent_eval(self, t0)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for e in sorted(self._terms, reverse=True):
            c = self._terms[e]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                var = "t" if e == 1 else f"t^{e}"
                body = var if mag == 1 else f"{mag}*{var}"
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"LaurentScalar({str(self)!r})"


_ZERO = LaurentScalar._raw({})
_ONE = LaurentScalar._raw({0: 1})

#: the ring variable, ``t = tau**(1/2)``
T = LaurentScalar._raw({1: 1})
#: the asymmetry parameter as a ring element
TAU = LaurentScalar._raw({2: 1})


def tau_power(k_half: int, coeff: Coefficient = 1) -> LaurentScalar:
    """Monomial ``coeff * tau**(k_half/2)``, i.e. ``coeff * t**k_half``."""
    return LaurentScalar({k_half: coeff})


def laurent_eval(p: ScalarLike, t0: float) -> float:
    if not t0 > 0:
        raise ValueError(f"evaluation point must be positive, got {t0}")
    p = LaurentScalar.coerce(p)
    t0 = float(t0)
    return math.fsum(float(c) * t0 ** e for e, c in p.items())


def laurent_arith(kind: str, a: ScalarLike, b: ScalarLike | None = None) -> LaurentScalar:
    a = LaurentScalar.coerce(a)
    if kind == "neg":
        return -a
    if b is None:
        raise ValueError(f"{kind!r} needs two operands")
    b = LaurentScalar.coerce(b)
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown operation {kind!r}")


def is_exact(x) -> bool:
    return isinstance(x, (LaurentScalar, int, Fraction)) and not isinstance(x, bool)


def evaluate_scalar(x, t0: float) -> float:
    """Map any exact scalar to a float at ``t = t0``; floats pass through."""
    if isinstance(x, LaurentScalar):
        return laurent_eval(x, t0)
    return float(x)


def scalar_pow(x, k: int):
    """``x**k`` for any scalar; exact inputs stay exact for negative ``k``."""
    if isinstance(x, LaurentScalar):
        return x ** k
    if is_exact(x):
        return Fraction(x) ** k
    return float(x) ** k


def parse_rational(text: str) -> Fraction:
    """Parse ``"a/b"``, ``"a"`` or a finite decimal string into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    x = Fraction(x)
    if x < 0:
        return None
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None
