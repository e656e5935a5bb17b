"""Exact Laurent polynomials in one variable over the rationals.

The symbolic verification backend writes every unnormalized weight as a
Laurent polynomial in x = exp(lambda/2).  With this choice all parameters of
the coupled random-cluster / six-vertex family become polynomial:

    sqrt(q) = x^2 + x^-2          q   = (x^2 + x^-2)^2
    q_b     = x^(+-4) + 1         c   = x + x^-1

and every orientation or split factor is a monomial.  Equality of measures is
then decided exactly by cross-multiplied coefficient comparison; division
never occurs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class LaurentWeight:
    """Laurent polynomial ``sum_e c_e x^e`` with exact ``Fraction`` coefficients.

    Instances are immutable in practice: all operations return new objects.
    Zero coefficients are never stored, so the zero test and equality are
    exact structural checks.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs=None):
        data = {}
        if coeffs:
            for e, c in coeffs.items():
                c = Fraction(c)
                if c != 0:
                    data[int(e)] = c
        self._coeffs = data

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({0: 1})

    @classmethod
    def monomial(cls, exponent, coeff=1):
        return cls({exponent: coeff})

    @classmethod
    def _coerce(cls, other):
        if isinstance(other, LaurentWeight):
            return other
        if isinstance(other, (int, Fraction)):
            return cls({0: other})
        return None

    @property
    def coefficients(self):
        """Mapping exponent -> coefficient (a copy)."""
        return dict(self._coeffs)

    def coefficient(self, exponent):
        return self._coeffs.get(exponent, Fraction(0))

    def is_zero(self):
        return not self._coeffs

    def __bool__(self):
        return bool(self._coeffs)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        data = dict(self._coeffs)
        for e, c in other._coeffs.items():
            s = data.get(e, Fraction(0)) + c
            if s:
                data[e] = s
            else:
                data.pop(e, None)
        out = LaurentWeight()
        out._coeffs = data
        return out

    __radd__ = __add__

    def __neg__(self):
        out = LaurentWeight()
        out._coeffs = {e: -c for e, c in self._coeffs.items()}
        return out

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        data = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                e = e1 + e2
                s = data.get(e, Fraction(0)) + c1 * c2
                if s:
                    data[e] = s
                else:
                    data.pop(e, None)
        out = LaurentWeight()
        out._coeffs = data
        return out

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = LaurentWeight.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._coeffs == other._coeffs

    __hash__ = None

    def substitute_inverse(self):
        """Return the polynomial with x replaced by 1/x (exponents negated)."""
        out = LaurentWeight()
        out._coeffs = {-e: c for e, c in self._coeffs.items()}
        return out

    def evaluate(self, x):
        """Evaluate at a numeric point; exact when ``x`` is a Fraction."""
        if isinstance(x, Fraction):
            total = Fraction(0)
        else:
            total = 0.0
        for e, c in self._coeffs.items():
            if isinstance(x, Fraction):
                total += c * x ** e
            else:
                total += float(c) * x ** e
        return total

    def key(self):
        """Hashable canonical form, suitable for dict keys in tests."""
        return tuple(sorted(self._coeffs.items()))

    def __str__(self):
        if not self._coeffs:
            return "0"
        terms = []
        for e in sorted(self._coeffs):
            c = self._coeffs[e]
            if e == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(f"x^{e}")
            else:
                terms.append(f"{c}*x^{e}")
        return " + ".join(terms)

    def __repr__(self):
        return f"LaurentWeight({self})"


@dataclass(frozen=True)
class SymbolicCoupling:
    """The coupled model parameters in the x = exp(lambda/2) backend.

    ``sign=+1`` is the family with boundary weight exp(+lambda) sqrt(q);
    ``sign=-1`` is its mirror under x -> 1/x.  All weights produced through
    this object are Laurent polynomials.
    """

    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    is_symbolic = True

    @property
    def sqrt_q(self):
        return LaurentWeight({2: 1, -2: 1})

    @property
    def q(self):
        return self.sqrt_q * self.sqrt_q

    @property
    def q_b(self):
        # exp(sign*lambda) * sqrt(q) = x^(2*sign) * (x^2 + x^-2)
        return LaurentWeight({4 * self.sign: 1, 0: 1})

    @property
    def c(self):
        return LaurentWeight({1: 1, -1: 1})

    def orientation_weight(self, delta_n):
        """Monomial exp(lambda * delta_n) for a net loop-orientation count."""
        return LaurentWeight.monomial(2 * self.sign * delta_n)

    def split_weight(self, delta_split):
        """Monomial exp(lambda/2 * delta_split) for a net split-choice count."""
        return LaurentWeight.monomial(self.sign * delta_split)

    def negated(self):
        return SymbolicCoupling(sign=-self.sign)
