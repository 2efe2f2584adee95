"""Exact arithmetic on binary forms, affine polynomials and Laurent series in z.

Rationals are :class:`fractions.Fraction`, which already keeps a positive,
reduced denominator and represents zero as ``0/1``.

A :class:`BinaryForm` of degree ``d`` stores ``coeffs[k]`` as the coefficient
of ``X**k * Y**(d - k)``.  The single degree-less :data:`ZERO` value stands in
for zero in every degree.  Setting ``Y = 1`` turns a form into a :class:`Poly`
in ``x = X/Y`` whose ``k``-th coefficient is the same ``coeffs[k]``.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

from .errors import DegreeMismatch, InexactDivision

__all__ = [
    "Fraction",
    "Poly",
    "BinaryForm",
    "ZERO",
    "X",
    "Y",
    "LaurentZ",
    "as_fraction",
    "form_arith",
    "laurent_arith",
]


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip().replace("−", "-"))
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def _trim(coeffs: Iterable) -> tuple[Fraction, ...]:
    out = [as_fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


class Poly:
    """Univariate polynomial over Q in the affine coordinate ``x``.

    Coefficients are stored low degree first; the zero polynomial has no
    coefficients and degree ``-1``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1]

    def coeff(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _trim((other,))
        return NotImplemented

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(terms).replace("+ -", "- ")

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quot = [Fraction(0)] * (dq + 1)
        lead = other.lead
        for k in range(dq, -1, -1):
            c = rem[k + len(other.coeffs) - 1] / lead
            quot[k] = c
            if c:
                for i, b in enumerate(other.coeffs):
                    rem[k + i] -= c * b
        return Poly(quot), Poly(rem)

    def __floordiv__(self, other):
        return self.divmod(_as_poly(other))[0]

    def __mod__(self, other):
        return self.divmod(_as_poly(other))[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if r:
            raise InexactDivision(f"{other} does not divide {self}")
        return q

    def monic(self) -> "Poly":
        if not self:
            return self
        return Poly(c / self.lead for c in self.coeffs)

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic()

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def homogenize(self, degree: int) -> "BinaryForm":
        if not self:
            return ZERO
        if self.degree > degree:
            raise DegreeMismatch(f"cannot homogenize {self} to degree {degree}")
        return BinaryForm(list(self.coeffs) + [0] * (degree - self.degree))


def _as_poly(value):
    if isinstance(value, Poly):
        return value
    if isinstance(value, (int, Fraction)):
        return Poly((value,))
    return None


class BinaryForm:
    """Homogeneous polynomial in X, Y with rational coefficients.

    >>> (X * Y).coeffs == (0, 1, 0)
    True
    """

    __slots__ = ("degree", "coeffs")

    def __init__(self, coeffs: Iterable = (), degree: int | None = None):
        cs = tuple(as_fraction(c) for c in coeffs)
        if degree is not None and cs and len(cs) != degree + 1:
            raise DegreeMismatch(f"{len(cs)} coefficients for a form of degree {degree}")
        if not any(cs):
            cs, deg = (), None
        else:
            deg = len(cs) - 1
        object.__setattr__(self, "coeffs", cs)
        object.__setattr__(self, "degree", deg)

    def __setattr__(self, name, value):
        raise AttributeError("BinaryForm is immutable")

    @classmethod
    def const(cls, c) -> "BinaryForm":
        return cls((c,))

    @classmethod
    def monomial(cls, x_power: int, y_power: int, c=1) -> "BinaryForm":
        cs = [0] * (x_power + y_power + 1)
        cs[x_power] = c
        return cls(cs)

    def is_zero(self) -> bool:
        return self.degree is None

    def __bool__(self):
        return self.degree is not None

    def __eq__(self, other):
        if isinstance(other, BinaryForm):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)) and other == 0:
            return self.degree is None
        return NotImplemented

    def __hash__(self):
        return hash(("BinaryForm", self.coeffs))

    def __repr__(self):
        if self.degree is None:
            return "ZERO"
        return f"BinaryForm({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if self.degree is None:
            return "0"
        d = self.degree
        terms = []
        for k in range(d, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            parts = []
            if k:
                parts.append("X" if k == 1 else f"X^{k}")
            if d - k:
                parts.append("Y" if d - k == 1 else f"Y^{d - k}")
            mono = "*".join(parts)
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(terms).replace("+ -", "- ")

    def __neg__(self):
        return BinaryForm(-c for c in self.coeffs)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return self
        if not isinstance(other, BinaryForm):
            return NotImplemented
        if self.degree is None:
            return other
        if other.degree is None:
            return self
        if self.degree != other.degree:
            raise DegreeMismatch(f"cannot add forms of degree {self.degree} and {other.degree}")
        return BinaryForm(a + b for a, b in zip(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (BinaryForm, int, Fraction)):
            return NotImplemented
        return self + (-other if isinstance(other, BinaryForm) else -as_fraction(other))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return ZERO
            return BinaryForm(c * other for c in self.coeffs)
        if not isinstance(other, BinaryForm):
            return NotImplemented
        if self.degree is None or other.degree is None:
            return ZERO
        n = self.degree + other.degree + 1
        if all(c.denominator == 1 for c in self.coeffs + other.coeffs):
            # integer convolution, much cheaper than Fraction arithmetic
            acc = [0] * n
            bs = [b.numerator for b in other.coeffs]
            for i, a in enumerate(self.coeffs):
                a = a.numerator
                if a:
                    for j, b in enumerate(bs):
                        acc[i + j] += a * b
            return BinaryForm(acc)
        out = [Fraction(0)] * n
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return BinaryForm(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        acc = BinaryForm.const(1)
        for _ in range(n):
            acc = acc * self
        return acc

    def __call__(self, x, y=1):
        """Evaluate at the point (x, y)."""
        if self.degree is None:
            return Fraction(0)
        x, y = as_fraction(x), as_fraction(y)
        return sum(
            (c * x**k * y ** (self.degree - k) for k, c in enumerate(self.coeffs) if c),
            Fraction(0),
        )

    def coeff(self, k: int) -> Fraction:
        if self.degree is None or not 0 <= k <= self.degree:
            return Fraction(0)
        return self.coeffs[k]

    def dehomogenize(self) -> Poly:
        """Restrict to the affine chart Y = 1."""
        return Poly(self.coeffs)

    def y_valuation(self) -> int:
        """Exponent of the largest power of Y dividing the form."""
        top = max(k for k, c in enumerate(self.coeffs) if c)
        return self.degree - top

    def exact_div(self, other: "BinaryForm") -> "BinaryForm":
        if other.degree is None:
            raise ZeroDivisionError("division by the zero form")
        if self.degree is None:
            return ZERO
        qdeg = self.degree - other.degree
        if qdeg < 0:
            raise InexactDivision(f"{other} does not divide {self}")
        q, r = self.dehomogenize().divmod(other.dehomogenize())
        if r or q.degree > qdeg:
            raise InexactDivision(f"{other} does not divide {self}")
        return q.homogenize(qdeg)

    def gcd(self, other: "BinaryForm") -> "BinaryForm":
        """Greatest common divisor, normalized so the top X-power coefficient is 1."""
        if self.degree is None and other.degree is None:
            return ZERO
        if self.degree is None:
            return other.normalized()
        if other.degree is None:
            return self.normalized()
        vy = min(self.y_valuation(), other.y_valuation())
        g = self.dehomogenize().gcd(other.dehomogenize())
        return g.homogenize(g.degree) * BinaryForm.monomial(0, vy)

    def normalized(self) -> "BinaryForm":
        if self.degree is None:
            return self
        top = max(k for k, c in enumerate(self.coeffs) if c)
        return self * (1 / self.coeffs[top])


ZERO = BinaryForm()
X = BinaryForm((0, 1))
Y = BinaryForm((1, 0))


def form_arith(a: BinaryForm, b: BinaryForm, op: str) -> BinaryForm:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "exact_div":
        return a.exact_div(b)
    if op == "gcd":
        return a.gcd(b)
    raise ValueError(f"unknown form operation {op!r}")


def _is_zero(c) -> bool:
    return not c


class LaurentZ:
    """Finite Laurent polynomial in the flow parameter z.

    Coefficients may be any exact ring element (``Fraction``, ``Poly`` or
    ``BinaryForm``); zero terms are never stored.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, object] | None = None):
        clean = {int(e): c for e, c in (terms or {}).items() if not _is_zero(c)}
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    def __setattr__(self, name, value):
        raise AttributeError("LaurentZ is immutable")

    @classmethod
    def monomial(cls, exponent: int, coeff=Fraction(1)) -> "LaurentZ":
        return cls({exponent: coeff})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, LaurentZ):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "LaurentZ(0)"
        inner = " + ".join(f"z^{e}*({c})" for e, c in self.terms.items())
        return f"LaurentZ({inner})"

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(self.terms)

    def coeff(self, exponent: int, default=None):
        return self.terms.get(exponent, default)

    def __add__(self, other):
        if not isinstance(other, LaurentZ):
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return LaurentZ(out)

    def __neg__(self):
        return LaurentZ({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentZ):
            return LaurentZ({e: c * other for e, c in self.terms.items()})
        out: dict[int, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e, c = e1 + e2, c1 * c2
                out[e] = out[e] + c if e in out else c
        return LaurentZ(out)

    def __rmul__(self, other):
        return LaurentZ({e: other * c for e, c in self.terms.items()})


def laurent_arith(a: LaurentZ, b: LaurentZ, op: str) -> LaurentZ:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown Laurent operation {op!r}")
