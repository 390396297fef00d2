"""Exact arithmetic for truncated power series in q over the rationals.

A ``QSeries`` of truncation order N stores the coefficients of q^0..q^N and
represents its value modulo q^{N+1}; all arithmetic is exact, with no epsilon
anywhere.  ``ZLaurentSeries`` extends this with a second, Laurent-polynomial
variable z confined to a declared exponent window (theta-series work).
``Monomial`` is the exact parameter form r*q^m used to instantiate the free
parameters of the cataloged identities.

Rational coefficients are ``gmpy2.mpq`` when gmpy2 is installed (several times
faster) and ``fractions.Fraction`` otherwise; both are exact, normalized, and
share the surface this module uses.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

from .errors import WindowOverflow, ZeroConstantTerm

try:
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover
    from fractions import Fraction as Rational

RationalLike = Union[Rational, int, str]

_ZERO = Rational(0)
_ONE = Rational(1)


def rational(value: RationalLike, den: Optional[int] = None) -> Rational:
    """Coerce ``value`` (int, 'p/q' string, Rational) to an exact Rational."""
    if den is not None:
        return Rational(value, den)
    return Rational(value)


@dataclass(frozen=True)
class Monomial:
    """Exact parameter r*q^m with rational r.

    m may be any integer while a value is being combined algebraically
    (quotients like c/(a*b) arise constantly); constructors that expand
    Pochhammer symbols require m >= 0, and r=0 represents the parameter 0.
    """

    r: Rational
    m: int = 0

    def __post_init__(self):
        object.__setattr__(self, "r", rational(self.r))
        if self.r == 0:
            object.__setattr__(self, "m", 0)

    @property
    def is_zero(self) -> bool:
        return self.r == 0

    @property
    def is_one(self) -> bool:
        return self.r == 1 and self.m == 0

    def valuation(self) -> Optional[int]:
        return None if self.is_zero else self.m

    def times(self, other: "Monomial") -> "Monomial":
        return Monomial(self.r * other.r, self.m + other.m)

    def over(self, other: "Monomial") -> "Monomial":
        if other.is_zero:
            raise ZeroDivisionError("division by zero monomial")
        return Monomial(self.r / other.r, self.m - other.m)

    def power(self, e: int) -> "Monomial":
        if e == 0:
            return Monomial(_ONE, 0)
        if self.is_zero:
            if e < 0:
                raise ZeroDivisionError("negative power of zero monomial")
            return self
        return Monomial(self.r**e, self.m * e)

    def as_series(self, order: int) -> "QSeries":
        if self.m < 0:
            raise ValueError(f"monomial {self} has a negative q-power")
        return QSeries.monomial(self.r, self.m, order)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        if self.m == 0:
            return str(self.r)
        qpart = "q" if self.m == 1 else f"q^{self.m}"
        if self.r == 1:
            return qpart
        if self.r == -1:
            return f"-{qpart}"
        return f"{self.r}*{qpart}"


def mono(r: RationalLike, m: int = 0) -> Monomial:
    return Monomial(rational(r), m)


def parse_monomial(text: str) -> Monomial:
    """Parse 'r', 'q', 'q^m', 'r*q^m' (r a rational literal like -2/3)."""
    text = text.strip().replace(" ", "")
    if "*" in text:
        rpart, qpart = text.split("*", 1)
    elif text.startswith("q") or text.startswith("-q"):
        rpart, qpart = ("-1", text[1:]) if text.startswith("-") else ("1", text)
    else:
        rpart, qpart = text, ""
    r = rational(rpart)
    if not qpart:
        return Monomial(r, 0)
    if qpart == "q":
        return Monomial(r, 1)
    if not qpart.startswith("q^"):
        raise ValueError(f"cannot parse monomial {text!r}")
    return Monomial(r, int(qpart[2:]))


class QSeries:
    """Truncated formal power series in q with exact rational coefficients.

    The series is known modulo q^{order+1}; ``coeffs`` has length order+1.
    Values are immutable and safe to share between threads.  Equality
    compares coefficientwise up to the smaller of the two orders.
    """

    __slots__ = ("order", "coeffs")
    __hash__ = None  # equality is order-sensitive; not a dict key

    def __init__(self, order: int, coeffs):
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        coeffs = tuple(coeffs)
        if len(coeffs) != order + 1:
            raise ValueError(f"need {order + 1} coefficients, got {len(coeffs)}")
        self.order = order
        self.coeffs = coeffs

    def __setattr__(self, name, value):
        if hasattr(self, "coeffs"):
            raise AttributeError("QSeries is immutable")
        super().__setattr__(name, value)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "QSeries":
        return cls(order, [_ZERO] * (order + 1))

    @classmethod
    def one(cls, order: int) -> "QSeries":
        c = [_ZERO] * (order + 1)
        c[0] = _ONE
        return cls(order, c)

    @classmethod
    def monomial(cls, r: RationalLike, e: int, order: int) -> "QSeries":
        """r*q^e truncated at ``order`` (the zero series if e > order)."""
        if e < 0:
            raise ValueError("monomial exponent must be >= 0")
        c = [_ZERO] * (order + 1)
        if e <= order:
            c[e] = rational(r)
        return cls(order, c)

    @classmethod
    def from_coeffs(cls, coeffs, order: Optional[int] = None) -> "QSeries":
        coeffs = [rational(c) for c in coeffs]
        if order is None:
            order = len(coeffs) - 1
        coeffs += [_ZERO] * (order + 1 - len(coeffs))
        return cls(order, coeffs[: order + 1])

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "QSeries") -> "QSeries":
        n = min(self.order, other.order)
        return QSeries(n, [self.coeffs[i] + other.coeffs[i] for i in range(n + 1)])

    def __sub__(self, other: "QSeries") -> "QSeries":
        n = min(self.order, other.order)
        return QSeries(n, [self.coeffs[i] - other.coeffs[i] for i in range(n + 1)])

    def __neg__(self) -> "QSeries":
        return QSeries(self.order, [-c for c in self.coeffs])

    def __mul__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            return self.scale(other)
        n = min(self.order, other.order)
        out = [_ZERO] * (n + 1)
        oc = other.coeffs
        for i, a in enumerate(self.coeffs[: n + 1]):
            if a:
                for j in range(n + 1 - i):
                    b = oc[j]
                    if b:
                        out[i + j] += a * b
        return QSeries(n, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QSeries":
        if e < 0:
            return self.invert() ** (-e)
        out = QSeries.one(self.order)
        for _ in range(e):
            out = out * self
        return out

    def scale(self, r: RationalLike) -> "QSeries":
        r = rational(r)
        return QSeries(self.order, [r * c for c in self.coeffs])

    def shift(self, e: int) -> "QSeries":
        """Multiply by q^e (e >= 0), staying at the same truncation order."""
        if e < 0:
            raise ValueError("shift exponent must be >= 0")
        if e == 0:
            return self
        n = self.order
        return QSeries(n, [_ZERO] * min(e, n + 1) + list(self.coeffs[: n + 1 - e]))

    def invert(self) -> "QSeries":
        """Multiplicative inverse modulo q^{order+1}."""
        if self.coeffs[0] == 0:
            raise ZeroConstantTerm("cannot invert a series with zero constant term")
        n = self.order
        c0inv = _ONE / self.coeffs[0]
        out = [_ZERO] * (n + 1)
        out[0] = c0inv
        sc = self.coeffs
        for e in range(1, n + 1):
            acc = _ZERO
            for i in range(1, e + 1):
                if sc[i] and out[e - i]:
                    acc += sc[i] * out[e - i]
            if acc:
                out[e] = -acc * c0inv
        return QSeries(n, out)

    # -- inspection --------------------------------------------------------

    def coeff(self, e: int) -> Rational:
        if e > self.order:
            raise IndexError(f"coefficient of q^{e} unknown at order {self.order}")
        return self.coeffs[e]

    def truncate(self, order: int) -> "QSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return QSeries(order, self.coeffs[: order + 1])

    def valuation(self) -> Optional[int]:
        """Lowest exponent with nonzero coefficient, or None for the zero series."""
        for e, c in enumerate(self.coeffs):
            if c:
                return e
        return None

    @property
    def is_zero(self) -> bool:
        return self.valuation() is None

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return self.coeffs[: n + 1] == other.coeffs[: n + 1]

    def first_difference(self, other: "QSeries"):
        """(exponent, mine, theirs) of the first coefficient mismatch, else None."""
        n = min(self.order, other.order)
        for e in range(n + 1):
            if self.coeffs[e] != other.coeffs[e]:
                return e, self.coeffs[e], other.coeffs[e]
        return None

    def __repr__(self) -> str:
        terms = []
        for e, c in enumerate(self.coeffs):
            if not c:
                continue
            if len(terms) == 6:
                terms.append("...")
                break
            mag = str(abs(c)) if (abs(c) != 1 or e == 0) else ""
            q = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
            body = (mag + ("*" if mag and q else "") + q) or "1"
            terms.append(("- " if c < 0 else "+ ") + body if terms else ("-" if c < 0 else "") + body)
        head = " ".join(terms) if terms else "0"
        return f"<{head} + O(q^{self.order + 1})>"


# -- q-Pochhammer constructors ---------------------------------------------


@lru_cache(maxsize=None)
def _qpoch_cached(r_str: str, m: int, n, order: int, base: int) -> QSeries:
    r = rational(r_str)
    out = QSeries.one(order)
    if r == 0:
        return out
    if n is None:  # infinite product: factors beyond q^order are invisible
        exps = range(m, order + 1, base)
    else:
        exps = [m + base * i for i in range(n)]
    for e in exps:
        # multiply by (1 - r*q^e) in place: O(order) per factor
        c = list(out.coeffs)
        if e == 0:
            out = out.scale(1 - r)
            continue
        for i in range(order, e - 1, -1):
            if c[i - e]:
                c[i] -= r * c[i - e]
        out = QSeries(order, c)
    return out


@lru_cache(maxsize=None)
def _qpoch_inv_cached(r_str: str, m: int, n, order: int, base: int) -> QSeries:
    return _qpoch_cached(r_str, m, n, order, base).invert()


def qpoch_finite(a: Monomial, n: int, order: int, base: int = 1) -> QSeries:
    """(a; q^base)_n = prod_{i=0}^{n-1} (1 - a q^{base*i}), truncated."""
    if n < 0:
        raise ValueError("qpoch_finite needs n >= 0")
    if a.m < 0 and not a.is_zero:
        raise ValueError(f"parameter {a} has a negative q-power")
    return _qpoch_cached(str(a.r), a.m, n, order, base)


def qpoch_infinite(a: Monomial, order: int, base: int = 1) -> QSeries:
    """(a; q^base)_inf truncated at ``order``; only factors with exponent <= order matter."""
    if a.m < 0 and not a.is_zero:
        raise ValueError(f"parameter {a} has a negative q-power")
    return _qpoch_cached(str(a.r), a.m, None, order, base)


def qpoch_finite_inv(a: Monomial, n: int, order: int, base: int = 1) -> QSeries:
    """Cached invert(qpoch_finite(...)); the factor must have nonzero constant term."""
    if a.m < 0 and not a.is_zero:
        raise ValueError(f"parameter {a} has a negative q-power")
    return _qpoch_inv_cached(str(a.r), a.m, n, order, base)


def qpoch_infinite_inv(a: Monomial, order: int, base: int = 1) -> QSeries:
    if a.m < 0 and not a.is_zero:
        raise ValueError(f"parameter {a} has a negative q-power")
    return _qpoch_inv_cached(str(a.r), a.m, None, order, base)


# -- Laurent extension -------------------------------------------------------


class ZLaurentSeries:
    """q-truncated series whose coefficients are Laurent polynomials in z.

    The z-support is confined to the declared window [lo, hi] (lo <= 0 <= hi);
    any operation that would place a *nonzero* coefficient outside the window
    raises WindowOverflow rather than dropping it.  rows[e][j] holds the
    coefficient of q^e z^{lo+j}.
    """

    __slots__ = ("order", "window", "rows")
    __hash__ = None

    def __init__(self, order: int, window: tuple, rows):
        lo, hi = window
        if not (lo <= 0 <= hi):
            raise ValueError("z-window must contain 0")
        rows = tuple(tuple(row) for row in rows)
        if len(rows) != order + 1 or any(len(r) != hi - lo + 1 for r in rows):
            raise ValueError("row shape does not match order/window")
        self.order = order
        self.window = (lo, hi)
        self.rows = rows

    @classmethod
    def zero(cls, order: int, window: tuple) -> "ZLaurentSeries":
        lo, hi = window
        return cls(order, window, [[_ZERO] * (hi - lo + 1) for _ in range(order + 1)])

    @classmethod
    def monomial(cls, r: RationalLike, qe: int, ze: int, order: int, window: tuple) -> "ZLaurentSeries":
        lo, hi = window
        out = [[_ZERO] * (hi - lo + 1) for _ in range(order + 1)]
        r = rational(r)
        if r and qe <= order:
            if not lo <= ze <= hi:
                raise WindowOverflow(f"z^{ze} outside window {window}")
            out[qe][ze - lo] = r
        return cls(order, window, out)

    @classmethod
    def from_qseries(cls, f: QSeries, window: tuple) -> "ZLaurentSeries":
        lo, hi = window
        width = hi - lo + 1
        rows = []
        for c in f.coeffs:
            row = [_ZERO] * width
            row[-lo] = c
            rows.append(row)
        return cls(f.order, window, rows)

    def _require_same_window(self, other: "ZLaurentSeries"):
        if self.window != other.window:
            raise WindowOverflow(f"window mismatch: {self.window} vs {other.window}")

    def __add__(self, other: "ZLaurentSeries") -> "ZLaurentSeries":
        self._require_same_window(other)
        n = min(self.order, other.order)
        rows = [
            [a + b for a, b in zip(self.rows[e], other.rows[e])]
            for e in range(n + 1)
        ]
        return ZLaurentSeries(n, self.window, rows)

    def __neg__(self) -> "ZLaurentSeries":
        return ZLaurentSeries(self.order, self.window, [[-c for c in row] for row in self.rows])

    def __sub__(self, other: "ZLaurentSeries") -> "ZLaurentSeries":
        return self + (-other)

    def scale(self, r: RationalLike) -> "ZLaurentSeries":
        r = rational(r)
        return ZLaurentSeries(self.order, self.window, [[r * c for c in row] for row in self.rows])

    def __mul__(self, other) -> "ZLaurentSeries":
        if not isinstance(other, ZLaurentSeries):
            return self.scale(other)
        self._require_same_window(other)
        lo, hi = self.window
        width = hi - lo + 1
        n = min(self.order, other.order)
        out = [[_ZERO] * width for _ in range(n + 1)]
        for e1 in range(n + 1):
            row1 = self.rows[e1]
            for j1 in range(width):
                a = row1[j1]
                if not a:
                    continue
                z1 = lo + j1
                for e2 in range(n + 1 - e1):
                    row2 = other.rows[e2]
                    for j2 in range(width):
                        b = row2[j2]
                        if not b:
                            continue
                        z = z1 + lo + j2
                        if not lo <= z <= hi:
                            raise WindowOverflow(
                                f"product writes z^{z} outside window {self.window}"
                            )
                        out[e1 + e2][z - lo] += a * b
        return ZLaurentSeries(n, self.window, out)

    __rmul__ = __mul__

    def z_shift(self, steps: int) -> "ZLaurentSeries":
        """Multiply by z^steps."""
        lo, hi = self.window
        width = hi - lo + 1
        out = [[_ZERO] * width for _ in range(self.order + 1)]
        for e, row in enumerate(self.rows):
            for j, c in enumerate(row):
                if not c:
                    continue
                z = lo + j + steps
                if not lo <= z <= hi:
                    raise WindowOverflow(f"z-shift writes z^{z} outside window {self.window}")
                out[e][z - lo] = c
        return ZLaurentSeries(self.order, self.window, out)

    def z_coeff(self, ze: int) -> QSeries:
        """Extract the coefficient of z^ze as a QSeries."""
        lo, hi = self.window
        if not lo <= ze <= hi:
            return QSeries.zero(self.order)
        return QSeries(self.order, [row[ze - lo] for row in self.rows])

    def valuation(self) -> Optional[int]:
        for e, row in enumerate(self.rows):
            if any(row):
                return e
        return None

    @property
    def is_zero(self) -> bool:
        return self.valuation() is None

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZLaurentSeries):
            return NotImplemented
        n = min(self.order, other.order)
        lo = min(self.window[0], other.window[0])
        hi = max(self.window[1], other.window[1])
        for e in range(n + 1):
            for z in range(lo, hi + 1):
                if self._at(e, z) != other._at(e, z):
                    return False
        return True

    def _at(self, e: int, z: int) -> Rational:
        lo, hi = self.window
        if lo <= z <= hi:
            return self.rows[e][z - lo]
        return _ZERO

    def first_difference(self, other: "ZLaurentSeries"):
        n = min(self.order, other.order)
        lo = min(self.window[0], other.window[0])
        hi = max(self.window[1], other.window[1])
        for e in range(n + 1):
            for z in range(lo, hi + 1):
                if self._at(e, z) != other._at(e, z):
                    return (e, z, self._at(e, z), other._at(e, z))
        return None

    def __repr__(self) -> str:
        nz = sum(1 for row in self.rows for c in row if c)
        return f"<ZLaurentSeries order={self.order} window={self.window} nonzero={nz}>"


def zpoch_infinite(r: RationalLike, qe: int, ze: int, order: int, window: tuple, base: int = 1) -> ZLaurentSeries:
    """(r*q^qe*z^ze ; q^base)_inf as a ZLaurentSeries on ``window``.

    Requires qe >= 1 so successive factors carry strictly growing q-powers
    (each factor's z-shift is then invisible beyond the window only when its
    q-power already exceeds the truncation order).
    """
    if qe < 1:
        raise ValueError("zpoch_infinite needs the q-exponent of the argument >= 1")
    out = ZLaurentSeries.from_qseries(QSeries.one(order), window)
    r = rational(r)
    e = qe
    while e <= order:
        out = out - _shift_term(out, r, e, ze, window)
        e += base
    return out


def _shift_term(f: ZLaurentSeries, r, qe: int, ze: int, window: tuple) -> ZLaurentSeries:
    """r * q^qe * z^ze * f; rows pushed past the truncation order vanish,
    z-exponents pushed outside the window are an error."""
    lo, hi = window
    width = hi - lo + 1
    out = [[_ZERO] * width for _ in range(f.order + 1)]
    for e, row in enumerate(f.rows):
        if e + qe > f.order:
            break
        for j, c in enumerate(row):
            if not c:
                continue
            z = lo + j + ze
            if not lo <= z <= hi:
                raise WindowOverflow(f"product writes z^{z} outside window {window}")
            out[e + qe][z - lo] += r * c
    return ZLaurentSeries(f.order, window, out)
