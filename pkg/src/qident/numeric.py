"""Arbitrary-precision complex evaluation of sums and infinite products.

Backed by mpmath.  Values are carried as ``BigComplex`` (an mpc plus the
decimal working precision it was computed at); arithmetic between two values
runs at the smaller of the two precisions.  Infinite sums and products stop
via an explicit ``TailPolicy`` rather than any implicit heuristic.

mpmath's precision context is process-global, so numeric evaluation is
serialized behind a module lock; exact-backend work never touches it.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Union

import mpmath as mp

from .errors import DomainError, NoConvergence, Overflow
from .series import Monomial, Rational, rational

DEFAULT_DIGITS = 60
GUARD_TERMS = 10**6
_OVERFLOW_MAG = mp.mpf("1e50")

MP_LOCK = threading.RLock()

# Bernoulli numbers B_2, B_4, ..., B_18 (exact), for Euler-Maclaurin tails.
BERNOULLI_EVEN = (
    rational(1, 6),
    rational(-1, 30),
    rational(1, 42),
    rational(-1, 30),
    rational(5, 66),
    rational(-691, 2730),
    rational(7, 6),
    rational(-3617, 510),
    rational(43867, 798),
)


@dataclass(frozen=True)
class PiFrac:
    """(num/den)*pi, resolved to a float only at the working precision."""

    num: int
    den: int

    def __str__(self) -> str:
        if (self.num, self.den) == (1, 1):
            return "pi"
        if self.den == 1:
            return f"{self.num}*pi"
        if self.num == 1:
            return f"pi/{self.den}"
        return f"{self.num}*pi/{self.den}"


@dataclass(frozen=True)
class CNum:
    """An exact complex rational re + im*i, resolved at working precision."""

    re: Rational
    im: Rational

    def __post_init__(self):
        object.__setattr__(self, "re", rational(self.re))
        object.__setattr__(self, "im", rational(self.im))

    def __str__(self) -> str:
        return f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i"


NumericParam = Union[int, Rational, PiFrac, CNum, Monomial]


def _rat_to_mpf(r) -> mp.mpf:
    return mp.mpf(int(r.numerator)) / int(r.denominator)


def as_mpc(value) -> mp.mpc:
    """Resolve a parameter value to an mpc at the current working precision."""
    if isinstance(value, (mp.mpc, mp.mpf)):
        return mp.mpc(value)
    if isinstance(value, int):
        return mp.mpc(value)
    if isinstance(value, PiFrac):
        return mp.mpc(mp.pi * value.num / value.den)
    if isinstance(value, CNum):
        return mp.mpc(_rat_to_mpf(value.re), _rat_to_mpf(value.im))
    if isinstance(value, Monomial):
        raise TypeError("exact monomials carry a formal q and have no numeric value")
    if hasattr(value, "numerator"):
        return mp.mpc(_rat_to_mpf(value))
    raise TypeError(f"cannot convert {value!r} to a numeric parameter")


@dataclass(frozen=True)
class BigComplex:
    """An arbitrary-precision complex number tagged with its working precision."""

    value: mp.mpc
    digits: int

    @property
    def real(self) -> mp.mpf:
        return self.value.real

    @property
    def imaginary(self) -> mp.mpf:
        return self.value.imag

    @classmethod
    def make(cls, value, digits: int = DEFAULT_DIGITS) -> "BigComplex":
        with mp.workdps(digits):
            return cls(as_mpc(value), digits)

    def _binary(self, other, op) -> "BigComplex":
        if not isinstance(other, BigComplex):
            other = BigComplex.make(other, self.digits)
        digits = min(self.digits, other.digits)
        with mp.workdps(digits):
            return BigComplex(mp.mpc(op(self.value, other.value)), digits)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b)

    def __neg__(self):
        return BigComplex(-self.value, self.digits)

    def __abs__(self) -> mp.mpf:
        with mp.workdps(self.digits):
            return abs(self.value)

    def __str__(self) -> str:
        with mp.workdps(min(self.digits, 30)):
            return str(self.value)


@dataclass(frozen=True)
class TailPolicy:
    """Stopping rule for numeric tails.

    Summation may stop only after ``consecutive_required`` successive terms
    have magnitude below ``abs_floor`` while the empirical term ratio stays
    below ``ratio_cap``.
    """

    abs_floor: float
    consecutive_required: int = 3
    ratio_cap: float = 0.99

    def __post_init__(self):
        if not (0 < self.ratio_cap < 1):
            raise ValueError("ratio_cap must lie in (0,1)")


def default_policy(digits: int = DEFAULT_DIGITS) -> TailPolicy:
    """Floor 20 digits below the working precision (1e-40 at the 60-digit default)."""
    return TailPolicy(abs_floor=10.0 ** -(digits - 20))


class NSumResult(NamedTuple):
    value: BigComplex
    last_term_abs: float  # magnitude of the last included term; crude error proxy


class _TailWatch:
    __slots__ = ("policy", "streak", "prev_mag")

    def __init__(self, policy: TailPolicy):
        self.policy = policy
        self.streak = 0
        self.prev_mag = None

    def observe(self, mag) -> bool:
        """Feed one term magnitude; True once the policy allows stopping."""
        ratio_ok = self.prev_mag is not None and (
            self.prev_mag == 0 or mag / self.prev_mag < self.policy.ratio_cap
        )
        if mag < self.policy.abs_floor and (ratio_ok or mag == 0):
            self.streak += 1
        else:
            self.streak = 0
        self.prev_mag = mag
        return self.streak >= self.policy.consecutive_required


def nsum(
    term: Callable[[int], Union[BigComplex, mp.mpc, mp.mpf]],
    mode: str = "unilateral",
    policy: Optional[TailPolicy] = None,
    digits: int = DEFAULT_DIGITS,
) -> NSumResult:
    """Sum term(n) over n >= 0 (unilateral) or all integers (bilateral).

    Bilateral enumeration is 0, -1, +1, -2, +2, ... with each tail stopped
    independently by the policy.
    """
    policy = policy or default_policy(digits)

    def termval(n) -> mp.mpc:
        t = term(n)
        return t.value if isinstance(t, BigComplex) else mp.mpc(t)

    with MP_LOCK, mp.workdps(digits):
        total = mp.mpc(0)
        last = mp.mpf(0)
        budget = GUARD_TERMS
        directions = [1] if mode == "unilateral" else [1, -1]
        watches = {d: _TailWatch(policy) for d in directions}
        alive = set(directions)
        n_next = {1: 0, -1: -1}
        while alive:
            for d in list(alive):
                n = n_next[d]
                n_next[d] = n + d
                budget -= 1
                if budget < 0:
                    raise NoConvergence(f"no convergence within {GUARD_TERMS} terms")
                t = termval(n)
                mag = abs(t)
                if mag > _OVERFLOW_MAG:
                    raise Overflow(f"term magnitude {mag} at index {n}")
                total += t
                if mag > 0:
                    last = mag
                if abs(total) > _OVERFLOW_MAG:
                    raise Overflow("partial sum magnitude blew up")
                if watches[d].observe(mag):
                    alive.discard(d)
        return NSumResult(BigComplex(total, digits), float(last))


def nprod_qpoch(
    a,
    q,
    n: Optional[int] = None,
    policy: Optional[TailPolicy] = None,
    digits: int = DEFAULT_DIGITS,
) -> BigComplex:
    """(a;q)_n, or (a;q)_inf when n is None (requires |q| < 1).

    Negative integer n uses the standard convention
    (a;q)_{-t} = 1 / prod_{i=1..t} (1 - a q^{-i}).
    """
    policy = policy or default_policy(digits)
    with MP_LOCK, mp.workdps(digits):
        av, qv = as_mpc(a), as_mpc(q)
        out = mp.mpc(1)
        if n is not None:
            if n >= 0:
                for i in range(n):
                    out *= 1 - av * qv**i
            else:
                den = mp.mpc(1)
                for i in range(1, -n + 1):
                    den *= 1 - av * qv**-i
                out = 1 / den
            return BigComplex(out, digits)
        if abs(qv) >= 1:
            raise DomainError("infinite q-Pochhammer needs |q| < 1")
        fac = av
        streak = 0
        k = 0
        while streak < policy.consecutive_required:
            if k > GUARD_TERMS:
                raise NoConvergence("infinite product failed to meet its tail policy")
            out *= 1 - fac
            streak = streak + 1 if abs(fac) < policy.abs_floor else 0
            fac *= qv
            k += 1
        return BigComplex(out, digits)


def zeta2_constant(digits: int = DEFAULT_DIGITS) -> BigComplex:
    """pi^2/6 at the requested precision."""
    with MP_LOCK, mp.workdps(digits):
        return BigComplex(mp.mpc(mp.pi**2 / 6), digits)


def harmonic2_tail(K: int, digits: int = DEFAULT_DIGITS) -> mp.mpf:
    """sum_{j>K} 1/j^2 by Euler-Maclaurin with exact Bernoulli numbers.

    Error is of the order of B_20/K^21; K >= 120 leaves it far below a
    60-digit floor.
    """
    with mp.workdps(digits):
        Kf = mp.mpf(K)
        total = 1 / Kf - 1 / (2 * Kf**2)
        for m, b in enumerate(BERNOULLI_EVEN, start=1):
            total += _rat_to_mpf(b) / Kf ** (2 * m + 1)
        return total


class PochTable:
    """Incrementally extended table of (x;q)_n values for reuse inside builders.

    Bound to the precision active at construction; use within one
    ``mp.workdps`` block.
    """

    def __init__(self, q: mp.mpc):
        self.q = q
        self._rows = {}

    def get(self, x, n: int) -> mp.mpc:
        x = as_mpc(x)
        key = (x.real, x.imag)
        row = self._rows.get(key)
        if row is None:
            row = [mp.mpc(1)]
            self._rows[key] = row
        while len(row) <= n:
            i = len(row) - 1
            row.append(row[-1] * (1 - x * self.q**i))
        return row[n]

    def inf(self, x, policy: TailPolicy) -> mp.mpc:
        x = as_mpc(x)
        out = mp.mpc(1)
        fac = x
        streak = 0
        guard = GUARD_TERMS
        while streak < policy.consecutive_required:
            guard -= 1
            if guard < 0:
                raise NoConvergence("infinite product failed to meet its tail policy")
            out *= 1 - fac
            streak = streak + 1 if abs(fac) < policy.abs_floor else 0
            fac *= self.q
        return out
