"""Exact evaluation of unilateral, bilateral, and nested ordered multi-sums.

Infinite index ranges terminate because every term carries a declared lower
bound on its q-valuation; enumeration stops once the bound exceeds the
requested truncation order.  Declared bounds are trusted for loop control and
distrusted for correctness: the first terms of every sum are spot-checked
against their actual valuation (PruningUnsound), a global guard count caps
enumeration (NoTermination), and the test suite replays every cataloged
multi-sum against a naive boxed enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Union

from .errors import NoTermination, PruningUnsound
from .series import QSeries, ZLaurentSeries

Series = Union[QSeries, ZLaurentSeries]

GUARD_COUNT = 10**6
SPOT_CHECKS = 20
_MISS_STREAK = 2  # consecutive bound misses before a direction is declared exhausted


@dataclass(frozen=True)
class TermGenerator:
    """A series-valued sequence with a q-valuation lower bound.

    ``valuation_bound(n)`` must never exceed the actual valuation of
    ``term(n)`` and must grow beyond any order eventually (monotonically,
    past some index) in each direction that is summed over.  ``support_hint``
    restricts enumeration to a finite index set.
    """

    term: Callable[[int], Series]
    valuation_bound: Callable[[int], int]
    support_hint: Optional[frozenset] = None


class _Guard:
    __slots__ = ("left",)

    def __init__(self, budget: int = GUARD_COUNT):
        self.left = budget

    def tick(self, what: str):
        self.left -= 1
        if self.left < 0:
            raise NoTermination(f"guard count exceeded while enumerating {what}")


def _spot_check(actual: Optional[int], declared: int, where: str):
    if actual is not None and actual < declared:
        raise PruningUnsound(
            f"{where}: term valuation {actual} undercuts declared bound {declared}"
        )


def _accumulate(acc: Optional[Series], term: Series) -> Series:
    return term if acc is None else acc + term


def sum_unilateral(gen: TermGenerator, order: int) -> Series:
    """Sum of gen.term(n) over n >= 0, exact modulo q^{order+1}."""
    if gen.support_hint is not None:
        acc = None
        for n in sorted(gen.support_hint):
            acc = _accumulate(acc, gen.term(n))
        return acc if acc is not None else QSeries.zero(order)
    acc = None
    guard = _Guard()
    checks = SPOT_CHECKS
    misses = 0
    n = 0
    while misses < _MISS_STREAK:
        guard.tick("unilateral sum")
        bound = gen.valuation_bound(n)
        if bound > order:
            misses += 1
            n += 1
            continue
        misses = 0
        t = gen.term(n)
        if checks > 0:
            checks -= 1
            _spot_check(t.valuation(), bound, f"unilateral index {n}")
        acc = _accumulate(acc, t)
        n += 1
    return acc if acc is not None else QSeries.zero(order)


def sum_bilateral(gen: TermGenerator, order: int) -> Series:
    """Sum over all integers, enumerated 0, -1, +1, -2, +2, ..."""
    if gen.support_hint is not None:
        acc = None
        for n in sorted(gen.support_hint):
            acc = _accumulate(acc, gen.term(n))
        return acc if acc is not None else QSeries.zero(order)
    acc = None
    guard = _Guard()
    checks = SPOT_CHECKS

    def handle(n, acc):
        nonlocal checks
        t = gen.term(n)
        if checks > 0:
            checks -= 1
            _spot_check(t.valuation(), gen.valuation_bound(n), f"bilateral index {n}")
        return _accumulate(acc, t)

    misses_neg = misses_pos = 0
    step = 0
    while misses_neg < _MISS_STREAK or misses_pos < _MISS_STREAK:
        for n in ((0,) if step == 0 else (-step, step)):
            if n <= 0 and misses_neg >= _MISS_STREAK:
                continue
            if n > 0 and misses_pos >= _MISS_STREAK:
                continue
            guard.tick("bilateral sum")
            if gen.valuation_bound(n) > order:
                if n <= 0:
                    misses_neg += 1
                if n >= 0:
                    misses_pos += 1
                continue
            if n <= 0:
                misses_neg = 0
            if n >= 0:
                misses_pos = 0
            acc = handle(n, acc)
        step += 1
    return acc if acc is not None else QSeries.zero(order)


@dataclass(frozen=True)
class MultiIndex:
    """An ordered tuple (m_1 >= m_2 >= ... >= m_k >= m_{k+1}); in ordered mode
    the last entry is also >= 0, in bilateral-inner mode it is unbounded below
    (but never exceeds m_k)."""

    entries: tuple
    mode: str = "ordered"

    def __post_init__(self):
        e = self.entries
        for i in range(len(e) - 1):
            if e[i] < e[i + 1]:
                raise ValueError(f"multi-index {e} violates the ordering constraint")
        if len(e) >= 2 and e[-2] < 0:
            raise ValueError(f"multi-index {e} has a negative outer entry")
        if self.mode == "ordered" and e and e[-1] < 0:
            raise ValueError(f"ordered multi-index {e} has a negative inner entry")


@dataclass(frozen=True)
class MultiTermSpec:
    """A nested ordered multi-sum: depth levels of coupled factors around an
    innermost sequence.

    level_factor(j, m_j, m_{j+1}) gives the exact series factor at level j
    (1-based, j = 1 outermost); the complete term for a tuple is the product
    of all level factors times inner.term(m_{depth+1}).  val_bound receives a
    MultiIndex over the full tuple and must lower-bound the term's valuation,
    monotone nondecreasing in each gap m_j - m_{j+1} and in the inner index
    (toward both infinities in bilateral mode).
    """

    depth: int
    level_factor: Callable[[int, int, int], QSeries]
    inner: TermGenerator
    val_bound: Callable[[MultiIndex], int]
    mode: str = "ordered"  # or "bilateral"

    def bound(self, entries: tuple) -> int:
        return self.val_bound(MultiIndex(entries, self.mode))


def _multisum(spec: MultiTermSpec, order: int) -> QSeries:
    acc = QSeries.zero(order)
    guard = _Guard()
    checks = [SPOT_CHECKS]
    k = spec.depth

    def min_completion(j: int, m_next: int, tail: tuple) -> tuple:
        # cheapest completion: all remaining entries sit at the lowest allowed value
        base = max(m_next, 0)
        return (base,) * j + tail

    def extend(j: int, m_next: int, partial: QSeries, tail: tuple):
        lo = max(m_next, 0) if j == k else m_next
        m_j = lo
        while True:
            guard.tick("multi-sum tuples")
            if spec.bound(min_completion(j - 1, m_j, (m_j,) + tail)) > order:
                return
            new = partial * spec.level_factor(j, m_j, m_next)
            if not new.is_zero:
                if j == 1:
                    finish((m_j,) + tail, new)
                else:
                    extend(j - 1, m_j, new, (m_j,) + tail)
            m_j += 1

    def finish(entries: tuple, term: QSeries):
        nonlocal acc
        if checks[0] > 0:
            checks[0] -= 1
            _spot_check(term.valuation(), spec.bound(entries), f"multi-sum tuple {entries}")
        acc = acc + term

    def run_inner(t: int):
        g = spec.inner.term(t)
        if g.is_zero:
            return
        if k == 0:
            finish((t,), g)
        else:
            extend(k, t, g, (t,))

    hint = spec.inner.support_hint
    if hint is not None:
        for t in sorted(hint):
            if spec.mode == "ordered" and t < 0:
                raise ValueError("ordered multi-sum with negative inner support")
            run_inner(t)
        return acc

    def inner_bound_exhausted(t: int) -> bool:
        return spec.bound(min_completion(k, t, (t,))) > order

    if spec.mode == "ordered":
        t, misses = 0, 0
        while misses < _MISS_STREAK:
            guard.tick("multi-sum inner index")
            if inner_bound_exhausted(t):
                misses += 1
            else:
                misses = 0
                run_inner(t)
            t += 1
    else:
        misses_neg = misses_pos = 0
        step = 0
        while misses_neg < _MISS_STREAK or misses_pos < _MISS_STREAK:
            for t in ((0,) if step == 0 else (-step, step)):
                if t <= 0 and misses_neg >= _MISS_STREAK:
                    continue
                if t > 0 and misses_pos >= _MISS_STREAK:
                    continue
                guard.tick("multi-sum inner index")
                if inner_bound_exhausted(t):
                    if t <= 0:
                        misses_neg += 1
                    if t >= 0:
                        misses_pos += 1
                else:
                    if t <= 0:
                        misses_neg = 0
                    if t >= 0:
                        misses_pos = 0
                    run_inner(t)
            step += 1
    return acc


def multisum_ordered(spec: MultiTermSpec, order: int) -> QSeries:
    """Sum over all tuples m_1 >= ... >= m_{depth} >= m_{depth+1} >= 0."""
    if spec.mode != "ordered":
        raise ValueError("spec is not in ordered mode")
    return _multisum(spec, order)


def multisum_bilateral_inner(spec: MultiTermSpec, order: int) -> QSeries:
    """Sum over m_1 >= ... >= m_{depth} >= 0 with m_{depth+1} ranging down to -inf."""
    if spec.mode != "bilateral":
        raise ValueError("spec is not in bilateral-inner mode")
    if spec.depth < 1:
        raise ValueError("bilateral-inner mode needs depth >= 1")
    return _multisum(spec, order)


@dataclass(frozen=True)
class GridTermSpec:
    """A sum over independent nonnegative integer indices (rectangular grid).

    prefix_bound receives a prefix (m_1, ..., m_j) and must lower-bound the
    valuation of every term extending it, monotone nondecreasing in each
    coordinate.  Used for the re-indexed double/triple sums whose indices are
    unconstrained against each other.
    """

    arity: int
    term: Callable[[tuple], QSeries]
    prefix_bound: Callable[[tuple], int]


def gridsum(spec: GridTermSpec, order: int) -> QSeries:
    acc = QSeries.zero(order)
    guard = _Guard()
    checks = [SPOT_CHECKS]

    def walk(prefix: tuple):
        nonlocal acc
        depth = len(prefix)
        v = 0
        misses = 0
        while misses < _MISS_STREAK:
            guard.tick("grid tuples")
            ext = prefix + (v,)
            if spec.prefix_bound(ext) > order:
                misses += 1
                v += 1
                continue
            misses = 0
            if depth + 1 == spec.arity:
                t = spec.term(ext)
                if checks[0] > 0:
                    checks[0] -= 1
                    _spot_check(t.valuation(), spec.prefix_bound(ext), f"grid tuple {ext}")
                acc = acc + t
            else:
                walk(ext)
            v += 1

    walk(())
    return acc
