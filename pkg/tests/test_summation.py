import random

import pytest

from qident.errors import NoTermination, PruningUnsound
from qident.series import QSeries, ZLaurentSeries, mono, qpoch_finite_inv, qpoch_infinite_inv, rational
from qident.summation import (
    GridTermSpec,
    MultiIndex,
    MultiTermSpec,
    TermGenerator,
    gridsum,
    multisum_bilateral_inner,
    multisum_ordered,
    sum_bilateral,
    sum_unilateral,
)

from oracles import convolve, partitions_by_enumeration, partitions_with_parts


def test_delta_generator():
    gen = TermGenerator(
        term=lambda n: QSeries.one(8) if n == 0 else QSeries.zero(8),
        valuation_bound=lambda n: 0 if n == 0 else 10**9,
    )
    assert sum_unilateral(gen, 8) == QSeries.one(8)


def test_jacobi_identity_lhs_matches_partition_oracle():
    N = 9
    gen = TermGenerator(
        term=lambda n: qpoch_finite_inv(mono(1, 1), n, N) ** 2 * QSeries.monomial(1, n * n, N)
        if n * n <= N
        else QSeries.zero(N),
        valuation_bound=lambda n: n * n,
    )
    got = sum_unilateral(gen, N)
    assert [int(c) for c in got.coeffs] == [partitions_by_enumeration(i) for i in range(N + 1)]


def test_rogers_ramanujan_lhs_matches_mod5_partition_oracle():
    N = 6
    gen = TermGenerator(
        term=lambda n: qpoch_finite_inv(mono(1, 1), n, N) * QSeries.monomial(1, n * n, N)
        if n * n <= N
        else QSeries.zero(N),
        valuation_bound=lambda n: n * n,
    )
    got = sum_unilateral(gen, N)
    allowed = [p for p in range(1, N + 1) if p % 5 in (1, 4)]
    assert [int(c) for c in got.coeffs] == [partitions_with_parts(i, allowed) for i in range(N + 1)]


def test_bilateral_theta_with_z():
    N, w = 4, (-2, 2)
    gen = TermGenerator(
        term=lambda n: ZLaurentSeries.monomial(1, n * n, n, N, w)
        if n * n <= N
        else ZLaurentSeries.zero(N, w),
        valuation_bound=lambda n: n * n,
    )
    got = sum_bilateral(gen, N)
    expected = (
        ZLaurentSeries.monomial(1, 0, 0, N, w)
        + ZLaurentSeries.monomial(1, 1, 1, N, w)
        + ZLaurentSeries.monomial(1, 1, -1, N, w)
        + ZLaurentSeries.monomial(1, 4, 2, N, w)
        + ZLaurentSeries.monomial(1, 4, -2, N, w)
    )
    assert got == expected


def test_bilateral_plain_theta():
    N = 9
    gen = TermGenerator(
        term=lambda n: QSeries.monomial(1, n * n, N),
        valuation_bound=lambda n: n * n,
    )
    got = sum_bilateral(gen, N)
    assert got == QSeries.from_coeffs([1, 2, 0, 0, 2, 0, 0, 0, 0, 2], order=9)


def test_no_termination_guard():
    gen = TermGenerator(term=lambda n: QSeries.one(5), valuation_bound=lambda n: 0)
    with pytest.raises(NoTermination):
        sum_unilateral(gen, 5)


def test_pruning_unsound_detected():
    # declared bound 3 but the term actually starts at q^0
    gen = TermGenerator(
        term=lambda n: QSeries.one(6) if n == 0 else QSeries.zero(6),
        valuation_bound=lambda n: 3 if n == 0 else 10**9,
    )
    with pytest.raises(PruningUnsound):
        sum_unilateral(gen, 6)


def test_multiindex_ordering_enforced():
    MultiIndex((3, 2, 0))
    MultiIndex((3, 2, -4), mode="bilateral")
    with pytest.raises(ValueError):
        MultiIndex((2, 3, 0))
    with pytest.raises(ValueError):
        MultiIndex((3, 2, -1))


def _mseq10_spec(k: int, order: int):
    """Partition-power multi-sum: levels q^{m_j d_j}/((q;q)_{m_j}(q;q)_{d_j}),
    innermost q^{m_k^2}/(q;q)_{m_k}^2, depth k-1."""

    def level(j, mj, mnext):
        d = mj - mnext
        e = mj * d
        if e > order:
            return QSeries.zero(order)
        f = qpoch_finite_inv(mono(1, 1), mj, order) * qpoch_finite_inv(mono(1, 1), d, order)
        return f.shift(e)

    def inner_term(t):
        if t * t > order:
            return QSeries.zero(order)
        f = qpoch_finite_inv(mono(1, 1), t, order)
        return (f * f).shift(t * t)

    def bound(idx: MultiIndex):
        e = idx.entries
        t = e[-1]
        total = t * t
        for j in range(len(e) - 1):
            total += e[j] * (e[j] - e[j + 1])
        return total

    return MultiTermSpec(
        depth=k - 1,
        level_factor=level,
        inner=TermGenerator(term=inner_term, valuation_bound=lambda t: t * t),
        val_bound=bound,
    )


def test_mseq10_k2_matches_partition_convolution():
    N = 6
    got = multisum_ordered(_mseq10_spec(2, N), N)
    p = [partitions_by_enumeration(i) for i in range(N + 1)]
    assert [int(c) for c in got.coeffs] == [int(x) for x in convolve(p, p)[: N + 1]]


def test_mseq10_k2_equals_product_side():
    N = 12
    got = multisum_ordered(_mseq10_spec(2, N), N)
    rhs = qpoch_infinite_inv(mono(1, 1), N) ** 2
    assert got == rhs


def naive_boxed(spec: MultiTermSpec, order: int, box: int) -> QSeries:
    """Exhaustive enumeration over a box, ignoring all declared bounds."""
    import itertools

    acc = QSeries.zero(order)
    k = spec.depth
    lo_inner = -box if spec.mode == "bilateral" else 0
    for inner_idx in range(lo_inner, box + 1):
        g = spec.inner.term(inner_idx)
        for outer in itertools.product(range(box + 1), repeat=k):
            m = list(outer) + [inner_idx]
            if any(m[i] < m[i + 1] for i in range(k)):
                continue
            if k and m[-2] < 0:
                continue
            if k == 0 and spec.mode == "ordered" and inner_idx < 0:
                continue
            t = g
            for j in range(1, k + 1):
                t = t * spec.level_factor(j, m[j - 1], m[j])
            acc = acc + t
    return acc


def test_pruned_equals_naive_box():
    N = 8
    spec = _mseq10_spec(2, N)
    assert multisum_ordered(spec, N) == naive_boxed(spec, N, 12)


def test_order_stability():
    spec = _mseq10_spec(3, 12)
    full = multisum_ordered(spec, 12)
    spec8 = _mseq10_spec(3, 8)
    assert full.truncate(8) == multisum_ordered(spec8, 8)


def test_depth_one_reduces_to_unilateral_sum():
    N = 10
    gen = TermGenerator(
        term=lambda t: QSeries.monomial(1, t * t, N) if t * t <= N else QSeries.zero(N),
        valuation_bound=lambda t: t * t,
    )
    spec = MultiTermSpec(
        depth=1,
        level_factor=lambda j, mj, mnext: QSeries.monomial(1, mj - mnext, N)
        if mj - mnext <= N
        else QSeries.zero(N),
        inner=gen,
        val_bound=lambda idx: (idx.entries[0] - idx.entries[1]) + idx.entries[1] ** 2,
    )
    got = multisum_ordered(spec, N)
    # sum over m1 >= t >= 0 of q^{m1-t} q^{t^2} = (sum q^d) * (sum q^{t^2})
    expected = sum_unilateral(
        TermGenerator(term=lambda d: QSeries.monomial(1, d, N), valuation_bound=lambda d: d), N
    ) * sum_unilateral(gen, N)
    assert got == expected


def test_bilateral_inner_with_finite_support():
    N = 8
    g = {0: rational(1), -1: rational(2), 1: rational("1/2")}
    gen = TermGenerator(
        term=lambda t: QSeries.from_coeffs([g[t]], order=N) if t in g else QSeries.zero(N),
        valuation_bound=lambda t: 0 if t in g else 10**9,
        support_hint=frozenset(g),
    )
    spec = MultiTermSpec(
        depth=1,
        level_factor=lambda j, mj, mnext: QSeries.monomial(1, mj * (mj - mnext), N)
        if mj * (mj - mnext) <= N
        else QSeries.zero(N),
        inner=gen,
        val_bound=lambda idx: idx.entries[0] * (idx.entries[0] - idx.entries[1]),
        mode="bilateral",
    )
    got = multisum_bilateral_inner(spec, N)
    assert got == naive_boxed(spec, N, 10)


def test_gridsum_geometric_square():
    N = 7
    spec = GridTermSpec(
        arity=2,
        term=lambda mn: QSeries.monomial(1, mn[0] + mn[1], N) if mn[0] + mn[1] <= N else QSeries.zero(N),
        prefix_bound=lambda p: sum(p),
    )
    got = gridsum(spec, N)
    geom = QSeries.from_coeffs([1, -1], order=N).invert()
    assert got == geom * geom


def test_gridsum_guard():
    spec = GridTermSpec(arity=2, term=lambda mn: QSeries.one(4), prefix_bound=lambda p: 0)
    with pytest.raises(NoTermination):
        gridsum(spec, 4)
