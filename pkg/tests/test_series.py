import random

import pytest

from qident.errors import WindowOverflow, ZeroConstantTerm
from qident.series import (
    Monomial,
    QSeries,
    ZLaurentSeries,
    mono,
    parse_monomial,
    qpoch_finite,
    qpoch_infinite,
    qpoch_infinite_inv,
    rational,
    zpoch_infinite,
)

from oracles import partitions_by_enumeration


def rand_series(rng, order=10):
    return QSeries(order, [rational(rng.randint(-6, 6), rng.randint(1, 5)) for _ in range(order + 1)])


def test_add_cancellation():
    one_plus_q = QSeries.from_coeffs([1, 1], order=5)
    one_minus_q = QSeries.from_coeffs([1, -1], order=5)
    assert one_plus_q + one_minus_q == QSeries.from_coeffs([2], order=5)


def test_mul_telescopes():
    n = 12
    geom = QSeries(n, [rational(1)] * (n + 1))
    assert QSeries.from_coeffs([1, -1], order=n) * geom == QSeries.one(n)


def test_mul_associative_on_random_series():
    rng = random.Random(20240811)
    for _ in range(20):
        f, g, h = (rand_series(rng) for _ in range(3))
        assert (f * g) * h == f * (g * h)


def test_ring_axioms_seeded():
    rng = random.Random(1729)
    for _ in range(100):
        f, g, h = (rand_series(rng) for _ in range(3))
        assert f * g == g * f
        assert f + g == g + f
        assert f * (g + h) == f * g + f * h


def test_mixed_orders_truncate_to_min():
    f = QSeries.from_coeffs([1, 2, 3], order=8)
    g = QSeries.from_coeffs([1, 1], order=3)
    assert (f + g).order == 3
    assert (f * g).order == 3


def test_invert_geometric():
    n = 9
    inv = QSeries.from_coeffs([1, -1], order=n).invert()
    assert inv == QSeries(n, [rational(1)] * (n + 1))


def test_invert_zero_constant_term():
    with pytest.raises(ZeroConstantTerm):
        QSeries.from_coeffs([0, 1, 1], order=5).invert()


def test_invert_round_trip():
    rng = random.Random(77)
    for _ in range(10):
        f = rand_series(rng)
        if f.coeffs[0] == 0:
            f = f + QSeries.one(f.order)
        assert f.invert().invert() == f
        assert f * f.invert() == QSeries.one(f.order)
        assert f.invert() * f == QSeries.one(f.order)


def test_qpoch_finite_empty_product():
    assert qpoch_finite(mono(5, 3), 0, 10) == QSeries.one(10)


def test_qpoch_finite_hand_expansion():
    # (q;q)_3 = (1-q)(1-q^2)(1-q^3)
    expected = QSeries.from_coeffs([1, -1, -1, 0, 1, 1, -1], order=6)
    assert qpoch_finite(mono(1, 1), 3, 6) == expected


def test_qpoch_single_constant_factor():
    assert qpoch_finite(mono(2, 0), 1, 4) == QSeries.from_coeffs([-1], order=4)


def test_qpoch_infinite_zero_argument():
    assert qpoch_infinite(mono(0), 9) == QSeries.one(9)


def test_qpoch_infinite_pentagonal():
    expected = QSeries.from_coeffs([1, -1, -1, 0, 0, 1, 0, 1], order=7)
    assert qpoch_infinite(mono(1, 1), 7) == expected


def test_qpoch_infinite_at_one_vanishes():
    assert qpoch_infinite(mono(1, 0), 6).is_zero


def test_partition_generating_series_against_enumeration():
    n = 9
    inv = qpoch_infinite_inv(mono(1, 1), n)
    assert [int(c) for c in inv.coeffs] == [partitions_by_enumeration(i) for i in range(n + 1)]


def test_pochhammer_recurrence():
    for a in (mono(1, 1), mono(1, 2), mono(2, 0), mono("-1/3", 1)):
        for n in range(13):
            lhs = qpoch_finite(a, n + 1, 14)
            step = QSeries.one(14) - QSeries.monomial(a.r, a.m + n, 14)
            assert lhs == qpoch_finite(a, n, 14) * step


def test_infinite_equals_deep_finite():
    for a in (mono(1, 1), mono(2, 0), mono("-1/3", 1)):
        for order in (5, 11):
            assert qpoch_infinite(a, order) == qpoch_finite(a, order + 1, order)


def test_qpoch_base():
    # (q^2; q^2)_inf has only even exponents
    f = qpoch_infinite(mono(1, 2), 9, base=2)
    assert all(f.coeffs[e] == 0 for e in range(1, 10, 2))


def test_shift_and_scale():
    f = QSeries.from_coeffs([1, 1], order=4)
    assert f.shift(2) == QSeries.from_coeffs([0, 0, 1, 1], order=4)
    assert f.scale("1/2") == QSeries.from_coeffs(["1/2", "1/2"], order=4)


def test_equality_at_min_order_only():
    f = QSeries.from_coeffs([1, 2, 3], order=2)
    g = QSeries.from_coeffs([1, 2, 7, 9], order=3)
    assert f != g
    assert f.truncate(1) == g.truncate(1)


def test_first_difference():
    f = QSeries.from_coeffs([1, 0, 5], order=2)
    g = QSeries.from_coeffs([1, 0, 7], order=2)
    assert f.first_difference(g) == (2, rational(5), rational(7))
    assert f.first_difference(f) is None


def test_monomial_parsing_and_str():
    assert parse_monomial("q") == mono(1, 1)
    assert parse_monomial("2*q^3") == mono(2, 3)
    assert parse_monomial("-1/3*q^2") == mono("-1/3", 2)
    assert parse_monomial("-5") == mono(-5, 0)
    assert str(mono("-1/3", 2)) == "-1/3*q^2"
    assert str(mono(1, 1)) == "q"
    assert str(mono(0)) == "0"


def test_monomial_algebra():
    a, b = mono(2, 1), mono(3, 2)
    assert a.times(b) == mono(6, 3)
    assert b.over(a) == mono("3/2", 1)
    assert a.power(2) == mono(4, 2)
    assert a.over(b).m == -1  # representable, but rejected by expansion


def test_qpoch_rejects_negative_power_argument():
    with pytest.raises(ValueError):
        qpoch_finite(Monomial(rational(1), -1), 2, 5)


# -- Laurent layer ------------------------------------------------------------


def test_z_shift_of_one():
    w = (-3, 3)
    one = ZLaurentSeries.from_qseries(QSeries.one(4), w)
    z = one.z_shift(1)
    assert z == ZLaurentSeries.monomial(1, 0, 1, 4, w)


def test_z_plus_zinv_squared():
    w = (-2, 2)
    f = ZLaurentSeries.monomial(1, 0, 1, 4, w) + ZLaurentSeries.monomial(1, 0, -1, 4, w)
    sq = f * f
    expected = (
        ZLaurentSeries.monomial(1, 0, 2, 4, w)
        + ZLaurentSeries.monomial(2, 0, 0, 4, w)
        + ZLaurentSeries.monomial(1, 0, -2, 4, w)
    )
    assert sq == expected


def test_window_overflow_is_loud():
    w = (-1, 1)
    z = ZLaurentSeries.monomial(1, 0, 1, 4, w)
    with pytest.raises(WindowOverflow):
        z * z


def test_z_coeff_extraction():
    w = (-2, 2)
    f = ZLaurentSeries.monomial("1/2", 3, 1, 5, w) + ZLaurentSeries.monomial(4, 0, 0, 5, w)
    assert f.z_coeff(1) == QSeries.monomial("1/2", 3, 5)
    assert f.z_coeff(0) == QSeries.from_coeffs([4], order=5)
    assert f.z_coeff(2).is_zero


def test_zpoch_infinite_matches_scalar_case():
    # z-free argument reduces to the plain infinite Pochhammer
    f = zpoch_infinite(1, 1, 0, 8, (-2, 2))
    assert f.z_coeff(0) == qpoch_infinite(mono(1, 1), 8)
    assert f.z_coeff(1).is_zero
