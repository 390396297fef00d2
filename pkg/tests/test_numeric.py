import mpmath as mp
import pytest

from qident.errors import DomainError, NoConvergence, Overflow
from qident.numeric import (
    BigComplex,
    CNum,
    PiFrac,
    TailPolicy,
    default_policy,
    harmonic2_tail,
    nprod_qpoch,
    nsum,
    zeta2_constant,
)
from qident.series import rational

from oracles import harmonic2_partial


def rel_err(a: BigComplex, b: BigComplex) -> mp.mpf:
    return abs((a - b).value) / max(abs(a), abs(b), mp.mpf("1e-30"))


def test_geometric_sum():
    got = nsum(lambda n: BigComplex.make(rational(1, 2) ** n, 60), digits=60)
    assert abs(got.value.value - 2) < mp.mpf("1e-30")


def test_constant_terms_never_converge():
    with pytest.raises(NoConvergence):
        nsum(lambda n: BigComplex.make(1, 30), digits=30)


def test_overflow_guard():
    with pytest.raises(Overflow):
        nsum(lambda n: BigComplex.make(10 ** (n + 100), 30), digits=30)


def test_bilateral_theta_sum():
    got = nsum(lambda n: mp.mpf(10) ** -(n * n), mode="bilateral", digits=60)
    with mp.workdps(70):
        direct = sum(mp.mpf(10) ** -(n * n) for n in range(-25, 26))
        assert abs(got.value.value - direct) < mp.mpf("1e-40")


def test_finite_support_sum_equals_exact_value():
    vals = {0: rational(1, 3), 3: rational(-2, 7), 5: rational(4)}
    got = nsum(
        lambda n: BigComplex.make(vals.get(n, 0), 60),
        digits=60,
    )
    exact = BigComplex.make(sum(vals.values()), 60)
    assert rel_err(got.value, exact) < mp.mpf("1e-55")


def test_nprod_finite_and_trivial_cases():
    assert abs(nprod_qpoch(0, rational(1, 2), None, digits=40)) == 1
    got = nprod_qpoch(rational(1, 3), rational(1, 5), 2, digits=40)
    with mp.workdps(40):
        expected = (1 - mp.mpf(1) / 3) * (1 - mp.mpf(1) / 15)
        assert abs(got.value - expected) < mp.mpf("1e-35")


def test_nprod_infinite_against_higher_precision_partial():
    # floor chosen below the comparison target; the default 1e-40 floor
    # would leave a ~1e-41 tail
    got = nprod_qpoch(rational(1, 2), rational(1, 2), None, policy=TailPolicy(1e-55), digits=60)
    with mp.workdps(80):
        direct = mp.mpf(1)
        for k in range(250):
            direct *= 1 - mp.mpf(1) / 2 * (mp.mpf(1) / 2) ** k
        assert abs(got.value - direct) < mp.mpf("1e-50")


def test_nprod_domain_error():
    with pytest.raises(DomainError):
        nprod_qpoch(rational(1, 2), rational(3, 2), None, digits=30)


def test_pochhammer_shift_invariant():
    a, q = rational(1, 3), rational(1, 4)
    lhs = nprod_qpoch(a, q, None, digits=60)
    rhs = nprod_qpoch(rational(1, 12), q, None, digits=60)  # (aq;q)_inf
    with mp.workdps(60):
        assert abs(lhs.value / (1 - mp.mpf(1) / 3) - rhs.value) < mp.mpf("1e-45")


def test_zeta2_value_and_stability():
    z30 = zeta2_constant(30)
    with mp.workdps(40):
        assert abs(z30.value - mp.mpf("1.644934066848226436472415166646")) < mp.mpf("1e-28")
    z60, z120 = zeta2_constant(60), zeta2_constant(120)
    with mp.workdps(130):
        assert abs(z120.value - z60.value) < mp.mpf("1e-58")
        assert abs(6 * z60.value / mp.pi**2 - 1) < mp.mpf("1e-58")


def test_zeta2_against_euler_maclaurin_oracle():
    # Euler-Maclaurin truncation error with Bernoulli terms through B_18 is
    # O(B_20/K^21), around 5e-50 at K=300
    K = 300
    with mp.workdps(80):
        partial = harmonic2_partial(K)
        head = mp.mpf(int(partial.numerator)) / int(partial.denominator)
        tail = harmonic2_tail(K, digits=80)
        assert abs(head + tail - zeta2_constant(80).value) < mp.mpf("1e-45")


def test_precision_propagates_as_min():
    a = BigComplex.make(rational(1, 3), 60)
    b = BigComplex.make(rational(1, 7), 40)
    assert (a * b).digits == 40


def test_param_value_resolution():
    th = PiFrac(1, 7)
    with mp.workdps(50):
        from qident.numeric import as_mpc

        assert abs(as_mpc(th) - mp.pi / 7) < mp.mpf("1e-45")
        z = as_mpc(CNum(1, -2))
        assert z.real == 1 and z.imag == -2
    assert str(th) == "pi/7"
    assert str(CNum(1, -2)) == "1-2i"


def test_tail_policy_validation():
    with pytest.raises(ValueError):
        TailPolicy(abs_floor=1e-10, ratio_cap=1.5)
    assert default_policy(60).abs_floor == 1e-40
