"""Restricted and WP-Bailey pair machinery: convolutions, the two
transforms, the cataloged pair families, and the companion identities they
generate.

Pairs stated in base sqrt(q) are handled in a base variable p with p^2 = q.
Exact relation checks clear the p^{-n} powers by comparing p^m beta_m against
the convolution of p^n alpha_n, packing the sequence index into a Laurent
z-power so both sides are single series.
"""

from __future__ import annotations

from typing import Callable

import mpmath as mp

from .catalog import DefaultInstance, FiniteSeq, IdentityStatement, register
from .errors import DomainViolation, PoleError
from .numeric import CNum, PochTable, as_mpc, default_policy, nsum
from .series import (
    Monomial,
    QSeries,
    ZLaurentSeries,
    mono,
    qpoch_finite,
    qpoch_finite_inv,
    qpoch_infinite,
    qpoch_infinite_inv,
    rational,
)
from .summation import TermGenerator, sum_unilateral
from .identities import Q1, mono_num, need


# ---------------------------------------------------------------------------
# convolutions
# ---------------------------------------------------------------------------


def beta_from_alpha(alpha: Callable[[int], QSeries], b: Monomial, depth: int, order: int):
    """Restricted-pair convolution beta_m = sum_{n<=m} (b;q)_{m-n}/(q;q)_{m-n} alpha_n."""
    betas = []
    for m in range(depth + 1):
        acc = QSeries.zero(order)
        for n in range(m + 1):
            a_n = alpha(n)
            if a_n.is_zero:
                continue
            acc = acc + a_n * qpoch_finite(b, m - n, order) * qpoch_finite_inv(Q1, m - n, order)
        betas.append(acc)
    return betas


def beta_from_alpha_numeric(alpha: Callable[[int], mp.mpc], b, q, depth: int):
    t = PochTable(q)
    bv = as_mpc(b)
    out = []
    for m in range(depth + 1):
        acc = mp.mpc(0)
        for n in range(m + 1):
            acc += t.get(bv, m - n) / t.get(q, m - n) * alpha(n)
        out.append(acc)
    return out


def wp_beta_from_alpha(alpha: Callable[[int], mp.mpc], a, k, q, depth: int):
    """WP convolution beta_n = sum_j (k/a;q)_{n-j} (k;q)_{n+j} / ((q;q)_{n-j} (aq;q)_{n+j}) alpha_j."""
    t = PochTable(q)
    av, kv, qv = as_mpc(a), as_mpc(k), as_mpc(q)
    out = []
    for n in range(depth + 1):
        acc = mp.mpc(0)
        for j in range(n + 1):
            den = t.get(av * qv, n + j)
            if abs(den) < mp.mpf(10) ** -(mp.mp.dps - 5):
                raise PoleError(f"(aq;q)_{n + j} vanishes at the working precision")
            acc += t.get(kv / av, n - j) * t.get(kv, n + j) / (t.get(qv, n - j) * den) * alpha(j)
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# cataloged pairs
# ---------------------------------------------------------------------------


def wp_pair(name: str, a, k, q):
    """Named WP-Bailey pairs as numeric closures (alpha, beta)."""
    av, kv, qv = as_mpc(a), as_mpc(k), as_mpc(q)
    sq, sa = mp.sqrt(qv), mp.sqrt(av)
    tq = PochTable(qv)
    tsq = PochTable(sq)

    if name == "bressoud1":

        def alpha(n):
            return (
                (1 - av * qv ** (2 * n))
                / (1 - av)
                * tsq.get(sa, n)
                * tsq.get(av / kv, n)
                / (tsq.get(sq, n) * tsq.get(kv * mp.sqrt(qv / av), n))
                * (kv / (av * sq)) ** n
            )

        def beta(n):
            return (
                tq.get(kv, n)
                * tq.get(av / kv, n)
                * tq.get(-kv * mp.sqrt(qv / av), n)
                * tq.get(-kv * qv / sa, n)
                / (
                    tq.get(qv, n)
                    * tq.get(qv * kv**2 / av, n)
                    * tq.get(-sa, n)
                    * tq.get(-mp.sqrt(av * qv), n)
                )
                * (kv / (av * sq)) ** n
            )

        return alpha, beta

    if name == "bressoud2":

        def alpha(n):
            return (
                (1 - sa * qv**n)
                / (1 - sa)
                * tsq.get(sa, n)
                * tsq.get(av * sq / kv, n)
                / (tsq.get(sq, n) * tsq.get(kv / sa, n))
                * (kv / (av * sq)) ** n
            )

        def beta(n):
            return (
                tq.get(kv, n)
                * tq.get(av * qv / kv, n)
                / (tq.get(qv, n) * tq.get(kv**2 / av, n))
                * tsq.get(-kv / sa, 2 * n)
                / tsq.get(-mp.sqrt(av * qv), 2 * n)
                * (kv / (av * sq)) ** n
            )

        return alpha, beta

    if name == "cn333":

        def alpha(n):
            return (
                (1 - sa * qv**n)
                / (1 - sa)
                * tsq.get(sa, n)
                * tsq.get(av / kv, n)
                / (tsq.get(sq, n) * tsq.get(kv * mp.sqrt(qv / av), n))
                * (kv / av) ** n
            )

        def beta(n):
            return (
                tsq.get(-kv / sa, 2 * n)
                / tsq.get(-mp.sqrt(av * qv), 2 * n)
                * tq.get(av / kv, n)
                * tq.get(kv, n)
                / (tq.get(kv**2 * qv / av, n) * tq.get(qv, n))
                * (kv * sq / av) ** n
            )

        return alpha, beta

    raise DomainViolation(f"unknown WP pair {name!r}")


WP_PAIR_NAMES = ("bressoud1", "bressoud2", "cn333")

# Restricted pairs obtained from the Bressoud WP pairs by k -> a k, a -> 0,
# k = b.  The first is stated in the source literature; the second is DERIVED
# here by the same substitution chain and validated through the convolution
# relation and the companion identity it reproduces.
LIMITED_PAIR_NAMES = ("bressoud1_limited", "bressoud2_limited")


def limited_pair_exact(name: str, b: Monomial, depth: int, order: int):
    """Cleared forms over the base variable p (p^2 = q): returns the lists
    [p^n alpha_n] and [p^m beta_m], valid for plain rational b."""
    if b.m != 0 or b.r in (0, 1):
        raise DomainViolation("b must be a plain rational not in {0, 1}")
    inv_b = mono(rational(1) / b.r)
    p_over_b = Monomial(rational(1) / b.r, 1)
    alphas, betas = [], []
    for n in range(depth + 1):
        if name == "bressoud1_limited":
            al = qpoch_finite(inv_b, n, order) * qpoch_finite_inv(Q1, n, order)
            be = qpoch_finite(inv_b, n, order, base=2) * qpoch_finite_inv(mono(1, 2), n, order, base=2)
        elif name == "bressoud2_limited":
            al = qpoch_finite(p_over_b, n, order) * qpoch_finite_inv(Q1, n, order)
            be = qpoch_finite(Monomial(rational(1) / b.r, 2), n, order, base=2) * qpoch_finite_inv(
                mono(1, 2), n, order, base=2
            )
        else:
            raise DomainViolation(f"unknown limited pair {name!r}")
        alphas.append(al.scale(b.r**n))
        betas.append(be.scale(b.r**n))
    return alphas, betas


def limited_pair_numeric(name: str, b, q):
    bv, qv = as_mpc(b), as_mpc(q)
    sq = mp.sqrt(qv)
    tq = PochTable(qv)
    tsq = PochTable(sq)
    if name == "bressoud1_limited":
        alpha = lambda n: tsq.get(1 / bv, n) / tsq.get(sq, n) * (bv / sq) ** n
        beta = lambda n: tq.get(1 / bv, n) / tq.get(qv, n) * (bv / sq) ** n
    elif name == "bressoud2_limited":
        alpha = lambda n: tsq.get(sq / bv, n) / tsq.get(sq, n) * (bv / sq) ** n
        beta = lambda n: tq.get(qv / bv, n) / tq.get(qv, n) * (bv / sq) ** n
    else:
        raise DomainViolation(f"unknown limited pair {name!r}")
    return alpha, beta


# ---------------------------------------------------------------------------
# the two transforms as reusable side builders
# ---------------------------------------------------------------------------


def bt_transform_sides(alpha: FiniteSeq, a: Monomial, b: Monomial, c: Monomial, order: int):
    """Both sides of the restricted-pair transform for finitely supported alpha."""
    x = c.over(a.times(b))
    cb = c.over(b)

    def alpha_series(n):
        return QSeries.from_coeffs([alpha.value(n)], order=order)

    betas_needed = order // max(x.m, 1) + 1
    betas = beta_from_alpha(alpha_series, b, betas_needed, order)

    def lhs_term(m):
        e = x.m * m
        if e > order or m >= len(betas):
            return QSeries.zero(order)
        f = qpoch_finite(a, m, order) * qpoch_finite_inv(c, m, order) * betas[m]
        return f.shift(e).scale(x.r**m)

    lhs = sum_unilateral(TermGenerator(lhs_term, lambda m: x.m * m), order)

    rhs = QSeries.zero(order)
    for k in sorted(alpha.support):
        e = x.m * k
        if e > order:
            continue
        f = qpoch_finite(a, k, order) * qpoch_finite_inv(cb, k, order)
        rhs = rhs + f.shift(e).scale(x.r**k * alpha.value(k))
    pre = qpoch_infinite(c.over(a), order) * qpoch_infinite(cb, order)
    pre = pre * qpoch_infinite_inv(c, order) * qpoch_infinite_inv(x, order)
    return lhs, pre * rhs


def wp_transform_sides(pair_name: str, a, k, q, y, z, digits: int):
    """Both sides of the WP transform for a named pair at a numeric point."""
    alpha, beta = wp_pair(pair_name, a, k, q)
    av, kv, qv, yv, zv = (as_mpc(v) for v in (a, k, q, y, z))
    t = PochTable(qv)
    sk = mp.sqrt(kv)
    x = qv * av / (yv * zv)

    lhs = nsum(
        lambda n: t.get(qv * sk, n)
        * t.get(-qv * sk, n)
        * t.get(yv, n)
        * t.get(zv, n)
        / (t.get(sk, n) * t.get(-sk, n) * t.get(qv * kv / yv, n) * t.get(qv * kv / zv, n))
        * x**n
        * beta(n),
        digits=digits,
    ).value.value

    pol = default_policy(digits)
    pre = (
        t.inf(qv * kv, pol)
        * t.inf(qv * kv / (yv * zv), pol)
        * t.inf(qv * av / yv, pol)
        * t.inf(qv * av / zv, pol)
        / (
            t.inf(qv * kv / yv, pol)
            * t.inf(qv * kv / zv, pol)
            * t.inf(qv * av, pol)
            * t.inf(qv * av / (yv * zv), pol)
        )
    )
    rhs = pre * nsum(
        lambda n: t.get(yv, n)
        * t.get(zv, n)
        / (t.get(qv * av / yv, n) * t.get(qv * av / zv, n))
        * x**n
        * alpha(n),
        digits=digits,
    ).value.value
    return lhs, rhs


def bt_transform_check(alpha: FiniteSeq, a: Monomial, b: Monomial, c: Monomial, order: int) -> bool:
    lhs, rhs = bt_transform_sides(alpha, a, b, c, order)
    return lhs == rhs


def wp_transform_check(pair_name: str, a, k, q, y, z, digits: int, tol) -> bool:
    with mp.workdps(digits):
        lhs, rhs = wp_transform_sides(pair_name, a, k, q, y, z, digits)
        rel = abs(lhs - rhs) / max(abs(lhs), abs(rhs), mp.mpf("1e-30"))
        return rel <= mp.mpf(tol)


# ---------------------------------------------------------------------------
# catalog entries
# ---------------------------------------------------------------------------


def _companion_check(params, backend):
    a, b, c = params["a"], params["b"], params["c"]
    if backend == "exact":
        for nm, v in (("a", a), ("b", b), ("c", c)):
            need(isinstance(v, Monomial) and not v.is_zero, f"{nm} must be a nonzero monomial")
        need(b.m == 0 and b.r != 1, "b plain rational, b != 1")
        need(a.m == 0 and a.r != 1, "a plain rational, a != 1")
        need(c.m >= 2, "val(c) >= 2 (so val(c/(a q)) >= 1)")
    else:
        q = params["q"]
        need(abs(rational(q)) < 1, "|q| < 1")
        need(abs(rational(c) / (rational(a) * rational(q))) < 1, "|c/(a q)| < 1")
        need(rational(b) != 0, "b != 0")


def _companion_lhs_exact(params, order, second: bool):
    a, b, c = params["a"], params["b"], params["c"]
    x = c.over(a.times(Q1))  # c/(a q)
    top = Monomial(rational(1) / b.r, 2 if second else 0)  # q^2/b or 1/b

    def term(m):
        e = x.m * m
        if e > order:
            return QSeries.zero(order)
        f = qpoch_finite(a, m, order, base=2) * qpoch_finite(top, m, order, base=2)
        f = f * qpoch_finite_inv(c, m, order, base=2) * qpoch_finite_inv(mono(1, 2), m, order, base=2)
        return f.shift(e).scale(x.r**m)

    return sum_unilateral(TermGenerator(term, lambda m: x.m * m), order)


def _companion_rhs_exact(params, order, second: bool):
    a, b, c = params["a"], params["b"], params["c"]
    x = c.over(a.times(Q1))
    cb = c.over(b)
    inner_top = Monomial(rational(1) / b.r, 1 if second else 0)  # q/b or 1/b

    def term(k):
        e = x.m * k
        if e > order:
            return QSeries.zero(order)
        f = qpoch_finite(a, k, order, base=2) * qpoch_finite(inner_top, k, order)
        f = f * qpoch_finite_inv(cb, k, order, base=2) * qpoch_finite_inv(Q1, k, order)
        return f.shift(e).scale(x.r**k)

    s = sum_unilateral(TermGenerator(term, lambda k: x.m * k), order)
    pre = qpoch_infinite(c.over(a), order, base=2) * qpoch_infinite(cb, order, base=2)
    pre = pre * qpoch_infinite_inv(c, order, base=2)
    pre = pre * qpoch_infinite_inv(c.over(a.times(b)), order, base=2)
    return pre * s


def _companion_lhs_numeric(params, digits, second: bool):
    a, b, c, q = (as_mpc(params[k]) for k in ("a", "b", "c", "q"))
    t2 = PochTable(q**2)
    top = q**2 / b if second else 1 / b
    x = c / (a * q)
    return nsum(
        lambda m: t2.get(a, m) * t2.get(top, m) / (t2.get(c, m) * t2.get(q**2, m)) * x**m,
        digits=digits,
    ).value.value


def _companion_rhs_numeric(params, digits, second: bool):
    a, b, c, q = (as_mpc(params[k]) for k in ("a", "b", "c", "q"))
    t2 = PochTable(q**2)
    t1 = PochTable(q)
    pol = default_policy(digits)
    inner_top = q / b if second else 1 / b
    x = c / (a * q)
    pre = t2.inf(c / a, pol) * t2.inf(c / b, pol) / (t2.inf(c, pol) * t2.inf(c / (a * b), pol))
    s = nsum(
        lambda k: t2.get(a, k) * t1.get(inner_top, k) / (t2.get(c / b, k) * t1.get(q, k)) * x**k,
        digits=digits,
    ).value.value
    return pre * s


for _second, _id, _desc in (
    (False, "btrans2eq2", "first companion identity from the limited Bressoud pair"),
    (True, "btrans2eq22", "second companion identity from the derived limited pair"),
):
    register(
        IdentityStatement(
            id=_id,
            description=_desc,
            anchor="companions to Andrews' basic hypergeometric theorem",
            backends=frozenset({"exact", "numeric"}),
            slots=("a", "b", "c", "q"),
            default_instances=(
                DefaultInstance.of("exact", a=mono(3), b=mono(2), c=mono(1, 3 if _second else 2)),
                DefaultInstance.of(
                    "numeric", a=rational(1, 3), b=rational(5), c=rational(1, 50), q=rational(1, 5)
                ),
            ),
            check_domain=_companion_check,
            lhs_exact=(lambda s: lambda params, order: _companion_lhs_exact(params, order, s))(_second),
            rhs_exact=(lambda s: lambda params, order: _companion_rhs_exact(params, order, s))(_second),
            lhs_numeric=(lambda s: lambda params, digits: _companion_lhs_numeric(params, digits, s))(_second),
            rhs_numeric=(lambda s: lambda params, digits: _companion_rhs_numeric(params, digits, s))(_second),
        )
    )


def _equiv_check(params, backend):
    a, b, t, q = (rational(params[k]) for k in ("a", "b", "t", "q"))
    need(abs(q) < 1, "|q| < 1")
    need(abs(t / q) < 1, "|t/q| < 1")
    need(b * t != 0, "b, t != 0")


def _equiv_lhs_numeric(params, digits, arg_over_q: bool = True):
    a, b, t_, q = (as_mpc(params[k]) for k in ("a", "b", "t", "q"))
    t2 = PochTable(q**2)
    x = t_ / q if arg_over_q else t_ * q
    return nsum(
        lambda m: t2.get(a, m) * t2.get(b, m) / (t2.get(b * t_, m) * t2.get(q**2, m)) * x**m,
        digits=digits,
    ).value.value


def _equiv_rhs_numeric(params, digits, second: bool):
    a, b, t_, q = (as_mpc(params[k]) for k in ("a", "b", "t", "q"))
    t2 = PochTable(q**2)
    t1 = PochTable(q)
    pol = default_policy(digits)
    if second:
        pre = t2.inf(a * b * t_ / q**2, pol) * t2.inf(t_, pol) / (
            t2.inf(b * t_, pol) * t2.inf(a * t_ / q**2, pol)
        )
        s = nsum(
            lambda k: t2.get(b, k)
            * t1.get(a / q, k)
            / (t2.get(a * b * t_ / q**2, k) * t1.get(q, k))
            * (t_ / q) ** k,
            digits=digits,
        ).value.value
    else:
        pre = t2.inf(a * b * t_, pol) * t2.inf(t_, pol) / (t2.inf(b * t_, pol) * t2.inf(a * t_, pol))
        s = nsum(
            lambda k: t2.get(b, k)
            * t1.get(a, k)
            / (t2.get(a * b * t_, k) * t1.get(q, k))
            * (t_ / q) ** k,
            digits=digits,
        ).value.value
    return pre * s


register(
    IdentityStatement(
        id="btrans2eq2_equiv",
        description="restatement of the first companion identity",
        anchor="companions to Andrews' basic hypergeometric theorem",
        backends=frozenset({"numeric"}),
        slots=("a", "b", "t", "q"),
        default_instances=(
            DefaultInstance.of(
                "numeric", a=rational(1, 3), b=rational(1, 4), t=rational(1, 50), q=rational(1, 5)
            ),
        ),
        check_domain=_equiv_check,
        lhs_numeric=lambda params, digits: _equiv_lhs_numeric(params, digits),
        rhs_numeric=lambda params, digits: _equiv_rhs_numeric(params, digits, second=False),
    )
)

register(
    IdentityStatement(
        id="btrans2eq22_equiv",
        description="restatement of the second companion identity",
        anchor="companions to Andrews' basic hypergeometric theorem",
        backends=frozenset({"numeric"}),
        slots=("a", "b", "t", "q"),
        default_instances=(
            DefaultInstance.of(
                "numeric", a=rational(1, 3), b=rational(1, 4), t=rational(1, 50), q=rational(1, 5)
            ),
        ),
        check_domain=_equiv_check,
        lhs_numeric=lambda params, digits: _equiv_lhs_numeric(params, digits),
        rhs_numeric=lambda params, digits: _equiv_rhs_numeric(params, digits, second=True),
    )
)


def _thm7_check(params, backend):
    a, b, t, q = (rational(params[k]) for k in ("a", "b", "t", "q"))
    need(abs(q) < 1, "|q| < 1")
    need(abs(t * q) < 1 and abs(t) < 1, "|t|, |t q| < 1")


def _thm7_rhs_numeric(params, digits):
    a, b, t_, q = (as_mpc(params[k]) for k in ("a", "b", "t", "q"))
    t2 = PochTable(q**2)
    t1 = PochTable(q)
    pol = default_policy(digits)
    pre = t2.inf(a * b * t_, pol) * t2.inf(t_, pol) / (t2.inf(b * t_, pol) * t2.inf(a * t_, pol))
    s = nsum(
        lambda k: t2.get(b, k) * t1.get(a, k) / (t2.get(a * b * t_, k) * t1.get(q, k)) * t_**k,
        digits=digits,
    ).value.value
    return pre * s


register(
    IdentityStatement(
        id="andrews_thm7",
        description="Andrews' summation with argument t*q (companion baseline)",
        anchor="Andrews' Theorem 7 summation",
        backends=frozenset({"numeric"}),
        slots=("a", "b", "t", "q"),
        default_instances=(
            DefaultInstance.of(
                "numeric", a=rational(1, 2), b=rational(1, 4), t=rational(1, 3), q=rational(1, 5)
            ),
        ),
        check_domain=_thm7_check,
        lhs_numeric=lambda params, digits: _equiv_lhs_numeric(params, digits, arg_over_q=False),
        rhs_numeric=_thm7_rhs_numeric,
    )
)


# -- the convolution relation as a catalog entry ------------------------------


def _albet2_check(params, backend):
    need(params["pair"] in LIMITED_PAIR_NAMES, f"pair in {LIMITED_PAIR_NAMES}")
    b = params["b"]
    if backend == "exact":
        need(isinstance(b, Monomial) and b.m == 0 and b.r not in (0, 1), "b plain rational, not in {0,1}")
    else:
        need(mono_num(b), "b must be numeric")
        need(abs(rational(params["q"])) < 1, "|q| < 1")
    need(params["depth"] >= 1, "depth >= 1")


def _albet2_lhs_exact(params, order):
    """Stated beta side, packed as sum_m z^m p^m beta_m (p the series variable)."""
    depth = params["depth"]
    _, betas = limited_pair_exact(params["pair"], params["b"], depth, order)
    w = (0, depth)
    out = ZLaurentSeries.zero(order, w)
    for m, be in enumerate(betas):
        out = out + ZLaurentSeries.from_qseries(be.shift(m), w).z_shift(m)
    return out


def _albet2_rhs_exact(params, order):
    """Convolution side: sum_m z^m sum_{n<=m} (b;p^2)_{m-n} p^{m-n}/(p^2;p^2)_{m-n} p^n alpha_n."""
    depth, b = params["depth"], params["b"]
    alphas, _ = limited_pair_exact(params["pair"], b, depth, order)
    w = (0, depth)
    out = ZLaurentSeries.zero(order, w)
    for m in range(depth + 1):
        acc = QSeries.zero(order)
        for n in range(m + 1):
            ker = qpoch_finite(b, m - n, order, base=2) * qpoch_finite_inv(mono(1, 2), m - n, order, base=2)
            acc = acc + (ker * alphas[n]).shift(m - n)
        out = out + ZLaurentSeries.from_qseries(acc, w).z_shift(m)
    return out


def _albet2_lhs_numeric(params, digits):
    _, beta = limited_pair_numeric(params["pair"], params["b"], params["q"])
    u = mp.mpf(1) / 3
    return sum(beta(m) * u**m for m in range(params["depth"] + 1))


def _albet2_rhs_numeric(params, digits):
    alpha, beta = limited_pair_numeric(params["pair"], params["b"], params["q"])
    conv = beta_from_alpha_numeric(alpha, params["b"], as_mpc(params["q"]), params["depth"])
    u = mp.mpf(1) / 3
    return sum(conv[m] * u**m for m in range(params["depth"] + 1))


register(
    IdentityStatement(
        id="albet2_relation",
        description="stated limited pairs satisfy the restricted convolution relation",
        anchor="restricted Bailey-pair convolution relation",
        backends=frozenset({"exact", "numeric"}),
        slots=("pair", "b", "q", "depth"),
        default_instances=(
            DefaultInstance.of("exact", pair="bressoud1_limited", b=mono("2/3"), depth=15),
            DefaultInstance.of("exact", pair="bressoud2_limited", b=mono("2/3"), depth=15),
            DefaultInstance.of(
                "numeric", pair="bressoud1_limited", b=rational(2, 3), q=rational(1, 5), depth=20
            ),
            DefaultInstance.of(
                "numeric", pair="bressoud2_limited", b=rational(2, 3), q=rational(1, 5), depth=20
            ),
        ),
        check_domain=_albet2_check,
        lhs_exact=_albet2_lhs_exact,
        rhs_exact=_albet2_rhs_exact,
        lhs_numeric=_albet2_lhs_numeric,
        rhs_numeric=_albet2_rhs_numeric,
    )
)


def _wpeq_check(params, backend):
    need(params["pair"] in WP_PAIR_NAMES, f"pair in {WP_PAIR_NAMES}")
    a, k, q, y, z = (rational(params[n]) for n in ("a", "k", "q", "y", "z"))
    need(0 < q < 1, "0 < q < 1")
    need(a > 0 and k > 0, "a, k > 0 (real square roots)")
    import math as _math

    ratio = float(abs(k)) * _math.sqrt(float(q)) / float(abs(y * z))
    need(ratio < 1, "|k sqrt(q)/(y z)| < 1")
    need(float(abs(q * a / (y * z))) < 1, "|q a/(y z)| < 1")


register(
    IdentityStatement(
        id="wpeq_bressoud",
        description="WP transform checked on the Bressoud pairs and their companion",
        anchor="limiting case of Andrews' first WP-Bailey chain",
        backends=frozenset({"numeric"}),
        slots=("pair", "a", "k", "q", "y", "z"),
        default_instances=tuple(
            DefaultInstance.of(
                "numeric",
                pair=nm,
                a=rational(1, 3),
                k=rational(1, 7),
                q=rational(1, 5),
                y=rational(2),
                z=rational(3),
            )
            for nm in WP_PAIR_NAMES
        ),
        check_domain=_wpeq_check,
        lhs_numeric=lambda params, digits: wp_transform_sides(
            params["pair"], params["a"], params["k"], params["q"], params["y"], params["z"], digits
        )[0],
        rhs_numeric=lambda params, digits: wp_transform_sides(
            params["pair"], params["a"], params["k"], params["q"], params["y"], params["z"], digits
        )[1],
    )
)
