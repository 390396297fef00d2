"""Catalog entries: the multi-sum transformation theorems, their corollaries,
and the classical identities they are checked against.

Each entry's left side goes through the summation engine (pruned multi-sum,
grid sum, or bilateral sum) while its right side is assembled directly from
Pochhammer products and single sums, so the two sides share no intermediate
computation.  Exact parameters are monomials r*q^m; numeric parameters are
plain numbers evaluated at the working precision.
"""

from __future__ import annotations

import math

import mpmath as mp

from .catalog import (
    DefaultInstance,
    FiniteSeq,
    GeomSeq,
    IdentityStatement,
    ThetaSeq,
    register,
)
from .errors import DomainViolation
from .numeric import (
    CNum,
    PochTable,
    as_mpc,
    default_policy,
    harmonic2_tail,
    nsum,
)
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
    zpoch_infinite,
)
from .summation import GridTermSpec, MultiTermSpec, TermGenerator, gridsum, multisum_bilateral_inner, multisum_ordered, sum_bilateral, sum_unilateral

FAR = 10**9  # valuation bound for indices outside a finite support
Q1 = mono(1, 1)


def qmon(r, e: int, order: int) -> QSeries:
    return QSeries.monomial(r, e, order) if e <= order else QSeries.zero(order)


def need(cond: bool, constraint: str, detail: str = ""):
    if not cond:
        raise DomainViolation(constraint, detail)


def need_monomial(params: dict, name: str) -> Monomial:
    v = params.get(name)
    need(isinstance(v, Monomial), f"{name} must be an exact monomial r*q^m")
    need(v.m >= 0 or v.is_zero, f"{name} must have a nonnegative q-power")
    return v


def need_int(params: dict, name: str, lo: int = None, hi: int = None) -> int:
    v = params.get(name)
    need(isinstance(v, int), f"{name} must be an integer")
    if lo is not None:
        need(v >= lo, f"{name} >= {lo}")
    if hi is not None:
        need(v <= hi, f"{name} <= {hi}")
    return v


def not_unit(a: Monomial, what: str):
    """Pochhammer symbols of 1 vanish; reject where one lands in a denominator."""
    need(not a.is_one, f"{what} != 1")


def finite_seq(params: dict, name: str, bilateral: bool) -> FiniteSeq:
    g = params.get(name)
    need(isinstance(g, FiniteSeq), f"{name} must be a finitely supported sequence")
    if not bilateral and g.items:
        need(g.min_index() >= 0, f"{name} supported on nonnegative indices")
    return g


def mono_num(v) -> bool:
    return isinstance(v, (int, CNum)) or hasattr(v, "numerator")


# ---------------------------------------------------------------------------
# shared exact building blocks
# ---------------------------------------------------------------------------


def multc_level_factor(a: Monomial, b: Monomial, c: Monomial, order: int):
    """One level of the nested transformation:
    (a;q)_{m} (c/b;q)_{m'} (b;q)_{m-m'} / ((c;q)_{m} (a;q)_{m'} (q;q)_{m-m'}) * (c/(ab))^{m-m'}."""
    cb = c.over(b)
    x = c.over(a.times(b))

    def factor(mj: int, mnext: int) -> QSeries:
        d = mj - mnext
        e = x.m * d
        if e > order:
            return QSeries.zero(order)
        f = qpoch_finite(a, mj, order)
        f = f * qpoch_finite(cb, mnext, order)
        f = f * qpoch_finite(b, d, order)
        f = f * qpoch_finite_inv(c, mj, order)
        f = f * qpoch_finite_inv(a, mnext, order)
        f = f * qpoch_finite_inv(Q1, d, order)
        return f.shift(e).scale(x.r**d)

    return factor


def check_multc_levels(levels, backend: str):
    need(isinstance(levels, tuple) and levels, "levels must be a nonempty tuple of (a,b,c)")
    for trip in levels:
        need(isinstance(trip, tuple) and len(trip) == 3, "each level is an (a,b,c) triple")
        a, b, c = trip
        if backend == "exact":
            for nm, v in (("a", a), ("b", b), ("c", c)):
                need(isinstance(v, Monomial), f"level {nm} must be an exact monomial")
                need(v.m >= 0, f"level {nm} must have a nonnegative q-power")
                need(not v.is_zero, f"level {nm} != 0")
            not_unit(a, "a")  # (a;q)_{m'} sits in a denominator
            not_unit(c, "c")
            need(c.over(b).m >= 0, "val(c/b) >= 0")
            need(c.over(a.times(b)).m >= 1, "val(c/(a*b)) >= 1")
        else:
            for v in trip:
                need(mono_num(v), "numeric levels take plain numbers")


def multc_rhs_prefactor(levels, order: int) -> QSeries:
    out = QSeries.one(order)
    for a, b, c in levels:
        out = out * qpoch_infinite(c.over(a), order)
        out = out * qpoch_infinite(c.over(b), order)
        out = out * qpoch_infinite_inv(c, order)
        out = out * qpoch_infinite_inv(c.over(a.times(b)), order)
    return out


def finite_inner_gen(g: FiniteSeq, order: int) -> TermGenerator:
    return TermGenerator(
        term=lambda t: QSeries.from_coeffs([g.value(t)], order=order),
        valuation_bound=lambda t: 0 if t in g.support else FAR,
        support_hint=g.support,
    )


def multc_spec(levels, g: FiniteSeq, order: int) -> MultiTermSpec:
    factors = [multc_level_factor(a, b, c, order) for a, b, c in levels]
    xvals = [c.over(a.times(b)).m for a, b, c in levels]
    supp = g.support

    def bound(idx) -> int:
        e = idx.entries
        total = 0 if e[-1] in supp else FAR
        for j in range(len(e) - 1):
            total += xvals[j] * (e[j] - e[j + 1])
        return total

    return MultiTermSpec(
        depth=len(levels),
        level_factor=lambda j, mj, mnext: factors[j - 1](mj, mnext),
        inner=finite_inner_gen(g, order),
        val_bound=bound,
    )


def bilateral_tail_factor(a: Monomial, order: int):
    """The innermost level of the bilateral transformation, with the
    negative-index Pochhammers rewritten into nonnegative powers:
    for m' = -t < 0 the factor equals
    (a;q)_m (a;q)_{m+t} (q/a;q)_t / ((q;q)_m (q;q)_{m+t} (a;q)_t) * (q/a^2)^m."""
    qa = mono(1, 1).over(a)  # q/a
    qa2 = mono(1, 1).over(a.times(a))  # q/a^2

    def factor(mk: int, mk1: int) -> QSeries:
        if mk1 >= 0:
            d = mk - mk1
            if d > order:
                return QSeries.zero(order)
            f = qpoch_finite(a, mk, order)
            f = f * qpoch_finite(qa, mk1, order)
            f = f * qpoch_finite(a, d, order)
            f = f * qpoch_finite_inv(Q1, mk, order)
            f = f * qpoch_finite_inv(a, mk1, order)
            f = f * qpoch_finite_inv(Q1, d, order)
            return f.shift(d).scale(qa2.r**d)
        t = -mk1
        if mk > order:
            return QSeries.zero(order)
        f = qpoch_finite(a, mk, order)
        f = f * qpoch_finite(a, mk + t, order)
        f = f * qpoch_finite(qa, t, order)
        f = f * qpoch_finite_inv(Q1, mk, order)
        f = f * qpoch_finite_inv(Q1, mk + t, order)
        f = f * qpoch_finite_inv(a, t, order)
        return f.shift(mk).scale(qa2.r**mk)

    return factor


def multcc_spec(levels, a: Monomial, g: FiniteSeq, order: int) -> MultiTermSpec:
    outer = [multc_level_factor(la, lb, lc, order) for la, lb, lc in levels]
    tail = bilateral_tail_factor(a, order)
    xvals = [lc.over(la.times(lb)).m for la, lb, lc in levels]
    supp = g.support
    k = len(levels) + 1

    def factor(j, mj, mnext):
        return outer[j - 1](mj, mnext) if j < k else tail(mj, mnext)

    def bound(idx) -> int:
        e = idx.entries
        total = 0 if e[-1] in supp else FAR
        for j in range(len(e) - 2):
            total += xvals[j] * (e[j] - e[j + 1])
        total += e[-2] - max(e[-1], 0)
        return total

    return MultiTermSpec(
        depth=k,
        level_factor=factor,
        inner=finite_inner_gen(g, order),
        val_bound=bound,
        mode="bilateral",
    )


# ---------------------------------------------------------------------------
# shared numeric building blocks
# ---------------------------------------------------------------------------


def npoch(table: PochTable, x, n: int) -> mp.mpc:
    """(x;q)_n at the table's base, negative n by the reciprocal convention."""
    if n >= 0:
        return table.get(x, n)
    q = table.q
    den = mp.mpc(1)
    xv = as_mpc(x)
    for i in range(1, -n + 1):
        den *= 1 - xv * q**-i
    return 1 / den


def seq_value(g, k: int) -> mp.mpc:
    if isinstance(g, FiniteSeq):
        return as_mpc(g.value(k))
    if isinstance(g, GeomSeq):
        return as_mpc(g.ratio) ** k if k >= 0 else mp.mpc(0)
    if isinstance(g, ThetaSeq):
        return as_mpc(g.t) ** (k * k) * as_mpc(g.u) ** k
    raise TypeError(f"not a sequence parameter: {g!r}")


def seq_total_numeric(g, digits: int) -> mp.mpc:
    if isinstance(g, FiniteSeq):
        return as_mpc(g.total())
    if isinstance(g, GeomSeq):
        return 1 / (1 - as_mpc(g.ratio))
    if isinstance(g, ThetaSeq):
        return nsum(lambda k: seq_value(g, k), mode="bilateral", digits=digits).value.value
    raise TypeError(f"not a sequence parameter: {g!r}")


def check_seq_numeric(g, name: str, bilateral: bool):
    if isinstance(g, FiniteSeq):
        if not bilateral and g.items:
            need(g.min_index() >= 0, f"{name} supported on nonnegative indices")
        return
    if isinstance(g, GeomSeq):
        need(abs(rational(g.ratio)) < 1, f"|{name} ratio| < 1")
        return
    if isinstance(g, ThetaSeq):
        need(abs(rational(g.t)) < 1, f"|{name} theta base| < 1")
        return
    raise DomainViolation(f"{name} must be a sequence parameter")


# ---------------------------------------------------------------------------
# q-Gauss sum
# ---------------------------------------------------------------------------


def _qgauss_check(params, backend):
    a, b, c = params["a"], params["b"], params["c"]
    if backend == "exact":
        for nm in ("a", "b", "c"):
            need_monomial(params, nm)
        need(not a.is_zero and not b.is_zero, "a, b != 0")
        not_unit(c, "c")
        need(c.over(a.times(b)).m >= 1, "val(c/(a*b)) >= 1")
        need(c.over(a).m >= 0 and c.over(b).m >= 0, "val(c/a), val(c/b) >= 0")
    else:
        q = params["q"]
        for nm in ("a", "b", "c", "q"):
            need(mono_num(params[nm]), f"{nm} must be numeric")
        need(abs(rational(q)) < 1, "|q| < 1")
        need(abs(rational(c) / (rational(a) * rational(b))) < 1, "|c/(a*b)| < 1")


def _qgauss_lhs_exact(params, order):
    a, b, c = params["a"], params["b"], params["c"]
    x = c.over(a.times(b))

    def term(n):
        e = x.m * n
        if e > order:
            return QSeries.zero(order)
        f = qpoch_finite(a, n, order) * qpoch_finite(b, n, order)
        f = f * qpoch_finite_inv(c, n, order) * qpoch_finite_inv(Q1, n, order)
        return f.shift(e).scale(x.r**n)

    return sum_unilateral(TermGenerator(term, lambda n: x.m * n), order)


def _qgauss_rhs_exact(params, order):
    a, b, c = params["a"], params["b"], params["c"]
    out = qpoch_infinite(c.over(a), order) * qpoch_infinite(c.over(b), order)
    return out * qpoch_infinite_inv(c, order) * qpoch_infinite_inv(c.over(a.times(b)), order)


def _qgauss_lhs_numeric(params, digits):
    a, b, c, q = (as_mpc(params[k]) for k in ("a", "b", "c", "q"))
    t = PochTable(q)
    x = c / (a * b)
    return nsum(
        lambda n: npoch(t, a, n) * npoch(t, b, n) / (npoch(t, c, n) * npoch(t, q, n)) * x**n,
        digits=digits,
    ).value.value


def _qgauss_rhs_numeric(params, digits):
    a, b, c, q = (as_mpc(params[k]) for k in ("a", "b", "c", "q"))
    t = PochTable(q)
    pol = default_policy(digits)
    return t.inf(c / a, pol) * t.inf(c / b, pol) / (t.inf(c, pol) * t.inf(c / (a * b), pol))


register(
    IdentityStatement(
        id="q_gauss",
        description="q-Gauss evaluation of a 2phi1 at argument c/(ab)",
        anchor="q-Gauss sum",
        backends=frozenset({"exact", "numeric"}),
        slots=("a", "b", "c", "q"),
        default_instances=(
            DefaultInstance.of("exact", a=mono(2), b=mono(3), c=mono(1, 1)),
            DefaultInstance.of(
                "numeric", a=rational(1, 2), b=rational(1, 4), c=rational(1, 10), q=rational(1, 5)
            ),
        ),
        check_domain=_qgauss_check,
        lhs_exact=_qgauss_lhs_exact,
        rhs_exact=_qgauss_rhs_exact,
        lhs_numeric=_qgauss_lhs_numeric,
        rhs_numeric=_qgauss_rhs_numeric,
    )
)


# ---------------------------------------------------------------------------
# the two double-sum transformation theorems
# ---------------------------------------------------------------------------


def _t2_term_exact(a: Monomial, g: FiniteSeq, order: int, m: int, n: int) -> QSeries:
    """Printed term of the bilateral double-sum transformation at (m, n),
    with (q/a;q)_{m-n}/(a;q)_{m-n} for m < n rewritten to nonnegative powers."""
    qa = mono(1, 1).over(a)
    ia2 = rational(1) / (a.r * a.r)
    gv = g.value(m - n)
    if gv == 0:
        return QSeries.zero(order)
    k = m - n
    f = qpoch_finite(a, m, order) * qpoch_finite(a, n, order)
    f = f * qpoch_finite_inv(Q1, m, order) * qpoch_finite_inv(Q1, n, order)
    if k >= 0:
        f = f * qpoch_finite(qa, k, order) * qpoch_finite_inv(a, k, order)
        return f.shift(n).scale(ia2**n * gv)
    s = -k
    f = f * qpoch_finite(qa, s, order) * qpoch_finite_inv(a, s, order)
    return f.shift(m).scale(ia2**m * gv)


def _t2_check(params, backend):
    a = params["a"]
    if backend == "exact":
        need(isinstance(a, Monomial), "a must be an exact monomial")
        need(a.m == 0, "a must be a plain rational (a = r*q^0)")
        need(a.r not in (0, 1), "a not in {0, 1}")
        finite_seq(params, "g", bilateral=True)
    else:
        need(mono_num(a), "a must be numeric")
        q = params["q"]
        need(abs(rational(q)) < 1, "|q| < 1")
        need(abs(rational(q) / (rational(a) ** 2)) < 1, "|q/a^2| < 1")
        check_seq_numeric(params["g"], "g", bilateral=True)
        need(not isinstance(params["g"], GeomSeq), "g must be bilaterally summable")


def _t2_lhs_exact(params, order):
    a, g = params["a"], params["g"]
    acc = QSeries.zero(order)
    for k in sorted(g.support):
        n0 = max(0, -k)

        def term(i, k=k, n0=n0):
            return _t2_term_exact(a, g, order, n0 + i + k, n0 + i)

        acc = acc + sum_unilateral(TermGenerator(term, lambda i: i), order)
    return acc


def _t2_rhs_exact(params, order):
    a, g = params["a"], params["g"]
    qa = mono(1, 1).over(a)
    qa2 = mono(1, 1).over(a.times(a))
    f = qpoch_infinite(qa, order) ** 2
    f = f * qpoch_infinite_inv(Q1, order) * qpoch_infinite_inv(qa2, order)
    return f.scale(g.total())


def _t2_box(params, order):
    a, g = params["a"], params["g"]
    return GridTermSpec(
        arity=2,
        term=lambda mn: _t2_term_exact(a, g, order, mn[0], mn[1]),
        prefix_bound=lambda p: 0,  # oracle use only (box enumeration)
    )


def _t2_lhs_numeric(params, digits):
    a, q, g = as_mpc(params["a"]), as_mpc(params["q"]), params["g"]
    t = PochTable(q)
    qa2 = q / a**2

    def slice_k(k):
        pre = npoch(t, q / a, k) / npoch(t, a, k) * seq_value(g, k)
        if abs(pre) == 0:
            return mp.mpc(0)
        n0 = max(0, -k)
        inner = nsum(
            lambda i: npoch(t, a, n0 + i + k)
            * npoch(t, a, n0 + i)
            / (npoch(t, q, n0 + i + k) * npoch(t, q, n0 + i))
            * qa2 ** (n0 + i),
            digits=digits,
        ).value.value
        return pre * inner

    return nsum(slice_k, mode="bilateral", digits=digits).value.value


def _t2_rhs_numeric(params, digits):
    a, q = as_mpc(params["a"]), as_mpc(params["q"])
    t = PochTable(q)
    pol = default_policy(digits)
    pre = t.inf(q / a, pol) ** 2 / (t.inf(q, pol) * t.inf(q / a**2, pol))
    return pre * seq_total_numeric(params["g"], digits)


register(
    IdentityStatement(
        id="thm_t2",
        description="bilateral double-sum to single-sum transformation with input sequence g",
        anchor="bilateral q-Gauss double-sum transformation",
        backends=frozenset({"exact", "numeric"}),
        slots=("a", "q", "g"),
        default_instances=(
            DefaultInstance.of(
                "exact",
                a=mono(2),
                g=FiniteSeq(((-1, rational(1, 3)), (0, rational(2)), (2, rational(-1)))),
            ),
            DefaultInstance.of(
                "numeric", a=CNum(3, 0), q=rational(1, 5), g=ThetaSeq(rational(1, 3), rational(1, 2))
            ),
        ),
        check_domain=_t2_check,
        lhs_exact=_t2_lhs_exact,
        rhs_exact=_t2_rhs_exact,
        lhs_numeric=_t2_lhs_numeric,
        rhs_numeric=_t2_rhs_numeric,
        box_spec=_t2_box,
    )
)


def _t3_check(params, backend):
    a, b, c = params["a"], params["b"], params["c"]
    if backend == "exact":
        for nm in ("a", "b", "c"):
            need_monomial(params, nm)
        need(not a.is_zero and not b.is_zero, "a, b != 0")
        not_unit(a, "a")  # (a;q)_{m-n} sits in a denominator
        not_unit(c, "c")
        need(c.over(a.times(b)).m >= 1, "val(c/(a*b)) >= 1")
        need(c.over(b).m >= 0, "val(c/b) >= 0")
        need(c.over(a).m >= 0, "val(c/a) >= 0")
        finite_seq(params, "g", bilateral=False)
    else:
        q = params["q"]
        need(abs(rational(q)) < 1, "|q| < 1")
        need(
            abs(rational(c) / (rational(a) * rational(b))) < 1,
            "|c/(a*b)| < 1",
        )
        check_seq_numeric(params["g"], "g", bilateral=False)


def _t3_lhs_exact(params, order):
    a, b, c, g = params["a"], params["b"], params["c"], params["g"]
    x = c.over(a.times(b))
    cb = c.over(b)
    acc = QSeries.zero(order)
    for k in sorted(g.support):
        gv = g.value(k)
        pre_num = qpoch_finite(cb, k, order)
        pre_den = qpoch_finite_inv(a, k, order)

        def term(n, k=k, pre_num=pre_num, pre_den=pre_den, gv=gv):
            e = x.m * n
            if e > order:
                return QSeries.zero(order)
            f = qpoch_finite(a, n + k, order) * qpoch_finite(b, n, order)
            f = f * qpoch_finite_inv(c, n + k, order) * qpoch_finite_inv(Q1, n, order)
            f = f * pre_num * pre_den
            return f.shift(e).scale(x.r**n * gv)

        acc = acc + sum_unilateral(TermGenerator(term, lambda n: x.m * n), order)
    return acc


def _t3_rhs_exact(params, order):
    a, b, c, g = params["a"], params["b"], params["c"], params["g"]
    f = qpoch_infinite(c.over(a), order) * qpoch_infinite(c.over(b), order)
    f = f * qpoch_infinite_inv(c, order) * qpoch_infinite_inv(c.over(a.times(b)), order)
    return f.scale(g.total())


def _t3_box(params, order):
    a, b, c, g = params["a"], params["b"], params["c"], params["g"]
    x = c.over(a.times(b))
    cb = c.over(b)

    def term(mn):
        m, n = mn
        if m < n:
            return QSeries.zero(order)
        k = m - n
        gv = g.value(k)
        e = x.m * n
        if gv == 0 or e > order:
            return QSeries.zero(order)
        f = qpoch_finite(a, m, order) * qpoch_finite(b, n, order) * qpoch_finite(cb, k, order)
        f = f * qpoch_finite_inv(c, m, order) * qpoch_finite_inv(Q1, n, order)
        f = f * qpoch_finite_inv(a, k, order)
        return f.shift(e).scale(x.r**n * gv)

    return GridTermSpec(arity=2, term=term, prefix_bound=lambda p: 0)


def _t3_lhs_numeric(params, digits):
    a, b, c, q = (as_mpc(params[k]) for k in ("a", "b", "c", "q"))
    g = params["g"]
    t = PochTable(q)
    x = c / (a * b)

    def slice_k(k):
        gv = seq_value(g, k)
        if abs(gv) == 0:
            return mp.mpc(0)
        pre = npoch(t, c / b, k) / npoch(t, a, k) * gv
        inner = nsum(
            lambda n: npoch(t, a, n + k)
            * npoch(t, b, n)
            / (npoch(t, c, n + k) * npoch(t, q, n))
            * x**n,
            digits=digits,
        ).value.value
        return pre * inner

    return nsum(slice_k, digits=digits).value.value


def _t3_rhs_numeric(params, digits):
    a, b, c, q = (as_mpc(params[k]) for k in ("a", "b", "c", "q"))
    t = PochTable(q)
    pol = default_policy(digits)
    pre = t.inf(c / a, pol) * t.inf(c / b, pol) / (t.inf(c, pol) * t.inf(c / (a * b), pol))
    return pre * seq_total_numeric(params["g"], digits)


register(
    IdentityStatement(
        id="thm_t3",
        description="ordered double-sum to single-sum transformation with input sequence g",
        anchor="q-Gauss double-sum transformation",
        backends=frozenset({"exact", "numeric"}),
        slots=("a", "b", "c", "q", "g"),
        default_instances=(
            DefaultInstance.of(
                "exact",
                a=mono(2),
                b=mono(3),
                c=mono(1, 1),
                g=FiniteSeq(((0, rational(1)), (1, rational(1, 2)), (3, rational(-2, 3)))),
            ),
            DefaultInstance.of(
                "numeric",
                a=rational(1, 3),
                b=rational(1, 4),
                c=rational(1, 100),
                q=rational(1, 5),
                g=GeomSeq(rational(2, 7)),
            ),
        ),
        check_domain=_t3_check,
        lhs_exact=_t3_lhs_exact,
        rhs_exact=_t3_rhs_exact,
        lhs_numeric=_t3_lhs_numeric,
        rhs_numeric=_t3_rhs_numeric,
        box_spec=_t3_box,
    )
)


# ---------------------------------------------------------------------------
# the two main multi-sum theorems (exact, finite-support g)
# ---------------------------------------------------------------------------


def _multc_check(params, backend):
    check_multc_levels(params["levels"], backend)
    finite_seq(params, "g", bilateral=False)


def _multc_lhs_exact(params, order):
    return multisum_ordered(multc_spec(params["levels"], params["g"], order), order)


def _multc_rhs_exact(params, order):
    return multc_rhs_prefactor(params["levels"], order).scale(params["g"].total())


_MULTC_L1 = (mono(2), mono(3), mono(1, 1))
_MULTC_L2 = (mono(1, 2), mono(-2), mono(1, 2))
_MULTC_L3 = (mono(3), mono(1, 3), mono(1, 1))
_MULTC_G = FiniteSeq(((0, rational(1)), (1, rational(-2, 3)), (2, rational(1, 5))))

register(
    IdentityStatement(
        id="multc",
        description="nested multi-sum to product-times-sum transformation (ordered tuples)",
        anchor="iterated q-Gauss multi-sum transformation",
        backends=frozenset({"exact"}),
        slots=("levels", "g"),
        default_instances=(
            DefaultInstance.of("exact", levels=(_MULTC_L1,), g=_MULTC_G),
            DefaultInstance.of("exact", levels=(_MULTC_L1, _MULTC_L2), g=_MULTC_G),
            DefaultInstance.of("exact", levels=(_MULTC_L1, _MULTC_L2, _MULTC_L3), g=_MULTC_G),
        ),
        check_domain=_multc_check,
        lhs_exact=_multc_lhs_exact,
        rhs_exact=_multc_rhs_exact,
        multisum_spec=lambda params, order: multc_spec(params["levels"], params["g"], order),
    )
)


def _multcc_check(params, backend):
    levels = params["levels"]
    if levels:
        check_multc_levels(levels, backend)
    a = params["a"]
    need(isinstance(a, Monomial) and a.m == 0, "a must be a plain rational (a = r*q^0)")
    need(a.r not in (0, 1, -1), "a not in {0, 1, -1}")
    finite_seq(params, "g", bilateral=True)


def _multcc_lhs_exact(params, order):
    spec = multcc_spec(params["levels"], params["a"], params["g"], order)
    return multisum_bilateral_inner(spec, order)


def _multcc_rhs_exact(params, order):
    a, g = params["a"], params["g"]
    qa = mono(1, 1).over(a)
    f = qpoch_infinite(qa, order) ** 2
    f = f * qpoch_infinite_inv(Q1, order)
    f = f * qpoch_infinite_inv(mono(1, 1).over(a.times(a)), order)
    f = f * multc_rhs_prefactor(params["levels"], order)
    return f.scale(g.total())


_MULTCC_G = FiniteSeq(((-2, rational(1, 2)), (0, rational(1)), (1, rational(-2))))

register(
    IdentityStatement(
        id="multcc",
        description="nested multi-sum transformation with a bilateral innermost index",
        anchor="bilateral iterated q-Gauss multi-sum transformation",
        backends=frozenset({"exact"}),
        slots=("levels", "a", "g"),
        default_instances=(
            DefaultInstance.of("exact", levels=(), a=mono(2), g=_MULTCC_G),
            DefaultInstance.of("exact", levels=(_MULTC_L1,), a=mono(2), g=_MULTCC_G),
        ),
        check_domain=_multcc_check,
        lhs_exact=_multcc_lhs_exact,
        rhs_exact=_multcc_rhs_exact,
        multisum_spec=lambda params, order: multcc_spec(
            params["levels"], params["a"], params["g"], order
        ),
    )
)


# ---------------------------------------------------------------------------
# finite-product corollary (terminating iff n_1 >= n_2 >= ... >= n_k)
# ---------------------------------------------------------------------------


def falling_q_poch(N: int, d: int, order: int):
    """(q^{-N};q)_d rewritten with nonnegative powers:
    (-1)^d q^{d(d-1)/2 - N d} (q^{N-d+1};q)_d; returns (series, power_offset)
    with the negative power carried separately, and zero for d > N."""
    if d > N:
        return QSeries.zero(order), 0
    e = d * (d - 1) // 2 - N * d
    f = qpoch_finite(mono(1, N - d + 1), d, order)
    return (f if d % 2 == 0 else -f), e


def _multcfin_level(nj: int, b: Monomial, c: Monomial, order: int):
    cb = c.over(b)

    def factor(mj: int, mnext: int) -> QSeries:
        d = mj - mnext
        epow = (c.m + nj) * d
        rr = (c.r / b.r) ** d
        if mnext >= nj:
            base = qpoch_finite(mono(1, mnext - nj), d, order)
        else:
            base, eoff = falling_q_poch(nj - mnext, d, order)
            epow += eoff
        if base.is_zero or epow > order:
            return QSeries.zero(order)
        f = base * qpoch_finite(b, d, order)
        f = f * qpoch_finite(cb, mnext, order)
        f = f * qpoch_finite_inv(c, mj, order)
        f = f * qpoch_finite_inv(Q1, d, order)
        return f.shift(epow).scale(rr)

    return factor


def _multcfin_inner(nk: int, b: Monomial, c: Monomial, order: int) -> TermGenerator:
    def term(m: int) -> QSeries:
        base, eoff = falling_q_poch(nk, m, order)
        epow = (c.m + nk) * m + eoff
        if base.is_zero or epow > order:
            return QSeries.zero(order)
        f = base * qpoch_finite(b, m, order)
        f = f * qpoch_finite_inv(c, m, order)
        f = f * qpoch_finite_inv(Q1, m, order)
        return f.shift(epow).scale((c.r / b.r) ** m)

    return TermGenerator(term, lambda m: m, support_hint=frozenset(range(nk + 1)))


def _multcfin_spec(params, order):
    nvec, bvec, cvec = params["n"], params["b"], params["c"]
    k = len(nvec)
    factors = [_multcfin_level(nvec[j], bvec[j], cvec[j], order) for j in range(k - 1)]

    def bound(idx):
        e = idx.entries
        return sum(e[j] - e[j + 1] for j in range(len(e) - 1)) + e[-1]

    return MultiTermSpec(
        depth=k - 1,
        level_factor=lambda j, mj, mnext: factors[j - 1](mj, mnext),
        inner=_multcfin_inner(nvec[-1], bvec[-1], cvec[-1], order),
        val_bound=bound,
    )


def _multcfin_check(params, backend):
    nvec, bvec, cvec = params["n"], params["b"], params["c"]
    need(isinstance(nvec, tuple) and len(nvec) >= 1, "n must be a tuple of positive integers")
    need(all(isinstance(x, int) and x >= 1 for x in nvec), "n_j >= 1")
    need(len(bvec) == len(nvec) and len(cvec) == len(nvec), "b, c match n in length")
    for b in bvec:
        need(isinstance(b, Monomial) and b.m == 0 and b.r not in (0, 1), "b_j plain rational, not in {0,1}")
    for c in cvec:
        need(isinstance(c, Monomial) and c.m >= 1, "val(c_j) >= 1")


def _multcfin_lhs_exact(params, order):
    return multisum_ordered(_multcfin_spec(params, order), order)


def _multcfin_rhs_exact(params, order):
    nvec, bvec, cvec = params["n"], params["b"], params["c"]
    out = QSeries.one(order)
    for nj, b, c in zip(nvec, bvec, cvec):
        out = out * qpoch_finite(c.over(b), nj, order)
        out = out * qpoch_finite_inv(c, nj, order)
    return out


def multcfin_nonzero_tuples(nvec, m1_cap: int):
    """All ordered tuples with structurally nonzero terms, m_1 <= m1_cap.

    A term vanishes iff m_k > n_k or some level has m_{j+1} <= n_j < m_j;
    the multi-sum terminates exactly when this set is finite.
    """
    import itertools

    k = len(nvec)
    out = []
    for tup in itertools.product(range(m1_cap + 1), repeat=k):
        if any(tup[i] < tup[i + 1] for i in range(k - 1)):
            continue
        if tup[-1] > nvec[-1]:
            continue
        if any(tup[j + 1] <= nvec[j] < tup[j] for j in range(k - 1)):
            continue
        out.append(tup)
    return out


register(
    IdentityStatement(
        id="multcfin",
        description="finite-product specialization; terminates iff n_1 >= ... >= n_k",
        anchor="finite q-product multi-sum evaluation",
        backends=frozenset({"exact"}),
        slots=("n", "b", "c"),
        default_instances=(
            DefaultInstance.of("exact", n=(3, 2), b=(mono(2), mono(3)), c=(mono(1, 1), mono(1, 1))),
            DefaultInstance.of("exact", n=(2, 3), b=(mono(2), mono(3)), c=(mono(1, 1), mono(1, 1))),
        ),
        check_domain=_multcfin_check,
        lhs_exact=_multcfin_lhs_exact,
        rhs_exact=_multcfin_rhs_exact,
        multisum_spec=_multcfin_spec,
    )
)


# ---------------------------------------------------------------------------
# re-indexed infinite-product corollaries (numeric)
# ---------------------------------------------------------------------------


def _multcinf_check(params, backend):
    q = params["q"]
    need(abs(rational(q)) < 1, "|q| < 1")
    xs, ys = params["x"], params["y"]
    azs = params["a"] if "a" in params and isinstance(params["a"], tuple) else None
    k = len(xs)
    need(len(ys) == k, "x, y match in length")
    avals = azs if azs is not None else (params["a"],) * k
    for xj, yj, aj in zip(xs, ys, avals):
        need(abs(rational(yj) / rational(aj)) < 1, "|y_j/a_j| < 1")
        need(abs(rational(xj)) < 1, "|x_j| < 1")


def _multcinf_lhs_numeric(params, digits):
    q = as_mpc(params["q"])
    xs = [as_mpc(x) for x in params["x"]]
    ys = [as_mpc(y) for y in params["y"]]
    a_par = params["a"]
    avals = [as_mpc(a) for a in a_par] if isinstance(a_par, tuple) else [as_mpc(a_par)] * len(xs)
    shared_a = not isinstance(a_par, tuple)
    k = len(xs)
    t = PochTable(q)

    def term(mvec):
        Ms = [sum(mvec[i:]) for i in range(k)] + [0]
        out = mp.mpc(1)
        if shared_a:
            out *= npoch(t, avals[0], Ms[0])
        for j in range(k):
            if not shared_a:
                out *= npoch(t, avals[j], Ms[j]) / npoch(t, avals[j], Ms[j + 1])
            out *= npoch(t, ys[j], Ms[j + 1]) * npoch(t, xs[j] / ys[j], mvec[j])
            out /= npoch(t, xs[j], Ms[j]) * npoch(t, q, mvec[j])
            out *= (ys[j] / avals[j]) ** mvec[j]
        return out

    def level(j, prefix):
        if j == k:
            return term(prefix)
        return nsum(lambda m: level(j + 1, prefix + (m,)), digits=digits).value.value

    return level(0, ())


def _multcinf_rhs_numeric(params, digits):
    q = as_mpc(params["q"])
    xs = [as_mpc(x) for x in params["x"]]
    ys = [as_mpc(y) for y in params["y"]]
    a_par = params["a"]
    avals = [as_mpc(a) for a in a_par] if isinstance(a_par, tuple) else [as_mpc(a_par)] * len(xs)
    t = PochTable(q)
    pol = default_policy(digits)
    out = mp.mpc(1)
    for xj, yj, aj in zip(xs, ys, avals):
        out *= t.inf(xj / aj, pol) * t.inf(yj, pol) / (t.inf(xj, pol) * t.inf(yj / aj, pol))
    return out


register(
    IdentityStatement(
        id="multcinf",
        description="independent-index multi-sum equal to a quotient of infinite products",
        anchor="multi-sum q-product summation (independent indices)",
        backends=frozenset({"numeric"}),
        slots=("a", "x", "y", "q"),
        default_instances=(
            DefaultInstance.of(
                "numeric",
                a=(rational(2), rational(3)),
                x=(rational(1, 2), rational(1, 3)),
                y=(rational(1, 4), rational(1, 7)),
                q=rational(1, 5),
            ),
        ),
        check_domain=_multcinf_check,
        lhs_numeric=_multcinf_lhs_numeric,
        rhs_numeric=_multcinf_rhs_numeric,
    )
)

register(
    IdentityStatement(
        id="multcinf2",
        description="equal-parameter case of the independent-index multi-sum product formula",
        anchor="Chu's multi-sum q-product summation",
        backends=frozenset({"numeric"}),
        slots=("a", "x", "y", "q"),
        default_instances=(
            DefaultInstance.of(
                "numeric",
                a=rational(2),
                x=(rational(1, 2), rational(1, 3)),
                y=(rational(1, 4), rational(1, 7)),
                q=rational(1, 5),
            ),
        ),
        check_domain=_multcinf_check,
        lhs_numeric=_multcinf_lhs_numeric,
        rhs_numeric=_multcinf_rhs_numeric,
    )
)


def _multcinf3_check(params, backend):
    xs = params["x"]
    need(isinstance(xs, tuple) and xs, "x must be a nonempty tuple of monomials")
    for x in xs:
        need(isinstance(x, Monomial) and x.m >= 1, "val(x_j) >= 1")


def _multcinf3_grid(params, order):
    xs = params["x"]
    k = len(xs)

    def term(mvec):
        M1 = sum(mvec)
        e = M1 * (M1 - 1) // 2
        r = rational(1)
        for j, x in enumerate(xs):
            Mj = sum(mvec[j:])
            e += x.m * mvec[j] + mvec[j] * (mvec[j] - 1) // 2
            r *= x.r ** mvec[j]
        if e > order:
            return QSeries.zero(order)
        f = qmon(r, e, order)
        for j, x in enumerate(xs):
            Mj = sum(mvec[j:])
            f = f * qpoch_finite_inv(x, Mj, order)
            f = f * qpoch_finite_inv(Q1, mvec[j], order)
        return f

    def bound(prefix):
        S = sum(prefix)
        return S * (S - 1) // 2 + sum(
            xs[j].m * prefix[j] + prefix[j] * (prefix[j] - 1) // 2 for j in range(len(prefix))
        )

    return GridTermSpec(arity=k, term=term, prefix_bound=bound)


def _multcinf3_lhs_exact(params, order):
    return gridsum(_multcinf3_grid(params, order), order)


def _multcinf3_rhs_exact(params, order):
    out = QSeries.one(order)
    for x in params["x"]:
        out = out * qpoch_infinite_inv(x, order)
    return out


register(
    IdentityStatement(
        id="multcinf3",
        description="multi-sum form of the Euler product 1/prod (x_j;q)_inf",
        anchor="Euler-product multi-sum (Chu / Milne form)",
        backends=frozenset({"exact"}),
        slots=("x",),
        default_instances=(
            DefaultInstance.of("exact", x=(mono(1, 1),)),
            DefaultInstance.of("exact", x=(mono(1, 1), mono(1, 2))),
            DefaultInstance.of("exact", x=(mono(1, 1), mono(1, 2), mono(1, 3))),
        ),
        check_domain=_multcinf3_check,
        lhs_exact=_multcinf3_lhs_exact,
        rhs_exact=_multcinf3_rhs_exact,
        box_spec=_multcinf3_grid,
    )
)


# ---------------------------------------------------------------------------
# limit corollaries with free c_j (exact, finite-support g)
# ---------------------------------------------------------------------------


def _mseq1_level(c: Monomial, order: int):
    def factor(mj: int, mnext: int) -> QSeries:
        d = mj - mnext
        e = d * (mj - 1) + c.m * d
        if e > order:
            return QSeries.zero(order)
        f = qpoch_finite_inv(c, mj, order) * qpoch_finite_inv(Q1, d, order)
        return f.shift(e).scale(c.r**d)

    return factor


def _mseq1_spec(params, order):
    cs, g = params["c"], params["g"]
    factors = [_mseq1_level(c, order) for c in cs]
    supp = g.support

    def bound(idx):
        e = idx.entries
        total = 0 if e[-1] in supp else FAR
        for j in range(len(e) - 1):
            d = e[j] - e[j + 1]
            total += d * (e[j] - 1) + cs[j].m * d
        return total

    return MultiTermSpec(
        depth=len(cs),
        level_factor=lambda j, mj, mnext: factors[j - 1](mj, mnext),
        inner=finite_inner_gen(g, order),
        val_bound=bound,
    )


def _mseq1_check(params, backend):
    cs = params["c"]
    need(isinstance(cs, tuple) and cs, "c must be a nonempty tuple of monomials")
    for c in cs:
        need(isinstance(c, Monomial) and c.m >= 1, "val(c_j) >= 1")
    finite_seq(params, "g", bilateral=False)


def _mseq1_lhs_exact(params, order):
    return multisum_ordered(_mseq1_spec(params, order), order)


def _mseq1_rhs_exact(params, order):
    out = QSeries.one(order)
    for c in params["c"]:
        out = out * qpoch_infinite_inv(c, order)
    return out.scale(params["g"].total())


register(
    IdentityStatement(
        id="mseq1",
        description="multi-sum transformation after sending all a_j, b_j to infinity",
        anchor="limit form of the iterated multi-sum transformation",
        backends=frozenset({"exact"}),
        slots=("c", "g"),
        default_instances=(
            DefaultInstance.of(
                "exact",
                c=(mono(1, 1), mono(1, 2)),
                g=FiniteSeq(((0, rational(1)), (1, rational(1, 4)), (2, rational(-3)))),
            ),
        ),
        check_domain=_mseq1_check,
        lhs_exact=_mseq1_lhs_exact,
        rhs_exact=_mseq1_rhs_exact,
        multisum_spec=_mseq1_spec,
    )
)


def _mseq111_spec(params, order):
    cs, g = params["c"], params["g"]
    factors = [_mseq1_level(c, order) for c in cs]
    supp = g.support
    k = len(cs) + 1

    def last(mk, mk1):
        d = mk - mk1
        e = mk * d
        if e > order:
            return QSeries.zero(order)
        f = qpoch_finite_inv(Q1, mk, order) * qpoch_finite_inv(Q1, d, order)
        return f.shift(e)

    def factor(j, mj, mnext):
        return factors[j - 1](mj, mnext) if j < k else last(mj, mnext)

    def bound(idx):
        e = idx.entries
        total = 0 if e[-1] in supp else FAR
        for j in range(len(e) - 2):
            d = e[j] - e[j + 1]
            total += d * (e[j] - 1) + cs[j].m * d
        total += e[-2] * (e[-2] - e[-1])
        return total

    return MultiTermSpec(
        depth=k,
        level_factor=factor,
        inner=finite_inner_gen(g, order),
        val_bound=bound,
        mode="bilateral",
    )


def _mseq111_check(params, backend):
    cs = params["c"]
    need(isinstance(cs, tuple), "c must be a tuple of monomials")
    for c in cs:
        need(isinstance(c, Monomial) and c.m >= 1, "val(c_j) >= 1")
    finite_seq(params, "g", bilateral=True)


def _mseq111_lhs_exact(params, order):
    return multisum_bilateral_inner(_mseq111_spec(params, order), order)


def _mseq111_rhs_exact(params, order):
    out = qpoch_infinite_inv(Q1, order)
    for c in params["c"]:
        out = out * qpoch_infinite_inv(c, order)
    return out.scale(params["g"].total())


register(
    IdentityStatement(
        id="mseq111",
        description="bilateral-inner multi-sum limit transformation",
        anchor="bilateral limit form of the iterated multi-sum transformation",
        backends=frozenset({"exact"}),
        slots=("c", "g"),
        default_instances=(
            DefaultInstance.of(
                "exact",
                c=(mono(1, 1),),
                g=FiniteSeq(((-2, rational(1, 2)), (0, rational(1)), (1, rational(-2)))),
            ),
        ),
        check_domain=_mseq111_check,
        lhs_exact=_mseq111_lhs_exact,
        rhs_exact=_mseq111_rhs_exact,
        multisum_spec=_mseq111_spec,
    )
)


# ---------------------------------------------------------------------------
# the partition-power family and its modular companion
# ---------------------------------------------------------------------------


def _mseq10_spec(params, order):
    k = params["k"]

    def level(j, mj, mnext):
        d = mj - mnext
        e = mj * d
        if e > order:
            return QSeries.zero(order)
        f = qpoch_finite_inv(Q1, mj, order) * qpoch_finite_inv(Q1, d, order)
        return f.shift(e)

    def inner_term(t):
        if t * t > order:
            return QSeries.zero(order)
        f = qpoch_finite_inv(Q1, t, order)
        return (f * f).shift(t * t)

    def bound(idx):
        e = idx.entries
        return e[-1] ** 2 + sum(e[j] * (e[j] - e[j + 1]) for j in range(len(e) - 1))

    return MultiTermSpec(
        depth=k - 1,
        level_factor=level,
        inner=TermGenerator(inner_term, lambda t: t * t),
        val_bound=bound,
    )


def _mseq10_lhs_exact(params, order):
    return multisum_ordered(_mseq10_spec(params, order), order)


def _mseq10_rhs_exact(params, order):
    return qpoch_infinite_inv(Q1, order) ** params["k"]


register(
    IdentityStatement(
        id="mseq10",
        description="k-fold partition generating function as an ordered multi-sum",
        anchor="multi-sum embedding of Jacobi's partition identity",
        backends=frozenset({"exact"}),
        slots=("k",),
        default_instances=(
            DefaultInstance.of("exact", k=1),
            DefaultInstance.of("exact", k=2),
            DefaultInstance.of("exact", k=3),
        ),
        check_domain=lambda p, b: need_int(p, "k", lo=1) and None,
        lhs_exact=_mseq10_lhs_exact,
        rhs_exact=_mseq10_rhs_exact,
        multisum_spec=_mseq10_spec,
    )
)


def _mseq102_spec(params, order):
    k = params["k"]

    def level(j, mj, mnext):
        d = mj - mnext
        e = d * (k * mj - k + j)
        if e > order:
            return QSeries.zero(order)
        f = qpoch_finite_inv(mono(1, k), d, order, base=k)
        f = f * qpoch_finite_inv(mono(1, j), mj, order, base=k)
        return f.shift(e)

    def inner_term(t):
        e = k * t * t
        if e > order:
            return QSeries.zero(order)
        f = qpoch_finite_inv(mono(1, k), t, order, base=k)
        return (f * f).shift(e)

    def bound(idx):
        e = idx.entries
        total = k * e[-1] ** 2
        for j in range(len(e) - 1):
            d = e[j] - e[j + 1]
            total += d * (k * e[j] - k + (j + 1))
        return total

    return MultiTermSpec(
        depth=k - 1,
        level_factor=level,
        inner=TermGenerator(inner_term, lambda t: k * t * t),
        val_bound=bound,
    )


def _mseq102_lhs_exact(params, order):
    return multisum_ordered(_mseq102_spec(params, order), order)


register(
    IdentityStatement(
        id="mseq102",
        description="k-modular multi-sum form of the partition generating function",
        anchor="k-modular multi-sum embedding of Jacobi's partition identity",
        backends=frozenset({"exact"}),
        slots=("k",),
        default_instances=(DefaultInstance.of("exact", k=2), DefaultInstance.of("exact", k=3)),
        check_domain=lambda p, b: need_int(p, "k", lo=1) and None,
        lhs_exact=_mseq102_lhs_exact,
        rhs_exact=lambda params, order: qpoch_infinite_inv(Q1, order),
        multisum_spec=_mseq102_spec,
    )
)


def _theta_gen(p: int, i: int, order: int) -> TermGenerator:
    def val(t):
        return p * (t * t + t) // 2 - i * t

    def term(t):
        e = val(t)
        return qmon(-1 if t % 2 else 1, e, order)

    return TermGenerator(term, val)


def _mseq103_spec(params, order):
    k, p, i = params["k"], params["p"], params["i"]

    def level(j, mj, mnext):
        d = mj - mnext
        e = d * (k * mj - k + j) if j < k else k * mj * d
        if e > order:
            return QSeries.zero(order)
        f = qpoch_finite_inv(mono(1, k), d, order, base=k)
        f = f * qpoch_finite_inv(mono(1, j if j < k else k), mj, order, base=k)
        return f.shift(e)

    def bound(idx):
        e = idx.entries
        total = p * (e[-1] ** 2 + e[-1]) // 2 - i * e[-1]
        for j in range(len(e) - 1):
            d = e[j] - e[j + 1]
            total += d * (k * e[j] - k + (j + 1)) if j + 1 < k else k * e[j] * d
        return total

    return MultiTermSpec(
        depth=k,
        level_factor=level,
        inner=_theta_gen(p, i, order),
        val_bound=bound,
        mode="bilateral",
    )


def _mseq103_check(params, backend):
    k = need_int(params, "k", lo=1)
    p = need_int(params, "p", lo=3)
    i = need_int(params, "i", lo=1)
    need(2 * i <= p, "i <= p/2")


def _mseq103_rhs_exact(params, order):
    p, i = params["p"], params["i"]
    f = qpoch_infinite(mono(1, i), order, base=p)
    f = f * qpoch_infinite(mono(1, p - i), order, base=p)
    f = f * qpoch_infinite(mono(1, p), order, base=p)
    return f * qpoch_infinite_inv(Q1, order)


register(
    IdentityStatement(
        id="mseq103",
        description="bilateral multi-sum with theta inner sequence, product side of Andrews-Gordon type",
        anchor="theta-kernel bilateral multi-sum with Andrews-Gordon product side",
        backends=frozenset({"exact"}),
        slots=("k", "p", "i"),
        default_instances=(
            DefaultInstance.of("exact", k=1, p=5, i=1),
            DefaultInstance.of("exact", k=1, p=5, i=2),
            DefaultInstance.of("exact", k=2, p=7, i=2),
            DefaultInstance.of("exact", k=1, p=7, i=3),
        ),
        check_domain=_mseq103_check,
        lhs_exact=lambda params, order: multisum_bilateral_inner(_mseq103_spec(params, order), order),
        rhs_exact=_mseq103_rhs_exact,
        multisum_spec=_mseq103_spec,
    )
)


def _multcr_spec(params, order):
    levels = params["levels"]
    factors = [multc_level_factor(a, b, c, order) for a, b, c in levels]
    xvals = [c.over(a.times(b)).m for a, b, c in levels]

    def inner_term(t):
        if t * t > order:
            return QSeries.zero(order)
        return qpoch_finite_inv(Q1, t, order).shift(t * t)

    def bound(idx):
        e = idx.entries
        total = e[-1] ** 2
        for j in range(len(e) - 1):
            total += xvals[j] * (e[j] - e[j + 1])
        return total

    return MultiTermSpec(
        depth=len(levels),
        level_factor=lambda j, mj, mnext: factors[j - 1](mj, mnext),
        inner=TermGenerator(inner_term, lambda t: t * t),
        val_bound=bound,
    )


def _multcr_rhs_exact(params, order):
    f = multc_rhs_prefactor(params["levels"], order)
    f = f * qpoch_infinite_inv(mono(1, 1), order, base=5)
    f = f * qpoch_infinite_inv(mono(1, 4), order, base=5)
    return f


register(
    IdentityStatement(
        id="multcr",
        description="multi-sum with Rogers-Ramanujan inner kernel",
        anchor="multi-sum transformation fed with the first Rogers-Ramanujan series",
        backends=frozenset({"exact"}),
        slots=("levels",),
        default_instances=(
            DefaultInstance.of("exact", levels=(_MULTC_L1,)),
            DefaultInstance.of("exact", levels=(_MULTC_L1, _MULTC_L2)),
        ),
        check_domain=lambda p, b: check_multc_levels(p["levels"], b),
        lhs_exact=lambda params, order: multisum_ordered(_multcr_spec(params, order), order),
        rhs_exact=_multcr_rhs_exact,
        multisum_spec=_multcr_spec,
    )
)


# ---------------------------------------------------------------------------
# single sums: Jacobi, Rogers-Ramanujan, Cauchy, q-binomial special case
# ---------------------------------------------------------------------------


def _jacobi_lhs(params, order):
    def term(n):
        if n * n > order:
            return QSeries.zero(order)
        f = qpoch_finite_inv(Q1, n, order)
        return (f * f).shift(n * n)

    return sum_unilateral(TermGenerator(term, lambda n: n * n), order)


register(
    IdentityStatement(
        id="jacobi_id",
        description="sum q^{n^2}/(q;q)_n^2 equals the partition generating function",
        anchor="Jacobi's partition identity",
        backends=frozenset({"exact"}),
        slots=(),
        default_instances=(DefaultInstance.of("exact"),),
        check_domain=lambda p, b: None,
        lhs_exact=_jacobi_lhs,
        rhs_exact=lambda params, order: qpoch_infinite_inv(Q1, order),
    )
)


def _rr1_lhs(params, order):
    def term(n):
        if n * n > order:
            return QSeries.zero(order)
        return qpoch_finite_inv(Q1, n, order).shift(n * n)

    return sum_unilateral(TermGenerator(term, lambda n: n * n), order)


def _rr1_rhs(params, order):
    return qpoch_infinite_inv(mono(1, 1), order, base=5) * qpoch_infinite_inv(mono(1, 4), order, base=5)


register(
    IdentityStatement(
        id="rr1",
        description="first Rogers-Ramanujan identity",
        anchor="first Rogers-Ramanujan identity",
        backends=frozenset({"exact"}),
        slots=(),
        default_instances=(DefaultInstance.of("exact"),),
        check_domain=lambda p, b: None,
        lhs_exact=_rr1_lhs,
        rhs_exact=_rr1_rhs,
    )
)


def _cauchy_check(params, backend):
    z = params["z"]
    need(isinstance(z, Monomial), "z must be an exact monomial")
    need(z.is_zero or z.m >= 0, "val(z) >= 0")


def _cauchy_lhs(params, order):
    z = params["z"]
    zq = Monomial(z.r, z.m + 1) if not z.is_zero else z

    def term(n):
        e = n * n + z.m * n
        if e > order:
            return QSeries.zero(order)
        f = qpoch_finite_inv(Q1, n, order) * qpoch_finite_inv(zq, n, order)
        return f.shift(e).scale(z.r**n)

    return sum_unilateral(TermGenerator(term, lambda n: n * n + z.m * n), order)


def _cauchy_rhs(params, order):
    z = params["z"]
    zq = Monomial(z.r, z.m + 1) if not z.is_zero else z
    return qpoch_infinite_inv(zq, order)


register(
    IdentityStatement(
        id="cauchy",
        description="Cauchy's identity: sum q^{n^2} z^n / ((q;q)_n (zq;q)_n) = 1/(zq;q)_inf",
        anchor="Cauchy's identity",
        backends=frozenset({"exact"}),
        slots=("z",),
        default_instances=(
            DefaultInstance.of("exact", z=mono(1)),
            DefaultInstance.of("exact", z=mono(1, 1)),
        ),
        check_domain=_cauchy_check,
        lhs_exact=_cauchy_lhs,
        rhs_exact=_cauchy_rhs,
    )
)


def _aceq_check(params, backend):
    need_int(params, "k", lo=2)
    _cauchy_check(params, backend)


def _aceq_grid(params, order):
    k, z = params["k"], params["z"]
    zq = Monomial(z.r, z.m + 1) if not z.is_zero else z
    arity = k - 1

    def term(nvec):
        Ns = [sum(nvec[i:]) for i in range(arity)]
        e = sum(N * N for N in Ns) + z.m * sum(Ns)
        if e > order:
            return QSeries.zero(order)
        f = qmon(z.r ** sum(Ns), e, order)
        for n in nvec:
            f = f * qpoch_finite_inv(Q1, n, order)
        return f * qpoch_finite_inv(zq, nvec[-1], order)

    def bound(prefix):
        return sum(prefix) ** 2

    return GridTermSpec(arity=arity, term=term, prefix_bound=bound)


register(
    IdentityStatement(
        id="aceq",
        description="multi-sum generalization of Cauchy's identity (independent indices)",
        anchor="Andrews' multi-sum Cauchy identity",
        backends=frozenset({"exact"}),
        slots=("k", "z"),
        default_instances=(
            DefaultInstance.of("exact", k=2, z=mono(1)),
            DefaultInstance.of("exact", k=3, z=mono(1)),
        ),
        check_domain=_aceq_check,
        lhs_exact=lambda params, order: gridsum(_aceq_grid(params, order), order),
        rhs_exact=_cauchy_rhs,
        box_spec=_aceq_grid,
    )
)


def _qbinom_check(params, backend):
    x = params["x"]
    need(isinstance(x, Monomial), "x must be an exact monomial")
    need(x.is_zero or x.m >= 0, "val(x) >= 0")


def _qbinom_lhs(params, order):
    x = params["x"]

    def term(n):
        e = n * (n + 1) // 2 + x.m * n
        if e > order:
            return QSeries.zero(order)
        return qpoch_finite_inv(Q1, n, order).shift(e).scale(x.r**n)

    return sum_unilateral(TermGenerator(term, lambda n: n * (n + 1) // 2 + x.m * n), order)


def _qbinom_rhs(params, order):
    x = params["x"]
    if x.is_zero:
        return QSeries.one(order)
    return qpoch_infinite(Monomial(-x.r, x.m + 1), order)


register(
    IdentityStatement(
        id="qbinom_special",
        description="sum q^{n(n+1)/2} x^n/(q;q)_n = (-xq;q)_inf",
        anchor="q-binomial theorem, exponential special case",
        backends=frozenset({"exact"}),
        slots=("x",),
        default_instances=(
            DefaultInstance.of("exact", x=mono(1)),
            DefaultInstance.of("exact", x=mono(1, 1)),
            DefaultInstance.of("exact", x=mono("-2/3")),
        ),
        check_domain=_qbinom_check,
        lhs_exact=_qbinom_lhs,
        rhs_exact=_qbinom_rhs,
    )
)


# ---------------------------------------------------------------------------
# Andrews-Gordon family
# ---------------------------------------------------------------------------


def _ag_check(params, backend):
    k = need_int(params, "k", lo=2)
    i = need_int(params, "i", lo=1)
    need(i <= k, "i <= k")


def _ag_spec(params, order):
    k, i = params["k"], params["i"]

    def level(j, mj, mnext):
        d = mj - mnext
        e = mj * mj + (mj if j >= i else 0)
        if e > order:
            return QSeries.zero(order)
        return qpoch_finite_inv(Q1, d, order).shift(e)

    def inner_term(t):
        e = t * t + (t if k - 1 >= i else 0)
        if e > order:
            return QSeries.zero(order)
        return qpoch_finite_inv(Q1, t, order).shift(e)

    def bound(idx):
        return sum(x * x for x in idx.entries)

    return MultiTermSpec(
        depth=k - 2,
        level_factor=level,
        inner=TermGenerator(inner_term, lambda t: t * t),
        val_bound=bound,
    )


def _ag_rhs(params, order):
    k, i = params["k"], params["i"]
    P = 2 * k + 1
    f = qpoch_infinite(mono(1, i), order, base=P)
    f = f * qpoch_infinite(mono(1, P - i), order, base=P)
    f = f * qpoch_infinite(mono(1, P), order, base=P)
    return f * qpoch_infinite_inv(Q1, order)


register(
    IdentityStatement(
        id="andrews_gordon",
        description="Andrews-Gordon multi-sum identities (k=2 gives Rogers-Ramanujan)",
        anchor="Andrews-Gordon identities",
        backends=frozenset({"exact"}),
        slots=("k", "i"),
        default_instances=(
            DefaultInstance.of("exact", k=2, i=1),
            DefaultInstance.of("exact", k=2, i=2),
            DefaultInstance.of("exact", k=3, i=1),
            DefaultInstance.of("exact", k=3, i=3),
        ),
        check_domain=_ag_check,
        lhs_exact=lambda params, order: multisum_ordered(_ag_spec(params, order), order),
        rhs_exact=_ag_rhs,
        multisum_spec=_ag_spec,
    )
)


# ---------------------------------------------------------------------------
# triple products and theta sums
# ---------------------------------------------------------------------------


def _jtp_window(order: int):
    s = math.isqrt(order)
    if s * s < order:
        s += 1
    w = s + 1
    return (-w, w)


def _jtp_check(params, backend):
    z = params["z"]
    if z == "formal":
        return
    need(isinstance(z, Monomial), "z must be 'formal' or an exact monomial")
    need(not z.is_zero, "z != 0")
    need(0 <= z.m <= 1, "val(z) in {0, 1}")


def _jtp_lhs(params, order):
    z = params["z"]
    if z == "formal":
        w = _jtp_window(order)

        def term(n):
            if n * n > order:
                return ZLaurentSeries.zero(order, w)
            return ZLaurentSeries.monomial(1, n * n, n, order, w)

        return sum_bilateral(TermGenerator(term, lambda n: n * n), order)

    def term(n):
        e = n * n + z.m * n
        return qmon(z.r**n, e, order)

    return sum_bilateral(TermGenerator(term, lambda n: n * n + z.m * n), order)


def _jtp_rhs(params, order):
    z = params["z"]
    if z == "formal":
        w = _jtp_window(order)
        f = zpoch_infinite(-1, 1, 1, order, w, base=2)
        f = f * zpoch_infinite(-1, 1, -1, order, w, base=2)
        return f * ZLaurentSeries.from_qseries(qpoch_infinite(mono(1, 2), order, base=2), w)
    f = qpoch_infinite(Monomial(-z.r, 1 + z.m), order, base=2)
    f = f * qpoch_infinite(Monomial(rational(-1) / z.r, 1 - z.m), order, base=2)
    return f * qpoch_infinite(mono(1, 2), order, base=2)


register(
    IdentityStatement(
        id="jacobi_triple_product",
        description="theta sum equals triple product, formal z or z = r*q^m",
        anchor="Jacobi triple product",
        backends=frozenset({"exact"}),
        slots=("z",),
        default_instances=(
            DefaultInstance.of("exact", z="formal"),
            DefaultInstance.of("exact", z=mono(1)),
            DefaultInstance.of("exact", z=mono(-1)),
            DefaultInstance.of("exact", z=mono(1, 1)),
        ),
        check_domain=_jtp_check,
        lhs_exact=_jtp_lhs,
        rhs_exact=_jtp_rhs,
    )
)


# ---------------------------------------------------------------------------
# double-sum corollaries of the bilateral transformation
# ---------------------------------------------------------------------------


def _tc1_term(g: FiniteSeq, order: int, m: int, n: int) -> QSeries:
    gv = g.value(m - n)
    if gv == 0 or m * n > order:
        return QSeries.zero(order)
    f = qpoch_finite_inv(Q1, m, order) * qpoch_finite_inv(Q1, n, order)
    return f.shift(m * n).scale(gv)


def _tc1_lhs(params, order):
    g = params["g"]
    acc = QSeries.zero(order)
    for k in sorted(g.support):
        n0 = max(0, -k)

        def term(i, k=k, n0=n0):
            return _tc1_term(g, order, n0 + i + k, n0 + i)

        acc = acc + sum_unilateral(
            TermGenerator(term, lambda i, k=k, n0=n0: (n0 + i) * (n0 + i + k)), order
        )
    return acc


def _tc1_rhs(params, order):
    return qpoch_infinite_inv(Q1, order).scale(params["g"].total())


register(
    IdentityStatement(
        id="tc1_eq2",
        description="sum q^{mn} g(m-n)/((q;q)_m (q;q)_n) = (sum g)/(q;q)_inf",
        anchor="limit case of the bilateral double-sum transformation",
        backends=frozenset({"exact"}),
        slots=("g",),
        default_instances=(
            DefaultInstance.of(
                "exact",
                g=FiniteSeq(((-1, rational(2)), (0, rational(-1, 2)), (2, rational(1, 3)))),
            ),
        ),
        check_domain=lambda p, b: finite_seq(p, "g", bilateral=True) and None,
        lhs_exact=_tc1_lhs,
        rhs_exact=_tc1_rhs,
        box_spec=lambda params, order: GridTermSpec(
            arity=2,
            term=lambda mn: _tc1_term(params["g"], order, mn[0], mn[1]),
            prefix_bound=lambda p: 0,
        ),
    )
)


def _theta_series(r, s: int, order: int) -> QSeries:
    """sum over all integers of r^n q^{n^2 + s n} (s in {0,1})."""
    return sum_bilateral(
        TermGenerator(
            term=lambda n: qmon(rational(r) ** n, n * n + s * n, order),
            valuation_bound=lambda n: n * n + s * n,
        ),
        order,
    )


def _pak_check(params, backend):
    z = params["z"]
    need(isinstance(z, Monomial), "z must be an exact monomial")
    need(not z.is_zero, "z != 0")
    need(0 <= z.m <= 1, "val(z) in {0, 1}")


def _pak_grid(params, order):
    z = params["z"]
    s = z.m

    def term(mn):
        m, n = mn
        e = m * m - m * n + n * n + s * (m - n)
        if e > order:
            return QSeries.zero(order)
        f = qpoch_finite_inv(Q1, m, order) * qpoch_finite_inv(Q1, n, order)
        return f.shift(e).scale(z.r ** (m - n))

    def bound(prefix):
        if len(prefix) == 1:
            return max(0, (3 * prefix[0] * prefix[0]) // 4 - 1)
        m, n = prefix
        return max(0, (m * m + n * n) // 2 - (n if s else 0))

    return GridTermSpec(arity=2, term=term, prefix_bound=bound)


def _pak_lhs(params, order):
    return gridsum(_pak_grid(params, order), order)


def _pak_rhs(params, order):
    z = params["z"]
    return qpoch_infinite_inv(Q1, order) * _theta_series(z.r, z.m, order)


register(
    IdentityStatement(
        id="pak_eq1",
        description="quadratic-form double sum equals theta over (q;q)_inf",
        anchor="double-sum theta identity (Pak's survey, problem 2.3.2)",
        backends=frozenset({"exact"}),
        slots=("z",),
        default_instances=(
            DefaultInstance.of("exact", z=mono(1)),
            DefaultInstance.of("exact", z=mono(1, 1)),
            DefaultInstance.of("exact", z=mono(2)),
        ),
        check_domain=_pak_check,
        lhs_exact=_pak_lhs,
        rhs_exact=_pak_rhs,
        box_spec=_pak_grid,
    )
)


def _c1_rhs(params, order):
    z = params["z"]
    f = qpoch_infinite(Monomial(rational(-1) / z.r, 1 - z.m), order, base=2)
    f = f * qpoch_infinite(Monomial(-z.r, 1 + z.m), order, base=2)
    return f * qpoch_infinite_inv(mono(1, 1), order, base=2)


register(
    IdentityStatement(
        id="c1",
        description="quadratic-form double sum equals an even-odd product quotient",
        anchor="double-sum product identity (Andrews' non-diagonal form, z-refined)",
        backends=frozenset({"exact"}),
        slots=("z",),
        default_instances=(
            DefaultInstance.of("exact", z=mono(1)),
            DefaultInstance.of("exact", z=mono(1, 1)),
        ),
        check_domain=_pak_check,
        lhs_exact=_pak_lhs,
        rhs_exact=_c1_rhs,
        box_spec=_pak_grid,
    )
)


def _mnkqid_grid(params, order):
    k = params["k"]

    def term(mn):
        m, n = mn
        e = k * m * m - (2 * k - 1) * m * n + k * n * n
        if e > order:
            return QSeries.zero(order)
        f = qpoch_finite_inv(Q1, m, order) * qpoch_finite_inv(Q1, n, order)
        return f.shift(e)

    def bound(prefix):
        if len(prefix) == 1:
            return prefix[0] ** 2
        m, n = prefix
        return m * m + n * n  # k(m-n)^2 + 2mn >= m^2 + n^2

    return GridTermSpec(arity=2, term=term, prefix_bound=bound)


def _mnk_rhs(params, order, extra_euler: int = 1):
    k = params["k"]
    f = qpoch_infinite(mono(-1, k), order, base=2 * k) ** 2
    f = f * qpoch_infinite(mono(1, 2 * k), order, base=2 * k)
    return f * qpoch_infinite_inv(Q1, order) ** extra_euler


register(
    IdentityStatement(
        id="mnkqid",
        description="non-diagonal quadratic form double sum with modulus-2k product side",
        anchor="Andrews' non-diagonal quadratic form family",
        backends=frozenset({"exact"}),
        slots=("k",),
        default_instances=(
            DefaultInstance.of("exact", k=1),
            DefaultInstance.of("exact", k=2),
            DefaultInstance.of("exact", k=3),
        ),
        check_domain=lambda p, b: need_int(p, "k", lo=1) and None,
        lhs_exact=lambda params, order: gridsum(_mnkqid_grid(params, order), order),
        rhs_exact=_mnk_rhs,
        box_spec=_mnkqid_grid,
    )
)


def _mnk2qid_grid(params, order):
    k = params["k"]

    def term(mnr):
        m, n, r = mnr
        e = k * m * m - (2 * k - 2) * m * n + k * n * n + r * r + m * r + n * r
        if e > order:
            return QSeries.zero(order)
        f = qpoch_finite_inv(Q1, m, order) * qpoch_finite_inv(Q1, n, order)
        f = f * qpoch_finite_inv(Q1, r, order)
        return f.shift(e)

    def bound(prefix):
        if len(prefix) == 1:
            return prefix[0] ** 2
        if len(prefix) == 2:
            return prefix[0] ** 2 + prefix[1] ** 2
        m, n, r = prefix
        return m * m + n * n + r * r

    return GridTermSpec(arity=3, term=term, prefix_bound=bound)


register(
    IdentityStatement(
        id="mnk2qid",
        description="depth-3 quadratic form sum with modulus-2k product side (independent indices)",
        anchor="Andrews' triple-sum quadratic form identity",
        backends=frozenset({"exact"}),
        slots=("k",),
        default_instances=(DefaultInstance.of("exact", k=1), DefaultInstance.of("exact", k=2)),
        check_domain=lambda p, b: need_int(p, "k", lo=1) and None,
        lhs_exact=lambda params, order: gridsum(_mnk2qid_grid(params, order), order),
        rhs_exact=_mnk_rhs,
        box_spec=_mnk2qid_grid,
    )
)


def _mnktwoqid_grid(params, order):
    k = params["k"]

    def term(mnr):
        m, n, r = mnr
        e = k * m * m - (2 * k - 1) * m * n + k * n * n + r * r + m * r
        if e > order:
            return QSeries.zero(order)
        f = qpoch_finite_inv(Q1, m + r, order) * qpoch_finite_inv(Q1, m, order)
        f = f * qpoch_finite_inv(Q1, n, order) * qpoch_finite_inv(Q1, r, order)
        return f.shift(e)

    def bound(prefix):
        if len(prefix) == 1:
            return (prefix[0] ** 2) // 2
        if len(prefix) == 2:
            return (prefix[0] ** 2 + prefix[1] ** 2) // 2
        m, n, r = prefix
        return (m * m + n * n) // 2 + r * r

    return GridTermSpec(arity=3, term=term, prefix_bound=bound)


register(
    IdentityStatement(
        id="mnktwoqid",
        description="depth-3 nested variant with the same modulus-2k product over (q;q)_inf^2",
        anchor="nested triple-sum companion of the quadratic form family",
        backends=frozenset({"exact"}),
        slots=("k",),
        default_instances=(DefaultInstance.of("exact", k=2),),
        check_domain=lambda p, b: need_int(p, "k", lo=1) and None,
        lhs_exact=lambda params, order: gridsum(_mnktwoqid_grid(params, order), order),
        rhs_exact=lambda params, order: _mnk_rhs(params, order, extra_euler=2),
        box_spec=_mnktwoqid_grid,
    )
)


def _c33_check(params, backend):
    k = need_int(params, "k", lo=1)
    j = need_int(params, "j", lo=0)
    need(j < k, "j < k")
    need((j + k) % 2 == 0, "j+k even")


def _c33_grid(params, order):
    k, j = params["k"], params["j"]

    def term(mn):
        m, n = mn
        e2 = k * m * m - (2 * k - 2) * m * n + k * n * n + j * (m - n)
        e = e2 // 2
        if e > order:
            return QSeries.zero(order)
        f = qpoch_finite_inv(Q1, m, order) * qpoch_finite_inv(Q1, n, order)
        f = f.shift(e)
        return f if (m - n) % 2 == 0 else -f

    def bound(prefix):
        if len(prefix) == 1:
            return prefix[0] // 2
        m, n = prefix
        return (2 * m * n + abs(m - n)) // 2

    return GridTermSpec(arity=2, term=term, prefix_bound=bound)


def _c33_rhs(params, order):
    k, j = params["k"], params["j"]
    f = qpoch_infinite(mono(1, (k - j) // 2), order, base=k)
    f = f * qpoch_infinite(mono(1, (k + j) // 2), order, base=k)
    f = f * qpoch_infinite(mono(1, k), order, base=k)
    return f * qpoch_infinite_inv(Q1, order)


register(
    IdentityStatement(
        id="c33",
        description="alternating-sign quadratic form double sum, modulus-k product side",
        anchor="alternating quadratic-form double sum family (j+k even)",
        backends=frozenset({"exact"}),
        slots=("k", "j"),
        default_instances=(
            DefaultInstance.of("exact", k=2, j=0),
            DefaultInstance.of("exact", k=4, j=2),
            DefaultInstance.of("exact", k=7, j=1),
        ),
        check_domain=_c33_check,
        lhs_exact=lambda params, order: gridsum(_c33_grid(params, order), order),
        rhs_exact=_c33_rhs,
        box_spec=_c33_grid,
    )
)


def _amod7_grid(params, order):
    def term(mn):
        m, n = mn
        e = 2 * m * m + 2 * m * n + n * n
        if e > order:
            return QSeries.zero(order)
        f = qpoch_finite_inv(Q1, m, order) * qpoch_finite_inv(Q1, n, order)
        return f.shift(e)

    def bound(prefix):
        if len(prefix) == 1:
            return 2 * prefix[0] ** 2
        m, n = prefix
        return 2 * m * m + 2 * m * n + n * n

    return GridTermSpec(arity=2, term=term, prefix_bound=bound)


def _amod7_rhs(params, order):
    f = qpoch_infinite(mono(1, 3), order, base=7)
    f = f * qpoch_infinite(mono(1, 4), order, base=7)
    f = f * qpoch_infinite(mono(1, 7), order, base=7)
    return f * qpoch_infinite_inv(Q1, order)


register(
    IdentityStatement(
        id="amod7id",
        description="double-sum alternative to a mod-7 Rogers identity",
        anchor="Andrews' mod-7 double sum",
        backends=frozenset({"exact"}),
        slots=(),
        default_instances=(DefaultInstance.of("exact"),),
        check_domain=lambda p, b: None,
        lhs_exact=lambda params, order: gridsum(_amod7_grid(params, order), order),
        rhs_exact=_amod7_rhs,
        box_spec=_amod7_grid,
    )
)


# ---------------------------------------------------------------------------
# Rogers-Ramanujan kernel in the bilateral transformation
# ---------------------------------------------------------------------------


def _c3eq1_check(params, backend):
    a = params["a"]
    if backend == "exact":
        need(isinstance(a, Monomial) and a.m == 0, "a must be a plain rational")
        need(a.r not in (0, 1), "a not in {0, 1}")
    else:
        need(mono_num(a), "a must be numeric")
        q = params["q"]
        need(abs(rational(q)) < 1, "|q| < 1")


def _c3eq1_grid(params, order):
    a = params["a"]
    qa = mono(1, 1).over(a)
    ia2 = rational(1) / (a.r * a.r)

    def term(tn):
        t, n = tn
        m = n + t
        e = t * t + n
        if e > order:
            return QSeries.zero(order)
        f = qpoch_finite(a, m, order) * qpoch_finite(a, n, order) * qpoch_finite(qa, t, order)
        f = f * qpoch_finite_inv(Q1, m, order) * qpoch_finite_inv(Q1, n, order)
        f = f * qpoch_finite_inv(a, t, order) * qpoch_finite_inv(Q1, t, order)
        return f.shift(e).scale(ia2**n)

    def bound(prefix):
        if len(prefix) == 1:
            return prefix[0] ** 2
        t, n = prefix
        return t * t + n

    return GridTermSpec(arity=2, term=term, prefix_bound=bound)


def _c3eq1_rhs(params, order):
    a = params["a"]
    qa = mono(1, 1).over(a)
    f = qpoch_infinite(qa, order) ** 2
    f = f * qpoch_infinite_inv(mono(1, 1).over(a.times(a)), order)
    f = f * qpoch_infinite_inv(Q1, order)
    f = f * qpoch_infinite_inv(mono(1, 1), order, base=5)
    f = f * qpoch_infinite_inv(mono(1, 4), order, base=5)
    return f


def _c3eq1_lhs_numeric(params, digits):
    a, q = as_mpc(params["a"]), as_mpc(params["q"])
    t = PochTable(q)

    def slice_t(tt):
        pre = npoch(t, q / a, tt) / (npoch(t, a, tt) * npoch(t, q, tt)) * q ** (tt * tt)
        inner = nsum(
            lambda n: npoch(t, a, n + tt)
            * npoch(t, a, n)
            / (npoch(t, q, n + tt) * npoch(t, q, n))
            * (q / a**2) ** n,
            digits=digits,
        ).value.value
        return pre * inner

    return nsum(slice_t, digits=digits).value.value


def _c3eq1_rhs_numeric(params, digits):
    a, q = as_mpc(params["a"]), as_mpc(params["q"])
    t = PochTable(q)
    pol = default_policy(digits)
    t5 = PochTable(q**5)
    out = t.inf(q / a, pol) ** 2 / (t.inf(q / a**2, pol) * t.inf(q, pol))
    return out / (t5.inf(q, pol) * t5.inf(q**4, pol))


register(
    IdentityStatement(
        id="c3eq1",
        description="bilateral transformation fed with the Rogers-Ramanujan kernel",
        anchor="Rogers-Ramanujan kernel in the bilateral double-sum transformation",
        backends=frozenset({"exact", "numeric"}),
        slots=("a", "q"),
        default_instances=(
            DefaultInstance.of("exact", a=mono(2)),
            DefaultInstance.of("exact", a=mono(-3)),
            DefaultInstance.of("exact", a=mono("1/2")),
            DefaultInstance.of("numeric", a=CNum(1, 1), q=rational(1, 5)),
        ),
        check_domain=_c3eq1_check,
        lhs_exact=lambda params, order: gridsum(_c3eq1_grid(params, order), order),
        rhs_exact=_c3eq1_rhs,
        lhs_numeric=_c3eq1_lhs_numeric,
        rhs_numeric=_c3eq1_rhs_numeric,
        box_spec=_c3eq1_grid,
    )
)


# ---------------------------------------------------------------------------
# zeta(2) corollary (numeric; polynomially convergent tail closed by
# Euler-Maclaurin on the harmonic part)
# ---------------------------------------------------------------------------


def _c5_check(params, backend):
    a, q = params["a"], params["q"]
    need(abs(rational(q)) < 1, "|q| < 1")
    need(abs(rational(q) / rational(a) ** 2) < 1, "|q/a^2| < 1")


def _c5_lhs_numeric(params, digits):
    a, q = as_mpc(params["a"]), as_mpc(params["q"])
    t = PochTable(q)
    qa2 = q / a**2
    K = max(300, 5 * digits)
    total = mp.mpc(0)
    w = mp.mpc(0)
    for k in range(1, K + 1):
        inner = nsum(
            lambda n: npoch(t, a, n + k)
            * npoch(t, a, n)
            / (npoch(t, q, n + k) * npoch(t, q, n))
            * qa2**n,
            digits=digits,
        ).value.value
        slice_k = npoch(t, q / a, k) / npoch(t, a, k) * inner / (k * k)
        total += slice_k
        w = slice_k * k * k
    return total + w * harmonic2_tail(K, digits)


def _c5_rhs_numeric(params, digits):
    a, q = as_mpc(params["a"]), as_mpc(params["q"])
    t = PochTable(q)
    pol = default_policy(digits)
    pre = t.inf(q / a, pol) ** 2 / (t.inf(q / a**2, pol) * t.inf(q, pol))
    return mp.pi**2 / 6 * pre


register(
    IdentityStatement(
        id="c5_zeta",
        description="inverse-square kernel: double sum equals pi^2/6 times a product quotient",
        anchor="zeta(2) double-sum evaluation",
        backends=frozenset({"numeric"}),
        slots=("a", "q"),
        default_instances=(DefaultInstance.of("numeric", a=rational(3), q=rational(1, 10)),),
        check_domain=_c5_check,
        lhs_numeric=_c5_lhs_numeric,
        rhs_numeric=_c5_rhs_numeric,
    )
)


# ---------------------------------------------------------------------------
# q-Whipple sum and its double-sum application
# ---------------------------------------------------------------------------


def _whipple_names(a, c, d, q):
    sc = mp.sqrt(mp.mpc(-c))
    num = (-c, q * sc, -q * sc, a, q / a, c, -d, -q / d)
    den = (sc, -sc, -c * q / a, -a * c, -q, c * q / d, c * d, q)
    return num, den


def _wq3f2_check(params, backend):
    a, c, d, q = (rational(params[k]) for k in ("a", "c", "d", "q"))
    need(abs(q) < 1, "|q| < 1")
    need(abs(c) < 1, "|c| < 1")
    need(a != 0 and d != 0, "a, d != 0")


def _wq3f2_lhs_numeric(params, digits):
    a, c, d, q = (as_mpc(params[k]) for k in ("a", "c", "d", "q"))
    t = PochTable(q)
    num, den = _whipple_names(a, c, d, q)

    def term(k):
        out = c**k
        for x in num:
            out *= npoch(t, x, k)
        for x in den:
            out /= npoch(t, x, k)
        return out

    return nsum(term, digits=digits).value.value


def _wq3f2_rhs_numeric(params, digits):
    a, c, d, q = (as_mpc(params[k]) for k in ("a", "c", "d", "q"))
    pol = default_policy(digits)
    t = PochTable(q)
    t2 = PochTable(q**2)
    out = t.inf(-c, pol) * t.inf(-c * q, pol)
    out *= t2.inf(a * c * d, pol) * t2.inf(a * c * q / d, pol)
    out *= t2.inf(c * d * q / a, pol) * t2.inf(c * q**2 / (a * d), pol)
    out /= t.inf(c * d, pol) * t.inf(c * q / d, pol) * t.inf(-a * c, pol) * t.inf(-c * q / a, pol)
    return out


register(
    IdentityStatement(
        id="wq3f2",
        description="q-analogue of Whipple's 3F2 evaluation",
        anchor="q-Whipple sum",
        backends=frozenset({"numeric"}),
        slots=("a", "c", "d", "q"),
        default_instances=(
            DefaultInstance.of(
                "numeric", a=rational(2, 3), c=rational(1, 7), d=rational(3, 2), q=rational(1, 5)
            ),
        ),
        check_domain=_wq3f2_check,
        lhs_numeric=_wq3f2_lhs_numeric,
        rhs_numeric=_wq3f2_rhs_numeric,
    )
)


def _t3c4_check(params, backend):
    _wq3f2_check(params, backend)
    A, B, C = (rational(params[k]) for k in ("A", "B", "C"))
    need(abs(C / (A * B)) < 1, "|C/(A*B)| < 1")


def _t3c4_lhs_numeric(params, digits):
    a, c, d, q = (as_mpc(params[k]) for k in ("a", "c", "d", "q"))
    A, B, C = (as_mpc(params[k]) for k in ("A", "B", "C"))
    t = PochTable(q)
    num, den = _whipple_names(a, c, d, q)

    def slice_k(k):
        pre = c**k * npoch(t, C / B, k) / npoch(t, A, k)
        for x in num:
            pre *= npoch(t, x, k)
        for x in den:
            pre /= npoch(t, x, k)
        inner = nsum(
            lambda n: npoch(t, A, n + k)
            * npoch(t, B, n)
            / (npoch(t, C, n + k) * npoch(t, q, n))
            * (C / (A * B)) ** n,
            digits=digits,
        ).value.value
        return pre * inner

    return nsum(slice_k, digits=digits).value.value


def _t3c4_rhs_numeric(params, digits):
    A, B, C, q = (as_mpc(params[k]) for k in ("A", "B", "C", "q"))
    t = PochTable(q)
    pol = default_policy(digits)
    pre = t.inf(C / A, pol) * t.inf(C / B, pol) / (t.inf(C, pol) * t.inf(C / (A * B), pol))
    return pre * _wq3f2_rhs_numeric(params, digits)


register(
    IdentityStatement(
        id="t3c4_whipple",
        description="double sum from feeding the q-Whipple kernel into the ordered transformation",
        anchor="q-Whipple kernel double sum",
        backends=frozenset({"numeric"}),
        slots=("A", "B", "C", "a", "c", "d", "q"),
        default_instances=(
            DefaultInstance.of(
                "numeric",
                A=rational(1, 3),
                B=rational(1, 4),
                C=rational(1, 50),
                a=rational(2, 3),
                c=rational(1, 7),
                d=rational(3, 2),
                q=rational(1, 5),
            ),
        ),
        check_domain=_t3c4_check,
        lhs_numeric=_t3c4_lhs_numeric,
        rhs_numeric=_t3c4_rhs_numeric,
    )
)
