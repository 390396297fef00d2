"""The executable identity catalog: statement records, parameter binding,
verification drivers, and report serialization.

Every entry builds its two sides through disjoint call paths (multi-sum
engine vs direct product/sum construction); a pass is meaningful only
because the sides share no intermediate computation.  Exact verification is
coefficientwise with zero tolerance; numeric verification compares a
relative discrepancy against an explicit tolerance.
"""

from __future__ import annotations

import fnmatch
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import mpmath as mp

from .errors import DomainViolation, UnknownIdentity
from .numeric import MP_LOCK, BigComplex, CNum, PiFrac, as_mpc
from .series import Monomial, QSeries, Rational, ZLaurentSeries, rational

SCHEMA_VERSION = 1
DEFAULT_ORDER = 30
DEFAULT_TOL = 1e-20


# -- sequence-valued parameters ---------------------------------------------


@dataclass(frozen=True)
class FiniteSeq:
    """A finitely supported rational sequence (the arbitrary input sequence
    of the transformation theorems, pinned to a finite support)."""

    items: tuple

    def __post_init__(self):
        norm = tuple(sorted((int(k), rational(v)) for k, v in dict(self.items).items()))
        object.__setattr__(self, "items", norm)

    @property
    def support(self):
        return frozenset(k for k, _ in self.items)

    def value(self, k: int):
        for kk, v in self.items:
            if kk == k:
                return v
        return rational(0)

    def total(self):
        return sum((v for _, v in self.items), rational(0))

    def min_index(self) -> int:
        return self.items[0][0]

    def max_index(self) -> int:
        return self.items[-1][0]

    def __str__(self) -> str:
        return "{" + ", ".join(f"{k}:{v}" for k, v in self.items) + "}"


@dataclass(frozen=True)
class GeomSeq:
    """g(k) = ratio^k for k >= 0 (numeric backend input sequence)."""

    ratio: Rational

    def __post_init__(self):
        object.__setattr__(self, "ratio", rational(self.ratio))

    def __str__(self) -> str:
        return f"({self.ratio})^k"


@dataclass(frozen=True)
class ThetaSeq:
    """g(k) = t^{k^2} u^k over all integers (numeric backend input sequence)."""

    t: Rational
    u: Rational

    def __post_init__(self):
        object.__setattr__(self, "t", rational(self.t))
        object.__setattr__(self, "u", rational(self.u))

    def __str__(self) -> str:
        return f"({self.t})^(k^2)*({self.u})^k"


def param_str(value) -> str:
    if isinstance(value, tuple):
        return "[" + ", ".join(param_str(v) for v in value) + "]"
    return str(value)


# -- statements and bindings --------------------------------------------------


@dataclass(frozen=True)
class DefaultInstance:
    backend: str
    params: tuple  # sorted (name, value) pairs

    @classmethod
    def of(cls, backend: str, **params) -> "DefaultInstance":
        return cls(backend, tuple(sorted(params.items())))

    def as_dict(self) -> dict:
        return dict(self.params)


@dataclass(frozen=True)
class IdentityStatement:
    """One cataloged identity: metadata, domain checks, and side builders."""

    id: str
    description: str
    anchor: str  # source attribution (classical name / literature credit)
    backends: frozenset
    slots: tuple
    default_instances: tuple
    check_domain: Callable[[dict, str], None]
    lhs_exact: Optional[Callable[[dict, int], Union[QSeries, ZLaurentSeries]]] = None
    rhs_exact: Optional[Callable[[dict, int], Union[QSeries, ZLaurentSeries]]] = None
    lhs_numeric: Optional[Callable[[dict, int], mp.mpc]] = None
    rhs_numeric: Optional[Callable[[dict, int], mp.mpc]] = None
    # engine-spec accessors for the exhaustive naive-box oracle used in tests
    multisum_spec: Optional[Callable[[dict, int], object]] = None
    box_spec: Optional[Callable[[dict, int], object]] = None

    def __post_init__(self):
        if not self.default_instances:
            raise ValueError(f"{self.id}: every entry needs at least one default instance")
        if not self.backends:
            raise ValueError(f"{self.id}: every entry needs at least one backend")
        if not self.anchor:
            raise ValueError(f"{self.id}: anchor must be nonempty")


@dataclass(frozen=True)
class BoundIdentity:
    statement: IdentityStatement
    backend: str
    params: tuple  # sorted (name, value) pairs

    def param_dict(self) -> dict:
        return dict(self.params)


@dataclass(frozen=True)
class VerificationReport:
    identity: str
    backend: str
    order_or_precision: int
    params: tuple  # sorted (name, str) pairs
    verdict: bool
    discrepancy: Optional[str]
    first_diff_exponent: Optional[int]
    wall_ms: float

    def to_json_dict(self) -> dict:
        out = {
            "schema": SCHEMA_VERSION,
            "id": self.identity,
            "backend": self.backend,
            "order_or_precision": self.order_or_precision,
            "params": dict(self.params),
            "verdict": "pass" if self.verdict else "fail",
            "discrepancy": self.discrepancy,
            "wall_ms": round(self.wall_ms, 3),
        }
        if self.first_diff_exponent is not None:
            out["first_diff_exponent"] = self.first_diff_exponent
        return out


_REGISTRY: dict = {}


def register(stmt: IdentityStatement) -> IdentityStatement:
    if stmt.id in _REGISTRY:
        raise ValueError(f"duplicate identity id {stmt.id}")
    _REGISTRY[stmt.id] = stmt
    return stmt


def _ensure_loaded():
    # entry modules register on import; import lazily to avoid cycles
    from . import bailey, identities, qpolys  # noqa: F401


def get(identity_id: str) -> IdentityStatement:
    _ensure_loaded()
    try:
        return _REGISTRY[identity_id]
    except KeyError:
        raise UnknownIdentity(f"no catalog entry named {identity_id!r}") from None


def catalog_list(pattern: str = "*") -> list:
    """Summaries of all entries with ids matching the glob pattern, sorted by id."""
    _ensure_loaded()
    out = []
    for stmt in sorted(_REGISTRY.values(), key=lambda s: s.id):
        if not fnmatch.fnmatchcase(stmt.id, pattern):
            continue
        out.append(
            {
                "id": stmt.id,
                "description": stmt.description,
                "anchor": stmt.anchor,
                "backends": sorted(stmt.backends),
                "default_instances": len(stmt.default_instances),
            }
        )
    return out


def instantiate(identity_id: str, params: dict, backend: Optional[str] = None) -> BoundIdentity:
    """Bind parameters to an entry, validating its domain constraints."""
    stmt = get(identity_id)
    if backend is None:
        backend = "exact" if "exact" in stmt.backends else "numeric"
    if backend not in stmt.backends:
        raise DomainViolation(f"backend {backend} unsupported for {identity_id}")
    unknown = set(params) - set(stmt.slots)
    if unknown:
        raise DomainViolation(f"unknown parameter slots {sorted(unknown)} for {identity_id}")
    stmt.check_domain(params, backend)
    return BoundIdentity(stmt, backend, tuple(sorted(params.items())))


def default_bindings(identity_id: str) -> list:
    stmt = get(identity_id)
    return [
        instantiate(identity_id, inst.as_dict(), inst.backend) for inst in stmt.default_instances
    ]


# -- verification -------------------------------------------------------------


def _param_strs(params: tuple) -> tuple:
    return tuple(sorted((k, param_str(v)) for k, v in params))


def _perturb_exact(side, order: int):
    """Flip exactly one coefficient (the fault-injection harness)."""
    e = min(5, order)
    if isinstance(side, ZLaurentSeries):
        return side + ZLaurentSeries.monomial(1, e, 0, side.order, side.window)
    return side + QSeries.monomial(1, e, side.order)


def verify_exact(bound: BoundIdentity, order: int = DEFAULT_ORDER, inject_fault: bool = False) -> VerificationReport:
    """Build both sides independently and compare coefficientwise, zero tolerance."""
    stmt = bound.statement
    if stmt.lhs_exact is None:
        raise DomainViolation(f"{stmt.id} has no exact backend")
    params = bound.param_dict()
    t0 = time.perf_counter()
    lhs = stmt.lhs_exact(params, order)
    rhs = stmt.rhs_exact(params, order)
    if inject_fault:
        rhs = _perturb_exact(rhs, order)
    diff = lhs.first_difference(rhs)
    wall = (time.perf_counter() - t0) * 1000.0
    if diff is None:
        return VerificationReport(stmt.id, "exact", order, _param_strs(bound.params), True, None, None, wall)
    if len(diff) == 4:
        qe, ze, a, b = diff
        disc = f"coefficient of q^{qe} z^{ze}: lhs={a} rhs={b}"
    else:
        qe, a, b = diff
        disc = f"coefficient of q^{qe}: lhs={a} rhs={b}"
    return VerificationReport(stmt.id, "exact", order, _param_strs(bound.params), False, disc, qe, wall)


def verify_numeric(
    bound: BoundIdentity,
    precision_digits: int = 60,
    tol: float = DEFAULT_TOL,
    inject_fault: bool = False,
) -> VerificationReport:
    """Evaluate both sides at the working precision; pass iff the relative
    discrepancy |lhs-rhs| / max(|lhs|, |rhs|, 1e-30) is within tol."""
    stmt = bound.statement
    if stmt.lhs_numeric is None:
        raise DomainViolation(f"{stmt.id} has no numeric backend")
    params = bound.param_dict()
    t0 = time.perf_counter()
    with MP_LOCK, mp.workdps(precision_digits):
        lhs = stmt.lhs_numeric(params, precision_digits)
        rhs = stmt.rhs_numeric(params, precision_digits)
        if inject_fault:
            rhs = rhs * (1 + mp.mpf("1e-12"))
        rel = abs(lhs - rhs) / max(abs(lhs), abs(rhs), mp.mpf("1e-30"))
        disc = mp.nstr(rel, 8)
    wall = (time.perf_counter() - t0) * 1000.0
    verdict = rel <= mp.mpf(tol)
    return VerificationReport(
        stmt.id, "numeric", precision_digits, _param_strs(bound.params), bool(verdict), disc, None, wall
    )


def run_instance(
    bound: BoundIdentity,
    order: int = DEFAULT_ORDER,
    precision_digits: int = 60,
    tol: float = DEFAULT_TOL,
    inject_fault: bool = False,
) -> VerificationReport:
    if bound.backend == "exact":
        return verify_exact(bound, order, inject_fault)
    return verify_numeric(bound, precision_digits, tol, inject_fault)
