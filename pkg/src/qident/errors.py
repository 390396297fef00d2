"""Exception hierarchy for the verification engine."""


class QIdentError(Exception):
    """Base class for all engine errors."""


class ZeroConstantTerm(QIdentError):
    """Inversion of a series whose constant coefficient vanishes."""


class WindowOverflow(QIdentError):
    """A Laurent operation produced a nonzero coefficient outside the declared z-window."""


class NoTermination(QIdentError):
    """An index enumeration exceeded the guard count without exhausting its valuation budget."""


class PruningUnsound(QIdentError):
    """A runtime spot-check found a term whose actual valuation undercuts its declared bound."""


class NoConvergence(QIdentError):
    """A numeric sum failed to meet its tail policy within the term guard."""


class Overflow(QIdentError):
    """A numeric accumulation blew up in magnitude."""


class DomainError(QIdentError):
    """A numeric operation was invoked outside its domain (e.g. |q| >= 1 infinite product)."""


class PoleError(QIdentError):
    """A required denominator Pochhammer symbol vanishes."""


class UnknownIdentity(QIdentError):
    """Catalog lookup for an id that does not exist."""


class DomainViolation(QIdentError):
    """Identity parameters violate the entry's stated domain constraints."""

    def __init__(self, constraint: str, detail: str = ""):
        self.constraint = constraint
        super().__init__(f"domain violation: {constraint}" + (f" ({detail})" if detail else ""))
