"""Attribute domains: the (carrier, disjunction, conjunction) structures that
metrics are computed in.  Disjunction propagates values over OR-gates,
conjunction over AND-gates; conjunction distributes over disjunction on the
carrier (checked by the law-sampling tests)."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainViolationError, RepresentationMismatchError, UnknownDomainError
from .fuzzy import (
    DEFAULT_ALPHA_LEVELS,
    DiscreteFuzzy,
    FuzzyElement,
    PiecewiseLinearFuzzy,
    crisp_op,
    zadeh_binary_discrete,
    zadeh_binary_pl,
)

CARRIER_NONNEGATIVE = "nonnegative-reals"
CARRIER_UNIT = "unit-interval"


@dataclass(frozen=True)
class AttributeDomain:
    name: str
    carrier: str
    disjunction: str
    conjunction: str

    def pl_exact(self, which: str) -> bool:
        """Whether the piecewise-linear computation of the given operator is exact."""
        return self.op_tag(which) != "mul"

    def op_tag(self, which: str) -> str:
        if which == "disjunction":
            return self.disjunction
        if which == "conjunction":
            return self.conjunction
        raise UnknownDomainError(f"operator selector must be 'disjunction' or 'conjunction', got {which!r}")

    def contains(self, value: float) -> bool:
        if self.carrier == CARRIER_UNIT:
            return 0.0 <= value <= 1.0
        return value >= 0.0


_BUILTINS = {
    "min-cost": AttributeDomain("min-cost", CARRIER_NONNEGATIVE, "min", "add"),
    "min-time": AttributeDomain("min-time", CARRIER_NONNEGATIVE, "min", "add"),
    "max-damage": AttributeDomain("max-damage", CARRIER_NONNEGATIVE, "max", "add"),
    "max-probability": AttributeDomain("max-probability", CARRIER_UNIT, "max", "mul"),
    "min-skill": AttributeDomain("min-skill", CARRIER_NONNEGATIVE, "min", "max"),
}


def builtin_domain(name: str) -> AttributeDomain:
    """Look up a builtin attribute domain by name."""
    try:
        return _BUILTINS[name]
    except KeyError:
        known = ", ".join(sorted(_BUILTINS))
        raise UnknownDomainError(f"unknown domain {name!r}; valid names: {known}") from None


def builtin_domain_names() -> tuple[str, ...]:
    return tuple(sorted(_BUILTINS))


def check_carrier(domain: AttributeDomain, value: float, context: str = "value") -> None:
    if not domain.contains(value):
        raise DomainViolationError(
            f"{context} {value!r} lies outside the {domain.carrier} carrier of domain {domain.name}"
        )


def check_element_carrier(domain: AttributeDomain, element: FuzzyElement, context: str) -> None:
    """Ensure every support point of a fuzzy element lies in the carrier."""
    if isinstance(element, DiscreteFuzzy):
        for v, _ in element.entries:
            check_carrier(domain, v, context)
    else:
        lo, hi = element.support
        check_carrier(domain, lo, context)
        check_carrier(domain, hi, context)


def apply_crisp(domain: AttributeDomain, which: str, u: float, w: float) -> float:
    """Apply the domain's disjunction or conjunction to two carrier values."""
    check_carrier(domain, u)
    check_carrier(domain, w)
    return crisp_op(domain.op_tag(which), u, w)


def apply_fuzzy(
    domain: AttributeDomain,
    which: str,
    x: FuzzyElement,
    y: FuzzyElement,
    alpha_levels: int = DEFAULT_ALPHA_LEVELS,
) -> FuzzyElement:
    """Apply the Zadeh extension of the domain's operator to two fuzzy elements
    of the same representation kind."""
    tag = domain.op_tag(which)
    if isinstance(x, DiscreteFuzzy) and isinstance(y, DiscreteFuzzy):
        return zadeh_binary_discrete(tag, x, y)
    if isinstance(x, PiecewiseLinearFuzzy) and isinstance(y, PiecewiseLinearFuzzy):
        return zadeh_binary_pl(tag, x, y, alpha_levels=alpha_levels)
    raise RepresentationMismatchError(
        "cannot combine a discrete with a piecewise-linear element; "
        "convert explicitly with discretize()"
    )
