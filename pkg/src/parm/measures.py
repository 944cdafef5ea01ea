"""Path association rules and their support / confidence / lift."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import PropertyGraph
from .patterns import PathPattern, dominates, match_set

__all__ = [
    "Rule",
    "RuleMeasures",
    "DominatedRuleError",
    "EmptyAntecedent",
    "EmptyConsequent",
    "evaluate_rule",
]


class DominatedRuleError(ValueError):
    pass


class EmptyAntecedent(ValueError):
    pass


class EmptyConsequent(ValueError):
    pass


@dataclass(frozen=True)
class Rule:
    antecedent: PathPattern
    consequent: PathPattern

    def __post_init__(self):
        x, y = self.antecedent, self.consequent
        if dominates(x, y) or dominates(y, x):
            raise DominatedRuleError("one side of the rule dominates the other")

    def reversed(self) -> "Rule":
        return Rule(self.consequent, self.antecedent)


def _ratio(a, b):
    if isinstance(a, (int, np.integer)) and isinstance(b, (int, np.integer)):
        return Fraction(int(a), int(b))
    return float(a) / float(b)


@dataclass(frozen=True, slots=True)
class RuleMeasures:
    """Match counts of a rule; the ratio measures are derived on access.

    With exact integer counts the ratios are :class:`fractions.Fraction`;
    with sampled estimates they are floats.
    """

    asupp: int | float
    support_x: int | float
    support_y: int | float
    n_vertices: int

    @property
    def rsupp(self):
        return _ratio(self.asupp, self.n_vertices)

    @property
    def conf(self):
        return _ratio(self.asupp, self.support_x)

    @property
    def lift(self):
        return _ratio(self.asupp * self.n_vertices, self.support_x * self.support_y)

    def as_floats(self) -> tuple[float, float, float, float]:
        return float(self.asupp), float(self.rsupp), float(self.conf), float(self.lift)


def evaluate_rule(g: PropertyGraph, rule: Rule, max_hops: int | None = None) -> RuleMeasures:
    vx = match_set(g, rule.antecedent, max_hops)
    if vx.shape[0] == 0:
        raise EmptyAntecedent("the antecedent matches no vertex")
    vy = match_set(g, rule.consequent, max_hops)
    if vy.shape[0] == 0:
        raise EmptyConsequent("the consequent matches no vertex")
    both = np.intersect1d(vx, vy, assume_unique=True)
    return RuleMeasures(int(both.shape[0]), int(vx.shape[0]), int(vy.shape[0]), g.n_vertices)
