from __future__ import annotations

from dataclasses import dataclass, field

from .graph import PropertyGraph
from .measures import RuleMeasures
from .patterns import PathPattern, format_pattern
from .report import RunReport

__all__ = ["FrequentSets", "rule_rows"]


@dataclass
class FrequentSets:
    """Everything one mining run found.

    ``attrsets`` holds the length-0 patterns (frequent attribute sets),
    ``simple[i-1]`` the frequent simple patterns of length ``i``, ``reach``
    the frequent reachability patterns and ``rules`` maps
    ``(antecedent, consequent)`` to measures.  Supports are exact ``int``
    counts, or ``float`` estimates when vertex sampling is on.
    """

    n_vertices: int
    theta: int
    k: int
    attrsets: dict[PathPattern, int | float] = field(default_factory=dict)
    simple: list[dict[PathPattern, int | float]] = field(default_factory=list)
    reach: dict[PathPattern, int | float] = field(default_factory=dict)
    rules: dict[tuple[PathPattern, PathPattern], RuleMeasures] = field(default_factory=dict)
    estimates: dict = field(default_factory=dict)
    rule_estimates: dict = field(default_factory=dict)
    report: RunReport | None = None

    def patterns(self) -> dict[PathPattern, int | float]:
        """Frequent patterns that may appear in rules (length >= 1 or reachability)."""
        out: dict[PathPattern, int | float] = {}
        for level in self.simple:
            out.update(level)
        out.update(self.reach)
        return out

    def rule_signature(self) -> dict[tuple[PathPattern, PathPattern], tuple]:
        return {r: (m.asupp, m.support_x, m.support_y) for r, m in self.rules.items()}

    def same_output(self, other: "FrequentSets") -> bool:
        return (self.attrsets == other.attrsets
                and self.patterns() == other.patterns()
                and self.rule_signature() == other.rule_signature())


def rule_rows(fs: FrequentSets, g: PropertyGraph) -> list[dict]:
    """Rules as plain rows sorted by (asupp desc, antecedent text, consequent text)."""
    rows = []
    for (x, y), m in fs.rules.items():
        row = {
            "antecedent": format_pattern(x, g),
            "consequent": format_pattern(y, g),
            "asupp": m.asupp,
            "rsupp": float(m.rsupp),
            "conf": float(m.conf),
            "lift": float(m.lift),
        }
        est = fs.rule_estimates.get((x, y))
        if est is not None:
            row.update(est=est.estimate, ci_low=est.ci_low, ci_high=est.ci_high)
        rows.append(row)
    rows.sort(key=lambda r: (-r["asupp"], r["antecedent"], r["consequent"]))
    return rows
