"""Path association rule mining on property graphs.

Typical use::

    from parm import MiningConfig, load_graph, mine_pioneer
    g = load_graph("people.vertices.tsv", "people.edges.tsv")
    result = mine_pioneer(g, MiningConfig(theta=2, k=2))
"""
from __future__ import annotations

from importlib import resources

from .approx import mine_pioneer_approx
from .baseline import mine_baseline
from .config import ConfigError, MiningConfig
from .graph import GraphFormatError, PropertyGraph, load_graph, save_graph
from .measures import Rule, RuleMeasures, evaluate_rule
from .patterns import PathPattern, format_pattern, match_set, parse_pattern
from .pioneer import mine_pioneer
from .results import FrequentSets
from .synthgen import GenSpec, generate

__all__ = [
    "ConfigError",
    "FrequentSets",
    "GenSpec",
    "GraphFormatError",
    "MiningConfig",
    "PathPattern",
    "PropertyGraph",
    "Rule",
    "RuleMeasures",
    "evaluate_rule",
    "fig1_paths",
    "format_pattern",
    "generate",
    "load_fig1",
    "load_graph",
    "match_set",
    "mine_baseline",
    "mine_pioneer",
    "mine_pioneer_approx",
    "parse_pattern",
    "save_graph",
]

__version__ = "0.1.0"


def fig1_paths() -> tuple[str, str]:
    """Paths of the bundled 12-vertex social-network fixture (vertices, edges)."""
    base = resources.files("parm") / "data"
    return str(base / "fig1.vertices.tsv"), str(base / "fig1.edges.tsv")


def load_fig1() -> PropertyGraph:
    return load_graph(*fig1_paths())
