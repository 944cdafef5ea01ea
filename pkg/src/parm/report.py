"""Per-phase counters and the machine-readable run report."""
from __future__ import annotations

import json
import resource
import sys
import time
from dataclasses import asdict, dataclass, field

__all__ = ["PhaseStats", "RunReport"]


@dataclass
class PhaseStats:
    """Candidate bookkeeping for one mining phase.

    Every generated candidate is either pruned before evaluation (by an
    infrequent prefix / dominated infrequent pattern, or by a degree bound)
    or evaluated and found frequent or infrequent, so
    ``generated == pruned_prefix + pruned_bound + frequent + infrequent``.
    """

    name: str
    generated: int = 0
    pruned_prefix: int = 0
    pruned_bound: int = 0
    frequent: int = 0
    infrequent: int = 0
    seconds: float = 0.0

    @property
    def evaluated(self) -> int:
        return self.frequent + self.infrequent

    def consistent(self) -> bool:
        return self.generated == (self.pruned_prefix + self.pruned_bound
                                  + self.frequent + self.infrequent)


@dataclass
class RunReport:
    algorithm: str
    config: dict
    n_vertices: int = 0
    n_edges: int = 0
    theta: int = 0
    phases: list[PhaseStats] = field(default_factory=list)
    rule_count: int = 0
    pattern_count: int = 0
    peak_memory_mb: float = 0.0
    total_seconds: float = 0.0
    extra: dict = field(default_factory=dict)

    def phase(self, name: str) -> PhaseStats:
        for ph in self.phases:
            if ph.name == name:
                return ph
        ph = PhaseStats(name)
        self.phases.append(ph)
        return ph

    def timed(self, name: str):
        return _Timer(self.phase(name))

    def total_candidates(self) -> int:
        return sum(ph.generated for ph in self.phases)

    def finish(self) -> None:
        self.total_seconds = sum(ph.seconds for ph in self.phases)
        rss = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
        # ru_maxrss is KiB on Linux and bytes on macOS
        self.peak_memory_mb = rss / (1024 * 1024 if sys.platform == "darwin" else 1024)

    def to_dict(self, timings: bool = True) -> dict:
        d = asdict(self)
        if not timings:
            d.pop("total_seconds")
            d.pop("peak_memory_mb")
            for ph in d["phases"]:
                ph.pop("seconds")
        return d

    def to_json(self, timings: bool = True) -> str:
        return json.dumps(self.to_dict(timings), indent=2, sort_keys=True)


class _Timer:
    def __init__(self, stats: PhaseStats):
        self.stats = stats

    def __enter__(self):
        self._t0 = time.perf_counter()
        return self.stats

    def __exit__(self, *exc):
        self.stats.seconds += time.perf_counter() - self._t0
        return False
