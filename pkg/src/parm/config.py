from __future__ import annotations

import math
import os
from dataclasses import asdict, dataclass
from fractions import Fraction

__all__ = ["ConfigError", "MiningConfig"]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class MiningConfig:
    """Parameters of one mining run.

    ``theta`` is an absolute vertex count unless ``relative`` is set, in
    which case it is a fraction of |V| converted once by
    :meth:`effective_theta`.  ``psi`` < 1 enables candidate reduction and
    ``rho`` < 1 enables stratified vertex sampling.  ``threads`` is the
    number of balanced partitions; ``workers`` the OS threads that run them
    (default: ``threads`` capped at the CPU count).
    """

    theta: float
    relative: bool = False
    k: int = 2
    psi: float = 1.0
    rho: float = 1.0
    threads: int = 1
    seed: int = 0
    z: float = 1.96
    star_mode: str = "capped"
    workers: int | None = None

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if not isinstance(self.k, int) or self.k < 1:
            raise ConfigError(f"k must be an integer >= 1, got {self.k!r}")
        if self.relative:
            if not 0 < self.theta <= 1:
                raise ConfigError(f"relative theta must be in (0, 1], got {self.theta}")
        elif self.theta < 1:
            raise ConfigError(f"absolute theta must be >= 1, got {self.theta}")
        if not 0 <= self.psi <= 1:
            raise ConfigError(f"psi must be in [0, 1], got {self.psi}")
        if not 0 < self.rho <= 1:
            raise ConfigError(f"rho must be in (0, 1], got {self.rho}")
        if not isinstance(self.threads, int) or self.threads < 1:
            raise ConfigError(f"threads must be an integer >= 1, got {self.threads!r}")
        if self.workers is not None and (not isinstance(self.workers, int) or self.workers < 1):
            raise ConfigError(f"workers must be an integer >= 1, got {self.workers!r}")
        if self.z <= 0:
            raise ConfigError(f"z must be positive, got {self.z}")
        if self.star_mode not in ("capped", "unbounded"):
            raise ConfigError(f"star_mode must be 'capped' or 'unbounded', got {self.star_mode!r}")

    def effective_theta(self, n_vertices: int) -> int:
        """Smallest integer support that satisfies ``|V(p)| >= theta``."""
        t = Fraction(str(self.theta))
        if self.relative:
            t *= n_vertices
        return max(1, math.ceil(t))

    @property
    def max_hops(self) -> int | None:
        return self.k if self.star_mode == "capped" else None

    @property
    def approximate(self) -> bool:
        return self.psi < 1 or self.rho < 1

    def worker_threads(self) -> int:
        """OS threads actually started: the requested count capped at the cores."""
        if self.workers is not None:
            return min(self.workers, self.threads)
        return max(1, min(self.threads, os.cpu_count() or 1))

    def as_dict(self) -> dict:
        return asdict(self)
