"""Expert panels: point opinions about a model parameter plus their credibility."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class ExpertPanel:
    """M expert point opinions and the credibility parameter ``xi``.

    For the Gamma-distributed opinions of the frequency and Pareto models,
    ``xi = 1 / Vco^2`` of an opinion given the true parameter. For the
    lognormal model ``xi`` is the standard deviation of an opinion. An empty
    panel ignores ``xi``.
    """

    opinions: tuple[float, ...] = ()
    xi: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "opinions", tuple(float(o) for o in self.opinions))
        if self.opinions:
            if self.xi is None or not (math.isfinite(self.xi) and self.xi > 0.0):
                raise ValueError(f"a non-empty panel needs xi > 0, got {self.xi}")
            if not all(math.isfinite(o) for o in self.opinions):
                raise ValueError("expert opinions must be finite")

    @classmethod
    def of(cls, opinions: Iterable[float], xi: float | None) -> "ExpertPanel":
        return cls(tuple(opinions), xi)

    @property
    def size(self) -> int:
        return len(self.opinions)

    @property
    def total(self) -> float:
        return sum(self.opinions)

    @property
    def mean(self) -> float:
        if not self.opinions:
            raise ValueError("empty panel has no mean opinion")
        return self.total / self.size

    def require_positive(self) -> "ExpertPanel":
        """Gamma-distributed opinions must be strictly positive."""
        if any(o <= 0.0 for o in self.opinions):
            raise ValueError("expert opinions must be > 0 for this model")
        return self


NO_EXPERTS = ExpertPanel()
