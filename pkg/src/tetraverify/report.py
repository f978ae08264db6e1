"""Structured verification outcomes, serialized to a fixed JSON schema."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

PASSING_STATUSES = frozenset({"holds", "certified", "pass", "commute"})


@dataclass
class Report:
    """Outcome of one check: name, status, witnesses, degrees, timing.

    JSON schema (keys always present):
      check, status, interpretation, seed, points, witnesses,
      max_degree_per_var, elapsed_ms
    """

    check: str
    status: str
    interpretation: str | None = None
    seed: int | None = None
    points: int | None = None
    witnesses: list[dict] = field(default_factory=list)
    max_degree_per_var: dict[str, int | str] = field(default_factory=dict)
    elapsed_ms: int = 0

    @property
    def ok(self) -> bool:
        return self.status in PASSING_STATUSES

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "status": self.status,
            "interpretation": self.interpretation,
            "seed": self.seed,
            "points": self.points,
            "witnesses": self.witnesses,
            "max_degree_per_var": self.max_degree_per_var,
            "elapsed_ms": self.elapsed_ms,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)
