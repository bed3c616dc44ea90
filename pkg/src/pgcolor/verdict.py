from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Verdict:
    """Outcome of a verifier: truthy iff the object is valid."""

    ok: bool
    message: str = ""
    details: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def fail(cls, message: str, **details: Any) -> "Verdict":
        return cls(False, message, details)


@dataclass
class SearchOutcome:
    """Result of a budgeted search.

    ``status`` is ``found``, ``exhausted`` (node budget ran out) or
    ``infeasible`` (search tree fully explored without a solution).
    """

    status: str
    solution: Any = None
    nodes: int = 0
    frontier: Any = None

    @property
    def found(self) -> bool:
        return self.status == "found"
