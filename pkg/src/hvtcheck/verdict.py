from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

PASS = "Pass"
FAIL = "Fail"
VACUOUS = "Vacuous"


@dataclass
class Verdict:
    """Outcome of a bounded, universally quantified check.

    ``checked`` counts instantiations actually evaluated; ``skipped`` counts
    those dropped because a conditioning event had zero weight.  A check
    whose every instantiation was skipped is Vacuous.
    """

    status: str
    witness: Optional[dict] = None
    checked: int = 0
    skipped: int = 0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def failed(self) -> bool:
        return self.status == FAIL

    @classmethod
    def from_counts(cls, witness, checked, skipped, **details) -> "Verdict":
        if witness is not None:
            status = FAIL
        elif checked == 0:
            status = VACUOUS
        else:
            status = PASS
        return cls(status, witness, checked, skipped, dict(details))

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": self.status,
            "witness": self.witness,
            "checked": self.checked,
            "skipped": self.skipped,
            "details": self.details,
        }
