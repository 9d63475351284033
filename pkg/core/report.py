from dataclasses import dataclass, field
from typing import Any, Dict, Optional


@dataclass
class Report:
    """Outcome of a check; failures carry a witness, never an exception."""

    status: str = "pass"
    witness: Optional[Dict[str, Any]] = None
    details: Dict[str, Any] = field(default_factory=dict)
    command: Optional[str] = None
    window: Any = None
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    @classmethod
    def failed(cls, witness: Dict[str, Any], **details: Any) -> "Report":
        return cls(status="fail", witness=witness, details=dict(details))

    def as_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"command": self.command, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        out["window"] = self.window
        if self.details:
            out["details"] = self.details
        out["timings"] = self.timings
        return out
