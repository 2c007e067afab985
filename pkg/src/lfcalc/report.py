"""Identity tags and verification reports shared by the formal and numeric suites."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, field


class IdentityTag(enum.Enum):
    LINEARITY = "linearity"
    INVERSE_LINEARITY = "inverse-linearity"
    SHIFT = "shift"
    SCALING = "scaling"
    MODULATION = "modulation"
    DERIVATIVE = "derivative"
    CONVOLUTION = "convolution"
    COMMUTATIVITY = "commutativity"
    DISTRIBUTIVITY = "distributivity"
    UNIQUENESS = "uniqueness"
    ROUND_TRIP = "round-trip"
    PARSEVAL = "parseval"

    @classmethod
    def parse(cls, text: str) -> "IdentityTag":
        try:
            return cls(text)
        except ValueError:
            raise ValueError(f"unknown identity tag {text!r}") from None


@dataclass
class VerificationReport:
    """Outcome of checking one identity.

    ``passed`` is ``max_abs_discrepancy <= tolerance``.  Rows with
    ``asserted=False`` are informational and never fail a suite.
    """

    identity: str
    lhs_norm: float
    rhs_norm: float
    max_abs_discrepancy: float
    tolerance: float
    variant: str = ""
    asserted: bool = True
    alpha: float = float("nan")
    layer: str = ""
    notes: list[str] = field(default_factory=list)
    variants: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        d = self.max_abs_discrepancy
        return bool(math.isfinite(d) and d <= self.tolerance)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["pass"] = self.passed
        return out

    def to_text(self) -> str:
        lines = [
            f"identity: {self.identity}",
            f"layer: {self.layer}",
            f"alpha: {self.alpha!r}",
            f"lhs_norm: {self.lhs_norm!r}",
            f"rhs_norm: {self.rhs_norm!r}",
            f"max_abs_discrepancy: {self.max_abs_discrepancy!r}",
            f"tolerance: {self.tolerance!r}",
            f"pass: {str(self.passed).lower()}",
            f"asserted: {str(self.asserted).lower()}",
            f"variant: {self.variant}",
        ]
        for name, disc in self.variants.items():
            lines.append(f"variant[{name}]: {disc!r}")
        for n in self.notes:
            lines.append(f"note: {n}")
        return "\n".join(lines)


def dump_reports(reports, path=None) -> str:
    """Serialize reports as a deterministic JSON document."""
    doc = {
        "reports": [r.to_dict() for r in reports],
        "all_asserted_pass": all(r.passed for r in reports if r.asserted),
    }
    text = json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def _json_default(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, float):
        return repr(obj)
    raise TypeError(type(obj))
