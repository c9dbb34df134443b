"""Deterministic check reports: records, tables, byte-stable JSON."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

__all__ = ["Record", "Report"]


@dataclass
class Record:
    """One named check: a residual or a count against its threshold."""

    name: str
    value: float
    threshold: float | None = None
    kind: str = "residual"  # residual | count | equality

    @property
    def passed(self) -> bool:
        if self.kind == "residual":
            return self.threshold is not None and self.value < self.threshold
        if self.kind == "count":
            return self.threshold is not None and self.value == self.threshold
        return bool(self.value)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "value": self.value,
            "threshold": self.threshold,
            "pass": self.passed,
        }


@dataclass
class Report:
    """Aggregated result of one CLI command run."""

    command: str
    fingerprint: str
    config: dict
    records: list[Record] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, name: str, value, threshold=None, kind: str = "residual") -> Record:
        rec = Record(name=name, value=float(value), threshold=threshold, kind=kind)
        self.records.append(rec)
        return rec

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def as_json(self) -> str:
        """Byte-stable serialisation (no timing data)."""
        doc = {
            "command": self.command,
            "fingerprint": self.fingerprint,
            "config": self.config,
            "records": [r.as_dict() for r in self.records],
            "pass": self.passed,
        }
        if self.data:
            doc["data"] = self.data
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def as_table(self) -> str:
        width = max([len(r.name) for r in self.records] + [4])
        lines = [f"command: {self.command}",
                 f"fingerprint: {self.fingerprint}"]
        for key in sorted(self.config):
            lines.append(f"{key}: {self.config[key]}")
        header = f"{'name'.ljust(width)}  {'value':>14}  {'threshold':>12}  status"
        lines.append(header)
        lines.append("-" * len(header))
        for r in self.records:
            thr = "-" if r.threshold is None else f"{r.threshold:g}"
            val = f"{r.value:.3e}" if r.kind == "residual" else f"{r.value:g}"
            lines.append(f"{r.name.ljust(width)}  {val:>14}  {thr:>12}  "
                         f"{'pass' if r.passed else 'FAIL'}")
        for key in sorted(self.data):
            val = self.data[key]
            if isinstance(val, list) and val and isinstance(val[0], dict):
                lines.append(f"{key}:")
                for row in val:
                    lines.append("  " + "  ".join(f"{k}={row[k]}" for k in sorted(row)))
            else:
                lines.append(f"{key}: {val}")
        lines.append(f"overall: {'pass' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"
