"""Machine-readable verification reports with a deterministic canonical body."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .abgroups import AbGroup

PASS = "pass"
FAIL = "fail"
REPORT = "report"


@dataclass
class CheckRecord:
    name: str
    claim: str
    computed: str
    expected: str | None  # None means report-only
    status: str
    elapsed_ms: float = 0.0

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "claim": self.claim,
            "computed": self.computed,
            "expected": self.expected if self.expected is not None else "report-only",
            "status": self.status,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }


def make_check(
    name: str,
    claim: str,
    computed: AbGroup | str | bool,
    expected: AbGroup | str | bool | None,
    elapsed_ms: float = 0.0,
) -> CheckRecord:
    comp = str(computed)
    if expected is None:
        return CheckRecord(name, claim, comp, None, REPORT, elapsed_ms)
    exp = str(expected)
    status = PASS if comp == exp else FAIL
    return CheckRecord(name, claim, comp, exp, status, elapsed_ms)


def make_nontrivial_check(
    name: str, claim: str, computed: AbGroup, elapsed_ms: float = 0.0
) -> CheckRecord:
    """Pass iff the computed group is nontrivial; its value is reported."""
    status = PASS if not computed.is_trivial() else FAIL
    return CheckRecord(name, claim, str(computed), "nontrivial", status, elapsed_ms)


@dataclass
class Report:
    command: str
    group: str
    checks: list[CheckRecord] = field(default_factory=list)

    @property
    def overall(self) -> str:
        return FAIL if any(c.status == FAIL for c in self.checks) else PASS

    def canonical_body(self) -> dict:
        body = {
            "command": self.command,
            "group": self.group,
            "checks": [
                {k: v for k, v in c.to_json().items() if k != "elapsed_ms"}
                for c in self.checks
            ],
            "overall": self.overall,
        }
        return body

    def canonical_sha256(self) -> str:
        blob = json.dumps(self.canonical_body(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "group": self.group,
            "checks": [c.to_json() for c in self.checks],
            "overall": self.overall,
            "canonical_sha256": self.canonical_sha256(),
        }

    def render_json(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    def render_table(self) -> str:
        rows = [("check", "computed", "expected", "status", "ms")]
        for c in self.checks:
            rows.append(
                (
                    c.name,
                    c.computed,
                    c.expected if c.expected is not None else "report-only",
                    c.status,
                    f"{c.elapsed_ms:.0f}",
                )
            )
        widths = [max(len(r[k]) for r in rows) for k in range(5)]
        lines = [f"# {self.command}  [{self.group}]"]
        for idx, r in enumerate(rows):
            lines.append("  ".join(s.ljust(w) for s, w in zip(r, widths)).rstrip())
            if idx == 0:
                lines.append("-" * (sum(widths) + 8))
        lines.append(f"overall: {self.overall}")
        return "\n".join(lines)
