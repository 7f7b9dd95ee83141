"""Run reports: one per CLI invocation, rendered as text or canonical JSON."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from .io import to_plain

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_CAP = 3


@dataclass
class Report:
    verb: str
    inputs: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    resources: dict = field(default_factory=dict)
    exit_status: int = EXIT_OK
    data: dict = field(default_factory=dict)

    def fail(self, status=EXIT_FAILED):
        # a cap hit outranks a plain failure, a usage error outranks both
        rank = {EXIT_OK: 0, EXIT_FAILED: 1, EXIT_CAP: 2, EXIT_USAGE: 3}
        if rank[status] > rank[self.exit_status]:
            self.exit_status = status


def render_json(r: Report) -> str:
    """Canonical form: sorted keys, fixed separators, trailing newline."""
    return json.dumps(to_plain(asdict(r)), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def parse_report(text: str) -> Report:
    d = json.loads(text)
    return Report(d["verb"], d.get("inputs", {}), d.get("verdicts", {}), d.get("witnesses", {}),
                  d.get("resources", {}), d.get("exit_status", EXIT_OK), d.get("data", {}))


def _short(v):
    s = json.dumps(to_plain(v), sort_keys=True)
    return s if len(s) <= 200 else s[:197] + "..."


def render_text(r: Report) -> str:
    lines = [f"{r.verb}: " + {0: "OK", 1: "FAILED", 2: "ERROR", 3: "UNKNOWN (cap hit)"}[r.exit_status]]
    for k, v in r.inputs.items():
        lines.append(f"  input {k}: {v}")
    for k, v in r.verdicts.items():
        lines.append(f"  {k}: {v if isinstance(v, (str, bool, int)) else _short(v)}")
    for k, v in r.witnesses.items():
        lines.append(f"  witness {k}: {_short(v)}")
    for k, v in r.data.items():
        lines.append(f"  {k}: {_short(v)}")
    return "\n".join(lines) + "\n"
