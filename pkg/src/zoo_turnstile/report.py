"""Requirements traceability document.

Each requirement is listed with its natural-language text next to its
formal rendering, the tests that exercise it and, when a trace is given,
the verdict the checker reached on it.
"""

from __future__ import annotations

import json
from typing import Any, Sequence

from .checker import CheckReport
from .contracts import Requirement

TEST_REFERENCES: dict[str, tuple[str, ...]] = {
    "OPT1": (
        "tests/test_contracts.py::test_opt1_invariant",
        "tests/test_checker.py::test_opt1_violation_position",
        "tests/test_acceptance.py::test_ac3_refinement",
    ),
    "IND2": (
        "tests/test_contracts.py::test_ind2_guard",
        "tests/test_checker.py::test_push_on_locked_turnstile_is_inadmissible",
        "tests/test_acceptance.py::test_ac5_kernel_invariants",
    ),
    "OPT7": (
        "tests/test_contracts.py::test_opt7_response",
        "tests/test_checker.py::test_unanswered_push_violates_opt7",
        "tests/test_acceptance.py::test_ac1_deadline_boundary",
    ),
    "OPT2": (
        "tests/test_contracts.py::test_opt2_enabledness",
        "tests/test_checker.py::test_enabledness_checked_when_world_acts",
        "tests/test_acceptance.py::test_ac3_refinement",
    ),
}


def traceability(
    registry: Sequence[Requirement], check: CheckReport | None = None
) -> list[dict[str, Any]]:
    rows = []
    for req in registry:
        row = req.to_dict()
        row["tests"] = list(TEST_REFERENCES.get(req.label, ()))
        if check is not None:
            row["verdict"] = check.verdict(req.label).to_dict()
        rows.append(row)
    return rows


def render_machine(rows: list[dict[str, Any]]) -> str:
    return json.dumps({"requirements": rows}, indent=2, sort_keys=True) + "\n"


def render_human(rows: list[dict[str, Any]]) -> str:
    out = [f"Requirements traceability ({len(rows)} requirements)", ""]
    for row in rows:
        header = f"{row['label']}  {row['mood']} {row['kind']}  (scope: {row['scope']})"
        out.append(header)
        out.append(f"  text:     {row['text']}")
        out.append(f"  formal:   {row['formal']}")
        if "deadline_ms" in row:
            out.append(f"  deadline: < {row['deadline_ms']} ms until {row['response']}")
        for ref in row["tests"]:
            out.append(f"  test:     {ref}")
        if "verdict" in row:
            verdict = row["verdict"]
            line = verdict["status"]
            if "position" in verdict:
                line += f" at event {verdict['position']}"
            out.append(f"  verdict:  {line}")
        out.append("")
    return "\n".join(out)
