"""Run reports: one uniform, machine-readable envelope for every subcommand.

Reports are plain data. In deterministic mode two runs on the same input
produce byte-identical JSON apart from the timings block.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field


@dataclass
class RunReport:
    tool: dict
    subcommand: str
    input: dict
    parameters: dict
    results: dict
    timings: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


def make_report(version: str, subcommand: str, input_info: dict,
                parameters: dict, results: dict, total_s: float) -> RunReport:
    return RunReport(
        tool={"name": "invquot", "version": version},
        subcommand=subcommand,
        input=input_info,
        parameters=parameters,
        results=results,
        timings={"total_s": round(total_s, 4)},
    )
