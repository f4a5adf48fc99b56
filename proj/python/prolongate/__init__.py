"""Python front end to the prolongation engine."""

import json
from dataclasses import dataclass, field

from ._core import ParseError, Problem, __version__, bundled_dir, commands
from ._core import run as _run

__all__ = ["Report", "run", "Problem", "ParseError", "commands", "bundled_dir", "__version__"]


@dataclass
class Report:
    exit_code: int
    header: dict
    records: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    text: str = ""

    @property
    def passed(self):
        return self.exit_code == 0

    def failed(self):
        return [r for r in self.records if r["verdict"] not in ("pass", "info", "inconclusive")]


def run(command, problem, *, seed=1, points=100, tol=1e-9, golden="", route="reduced", timing=True):
    code, lines, text = _run(command, problem, seed, points, tol, golden, route, timing)
    recs = [json.loads(line) for line in lines.splitlines() if line]
    return Report(code, recs[0], recs[1:-1], recs[-1], text)
