"""Machine-checkable records of verified inequalities."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Row:
    """One checked inequality ``left <op> bound`` with its parameters."""

    ineq: str
    params: dict
    left: object
    bound: object
    passed: bool
    note: str = ""

    def to_dict(self):
        d = {
            "ineq": self.ineq,
            "params": self.params,
            "left": _jsonable(self.left),
            "bound": _jsonable(self.bound),
            "pass": self.passed,
        }
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class Certificate:
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, ineq, params, left, bound, passed, note=""):
        row = Row(ineq, dict(params), left, bound, bool(passed), note)
        self.rows.append(row)
        return row

    def extend(self, other):
        self.rows.extend(other.rows)

    @property
    def passed(self):
        return all(r.passed for r in self.rows)

    def failures(self):
        return [r for r in self.rows if not r.passed]

    def by_ineq(self, ineq):
        return [r for r in self.rows if r.ineq == ineq]

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def to_jsonl(self):
        """One JSON object per row, preceded by a header line."""
        header = {"schema_version": SCHEMA_VERSION, "rows": len(self.rows), "pass": self.passed}
        header.update({k: _jsonable(v) for k, v in self.meta.items()})
        lines = [json.dumps(header, sort_keys=True)]
        lines += [json.dumps(r.to_dict(), sort_keys=True) for r in self.rows]
        return "\n".join(lines) + "\n"


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if v is None or isinstance(v, (bool, int, float, str)):
        return v
    return str(v)
