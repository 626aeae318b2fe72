"""Verification reports and the single sink that writes them."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path


def make_report(statement: str, instance, lhs, rhs, verdict: bool, witnesses=None) -> dict:
    return {
        "statement": statement,
        "instance": instance,
        "lhs": lhs,
        "rhs": rhs,
        "verdict": "pass" if verdict else "fail",
        "witnesses": witnesses if witnesses is not None else [],
    }


def _plain(x):
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if hasattr(x, "to_obj"):
        return _plain(x.to_obj())
    return str(x)


def dumps(obj) -> str:
    return json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n"


class ReportSink:
    """Collects reports in submission order and renders them once."""

    def __init__(self, command: str, config: dict):
        self.command = command
        self.config = dict(config)
        self.reports: list[dict] = []
        self.table: list[dict] = []
        self.truncated = False

    def add(self, report: dict):
        self.reports.append(report)

    def add_row(self, row: dict):
        self.table.append(row)

    @property
    def passed(self) -> bool:
        return all(r["verdict"] == "pass" for r in self.reports)

    def to_obj(self) -> dict:
        out = {"command": self.command, "config": self.config, "reports": self.reports, "verdict": "pass" if self.passed else "fail"}
        if self.table:
            out["table"] = self.table
        return out

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return dumps(self.to_obj())
        if fmt == "csv":
            return self.csv()
        lines = []
        for r in self.reports:
            lines.append(f"{r['verdict'].upper()}  {r['statement']}  [{_short(r['instance'])}]  lhs={_short(r['lhs'])}  rhs={_short(r['rhs'])}")
        for row in self.table:
            lines.append("  " + "  ".join(f"{k}={row[k]}" for k in _columns([row]) if k != "matrix"))
        lines.append(f"verdict: {'pass' if self.passed else 'fail'}")
        return "\n".join(lines) + "\n"

    def csv(self) -> str:
        buf = io.StringIO()
        if self.table:
            cols = [c for c in _columns(self.table) if c != "matrix"]
            rows = self.table
        else:
            cols = ["statement", "instance", "lhs", "rhs", "verdict"]
            rows = [{k: _short(r[k]) for k in cols} for r in self.reports]
        w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: row.get(k, "") for k in cols})
        return buf.getvalue()

    def write(self, out: str | None, fmt: str) -> str:
        text = self.render(fmt)
        if out:
            p = Path(out)
            p.parent.mkdir(parents=True, exist_ok=True)
            p.write_text(text)
            if self.table and fmt != "csv":
                p.with_suffix(".csv").write_text(self.csv())
        return text


def _columns(rows) -> list[str]:
    cols: list[str] = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    return cols


def _short(x) -> str:
    if isinstance(x, str):
        return x
    return json.dumps(_plain(x), sort_keys=True)
