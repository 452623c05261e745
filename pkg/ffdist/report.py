#!/usr/bin/env python3
"""
Verification reports: a list of named checks plus CSV-ready tables.

JSON output is byte-stable: keys are sorted, floats are cut to
SIGNIFICANT_DIGITS significant digits, complex numbers become
{"re", "im"} and infinities become the string "inf".
"""

import io
import logging
import math
from typing import Any, Dict, List, Optional

import numpy as np
import orjson
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator

from ffdist import __version__, config

logger = logging.getLogger(__name__)

EXPLORATORY = "exploratory"

# Stable identifiers for the statement each check exercises
ANCHORS = frozenset({
    "field-axioms",
    "frobenius",
    "character-orthogonality",
    "quadratic-character",
    "gauss-closed-form",
    "gauss-multiplicativity",
    "square-sum",
    "completed-square",
    "kloosterman-bound",
    "polynomial-bound",
    "sphere-cardinality",
    "sphere-partition",
    "pair-count",
    "color-size",
    "fourier-transform",
    "inversion",
    "plancherel",
    "fourier-decay",
    "averaged-decay",
    "one-dimensional-reduction",
    "salem",
    "sphere-intersection",
    "never-two",
    "chain-positivity",
    "diameter-sharp",
    "diameter-oracle",
    "salem-diameter",
    "square-class-invariance",
    "two-distance",
    "configuration-count",
    "configuration-trend",
    "pseudo-ap",
    "null-vector",
    "pseudo-random",
    EXPLORATORY,
})


def normalize(value: Any) -> Any:
    """Convert a result tree into JSON-ready, diff-stable primitives."""
    if isinstance(value, BaseModel):
        return normalize(value.model_dump(by_alias=True))
    if isinstance(value, dict):
        return {str(k): normalize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [normalize(v) for v in value]
    if isinstance(value, np.ndarray):
        return [normalize(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": normalize(float(value.real)), "im": normalize(float(value.imag))}
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        value = float(f"{value:.{config.SIGNIFICANT_DIGITS}g}")
        return 0.0 if value == 0 else value
    return value


class Check(BaseModel):
    """One verified statement."""

    model_config = ConfigDict(populate_by_name=True)

    name: str
    anchor: str
    expected: Any = None
    observed: Any = None
    tolerance: Optional[float] = None
    passed: bool = Field(alias="pass")

    @field_validator("anchor")
    @classmethod
    def known_anchor(cls, value: str) -> str:
        if value not in ANCHORS:
            raise ValueError(f"unknown anchor {value!r}")
        return value

    @property
    def exploratory(self) -> bool:
        return self.anchor == EXPLORATORY


def check(name: str, anchor: str, passed: bool, expected: Any = None, observed: Any = None,
          tolerance: Optional[float] = None) -> Check:
    return Check(name=name, anchor=anchor, expected=expected, observed=observed,
                 tolerance=tolerance, passed=bool(passed))


class Meta(BaseModel):
    tool: str = "ffdist"
    version: str = __version__
    command: str
    seed: Optional[int] = None
    field: Optional[str] = None
    timestamp: Optional[str] = None


class Report(BaseModel):
    """
    meta + checks + tables + free-form results of one command.

    The overall verdict is the conjunction of the non-exploratory checks.
    """

    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(default=config.SCHEMA_VERSION, alias="schema")
    meta: Meta
    checks: List[Check] = Field(default_factory=list)
    tables: Dict[str, List[Dict[str, Any]]] = Field(default_factory=dict)
    results: Dict[str, Any] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.exploratory)

    def add(self, *checks: Check) -> "Report":
        self.checks.extend(checks)
        return self

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed and not c.exploratory]

    # ------------------------------------------------------------------
    # serialization
    # ------------------------------------------------------------------

    def to_data(self) -> Dict[str, Any]:
        data = normalize({
            "schema": self.schema_version,
            "meta": self.meta,
            "checks": self.checks,
            "tables": self.tables,
            "results": self.results,
        })
        data["pass"] = self.passed
        return data

    def to_json(self) -> bytes:
        return orjson.dumps(self.to_data(), option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2) + b"\n"

    def to_csv(self) -> str:
        """The checks table, followed by every named table under a '# table:' header."""
        data = self.to_data()
        out = io.StringIO()
        checks = pd.DataFrame(
            [{**c, "expected": _cell(c["expected"]), "observed": _cell(c["observed"])} for c in data["checks"]],
            columns=["name", "anchor", "expected", "observed", "tolerance", "pass"],
        )
        checks.to_csv(out, index=False, lineterminator="\n")
        for name in sorted(data["tables"]):
            out.write(f"\n# table: {name}\n")
            rows = [{k: _cell(v) for k, v in row.items()} for row in data["tables"][name]]
            pd.DataFrame(rows).to_csv(out, index=False, lineterminator="\n")
        return out.getvalue()

    def to_text(self) -> str:
        data = self.to_data()
        lines = ["=" * 60, f"ffdist {data['meta']['command']}", "=" * 60]
        if data["meta"].get("field"):
            lines.append(f"Field: {data['meta']['field']}")
        for key in sorted(data["results"]):
            lines.append(f"   {key}: {_cell(data['results'][key])}")
        if data["checks"]:
            lines.append("")
        for c in data["checks"]:
            mark = "✅" if c["pass"] else ("⚠️ " if c["anchor"] == EXPLORATORY else "❌")
            lines.append(f"{mark} {c['name']}: observed {_cell(c['observed'])}, expected {_cell(c['expected'])}")
        lines.append("=" * 60)
        total = len(data["checks"])
        failed = len(self.failures())
        lines.append(f"{'✅ PASS' if self.passed else '❌ FAIL'} ({total - failed}/{total} checks)")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> bytes:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv().encode()
        if fmt == "text":
            return self.to_text().encode()
        raise ValueError(f"unknown format {fmt!r}")


def _cell(value: Any) -> Any:
    if isinstance(value, dict) and set(value) == {"re", "im"}:
        return f"{value['re']}{'+' if not str(value['im']).startswith('-') else ''}{value['im']}i"
    if isinstance(value, (dict, list)):
        return orjson.dumps(value, option=orjson.OPT_SORT_KEYS).decode()
    return value
