"""Verdicts and machine-readable verification reports."""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any
from pathlib import Path

from .numerics import Interval, interval_to_json, rational_to_json


class Verdict(str, enum.Enum):
    VERIFIED = "verified"
    REFUTED = "refuted"
    UNDECIDED = "undecided"

    def __str__(self) -> str:
        return self.value


def combine(verdicts) -> Verdict:
    """Refuted beats undecided beats verified; empty input is verified."""
    verdicts = list(verdicts)
    if Verdict.REFUTED in verdicts:
        return Verdict.REFUTED
    if Verdict.UNDECIDED in verdicts:
        return Verdict.UNDECIDED
    return Verdict.VERIFIED


def _as_interval(value) -> Interval:
    return value if isinstance(value, Interval) else Interval.point(value)


def compare_ge(lhs, rhs) -> Verdict:
    """Certified lhs >= rhs: verified if lhs.lo >= rhs.hi, refuted if lhs.hi < rhs.lo."""
    a, b = _as_interval(lhs), _as_interval(rhs)
    if a.lo >= b.hi:
        return Verdict.VERIFIED
    if a.hi < b.lo:
        return Verdict.REFUTED
    return Verdict.UNDECIDED


def compare_gt(lhs, rhs) -> Verdict:
    a, b = _as_interval(lhs), _as_interval(rhs)
    if a.lo > b.hi:
        return Verdict.VERIFIED
    if a.hi <= b.lo:
        return Verdict.REFUTED
    return Verdict.UNDECIDED


def _value_json(value) -> dict:
    if isinstance(value, Fraction):
        out = interval_to_json(Interval.point(value))
        out["exact"] = rational_to_json(value)
        return out
    return interval_to_json(_as_interval(value))


def _input_json(value):
    if isinstance(value, Fraction):
        return rational_to_json(value)
    if isinstance(value, Interval):
        return interval_to_json(value)
    if isinstance(value, dict):
        return {k: _input_json(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_input_json(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


@dataclass
class Evidence:
    """One checked comparison ``lhs relation rhs``."""

    input: Any
    lhs: Any
    rhs: Any
    relation: str = ">="
    verdict: Verdict = Verdict.VERIFIED

    def to_json(self) -> dict:
        return {
            "input": _input_json(self.input),
            "relation": self.relation,
            "lhs": _value_json(self.lhs),
            "rhs": _value_json(self.rhs),
            "verdict": self.verdict.value,
        }


@dataclass
class VerificationReport:
    claim: str
    verdict: Verdict
    evidence: list[Evidence] = field(default_factory=list)
    precision: float = 1e-12
    bits: int = 64
    notes: list[str] = field(default_factory=list)
    components: list["VerificationReport"] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return self.verdict is Verdict.VERIFIED

    def failing(self) -> list[Evidence]:
        return [e for e in self.evidence if e.verdict is not Verdict.VERIFIED]

    def to_json(self) -> dict:
        out = {
            "claim": self.claim,
            "verdict": self.verdict.value,
            "precision": self.precision,
            "bits": self.bits,
            "evidence": [e.to_json() for e in self.evidence],
        }
        if self.notes:
            out["notes"] = list(self.notes)
        if self.components:
            out["components"] = [c.to_json() for c in self.components]
        return out

    def summary(self) -> str:
        bad = len(self.failing())
        line = f"{self.claim}: {self.verdict.value} ({len(self.evidence)} checks"
        if bad:
            line += f", {bad} not verified"
        return line + ")"


REPORT_SCHEMA_PATH = Path(__file__).with_name("report_schema.json")


def load_report_schema() -> dict:
    return json.loads(REPORT_SCHEMA_PATH.read_text())
