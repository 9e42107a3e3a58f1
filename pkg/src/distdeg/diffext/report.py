"""Deterministic verification records."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


def exact_str(v):
    """Exact values as strings, everything else unchanged."""
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, (int, Fraction)):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [exact_str(x) for x in v]
    if isinstance(v, dict):
        return {str(k): exact_str(x) for k, x in v.items()}
    return str(v)


@dataclass
class CheckRecord:
    prop: str
    params: dict
    expected: object
    provenance: str
    computed: object
    passed: bool

    def to_dict(self):
        return {
            "property": self.prop,
            "params": exact_str(self.params),
            "expected": exact_str(self.expected),
            "provenance": self.provenance,
            "computed": exact_str(self.computed),
            "passed": self.passed,
        }


@dataclass
class TrialRecord:
    stage: int
    name: str
    prime: int
    seed: int
    result: str

    def to_dict(self):
        return {"stage": self.stage, "name": self.name, "prime": str(self.prime), "seed": self.seed, "result": self.result}


@dataclass
class VerificationReport:
    records: list = field(default_factory=list)
    trials: list = field(default_factory=list)

    def check(self, prop, computed, expected, provenance="identity", **params):
        ok = computed == expected
        self.records.append(CheckRecord(prop, params, expected, provenance, computed, ok))
        return ok

    def assert_true(self, prop, value, provenance="identity", **params):
        return self.check(prop, bool(value), True, provenance, **params)

    @property
    def passed(self):
        return all(r.passed for r in self.records)

    @property
    def failures(self):
        return [r for r in self.records if not r.passed]

    def merge(self, other):
        self.records.extend(other.records)
        self.trials.extend(other.trials)
        return self

    def to_dict(self):
        recs = sorted((r.to_dict() for r in self.records), key=lambda d: (d["property"], repr(sorted(d["params"].items()))))
        return {
            "passed": self.passed,
            "records": recs,
            "trials": [t.to_dict() for t in self.trials],
        }
