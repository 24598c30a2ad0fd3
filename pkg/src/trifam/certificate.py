"""Machine-readable records of verified claims."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, asdict
from pathlib import Path

SCHEMA_VERSION = 1
TOOL_VERSION = "0.1.0"

VERIFIED = "verified"
FALSIFIED = "falsified"
ERROR = "error"


@dataclass
class Certificate:
    claim_id: str
    status: str
    inputs: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    counters: dict = field(default_factory=dict)
    seed: int | None = None
    elapsed_ms: float | None = None
    schema_version: int = SCHEMA_VERSION
    tool_version: str = TOOL_VERSION

    def __post_init__(self):
        if self.status not in (VERIFIED, FALSIFIED, ERROR):
            raise ValueError(f"bad status {self.status!r}")
        if self.status == FALSIFIED and not self.witnesses:
            raise ValueError(f"falsified certificate {self.claim_id!r} needs a witness")

    @property
    def ok(self) -> bool:
        return self.status == VERIFIED

    def to_dict(self, timing: bool = True) -> dict:
        d = asdict(self)
        if not timing:
            d.pop("elapsed_ms")
        return d

    def to_json(self, timing: bool = True) -> str:
        return dumps(self.to_dict(timing))

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        return cls(**d)


def verdict(claim_id: str, witnesses: list, **kwargs) -> Certificate:
    """Certificate that is verified iff there are no counterexample witnesses."""
    status = FALSIFIED if witnesses else VERIFIED
    return Certificate(claim_id, status, witnesses=witnesses, **kwargs)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(path, obj):
    path = Path(path)
    if path.parent:
        path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(obj, Certificate):
        obj = obj.to_dict()
    path.write_text(dumps(obj), encoding="utf-8")


class Stopwatch:
    def __enter__(self):
        self._t0 = time.perf_counter()
        self.ms = 0.0
        return self

    def __exit__(self, *exc):
        self.ms = round((time.perf_counter() - self._t0) * 1000, 3)
        return False
