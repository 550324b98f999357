"""Three-valued bounded verdicts and the error type shared by every module."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

VERIFIED = "VERIFIED_UP_TO"
REFUTED = "REFUTED"
UNKNOWN = "UNKNOWN"

_STATUSES = (VERIFIED, REFUTED, UNKNOWN)


class ArtifactError(Exception):
    """Error carrying a stable machine-readable code such as ``MALFORMED_SPEC``."""

    def __init__(self, code: str, message: str = ""):
        super().__init__(f"{code}: {message}" if message else code)
        self.code = code
        self.message = message


@dataclass
class Verdict:
    """Result of a bounded check.

    Parameters
    ----------
    status : str
        One of ``VERIFIED_UP_TO``, ``REFUTED`` or ``UNKNOWN``.
    bound : int or None
        Horizon behind a ``VERIFIED_UP_TO``. ``None`` means the decision was
        exact (no horizon involved).
    witness : Any
        Finite, replayable witness for ``REFUTED`` (and for ``VERIFIED_UP_TO``
        when one exists).
    boundary : bool
        True when the evidence touched a truncation edge of the state space.
    evidence : dict
        Free-form supporting data (tables, per-pair results).
    """

    status: str
    bound: int | None = None
    witness: Any = None
    boundary: bool = False
    evidence: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in _STATUSES:
            raise ValueError(f"bad status {self.status!r}")

    @property
    def verified(self) -> bool:
        return self.status == VERIFIED

    @property
    def refuted(self) -> bool:
        return self.status == REFUTED

    @property
    def unknown(self) -> bool:
        return self.status == UNKNOWN

    @property
    def exact(self) -> bool:
        return self.status == VERIFIED and self.bound is None

    def label(self) -> str:
        if self.status == VERIFIED:
            return "VERIFIED" if self.bound is None else f"VERIFIED_UP_TO({self.bound})"
        return self.status


def verified(bound=None, witness=None, boundary=False, **evidence) -> Verdict:
    return Verdict(VERIFIED, bound, witness, boundary, evidence)


def refuted(witness, boundary=False, **evidence) -> Verdict:
    return Verdict(REFUTED, None, witness, boundary, evidence)


def unknown(boundary=False, witness=None, **evidence) -> Verdict:
    return Verdict(UNKNOWN, None, witness, boundary, evidence)


def to_jsonable(obj):
    """Deterministic JSON-ready form: fractions as ``"p/q"``, sets sorted, tuple keys stringified."""
    import json
    from collections import Counter
    from fractions import Fraction

    import numpy as np

    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Verdict):
        return {"status": obj.status, "label": obj.label(), "bound": obj.bound,
                "witness": to_jsonable(obj.witness), "boundary": obj.boundary,
                "evidence": to_jsonable(obj.evidence)}
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    if isinstance(obj, Counter):
        obj = dict(obj)
    if isinstance(obj, dict):
        out = {}
        for k, v in obj.items():
            key = k if isinstance(k, str) else json.dumps(to_jsonable(k), sort_keys=True)
            out[key] = to_jsonable(v)
        return out
    if isinstance(obj, (set, frozenset)):
        items = [to_jsonable(x) for x in obj]
        return sorted(items, key=lambda x: json.dumps(x, sort_keys=True))
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    return repr(obj)
