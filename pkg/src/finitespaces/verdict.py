"""Three-valued (plus window-scoped) verdicts with witnesses and rule tags."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional


class Value(enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"
    WINDOW_YES = "WindowYes"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Verdict:
    """Outcome of a decision procedure.

    ``witness`` names the smallest failing datum when ``value`` is No; ``rule``
    tags the criterion that produced the answer; ``window`` is the degree window
    (lo, hi) when the answer is only certified on that window.
    """

    value: Value
    rule: str = ""
    witness: Any = None
    window: Optional[tuple] = None
    detail: str = ""

    def __bool__(self):
        return self.value in (Value.YES, Value.WINDOW_YES)

    @property
    def is_no(self):
        return self.value is Value.NO

    @property
    def is_unknown(self):
        return self.value is Value.UNKNOWN

    def to_dict(self):
        d = {"value": self.value.value, "rule": self.rule}
        d["witness"] = _jsonable(self.witness)
        d["window"] = list(self.window) if self.window is not None else None
        if self.detail:
            d["detail"] = self.detail
        return d

    def __str__(self):
        s = self.value.value
        if self.window is not None and self.value is Value.WINDOW_YES:
            s += f" (verified on window [{self.window[0]},{self.window[1]}])"
        if self.witness is not None:
            s += f" witness={self.witness!r}"
        if self.rule:
            s += f" [{self.rule}]"
        return s


def _jsonable(x):
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


def yes(rule, window=None, detail=""):
    if window is not None:
        return Verdict(Value.WINDOW_YES, rule, None, tuple(window), detail)
    return Verdict(Value.YES, rule, None, None, detail)


def no(rule, witness, detail=""):
    return Verdict(Value.NO, rule, witness, None, detail)


def unknown(rule, witness=None, detail=""):
    return Verdict(Value.UNKNOWN, rule, witness, None, detail)


def conjunction(verdicts: Iterable[Verdict], rule: str) -> Verdict:
    """AND of verdicts. The first No (in iteration order) wins, then Unknown,
    then WindowYes; callers iterate in "smallest datum first" order so the
    reported witness is the smallest failing one."""
    window = None
    unk = None
    for v in verdicts:
        if v.value is Value.NO:
            return v
        if v.value is Value.UNKNOWN and unk is None:
            unk = v
        if v.value is Value.WINDOW_YES:
            window = v.window
    if unk is not None:
        return unk
    return yes(rule, window)
