"""Structured results of identity checks."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckReport:
    name: str
    ok: bool
    cases: int = 1
    detail: str = ""
    counterexample: str | None = None
    extra: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        out = f"{status} {self.name} ({self.cases} cases)"
        if self.detail:
            out += f": {self.detail}"
        if self.counterexample:
            out += f" [{self.counterexample}]"
        return out


def combine(name: str, reports) -> CheckReport:
    reports = list(reports)
    bad = [r for r in reports if not r.ok]
    first = bad[0] if bad else None
    return CheckReport(
        name=name,
        ok=not bad,
        cases=sum(r.cases for r in reports),
        detail=f"{len(bad)} failing" if bad else "",
        counterexample=(first.counterexample or first.detail or first.name) if first else None,
    )


def map_difference(lhs, rhs) -> str | None:
    """Human description of the first entry where two MultiMaps differ, or None."""
    d = lhs.first_difference(rhs)
    if d is None:
        return None
    tup, a, b = d
    return (f"at {lhs.describe_tuple(tup)}: {lhs.target.format_vector(a)}"
            f" != {rhs.target.format_vector(b)}")
