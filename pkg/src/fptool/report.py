"""Check/report records emitted by the verification routines."""

from __future__ import annotations

from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
EVIDENCE = "evidence"


@dataclass
class Check:
    name: str
    status: str
    detail: str = ""
    witness: tuple = ()
    e_max: int | None = None

    def __post_init__(self):
        if self.status not in (PASS, FAIL, EVIDENCE):
            raise ValueError(f"bad check status {self.status!r}")
        if self.status == FAIL and not self.witness:
            raise ValueError(f"failed check {self.name!r} needs a witness")
        self.witness = tuple(str(w) for w in self.witness)


@dataclass
class Report:
    kind: str
    checks: list = field(default_factory=list)
    values: dict = field(default_factory=dict)
    assumptions: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(c.status != FAIL for c in self.checks)

    def check(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def status(self, name):
        return self.check(name).status


def inclusion_check(name, small, big, e_max=None, on_failure=FAIL, detail=""):
    """Check ``small ⊆ big``; a failure lists the generators of ``small`` outside."""
    gb = big.groebner()
    outside = [g for g in small.generators if gb.reduce(g)]
    if not outside:
        return Check(name, PASS, detail, (), e_max)
    return Check(name, on_failure, detail, tuple(outside[:5]), e_max)
