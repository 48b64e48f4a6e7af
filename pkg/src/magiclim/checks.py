"""Check records shared by every verifier, and the error they raise."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class Check:
    """Outcome of one verified law.

    ``anchor`` names the identity being checked (the formula as written in
    the source construction); ``witness`` is set on failure.
    """

    id: str
    description: str
    anchor: str
    passed: bool
    witness: str | None = None

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def prefixed(self, prefix: str) -> "Check":
        return Check(f"{prefix}.{self.id}" if prefix else self.id, self.description, self.anchor, self.passed, self.witness)


class VerificationError(ValueError):
    """A required law failed; ``checks`` holds the failing records."""

    def __init__(self, message: str, checks: Iterable[Check] = (), witness=None):
        self.checks = tuple(checks)
        self.witness = witness
        detail = "; ".join(f"{c.id}: {c.witness}" for c in self.checks if not c.passed)
        super().__init__(f"{message} ({detail})" if detail else message)


def require(checks: Iterable[Check], message: str, witness=None) -> tuple[Check, ...]:
    checks = tuple(checks)
    failed = [c for c in checks if not c.passed]
    if failed:
        raise VerificationError(message, failed, witness)
    return checks


def check(id: str, description: str, anchor: str, passed: bool, witness=None) -> Check:
    return Check(id, description, anchor, bool(passed), None if passed or witness is None else str(witness))
