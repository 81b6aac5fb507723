"""Check records shared by the verification suites."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, List


@dataclass(frozen=True)
class IdentityCheck:
    """
    Worst value of one identity over a grid.

    ``value`` must stay at or below ``bound``, or at or above it when
    ``at_least`` is set (observed convergence orders).
    """

    name: str
    value: float
    bound: float
    worst_input: str = ""
    at_least: bool = False

    @property
    def passed(self) -> bool:
        if self.at_least:
            return self.value >= self.bound
        return self.value <= self.bound


@dataclass(frozen=True)
class CheckFailure:
    """Represents a single failed identity."""

    message: str


class SuiteFailure(ValueError):
    """Raised when a verification suite has failing identities."""

    def __init__(self, suite: str, errors: List[CheckFailure]) -> None:
        super().__init__(f"{suite} verification failed.")
        self.suite = suite
        self.errors = errors


@dataclass
class SuiteReport:
    """Ordered identity checks of one suite run."""

    suite: str
    checks: list[IdentityCheck] = field(default_factory=list)
    constants: dict[str, float] = field(default_factory=dict)

    def add(self, check: IdentityCheck) -> None:
        self.checks.append(check)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> list[CheckFailure]:
        return [
            CheckFailure(
                f"{c.name}: {c.value:.3e} {'<' if c.at_least else '>'} {c.bound:.1e} "
                f"at {c.worst_input}"
            )
            for c in self.checks
            if not c.passed
        ]

    def raise_on_failure(self) -> None:
        """
        :raises SuiteFailure: If any check exceeds its tolerance.
        """
        errors = self.failures()
        if errors:
            raise SuiteFailure(self.suite, errors)

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "checks": [asdict(c) | {"passed": c.passed} for c in self.checks],
            "constants": dict(self.constants),
        }
