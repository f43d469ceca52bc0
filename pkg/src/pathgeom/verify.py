"""Residual collection and zero-test policy shared by all identity checks.

Every check builds a :class:`CheckReport`, feeds it residuals that must
vanish, and ends with a status.  Whether a residual counts as zero is
decided by the active :class:`ZeroTest`, exact by default.
"""

from __future__ import annotations

import contextlib
import contextvars
import random
import time
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .expr import RatExpr, random_zero_test

PASS, FAIL, SKIP, UNSUPPORTED = "PASS", "FAIL", "SKIP", "UNSUPPORTED"


@dataclass(frozen=True)
class ZeroTest:
    """Zero-test policy: ``exact`` or ``randomized`` (seeded, one-sided)."""

    mode: str = "exact"
    seed: int = 0
    trials: int = 32
    bound: int = 100

    def __post_init__(self):
        if self.mode not in ("exact", "randomized"):
            raise ValueError(f"unknown zero-test mode {self.mode!r}")
        if self.trials < 1 or self.bound < 1:
            raise ValueError("trials and bound must be positive")

    def rng_for(self, check_id: str) -> random.Random:
        return random.Random(f"{self.seed}:{check_id}")


_policy: contextvars.ContextVar[ZeroTest] = contextvars.ContextVar("zero_test", default=ZeroTest())


def current_policy() -> ZeroTest:
    return _policy.get()


@contextlib.contextmanager
def zero_test_policy(policy: ZeroTest) -> Iterator[None]:
    token = _policy.set(policy)
    try:
        yield
    finally:
        _policy.reset(token)


@dataclass
class Failure:
    label: str
    residual: str


class CheckFailed(AssertionError):
    """Raised by :meth:`CheckReport.require` when a report did not pass."""


@dataclass
class CheckReport:
    """Outcome of one verification check.

    ``failures`` lists every nonzero residual; ``witness`` is the first one.
    ``notes`` carries informational lines (flags, conventions used).
    """

    id: str
    coords: Sequence[str] | None = None
    checked: int = 0
    failures: list[Failure] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    skipped: str | None = None
    unsupported: str | None = None
    millis: float = 0.0
    _t0: float = field(default_factory=time.perf_counter, repr=False)
    _rng: random.Random | None = field(default=None, repr=False)

    # -- feeding residuals -------------------------------------------

    def _is_zero(self, e: RatExpr) -> bool:
        if not e.num.terms:
            return True
        pol = current_policy()
        if pol.mode == "exact":
            return False
        if self._rng is None:
            self._rng = pol.rng_for(self.id)
        return random_zero_test(e, pol.trials, pol.bound, self._rng)

    def zero(self, label: str, e: RatExpr) -> bool:
        """Record that ``e`` must vanish."""
        self.checked += 1
        if self._is_zero(e):
            return True
        self.failures.append(Failure(label, e.format(self.coords)))
        return False

    def equal(self, label: str, a: RatExpr, b: RatExpr) -> bool:
        return self.zero(label, a - b)

    def true(self, label: str, cond: bool, detail: str = "") -> bool:
        self.checked += 1
        if not cond:
            self.failures.append(Failure(label, detail or "condition is false"))
        return cond

    def note(self, msg: str) -> None:
        self.notes.append(msg)

    def merge(self, other: CheckReport, prefix: str = "") -> None:
        self.checked += other.checked
        self.failures.extend(Failure(prefix + f.label, f.residual) for f in other.failures)
        self.notes.extend(other.notes)

    # -- outcome ------------------------------------------------------

    def finish(self) -> CheckReport:
        self.millis = (time.perf_counter() - self._t0) * 1000.0
        return self

    @property
    def status(self) -> str:
        if self.unsupported is not None:
            return UNSUPPORTED
        if self.skipped is not None:
            return SKIP
        return FAIL if self.failures else PASS

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def witness(self) -> str | None:
        if self.status == SKIP:
            return self.skipped
        if self.status == UNSUPPORTED:
            return self.unsupported
        if not self.failures:
            return None
        f = self.failures[0]
        return f"{f.label}: {f.residual}"

    def require(self) -> CheckReport:
        if not self.passed:
            raise CheckFailed(f"{self.id}: {self.status} {self.witness}")
        return self

    def summary(self) -> str:
        w = f" [{self.witness}]" if self.witness else ""
        return f"{self.id}: {self.status} ({self.checked} residuals, {len(self.failures)} nonzero){w}"
