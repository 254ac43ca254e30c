"""Cooperative step/deadline limits shared by all checkers."""

from __future__ import annotations

import time


class BudgetExceeded(Exception):
    """Raised when a checker runs past its step limit or deadline."""

    def __init__(self, steps: int, reason: str):
        super().__init__(f"budget exceeded after {steps} steps ({reason})")
        self.steps = steps
        self.reason = reason


class Budget:
    """Counts work units and polls a monotonic deadline.

    ``max_steps`` and ``timeout`` (seconds) are both optional; a budget with
    neither never fires.
    """

    POLL_EVERY = 256

    def __init__(self, max_steps: int | None = None, timeout: float | None = None):
        self.max_steps = max_steps
        self.deadline = None if timeout is None else time.monotonic() + timeout
        self.steps = 0

    def tick(self, n: int = 1) -> None:
        self.steps += n
        if self.max_steps is not None and self.steps > self.max_steps:
            raise BudgetExceeded(self.steps, "step limit")
        if self.deadline is not None and self.steps % self.POLL_EVERY < n:
            if time.monotonic() > self.deadline:
                raise BudgetExceeded(self.steps, "deadline")


def tick(budget: Budget | None, n: int = 1) -> None:
    if budget is not None:
        budget.tick(n)
