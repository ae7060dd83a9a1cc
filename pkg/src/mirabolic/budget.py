"""Step budget shared by the enumeration code."""

from __future__ import annotations

import os

DEFAULT_BUDGET = 10 ** 9


class BudgetExceeded(RuntimeError):
    def __init__(self, needed: int, budget: int, what: str = ""):
        super().__init__(f"budget exceeded{': ' + what if what else ''} (estimate {needed} steps > budget {budget})")
        self.needed = needed
        self.budget = budget


def current_budget() -> int:
    raw = os.environ.get("MIRABOLIC_BUDGET")
    if raw:
        return int(float(raw))
    return DEFAULT_BUDGET


def check(needed: int, what: str = "", budget: int | None = None) -> None:
    b = current_budget() if budget is None else budget
    if needed > b:
        raise BudgetExceeded(needed, b, what)
