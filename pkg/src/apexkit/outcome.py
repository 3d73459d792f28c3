"""Shared result types for budgeted searches.

A budgeted search has three possible results: a witness, a definite
absence, or Indeterminate when the state budget ran out.  Indeterminate is
a first-class value so callers can never mistake it for "no".
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Indeterminate:
    """Search gave up before deciding; never treat as a negative answer."""

    reason: str
    states_explored: int = 0

    def __bool__(self) -> bool:
        raise TypeError("Indeterminate has no truth value; match on type instead")


class BudgetExceeded(Exception):
    """Internal signal used by searches to unwind when the budget is spent."""

    def __init__(self, states: int):
        super().__init__(f"search budget exhausted after {states} states")
        self.states = states


@dataclass
class Budget:
    """Mutable countdown of search states shared across a recursion."""

    limit: int
    used: int = 0

    def spend(self, amount: int = 1) -> None:
        self.used += amount
        if self.used > self.limit:
            raise BudgetExceeded(self.used)
