"""Exceptions shared across modules."""


class SearchBudgetExceeded(RuntimeError):
    """A backtracking search exceeded its node budget."""


class OrderCapExceeded(RuntimeError):
    """A group enumeration exceeded its order cap."""
