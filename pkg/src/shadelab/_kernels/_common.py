"""Shared bits for the search-kernel backends."""


class KernelBudgetExceeded(RuntimeError):
    """A search kernel ran past its node/operation budget.

    Budgets are counted identically by every backend, so whether a given
    instance completes or raises does not depend on which backend ran it.
    """
