from .budgets import (
    STRICT_FACTOR,
    BudgetPolicy,
    ConvergedInterfaceData,
    FixedPerCall,
    NkCC,
    PolicyState,
    budgets_for_call,
    parse_policy,
    update_policy_state,
)

__all__ = [
    "BudgetPolicy",
    "ConvergedInterfaceData",
    "FixedPerCall",
    "NkCC",
    "PolicyState",
    "STRICT_FACTOR",
    "budgets_for_call",
    "parse_policy",
    "update_policy_state",
]
