from ._alambda import (
    canon,
    support,
    lambda_support,
    as_pure,
    beta_reducts,
    reduce,
    prove,
    check,
    conserve,
    equiv,
    demo,
)

__all__ = [
    "canon",
    "support",
    "lambda_support",
    "as_pure",
    "beta_reducts",
    "reduce",
    "prove",
    "check",
    "conserve",
    "equiv",
    "demo",
]
