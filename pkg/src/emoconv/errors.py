"""Exception types shared across the package.

ContractError maps to CLI exit code 3 (precondition / contract violation),
NonFiniteError to exit code 4 (numerical failure).
"""


class ContractError(ValueError):
    """A documented precondition or interface contract was violated."""


class NonFiniteError(ArithmeticError):
    """A NaN or infinity showed up where only finite values are allowed."""
