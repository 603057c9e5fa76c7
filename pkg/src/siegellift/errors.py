"""Error classes shared across the package.

The CLI maps these onto disjoint exit codes: DomainError -> 2,
CapabilityError -> 3, ConsistencyError -> 4.
"""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class CapabilityError(RuntimeError):
    """Input is valid but beyond the implemented enumeration caps."""


class ConsistencyError(RuntimeError):
    """An internal exactness check failed; indicates a bug, not bad input."""
