from __future__ import annotations

from typing import Any, List, Optional, Tuple


class DecompositionError(Exception):
    """Base class of every failure raised by the decomposition pipeline."""


class GraphMismatch(DecompositionError):
    """Two multigraphs with different vertex counts were combined."""

    def __init__(self, n1: int, n2: int):
        super().__init__(f"vertex counts differ: {n1} != {n2}")
        self.n1 = n1
        self.n2 = n2


class InvalidRemoval(DecompositionError):
    """A removal asked for more parallel edges than a pair carries."""

    def __init__(self, pair: Tuple[int, int], requested: int, available: int):
        super().__init__(
            f"cannot remove {requested} edges on {pair}: only {available} present"
        )
        self.pair = pair
        self.requested = requested
        self.available = available


class InfeasibleInput(DecompositionError):
    """The input violates a precondition of the requested construction."""


class SearchExhausted(DecompositionError):
    """A search engine spent its budget without finding a solution.

    Attributes:
        best: Best partial solution found (a GraphDecomposition), for diagnostics.
        attempts (int): Number of restarts performed.
    """

    def __init__(self, message: str, best: Any = None, attempts: int = 0):
        super().__init__(message)
        self.best = best
        self.attempts = attempts


class InstanceTooLarge(DecompositionError):
    """An exhaustive routine was called on an input above its size cap."""

    def __init__(self, size: int, cap: int, what: str = "instance"):
        super().__init__(f"{what} size {size} exceeds cap {cap}")
        self.size = size
        self.cap = cap


class SizeMismatch(DecompositionError):
    """The assembled multigraph does not have mu * C(n, k) edges."""

    def __init__(self, actual: int, expected: int):
        super().__init__(f"assembled edge count {actual} != {expected}")
        self.actual = actual
        self.expected = expected


class SpreadTooLarge(DecompositionError):
    """The assembled multigraph has multiplicities spread more than 5 apart."""

    def __init__(self, low: int, high: int):
        super().__init__(f"multiplicity spread {high} - {low} exceeds 5")
        self.low = low
        self.high = high


class NoPerfectMatching(DecompositionError):
    """The edge/hyperedge incidence graph has no perfect matching.

    Attributes:
        violator: Edge instances S of the multigraph with |N(S)| < |S|.
        neighbourhood: The hyperedges N(S).
    """

    def __init__(self, violator: List[Any], neighbourhood: List[Any]):
        super().__init__(
            f"Hall violator of size {len(violator)} with {len(neighbourhood)} neighbours"
        )
        self.violator = violator
        self.neighbourhood = neighbourhood


class MissingAssignment(DecompositionError):
    """A walk uses an edge instance the matching does not cover."""

    def __init__(self, instance: Any):
        super().__init__(f"no hyperedge assigned to edge instance {instance}")
        self.instance = instance


class SDRNotFound(DecompositionError):
    """A set family of a k = n-2 block has no system of distinct representatives."""

    def __init__(self, block: int, sets: List[Any]):
        super().__init__(f"block {block}: no SDR for {len(sets)} sets")
        self.block = block
        self.sets = sets


class BelowThresholdFailure(DecompositionError):
    """A best-effort run below the guaranteed thresholds failed.

    Attributes:
        stage (str): Pipeline stage that failed.
        cause (DecompositionError): The underlying failure, kept as certificate.
    """

    def __init__(self, stage: str, cause: Optional[Exception] = None):
        super().__init__(f"best-effort run failed at stage '{stage}': {cause}")
        self.stage = stage
        self.cause = cause


class VerificationFailed(DecompositionError):
    """A constructed certificate did not pass the independent verifier."""

    def __init__(self, violations: List[Any]):
        super().__init__(f"certificate failed verification with {len(violations)} violations")
        self.violations = violations
