"""Pydantic models of every JSON document read or written by the package."""

from __future__ import annotations

from enum import Enum
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

WalkKindLiteral = Literal["path", "cycle"]


class MultigraphModel(BaseModel):
    """`{"n": n, "edges": [[x, y, mult], ...]}` with x < y."""

    n: int = Field(..., ge=1)
    edges: List[Tuple[int, int, int]] = Field(default_factory=list)


class GraphWalkModel(BaseModel):
    kind: WalkKindLiteral
    vertices: List[int]
    edges: List[Tuple[int, int, int]]


class GraphDecompositionModel(BaseModel):
    host: Optional[MultigraphModel] = None
    walks: List[GraphWalkModel] = Field(default_factory=list)
    leave: List[Tuple[int, int, int]] = Field(default_factory=list)


class HyperEdgeModel(BaseModel):
    """One hyperedge of mu K_n^(k): a k-set and its copy index."""

    model_config = ConfigDict(populate_by_name=True)

    members: List[int] = Field(..., alias="set")
    copy_index: int = Field(..., alias="copy")


class BergeWalkModel(BaseModel):
    kind: WalkKindLiteral
    core: List[int]
    edges: List[HyperEdgeModel]


class HyperDecompositionModel(BaseModel):
    """The certificate consumed by the verifier and the `verify` subcommand."""

    n: int
    k: int
    mu: int
    walks: List[BergeWalkModel] = Field(default_factory=list)


class StagedHostModel(BaseModel):
    """A staged auxiliary multigraph as dumped by `decompose --dump-stages`."""

    name: str
    branch: str
    level_bounds: Tuple[int, int]
    graph: MultigraphModel
    decomposition: GraphDecompositionModel
    timings_ms: Dict[str, float] = Field(default_factory=dict)


class ViolationCode(str, Enum):
    DUPLICATE_HYPEREDGE = "DuplicateHyperedge"
    CORE_NOT_DISTINCT = "CoreNotDistinct"
    CONTAINMENT_FAIL = "ContainmentFail"
    COVERAGE_MISMATCH = "CoverageMismatch"
    LENGTH_MISMATCH = "LengthMismatch"
    ARITY_MISMATCH = "ArityMismatch"


class ViolationModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    code: ViolationCode
    walk_index: Optional[int] = None
    detail: str = ""


class ViolationReportModel(BaseModel):
    ok: bool
    violations: List[ViolationModel] = Field(default_factory=list)


class ConditionReportModel(BaseModel):
    """Output of `check`: the verdict plus every condition that produced it."""

    mode: str
    admissible: bool
    conditions: Dict[str, Any] = Field(default_factory=dict)


class RunReportModel(BaseModel):
    """Record of one `decompose` run.

    Attributes:
        input (dict): Echo of n, k, mu and both length lists.
        case (str): "case1", "case2" or "case3".
        branches (list[str]): Branch labels taken inside the case, in order.
        timings_ms (dict[str, float]): Wall time per stage.
        seed (int): Seed of the run.
        guaranteed (bool): Whether (n, k) lies above the guaranteed thresholds.
        verified (bool): Whether the certificate passed the verifier.
        output (str | None): Path of the written certificate.
    """

    input: Dict[str, Any]
    case: str
    branches: List[str] = Field(default_factory=list)
    timings_ms: Dict[str, float] = Field(default_factory=dict)
    seed: int
    guaranteed: bool = False
    verified: bool = False
    output: Optional[str] = None
