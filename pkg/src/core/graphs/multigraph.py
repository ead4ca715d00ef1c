from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Mapping, Tuple

from core.models.schemas import MultigraphModel
from core.utils.errors import GraphMismatch, InvalidRemoval

log = logging.getLogger(__name__)

Pair = Tuple[int, int]
EdgeInstance = Tuple[int, int, int]  # (x, y, index) with x < y, 0 <= index < mult


def pair(x: int, y: int) -> Pair:
    """Returns the canonical (sorted) form of an unordered vertex pair."""
    if x == y:
        raise ValueError(f"loop at vertex {x}")
    return (x, y) if x < y else (y, x)


def binom2(n: int) -> int:
    """C(n, 2) for n >= 0."""
    return n * (n - 1) // 2


@dataclass(frozen=True)
class Multigraph:
    """Loopless multigraph on the vertex set 1..n.

    Attributes:
        n (int): Number of vertices.
        mult (dict[Pair, int]): Multiplicity of each pair x < y; zero entries are dropped.
    """

    n: int
    mult: Mapping[Pair, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"vertex count must be positive, got {self.n}")
        clean: Dict[Pair, int] = {}
        for (x, y), m in self.mult.items():
            if m < 0:
                raise ValueError(f"negative multiplicity on {(x, y)}")
            if m == 0:
                continue
            p = pair(x, y)
            if not (1 <= p[0] and p[1] <= self.n):
                raise ValueError(f"pair {p} outside 1..{self.n}")
            clean[p] = clean.get(p, 0) + m
        object.__setattr__(self, "mult", dict(sorted(clean.items())))

    # ---- queries ---------------------------------------------------------------

    def m(self, x: int, y: int) -> int:
        """Multiplicity of the pair {x, y}."""
        return self.mult.get(pair(x, y), 0)

    def edge_count(self) -> int:
        return sum(self.mult.values())

    def degree(self, v: int) -> int:
        return sum(m for (x, y), m in self.mult.items() if v in (x, y))

    def degrees(self) -> Dict[int, int]:
        deg = {v: 0 for v in range(1, self.n + 1)}
        for (x, y), m in self.mult.items():
            deg[x] += m
            deg[y] += m
        return deg

    def pairs(self) -> List[Pair]:
        """Pairs with positive multiplicity, sorted."""
        return list(self.mult)

    def edge_instances(self) -> Iterator[EdgeInstance]:
        """All edge instances (x, y, index) in sorted order."""
        for (x, y), m in self.mult.items():
            for idx in range(m):
                yield (x, y, idx)

    def multiplicity_bounds(self) -> Tuple[int, int]:
        """(min, max) multiplicity over all C(n, 2) pairs, zeros included."""
        values = [self.mult.get(p, 0) for p in combinations(range(1, self.n + 1), 2)]
        if not values:
            return (0, 0)
        return (min(values), max(values))

    # ---- constructors -------------------------------------------------------

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[Pair]) -> "Multigraph":
        """Builds a multigraph from a multiset of pairs (repeats add up)."""
        counts = Counter(pair(x, y) for x, y in pairs)
        return cls(n, dict(counts))

    @classmethod
    def from_instances(cls, n: int, instances: Iterable[EdgeInstance]) -> "Multigraph":
        return cls.from_pairs(n, ((x, y) for x, y, _ in instances))

    def to_model(self) -> MultigraphModel:
        """JSON form `{"n": n, "edges": [[x, y, mult], ...]}` with x < y."""
        return MultigraphModel(n=self.n, edges=[(x, y, m) for (x, y), m in self.mult.items()])

    @classmethod
    def from_model(cls, model: MultigraphModel) -> "Multigraph":
        return cls(model.n, {(x, y): m for x, y, m in model.edges})


def complete_multigraph(lam: int, n: int) -> Multigraph:
    """Returns lambda K_n: every pair of 1..n with multiplicity exactly lambda.

    Args:
        lam (int): Multiplicity, non-negative.
        n (int): Number of vertices, positive.

    Returns:
        Multigraph: The complete multigraph with lambda * C(n, 2) edges.
    """
    if lam < 0:
        raise ValueError(f"multiplicity must be non-negative, got {lam}")
    return Multigraph(n, {p: lam for p in combinations(range(1, n + 1), 2)})


def near_factor_I(lam: int, n: int) -> List[Pair]:
    """The near-factor I removed from lambda K_n before decomposing into cycles.

    A perfect matching {1,2},{3,4},... when lambda (n - 1) is odd (then n is even),
    otherwise empty.
    """
    if lam * (n - 1) % 2 == 0:
        return []
    return [(v, v + 1) for v in range(1, n, 2)]


def union(g1: Multigraph, g2: Multigraph) -> Multigraph:
    """Edge-disjoint union: multiplicities add pointwise.

    Raises:
        GraphMismatch: If the vertex counts differ.
    """
    if g1.n != g2.n:
        raise GraphMismatch(g1.n, g2.n)
    total = Counter(g1.mult)
    total.update(g2.mult)
    return Multigraph(g1.n, dict(total))


def subtract(g: Multigraph, edges: Iterable[Pair]) -> Multigraph:
    """Removes a multiset of pairs from g.

    Raises:
        InvalidRemoval: If a pair is removed more often than it occurs.
    """
    removal = Counter(pair(x, y) for x, y in edges)
    mult = dict(g.mult)
    for p, count in sorted(removal.items()):
        have = mult.get(p, 0)
        if count > have:
            raise InvalidRemoval(p, count, have)
        mult[p] = have - count
    return Multigraph(g.n, mult)


def is_even(g: Multigraph) -> bool:
    """True iff every vertex has even degree (multiplicities counted)."""
    return all(d % 2 == 0 for d in g.degrees().values())


class WalkKind(str, Enum):
    PATH = "path"
    CYCLE = "cycle"


@dataclass(frozen=True)
class GraphWalk:
    """A path or cycle of a multigraph given by its vertices and edge instances.

    For a cycle the vertex sequence is cyclic without repeating the first vertex; a
    cycle of length 2 is two parallel edges between its two vertices.
    """

    kind: WalkKind
    vertices: Tuple[int, ...]
    edges: Tuple[EdgeInstance, ...]

    @property
    def length(self) -> int:
        return len(self.edges)

    def steps(self) -> List[Pair]:
        """The consecutive vertex pairs the walk traverses, in order."""
        vs = self.vertices
        steps = [pair(vs[i], vs[i + 1]) for i in range(len(vs) - 1)]
        if self.kind is WalkKind.CYCLE and len(vs) >= 2:
            steps.append(pair(vs[-1], vs[0]))
        return steps

    def check(self) -> List[str]:
        """Returns the walk invariants this walk breaks (empty when valid)."""
        problems = []
        vs, es = self.vertices, self.edges
        if len(set(vs)) != len(vs):
            problems.append("repeated vertex")
        if self.kind is WalkKind.PATH and len(vs) != len(es) + 1:
            problems.append("path vertex/edge counts disagree")
        if self.kind is WalkKind.CYCLE:
            if len(vs) != len(es):
                problems.append("cycle vertex/edge counts disagree")
            if len(es) < 2:
                problems.append("cycle shorter than 2")
        if len(set(es)) != len(es):
            problems.append("edge instance repeated inside walk")
        for step, (x, y, idx) in zip(self.steps(), es):
            if step != (x, y) or idx < 0:
                problems.append(f"edge {(x, y, idx)} does not join {step}")
                break
        return problems
