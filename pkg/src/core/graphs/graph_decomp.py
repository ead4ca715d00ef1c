from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from core.configs import cfg
from core.configs.solver import SolverConfig
from core.graphs import layers, search
from core.graphs.admissibility import (
    PackingInstance,
    f,
    is_admissible,
    packing_feasible,
    path_packing_feasible,
)
from core.graphs.multigraph import (
    EdgeInstance,
    GraphWalk,
    Multigraph,
    WalkKind,
    complete_multigraph,
    near_factor_I,
    subtract,
    union,
)
from core.models.schemas import GraphDecompositionModel, GraphWalkModel
from core.utils.errors import InfeasibleInput, InstanceTooLarge, SearchExhausted

log = logging.getLogger(__name__)

__all__ = [
    "GraphDecomposition",
    "brute_force_packing_exists",
    "cycle_decomposition",
    "cycle_packing",
    "decomposition_from_walks",
    "drop_walks",
    "extension_for_packing",
    "packing_count_bound",
    "path_packing",
    "place_walks",
    "verify_graph_decomposition",
]


@dataclass
class GraphDecomposition:
    """Edge-disjoint walks in a host multigraph plus the unused edge instances.

    Attributes:
        host (Multigraph): The multigraph the walks live in.
        walks (list[GraphWalk]): The paths and cycles.
        leave (list[EdgeInstance]): Edge instances of the host no walk uses.
    """

    host: Multigraph
    walks: List[GraphWalk] = field(default_factory=list)
    leave: List[EdgeInstance] = field(default_factory=list)

    @property
    def is_decomposition(self) -> bool:
        return not self.leave

    def lengths(self, kind: Optional[WalkKind] = None) -> List[int]:
        return [w.length for w in self.walks if kind is None or w.kind is kind]

    def used_graph(self) -> Multigraph:
        """Multigraph formed by the walk edges alone."""
        return Multigraph.from_instances(self.host.n, (e for w in self.walks for e in w.edges))

    def compacted(self) -> "GraphDecomposition":
        """The same walks re-indexed on their own used graph (empty leave)."""
        return decomposition_from_walks(
            self.used_graph(), [(w.kind, w.vertices) for w in self.walks]
        )

    def merged(self, other: "GraphDecomposition") -> "GraphDecomposition":
        """Edge-disjoint union; instances of `other` are shifted above this host's."""
        host = union(self.host, other.host)

        def shift(e: EdgeInstance) -> EdgeInstance:
            x, y, idx = e
            return (x, y, idx + self.host.m(x, y))

        walks = list(self.walks) + [
            GraphWalk(w.kind, w.vertices, tuple(shift(e) for e in w.edges)) for w in other.walks
        ]
        leave = sorted(self.leave + [shift(e) for e in other.leave])
        return GraphDecomposition(host, walks, leave)

    def to_model(self) -> GraphDecompositionModel:
        return GraphDecompositionModel(
            host=self.host.to_model(),
            walks=[
                GraphWalkModel(kind=w.kind.value, vertices=list(w.vertices), edges=list(w.edges))
                for w in self.walks
            ],
            leave=list(self.leave),
        )

    @classmethod
    def from_model(cls, model: GraphDecompositionModel, n: Optional[int] = None) -> "GraphDecomposition":
        walks = [
            GraphWalk(WalkKind(w.kind), tuple(w.vertices), tuple(tuple(e) for e in w.edges))
            for w in model.walks
        ]
        if model.host is not None:
            host = Multigraph.from_model(model.host)
        else:
            instances = [e for w in walks for e in w.edges] + [tuple(e) for e in model.leave]
            host = Multigraph.from_instances(n or max((e[1] for e in instances), default=1), instances)
        return cls(host, walks, [tuple(e) for e in model.leave])


def decomposition_from_walks(
    host: Multigraph, walks: Sequence[Tuple[WalkKind, Sequence[int]]]
) -> GraphDecomposition:
    """Assigns edge instances to vertex-sequence walks, first come first served.

    Args:
        host (Multigraph): The host the walks are placed in.
        walks (Sequence[tuple[WalkKind, Sequence[int]]]): Kind and vertex sequence of each walk.

    Returns:
        GraphDecomposition: Walks with explicit instances; unused instances form the leave.

    Raises:
        InfeasibleInput: If the walks use some pair more often than the host provides.
    """
    taken: Counter = Counter()
    out: List[GraphWalk] = []
    for kind, vertices in walks:
        vertices = tuple(vertices)
        edges = []
        for x, y in search.walk_steps(vertices, kind):
            idx = taken[(x, y)]
            if idx >= host.m(x, y):
                raise InfeasibleInput(f"walk {vertices} overuses pair {(x, y)}")
            taken[(x, y)] += 1
            edges.append((x, y, idx))
        out.append(GraphWalk(kind, vertices, tuple(edges)))
    leave = [(x, y, idx) for (x, y), m in host.mult.items() for idx in range(taken[(x, y)], m)]
    return GraphDecomposition(host, out, leave)


def place_walks(
    host: Multigraph,
    lengths: Sequence[int],
    kind: WalkKind,
    config: SolverConfig,
    cover: bool = False,
    label: str = "placement",
) -> GraphDecomposition:
    """Places walks of the given lengths in an arbitrary host with the search engines.

    Args:
        host (Multigraph): Where to place the walks.
        lengths (Sequence[int]): Walk lengths.
        kind (WalkKind): Paths or cycles.
        config (SolverConfig): Engine knobs.
        cover (bool): Require every edge to be used.
        label (str): Name used in log lines and errors.

    Returns:
        GraphDecomposition: The placement with its leave.

    Raises:
        InfeasibleInput: If the exact engine proves no placement exists.
        SearchExhausted: If every restart of the heuristic engine failed.
    """
    lengths = list(lengths)
    if not lengths:
        return decomposition_from_walks(host, [])
    problem = search.WalkProblem(host.n, dict(host.mult), lengths, kind, cover)
    log.debug(f"{label}: {len(lengths)} {kind.value}s in {host.edge_count()} edges on {host.n} vertices")
    result = search.solve(problem, config)
    if result.found:
        return decomposition_from_walks(host, [(kind, w) for w in result.walks])
    if result.complete:
        raise InfeasibleInput(f"{label}: exhaustive search found no {kind.value} placement")
    best = decomposition_from_walks(host, [(kind, w) for w in result.best])
    raise SearchExhausted(
        f"{label}: no {kind.value} placement after {config.max_restarts} restarts",
        best=best,
        attempts=config.max_restarts,
    )


def path_packing(lam: int, n: int, M: Sequence[int], config: SolverConfig) -> GraphDecomposition:
    """M-path packing of lambda K_n; a decomposition when sigma(M) = lambda C(n, 2).

    Raises:
        InfeasibleInput: If M is not a feasible path list for lambda K_n.
        SearchExhausted: If the engines fail.
    """
    M = list(M)
    if not path_packing_feasible(lam, n, M):
        raise InfeasibleInput(f"no {M}-path packing of {lam}K_{n}")
    host = complete_multigraph(lam, n)
    cover = sum(M) == host.edge_count()
    return place_walks(host, M, WalkKind.PATH, config, cover=cover, label=f"path packing of {lam}K_{n}")


def cycle_decomposition(lam: int, n: int, M: Sequence[int], config: SolverConfig) -> GraphDecomposition:
    """M-cycle decomposition of lambda K_n - I.

    Lists made of Hamilton cycles and 2-cycles are built directly. Otherwise, for
    lambda >= 3, the list is split over one K_n - I layer and lambda // 2 layers of 2K_n
    which are solved one at a time; the whole host goes to the search engines only when
    no split works.

    Raises:
        InfeasibleInput: If M is not (lambda, n)-admissible.
        SearchExhausted: If the engines fail.
    """
    M = list(M)
    if lam == 0:
        if M:
            raise InfeasibleInput(f"cannot place cycles {M} in an empty multigraph")
        return GraphDecomposition(complete_multigraph(0, n))
    if not is_admissible(lam, n, M):
        raise InfeasibleInput(f"{M} is not ({lam},{n})-admissible")
    host = subtract(complete_multigraph(lam, n), near_factor_I(lam, n))
    label = f"cycle decomposition of {lam}K_{n}-I"

    direct = _direct_cycles(lam, n, M)
    if direct is not None:
        log.info(f"{label}: {len(M)} cycles built directly")
        return decomposition_from_walks(host, [(WalkKind.CYCLE, c) for c in direct])

    split = layers.layer_split(lam, n, M) if lam >= 3 else None
    if split is not None:
        try:
            parts = [cycle_decomposition(layer, n, sub, config) for layer, sub in split]
        except SearchExhausted as exc:
            log.warning(f"{label}: layer split failed ({exc}); searching the whole host")
        else:
            log.debug(f"{label}: solved as {len(split)} layers")
            return decomposition_from_walks(host, [(w.kind, w.vertices) for d in parts for w in d.walks])

    return place_walks(host, M, WalkKind.CYCLE, config, cover=True, label=label)


def _direct_cycles(lam: int, n: int, M: List[int]) -> Optional[List[Tuple[int, ...]]]:
    """Hamilton and 2-cycle constructions; None unless every part is 2 or n."""
    if n < 3 or any(m not in (2, n) for m in M):
        return None
    h = M.count(n)
    if h == len(M):
        return layers.hamilton_cycles(lam, n)
    return layers.hamilton_digon_cycles(lam, n, h)


def _compose_long(total: int, n: int) -> Optional[List[int]]:
    """Parts from {3, ..., n} summing to total: 3's with one 4 or 5 absorbing the rest."""
    if total == 0:
        return []
    q, rem = divmod(total, 3)
    if rem == 0:
        return [3] * q
    if rem == 1 and n >= 4 and total >= 4:
        return [3] * (q - 1) + [4]
    if rem == 2 and n >= 5 and total >= 5:
        return [3] * (q - 1) + [5]
    if rem == 2 and n == 4 and total >= 8:
        return [3] * (q - 2) + [4, 4]
    return None


def extension_for_packing(lam: int, n: int, M: Sequence[int], prefer_digons: bool = False) -> List[int]:
    """Cycle lengths appended to M so that the extended list is (lambda, n)-admissible.

    Dropping the appended cycles from a decomposition of the extended list leaves an
    M-cycle packing with a leave of f(lambda, n) - sigma(M) edges.

    Args:
        lam (int): Multiplicity.
        n (int): Vertex count.
        M (Sequence[int]): Cycle lengths to pack.
        prefer_digons (bool): For even lambda and M made of n's and 2's, try first an
            extension of 2's (plus one n when the n's are odd in number) so the
            extended list stays within the direct Hamilton and 2-cycle construction.

    Raises:
        InfeasibleInput: If no extension of the prescribed shape exists.
    """
    M = list(M)
    r = f(lam, n) - sum(M)
    if r < 0 or r == 1:
        raise InfeasibleInput(f"leave size {r} cannot be filled with cycles")
    if r == 0:
        return []
    candidates: List[List[int]] = []
    if lam % 2 == 1:
        if r == 2:
            candidates.append([2])
        # fewest 2's first
        for twos in range(r // 2 + 1):
            longs = _compose_long(r - 2 * twos, n)
            if longs is not None:
                candidates.append(longs + [2] * twos)
    else:
        if prefer_digons and all(m in (2, n) for m in M):
            if M.count(n) % 2 == 0:
                candidates.append([2] * (r // 2))
            elif r >= n:
                candidates.append([n] + [2] * ((r - n) // 2))
        m1 = max(M, default=0)
        if r <= m1:
            candidates.append([r])
        for extra in (m1 - 1, m1, m1 + 1):
            if 2 <= extra <= n and extra <= r and (r - extra) % 2 == 0:
                candidates.append([extra] + [2] * ((r - extra) // 2))
        if r % 2 == 0:
            candidates.append([2] * (r // 2))
    for ext in candidates:
        if is_admissible(lam, n, M + ext):
            return ext
    raise InfeasibleInput(f"no admissible extension of {M} by {r} edges in {lam}K_{n}-I")


def cycle_packing(lam: int, n: int, M: Sequence[int], config: SolverConfig) -> GraphDecomposition:
    """M-cycle packing of lambda K_n - I with a leave of exactly f(lambda, n) - sigma(M) edges.

    The list is extended to an admissible one, decomposed, and the added cycles are
    dropped into the leave.

    Raises:
        InfeasibleInput: If the packing conditions fail.
        SearchExhausted: If the engines fail.
    """
    M = list(M)
    if lam == 0:
        if M:
            raise InfeasibleInput(f"cannot place cycles {M} in an empty multigraph")
        return GraphDecomposition(complete_multigraph(0, n))
    if not packing_feasible(PackingInstance(lam, n, M)):
        raise InfeasibleInput(f"no {M}-cycle packing of {lam}K_{n}-I")
    ext = extension_for_packing(lam, n, M, prefer_digons=n > config.exact_threshold)
    log.debug(f"Packing {M} in {lam}K_{n}-I through the extension {ext}")
    full = cycle_decomposition(lam, n, M + ext, config)
    return drop_walks(full, ext)


def drop_walks(d: GraphDecomposition, lengths: Sequence[int]) -> GraphDecomposition:
    """Moves one walk of each given length (latest first) into the leave."""
    walks = list(d.walks)
    leave = list(d.leave)
    for ell in lengths:
        for i in range(len(walks) - 1, -1, -1):
            if walks[i].length == ell:
                leave.extend(walks.pop(i).edges)
                break
        else:
            raise InfeasibleInput(f"no walk of length {ell} to drop")
    return GraphDecomposition(d.host, walks, sorted(leave))


def brute_force_packing_exists(g: Multigraph, M: Sequence[int], kind: WalkKind) -> bool:
    """Exact answer to "does g admit an M-packing of this kind" by exhaustive search.

    Raises:
        InstanceTooLarge: If g has more edges than the oracle accepts.
    """
    if g.edge_count() > cfg.ORACLE_MAX_EDGES:
        raise InstanceTooLarge(g.edge_count(), cfg.ORACLE_MAX_EDGES, "oracle edge count")
    M = list(M)
    low = 2 if kind is WalkKind.CYCLE else 1
    if any(m < low for m in M):
        return False
    if not M:
        return True
    problem = search.WalkProblem(g.n, dict(g.mult), M, kind, cover=False)
    return search.ExactEngine(problem).solve().found


def verify_graph_decomposition(
    g: Multigraph, d: GraphDecomposition, M: Sequence[int], kind: WalkKind
) -> List[str]:
    """Checks d against the host g and the length list M.

    Returns:
        list[str]: Violations, empty when d is a valid M-packing of g whose leave
            accounts for every unused edge.
    """
    violations: List[str] = []
    seen: Dict[EdgeInstance, int] = {}
    for i, walk in enumerate(d.walks):
        if walk.kind is not kind:
            violations.append(f"walk {i}: expected a {kind.value}, got a {walk.kind.value}")
        for problem in walk.check():
            violations.append(f"walk {i}: {problem}")
        for e in walk.edges:
            x, y, idx = e
            if idx >= g.m(x, y):
                violations.append(f"walk {i}: edge instance {e} not in host")
            if e in seen:
                violations.append(f"walk {i}: edge instance reused (also in walk {seen[e]})")
            seen[e] = i
    for e in d.leave:
        if e in seen:
            violations.append(f"leave: edge instance reused {e}")
        seen[e] = -1
    if Counter(d.lengths()) != Counter(M):
        violations.append(f"length multiset mismatch: {sorted(d.lengths())} != {sorted(M)}")
    expected = set(g.edge_instances())
    if set(seen) != expected:
        missing = len(expected - set(seen))
        foreign = len(set(seen) - expected)
        violations.append(f"coverage mismatch: {missing} host instances unaccounted, {foreign} foreign")
    return violations


def packing_count_bound(g: Multigraph, walks: Sequence[GraphWalk], c0: GraphWalk) -> int:
    """Upper bound on the size of a cycle packing of g containing c0.

    For g with every multiplicity even: |E(g)|/2 - |E(c0)| + 2 when the packing is a
    decomposition, and + 1 otherwise.
    """
    used = sum(w.length for w in walks)
    slack = 2 if used == g.edge_count() else 1
    return g.edge_count() // 2 - c0.length + slack
