"""Berge path and cycle decompositions of mu K_n^(k).

Three constructions, by how close k is to n:

- 3 <= k <= n-3: stage H_P and H_C, assemble H, match every edge instance of H to a
  distinct hyperedge containing it, and lift the walks of H edge by edge.
- k = n-2: colour mu K_n properly, list its edges by colour, and turn each edge into its
  complement. Consecutive complements of a block meet in n-4 or more vertices, and a
  system of distinct representatives of those intersections is the core sequence.
- k = n-1: the hyperedges are the complements of single vertices; listing them
  cyclically gives the core sequences in closed form.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from core.configs.solver import SolverConfig
from core.graphs.admissibility import berge_necessary_conditions, hamilton_divisible, is_guaranteed
from core.graphs.graph_decomp import GraphDecomposition
from core.graphs.multigraph import EdgeInstance, Multigraph, Pair, WalkKind, pair
from core.hyper.assembly import StagedHost, assemble_H, build_HC, build_HP, split_levels
from core.hyper.matching import ImplicitMatcher, members_of
from core.hyper.verify import verify_berge_decomposition
from core.models.schemas import (
    BergeWalkModel,
    HyperDecompositionModel,
    HyperEdgeModel,
    RunReportModel,
)
from core.utils.errors import (
    BelowThresholdFailure,
    DecompositionError,
    InfeasibleInput,
    MissingAssignment,
    NoPerfectMatching,
    SDRNotFound,
    SizeMismatch,
    VerificationFailed,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class HyperEdge:
    """One edge of mu K_n^(k): a sorted k-set and the copy it belongs to."""

    members: Tuple[int, ...]
    copy: int = 0

    @classmethod
    def of(cls, members: Iterable[int], copy: int = 0) -> "HyperEdge":
        return cls(tuple(sorted(members)), copy)

    def __contains__(self, v: int) -> bool:
        return v in self.members

    def to_model(self) -> HyperEdgeModel:
        return HyperEdgeModel(members=list(self.members), copy_index=self.copy)

    @classmethod
    def from_model(cls, model: HyperEdgeModel) -> "HyperEdge":
        return cls.of(model.members, model.copy_index)


@dataclass(frozen=True)
class BergeWalk:
    """A Berge path or cycle: core vertices v_i and hyperedges e_i with {v_i, v_i+1} in e_i."""

    kind: WalkKind
    core: Tuple[int, ...]
    hyperedges: Tuple[HyperEdge, ...]

    @property
    def length(self) -> int:
        return len(self.hyperedges)

    def to_model(self) -> BergeWalkModel:
        return BergeWalkModel(
            kind=self.kind.value,
            core=list(self.core),
            edges=[e.to_model() for e in self.hyperedges],
        )

    @classmethod
    def from_model(cls, model: BergeWalkModel) -> "BergeWalk":
        return cls(
            WalkKind(model.kind),
            tuple(model.core),
            tuple(HyperEdge.from_model(e) for e in model.edges),
        )


@dataclass
class HyperDecomposition:
    n: int
    k: int
    mu: int
    walks: List[BergeWalk] = field(default_factory=list)

    def lengths(self, kind: Optional[WalkKind] = None) -> List[int]:
        return [w.length for w in self.walks if kind is None or w.kind is kind]

    def to_model(self) -> HyperDecompositionModel:
        return HyperDecompositionModel(
            n=self.n, k=self.k, mu=self.mu, walks=[w.to_model() for w in self.walks]
        )

    @classmethod
    def from_model(cls, model: HyperDecompositionModel) -> "HyperDecomposition":
        return cls(model.n, model.k, model.mu, [BergeWalk.from_model(w) for w in model.walks])


def _elapsed(start: float) -> float:
    return round((time.perf_counter() - start) * 1000.0, 3)


def _require(n: int, k: int, mu: int, cycles: Sequence[int], paths: Sequence[int]) -> None:
    conditions = berge_necessary_conditions(n, k, mu, cycles, paths)
    failed = [name for name, ok in conditions.items() if not ok]
    if failed:
        raise InfeasibleInput(f"(n={n}, k={k}, mu={mu}) fails: {', '.join(failed)}")


# ---------------------------------------------------------------------------
# 3 <= k <= n-3: matching and lifting
# ---------------------------------------------------------------------------


def hall_matching(h: Multigraph, n: int, k: int, mu: int) -> Dict[EdgeInstance, HyperEdge]:
    """Assigns every edge instance of h a distinct hyperedge of mu K_n^(k) containing it.

    Args:
        h (Multigraph): Multigraph with mu C(n, k) edges.
        n (int): Vertex count.
        k (int): Edge size.
        mu (int): Edge multiplicity of the hypergraph.

    Returns:
        dict[EdgeInstance, HyperEdge]: A bijection onto the hyperedges.

    Raises:
        SizeMismatch: If h does not have mu C(n, k) edges.
        NoPerfectMatching: If no bijection exists; carries a Hall violator and N(S).
    """
    instances = list(h.edge_instances())
    expected = mu * comb(n, k)
    if len(instances) != expected:
        raise SizeMismatch(len(instances), expected)
    start = time.perf_counter()
    matcher = ImplicitMatcher(n, k, mu, [(x, y) for x, y, _ in instances])
    if not matcher.run():
        left, rights = matcher.hall_violator()
        log.info(f"Matching stuck at {matcher.size()} of {expected}; Hall violator of size {len(left)}")
        raise NoPerfectMatching(
            [instances[u] for u in left],
            [HyperEdge(members_of(mask, n), copy) for mask, copy in rights],
        )
    log.info(f"Perfect matching of {expected} edge instances in {_elapsed(start)} ms")
    return {
        instances[u]: HyperEdge(members_of(mask, n), copy)
        for u, (mask, copy) in enumerate(matcher.match_left)
    }


def hall_violator(violator: Sequence[EdgeInstance], n: int, k: int, mu: int) -> List[HyperEdge]:
    """N(S): every hyperedge of mu K_n^(k) containing the pair of some instance in S."""
    found = set()
    for x, y in sorted({(x, y) for x, y, _ in violator}):
        others = [v for v in range(1, n + 1) if v not in (x, y)]
        for chosen in combinations(others, k - 2):
            members = tuple(sorted((x, y) + chosen))
            found.update(HyperEdge(members, copy) for copy in range(mu))
    return sorted(found)


def lift(d: GraphDecomposition, eta: Dict[EdgeInstance, HyperEdge]) -> List[BergeWalk]:
    """Replaces every edge instance of every walk by its hyperedge; cores are kept.

    Raises:
        MissingAssignment: If a walk uses an instance eta does not map.
    """
    walks = []
    for w in d.walks:
        hyperedges = []
        for e in w.edges:
            if e not in eta:
                raise MissingAssignment(e)
            hyperedges.append(eta[e])
        walks.append(BergeWalk(w.kind, tuple(w.vertices), tuple(hyperedges)))
    return walks


def _case1(
    n: int, k: int, mu: int, cycles: Sequence[int], paths: Sequence[int],
    config: SolverConfig, timings: Dict[str, float], trace: List[str], stages: List[StagedHost],
) -> HyperDecomposition:
    lam, lam_c = split_levels(cycles, paths, n)
    log.info(f"Levels: lambda={lam} for paths, lambda'={lam_c} for cycles")

    trace.append("H_P")
    start = time.perf_counter()
    hp = build_HP(paths, lam, n, config)
    timings["H_P"] = _elapsed(start)
    stages.append(hp)

    trace.append("H_C")
    start = time.perf_counter()
    hc = build_HC(cycles, lam_c, n, config)
    timings["H_C"] = _elapsed(start)
    stages.append(hc)

    trace.append("assemble")
    H, d = assemble_H(hp, hc, mu, n, k)

    trace.append("matching")
    start = time.perf_counter()
    eta = hall_matching(H, n, k, mu)
    timings["matching"] = _elapsed(start)

    trace.append("lift")
    return HyperDecomposition(n, k, mu, lift(d, eta))


# ---------------------------------------------------------------------------
# k = n-2: colouring and distinct representatives
# ---------------------------------------------------------------------------


def _one_factorization(m: int) -> List[List[Pair]]:
    """Circle method on 1..m (m even): vertex m stays put, the others rotate."""
    rounds = []
    for i in range(m - 1):
        cls = [pair(m, i + 1)]
        for j in range(1, m // 2):
            cls.append(pair((i + j) % (m - 1) + 1, (i - j) % (m - 1) + 1))
        rounds.append(sorted(cls))
    return rounds


def round_robin_coloring(mu: int, n: int) -> List[List[Pair]]:
    """Proper edge colouring of mu K_n with classes of size exactly floor(n/2).

    Odd n is coloured as K_{n+1} with the pairs on the extra vertex dropped, which
    leaves a near-1-factorization. The colouring of K_n is repeated mu times, so class c
    belongs to copy c // (number of classes of one copy).

    Args:
        mu (int): Edge multiplicity.
        n (int): Vertex count, at least 3.

    Returns:
        list[list[Pair]]: mu (2 floor((n-1)/2) + 1) colour classes, pairs sorted.

    Raises:
        InfeasibleInput: If n < 3 or mu < 1.
    """
    if n < 3 or mu < 1:
        raise InfeasibleInput(f"round robin colouring needs n >= 3 and mu >= 1, got n={n}, mu={mu}")
    if n % 2 == 0:
        base = _one_factorization(n)
    else:
        base = [[p for p in cls if n + 1 not in p] for cls in _one_factorization(n + 1)]
    return [list(cls) for _ in range(mu) for cls in base]


@dataclass
class Case2Block:
    """One block of consecutive complements for k = n-2.

    Attributes:
        index (int): Block number, cycles first then paths.
        kind (WalkKind): Cycle or path.
        pairs (list[Pair]): The edges e_j of mu K_n the block was cut from.
        colours (list[int]): Colour of each e_j.
        hyperedges (list[HyperEdge]): The complements f_j, with copies.
        g (list[frozenset[int]]): Sets the core vertices are drawn from.
        core (tuple[int, ...]): A system of distinct representatives of g.
    """

    index: int
    kind: WalkKind
    pairs: List[Pair]
    colours: List[int]
    hyperedges: List[HyperEdge]
    g: List[FrozenSet[int]]
    core: Tuple[int, ...] = ()

    def walk(self) -> BergeWalk:
        return BergeWalk(self.kind, self.core, tuple(self.hyperedges))


def _g_sets(kind: WalkKind, fs: List[FrozenSet[int]]) -> List[FrozenSet[int]]:
    inner = [fs[j] & fs[j + 1] for j in range(len(fs) - 1)]
    if kind is WalkKind.CYCLE:
        return [fs[-1] & fs[0]] + inner
    return [fs[0]] + inner + [fs[-1]]


def _sdr(index: int, sets: List[FrozenSet[int]]) -> Tuple[int, ...]:
    # left nodes 0..len-1, vertex v is node -v
    G = nx.Graph()
    top = list(range(len(sets)))
    G.add_nodes_from(top)
    for j, s in enumerate(sets):
        G.add_edges_from((j, -v) for v in sorted(s))
    matching = nx.bipartite.hopcroft_karp_matching(G, top_nodes=top)
    if any(j not in matching for j in top):
        raise SDRNotFound(index, [sorted(s) for s in sets])
    return tuple(-matching[j] for j in top)


def case2_blocks(
    n: int, mu: int, cycle_lengths: Sequence[int], path_lengths: Sequence[int]
) -> List[Case2Block]:
    """Cuts the colour-ordered edges of mu K_n into blocks and solves each block's SDR.

    Raises:
        InfeasibleInput: If the lists do not fit mu K_n^(n-2).
        SDRNotFound: If a block has no system of distinct representatives.
    """
    _require(n, n - 2, mu, cycle_lengths, path_lengths)
    classes = round_robin_coloring(mu, n)
    per_copy = len(classes) // mu
    ordered = [(p, c, c // per_copy) for c, cls in enumerate(classes) for p in cls]
    everything = frozenset(range(1, n + 1))

    blocks = []
    start = 0
    layout = [(WalkKind.CYCLE, m) for m in cycle_lengths] + [(WalkKind.PATH, m) for m in path_lengths]
    for index, (kind, length) in enumerate(layout):
        chunk = ordered[start:start + length]
        start += length
        fs = [everything - set(p) for p, _, _ in chunk]
        block = Case2Block(
            index=index,
            kind=kind,
            pairs=[p for p, _, _ in chunk],
            colours=[c for _, c, _ in chunk],
            hyperedges=[HyperEdge.of(f, copy) for f, (_, _, copy) in zip(fs, chunk)],
            g=_g_sets(kind, fs),
        )
        block.core = _sdr(index, block.g)
        blocks.append(block)
    return blocks


def case2_decompose(
    n: int, mu: int, cycle_lengths: Sequence[int], path_lengths: Sequence[int]
) -> HyperDecomposition:
    """Berge decomposition of mu K_n^(n-2) with the given cycle and path lengths."""
    blocks = case2_blocks(n, mu, cycle_lengths, path_lengths)
    log.info(f"k = n-2: {len(blocks)} blocks over {sum(len(b.pairs) for b in blocks)} edges")
    return HyperDecomposition(n, n - 2, mu, [b.walk() for b in blocks])


# ---------------------------------------------------------------------------
# k = n-1: closed form
# ---------------------------------------------------------------------------


def case3_decompose(
    n: int, mu: int, cycle_lengths: Sequence[int], path_lengths: Sequence[int]
) -> HyperDecomposition:
    """Berge decomposition of mu K_n^(n-1) with the given cycle and path lengths.

    Position i (1-based) holds the hyperedge [n] - {r_i} in copy (i-1) // n, where
    r_i = (i-1) mod n + 1. A block starting after position s takes the hyperedges
    s+1, s+2, ... and its core runs r_{s+2}, r_{s+3}, ..., except that a 2-cycle uses
    r_{s+3}, r_{s+4}.

    Raises:
        InfeasibleInput: If the lists do not fit mu K_n^(n-1).
    """
    _require(n, n - 1, mu, cycle_lengths, path_lengths)
    everything = frozenset(range(1, n + 1))

    def r(i: int) -> int:
        return (i - 1) % n + 1

    def f(i: int) -> HyperEdge:
        return HyperEdge.of(everything - {r(i)}, (i - 1) // n)

    walks = []
    s = 0
    for kind, length in [(WalkKind.CYCLE, m) for m in cycle_lengths] + [(WalkKind.PATH, m) for m in path_lengths]:
        edges = tuple(f(s + j) for j in range(1, length + 1))
        if kind is WalkKind.CYCLE and length == 2:
            core = (r(s + 3), r(s + 4))
        elif kind is WalkKind.CYCLE:
            core = tuple(r(s + j) for j in range(2, length + 2))
        else:
            core = tuple(r(s + j) for j in range(2, length + 3))
        walks.append(BergeWalk(kind, core, edges))
        s += length
    log.info(f"k = n-1: {len(walks)} walks over {s} hyperedges")
    return HyperDecomposition(n, n - 1, mu, walks)


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------


def hamilton_lengths(n: int, k: int, mu: int = 1) -> List[int]:
    """The cycle list of a decomposition into Hamilton Berge cycles.

    Raises:
        InfeasibleInput: If n does not divide mu C(n, k).
    """
    if not hamilton_divisible(n, k, mu):
        raise InfeasibleInput(f"{n} does not divide {mu} * C({n}, {k})")
    return [n] * (mu * comb(n, k) // n)


def decompose_with_report(
    n: int,
    k: int,
    mu: int,
    cycle_lengths: Sequence[int],
    path_lengths: Sequence[int],
    config: Optional[SolverConfig] = None,
) -> Tuple[HyperDecomposition, RunReportModel, List[StagedHost]]:
    """Builds and verifies a Berge decomposition, dispatching on how close k is to n.

    Below the guaranteed thresholds on n the construction runs best-effort: it still
    returns only verified output, and wraps any construction failure.

    Args:
        n (int): Vertex count.
        k (int): Edge size, 3 <= k < n.
        mu (int): Edge multiplicity.
        cycle_lengths (Sequence[int]): Berge cycle lengths, each in [2, n].
        path_lengths (Sequence[int]): Berge path lengths, each in [1, n-1].
        config (SolverConfig, optional): Engine settings; defaults from solver.yaml.

    Returns:
        tuple: The decomposition, the run report, and the staged hosts (k <= n-3 only).

    Raises:
        InfeasibleInput: If the necessary conditions fail.
        BelowThresholdFailure: If a best-effort run fails.
        VerificationFailed: If the constructed certificate does not verify.
        DecompositionError: Any construction failure at or above the thresholds.
    """
    config = config or SolverConfig.from_defaults()
    cycle_lengths, path_lengths = list(cycle_lengths), list(path_lengths)
    _require(n, k, mu, cycle_lengths, path_lengths)
    guaranteed = is_guaranteed(n, k)
    if not guaranteed:
        log.warning(f"(n={n}, k={k}) is below the guaranteed threshold; running best-effort")

    case = "case3" if k == n - 1 else "case2" if k == n - 2 else "case1"
    timings: Dict[str, float] = {}
    trace: List[str] = [case]
    stages: List[StagedHost] = []
    branches: List[str] = []
    start = time.perf_counter()
    try:
        if case == "case3":
            d = case3_decompose(n, mu, cycle_lengths, path_lengths)
            branches.append("case3-closed-form")
        elif case == "case2":
            d = case2_decompose(n, mu, cycle_lengths, path_lengths)
            branches.append("case2-coloring-sdr")
        else:
            d = _case1(n, k, mu, cycle_lengths, path_lengths, config, timings, trace, stages)
            for staged in stages:
                branches.append(staged.branch.value)
                if staged.leave_rule:
                    branches.append(f"leave {staged.leave_rule}")
    except DecompositionError as e:
        if guaranteed:
            raise
        log.error(f"Best-effort run failed at {trace[-1]}: {e}")
        raise BelowThresholdFailure(trace[-1], e) from e
    timings["construct"] = _elapsed(start)

    start = time.perf_counter()
    violations = verify_berge_decomposition(n, k, mu, cycle_lengths, path_lengths, d.to_model())
    timings["verify"] = _elapsed(start)
    if violations:
        raise VerificationFailed(violations)
    log.info(f"Verified {len(d.walks)} Berge walks on {mu * comb(n, k)} hyperedges")

    report = RunReportModel(
        input={"n": n, "k": k, "mu": mu, "cycles": cycle_lengths, "paths": path_lengths},
        case=case,
        branches=branches,
        timings_ms=timings,
        seed=config.seed,
        guaranteed=guaranteed,
        verified=True,
    )
    return d, report, stages


def decompose(
    n: int,
    k: int,
    mu: int,
    cycle_lengths: Sequence[int],
    path_lengths: Sequence[int],
    config: Optional[SolverConfig] = None,
) -> HyperDecomposition:
    """Verified Berge decomposition of mu K_n^(k); see decompose_with_report."""
    return decompose_with_report(n, k, mu, cycle_lengths, path_lengths, config)[0]
