"""Staging of the auxiliary multigraphs H_P and H_C for 3 <= k <= n-3.

H_P carries the path lengths at multiplicity lambda or lambda + 1 on every pair, H_C
carries the cycle lengths at multiplicity lambda' - 2 .. lambda' + 2. Their union H has
mu C(n, k) edges and a multiplicity spread of at most 5, which is what the matching
step needs.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from core.configs import cfg
from core.configs.solver import SolverConfig
from core.graphs.admissibility import f, nu2
from core.graphs.graph_decomp import (
    GraphDecomposition,
    cycle_decomposition,
    cycle_packing,
    decomposition_from_walks,
    drop_walks,
    path_packing,
)
from core.graphs.multigraph import (
    GraphWalk,
    Multigraph,
    WalkKind,
    binom2,
    complete_multigraph,
    union,
)
from core.models.schemas import StagedHostModel
from core.utils.errors import GraphMismatch, InfeasibleInput, SizeMismatch, SpreadTooLarge

log = logging.getLogger(__name__)


class Branch(str, Enum):
    """Construction branch a staged host was built by."""

    EMPTY = "empty"
    PATHS = "hp-paths"
    ODD_NU2_LARGE = "case1.1-branch-nu2-large"
    ODD_DECOMPOSE = "case1.1-branch-decompose"
    EVEN_LONG_LIST = "case1.2-branch-long-list"
    EVEN_DECOMPOSE = "case1.2-branch-decompose"


@dataclass
class StagedHost:
    """An auxiliary multigraph with a decomposition and declared multiplicity bounds.

    Attributes:
        name (str): "H_P" or "H_C".
        graph (Multigraph): The multigraph.
        decomposition (GraphDecomposition): Covers graph exactly.
        level_bounds (tuple[int, int]): (lo, hi) every pair multiplicity must respect.
        branch (Branch): Construction branch taken.
        leave_rule (str): How the cycle list was closed off ("r=0", "r=1", "r>=2"), if any.
        timings_ms (dict[str, float]): Wall time per sub-stage.
    """

    name: str
    graph: Multigraph
    decomposition: GraphDecomposition
    level_bounds: Tuple[int, int]
    branch: Branch
    leave_rule: Optional[str] = None
    timings_ms: Dict[str, float] = field(default_factory=dict)

    def check(self) -> List[str]:
        """Breaches of the bounds and exact-cover invariants (empty when valid)."""
        problems = []
        lo, hi = self.level_bounds
        low, high = self.graph.multiplicity_bounds()
        if self.graph.n >= 2 and (low < lo or high > hi):
            problems.append(f"multiplicities in [{low},{high}] outside [{lo},{hi}]")
        if self.decomposition.leave:
            problems.append(f"{len(self.decomposition.leave)} edges left uncovered")
        if self.decomposition.used_graph() != self.graph:
            problems.append("decomposition does not cover the graph")
        return problems

    def to_model(self) -> StagedHostModel:
        return StagedHostModel(
            name=self.name,
            branch=self.branch.value,
            level_bounds=self.level_bounds,
            graph=self.graph.to_model(),
            decomposition=self.decomposition.to_model(),
            timings_ms=self.timings_ms,
        )


def _ms(start: float) -> float:
    return round((time.perf_counter() - start) * 1000.0, 3)


def _validated(host: StagedHost) -> StagedHost:
    problems = host.check()
    if problems:
        raise InfeasibleInput(f"{host.name} ({host.branch.value}): " + "; ".join(problems))
    log.info(
        f"{host.name} staged via {host.branch.value}: {host.graph.edge_count()} edges, "
        f"bounds {host.level_bounds}, {len(host.decomposition.walks)} walks"
    )
    return host


def split_levels(cycle_lengths: Sequence[int], path_lengths: Sequence[int], n: int) -> Tuple[int, int]:
    """(lambda, lambda'): how many full K_n layers the path and cycle sums fill."""
    pairs = binom2(n)
    if pairs == 0:
        return (0, 0)
    return (sum(path_lengths) // pairs, sum(cycle_lengths) // pairs)


def build_HP(path_lengths: Sequence[int], lam: int, n: int, config: SolverConfig) -> StagedHost:
    """H_P: a P-path decomposable multigraph with every multiplicity in [lambda, lambda + 1].

    lambda K_n takes the longest paths plus a q-edge piece of the first path that does
    not fit; a packing in one more K_n layer takes the remaining q'-edge piece and the
    rest of the list. The layer is renamed so the two pieces join into one path.

    Raises:
        InfeasibleInput: If a length lies outside [1, n-1] or a sub-step is infeasible.
        SearchExhausted: Propagated from the path engines.
    """
    start = time.perf_counter()
    P = sorted(path_lengths, reverse=True)
    if any(not 1 <= m <= n - 1 for m in P):
        raise InfeasibleInput(f"path lengths {P} outside [1, {n - 1}]")
    bounds = (lam, lam + 1)
    if not P and lam == 0:
        empty = complete_multigraph(0, n)
        return StagedHost("H_P", empty, GraphDecomposition(empty), bounds, Branch.EMPTY)

    target = lam * binom2(n)
    s0, prefix = 0, 0
    while s0 < len(P) and prefix + P[s0] <= target:
        prefix += P[s0]
        s0 += 1
    q = target - prefix
    q_prime = P[s0] - q if s0 < len(P) else 0
    if s0 == len(P) and q:
        raise InfeasibleInput(f"path lengths sum {sum(P)} below {lam} full layers")
    P1 = P[:s0] + ([q] if q else [])
    P2 = ([q_prime] if q_prime else []) + P[s0 + 1 :]
    log.debug(f"H_P split: s0={s0}, q={q}, q'={q_prime}, |P'|={len(P1)}, |P''|={len(P2)}")

    timings: Dict[str, float] = {}
    t = time.perf_counter()
    d1 = path_packing(lam, n, P1, config) if lam else GraphDecomposition(complete_multigraph(0, n))
    timings["layers"] = _ms(t)
    t = time.perf_counter()
    d2 = path_packing(1, n, P2, config).compacted() if P2 else GraphDecomposition(complete_multigraph(0, n))
    timings["extra_layer"] = _ms(t)

    joined: Optional[Tuple[int, int]] = None
    if q and q_prime:
        qi = max(i for i, w in enumerate(d1.walks) if w.length == q)
        ri = max(i for i, w in enumerate(d2.walks) if w.length == q_prime)
        head = d1.walks[qi].vertices
        tail = d2.walks[ri].vertices
        pi = _joining_permutation(head, tail, n)
        d2 = decomposition_from_walks(
            Multigraph.from_pairs(
                n, ((pi[x], pi[y]) for x, y, _ in (e for w in d2.walks for e in w.edges))
            ),
            [(w.kind, tuple(pi[v] for v in w.vertices)) for w in d2.walks],
        )
        joined = (qi, len(d1.walks) + ri)

    merged = d1.merged(d2)
    walks = list(merged.walks)
    if joined is not None:
        a, b = joined
        first, second = walks[a], walks[b]
        path = GraphWalk(
            WalkKind.PATH,
            first.vertices + second.vertices[1:],
            first.edges + second.edges,
        )
        walks = [w for i, w in enumerate(walks) if i not in (a, b)] + [path]
    decomposition = GraphDecomposition(merged.host, walks, [])
    timings["total"] = _ms(start)
    host = StagedHost("H_P", merged.host, decomposition, bounds, Branch.PATHS, timings_ms=timings)
    return _validated(host)


def _joining_permutation(head: Tuple[int, ...], tail: Tuple[int, ...], n: int) -> Dict[int, int]:
    """Permutation of 1..n sending tail[0] to head[-1] and the rest of tail off head."""
    pi = {tail[0]: head[-1]}
    fresh = [v for v in range(1, n + 1) if v not in head]
    for v, image in zip(tail[1:], fresh):
        pi[v] = image
    used = set(pi.values())
    rest_src = [v for v in range(1, n + 1) if v not in pi]
    rest_dst = [v for v in range(1, n + 1) if v not in used]
    pi.update(zip(rest_src, rest_dst))
    return pi


def two_cycles(lam: int, n: int) -> GraphDecomposition:
    """lambda K_n (lambda even) as lambda/2 2-cycles on every pair."""
    host = complete_multigraph(lam, n)
    walks = [(WalkKind.CYCLE, (x, y)) for (x, y), m in host.mult.items() for _ in range(m // 2)]
    return decomposition_from_walks(host, walks)


def closing_list(C: Sequence[int], lam_c: int, n: int) -> Tuple[List[int], int, int]:
    """The list M filling lambda' K_n - I exactly from the head of C.

    Returns:
        tuple[list[int], int, int]: (M, t0, r) with C sorted non-increasing.
    """
    target = f(lam_c, n)
    t0, prefix = 0, 0
    while t0 < len(C) and prefix + C[t0] <= target:
        prefix += C[t0]
        t0 += 1
    r = target - prefix
    if r == 0:
        M = list(C[:t0])
    elif r == 1:
        if t0 == 0:
            raise InfeasibleInput(f"cannot close {lam_c}K_{n}-I with a single edge")
        M = list(C[: t0 - 1]) + [C[t0 - 1] + 1]
    else:
        M = list(C[:t0]) + [r]
    return M, t0, r


def build_HC(cycle_lengths: Sequence[int], lam_c: int, n: int, config: SolverConfig) -> StagedHost:
    """H_C: a C-cycle decomposable multigraph with multiplicities in [lambda' - 2, lambda' + 2].

    Raises:
        InfeasibleInput: If a length lies outside [2, n] or a sub-step is infeasible.
        SearchExhausted: Propagated from the cycle engines.
    """
    start = time.perf_counter()
    C = sorted(cycle_lengths, reverse=True)
    if any(not 2 <= m <= n for m in C):
        raise InfeasibleInput(f"cycle lengths {C} outside [2, {n}]")
    bounds = (max(0, lam_c - 2), lam_c + 2)
    if not C and lam_c == 0:
        empty = complete_multigraph(0, n)
        return StagedHost("H_C", empty, GraphDecomposition(empty), bounds, Branch.EMPTY)

    M, t0, r = closing_list(C, lam_c, n)
    rule = "r=0" if r == 0 else ("r=1" if r == 1 else "r>=2")
    if sum(M) != f(lam_c, n):
        raise InfeasibleInput(f"closing list {M} does not fill {lam_c}K_{n}-I")
    pairs = binom2(n)
    l = len(M)
    timings: Dict[str, float] = {}
    log.debug(f"H_C: lambda'={lam_c}, t0={t0}, r={r}, |M|={l}")

    t = time.perf_counter()
    if lam_c % 2 == 1 and 2 * nu2(C) >= (lam_c - 1) * pairs:
        branch = Branch.ODD_NU2_LARGE
        digons = (lam_c - 1) * pairs // 2
        decomposition = _digons_plus_packing(C, digons, lam_c - 1, 3, n, config)
    elif lam_c % 2 == 0 and lam_c >= 2 and 2 * (C[0] + l - 2) > lam_c * pairs:
        branch = Branch.EVEN_LONG_LIST
        digons = (lam_c - 2) * pairs // 2
        decomposition = _digons_plus_packing(C, digons, lam_c - 2, 4, n, config)
    else:
        branch = Branch.ODD_DECOMPOSE if lam_c % 2 else Branch.EVEN_DECOMPOSE
        decomposition = _decompose_and_top_up(C, M, t0, r, lam_c, n, config)
    timings[branch.value] = _ms(t)
    timings["total"] = _ms(start)

    host = StagedHost(
        "H_C",
        decomposition.host,
        decomposition,
        bounds,
        branch,
        leave_rule=rule,
        timings_ms=timings,
    )
    return _validated(host)


def _digons_plus_packing(
    C: List[int], digons: int, digon_lam: int, pack_lam: int, n: int, config: SolverConfig
) -> GraphDecomposition:
    """digon_lam K_n as 2-cycles plus the t' longest cycles packed in pack_lam K_n - I."""
    t_prime = len(C) - digons
    if t_prime < 0 or any(m != 2 for m in C[t_prime:]):
        raise InfeasibleInput(f"list has fewer than {digons} 2-cycles for {digon_lam}K_{n}")
    packing = cycle_packing(pack_lam, n, C[:t_prime], config)
    h4 = GraphDecomposition(packing.host, packing.walks, []).compacted()
    return two_cycles(digon_lam, n).merged(h4)


def _decompose_and_top_up(
    C: List[int], M: List[int], t0: int, r: int, lam_c: int, n: int, config: SolverConfig
) -> GraphDecomposition:
    """M-cycle decomposition of lambda' K_n - I minus F, plus the tail of C packed in 2K_n."""
    full = cycle_decomposition(lam_c, n, M, config)
    if r >= 2:
        h3 = drop_walks(full, [r])
        tail = C[t0:]
    elif r == 1:
        h3 = drop_walks(full, [C[t0 - 1] + 1])
        tail = C[t0 - 1 :]
    else:
        h3 = full
        tail = C[t0:]
    h3 = GraphDecomposition(h3.host, h3.walks, []).compacted()
    if not tail:
        return h3
    packing = cycle_packing(2, n, tail, config)
    h4 = GraphDecomposition(packing.host, packing.walks, []).compacted()
    return h3.merged(h4)


def assemble_H(
    hp: StagedHost, hc: StagedHost, mu: int, n: int, k: int
) -> Tuple[Multigraph, GraphDecomposition]:
    """Edge-disjoint union of H_P and H_C with its combined decomposition.

    Raises:
        GraphMismatch: If a staged host is not on n vertices.
        SizeMismatch: If |E(H)| != mu C(n, k).
        SpreadTooLarge: If the multiplicities of H spread by more than 5.
    """
    for staged in (hp, hc):
        if staged.graph.n != n:
            raise GraphMismatch(staged.graph.n, n)
    H = union(hp.graph, hc.graph)
    expected = mu * comb(n, k)
    if H.edge_count() != expected:
        raise SizeMismatch(H.edge_count(), expected)
    low, high = H.multiplicity_bounds()
    if high - low > cfg.MAX_SPREAD:
        raise SpreadTooLarge(low, high)
    log.info(f"H assembled: {H.edge_count()} edges, multiplicities in [{low},{high}]")
    return H, hp.decomposition.merged(hc.decomposition)
