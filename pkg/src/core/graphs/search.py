"""Exact and heuristic engines that place paths and cycles in a multigraph.

Walks are vertex tuples. A cycle (x, y, ..., z) uses the pairs of consecutive vertices
plus {z, x}, so a 2-cycle (x, y) uses {x, y} twice. A path uses the pairs of consecutive
vertices only.

Short walks (2-cycles, 1-paths) are never searched for. Cycles of length >= 3 are placed
so that every pair is left with even multiplicity (cover) or enough doubled pairs
(pack), and the 2-cycles are read off what remains; 1-paths take any leftover edge.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Set, Tuple

from pathos.pools import ProcessPool

from core.configs.solver import SolverConfig
from core.graphs.multigraph import Pair, WalkKind

log = logging.getLogger(__name__)

Walk = Tuple[int, ...]

# Walk finder: attempts per walk and DFS expansions per walk step
_FINDER_TRIES = 8
_DFS_BUDGET_PER_STEP = 40

# Simulated annealing schedule of the ruin & recreate phase
_START_TEMPERATURE = 2.0
_COOLING = 0.99
_EXACT_MOVE_RATE = 0.3


@dataclass
class WalkProblem:
    """Place walks of the given lengths edge-disjointly in a multigraph.

    Attributes:
        n (int): Vertex count, vertices are 1..n.
        mult (dict[Pair, int]): Multiplicities of the host.
        lengths (list[int]): Walk lengths to place.
        kind (WalkKind): Paths or cycles.
        cover (bool): If True the walks must use every edge.
    """

    n: int
    mult: Dict[Pair, int]
    lengths: List[int]
    kind: WalkKind
    cover: bool

    @property
    def short(self) -> int:
        """Length of the walks read off the leftover: 2 for cycles, 1 for paths."""
        return 2 if self.kind is WalkKind.CYCLE else 1

    def split_lengths(self) -> Tuple[Tuple[int, ...], int]:
        """(long lengths sorted non-increasing, number of short walks)."""
        longs = tuple(sorted((m for m in self.lengths if m > self.short), reverse=True))
        return longs, sum(1 for m in self.lengths if m == self.short)

    def edge_count(self) -> int:
        return sum(self.mult.values())


@dataclass
class SearchResult:
    """Outcome of one engine run.

    Attributes:
        walks (list[Walk] | None): The placed walks, None when nothing was found.
        complete (bool): False when a budget ran out, so a missing answer proves nothing.
        nodes (int): Search nodes spent by the exact engine.
        seed (int | None): Derived seed of the heuristic restart that produced the answer.
        best (list[Walk]): Largest partial placement seen, kept for diagnostics.
    """

    walks: Optional[List[Walk]] = None
    complete: bool = True
    nodes: int = 0
    seed: Optional[int] = None
    best: List[Walk] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.walks is not None


def walk_steps(walk: Walk, kind: WalkKind) -> List[Pair]:
    """Pairs used by a walk, in traversal order."""
    steps = [(a, b) if a < b else (b, a) for a, b in zip(walk, walk[1:])]
    if kind is WalkKind.CYCLE:
        a, b = walk[-1], walk[0]
        steps.append((a, b) if a < b else (b, a))
    return steps


def walk_length(walk: Walk, kind: WalkKind) -> int:
    return len(walk) if kind is WalkKind.CYCLE else len(walk) - 1


def _matrix(n: int, mult: Dict[Pair, int]) -> List[List[int]]:
    w = [[0] * (n + 1) for _ in range(n + 1)]
    for (x, y), m in mult.items():
        w[x][y] = w[y][x] = m
    return w


def _drop(longs: Tuple[int, ...], ell: int) -> Tuple[int, ...]:
    i = longs.index(ell)
    return longs[:i] + longs[i + 1 :]


class _BudgetSpent(Exception):
    pass


class ExactEngine:
    """Memoised depth-first search over multiplicity vectors.

    Cover mode branches on a single pair. A pair of odd multiplicity must lie on some
    long cycle; any other pair either lies on a long walk or is handed entirely to the
    short walks. Pack mode places the longest remaining walk in every possible position.
    Failed states are remembered by (multiplicities, remaining lengths).
    """

    def __init__(self, problem: WalkProblem, node_budget: Optional[int] = None):
        self.problem = problem
        self.n = problem.n
        self.kind = problem.kind
        self.w = _matrix(problem.n, problem.mult)
        self.deg = [sum(row) for row in self.w]
        self.pairs = sorted(p for p, m in problem.mult.items() if m > 0)
        self.node_budget = node_budget
        self.nodes = 0
        self.failed: Set[tuple] = set()

    def solve(self) -> SearchResult:
        longs, shorts = self.problem.split_lengths()
        total = sum(longs) + shorts * self.problem.short
        edges = self.problem.edge_count()
        if total > edges or (self.problem.cover and total != edges):
            return SearchResult(walks=None, complete=True)
        try:
            if total == edges and self.kind is WalkKind.CYCLE:
                walks = self._cover_cycles(longs, shorts)
            elif total == edges:
                walks = self._cover_paths(longs, shorts)
            else:
                walks = self._pack(longs, shorts)
        except _BudgetSpent:
            log.debug(f"Exact engine budget of {self.node_budget} nodes spent")
            return SearchResult(walks=None, complete=False, nodes=self.nodes)
        return SearchResult(walks=walks, complete=True, nodes=self.nodes)

    # ---- state -----------------------------------------------------------------

    def _tick(self) -> None:
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise _BudgetSpent()

    def _key(self) -> tuple:
        w = self.w
        return tuple(w[x][y] for x, y in self.pairs)

    def _apply(self, walk: Walk, sign: int) -> None:
        w, deg = self.w, self.deg
        for a, b in walk_steps(walk, self.kind):
            w[a][b] += sign
            w[b][a] += sign
            deg[a] += sign
            deg[b] += sign

    def _edges(self) -> int:
        return sum(self.deg) // 2

    def _pressure(self, p: Pair) -> Tuple[int, Pair]:
        return (self.deg[p[0]] + self.deg[p[1]], p)

    def _ordered(self, u: int, on: Set[int]) -> List[int]:
        row = self.w[u]
        cands = [v for v in range(1, self.n + 1) if row[v] > 0 and v not in on]
        cands.sort(key=lambda v: (-(row[v] % 2), -row[v], v))
        return cands

    def _read_short(self, count: int) -> Optional[List[Walk]]:
        """Takes `count` short walks from what is left, lowest pairs first."""
        walks: List[Walk] = []
        per_pair = 2 if self.kind is WalkKind.CYCLE else 1
        for x, y in self.pairs:
            if len(walks) == count:
                break
            take = min(self.w[x][y] // per_pair, count - len(walks))
            walks.extend([(x, y)] * take)
        return walks if len(walks) == count else None

    # ---- cycles, cover ---------------------------------------------------------

    def _cover_cycles(self, longs: Tuple[int, ...], twos: int) -> Optional[List[Walk]]:
        self._tick()
        if not longs:
            if any(self.w[x][y] % 2 for x, y in self.pairs):
                return None
            return self._read_short(twos)
        key = (self._key(), longs, twos)
        if key in self.failed:
            return None
        found = None
        if self._cycle_bounds_ok(longs, twos):
            odd = [p for p in self.pairs if self.w[p[0]][p[1]] % 2]
            if odd:
                x, y = min(odd, key=self._pressure)
                found = self._cover_through(x, y, longs, twos)
            else:
                live = [p for p in self.pairs if self.w[p[0]][p[1]] > 0]
                x, y = min(live, key=self._pressure)
                found = self._cover_through(x, y, longs, twos)
                m = self.w[x][y]
                if found is None and m // 2 <= twos:
                    self.w[x][y] = self.w[y][x] = 0
                    self.deg[x] -= m
                    self.deg[y] -= m
                    rest = self._cover_cycles(longs, twos - m // 2)
                    self.w[x][y] = self.w[y][x] = m
                    self.deg[x] += m
                    self.deg[y] += m
                    if rest is not None:
                        found = [(x, y)] * (m // 2) + rest
        if found is None:
            self.failed.add(key)
        return found

    def _cover_through(self, x: int, y: int, longs: Tuple[int, ...], twos: int):
        for ell in sorted(set(longs), reverse=True):
            rest = _drop(longs, ell)
            for cycle in self._cycles_through(x, y, ell):
                self._apply(cycle, -1)
                sub = self._cover_cycles(rest, twos)
                self._apply(cycle, +1)
                if sub is not None:
                    return [cycle] + sub
        return None

    def _cycle_bounds_ok(self, longs: Tuple[int, ...], twos: int) -> bool:
        t = len(longs)
        # pairs used more often than there are long cycles must go to 2-cycles
        need = 0
        for x, y in self.pairs:
            excess = self.w[x][y] - t
            if excess > 0:
                need += excess + excess % 2
        if need > 2 * twos:
            return False
        live = sum(1 for v in range(1, self.n + 1) if self.deg[v] > 0)
        return longs[0] <= live

    def _cycles_through(self, x: int, y: int, ell: int) -> Iterator[Walk]:
        on = {x, y}
        for path in self._extend_to([y], on, x, ell - 1):
            yield (x,) + path[:-1]

    def _extend_to(self, path: List[int], on: Set[int], goal: int, left: int) -> Iterator[Walk]:
        self._tick()
        u = path[-1]
        if left == 1:
            if self.w[u][goal] > 0:
                yield tuple(path) + (goal,)
            return
        if self.n - len(on) < left - 1:
            return
        for v in self._ordered(u, on):
            if left == 2 and self.w[v][goal] == 0:
                continue
            path.append(v)
            on.add(v)
            yield from self._extend_to(path, on, goal, left - 1)
            path.pop()
            on.discard(v)

    # ---- paths, cover ----------------------------------------------------------

    def _cover_paths(self, longs: Tuple[int, ...], ones: int) -> Optional[List[Walk]]:
        self._tick()
        if not longs:
            return self._read_short(ones)
        key = (self._key(), longs, ones)
        if key in self.failed:
            return None
        found = None
        if self._path_bounds_ok(longs, ones):
            live = [p for p in self.pairs if self.w[p[0]][p[1]] > 0]
            x, y = min(live, key=self._pressure)
            for ell in sorted(set(longs), reverse=True):
                rest = _drop(longs, ell)
                for path in self._paths_through(x, y, ell):
                    self._apply(path, -1)
                    sub = self._cover_paths(rest, ones)
                    self._apply(path, +1)
                    if sub is not None:
                        found = [path] + sub
                        break
                if found is not None:
                    break
            m = self.w[x][y]
            if found is None and m <= ones:
                self.w[x][y] = self.w[y][x] = 0
                self.deg[x] -= m
                self.deg[y] -= m
                rest_walks = self._cover_paths(longs, ones - m)
                self.w[x][y] = self.w[y][x] = m
                self.deg[x] += m
                self.deg[y] += m
                if rest_walks is not None:
                    found = [(x, y)] * m + rest_walks
        if found is None:
            self.failed.add(key)
        return found

    def _path_bounds_ok(self, longs: Tuple[int, ...], ones: int) -> bool:
        odd = sum(1 for v in range(1, self.n + 1) if self.deg[v] % 2)
        if odd > 2 * (len(longs) + ones):
            return False
        live = sum(1 for v in range(1, self.n + 1) if self.deg[v] > 0)
        return longs[0] <= live - 1

    def _paths_through(self, x: int, y: int, ell: int) -> Iterator[Walk]:
        on = {x, y}
        for a in range(ell):
            for left in self._extend_free([x], on, a):
                for right in self._extend_free([y], on, ell - 1 - a):
                    yield tuple(reversed(left)) + right

    def _extend_free(self, path: List[int], on: Set[int], left: int) -> Iterator[Walk]:
        self._tick()
        if left == 0:
            yield tuple(path)
            return
        if self.n - len(on) < left:
            return
        for v in self._ordered(path[-1], on):
            path.append(v)
            on.add(v)
            yield from self._extend_free(path, on, left - 1)
            path.pop()
            on.discard(v)

    # ---- packing ---------------------------------------------------------------

    def _pack(self, longs: Tuple[int, ...], shorts: int) -> Optional[List[Walk]]:
        self._tick()
        if not longs:
            return self._read_short(shorts)
        key = (self._key(), longs, shorts)
        if key in self.failed:
            return None
        found = None
        if sum(longs) + shorts * self.problem.short <= self._edges():
            for walk in self._all_walks(longs[0]):
                self._apply(walk, -1)
                sub = self._pack(longs[1:], shorts)
                self._apply(walk, +1)
                if sub is not None:
                    found = [walk] + sub
                    break
        if found is None:
            self.failed.add(key)
        return found

    def _all_walks(self, ell: int) -> Iterator[Walk]:
        """Every walk of length ell, each listed once."""
        for s in range(1, self.n + 1):
            if self.deg[s] == 0:
                continue
            if self.kind is WalkKind.CYCLE:
                # s is the smallest vertex and the second vertex is below the last
                on = set(range(1, s + 1))
                for path in self._extend_free([s], on, ell - 1):
                    if path[1] < path[-1] and self.w[path[-1]][s] > 0:
                        yield path
            else:
                for path in self._extend_free([s], {s}, ell):
                    if path[-1] > s:
                        yield path


class HeuristicEngine:
    """Randomised greedy placement followed by ruin & recreate moves.

    Long walks are placed longest first by a randomised depth-first walk finder. While
    the placement is not a solution, moves eject walks around the deficient region
    (odd pairs or leftover edges), re-place the freed lengths, and on small remainders
    hand the rest to the exact engine. Moves are accepted by simulated annealing.
    """

    def __init__(self, problem: WalkProblem, config: SolverConfig, seed: int):
        self.problem = problem
        self.config = config
        self.seed = seed
        self.rng = random.Random(seed)
        self.n = problem.n
        self.kind = problem.kind
        self.longs, self.shorts = problem.split_lengths()
        exact_fit = sum(self.longs) + 2 * self.shorts == problem.edge_count()
        self.parity = problem.kind is WalkKind.CYCLE and (problem.cover or exact_fit)
        self.placed: List[Walk] = []
        self.unplaced: List[int] = list(self.longs)
        self._reset()

    # ---- state -----------------------------------------------------------------

    def _reset(self) -> None:
        self.w = _matrix(self.n, self.problem.mult)
        self.deg = [sum(row) for row in self.w]
        self.edges = sum(self.deg) // 2
        self.odd: Set[Pair] = {p for p, m in self.problem.mult.items() if m % 2}
        self.capacity = sum(m // 2 for m in self.problem.mult.values())

    def _apply(self, walk: Walk, sign: int) -> None:
        w = self.w
        for a, b in walk_steps(walk, self.kind):
            old = w[a][b]
            new = old + sign
            w[a][b] = w[b][a] = new
            self.deg[a] += sign
            self.deg[b] += sign
            self.edges += sign
            self.capacity += new // 2 - old // 2
            if new % 2:
                self.odd.add((a, b))
            else:
                self.odd.discard((a, b))

    def _length(self, walk: Walk) -> int:
        return walk_length(walk, self.kind)

    def _place(self, walk: Walk) -> None:
        self._apply(walk, -1)
        self.placed.append(walk)
        self.unplaced.remove(self._length(walk))

    def _eject(self, index: int) -> None:
        walk = self.placed.pop(index)
        self._apply(walk, +1)
        self.unplaced.append(self._length(walk))

    def _snapshot(self) -> Tuple[Tuple[Walk, ...], Tuple[int, ...]]:
        return tuple(self.placed), tuple(self.unplaced)

    def _restore(self, snapshot) -> None:
        placed, unplaced = snapshot
        self._reset()
        self.placed = list(placed)
        self.unplaced = list(unplaced)
        for walk in self.placed:
            self._apply(walk, -1)

    def cost(self) -> int:
        """Zero exactly when the placement can be completed by short walks."""
        c = sum(self.unplaced)
        if self.parity:
            c += len(self.odd)
        elif self.kind is WalkKind.CYCLE:
            c += 2 * max(0, self.shorts - self.capacity)
        return c

    # ---- driver ----------------------------------------------------------------

    def run(self) -> SearchResult:
        self._construct()
        if self.cost() > 0:
            self._improve()
        if self.cost() == 0:
            return SearchResult(walks=self._finish(), complete=True, seed=self.seed)
        log.debug(f"Restart with seed {self.seed} ended at cost {self.cost()}")
        return SearchResult(walks=None, complete=False, seed=self.seed, best=list(self.placed))

    def _construct(self) -> None:
        for ell in sorted(self.unplaced, reverse=True):
            walk = self._find(ell, None)
            if walk is not None:
                self._place(walk)

    def _improve(self) -> None:
        cost = self.cost()
        best_cost, best = cost, self._snapshot()
        temperature = _START_TEMPERATURE
        stale = 0
        for _ in range(self.config.switch_budget):
            if cost == 0:
                break
            saved = self._snapshot()
            region = self._deficient_region()
            if self.rng.random() < _EXACT_MOVE_RATE:
                self._ruin_exact(region)
            else:
                size = 1 + self.rng.randrange(2) + min(stale // 25, 3)
                self._ruin_recreate(region, size)
            new = self.cost()
            if new <= cost or self.rng.random() < math.exp((cost - new) / temperature):
                cost = new
                if cost < best_cost:
                    best_cost, best = cost, self._snapshot()
                    stale = 0
                else:
                    stale += 1
            else:
                self._restore(saved)
                stale += 1
            temperature = max(temperature * _COOLING, 1e-3)
        if best_cost < cost:
            self._restore(best)

    def _deficient_region(self) -> Set[int]:
        if self.parity and self.odd:
            return {v for p in self.odd for v in p}
        region = {v for v in range(1, self.n + 1) if self.deg[v] > 0}
        return region or set(range(1, self.n + 1))

    def _touching(self, region: Set[int]) -> List[int]:
        touching = [i for i, walk in enumerate(self.placed) if not region.isdisjoint(walk)]
        return touching or list(range(len(self.placed)))

    def _ruin_recreate(self, region: Set[int], size: int) -> None:
        pool = self._touching(region)
        for i in sorted(self.rng.sample(pool, min(size, len(pool))), reverse=True):
            self._eject(i)
        self._recreate(region)

    def _ruin_exact(self, region: Set[int]) -> None:
        limit = self.config.tail_edges
        pool = self._touching(region)
        self.rng.shuffle(pool)
        chosen = []
        budget = self.edges
        for i in pool:
            ell = self._length(self.placed[i])
            if budget + ell > limit:
                continue
            chosen.append(i)
            budget += ell
        for i in sorted(chosen, reverse=True):
            self._eject(i)
        if self.edges > limit or not self._exact_tail():
            self._recreate(region)

    def _exact_tail(self) -> bool:
        mult = {
            (x, y): self.w[x][y]
            for x in range(1, self.n + 1)
            for y in range(x + 1, self.n + 1)
            if self.w[x][y] > 0
        }
        tail = WalkProblem(
            n=self.n,
            mult=mult,
            lengths=list(self.unplaced) + [self.problem.short] * self.shorts,
            kind=self.kind,
            cover=self.problem.cover,
        )
        result = ExactEngine(tail, node_budget=max(1, self.config.node_budget // 20)).solve()
        if not result.found:
            return False
        for walk in result.walks:
            if self._length(walk) > self.problem.short:
                self._place(walk)
        return True

    def _recreate(self, region: Optional[Set[int]]) -> None:
        for ell in sorted(self.unplaced, reverse=True):
            walk = self._find(ell, region) or self._find(ell, None)
            if walk is not None:
                self._place(walk)

    def _finish(self) -> List[Walk]:
        walks = list(self.placed)
        per_pair = 2 if self.kind is WalkKind.CYCLE else 1
        need = self.shorts
        for x in range(1, self.n + 1):
            for y in range(x + 1, self.n + 1):
                take = min(self.w[x][y] // per_pair, need)
                walks.extend([(x, y)] * take)
                need -= take
        return walks

    # ---- walk finder -----------------------------------------------------------

    def _find(self, ell: int, region: Optional[Set[int]]) -> Optional[Walk]:
        for _ in range(_FINDER_TRIES):
            if self.kind is WalkKind.CYCLE:
                seed = self._seed_pair(region)
                if seed is None:
                    return None
                x, y = seed
                path = self._dfs(y, x, ell - 1)
                if path is not None:
                    return (x,) + path[:-1]
            else:
                start = self._path_start(region)
                if start is None:
                    return None
                path = self._dfs(start, None, ell)
                if path is not None:
                    return path
        return None

    def _random_vertex(self, region: Optional[Set[int]], odd_only: bool = False) -> Optional[int]:
        pool = sorted(region) if region else range(1, self.n + 1)
        vs = [v for v in pool if self.deg[v] > 0 and (not odd_only or self.deg[v] % 2)]
        if not vs:
            return None
        return self.rng.choices(vs, weights=[self.deg[v] for v in vs])[0]

    def _seed_pair(self, region: Optional[Set[int]]) -> Optional[Pair]:
        if self.parity and self.odd:
            odd = sorted(self.odd)
            near = [p for p in odd if region and (p[0] in region or p[1] in region)]
            x, y = self.rng.choice(near or odd)
            return (x, y) if self.rng.random() < 0.5 else (y, x)
        u = self._random_vertex(region) or self._random_vertex(None)
        if u is None:
            return None
        row = self.w[u]
        vs = [v for v in range(1, self.n + 1) if row[v] > 0]
        v = self.rng.choices(vs, weights=[row[v] for v in vs])[0]
        return (u, v)

    def _path_start(self, region: Optional[Set[int]]) -> Optional[int]:
        if self.problem.cover:
            start = self._random_vertex(region, odd_only=True) or self._random_vertex(None, odd_only=True)
            if start is not None:
                return start
        return self._random_vertex(region) or self._random_vertex(None)

    def _dfs(self, start: int, goal: Optional[int], steps: int) -> Optional[Walk]:
        """Randomised DFS for a walk of exactly `steps` edges from start (to goal)."""
        warnsdorff = self.rng.random() < 0.5
        on = {start} if goal is None else {start, goal}
        path = [start]
        stack = [self._candidates(start, goal, steps, on, warnsdorff)]
        budget = _DFS_BUDGET_PER_STEP * steps
        while stack:
            cands = stack[-1]
            if not cands:
                stack.pop()
                v = path.pop()
                if path:
                    on.discard(v)
                continue
            budget -= 1
            if budget < 0:
                return None
            v = cands.pop()
            left = steps - (len(path) - 1) - 1
            if v == goal or (goal is None and left == 0):
                return tuple(path) + (v,)
            path.append(v)
            on.add(v)
            stack.append(self._candidates(v, goal, left, on, warnsdorff))
        return None

    def _candidates(
        self, u: int, goal: Optional[int], left: int, on: Set[int], warnsdorff: bool
    ) -> List[int]:
        """Next vertices from u with `left` steps to go, best candidate last."""
        row = self.w[u]
        if goal is not None and left == 1:
            return [goal] if row[goal] > 0 else []
        need = left - 1 if goal is not None else left
        if self.n - len(on) < need:
            return []
        cands = [v for v in range(1, self.n + 1) if row[v] > 0 and v not in on]
        if goal is not None and left == 2:
            cands = [v for v in cands if self.w[v][goal] > 0]
        scored = []
        for v in cands:
            score = self.rng.random()
            if self.parity:
                score += (3.0 if warnsdorff else 1.0) * (row[v] % 2) * 2
            score += min(row[v], 3) * 0.5
            if warnsdorff:
                onward = sum(1 for x in range(1, self.n + 1) if self.w[v][x] > 0 and x not in on)
                score -= onward * 0.5
            if goal is not None and left <= 3 and self.w[v][goal] > 0:
                score += 2.0
            if goal is None and left == 1 and self.problem.cover and self.deg[v] % 2:
                score += 3.0
            scored.append((score, v))
        scored.sort()
        return [v for _, v in scored]


def _attempt(args: Tuple[WalkProblem, SolverConfig, int]) -> SearchResult:
    problem, config, restart = args
    seed = config.derive(restart)
    log.debug(f"Heuristic restart {restart} with seed {seed}")
    return HeuristicEngine(problem, config, seed).run()


def _placed_edges(result: SearchResult, kind: WalkKind) -> int:
    return sum(walk_length(walk, kind) for walk in result.best)


def heuristic_search(problem: WalkProblem, config: SolverConfig) -> SearchResult:
    """Runs up to max_restarts heuristic restarts; the lowest successful restart wins.

    With workers > 1 the restarts run in batches on a pathos process pool. Every restart
    depends only on its derived seed, so the answer does not depend on the worker count.
    """
    restarts = list(range(config.max_restarts))
    best = SearchResult(walks=None, complete=False)

    def keep(result: SearchResult) -> None:
        nonlocal best
        if _placed_edges(result, problem.kind) > _placed_edges(best, problem.kind):
            best = result

    if config.workers > 1:
        pool = ProcessPool(nodes=config.workers)
        try:
            for start in range(0, len(restarts), config.workers):
                batch = restarts[start : start + config.workers]
                for result in pool.map(_attempt, [(problem, config, r) for r in batch]):
                    if result.found:
                        return result
                    keep(result)
        finally:
            pool.close()
            pool.join()
            pool.clear()
    else:
        for restart in restarts:
            result = _attempt((problem, config, restart))
            if result.found:
                return result
            keep(result)

    best.complete = False
    return best


def solve(problem: WalkProblem, config: SolverConfig) -> SearchResult:
    """Exact engine for small n, heuristic engine otherwise or when its budget runs out."""
    if problem.n <= config.exact_threshold:
        result = ExactEngine(problem, node_budget=config.node_budget).solve()
        if result.found or result.complete:
            return result
        log.debug(f"Exact engine gave up after {result.nodes} nodes, switching to heuristic search")
    return heuristic_search(problem, config)
