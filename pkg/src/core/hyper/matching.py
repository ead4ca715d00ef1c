"""Hopcroft-Karp matching between edge instances and hyperedges of mu K_n^(k).

The hyperedge side is never materialised. A hyperedge is a pair (mask, copy) where
bit v-1 of `mask` marks vertex v, and the neighbours of an edge instance on {x, y} are
enumerated on demand as the k-sets containing {x, y}, each in every copy. All
instances on the same pair share that neighbourhood, so the phases expand and discard
whole pairs at once.
"""

from __future__ import annotations

import logging
from collections import deque
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from core.graphs.multigraph import Pair

log = logging.getLogger(__name__)

Right = Tuple[int, int]

_UNREACHED = -1


def members_of(mask: int, n: int) -> Tuple[int, ...]:
    return tuple(v for v in range(1, n + 1) if mask >> (v - 1) & 1)


def mask_of(members: Sequence[int]) -> int:
    mask = 0
    for v in members:
        mask |= 1 << (v - 1)
    return mask


class ImplicitMatcher:
    """Maximum matching of edge instances into (k-set, copy) hyperedges.

    Args:
        n (int): Vertex count.
        k (int): Uniformity.
        mu (int): Copies of every k-set.
        pairs (Sequence[Pair]): The pair of every left vertex, one entry per edge instance.
    """

    def __init__(self, n: int, k: int, mu: int, pairs: Sequence[Pair]):
        self.n = n
        self.k = k
        self.mu = mu
        self.pair_of: List[Pair] = list(pairs)
        self.match_left: List[Optional[Right]] = [None] * len(self.pair_of)
        self.match_right: Dict[Right, int] = {}
        self._layer: List[int] = []
        self._limit = 0

    def neighbours(self, p: Pair) -> Iterator[Right]:
        """Every (mask, copy) whose k-set contains the pair, k-sets in a fixed order."""
        x, y = p
        base = (1 << (x - 1)) | (1 << (y - 1))
        others = [v for v in range(1, self.n + 1) if v != x and v != y]
        free = self.k - 2
        if free <= self.n - self.k:
            for chosen in combinations(others, free):
                mask = base | mask_of(chosen)
                for copy in range(self.mu):
                    yield mask, copy
        else:
            full = base | mask_of(others)
            for dropped in combinations(others, self.n - self.k):
                mask = full & ~mask_of(dropped)
                for copy in range(self.mu):
                    yield mask, copy

    def _match(self, u: int, r: Right) -> None:
        self.match_left[u] = r
        self.match_right[r] = u

    def size(self) -> int:
        return len(self.match_right)

    def free_left(self) -> List[int]:
        return [u for u, r in enumerate(self.match_left) if r is None]

    def greedy(self) -> int:
        """Seeds the matching: each instance takes the first free hyperedge of its pair.

        A per-pair cursor is kept across instances, since hyperedges passed over are
        taken for good while seeding.
        """
        cursors: Dict[Pair, Iterator[Right]] = {}
        for u, p in enumerate(self.pair_of):
            if self.match_left[u] is not None:
                continue
            cursor = cursors.setdefault(p, self.neighbours(p))
            for r in cursor:
                if r not in self.match_right:
                    self._match(u, r)
                    break
        log.debug(f"Greedy seed matched {self.size()} of {len(self.pair_of)} instances")
        return self.size()

    def _bfs(self) -> bool:
        layer = [_UNREACHED] * len(self.pair_of)
        queue = deque()
        for u in self.free_left():
            layer[u] = 0
            queue.append(u)
        expanded: Set[Pair] = set()
        seen: Set[Right] = set()
        limit = None
        while queue:
            u = queue.popleft()
            if limit is not None and layer[u] >= limit:
                break
            p = self.pair_of[u]
            if p in expanded:
                continue
            expanded.add(p)
            for r in self.neighbours(p):
                if r in seen:
                    continue
                seen.add(r)
                w = self.match_right.get(r)
                if w is None:
                    limit = layer[u] + 1
                elif layer[w] == _UNREACHED:
                    layer[w] = layer[u] + 1
                    queue.append(w)
        self._layer = layer
        self._limit = limit or 0
        return limit is not None

    def _augment(self, root: int, dead: Set[Tuple[Pair, int]]) -> bool:
        layer = self._layer
        stack = [(root, self.neighbours(self.pair_of[root]))]
        rights: List[Right] = []
        while stack:
            u, it = stack[-1]
            nxt = None
            for r in it:
                w = self.match_right.get(r)
                if w is None:
                    if layer[u] + 1 == self._limit:
                        rights.append(r)
                        for (v, _), rv in zip(stack, rights):
                            self._match(v, rv)
                        return True
                    continue
                if layer[w] == layer[u] + 1 and (self.pair_of[w], layer[w]) not in dead:
                    nxt = (w, r)
                    break
            if nxt is None:
                stack.pop()
                dead.add((self.pair_of[u], layer[u]))
                if rights:
                    rights.pop()
            else:
                w, r = nxt
                rights.append(r)
                stack.append((w, self.neighbours(self.pair_of[w])))
        return False

    def run(self) -> bool:
        """Greedy seed plus Hopcroft-Karp phases. Returns True iff every instance is matched."""
        self.greedy()
        phase = 0
        while self.size() < len(self.pair_of) and self._bfs():
            phase += 1
            dead: Set[Tuple[Pair, int]] = set()
            gained = 0
            for u in self.free_left():
                if (self.pair_of[u], 0) in dead:
                    continue
                if self._augment(u, dead):
                    gained += 1
            log.debug(f"Phase {phase}: {gained} augmenting paths, matched {self.size()}")
        return self.size() == len(self.pair_of)

    def hall_violator(self) -> Tuple[List[int], List[Right]]:
        """Alternating search from one unmatched instance of a maximum matching.

        Returns:
            tuple[list[int], list[Right]]: Left vertices S and their neighbourhood N(S),
                with |N(S)| < |S|.
        """
        free = self.free_left()
        if not free:
            return [], []
        root = free[0]
        reached = [root]
        on: Set[int] = {root}
        rights: List[Right] = []
        seen: Set[Right] = set()
        expanded: Set[Pair] = set()
        queue = deque([root])
        while queue:
            p = self.pair_of[queue.popleft()]
            if p in expanded:
                continue
            expanded.add(p)
            for r in self.neighbours(p):
                if r in seen:
                    continue
                seen.add(r)
                rights.append(r)
                w = self.match_right[r]
                if w not in on:
                    on.add(w)
                    reached.append(w)
                    queue.append(w)
        # instances sharing a pair with S have no new neighbours
        for u, p in enumerate(self.pair_of):
            if p in expanded and u not in on:
                on.add(u)
                reached.append(u)
        return sorted(reached), rights
