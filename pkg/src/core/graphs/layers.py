"""Direct cycle constructions for lambda K_n - I, one K_n or 2K_n layer at a time.

Hamilton cycles come from the zigzag paths of K_2k: K_n itself for odd n, K_n minus a
perfect matching F for even n. Two copies of K_n - F, the second relabelled so that F
and its image close into one more Hamilton cycle, decompose 2K_n.

Cycles are vertex tuples on 1..n, as in the search engines.
"""

from __future__ import annotations

import logging
from collections import Counter
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from core.graphs.admissibility import f, is_admissible, nu2
from core.graphs.multigraph import Pair, near_factor_I, pair

log = logging.getLogger(__name__)

Walk = Tuple[int, ...]


def zigzag(i: int, k: int) -> List[int]:
    """The path i, i+1, i-1, i+2, i-2, ..., i+k on Z_2k.

    For i = 0..k-1 these k Hamilton paths partition the edges of K_2k, and path i holds
    exactly one edge {x, x+k}.
    """
    m = 2 * k
    seq = [i % m]
    for j in range(1, k):
        seq += [(i + j) % m, (i - j) % m]
    seq.append((i + k) % m)
    return seq


def walecki(n: int) -> Tuple[List[Walk], List[Pair]]:
    """Hamilton cycles decomposing K_n - F, and F.

    F is empty for odd n. For even n it is a perfect matching: one vertex is joined to
    both ends of every zigzag path, the other replaces the {x, x+k} edge of each path.

    Args:
        n (int): Vertex count, at least 3.

    Returns:
        tuple[list[Walk], list[Pair]]: (n-1)//2 or (n-2)//2 cycles, and F.
    """
    if n % 2:
        k = (n - 1) // 2
        return [(n,) + tuple(v + 1 for v in zigzag(i, k)) for i in range(k)], []
    k = (n - 2) // 2
    a, b = n - 1, n
    cycles: List[Walk] = []
    F: List[Pair] = [(a, b)]
    for i in range(k):
        seq = [v + 1 for v in zigzag(i, k)]
        cycles.append((a,) + tuple(seq[:k]) + (b,) + tuple(seq[k:]))
        F.append(pair(seq[k - 1], seq[k]))
    return cycles, F


def _relabel(cycles: Sequence[Walk], pi: Dict[int, int]) -> List[Walk]:
    return [tuple(pi.get(v, v) for v in c) for c in cycles]


def two_layer_hamilton(n: int) -> List[Walk]:
    """n - 1 Hamilton cycles decomposing 2K_n."""
    base, F = walecki(n)
    if not F:
        return base + base
    # sigma: a_j -> b_j -> a_{j+1}, so F and sigma(F) form the cycle a_1 b_1 a_2 b_2 ...
    m = len(F)
    sigma: Dict[int, int] = {}
    for j, (a, b) in enumerate(F):
        sigma[a] = b
        sigma[b] = F[(j + 1) % m][0]
    closing = tuple(v for a, b in F for v in (a, b))
    return base + _relabel(base, sigma) + [closing]


def hamilton_cycles(lam: int, n: int) -> List[Walk]:
    """Hamilton cycles decomposing lambda K_n - I, with I from near_factor_I."""
    base, F = walecki(n)
    cycles: List[Walk] = []
    if lam % 2:
        I = near_factor_I(lam, n)
        pi: Dict[int, int] = {}
        for (x, y), (u, v) in zip(F, I):
            pi[x], pi[y] = u, v
        cycles += _relabel(base, pi)
    for _ in range(lam // 2):
        cycles += two_layer_hamilton(n)
    return cycles


def _cycle_pairs(c: Walk) -> List[Pair]:
    return [pair(x, y) for x, y in zip(c, c[1:] + c[:1])]


def hamilton_digon_cycles(lam: int, n: int, h: int) -> Optional[List[Walk]]:
    """h Hamilton cycles plus 2-cycles decomposing lambda K_n, lambda even.

    Hamilton cycles are taken in equal pairs from the zigzag cycles so every pair keeps
    an even multiplicity. An odd h spends one whole 2K_n layer first, which needs even
    n and h >= n - 1.

    Returns:
        list[Walk] | None: The cycles, 2-cycles last; None when the construction does
        not apply.
    """
    if lam % 2 or n < 3 or h < 0:
        return None
    cycles: List[Walk] = []
    rest = lam
    if h % 2:
        if n % 2 or h < n - 1:
            return None
        cycles += two_layer_hamilton(n)
        h -= n - 1
        rest -= 2
    base, _ = walecki(n)
    if h // 2 > (rest // 2) * len(base):
        return None
    for j in range(h // 2):
        c = base[j % len(base)]
        cycles += [c, c]

    left = Counter({p: lam for p in combinations(range(1, n + 1), 2)})
    for c in cycles:
        left.subtract(_cycle_pairs(c))
    digons = [p for p in sorted(left) for _ in range(left[p] // 2)]
    return cycles + digons


def layer_split(lam: int, n: int, M: Sequence[int]) -> Optional[List[Tuple[int, List[int]]]]:
    """Splits an admissible list over the layers of lambda K_n - I.

    The layers are K_n - I (odd lambda) followed by lambda // 2 copies of 2K_n. Long
    cycles go largest first into the first layer they fit; 2-cycles are spread evenly
    over the 2K_n layers and fill whatever a layer has left.

    Returns:
        list[tuple[int, list[int]]] | None: (layer multiplicity, sublist) pairs, each
        sublist admissible for its layer; None when the greedy split fails.
    """
    layers = ([1] if lam % 2 else []) + [2] * (lam // 2)
    longs = sorted((m for m in M if m > 2), reverse=True)
    twos = nu2(M)
    out: List[Tuple[int, List[int]]] = []
    for i, layer in enumerate(layers):
        if i == len(layers) - 1:
            sub = longs + [2] * twos
        else:
            quota = -(-twos // layers[i:].count(2)) if layer == 2 else 0
            room = f(layer, n) - 2 * quota
            sub, rest = [], []
            for m in longs:
                gap = room - m
                if gap == 0 or gap >= 3 or (gap == 2 and layer == 2):
                    sub.append(m)
                    room = gap
                else:
                    rest.append(m)
            longs = rest
            if room < 0 or room % 2 or (room and layer == 1) or quota + room // 2 > twos:
                return None
            take = quota + room // 2
            sub += [2] * take
            twos -= take
        if not is_admissible(layer, n, sub):
            log.debug(f"Layer split of {lam}K_{n}-I failed at layer {i}")
            return None
        out.append((layer, sub))
    return out
