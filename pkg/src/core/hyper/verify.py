"""Independent checks of Berge decomposition certificates, and set-family shadows.

Nothing here imports the constructions: certificates are read through
`HyperDecompositionModel`, so third-party output is audited the same way as our own.
"""

from __future__ import annotations

import logging
import random
from collections import Counter
from itertools import combinations
from math import comb
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from scipy.optimize import brentq
from scipy.special import binom

from core.configs import cfg
from core.models.schemas import HyperDecompositionModel, ViolationCode, ViolationModel
from core.utils.errors import InstanceTooLarge
from core.utils.helpers import validate_output

log = logging.getLogger(__name__)

Violation = ViolationModel
Mutant = Tuple[HyperDecompositionModel, List[int], List[int]]


def _steps(kind: str, core: Sequence[int]) -> List[Tuple[int, int]]:
    """The flanking core vertices of each hyperedge, in order."""
    steps = [(core[i], core[i + 1]) for i in range(len(core) - 1)]
    if kind == "cycle" and core:
        steps.append((core[-1], core[0]))
    return steps


def _structural(n: int, k: int, mu: int, d: HyperDecompositionModel) -> List[Violation]:
    found = []

    def flag(detail: str, index: Optional[int] = None) -> None:
        found.append(Violation(code=ViolationCode.ARITY_MISMATCH, walk_index=index, detail=detail))

    if (d.n, d.k, d.mu) != (n, k, mu):
        flag(f"certificate is for (n={d.n}, k={d.k}, mu={d.mu}), expected ({n}, {k}, {mu})")
    for i, w in enumerate(d.walks):
        want = len(w.edges) + (1 if w.kind == "path" else 0)
        if len(w.core) != want:
            flag(f"{len(w.core)} core vertices for {len(w.edges)} hyperedges", i)
        if len(w.edges) < (2 if w.kind == "cycle" else 1):
            flag(f"{w.kind} of length {len(w.edges)}", i)
        if any(not 1 <= v <= n for v in w.core):
            flag("core vertex outside 1..n", i)
        for e in w.edges:
            if len(set(e.members)) != k or len(e.members) != k:
                flag(f"hyperedge {e.members} is not a {k}-set", i)
            elif any(not 1 <= v <= n for v in e.members):
                flag(f"hyperedge {e.members} leaves 1..n", i)
            if not 0 <= e.copy_index < mu:
                flag(f"copy {e.copy_index} outside 0..{mu - 1}", i)
    return found


def _walk(i: int, kind: str, core: Sequence[int], edges: Sequence[Tuple[Tuple[int, ...], int]]) -> List[Violation]:
    found = []
    if len(set(core)) != len(core):
        found.append(Violation(code=ViolationCode.CORE_NOT_DISTINCT, walk_index=i, detail=f"core {list(core)}"))
    for j, ((a, b), (members, _)) in enumerate(zip(_steps(kind, core), edges)):
        if a not in members or b not in members:
            found.append(
                Violation(
                    code=ViolationCode.CONTAINMENT_FAIL,
                    walk_index=i,
                    detail=f"hyperedge {j} {list(members)} misses {{{a}, {b}}}",
                )
            )
            break
    if len(set(edges)) != len(edges):
        found.append(Violation(code=ViolationCode.DUPLICATE_HYPEREDGE, walk_index=i, detail="hyperedge repeated inside walk"))
    return found


def verify_berge_decomposition(
    n: int,
    k: int,
    mu: int,
    cycle_lengths: Sequence[int],
    path_lengths: Sequence[int],
    d: Any,
) -> List[Violation]:
    """Checks a certificate against mu K_n^(k) and the prescribed lengths.

    Structural problems (wrong arity, out-of-range vertices or copies, core and edge
    counts that disagree) are reported alone, since nothing else is meaningful then.

    Args:
        n (int): Vertex count.
        k (int): Edge size.
        mu (int): Edge multiplicity.
        cycle_lengths (Sequence[int]): Prescribed Berge cycle lengths.
        path_lengths (Sequence[int]): Prescribed Berge path lengths.
        d (HyperDecompositionModel | dict | str): The certificate.

    Returns:
        list[ViolationModel]: Empty iff the certificate is a valid decomposition.
    """
    d = validate_output(d, HyperDecompositionModel)
    found = _structural(n, k, mu, d)
    if found:
        return found

    owner: Dict[Tuple[Tuple[int, ...], int], int] = {}
    multiplicity: Counter = Counter()
    for i, w in enumerate(d.walks):
        edges = [(tuple(sorted(e.members)), e.copy_index) for e in w.edges]
        found.extend(_walk(i, w.kind, w.core, edges))
        for ident in dict.fromkeys(edges):
            if ident in owner:
                found.append(
                    Violation(
                        code=ViolationCode.DUPLICATE_HYPEREDGE,
                        walk_index=i,
                        detail=f"{list(ident[0])} copy {ident[1]} also in walk {owner[ident]}",
                    )
                )
            else:
                owner[ident] = i
        multiplicity.update(members for members, _ in edges)

    wrong = sum(1 for c in multiplicity.values() if c != mu)
    missing = comb(n, k) - len(multiplicity)
    if wrong or missing:
        found.append(
            Violation(
                code=ViolationCode.COVERAGE_MISMATCH,
                detail=f"{missing} {k}-sets absent, {wrong} present with multiplicity other than {mu}",
            )
        )

    got = Counter((w.kind, len(w.edges)) for w in d.walks)
    want = Counter([("cycle", m) for m in cycle_lengths] + [("path", m) for m in path_lengths])
    if got != want:
        extra = sorted((got - want).elements())
        short = sorted((want - got).elements())
        found.append(
            Violation(code=ViolationCode.LENGTH_MISMATCH, detail=f"unexpected {extra}, missing {short}")
        )
    if found:
        log.debug(f"Certificate rejected with {len(found)} violations")
    return found


# ---------------------------------------------------------------------------
# Single-fault mutants of a valid certificate
# ---------------------------------------------------------------------------


def _contained(kind: str, core: Sequence[int], members: Sequence[Sequence[int]]) -> bool:
    return all(a in m and b in m for (a, b), m in zip(_steps(kind, core), members))


def mutate_duplicate(d: HyperDecompositionModel, cycles: Sequence[int], paths: Sequence[int], rng: random.Random) -> Optional[Mutant]:
    """Relabels one hyperedge with another copy of the same k-set."""
    if d.mu < 2 or not d.walks:
        return None
    m = d.model_copy(deep=True)
    w = rng.choice([w for w in m.walks if w.edges])
    e = rng.choice(w.edges)
    e.copy_index = (e.copy_index + rng.randrange(1, m.mu)) % m.mu
    return m, list(cycles), list(paths)


def mutate_containment(d: HyperDecompositionModel, cycles: Sequence[int], paths: Sequence[int], rng: random.Random) -> Optional[Mutant]:
    """Swaps two hyperedges inside a walk so some hyperedge misses its core pair."""
    order = list(range(len(d.walks)))
    rng.shuffle(order)
    for i in order:
        w = d.walks[i]
        swaps = list(combinations(range(len(w.edges)), 2))
        rng.shuffle(swaps)
        for a, b in swaps:
            members = [e.members for e in w.edges]
            members[a], members[b] = members[b], members[a]
            if not _contained(w.kind, w.core, members):
                m = d.model_copy(deep=True)
                edges = m.walks[i].edges
                edges[a], edges[b] = edges[b], edges[a]
                return m, list(cycles), list(paths)
    return None


def mutate_core(d: HyperDecompositionModel, cycles: Sequence[int], paths: Sequence[int], rng: random.Random) -> Optional[Mutant]:
    """Repeats a core vertex at a position whose hyperedges still contain it."""
    order = list(range(len(d.walks)))
    rng.shuffle(order)
    for i in order:
        w = d.walks[i]
        size = len(w.edges)
        for j in rng.sample(range(len(w.core)), len(w.core)):
            if w.kind == "cycle":
                near = [(j - 1) % size, j]
            else:
                near = [t for t in (j - 1, j) if 0 <= t < size]
            for v in w.core:
                if v != w.core[j] and all(v in w.edges[t].members for t in near):
                    m = d.model_copy(deep=True)
                    m.walks[i].core[j] = v
                    return m, list(cycles), list(paths)
    return None


def mutate_coverage(d: HyperDecompositionModel, cycles: Sequence[int], paths: Sequence[int], rng: random.Random) -> Optional[Mutant]:
    """Drops a walk together with its length."""
    if not d.walks:
        return None
    m = d.model_copy(deep=True)
    w = m.walks.pop(rng.randrange(len(m.walks)))
    cycles, paths = list(cycles), list(paths)
    (cycles if w.kind == "cycle" else paths).remove(len(w.edges))
    return m, cycles, paths


def mutate_lengths(d: HyperDecompositionModel, cycles: Sequence[int], paths: Sequence[int], rng: random.Random) -> Optional[Mutant]:
    """Leaves the certificate alone and changes one prescribed length."""
    cycles, paths = list(cycles), list(paths)
    target = cycles if cycles else paths
    if not target:
        return None
    target[rng.randrange(len(target))] += 1
    return d.model_copy(deep=True), cycles, paths


def mutate_arity(d: HyperDecompositionModel, cycles: Sequence[int], paths: Sequence[int], rng: random.Random) -> Optional[Mutant]:
    """Adds a vertex to one hyperedge."""
    spots = [(i, j) for i, w in enumerate(d.walks) for j, e in enumerate(w.edges) if len(e.members) < d.n]
    if not spots:
        return None
    m = d.model_copy(deep=True)
    i, j = rng.choice(spots)
    e = m.walks[i].edges[j]
    e.members.append(rng.choice([v for v in range(1, m.n + 1) if v not in e.members]))
    return m, list(cycles), list(paths)


mutants: Dict[ViolationCode, Callable[..., Optional[Mutant]]] = {
    ViolationCode.DUPLICATE_HYPEREDGE: mutate_duplicate,
    ViolationCode.CORE_NOT_DISTINCT: mutate_core,
    ViolationCode.CONTAINMENT_FAIL: mutate_containment,
    ViolationCode.COVERAGE_MISMATCH: mutate_coverage,
    ViolationCode.LENGTH_MISMATCH: mutate_lengths,
    ViolationCode.ARITY_MISMATCH: mutate_arity,
}


# ---------------------------------------------------------------------------
# Shadows
# ---------------------------------------------------------------------------


def _family(S: Iterable[Iterable[int]], n: Optional[int]) -> Tuple[List[FrozenSet[int]], int]:
    family = [frozenset(s) for s in S]
    ground = n if n is not None else max((max(s) for s in family if s), default=0)
    if ground > cfg.SHADOW_MAX_N:
        raise InstanceTooLarge(ground, cfg.SHADOW_MAX_N, "ground set")
    return family, ground


def lower_shadow(S: Iterable[Iterable[int]], ell: int, n: Optional[int] = None) -> Set[FrozenSet[int]]:
    """All (k - ell)-sets contained in some member of S.

    Raises:
        InstanceTooLarge: If the ground set exceeds SHADOW_MAX_N.
    """
    family, _ = _family(S, n)
    out: Set[FrozenSet[int]] = set()
    for s in family:
        if 0 <= ell <= len(s):
            out.update(frozenset(t) for t in combinations(sorted(s), len(s) - ell))
    return out


def upper_shadow(S: Iterable[Iterable[int]], ell: int, n: int) -> Set[FrozenSet[int]]:
    """All (k + ell)-subsets of 1..n containing some member of S.

    Raises:
        InstanceTooLarge: If n exceeds SHADOW_MAX_N.
    """
    family, n = _family(S, n)
    out: Set[FrozenSet[int]] = set()
    for s in family:
        rest = [v for v in range(1, n + 1) if v not in s]
        if 0 <= ell <= len(rest):
            out.update(s | frozenset(t) for t in combinations(rest, ell))
    return out


def shadow_root(size: int, k: int) -> float:
    """The real s >= k with C(s, k) = size, for size >= 1."""
    if size < 1:
        raise ValueError("shadow_root needs a nonempty family")
    return float(brentq(lambda s: binom(s, k) - size, k - 1, float(size + k)))


def lower_shadow_bound(size: int, k: int) -> float:
    """Least possible size of the 2-set lower shadow of size k-sets: C(s, 2)."""
    return float(binom(shadow_root(size, k), 2))


def shadow_split(size: int, n: int) -> Tuple[int, int]:
    """(c, d) with size = c n - C(c+1, 2) + d and c as large as possible."""
    c = 0
    while (c + 1) * n - comb(c + 2, 2) <= size and c + 1 < n:
        c += 1
    return c, size - (c * n - comb(c + 1, 2))


def upper_shadow_bound(size: int, n: int) -> int:
    """Least possible size of the 3-set upper shadow of `size` pairs, size < C(n, 2)."""
    c, d = shadow_split(size, n)
    return c * comb(n - c, 2) + d * (n - c - 2) - comb(d, 2)


def second_upper_shadow_bound(size: int, n: int) -> int:
    """Least possible size of the 4-set upper shadow of `size` <= n-1 pairs."""
    return size * comb(n - size - 1, 2) + comb(size, 2) * (n - size - 1)
