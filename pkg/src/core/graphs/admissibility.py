"""Arithmetic feasibility predicates for cycle and path packings.

All arithmetic is exact integer arithmetic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Sequence

from core.configs import cfg
from core.graphs.multigraph import binom2

log = logging.getLogger(__name__)


def sigma(M: Sequence[int]) -> int:
    return sum(M)


def nu2(M: Sequence[int]) -> int:
    """Number of 2's in M."""
    return sum(1 for m in M if m == 2)


@dataclass(frozen=True)
class PackingInstance:
    """A cycle packing question for lambda K_n - I with length list M."""

    lam: int
    n: int
    M: List[int] = field(default_factory=list)

    @property
    def r(self) -> int:
        """Size of the leave a packing of M must have."""
        return f(self.lam, self.n) - sigma(self.M)


def f(lam: int, n: int) -> int:
    """Number of edges of lambda K_n - I."""
    total = lam * binom2(n)
    if lam * (n - 1) % 2 == 1:
        total -= n // 2
    return total


def is_admissible(lam: int, n: int, M: Sequence[int]) -> bool:
    """True iff M is (lambda, n)-admissible, i.e. lambda K_n - I decomposes into M-cycles."""
    return all(admissibility_conditions(lam, n, M).values())


def admissibility_conditions(lam: int, n: int, M: Sequence[int]) -> Dict[str, bool]:
    """The four admissibility conditions, by name.

    Conditions that only apply to one parity of lambda are reported as True for the
    other parity.
    """
    t = len(M)
    pairs = binom2(n)
    top = max(M) if M else 0
    return {
        "parts_in_range": all(2 <= m <= n for m in M),
        "sum_equals_f": sigma(M) == f(lam, n),
        "odd_lambda_two_cycles": lam % 2 == 0 or 2 * nu2(M) <= (lam - 1) * pairs,
        "even_lambda_max_bound": lam % 2 == 1 or 2 * (top + t - 2) <= lam * pairs,
    }


def packing_conditions(inst: PackingInstance) -> Dict[str, object]:
    """Per-condition report behind packing_feasible.

    Returns:
        dict: `r`, `nu2`, `max`, `t` and one boolean per packing condition.
    """
    lam, n, M = inst.lam, inst.n, inst.M
    r = inst.r
    t = len(M)
    pairs = binom2(n)
    top = max(M) if M else 0
    twos = nu2(M)
    report: Dict[str, object] = {"r": r, "nu2": twos, "max": top, "t": t}
    report["parts_in_range"] = all(2 <= m <= n for m in M) and r >= 0
    if lam % 2 == 1:
        # nu2 <= (lam-1)/2 C(n,2) written without division
        report["odd_lambda"] = (r not in (1, 2) and 2 * twos <= (lam - 1) * pairs) or (
            r == 2 and 2 * twos < (lam - 1) * pairs
        )
        report["even_lambda"] = True
    else:
        report["odd_lambda"] = True
        report["even_lambda"] = (r == 0 and 2 * (top + t - 2) <= lam * pairs) or (
            r >= 2 and 2 * (top + t - 2) < lam * pairs
        )
    return report


def packing_feasible(inst: PackingInstance) -> bool:
    """True iff lambda K_n - I admits an M-cycle packing."""
    if inst.lam < 1 or inst.n < 2:
        return False
    report = packing_conditions(inst)
    return bool(report["parts_in_range"] and report["odd_lambda"] and report["even_lambda"])


def path_packing_feasible(lam: int, n: int, M: Sequence[int]) -> bool:
    """True iff lambda K_n admits an M-path packing."""
    return all(1 <= m <= n - 1 for m in M) and sigma(M) <= lam * binom2(n)


def guaranteed_threshold(k: int) -> int:
    """Smallest n for which every admissible Berge instance with this k is guaranteed."""
    if k <= 3:
        return cfg.GUARANTEED_N[3]
    if k == 4:
        return cfg.GUARANTEED_N[4]
    return cfg.GUARANTEED_N[5]


def is_guaranteed(n: int, k: int) -> bool:
    return n >= guaranteed_threshold(k)


def berge_necessary_conditions(
    n: int, k: int, mu: int, cycles: Sequence[int], paths: Sequence[int]
) -> Dict[str, bool]:
    """The obvious necessary conditions for decomposing mu K_n^(k) into Berge walks.

    Args:
        n (int): Number of vertices.
        k (int): Edge size.
        mu (int): Edge multiplicity.
        cycles (Sequence[int]): Berge cycle lengths.
        paths (Sequence[int]): Berge path lengths.

    Returns:
        dict[str, bool]: One entry per condition.
    """
    return {
        "uniformity_in_range": 3 <= k < n,
        "mu_positive": mu >= 1,
        "cycle_parts_in_range": all(2 <= m <= n for m in cycles),
        "path_parts_in_range": all(1 <= m <= n - 1 for m in paths),
        "total_equals_edges": sigma(cycles) + sigma(paths) == mu * comb(n, k),
    }


def hamilton_divisible(n: int, k: int, mu: int = 1) -> bool:
    """True iff mu K_n^(k) has a number of edges divisible by n."""
    return n >= 1 and (mu * comb(n, k)) % n == 0
