import logging
from collections import Counter

from core.configs.solver import SolverConfig
from core.graphs.multigraph import WalkKind, complete_multigraph
from core.graphs.search import (
    ExactEngine,
    HeuristicEngine,
    WalkProblem,
    heuristic_search,
    solve,
    walk_length,
    walk_steps,
)
from core.utils.logger import setup_logging

log = logging.getLogger(__name__)

setup_logging(stream=False, to_file=False)


def _problem(lam, n, lengths, kind, cover):
    return WalkProblem(n, dict(complete_multigraph(lam, n).mult), list(lengths), kind, cover)


def _check_placement(problem: WalkProblem, walks):
    """Walks are simple, use at most the host multiplicities, and match the lengths."""
    used = Counter()
    for walk in walks:
        assert len(set(walk)) == len(walk)
        used.update(walk_steps(walk, problem.kind))
    assert all(used[p] <= problem.mult.get(p, 0) for p in used)
    assert sorted(walk_length(w, problem.kind) for w in walks) == sorted(problem.lengths)
    if problem.cover:
        assert used == Counter(problem.mult)


def test_walk_steps():
    assert walk_steps((1, 2, 3), WalkKind.CYCLE) == [(1, 2), (2, 3), (1, 3)]
    assert walk_steps((3, 1), WalkKind.CYCLE) == [(1, 3), (1, 3)]
    assert walk_steps((4, 2, 5), WalkKind.PATH) == [(2, 4), (2, 5)]
    assert walk_length((4, 2, 5), WalkKind.PATH) == 2


def test_exact_cover_cycles():
    for lengths in ([5, 5], [3, 3, 4]):
        problem = _problem(1, 5, lengths, WalkKind.CYCLE, cover=True)
        result = ExactEngine(problem).solve()
        assert result.found and result.complete
        _check_placement(problem, result.walks)


def test_exact_cover_with_two_cycles():
    problem = _problem(2, 4, [4, 4, 2, 2], WalkKind.CYCLE, cover=True)
    result = ExactEngine(problem).solve()
    assert result.found
    _check_placement(problem, result.walks)


def test_exact_cover_paths():
    problem = _problem(1, 4, [3, 3], WalkKind.PATH, cover=True)
    result = ExactEngine(problem).solve()
    assert result.found
    _check_placement(problem, result.walks)


def test_exact_proves_absence():
    # K_5 holds at most two edge-disjoint triangles
    problem = _problem(1, 5, [3, 3, 3], WalkKind.CYCLE, cover=False)
    result = ExactEngine(problem).solve()
    assert not result.found
    assert result.complete


def test_exact_budget_marks_incomplete():
    problem = _problem(1, 5, [5, 5], WalkKind.CYCLE, cover=True)
    result = ExactEngine(problem, node_budget=1).solve()
    assert not result.found
    assert not result.complete


def test_heuristic_packs_in_k9():
    config = SolverConfig(seed=3)
    for lengths, kind in (([4, 4, 4], WalkKind.CYCLE), ([8, 8], WalkKind.PATH)):
        problem = _problem(1, 9, lengths, kind, cover=False)
        result = HeuristicEngine(problem, config, config.derive(0)).run()
        assert result.found
        _check_placement(problem, result.walks)


def test_heuristic_search_is_deterministic():
    config = SolverConfig(seed=11)
    problem = _problem(1, 9, [6, 5, 4, 3], WalkKind.CYCLE, cover=False)
    first = heuristic_search(problem, config)
    second = heuristic_search(problem, config)
    assert first.found
    assert first.walks == second.walks
    assert first.seed == second.seed


def test_solve_routes_large_n_to_heuristic():
    config = SolverConfig(seed=5, exact_threshold=4)
    problem = _problem(1, 13, [5, 5, 5], WalkKind.CYCLE, cover=False)
    result = solve(problem, config)
    assert result.found
    assert result.seed is not None
    _check_placement(problem, result.walks)
