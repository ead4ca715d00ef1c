import logging

import pytest

from core.configs.solver import SolverConfig
from core.graphs.graph_decomp import GraphDecomposition, verify_graph_decomposition
from core.graphs.multigraph import Multigraph, WalkKind, complete_multigraph
from core.hyper.assembly import (
    Branch,
    StagedHost,
    assemble_H,
    build_HC,
    build_HP,
    closing_list,
    split_levels,
    two_cycles,
)
from core.utils.errors import GraphMismatch, InfeasibleInput, SizeMismatch, SpreadTooLarge
from core.utils.logger import setup_logging

log = logging.getLogger(__name__)

setup_logging(stream=False, to_file=False)

PATHS = [6, 6, 6, 6, 6, 5]


@pytest.fixture(scope="module")
def hp() -> StagedHost:
    return build_HP(PATHS, 1, 7, SolverConfig(seed=7))


@pytest.fixture(scope="module")
def hc() -> StagedHost:
    return build_HC([7, 7], 0, 7, SolverConfig(seed=7))


def test_split_levels():
    assert split_levels([7, 7], PATHS, 7) == (1, 0)
    assert split_levels([5] * 9, [], 7) == (0, 2)
    assert split_levels([], [], 1) == (0, 0)


def test_closing_list_rules():
    assert closing_list([7] * 5, 1, 7) == ([7, 7, 7], 3, 0)
    # one edge short: the last cycle that fits grows by one
    assert closing_list([5] * 5, 1, 7) == ([5, 5, 5, 6], 4, 1)
    assert closing_list([5, 5, 5], 1, 7) == ([5, 5, 5, 6], 3, 6)
    assert closing_list([7, 7], 0, 7) == ([], 0, 0)


def test_two_cycles():
    d = two_cycles(2, 4)
    assert d.lengths() == [2] * 6
    assert d.is_decomposition


def test_build_HP_joins_the_split_path(hp):
    assert hp.check() == []
    assert hp.branch is Branch.PATHS
    assert hp.level_bounds == (1, 2)
    assert hp.graph.edge_count() == sum(PATHS)
    assert sorted(hp.decomposition.lengths()) == sorted(PATHS)
    assert verify_graph_decomposition(hp.graph, hp.decomposition, PATHS, WalkKind.PATH) == []
    assert set(hp.timings_ms) >= {"layers", "extra_layer", "total"}


def test_build_HP_edge_cases():
    empty = build_HP([], 0, 5, SolverConfig())
    assert empty.branch is Branch.EMPTY
    assert empty.graph.edge_count() == 0
    with pytest.raises(InfeasibleInput):
        build_HP([5], 0, 5, SolverConfig())


def test_build_HC_tops_up_in_two_layers(hc):
    assert hc.check() == []
    assert hc.branch is Branch.EVEN_DECOMPOSE
    assert hc.leave_rule == "r=0"
    assert hc.level_bounds == (0, 2)
    assert sorted(hc.decomposition.lengths()) == [7, 7]
    assert verify_graph_decomposition(hc.graph, hc.decomposition, [7, 7], WalkKind.CYCLE) == []


@pytest.mark.parametrize(
    "C, lam_c, n, branch, rule",
    [
        ([5, 5], 1, 5, Branch.ODD_NU2_LARGE, "r=0"),
        ([4, 2, 2, 2, 2], 2, 4, Branch.EVEN_LONG_LIST, "r=0"),
        ([5, 5, 5, 4, 4, 4, 4], 3, 5, Branch.ODD_DECOMPOSE, "r>=2"),
        ([5, 5, 5, 4, 3], 2, 5, Branch.EVEN_DECOMPOSE, "r=1"),
        ([2, 2, 2], 2, 3, Branch.EVEN_DECOMPOSE, "r=0"),
    ],
)
def test_build_HC_branches(C, lam_c, n, branch, rule):
    staged = build_HC(C, lam_c, n, SolverConfig(seed=11))
    assert staged.branch is branch
    assert staged.leave_rule == rule
    assert staged.check() == []
    assert verify_graph_decomposition(staged.graph, staged.decomposition, C, WalkKind.CYCLE) == []


def test_build_HC_two_cycles_fill_the_layer_exactly():
    # 2(max + t - 2) equals lambda' C(n, 2): the list is admissible, no long-list detour
    staged = build_HC([2, 2, 2], 2, 3, SolverConfig(seed=11))
    assert staged.branch is Branch.EVEN_DECOMPOSE
    assert staged.graph == complete_multigraph(2, 3)
    assert staged.decomposition.lengths() == [2, 2, 2]


def test_build_HC_rejects_long_cycles():
    with pytest.raises(InfeasibleInput):
        build_HC([8], 0, 7, SolverConfig())


def test_staged_host_check_reports_breaches():
    g = complete_multigraph(1, 4)
    staged = StagedHost("H_P", g, GraphDecomposition(g, [], list(g.edge_instances())), (2, 3), Branch.PATHS)
    problems = staged.check()
    assert any("outside" in p for p in problems)
    assert any("uncovered" in p for p in problems)


def test_assemble_H(hp, hc):
    H, d = assemble_H(hp, hc, 1, 7, 4)
    assert H.edge_count() == 35
    low, high = H.multiplicity_bounds()
    assert 1 <= low and high - low <= 5
    assert sorted(d.lengths()) == sorted(PATHS + [7, 7])
    assert d.used_graph() == H

    with pytest.raises(SizeMismatch):
        assemble_H(hp, hc, 2, 7, 4)


def _staged(g: Multigraph) -> StagedHost:
    return StagedHost("H_C", g, GraphDecomposition(g), (0, 10), Branch.EMPTY)


def test_assemble_H_spread_and_vertex_count():
    lopsided = _staged(Multigraph(4, {(1, 2): 7, (3, 4): 1}))
    empty = _staged(complete_multigraph(0, 4))
    with pytest.raises(SpreadTooLarge) as info:
        assemble_H(lopsided, empty, 2, 4, 3)
    assert (info.value.low, info.value.high) == (0, 7)

    with pytest.raises(GraphMismatch):
        assemble_H(lopsided, _staged(complete_multigraph(0, 5)), 2, 4, 3)


def test_stage_model(hp):
    model = hp.to_model()
    assert model.name == "H_P"
    assert model.branch == "hp-paths"
    assert model.graph.n == 7
