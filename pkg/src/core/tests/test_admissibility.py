import logging

from core.graphs.admissibility import (
    PackingInstance,
    admissibility_conditions,
    berge_necessary_conditions,
    f,
    guaranteed_threshold,
    hamilton_divisible,
    is_admissible,
    is_guaranteed,
    nu2,
    packing_conditions,
    packing_feasible,
    path_packing_feasible,
)
from core.utils.logger import setup_logging

log = logging.getLogger(__name__)

setup_logging(stream=False, to_file=False)


def test_f_removes_near_factor_when_needed():
    assert f(1, 4) == 4
    assert f(1, 5) == 10
    assert f(2, 4) == 12
    assert f(3, 4) == 16
    assert f(3, 6) == 42


def test_admissible_lists():
    assert is_admissible(1, 5, [5, 5])
    assert is_admissible(1, 5, [3, 3, 4])
    assert is_admissible(2, 3, [2, 2, 2])
    assert is_admissible(2, 3, [3, 3])
    assert is_admissible(1, 4, [4])


def test_inadmissible_lists_name_the_condition():
    conditions = admissibility_conditions(1, 5, [2, 4, 4])
    assert not conditions["odd_lambda_two_cycles"]
    assert conditions["sum_equals_f"]
    assert not is_admissible(1, 5, [3, 3, 3])
    assert not is_admissible(1, 5, [6, 4])
    # 2K_4 into a 4-cycle and four 2-cycles: 2(4 + 5 - 2) > 2 * 6
    even = admissibility_conditions(2, 4, [4, 2, 2, 2, 2])
    assert even["sum_equals_f"]
    assert not even["even_lambda_max_bound"]
    assert nu2([2, 3, 2]) == 2


def test_packing_conditions_report_r():
    inst = PackingInstance(1, 5, [3, 3, 3])
    report = packing_conditions(inst)
    assert report["r"] == 1
    assert not packing_feasible(inst)
    assert packing_feasible(PackingInstance(1, 5, [3, 3]))
    assert packing_feasible(PackingInstance(1, 3, [3]))
    assert not packing_feasible(PackingInstance(1, 3, [2]))


def test_packing_even_lambda_needs_r_not_one():
    assert not packing_feasible(PackingInstance(2, 3, [3, 2]))
    assert packing_feasible(PackingInstance(2, 3, [3]))
    assert packing_feasible(PackingInstance(2, 3, [2, 2, 2]))


def test_path_packing_feasible():
    assert not path_packing_feasible(1, 4, [4])
    assert path_packing_feasible(1, 4, [3, 3])
    assert not path_packing_feasible(1, 4, [3, 3, 1])
    assert path_packing_feasible(2, 4, [3, 3, 3, 3])


def test_guaranteed_thresholds():
    assert guaranteed_threshold(3) == 108
    assert guaranteed_threshold(4) == 54
    assert guaranteed_threshold(5) == 38
    assert guaranteed_threshold(35) == 38
    assert is_guaranteed(38, 35)
    assert not is_guaranteed(37, 35)
    assert not is_guaranteed(107, 3)


def test_berge_necessary_conditions():
    ok = berge_necessary_conditions(38, 35, 1, [38] * 221, [37, 1])
    assert all(ok.values())
    bad = berge_necessary_conditions(6, 3, 1, [20], [])
    assert not bad["cycle_parts_in_range"]
    assert bad["total_equals_edges"]
    assert not berge_necessary_conditions(5, 5, 1, [], [])["uniformity_in_range"]


def test_hamilton_divisible():
    assert hamilton_divisible(38, 35)
    assert hamilton_divisible(4, 3)
    assert hamilton_divisible(5, 3)
    assert not hamilton_divisible(6, 3)
    assert hamilton_divisible(6, 3, mu=3)
