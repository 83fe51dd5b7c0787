import pytest

from gbcsp.backtracker import SearchStats, level_profile, solve_all
from gbcsp.generator import sample_instance
from gbcsp.model import ConstraintSpec, Instance, Params
from gbcsp.oracle import brute_force
from gbcsp.rng import SeedSpec

from conftest import random_strict_params


def one_constraint(scope, incompatible, n, d):
    params = Params(n=n, d=d, k=len(scope), t=1, q=len(incompatible))
    return Instance(params, (ConstraintSpec(scope, frozenset(incompatible)),))


def unconstrained(n, d, k=2):
    return Instance(Params(n=n, d=d, k=k, t=0, q=1), ())


def test_seven_node_example():
    inst = one_constraint((0, 1), {(0, 0)}, n=2, d=2)
    stats = solve_all(inst, collect=True)
    assert stats.nodes == 7
    assert stats.solution_count == 3
    assert stats.level_counts == (1, 2, 3)
    assert stats.solutions == ((0, 1), (1, 0), (1, 1))


def test_unconstrained_complete_tree():
    stats = solve_all(unconstrained(2, 2))
    assert stats.nodes == 7
    assert stats.solution_count == 4
    assert level_profile(unconstrained(3, 2)) == [1, 2, 4, 8]
    # nodes of the full tree: 1 + d (d^n - 1) / (d - 1)
    assert solve_all(unconstrained(3, 2)).nodes == 15
    assert solve_all(unconstrained(4, 3)).nodes == 1 + 3 * (3**4 - 1) // 2


def test_fixed_seed_medium_instance_matches_brute_force():
    params = Params(n=6, d=3, k=2, t=6, q=2)
    inst = sample_instance(params, SeedSpec(123456, 0))
    stats = solve_all(inst, collect=True)
    report = brute_force(inst)
    assert set(stats.solutions) == set(report.solutions)
    assert stats.nodes == 1 + sum(3 * c for c in report.level_counts[:-1])


def test_matches_brute_force_on_seeded_instances(param_stream):
    for trial in range(40):
        params = random_strict_params(param_stream)
        inst = sample_instance(params, SeedSpec(91, trial))
        stats = solve_all(inst, collect=True)
        report = brute_force(inst)
        assert stats.nodes == report.node_count
        assert stats.level_counts == report.level_counts
        assert set(stats.solutions) == set(report.solutions)


def test_profile_reconstructs_nodes(param_stream):
    for trial in range(25):
        params = random_strict_params(param_stream)
        inst = sample_instance(params, SeedSpec(92, trial))
        stats = solve_all(inst)
        d = params.d
        assert stats.nodes == 1 + sum(d * c for c in stats.level_counts[:-1])
        assert stats.nodes % d == 1
        assert stats.solution_count == stats.level_counts[-1]


def test_monotone_pruning(param_stream):
    for trial in range(25):
        params = random_strict_params(param_stream)
        inst = sample_instance(params, SeedSpec(93, trial))
        counts = solve_all(inst).level_counts
        for i in range(params.n):
            assert counts[i + 1] <= params.d * counts[i]


def test_value_order_does_not_change_counts(param_stream):
    for trial in range(15):
        params = random_strict_params(param_stream)
        inst = sample_instance(params, SeedSpec(94, trial))
        base = solve_all(inst, collect=True)
        rev = solve_all(inst, collect=True, value_order=list(reversed(range(params.d))))
        assert rev.nodes == base.nodes
        assert rev.level_counts == base.level_counts
        assert rev.solutions == base.solutions  # both lexicographically sorted


def test_value_order_must_be_permutation():
    inst = unconstrained(3, 2)
    with pytest.raises(ValueError, match="permutation"):
        solve_all(inst, value_order=[0, 0])


def test_solutions_sorted_lexicographically():
    inst = one_constraint((1, 0), {(0, 1), (1, 1)}, n=3, d=2)
    sols = solve_all(inst, collect=True).solutions
    assert list(sols) == sorted(sols)


def test_non_strict_partial_pruning():
    # both tuples share value 0 for variable 0: assigning 0 kills the branch
    # immediately, before variable 1 is reached
    inst = one_constraint((0, 1), {(0, 0), (0, 1)}, n=3, d=2)
    stats = solve_all(inst, collect=True)
    report = brute_force(inst)
    assert stats.nodes == report.node_count
    assert stats.level_counts == report.level_counts
    assert stats.level_counts[1] == 1
    assert set(stats.solutions) == set(report.solutions)


def test_non_strict_random_instances(param_stream):
    for trial in range(15):
        k = 2
        n = 2 + param_stream.randbelow(4)
        d = 2 + param_stream.randbelow(2)
        q = d + param_stream.randbelow(d**k - d + 1)  # non-strict by construction
        t = 1 + param_stream.randbelow(2 * n)
        params = Params(n=n, d=d, k=k, t=t, q=q)
        inst = sample_instance(params, SeedSpec(95, trial))
        stats = solve_all(inst, collect=True)
        report = brute_force(inst)
        assert stats.nodes == report.node_count
        assert stats.level_counts == report.level_counts
        assert set(stats.solutions) == set(report.solutions)


def test_all_tuples_forbidden_blocks_root():
    # q = d^k: even the empty assignment is inconsistent, only the root exists
    inst = one_constraint((0, 1), {(0, 0), (0, 1), (1, 0), (1, 1)}, n=2, d=2)
    stats = solve_all(inst, collect=True)
    assert stats == SearchStats(nodes=1, solution_count=0, level_counts=(0, 0, 0), solutions=())


def test_stats_are_plain_data():
    stats = solve_all(unconstrained(2, 2))
    assert isinstance(stats.nodes, int)
    assert isinstance(stats.level_counts, tuple)
