import itertools

import numpy as np
import pytest

from rhombusnet.optimizer import branch_bridge, minimize_slem, verify_no_improvement
from rhombusnet.spectral import slem
from rhombusnet.topology import ChainSpec, build_chain, host_single_node, host_triangle
from rhombusnet.weights import optimal_weights

GRID = [
    tuple(orders)
    for m in (2, 3)
    for orders in itertools.product((1, 2, 3), repeat=m)
]


def test_two_block_example():
    result = minimize_slem([2, 2], init=[0.2] * 4, budget=5000)
    assert np.max(np.abs(result.weights - np.full(4, 1 / 3))) <= 1e-3
    assert result.achieved_slem == pytest.approx(0.8047, abs=5e-5)
    assert result.evaluations <= 5000


def test_single_block_example():
    result = minimize_slem([1], init=[0.3, 0.3], budget=5000)
    assert np.max(np.abs(result.weights - 0.5)) <= 1e-3
    assert result.achieved_slem == pytest.approx(0.5, abs=1e-6)


def test_mixed_orders_recover_closed_form():
    result = minimize_slem([3, 2, 4], init=[0.2] * 6, budget=30000)
    target = optimal_weights([3, 2, 4])
    assert np.max(np.abs(result.weights - target)) <= 1e-3


@pytest.mark.parametrize("orders", GRID, ids=lambda o: ",".join(map(str, o)))
def test_three_initializations_reach_the_optimum(orders):
    spec = ChainSpec(orders)
    target_w = optimal_weights(spec)
    target_f = slem(spec, target_w).slem
    rng = np.random.default_rng(hash(orders) % 2**32)
    for trial in range(3):
        init = rng.uniform(0.05, 0.45, 2 * spec.block_count)
        result = minimize_slem(spec, init=init, budget=20000, seed=trial)
        assert abs(result.achieved_slem - target_f) <= 1e-6
        assert np.max(np.abs(result.weights - target_w)) <= 1e-3


def test_achieved_slem_is_recomputable():
    result = minimize_slem([2, 3], init=[0.2] * 4, budget=20000)
    report = slem([2, 3], result.weights)
    assert abs(result.achieved_slem - report.slem) <= 1e-10


def test_history_is_monotone_nonincreasing():
    result = minimize_slem([2, 2], init=[0.4, 0.1, 0.3, 0.2], budget=4000)
    history = np.array(result.history)
    assert len(history) == result.evaluations
    assert np.all(np.diff(history) <= 0.0)


def test_tiny_budget_reports_not_converged():
    result = minimize_slem([2, 2], init=[0.2] * 4, budget=20)
    assert not result.converged
    assert result.evaluations <= 20


def test_budget_must_be_positive():
    with pytest.raises(ValueError):
        minimize_slem([2, 2], budget=0)


def test_topology_argument_accepted():
    t = build_chain([2, 2])
    result = minimize_slem(t, init=[0.2] * 4, budget=5000)
    assert result.achieved_slem == pytest.approx(0.8047, abs=5e-5)


def test_no_improvement_at_the_optimum():
    assert verify_no_improvement([2, 2], optimal_weights([2, 2]), eps=0.05, trials=200, seed=3)
    assert verify_no_improvement([1, 1, 1], optimal_weights([1, 1, 1]), eps=0.02, trials=200, seed=4)


def test_no_improvement_trivial_at_zero_eps():
    assert verify_no_improvement([2, 2], optimal_weights([2, 2]), eps=0.0, trials=5, seed=0)


def test_improvement_is_detected_away_from_optimum():
    # perturbations around a clearly suboptimal point do find better weights
    spec = ChainSpec((2, 2))
    assert not verify_no_improvement(spec, np.full(4, 0.15), eps=0.05, trials=200, seed=5)


def test_branch_path_recovers_half_weights():
    result = branch_bridge([1], host_single_node(), budget=20000)
    assert np.max(np.abs(result.interior_weights - 0.5)) <= 1e-3
    assert result.interior_match
    assert result.host_edge_weights.size == 0
    # the four-node path has all optimal weights equal to one half
    assert result.bridge_weight == pytest.approx(0.5, abs=1e-3)


def test_branch_with_triangle_host():
    result = branch_bridge([2], host_triangle(), budget=40000)
    assert np.max(np.abs(result.interior_weights - np.full(2, 1 / 3))) <= 1e-3
    assert result.interior_match
    assert result.host_edge_weights.shape == (3,)
    assert -1.0 <= result.bridge_weight <= 1.0


def test_branch_result_export_fields():
    result = branch_bridge([1], host_single_node(), budget=8000, seed=2)
    d = result.as_dict()
    for key in ("weights", "slem", "evaluations", "converged", "seed",
                "interior_weights", "bridge_weight", "host_edge_weights",
                "interior_match"):
        assert key in d
