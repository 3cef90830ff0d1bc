import pytest

import skilltask as st

UNIT = {
    "scenario": {"skills_dim": 1, "tasks_dim": 1, "periods": 1,
                 "ideal_matrix": [[1]], "base_skills": [1]},
    "learning": {"lr_matrix": 0.5, "lr_value": 0.01, "tol": 1e-8},
    "initial": {"matrix": [[2]], "values": [1]},
}


def test_production_accounting():
    assert st.task_output([2, 3], [[1, 2], [0, 1]]) == [2, 7]
    assert st.task_output([1, 0], [[1, 0], [0, 1]], machine=[1, 3]) == [2, 3]
    assert st.expected_income([2, 1], [3, 1]) == 7
    assert st.actual_income([1, 1], [2, 7]) == 9
    assert st.profit_gap([2, 1], [3, 1], [1, 2]) == [4, -1]
    assert st.cost([4], [3], machine_price=[1], wage=[2], fixed_coeff=[1]) == 14


def test_validation_errors_raise_value_error():
    with pytest.raises(ValueError):
        st.task_output([1, 2, 3], [[1, 0], [0, 1]])
    with pytest.raises(ValueError):
        st.simulate({"scenario": {"skills_dim": 0, "tasks_dim": 1}})
    with pytest.raises(ValueError, match="bogus"):
        st.generate_scenario({"skills_dim": 1, "tasks_dim": 1, "bogus": 1})


def test_simulate_unit_case_converges_in_27_periods():
    run = st.simulate(UNIT)
    assert run["converged"]
    assert run["periods"] == 27
    assert len(run["trace"]) == 28
    losses = [r["E_A"] for r in run["trace"]]
    assert all(b < a for a, b in zip(losses, losses[1:-1]))


def test_simulate_is_deterministic():
    cfg = {"scenario": {"skills_dim": 3, "tasks_dim": 2, "periods": 10,
                        "shock_sigma": 0.2, "seed": 4},
           "learning": {"lr_matrix": 0.05, "max_periods": 30}}
    assert st.simulate(cfg) == st.simulate(cfg)


def test_generate_scenario():
    s = st.generate_scenario({"skills_dim": 2, "tasks_dim": 3, "seed": 1})
    assert len(s["ideal_matrix"]) == 2
    assert len(s["base_tasks"]) == 3


def test_train_matrix_recovers_identity():
    a, report = st.train_matrix([[1, 0], [0, 1]], [[1, 0], [0, 1]], {"lr_matrix": 0.2})
    assert report["converged"]
    assert [v for row in a for v in row] == pytest.approx([1, 0, 0, 1], abs=1e-6)


def test_train_values():
    values, report = st.train_values([[1, 0], [0, 1]], [2, 3], {"lr_value": 0.3})
    assert report["converged"]
    assert values == pytest.approx([2, 3], abs=1e-6)


def test_matching_values():
    r = st.matching_values({"employees": [[1, 0], [0, 1]], "tasks": [1, 1],
                            "matrix": [[3, 1], [1, 3]], "values": [1, 1]})
    assert r["task_level"] == 6
    assert r["job_level"] == 4
    assert r["assignment"] == [0, 1]
    assert r["dominates"]


def test_cycle_bounds():
    r = st.cycle_bounds({"occupations": [{"tasks": [1, 1, 0], "count": 2},
                                         {"tasks": [0, 0, 1]}],
                         "task_times": [2, 3, 5]})
    assert r["occupation"] == [10, 15]
    assert r["task"] == [6, 15]
    assert r["total_tasks"] == 5
    assert r["dominates"]
