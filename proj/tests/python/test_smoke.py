import json

import numpy as np
import pytest

import mbadmm


def two_block_qp():
    rng = np.random.default_rng(3)
    blocks = []
    c = np.zeros(4)
    for n in (2, 3):
        B = rng.standard_normal((n, n))
        A = rng.standard_normal((4, n))
        c += A @ rng.standard_normal(n)
        f = mbadmm.Objective.quadratic(B @ B.T + np.eye(n), rng.standard_normal(n))
        blocks.append(mbadmm.Block(A, f))
    return mbadmm.Problem(blocks, c)


def kkt_objective(problem, Qs, qs):
    # dense KKT solve of the whole problem
    A = np.hstack([problem.block(i).A for i in range(problem.num_blocks)])
    Q = np.zeros((A.shape[1], A.shape[1]))
    q = np.concatenate(qs)
    off = 0
    for Qi in Qs:
        n = Qi.shape[0]
        Q[off:off + n, off:off + n] = Qi
        off += n
    m = A.shape[0]
    K = np.block([[Q, A.T], [A, np.zeros((m, m))]])
    sol = np.linalg.lstsq(K, np.concatenate([-q, problem.c]), rcond=None)[0]
    x = sol[: A.shape[1]]
    return 0.5 * x @ Q @ x + q @ x


def test_module_metadata():
    assert set(mbadmm.SCHEMES) == {"two_block", "gauss_seidel", "jacobi", "variable_splitting", "gbs", "prox_jacobi"}
    assert "random_qp" in mbadmm.GENERATORS


def test_prox_helpers():
    np.testing.assert_array_equal(mbadmm.prox_l1(np.array([3.0, -0.5, 1.0]), 1.0), [2.0, 0.0, 0.0])
    np.testing.assert_array_equal(mbadmm.project_box(np.array([-1.0, 0.5, 2.0]), np.zeros(3), np.ones(3)), [0.0, 0.5, 1.0])
    z = mbadmm.project_zero_sum([np.array([1.0]), np.array([-3.0])])
    np.testing.assert_allclose(z, [[2.0], [-2.0]])


def test_two_block_solve_matches_kkt():
    p = two_block_qp()
    cfg = mbadmm.SolverConfig("two_block")
    cfg.eps_abs = 1e-10
    cfg.eps_rel = 1e-10
    r = mbadmm.solve(p, cfg)
    assert r.status == "converged"
    assert r.trace["k"][0] == 0
    assert len(r.trace["k"]) == r.iterations + 1
    oracle = mbadmm.oracle_solve(p)
    assert abs(p.objective(r.x) - oracle["objective"]) <= 1e-6 * max(1.0, abs(oracle["objective"]))
    assert r.trace_csv().startswith("k,objective,primal_residual,iterate_change,wall_ms\n")


def test_oracle_against_numpy_kkt():
    rng = np.random.default_rng(5)
    Qs, qs, blocks = [], [], []
    c = np.zeros(3)
    for n in (2, 2, 1):
        B = rng.standard_normal((n, n))
        Q = B @ B.T + np.eye(n)
        q = rng.standard_normal(n)
        A = rng.standard_normal((3, n))
        c += A @ rng.standard_normal(n)
        Qs.append(Q)
        qs.append(q)
        blocks.append(mbadmm.Block(A, mbadmm.Objective.quadratic(Q, q)))
    p = mbadmm.Problem(blocks, c)
    assert mbadmm.oracle_solve(p)["objective"] == pytest.approx(kkt_objective(p, Qs, qs), rel=1e-9, abs=1e-9)


def test_make_instance_and_stress_divergence():
    inst = mbadmm.make_instance("gauss_seidel_stress")
    p, x0 = inst["problem"], inst["x0"]
    assert p.num_blocks == 3
    gs = mbadmm.solve(p, mbadmm.SolverConfig("gauss_seidel"), x0=x0)
    assert gs.status == "diverged"
    cfg = mbadmm.SolverConfig("gbs")
    cfg.alpha = 0.5
    assert mbadmm.solve(p, cfg, x0=x0).status == "converged"


def test_problem_json_round_trip():
    inst = mbadmm.make_instance("random_qp", seed=4, blocks=3)
    p = inst["problem"]
    text = p.to_json()
    assert json.loads(text)["format_version"] == 1
    assert mbadmm.Problem.from_json(text).to_json() == text


def test_errors_map_to_python_exceptions():
    p = two_block_qp()
    with pytest.raises(ValueError):
        mbadmm.Problem([mbadmm.Block(np.ones((3, 2))), mbadmm.Block(np.ones((4, 1)))], np.zeros(3))
    with pytest.raises(mbadmm.ConfigError):
        mbadmm.SolverConfig("admm9")
    cfg = mbadmm.SolverConfig("gbs")
    cfg.alpha = 1.5
    with pytest.raises(mbadmm.ConfigError):
        mbadmm.solve(p, cfg)
    with pytest.raises(mbadmm.WrongScheme):
        mbadmm.solve(mbadmm.make_instance("gauss_seidel_stress")["problem"], mbadmm.SolverConfig("two_block"))
    with pytest.raises(mbadmm.FormatError):
        mbadmm.make_instance("random_qp")


def test_run_scenario(tmp_path):
    scenario = {
        "format_version": 1,
        "instance": {"generator": "gauss_seidel_stress"},
        "defaults": {"max_iter": 50000},
        "schemes": ["gauss_seidel", {"scheme": "gbs", "alpha": 0.5}],
    }
    path = tmp_path / "s.json"
    path.write_text(json.dumps(scenario))
    code, summary = mbadmm.run_scenario(str(path), str(tmp_path / "out"))
    assert code == 1
    statuses = [s["status"] for s in summary["schemes"]]
    assert statuses == ["diverged", "converged"]
    assert (tmp_path / "out" / "gbs.csv").exists()
