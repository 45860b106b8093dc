"""Solver engine tests: pursuit, select-eliminate, splicing, gradient pursuit."""

import numpy as np
import pytest

from optpursuit import criteria
from optpursuit.linalg import least_squares_on_support
from optpursuit.solvers import (
    CLASSICAL,
    OPTIMAL,
    NoSelectableCandidateError,
    SolverConfig,
    run_solver,
    solve_bess,
    solve_cosa,
    solve_pursuit,
)
from optpursuit.synthetic import generate_instance

COUNTER_X = np.array([[0.2, 0.0, 0.0], [0.0, 0.8, 0.9], [0.0, 0.1, 0.1]])
COUNTER_Y = np.array([0.2, 0.85, 0.1])


def rss(X, y, S):
    state = least_squares_on_support(X, y, S)
    return float(state.residual @ state.residual)


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(k=0)
    with pytest.raises(ValueError):
        SolverConfig(k=2, residual_tol=-1.0)
    with pytest.raises(ValueError):
        SolverConfig(k=2, variant="exotic")


# ----------------------------------------------------------------- pursuit


def test_pursuit_orthonormal_full_fit():
    rng = np.random.default_rng(0)
    Q, _ = np.linalg.qr(rng.standard_normal((12, 5)))
    y = rng.standard_normal(12)
    for variant in (CLASSICAL, OPTIMAL):
        report = solve_pursuit(Q, y, SolverConfig(k=5, variant=variant, residual_tol=0.0))
        np.testing.assert_allclose(np.sort(report.beta), np.sort(Q.T @ y), atol=1e-10)
        resid = y - Q @ report.beta
        np.testing.assert_allclose(Q.T @ resid, 0.0, atol=1e-10)


def test_op_recovers_noiseless_gaussian():
    inst = generate_instance(n=100, p=200, k=10, seed=123)
    report = run_solver("op", inst.X, inst.y, 10)
    assert set(report.support) == set(inst.true_support)
    assert report.residual_norms[-1] <= 1e-6


def test_op_counterexample_path():
    # Correlation narrowly favors feature 2 first (0.775^2/0.82 beats
    # 0.69^2/0.65); the follow-up pick is feature 0, landing on the true
    # pair with residual 0.0055.
    report = run_solver("op", COUNTER_X, COUNTER_Y, 2)
    assert report.support == [2, 0]
    assert abs(report.residual_norms[-1] - 0.0055) <= 5e-4


def test_pursuit_residual_monotone():
    inst = generate_instance(n=40, p=60, k=8, seed=5, snr_db=12.0)
    for name in ("omp", "op"):
        report = run_solver(name, inst.X, inst.y, 8, residual_tol=0.0)
        norms = np.array(report.residual_norms)
        assert np.all(np.diff(norms) <= 1e-10)
        assert len(report.support) == 8


def test_op_per_step_dominance():
    """From any shared state, OP's pick never refits worse than OMP's."""
    rng = np.random.default_rng(6)
    for _ in range(15):
        X = rng.standard_normal((25, 12))
        y = rng.standard_normal(25)
        support = []
        for _step in range(6):
            state = least_squares_on_support(X, y, support)
            cands = [j for j in range(12) if j not in support]
            j_op = criteria.optimal_selection(X, state, cands).best()
            j_omp = criteria.corr_selection(X, state, cands).best()
            f_op = rss(X, y, support + [j_op])
            f_omp = rss(X, y, support + [j_omp])
            assert f_op <= f_omp + 1e-9 * max(1.0, f_omp)
            support.append(j_op)


def test_pursuit_no_selectable_candidate():
    x = np.arange(1.0, 5.0)
    X = np.column_stack([x, 2 * x, -x])
    y = np.array([1.0, 2.0, 0.0, 1.0])
    with pytest.raises(NoSelectableCandidateError):
        solve_pursuit(X, y, SolverConfig(k=2, variant=OPTIMAL, residual_tol=0.0))


def test_pursuit_determinism():
    inst = generate_instance(n=30, p=50, k=5, seed=9, snr_db=20.0)
    a = run_solver("op", inst.X, inst.y, 5)
    b = run_solver("op", inst.X, inst.y, 5)
    assert a.support == b.support
    np.testing.assert_array_equal(a.beta, b.beta)
    assert a.residual_norms == b.residual_norms
    assert a.objective_trace == b.objective_trace
    assert a.iterations == b.iterations


def test_pursuit_stops_on_residual_tol():
    rng = np.random.default_rng(10)
    Q, _ = np.linalg.qr(rng.standard_normal((10, 4)))
    y = Q[:, 1] * 3.0
    report = solve_pursuit(Q, y, SolverConfig(k=4, variant=OPTIMAL, residual_tol=1e-8))
    assert report.support == [1]


# -------------------------------------------------------------------- cosa


def test_cosa_orthonormal_single_feature():
    rng = np.random.default_rng(1)
    Q, _ = np.linalg.qr(rng.standard_normal((10, 2)))
    y = 2.0 * Q[:, 1] + 0.1 * Q[:, 0]
    for variant in (CLASSICAL, OPTIMAL):
        report = solve_cosa(Q, y, SolverConfig(k=1, variant=variant))
        assert report.support == [1]
        assert report.iterations <= 2


def test_cosaop_recovers_gaussian_snr25():
    # Same instance: the objective-based prune recovers the support where
    # the magnitude prune does not.
    inst = generate_instance(n=120, p=200, k=10, seed=63, snr_db=25.0)
    report = run_solver("cosaop", inst.X, inst.y, 10)
    assert set(report.support) == set(inst.true_support)
    rival = run_solver("cosamp", inst.X, inst.y, 10)
    assert set(rival.support) != set(inst.true_support)


def test_cosa_support_size_is_k_every_iteration():
    inst = generate_instance(n=60, p=100, k=6, seed=3, snr_db=18.0)
    sizes = []
    run_solver("cosaop", inst.X, inst.y, 6, callback=lambda it, S, b, r: sizes.append(len(S)))
    assert sizes and all(s == 6 for s in sizes)


def test_cosaop_noiseless_contraction():
    """beta error decreases monotonically to ~0 on generous sampling."""
    ok = 0
    for seed in range(10):
        inst = generate_instance(n=60, p=120, k=5, seed=seed)
        errors = []
        run_solver(
            "cosaop", inst.X, inst.y, 5,
            callback=lambda it, S, b, r: errors.append(float(np.linalg.norm(b - inst.beta_true))),
            max_iter=20,
        )
        drops = all(b <= a + 1e-12 for a, b in zip(errors, errors[1:]))
        if drops and errors[-1] < 1e-6:
            ok += 1
    assert ok >= 9


def test_cosa_warns_when_3k_exceeds_n():
    inst = generate_instance(n=20, p=40, k=8, seed=4, snr_db=20.0)
    with pytest.warns(UserWarning, match="clamped"):
        solve_cosa(inst.X, inst.y, SolverConfig(k=8, variant=OPTIMAL, max_iter=3))


# -------------------------------------------------------------------- bess


def test_bess_orthonormal_initial_already_optimal():
    rng = np.random.default_rng(2)
    Q, _ = np.linalg.qr(rng.standard_normal((12, 6)))
    y = 3.0 * Q[:, 0] - 2.0 * Q[:, 4]
    for variant in (CLASSICAL, OPTIMAL):
        report = solve_bess(Q, y, SolverConfig(k=2, variant=variant))
        assert set(report.support) == {0, 4}
        assert len(report.objective_trace) == 1  # no accepted splice rounds


def test_op_bess_counterexample_escapes_trap():
    report = run_solver("op-bess", COUNTER_X, COUNTER_Y, 2)
    assert set(report.support) == {0, 2}
    assert abs(report.residual_norms[-1] - 0.0055) <= 5e-4


def test_bess_objective_strictly_decreasing():
    inst = generate_instance(n=50, p=80, k=8, seed=21, snr_db=15.0, rho=0.7, signal_kind="block")
    for name in ("bess", "op-bess"):
        report = run_solver(name, inst.X, inst.y, 8)
        trace = report.objective_trace
        assert all(b < a for a, b in zip(trace, trace[1:]))
        assert len(report.support) == 8


def test_bess_splicing_threshold_zero_still_terminates():
    inst = generate_instance(n=30, p=40, k=4, seed=8, snr_db=10.0)
    report = run_solver("op-bess", inst.X, inst.y, 4, splicing_threshold=0.0)
    assert len(report.support) == 4


# ---------------------------------------------------------------------- gp


def test_gp_orthonormal_equals_omp_path():
    rng = np.random.default_rng(30)
    Q, _ = np.linalg.qr(rng.standard_normal((15, 6)))
    y = rng.standard_normal(15)
    gp = run_solver("gp", Q, y, 4)
    omp = run_solver("omp", Q, y, 4)
    assert gp.support == omp.support
    np.testing.assert_allclose(gp.beta, omp.beta, atol=1e-10)


def test_gp_families_residual_decay():
    inst = generate_instance(n=50, p=100, k=8, seed=13, snr_db=20.0)
    for name in ("gp", "ogp"):
        report = run_solver(name, inst.X, inst.y, 8, residual_tol=0.0)
        norms = [float(np.linalg.norm(inst.y))] + report.residual_norms
        ratios = [b**2 / a**2 for a, b in zip(norms, norms[1:])]
        assert all(r < 1.0 for r in ratios)


def test_ogp_one_step_beats_gp_choice():
    """From identical states, the OGP pick's one-step residual is <= GP's."""
    rng = np.random.default_rng(14)
    for trial in range(40):
        X = rng.standard_normal((25, 15))
        y = rng.standard_normal(25)
        size = int(rng.integers(1, 6))
        support = sorted(rng.choice(15, size=size, replace=False).tolist())
        beta = rng.standard_normal(size)
        r = y - X[:, support] @ beta
        from optpursuit.linalg import SupportState

        state = SupportState(
            support=support, inverse=np.zeros((0, 0)), beta=beta, residual=r,
            explained_energy=0.0,
        )
        cands = [j for j in range(15) if j not in support]
        j_ogp = criteria.ogp_selection(X, state, cands).best()
        j_gp = criteria.corr_selection(X, state, cands).best()

        def one_step(j):
            S2 = support + [j]
            Xs = X[:, S2]
            g = -(Xs.T @ r)
            v = Xs @ g
            gsq = float(g @ g)
            if gsq == 0.0:
                return float(np.linalg.norm(r))
            alpha = gsq / float(v @ v)
            return float(np.linalg.norm(r + alpha * v))

        assert one_step(j_ogp) <= one_step(j_gp) + 1e-10


def test_ogp_reupdate_variant_runs():
    inst = generate_instance(n=40, p=60, k=5, seed=19, snr_db=18.0)
    report = run_solver(
        "ogp", inst.X, inst.y, 5, ogp_reupdate=True, ogp_reupdate_tau=0.0, max_iter=30
    )
    assert len(report.support) <= 5
    norms = report.residual_norms
    assert all(b <= a + 1e-12 for a, b in zip(norms, norms[1:]))


def test_reports_have_exact_zero_off_support():
    inst = generate_instance(n=40, p=60, k=5, seed=23, snr_db=18.0)
    for name in ("omp", "op", "cosamp", "cosaop", "bess", "op-bess", "gp", "ogp"):
        report = run_solver(name, inst.X, inst.y, 5)
        off = np.setdiff1d(np.arange(60), report.support)
        assert np.all(report.beta[off] == 0.0)
        assert len(report.support) <= 5


def test_every_solver_is_deterministic():
    inst = generate_instance(n=40, p=60, k=5, seed=29, snr_db=16.0, rho=0.5)
    for name in ("omp", "op", "cosamp", "cosaop", "bess", "op-bess", "gp", "ogp"):
        a = run_solver(name, inst.X, inst.y, 5)
        b = run_solver(name, inst.X, inst.y, 5)
        assert a.support == b.support, name
        np.testing.assert_array_equal(a.beta, b.beta)
        assert a.residual_norms == b.residual_norms
        assert a.objective_trace == b.objective_trace
        assert a.iterations == b.iterations


def test_classical_pursuit_skips_collinear_lazily():
    # Column 1 duplicates column 0; classical scoring has no span screen,
    # so the duplicate is excluded only if its refit turns singular.
    rng = np.random.default_rng(33)
    x0 = rng.standard_normal(12)
    x2 = rng.standard_normal(12)
    X = np.column_stack([x0, x0, x2])
    y = 2.0 * x0 + 0.5 * x2
    report = solve_pursuit(X, y, SolverConfig(k=2, variant=CLASSICAL))
    assert sorted(report.support) in ([0, 2], [1, 2])
    assert report.residual_norms[-1] <= 1e-8
