"""Integrator and dynamics assembly against closed-form oracles.

The two analytic anchors: single-node logistic growth (exact sigmoid) and
the pure linear diffusion semigroup (exact matrix exponential through the
Laplacian eigenbasis).  Everything else checks invariants the stepper must
preserve regardless of step-size choices.
"""
import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crossnet import (
    DEFAULT_SKT_PARAMS,
    IntegrationError,
    IntegratorConfig,
    NetworkState,
    SktParams,
    build_graph,
    build_laplacian,
    check_positivity,
    eig_symmetric,
    equilibrium,
    gen_path,
    gen_ring,
    integrate,
    mode_amplitudes,
    pattern_metrics,
    perturb_homogeneous,
    reaction_terms,
    rhs_general,
    rhs_skt,
    simulate_skt,
    skt_to_general,
)
from crossnet.dynamics import write_final_state_csv, write_trajectory_csv
from crossnet.graphs import GraphSpec

P = DEFAULT_SKT_PARAMS


def logistic_exact(u0: float, r: float, a: float, t: float) -> float:
    cap = r / a
    return cap * u0 * math.exp(r * t) / (cap + u0 * (math.exp(r * t) - 1.0))


# ----------------------------------------------------------------- oracles


def test_single_node_logistic_matches_closed_form():
    p = SktParams(r1=1.3, r2=1.0, a1=0.7, a2=1.0, b1=0.0, b2=0.0)
    init = NetworkState(np.array([0.2]), np.array([0.0]))
    lap = np.zeros((1, 1))
    cfg = IntegratorConfig(t_max=3.0, steady_state_tol=1e-30)
    res = simulate_skt(p, lap, init, cfg)
    expect = logistic_exact(0.2, 1.3, 0.7, 3.0)
    assert res.final.u[0] == pytest.approx(expect, rel=1e-7)
    assert res.final.v[0] == 0.0  # zero stays zero exactly


def test_pure_diffusion_matches_matrix_exponential():
    g = gen_ring(16, 2)
    lap = build_laplacian(g)
    p = SktParams(r1=0.0, r2=0.0, a1=0.0, a2=0.0, b1=0.0, b2=0.0, d=0.4)
    rng = np.random.default_rng(3)
    u0 = rng.uniform(0.5, 2.0, 16)
    v0 = rng.uniform(0.5, 2.0, 16)
    t_end = 1.5
    cfg = IntegratorConfig(t_max=t_end, steady_state_tol=1e-30)
    res = simulate_skt(p, lap, NetworkState(u0, v0), cfg)
    s = eig_symmetric(lap, want_vectors=True)
    decay = s.eigenvectors @ np.diag(np.exp(-p.d * s.eigenvalues * t_end)) @ s.eigenvectors.T
    assert np.allclose(res.final.u, decay @ u0, atol=1e-7)
    assert np.allclose(res.final.v, decay @ v0, atol=1e-7)


def test_pure_diffusion_conserves_totals():
    g = gen_ring(12, 1)
    lap = build_laplacian(g)
    p = SktParams(r1=0.0, r2=0.0, a1=0.0, a2=0.0, b1=0.0, b2=0.0, d=0.2, d12=1.0, d21=0.5)
    rng = np.random.default_rng(4)
    u0 = rng.uniform(0.5, 2.0, 12)
    v0 = rng.uniform(0.5, 2.0, 12)
    cfg = IntegratorConfig(t_max=2.0, steady_state_tol=1e-30)
    res = simulate_skt(p, lap, NetworkState(u0, v0), cfg)
    # transport terms are Laplacian images, so node totals are invariant
    assert res.final.u.sum() == pytest.approx(u0.sum(), rel=1e-10)
    assert res.final.v.sum() == pytest.approx(v0.sum(), rel=1e-10)


def test_homogeneous_equilibrium_converges_immediately():
    eq = equilibrium(P)
    g = gen_ring(10, 2)
    lap = build_laplacian(g)
    init = NetworkState(np.full(10, eq.u_star), np.full(10, eq.v_star))
    res = simulate_skt(P, lap, init, IntegratorConfig())
    assert res.converged
    assert res.t_converged == 0.0
    assert np.array_equal(res.final.u, init.u)
    assert np.array_equal(res.final.v, init.v)
    assert res.steps_accepted == 0


# --------------------------------------------------------------- rhs pieces


def test_reaction_terms_zero_at_equilibrium():
    eq = equilibrium(P)
    fu, fv = reaction_terms(np.array([eq.u_star]), np.array([eq.v_star]), P)
    assert abs(fu[0]) < 1e-14
    assert abs(fv[0]) < 1e-14


def test_rhs_zero_coupling_reduces_to_reaction():
    u = np.array([0.5, 1.0, 2.0])
    v = np.array([0.1, 0.2, 0.3])
    lap = build_laplacian(gen_path(3))
    p = SktParams(r1=2.0, r2=1.0, a1=1.0, a2=1.0, b1=0.5, b2=0.5)
    du, dv = rhs_skt(u, v, p, lap)
    fu, fv = reaction_terms(u, v, p)
    assert np.array_equal(du, fu)
    assert np.array_equal(dv, fv)


def test_rhs_matches_bruteforce_formula():
    # direct loop over the model equations, no vectorization
    rng = np.random.default_rng(8)
    g = gen_ring(7, 2)
    lap = build_laplacian(g)
    p = SktParams(r1=5.0, r2=2.0, a1=3.0, a2=3.0, b1=1.0, b2=1.0,
                  d=0.03, d11=0.1, d22=0.2, d12=3.0, d21=0.7)
    u = rng.uniform(0.1, 2.0, 7)
    v = rng.uniform(0.1, 2.0, 7)
    du, dv = rhs_skt(u, v, p, lap)
    for i in range(7):
        acc_u = u[i] * (p.r1 - p.a1 * u[i] - p.b1 * v[i])
        acc_v = v[i] * (p.r2 - p.b2 * u[i] - p.a2 * v[i])
        for j in range(7):
            acc_u -= lap[i, j] * (p.d * u[j] + p.d11 * u[j] ** 2 + p.d12 * u[j] * v[j])
            acc_v -= lap[i, j] * (p.d * v[j] + p.d22 * v[j] ** 2 + p.d21 * u[j] * v[j])
        assert du[i] == pytest.approx(acc_u, rel=1e-12, abs=1e-12)
        assert dv[i] == pytest.approx(acc_v, rel=1e-12, abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_rhs_skt_equals_general_instantiation(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 12))
    g = gen_ring(n, 1)
    lap = build_laplacian(g)
    u = rng.uniform(0.05, 2.5, n)
    v = rng.uniform(0.05, 2.5, n)
    m = skt_to_general(P)
    du1, dv1 = rhs_skt(u, v, P, lap)
    du2, dv2 = rhs_general(u, v, m, lap)
    assert np.allclose(du1, du2, rtol=1e-12, atol=1e-12)
    assert np.allclose(dv1, dv2, rtol=1e-12, atol=1e-12)


# ------------------------------------------------------------- perturbation


def test_perturb_zero_magnitude_exact():
    eq = equilibrium(P)
    st8 = perturb_homogeneous(eq, 5, magnitude=0.0, seed=3)
    assert np.all(st8.u == eq.u_star)
    assert np.all(st8.v == eq.v_star)


def test_perturb_deterministic_and_seed_sensitive():
    eq = equilibrium(P)
    a = perturb_homogeneous(eq, 50, magnitude=1e-2, seed=0)
    b = perturb_homogeneous(eq, 50, magnitude=1e-2, seed=0)
    c = perturb_homogeneous(eq, 50, magnitude=1e-2, seed=1)
    assert np.array_equal(a.u, b.u) and np.array_equal(a.v, b.v)
    assert not np.array_equal(a.u, c.u)


def test_perturb_bounds_and_positivity():
    eq = equilibrium(P)
    s = perturb_homogeneous(eq, 2000, magnitude=0.05, seed=9)
    assert np.all(s.u > 0) and np.all(s.v > 0)
    assert np.all(np.abs(s.u / eq.u_star - 1.0) <= 0.05)
    assert np.all(np.abs(s.v / eq.v_star - 1.0) <= 0.05)


def test_perturb_sample_moments():
    eq = equilibrium(P)
    s = perturb_homogeneous(eq, 20000, magnitude=0.1, seed=2)
    rel = s.u / eq.u_star - 1.0
    # uniform on [-0.1, 0.1]: mean 0, var m^2/3
    assert abs(rel.mean()) < 0.005
    assert rel.var() == pytest.approx(0.1**2 / 3.0, rel=0.1)


def test_perturb_magnitude_guard():
    eq = equilibrium(P)  # v* = 0.125 binds
    with pytest.raises(ValueError, match="too large"):
        perturb_homogeneous(eq, 10, magnitude=0.2)
    with pytest.raises(ValueError, match=">= 0"):
        perturb_homogeneous(eq, 10, magnitude=-0.1)


# ---------------------------------------------------------------- stepper


def test_converged_flag_is_sound():
    g = build_graph(GraphSpec(family="ring", n=30, k=3))
    lap = build_laplacian(g)
    eq = equilibrium(P)
    init = perturb_homogeneous(eq, 30, magnitude=1e-2, seed=1)
    cfg = IntegratorConfig(steady_state_tol=1e-6)
    res = simulate_skt(P, lap, init, cfg)
    assert res.converged
    du, dv = rhs_skt(res.final.u, res.final.v, P, lap)
    assert max(np.abs(du).max(), np.abs(dv).max()) <= cfg.steady_state_tol
    assert res.t_converged == res.final.t


def test_t_max_stop_reason():
    g = gen_ring(10, 2)
    lap = build_laplacian(g)
    eq = equilibrium(P)
    init = perturb_homogeneous(eq, 10, magnitude=1e-2, seed=0)
    res = simulate_skt(P, lap, init, IntegratorConfig(t_max=1.0, steady_state_tol=1e-30))
    assert not res.converged
    assert res.reason == "t_max"
    assert res.final.t == pytest.approx(1.0, abs=1e-12)


def test_max_steps_stop_reason():
    g = gen_ring(10, 2)
    lap = build_laplacian(g)
    eq = equilibrium(P)
    init = perturb_homogeneous(eq, 10, magnitude=1e-2, seed=0)
    res = simulate_skt(P, lap, init, IntegratorConfig(max_steps=5, steady_state_tol=1e-30))
    assert not res.converged
    assert res.reason == "max_steps"
    assert res.steps_accepted <= 5


def test_nonfinite_state_raises_with_time():
    # negative quadratic "competition" coefficients are rejected by SktParams,
    # so drive blowup through a custom rhs
    init = NetworkState(np.array([1.0]), np.array([1.0]))

    def explosive(u, v):
        return u * u * 100.0, v * 0.0

    with pytest.raises(IntegrationError) as err:
        integrate(explosive, init, IntegratorConfig(t_max=10.0, steady_state_tol=1e-30))
    assert err.value.time is not None


def test_integrator_deterministic():
    g = gen_ring(20, 3)
    lap = build_laplacian(g)
    eq = equilibrium(P)
    init = perturb_homogeneous(eq, 20, magnitude=1e-2, seed=5)
    cfg = IntegratorConfig(t_max=20.0, steady_state_tol=1e-30)
    r1 = simulate_skt(P, lap, init, cfg)
    r2 = simulate_skt(P, lap, init, cfg)
    assert np.array_equal(r1.final.u, r2.final.u)
    assert np.array_equal(r1.times, r2.times)
    assert r1.steps_accepted == r2.steps_accepted


def test_tighter_tolerance_reduces_error():
    p = SktParams(r1=1.3, r2=1.0, a1=0.7, a2=1.0, b1=0.0, b2=0.0)
    init = NetworkState(np.array([0.2]), np.array([0.0]))
    lap = np.zeros((1, 1))
    expect = logistic_exact(0.2, 1.3, 0.7, 3.0)
    errs = []
    for rt in (1e-5, 1e-8, 1e-11):
        cfg = IntegratorConfig(rel_tol=rt, abs_tol=rt * 1e-2, t_max=3.0, steady_state_tol=1e-30)
        res = simulate_skt(p, lap, init, cfg)
        errs.append(abs(res.final.u[0] - expect))
    assert errs[0] > errs[2]
    assert errs[2] < 1e-10


def test_sampling_honors_sample_dt():
    g = gen_ring(10, 2)
    lap = build_laplacian(g)
    eq = equilibrium(P)
    init = perturb_homogeneous(eq, 10, magnitude=1e-2, seed=0)
    res = simulate_skt(P, lap, init, IntegratorConfig(t_max=10.0, sample_dt=1.0, steady_state_tol=1e-30))
    assert res.times[0] == 0.0
    assert res.times[-1] == pytest.approx(10.0, abs=1e-12)
    # grid-aligned sampling: at most one sample per sample_dt interval
    assert np.all(np.diff(res.times) > 0)
    assert res.times.size <= 10 / 1.0 + 2
    assert res.u_traj.shape == (res.times.size, 10)


def test_trajectory_buffer_is_bounded():
    g = gen_ring(10, 2)
    lap = build_laplacian(g)
    eq = equilibrium(P)
    init = perturb_homogeneous(eq, 10, magnitude=1e-2, seed=0)
    res = simulate_skt(P, lap, init, IntegratorConfig(t_max=300.0, steady_state_tol=1e-30))
    assert res.times.size <= 4096


def test_positivity_check_and_flag():
    g = gen_ring(15, 2)
    lap = build_laplacian(g)
    eq = equilibrium(P)
    init = perturb_homogeneous(eq, 15, magnitude=1e-2, seed=2)
    res = simulate_skt(P, lap, init, IntegratorConfig(t_max=50.0, steady_state_tol=1e-30))
    assert check_positivity(res)
    assert not res.positivity_violated


def test_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(rel_tol=0.0)
    with pytest.raises(ValueError):
        IntegratorConfig(t_max=-1.0)
    with pytest.raises(ValueError):
        IntegratorConfig(max_steps=0)
    with pytest.raises(ValueError):
        IntegratorConfig(sample_dt=0.0)


def test_state_validation():
    with pytest.raises(ValueError):
        NetworkState(np.zeros(3), np.zeros(4))
    with pytest.raises(ValueError):
        NetworkState(np.zeros((2, 2)), np.zeros((2, 2)))


# ------------------------------------------------------------ metrics, I/O


def test_pattern_metrics_homogeneous_is_flat():
    eq = equilibrium(P)
    state = NetworkState(np.full(8, eq.u_star), np.full(8, eq.v_star))
    m = pattern_metrics(state, eq)
    assert m.heterogeneity == 0.0
    assert m.pct_change_u == 0.0
    assert m.pct_change_v == 0.0


def test_pattern_metrics_known_values():
    state = NetworkState(np.array([1.0, 3.0]), np.array([2.0, 2.0]))
    m = pattern_metrics(state, (2.0, 1.0))
    assert m.heterogeneity == 1.0  # u deviates by 1, v by 0
    assert m.total_u == 4.0
    assert m.pct_change_u == 0.0
    assert m.pct_change_v == pytest.approx(100.0)


def test_mode_amplitudes_pick_out_planted_mode():
    g = gen_ring(12, 1)
    s = eig_symmetric(build_laplacian(g), want_vectors=True)
    eq = equilibrium(P)
    eps = 1e-3
    planted = 4
    state = NetworkState(
        eq.u_star + eps * s.eigenvectors[:, planted],
        np.full(12, eq.v_star),
    )
    c, b = mode_amplitudes(state, eq, s.eigenvectors)
    assert c[planted] == pytest.approx(eps, rel=1e-9)
    mask = np.ones(12, bool)
    mask[planted] = False
    # degenerate ring eigenvalues share eigenspaces, but the planted vector
    # is orthogonal to every other basis vector by construction
    assert np.all(np.abs(c[mask]) < 1e-12)
    assert np.all(np.abs(b) < 1e-12)


def test_trajectory_csv_layout(tmp_path):
    g = gen_ring(4, 1)
    lap = build_laplacian(g)
    eq = equilibrium(P)
    init = perturb_homogeneous(eq, 4, magnitude=1e-2, seed=0)
    res = simulate_skt(P, lap, init, IntegratorConfig(t_max=1.0, sample_dt=0.5, steady_state_tol=1e-30))
    path = tmp_path / "traj.csv"
    write_trajectory_csv(res, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "t," + ",".join(f"u_{i}" for i in range(4)) + "," + ",".join(f"v_{i}" for i in range(4))
    assert len(lines) == res.times.size + 1
    first = [float(x) for x in lines[1].split(",")]
    assert first[0] == 0.0
    assert first[1:5] == list(init.u)


def test_final_state_csv_layout(tmp_path):
    state = NetworkState(np.array([1.0, 2.0]), np.array([3.0, 4.0]))
    path = tmp_path / "final.csv"
    write_final_state_csv(state, path)
    assert path.read_text() == "node,u,v\n0,1,3\n1,2,4\n"
