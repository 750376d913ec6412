import math

import numpy as np
import pytest

from stablekit.ensemble import (EnsembleSpec, apply_shifts, build_ensemble,
                                centering, exact_centering, limit_params,
                                limit_params_mc, predicted_limit,
                                run_convergence_experiment, run_experiment,
                                superpose, superposition_result)
from stablekit.errors import CenteringError, ParameterError
from stablekit.gof import ks_two_sample
from stablekit.powermap import (MapParams, ParameterLaw, generate_trajectory,
                                stable_params_from_tails, tail_coefficients)
from stablekit.rng import RandomSource
from stablekit.sampling import sample_stable
from stablekit.stable import StableParams

C = ParameterLaw.constant
U = ParameterLaw.uniform


def _iid_trajectories(n, length, seed, delta1=1.0, delta2=1.0, alpha=1.0):
    rng = RandomSource(seed)
    rows = [generate_trajectory(MapParams(alpha, delta1, delta2), length, "iid",
                                rng.derive_child(i)).values
            for i in range(n)]
    return np.vstack(rows)


# ------------------------------------------------------------------ centering

def test_centering_zero_below_one():
    traj = _iid_trajectories(4, 100, 3)
    assert centering(traj, 0.5) == 0.0
    assert centering(traj, 0.99) == 0.0


def test_centering_mean_regime_constant_rows():
    traj = np.full((7, 50), 2.5)
    assert centering(traj, 1.5) == pytest.approx(7 * 2.5, abs=1e-12)


def test_centering_alpha_one_single_sample():
    for x in (0.3, -2.0, 3.0):
        assert centering(np.array([[x]]), 1.0) == pytest.approx(x, abs=1e-12)


def test_centering_alpha_one_guard():
    # one wild trajectory: |ECF(1/N)| collapses and the branch is unusable
    rng = np.random.default_rng(0)
    traj = (rng.random((1, 4000)) - 0.5) * 2e3
    with pytest.raises(CenteringError):
        centering(traj, 1.0)


def test_centering_input_validation():
    with pytest.raises(ParameterError):
        centering(np.empty((0, 5)), 1.0)
    with pytest.raises(ParameterError):
        centering(np.zeros((2, 2)), 2.0)


# ------------------------------------------------------------------ superpose

def test_superpose_single_process_identity_below_one():
    traj = _iid_trajectories(1, 64, 5)
    out = superpose(traj, 0.5)
    assert np.allclose(out, traj[0], atol=0, rtol=0)


def test_superpose_two_processes_quarter_scaling():
    traj = _iid_trajectories(2, 64, 6)
    out = superpose(traj, 0.5)
    assert np.allclose(out, (traj[0] + traj[1]) / 4.0, rtol=0, atol=1e-15)


def test_superpose_accepts_precomputed_centering():
    traj = _iid_trajectories(3, 128, 7, alpha=1.5)
    a_n = centering(traj, 1.5)
    assert np.array_equal(superpose(traj, 1.5), superpose(traj, 1.5, a_n))


def test_superpose_desk_scale_gclt_row():
    # symmetric unit-scale processes, N=1000: superposition indistinguishable
    # from the predicted limit law (10-seed majority)
    fails = 0
    for seed in range(10):
        spec = EnsembleSpec(1.5, 1000, 10_000, C(1), C(1), mode="iid", seed=seed)
        out = run_experiment(spec)
        fails += out.report.reject_at_5pct[0]
    assert fails <= 4


# --------------------------------------------------------------- apply_shifts

def test_apply_shifts_none():
    traj = _iid_trajectories(3, 16, 8)
    shifted, s = apply_shifts(traj, EnsembleSpec(1.0, 3, 16, C(1), C(1)),
                              RandomSource(1))
    assert np.array_equal(shifted, traj)
    assert np.array_equal(s, np.zeros(3))


def test_apply_shifts_linear_definition():
    traj = np.zeros((4, 5))
    spec = EnsembleSpec(1.0, 4, 5, C(1), C(1), shift_kind="linear")
    shifted, s = apply_shifts(traj, spec, RandomSource(1))
    assert np.allclose(s, [0.25, 0.5, 0.75, 1.0])
    assert np.allclose(shifted[2], -0.75)


def test_apply_shifts_cauchy_absorbed_by_centering():
    # ECF-based A_N moves by exactly -sum(s_i); superposition unchanged
    traj = _iid_trajectories(6, 4000, 9)
    spec = EnsembleSpec(1.0, 6, 4000, C(1), C(1), shift_kind="cauchy")
    shifted, s = apply_shifts(traj, spec, RandomSource(55))
    a0 = centering(traj, 1.0)
    a1 = centering(shifted, 1.0)
    assert (a1 - a0) == pytest.approx(-s.sum(), abs=1e-10)
    assert np.max(np.abs(superpose(traj, 1.0, a0)
                         - superpose(shifted, 1.0, a1))) <= 1e-10


def test_huge_shift_does_not_wrap_branch():
    # |s| >> pi N used to wrap a principal-branch log; the median-anchored
    # branch absorbs arbitrarily large constant shifts
    traj = _iid_trajectories(4, 4000, 10)
    s = np.array([5.0e4, -3.2e4, 12.0, -0.3])
    a0 = centering(traj, 1.0)
    a1 = centering(traj - s[:, None], 1.0)
    assert (a1 - a0) == pytest.approx(-s.sum(), rel=0, abs=1e-9)


def test_mean_regime_shift_absorption():
    traj = _iid_trajectories(5, 2000, 11, alpha=1.5)
    s = np.array([1.0, -2.0, 3.0, 0.5, 4.0])
    a0 = centering(traj, 1.5)
    a1 = centering(traj - s[:, None], 1.5)
    assert (a1 - a0) == pytest.approx(-s.sum(), abs=1e-9)


# --------------------------------------------------------------- limit params

def test_limit_params_constant_laws_reduce_to_tail_formula():
    spec = EnsembleSpec(1.2, 10, 10, C(3), C(1))
    bs, gs = limit_params(spec)
    bt, gt = stable_params_from_tails(
        tail_coefficients(MapParams(1.2, 3.0, 1.0)), 1.2)
    assert bs == pytest.approx(bt, abs=1e-15)
    assert gs == pytest.approx(gt, abs=1e-15)


def test_limit_params_published_figure_values():
    spec = EnsembleSpec(1.0, 10, 10, U(0.5, 1), U(1, 2))
    bs, gs = limit_params(spec)
    assert bs == pytest.approx(1.0 / 3.0, abs=1e-12)
    assert gs == pytest.approx(1.5 * math.log(2.0), abs=1e-12)


def test_limit_params_monte_carlo_cross_check():
    m = 1_000_000
    for spec in (EnsembleSpec(1.0, 10, 10, U(0.5, 1), U(1, 2)),
                 EnsembleSpec(1.5, 10, 10, U(1, 1.2), U(1, 1.2)),
                 EnsembleSpec(0.5, 10, 10, U(0.5, 1), U(1.5, 2))):
        bs, gs = limit_params(spec)
        bm, gm = limit_params_mc(spec, m, RandomSource(13))
        assert abs(bm - bs) <= 3.0 / math.sqrt(m)
        assert abs(gm - gs) <= 3.0 / math.sqrt(m)


def test_predicted_limit_mu_zero():
    lim = predicted_limit(EnsembleSpec(1.5, 10, 10, U(0.5, 1), U(1.5, 2)))
    assert lim.mu == 0.0 and lim.alpha == 1.5


# -------------------------------------------------------------- build_ensemble

def test_build_ensemble_constant_laws_share_deltas():
    spec = EnsembleSpec(1.0, 3, 50, C(2), C(0.5), seed=4)
    real = build_ensemble(spec)
    assert np.all(real.delta1 == 2.0) and np.all(real.delta2 == 0.5)
    assert not np.array_equal(real.trajectories[0], real.trajectories[1])
    assert real.trajectories.shape == (3, 50)


def test_build_ensemble_uniform_support_and_params():
    spec = EnsembleSpec(1.5, 40, 10, U(1, 2), U(0.5, 1), seed=4)
    real = build_ensemble(spec)
    assert np.all((real.delta1 >= 1) & (real.delta1 <= 2))
    assert np.all((real.delta2 >= 0.5) & (real.delta2 <= 1))
    # realized per-process parameters follow the tail formulas
    b0, g0 = stable_params_from_tails(
        tail_coefficients(MapParams(1.5, real.delta1[7], real.delta2[7])), 1.5)
    assert real.beta_i[7] == pytest.approx(b0, abs=1e-12)
    assert real.gamma_i[7] == pytest.approx(g0, abs=1e-12)


def test_build_ensemble_deterministic():
    spec = EnsembleSpec(1.0, 5, 100, U(1, 2), U(1, 2), shift_kind="cauchy",
                        seed=99)
    a = build_ensemble(spec)
    b = build_ensemble(spec)
    assert np.array_equal(a.trajectories, b.trajectories)
    assert np.array_equal(a.shifts, b.shifts)


def test_superposition_result_alpha_above_one_uses_exact_centering():
    spec = EnsembleSpec(1.5, 8, 500, C(3), C(1), shift_kind="cauchy", seed=2)
    res = superposition_result(spec)
    assert res.a_n == pytest.approx(
        exact_centering(res.realization, 1.5), abs=0)
    # exact centering = sum of invariant means minus shifts
    want = 8 * (-2.0 / 3.0) - res.realization.shifts.sum()
    assert res.a_n == pytest.approx(want, abs=1e-9)
    assert res.predicted_limit.mu == 0.0


def test_spec_validation():
    with pytest.raises(ParameterError):
        EnsembleSpec(2.0, 1, 1, C(1), C(1))
    with pytest.raises(ParameterError):
        EnsembleSpec(1.0, 0, 1, C(1), C(1))
    with pytest.raises(ParameterError):
        EnsembleSpec(1.0, 1, 0, C(1), C(1))
    with pytest.raises(ParameterError):
        EnsembleSpec(1.0, 1, 1, C(1), C(1), shift_kind="quadratic")
    with pytest.raises(ParameterError):
        EnsembleSpec(1.0, 1, 1, C(1), C(1), mode="quantum")


# ------------------------------------------------------------- full pipeline

def test_run_experiment_alpha_one_cauchy_fixed_point():
    # delta = 1 makes the invariant law standard Cauchy: S_N is exactly
    # standard Cauchy for every N, so the verdict should be clean
    spec = EnsembleSpec(1.0, 50, 5000, C(1), C(1), mode="iid", seed=123)
    report = run_convergence_experiment(spec)
    assert not report.reject_at_5pct[0]
    assert report.sample_sizes == (5000, 5000)


def test_run_experiment_table2_style_row():
    fails = 0
    for seed in range(10):
        spec = EnsembleSpec(1.0, 1000, 5000, C(3), C(1), shift_kind="cauchy",
                            mode="iid", seed=seed)
        rep = run_convergence_experiment(spec)
        fails += rep.reject_at_5pct[0] or rep.reject_at_5pct[1]
    assert fails <= 2


def test_negative_control_single_seed():
    spec = EnsembleSpec(1.5, 1000, 50_000, C(3), C(1), mode="iid", seed=0)
    limit = predicted_limit(spec)
    wrong = StableParams(1.5, -limit.beta, limit.gamma, 0.0)
    out = run_experiment(spec, reference_params=wrong)
    assert out.report.reject_at_5pct[0]
    assert out.reference_params == wrong


def test_scaling_consistency_doubling_n():
    # stability hallmark: doubling N leaves the superposition's law unchanged
    fails = 0
    for seed in range(10):
        s1 = EnsembleSpec(1.0, 200, 5000, C(1), C(1), mode="iid", seed=seed)
        s2 = EnsembleSpec(1.0, 400, 5000, C(1), C(1), mode="iid", seed=seed + 500)
        a = superposition_result(s1).samples
        b = superposition_result(s2).samples
        _, p = ks_two_sample(a, b)
        fails += p < 0.05
    assert fails <= 4


def test_reference_stream_independent_of_ensemble():
    spec = EnsembleSpec(1.0, 10, 1000, C(1), C(1), seed=77)
    out = run_experiment(spec)
    ref2 = sample_stable(out.result.predicted_limit,
                         RandomSource(77).derive_child(2), 1000)
    assert np.array_equal(out.reference, ref2)
