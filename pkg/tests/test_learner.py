# -*- coding: utf-8 -*-

import numpy as np
import pytest

from tdnet.anet import AnswerNet, history_recipe, predict_states
from tdnet.env import EnvConfig, RandomWalkEnv, generate_trace, observation_table, truncate_trace
from tdnet.learner import (
    TdState,
    learned_cells,
    replay_online,
    rollout,
    td_step,
    train_batch,
    train_online,
    update_counts,
)
from tdnet.montecarlo import mc_train_unconditional
from tdnet.oracle import extensive_fixed_point, linear_td_fixed_point
from tdnet.qnet import build_action_tree, build_chain
from tdnet.stats import rmse


@pytest.fixture
def obs(env_config):
    return observation_table(env_config)


def test_td_step_by_hand(obs, recipe):
    q = build_chain(2)
    W = np.zeros((2, 7))
    W[0, 2], W[0, 3], W[1, 3] = 0.4, 0.1, 0.2
    s = TdState(AnswerNet(2, recipe, weights=W), q, 0.5, obs[3])
    np.testing.assert_allclose(s.y_curr, [0.1, 0.2])
    s, diag = td_step(s, 0, obs[2])
    np.testing.assert_allclose(diag.y_tilde, [0.4, 0.0])
    np.testing.assert_allclose(diag.z, [0.0, 0.4])
    np.testing.assert_allclose(diag.delta_w[:, 3], [-0.05, 0.1])
    assert np.count_nonzero(diag.delta_w) == 2
    np.testing.assert_allclose(s.anet.W[:, 3], [0.05, 0.3])
    np.testing.assert_allclose(s.y_curr, [0.4, 0.0])
    assert s.t == 2
    assert s.a_curr == 0


def test_next_prediction_uses_old_weights(obs, recipe):
    # Staying in state 1 makes x_t and x_{t+1} identical.
    q = build_chain(1)
    s = TdState(AnswerNet(1, recipe, weights=[[0.5, 0, 0, 0, 0, 0, 0]]), q, 0.5, obs[0])
    s, diag = td_step(s, 0, obs[0])
    np.testing.assert_allclose(diag.y_tilde, [0.5])
    np.testing.assert_allclose(diag.z, [1.0])
    np.testing.assert_allclose(s.y_curr, [0.75])


def test_conditions_gate_updates(obs, recipe):
    q = build_action_tree("LR", 1)
    s = TdState(AnswerNet(2, recipe), q, 1.0, obs[1])
    s, diag = td_step(s, 1, obs[2])
    np.testing.assert_array_equal(diag.c, [0, 1])
    assert not np.any(diag.delta_w[0])
    s, diag = td_step(s, 0, obs[1])
    # L from state 3 leads to state 2: bit 0, no change from zero weights.
    assert not np.any(diag.delta_w)
    s, diag = td_step(s, 0, obs[0])
    np.testing.assert_allclose(diag.delta_w[0, 1], 1.0)
    assert not np.any(diag.delta_w[1])


def test_td_step_accepts_action_labels(trace, tree2):
    recipe = history_recipe(tree2.n)
    exp = trace.experience
    by_id = TdState(AnswerNet(tree2.n, recipe, "logistic"), tree2, 0.5, exp.observations[0])
    by_label = TdState(AnswerNet(tree2.n, recipe, "logistic"), tree2, 0.5, exp.observations[0])
    for t in range(20):
        a = int(exp.actions[t])
        _, d_id = td_step(by_id, a, exp.observations[t + 1])
        _, d_label = td_step(by_label, exp.action_labels[a], exp.observations[t + 1])
        np.testing.assert_array_equal(d_id.delta_w, d_label.delta_w)
    assert by_label.a_curr == by_id.a_curr
    np.testing.assert_array_equal(by_label.anet.W, by_id.anet.W)
    with pytest.raises(ValueError):
        td_step(by_label, "up", exp.observations[1])


def test_zero_alpha_freezes_weights(trace, recipe, tree2):
    W = np.full((tree2.n, 7), 0.3)
    res = replay_online(trace.experience, tree2, AnswerNet(tree2.n, recipe, weights=W), 0.0)
    np.testing.assert_array_equal(res.anet.W, W)
    np.testing.assert_allclose(res.log.y, 0.3)


def test_prediction_log(trace, recipe, tree2):
    calls = list()
    res = replay_online(
        trace.experience, tree2, AnswerNet(tree2.n, recipe), 0.5,
        callback=lambda t, y, diag: calls.append(t),
    )
    assert res.log.y.shape == (200, 6)
    assert res.log.z.shape == res.log.c.shape == res.log.y_tilde.shape == (200, 6)
    np.testing.assert_array_equal(res.log.y[0], 0.0)
    assert calls == list(range(1, 201))
    assert res.state.t == 201


def test_learners_refuse_traces(trace, recipe, tree2):
    with pytest.raises(TypeError):
        replay_online(trace, tree2, AnswerNet(tree2.n, recipe), 0.5)
    with pytest.raises(TypeError):
        train_batch(trace, tree2, AnswerNet(tree2.n, recipe))


def test_incompatible_networks(trace, recipe, tree2):
    with pytest.raises(ValueError):
        replay_online(trace.experience, tree2, AnswerNet(3, recipe), 0.5)
    with pytest.raises(ValueError):
        replay_online(trace.experience, build_chain(2, observation_width=1), AnswerNet(2, recipe), 0.5)
    with pytest.raises(ValueError):
        replay_online(trace.experience, tree2, AnswerNet(tree2.n, recipe), -0.1)


def test_train_online_is_deterministic(recipe, tree2):
    a = train_online(RandomWalkEnv(), tree2, AnswerNet(tree2.n, recipe), 1.0, 300, seed=5)
    b = train_online(RandomWalkEnv(), tree2, AnswerNet(tree2.n, recipe), 1.0, 300, seed=5)
    np.testing.assert_array_equal(a.anet.W, b.anet.W)
    assert a.trace.experience.length == 300


def test_online_alpha_one_learns_one_step_predictions(obs, recipe):
    q = build_action_tree("LR", 1)
    trace = generate_trace(RandomWalkEnv(), None, 500, seed=3)
    res = replay_online(trace.experience, q, AnswerNet(2, recipe), 1.0)
    table = predict_states(res.anet, obs)
    np.testing.assert_allclose(table[:, 0], [1, 1, 0, 0, 0, 0, 0])
    np.testing.assert_allclose(table[:, 1], [0, 0, 0, 0, 0, 1, 1])


def test_rollout_matches_frozen_online_run(tree2):
    r = history_recipe(tree2.n, 2)
    rng = np.random.default_rng(0)
    anet = AnswerNet(tree2.n, r, "logistic", rng.normal(size=(tree2.n, r.width)))
    exp = generate_trace(RandomWalkEnv(EnvConfig(observation="bit")), None, 100, seed=1).experience
    q = build_action_tree("LR", 2, observation_width=1)
    X, Y = rollout(exp, anet)
    res = replay_online(exp, q, anet.copy(), 0.0)
    assert X.shape == (101, r.width)
    np.testing.assert_allclose(res.log.y, Y[:-1])


@pytest.mark.parametrize("qname", ["chain5", "tree2"])
def test_batch_reaches_linear_td_fixed_point(trace, recipe, qname, request):
    q = request.getfixturevalue(qname)
    res = train_batch(trace.experience, q, AnswerNet(q.n, recipe), 0.01, 100_000, 1e-12)
    assert res.converged and not res.diverged
    assert res.max_change < 1e-12
    solved = linear_td_fixed_point(trace.experience, q, recipe)
    np.testing.assert_allclose(res.anet.W, solved.W, atol=1e-8)


def test_batch_is_deterministic(trace, recipe, chain5):
    a = train_batch(trace.experience, chain5, AnswerNet(5, recipe), 0.01, 500, 1e-9)
    b = train_batch(trace.experience, chain5, AnswerNet(5, recipe), 0.01, 500, 1e-9)
    np.testing.assert_array_equal(a.anet.W, b.anet.W)
    assert a.sweeps == b.sweeps


def test_batch_divergence_is_flagged(trace, recipe):
    res = train_batch(trace.experience, build_chain(1), AnswerNet(1, recipe), 10.0, 10_000)
    assert res.diverged
    assert not res.converged


def test_batch_sweep_cap(trace, recipe, chain5):
    res = train_batch(trace.experience, chain5, AnswerNet(5, recipe), 0.01, 3)
    assert res.sweeps == 3
    assert not res.converged


def test_one_step_batch_td_equals_batch_mc(trace, recipe):
    td = train_batch(trace.experience, build_chain(1), AnswerNet(1, recipe), 0.01, 100_000, 1e-12)
    mc = mc_train_unconditional(trace.experience, [1], recipe)
    np.testing.assert_allclose(td.anet.W, mc.anet.W, atol=1e-9)


def test_learned_cells(recipe, obs):
    q = build_action_tree("LR", 1)
    trace = generate_trace(RandomWalkEnv(), None, 1, seed=0)
    exp = trace.experience
    counts = update_counts(exp, q, AnswerNet(2, recipe))
    learned = learned_cells(counts, obs[:, 1:])
    assert learned.sum() == 1
    assert learned[3, exp.actions[0]]


@pytest.mark.parametrize("alpha", [0.01, 0.02])
def test_batch_fixed_point_from_random_weights(trace, recipe, chain5, obs, alpha):
    W0 = np.random.default_rng(8).normal(size=(5, 7))
    res = train_batch(trace.experience, chain5, AnswerNet(5, recipe, weights=W0), alpha, 100_000, 1e-12)
    assert res.converged
    solved = linear_td_fixed_point(trace.experience, chain5, recipe, W0)
    np.testing.assert_allclose(res.anet.W, solved.W, atol=1e-6)
    # Visited states forget the initial weights.
    from_zero = linear_td_fixed_point(trace.experience, chain5, recipe)
    visited = np.unique(trace.hidden.states[:-1]) - 1
    np.testing.assert_allclose(
        predict_states(res.anet, obs)[visited],
        predict_states(from_zero, obs)[visited],
        atol=1e-6,
    )


@pytest.mark.slow
def test_online_td_approaches_fixed_point(env_config, recipe, chain5, obs):
    truth = extensive_fixed_point(chain5, env_config).values
    trace = generate_trace(RandomWalkEnv(env_config), None, 100_000, seed=21)
    errors = list()
    for length in (1_000, 100_000):
        exp = truncate_trace(trace, length).experience
        res = replay_online(exp, chain5, AnswerNet(5, recipe), 0.002, log=False)
        errors.append(rmse(predict_states(res.anet, obs), truth))
    assert errors[1] < 0.05
    assert errors[1] < errors[0]
