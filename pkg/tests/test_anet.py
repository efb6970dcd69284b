# -*- coding: utf-8 -*-

import numpy as np
import pytest

from tdnet.anet import (
    ActionObsPairOneHot,
    AnswerNet,
    Bias,
    FeatureRecipe,
    ObservationBits,
    PrevPredictions,
    build_features,
    forward,
    history_recipe,
    predict_states,
    prediction_gradient,
    recipe_from_names,
)
from tdnet.env import NULL_ACTION, observation_table


def test_state_features(env_config, recipe):
    obs = observation_table(env_config)
    x = build_features(recipe, None, obs[2])
    np.testing.assert_array_equal(x, np.eye(7)[2])


def test_history_features():
    r = history_recipe(2)
    assert r.width == 7
    assert r.recurrent
    x = build_features(r, NULL_ACTION, np.array([1.0]), np.array([0.3, 0.7]))
    np.testing.assert_array_equal(x, [1, 0, 0, 0, 0, 0.3, 0.7])
    # Action R (1) followed by bit 1 is the fourth pair.
    x = build_features(r, 1, np.array([1.0]), np.array([0.3, 0.7]))
    np.testing.assert_array_equal(x, [1, 0, 0, 0, 1, 0.3, 0.7])
    x = build_features(r, 0, np.array([0.0]))
    np.testing.assert_array_equal(x, [1, 1, 0, 0, 0, 0, 0])


def test_features_errors(env_config, recipe):
    with pytest.raises(ValueError):
        build_features(history_recipe(2), 0, np.array([1.0]), np.zeros(3))
    with pytest.raises(ValueError):
        build_features(recipe, None, np.array([1.0]))


def test_recipe_from_names():
    r = recipe_from_names(["bias", "action_obs", "prev"], 6)
    assert r.parts == (Bias(), ActionObsPairOneHot(2, 0), PrevPredictions(6))
    assert r.width == 11
    assert recipe_from_names(["obs"], 3).width == 8
    assert recipe_from_names(["obs:1"], 3).observation_width_needed() == 1
    with pytest.raises(ValueError):
        recipe_from_names(["nonsense"], 3)
    with pytest.raises(ValueError):
        recipe_from_names([], 3)


def test_forward_identity():
    r = FeatureRecipe((ObservationBits(3),))
    net = AnswerNet(2, r, weights=[[1.0, 2.0, 3.0], [0.0, -1.0, 0.5]])
    np.testing.assert_allclose(forward(net, [1.0, 1.0, 2.0]), [9.0, 0.0])
    with pytest.raises(ValueError):
        forward(net, [1.0, 1.0])


def test_forward_logistic():
    r = FeatureRecipe((ObservationBits(2),))
    net = AnswerNet(1, r, "logistic")
    np.testing.assert_allclose(forward(net, [1.0, 1.0]), [0.5])


@pytest.mark.parametrize("m", [11, 19, 35])
@pytest.mark.parametrize("activation", ["identity", "logistic"])
def test_gradient_finite_differences(m, activation):
    rng = np.random.default_rng(m)
    n, eps = 3, 1e-6
    net = AnswerNet(n, FeatureRecipe((ObservationBits(m),)), activation, rng.normal(size=(n, m)) * 0.3)
    x = rng.normal(size=m)
    grad = prediction_gradient(net, x, forward(net, x))
    numeric = np.zeros((n, m))
    for i in range(n):
        for j in range(m):
            plus, minus = net.copy(), net.copy()
            plus.W[i, j] += eps
            minus.W[i, j] -= eps
            diff = (forward(plus, x) - forward(minus, x)) / (2 * eps)
            numeric[i, j] = diff[i]
            # y^k only depends on row k.
            np.testing.assert_allclose(np.delete(diff, i), 0.0, atol=1e-12)
    np.testing.assert_allclose(grad, numeric, atol=1e-6)


@pytest.mark.parametrize("activation", ["identity", "logistic"])
def test_gradient_random_instances(activation):
    rng = np.random.default_rng(7)
    h = 1e-5
    for _ in range(50):
        n, m = int(rng.integers(1, 6)), int(rng.integers(1, 13))
        net = AnswerNet(n, FeatureRecipe((ObservationBits(m),)), activation, 0.5 * rng.normal(size=(n, m)))
        x = rng.normal(size=m)
        grad = prediction_gradient(net, x, forward(net, x))
        numeric = np.zeros((n, m))
        for i in range(n):
            for j in range(m):
                plus, minus = net.copy(), net.copy()
                plus.W[i, j] += h
                minus.W[i, j] -= h
                numeric[i, j] = (forward(plus, x)[i] - forward(minus, x)[i]) / (2 * h)
        error = np.linalg.norm(grad - numeric) / max(np.linalg.norm(grad) + np.linalg.norm(numeric), 1e-12)
        assert error <= 1e-6


@pytest.mark.parametrize("depth,width", [(2, 11), (3, 19), (4, 35)])
def test_history_width_of_action_trees(depth, width):
    n = sum(2**d for d in range(1, depth + 1))
    r = recipe_from_names(["bias", "action_obs", "prev"], n)
    assert r.width == width
    assert history_recipe(n).width == width
    AnswerNet(n, r, "logistic")


def test_answer_net_errors(recipe):
    with pytest.raises(ValueError):
        AnswerNet(2, recipe, "tanh")
    with pytest.raises(ValueError):
        AnswerNet(2, recipe, weights=np.zeros((2, 6)))
    with pytest.raises(ValueError):
        AnswerNet(3, history_recipe(2))


def test_copy_is_independent(recipe):
    net = AnswerNet(2, recipe)
    other = net.copy()
    other.W[0, 0] = 1.0
    assert net.W[0, 0] == 0.0


def test_predict_states(env_config, recipe):
    W = np.arange(14, dtype=float).reshape(2, 7)
    table = predict_states(AnswerNet(2, recipe, weights=W), observation_table(env_config))
    np.testing.assert_array_equal(table, W.T)
    with pytest.raises(ValueError):
        predict_states(AnswerNet(2, history_recipe(2)), observation_table(env_config))
