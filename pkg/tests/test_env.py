# -*- coding: utf-8 -*-

import numpy as np
import pytest

from tdnet.env import (
    EnvConfig,
    RandomPolicy,
    RandomWalkEnv,
    generate_trace,
    next_state,
    observation_table,
    truncate_trace,
)
from tdnet.oracle import stationary_distribution


def test_observation_table(env_config, bit_config):
    full = observation_table(env_config)
    assert full.shape == (7, 8)
    np.testing.assert_array_equal(full[0], [1, 1, 0, 0, 0, 0, 0, 0])
    np.testing.assert_array_equal(full[3], [0, 0, 0, 0, 1, 0, 0, 0])
    np.testing.assert_array_equal(full[6], [1, 0, 0, 0, 0, 0, 0, 1])
    bit = observation_table(bit_config)
    np.testing.assert_array_equal(bit[:, 0], [1, 0, 0, 0, 0, 0, 1])


@pytest.mark.parametrize(
    "boundary,state,action,expected",
    [
        ("stay", 1, 0, 1),
        ("stay", 7, 1, 7),
        ("stay", 4, 0, 3),
        ("reflect", 1, 0, 2),
        ("reflect", 7, 1, 6),
        ("reflect", 4, 1, 5),
    ],
)
def test_next_state(boundary, state, action, expected):
    assert next_state(EnvConfig(boundary=boundary), state, action) == expected


def test_env_step():
    env = RandomWalkEnv()
    assert env.state == 4
    o = env.step(0)
    assert env.state == 3
    np.testing.assert_array_equal(o, observation_table(env.config)[2])
    env.reset()
    assert env.state == 4
    with pytest.raises(ValueError):
        env.step(2)


def test_invalid_config():
    with pytest.raises(ValueError):
        EnvConfig(num_states=6).validate()
    with pytest.raises(ValueError):
        EnvConfig(boundary="wrap").validate()
    with pytest.raises(ValueError):
        EnvConfig(observation="partial").validate()


def test_generate_trace(trace):
    exp, states = trace.experience, trace.hidden.states
    assert exp.length == 200
    assert exp.observations.shape == (201, 8)
    assert states[0] == 4
    assert np.all(np.abs(np.diff(states)) <= 1)
    np.testing.assert_array_equal(exp.observations, observation_table(trace.config)[states - 1])
    for t in range(200):
        assert states[t + 1] == next_state(trace.config, states[t], exp.actions[t])


def test_trace_is_determined_by_seed(env_config):
    a = generate_trace(RandomWalkEnv(env_config), None, 100, seed=7)
    b = generate_trace(RandomWalkEnv(env_config), RandomPolicy(99), 100, seed=7)
    c = generate_trace(RandomWalkEnv(env_config), None, 100, seed=8)
    np.testing.assert_array_equal(a.experience.actions, b.experience.actions)
    assert not np.array_equal(a.experience.actions, c.experience.actions)


def test_policy_is_uniform():
    actions = RandomPolicy(0).sample_actions(10000)
    assert set(np.unique(actions)) == {0, 1}
    assert 0.45 < actions.mean() < 0.55


def test_truncate_trace(trace):
    short = truncate_trace(trace, 50)
    assert short.experience.length == 50
    assert len(short.hidden.states) == 51
    np.testing.assert_array_equal(short.experience.observations, trace.experience.observations[:51])
    with pytest.raises(ValueError):
        truncate_trace(trace, 201)


def test_negative_length(env_config):
    with pytest.raises(ValueError):
        generate_trace(RandomWalkEnv(env_config), None, -1)


@pytest.mark.parametrize("boundary", ["stay", "reflect"])
@pytest.mark.parametrize("num_states", [7, 9])
def test_interior_moves_are_reversible(boundary, num_states):
    config = EnvConfig(num_states=num_states, boundary=boundary)
    for s in range(2, num_states):
        assert next_state(config, next_state(config, s, 0), 1) == s
        assert next_state(config, next_state(config, s, 1), 0) == s


@pytest.mark.slow
@pytest.mark.parametrize("boundary", ["stay", "reflect"])
def test_visitation_approaches_stationary_distribution(boundary):
    config = EnvConfig(boundary=boundary)
    trace = generate_trace(RandomWalkEnv(config), None, 10**6, seed=42)
    visits = np.bincount(trace.hidden.states, minlength=8)[1:] / len(trace.hidden.states)
    assert 0.5 * np.abs(visits - stationary_distribution(config)).sum() <= 0.01


def test_observation_modes_share_the_walk(env_config, bit_config):
    full = generate_trace(RandomWalkEnv(env_config), None, 500, seed=3)
    bit = generate_trace(RandomWalkEnv(bit_config), None, 500, seed=3)
    np.testing.assert_array_equal(full.hidden.states, bit.hidden.states)
    np.testing.assert_array_equal(full.experience.actions, bit.experience.actions)
    np.testing.assert_array_equal(full.experience.observations[:, :1], bit.experience.observations)


def test_action_frequency(env_config):
    trace = generate_trace(RandomWalkEnv(env_config), None, 10**5, seed=17)
    assert abs(trace.experience.actions.mean() - 0.5) <= 0.01
