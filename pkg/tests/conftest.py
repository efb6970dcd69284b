# -*- coding: utf-8 -*-

from pathlib import Path

import numpy as np
import pytest

from tdnet.anet import state_recipe
from tdnet.env import EnvConfig, RandomWalkEnv, generate_trace
from tdnet.io import load_qnet
from tdnet.qnet import (
    ALWAYS,
    WALK_ACTIONS,
    NextPrediction,
    NodeSpec,
    ObservationBit,
    QuestionNet,
    TargetTerm,
    action_is,
    build_action_tree,
    build_chain,
)


REPO_DIR = Path(__file__).resolve().parents[1]
QNETS_DIR = REPO_DIR / "qnets"
CONFIGS_DIR = REPO_DIR / "configs"


@pytest.fixture
def env_config():
    return EnvConfig()


@pytest.fixture
def bit_config():
    return EnvConfig(observation="bit")


@pytest.fixture
def trace(env_config):
    return generate_trace(RandomWalkEnv(env_config), None, 200, seed=12345)


@pytest.fixture
def recipe():
    return state_recipe()


@pytest.fixture
def chain5():
    return build_chain(5)


@pytest.fixture
def tree2():
    return build_action_tree(WALK_ACTIONS, 2)


@pytest.fixture
def figure_qnet():
    return load_qnet(str(QNETS_DIR / "figure_1a.yaml"))


@pytest.fixture
def qnets_dir():
    return QNETS_DIR


@pytest.fixture
def configs_dir():
    return CONFIGS_DIR


def _random_qnet(rng, probability=False):
    n = int(rng.integers(1, 9))
    width = int(rng.integers(1, 9))
    actions = ("L", "R", "S")[: int(rng.integers(1, 4))]
    nodes = list()
    for i in range(n):
        count = int(rng.integers(1, 4))
        weights = rng.dirichlet(np.ones(count)) if probability else rng.normal(size=count)
        terms = list()
        for w in weights:
            if rng.random() < 0.5:
                source = ObservationBit(int(rng.integers(width)))
            else:
                source = NextPrediction(int(rng.integers(n)))
            terms.append(TargetTerm(source, float(w)))
        a = int(rng.integers(-1, len(actions)))
        nodes.append(NodeSpec(f"p{i}", tuple(terms), ALWAYS if a < 0 else action_is(a)))
    return QuestionNet(nodes, width, actions)


@pytest.fixture
def random_qnet():
    """Factory of random valid question networks, ``random_qnet(rng, probability=False)``."""
    return _random_qnet
