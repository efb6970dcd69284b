# -*- coding: utf-8 -*-
"""
tdnet
=====

The *tdnet* package implements temporal-difference networks: question
networks stating what a set of interlinked predictions should mean, and
answer networks learning them, together with Monte Carlo baselines, a
seven-state random walk to learn on, exact oracles and the harness that
runs the comparison experiments.

Documentation for *tdnet* is available in the form of docstrings
provided with the code.

Available submodules
--------------------

qnet
    Question networks: targets, conditions, chain and action-tree builders.
anet
    Answer networks: feature recipes, forward predictions and gradients.
learner
    The TD-network step, online and batch trainers.
montecarlo
    Monte Carlo baselines learning the same predictions.
env
    The random-walk environment, its policy, and experience traces.
oracle
    Exact predictions computed from knowledge of the walk.
stats
    RMSE, incorrect-prediction proportions and learning-curve binning.
io
    Question-network documents, CSV artifacts and logging setup.
config
    Experiment configurations.
experiments
    The experiment harness behind the ``tdnet`` command.
"""


from importlib.metadata import PackageNotFoundError, version

from .anet import AnswerNet, FeatureRecipe, build_features, forward, prediction_gradient
from .env import EnvConfig, Experience, RandomPolicy, RandomWalkEnv, Trace, generate_trace
from .learner import TdState, td_step, train_batch, train_online
from .qnet import QuestionNet, build_action_tree, build_chain, compute_conditions, compute_targets


try:
    # Change here if project is renamed and does not equal the package name
    dist_name = __name__
    __version__ = version(dist_name)
except PackageNotFoundError:  # pragma: no cover
    __version__ = "unknown"
finally:
    del version, PackageNotFoundError
