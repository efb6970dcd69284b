# -*- coding: utf-8 -*-
"""Monte Carlo baselines learning the same predictions as TD networks.

Monte Carlo learners regress each prediction toward the actual outcome in
the data instead of toward a TD target. A prediction made at time ``t`` for
``h`` steps ahead can only be updated at time ``t + h``, so the learners
keep the pending feature vectors (and predictions) until their targets are
available. Updates whose target lies beyond the end of the data are skipped.
"""

import collections
from typing import NamedTuple, Optional

import numpy as np

from .anet import AnswerNet, FeatureRecipe
from .env import NULL_ACTION, Experience
from .learner import _as_experience, rollout
from .qnet import SPECIAL_BIT


class McResult(NamedTuple):
    """Weights learned by a Monte Carlo learner.

    Attributes
    ----------
    .. anet : `AnswerNet`
           Identity-activation answer network, one row per prediction.
    .. counts : `numpy.ndarray`
           ``n x m`` sum of ``|x_t|`` over the samples used for every row;
           zero entries mark weights that never received an update.
    """

    anet: AnswerNet
    counts: np.ndarray


def _features(experience: Experience, recipe: FeatureRecipe) -> np.ndarray:
    if recipe.recurrent:
        raise ValueError(
            "Monte Carlo learners cannot use recipes that feed back predictions!"
        )
    X, _ = rollout(experience, AnswerNet(1, recipe))
    return X


def _least_squares(X: np.ndarray, targets: np.ndarray, w0: np.ndarray) -> np.ndarray:
    # Minimum-norm correction from w0 leaves unidentified directions at w0.
    if len(targets) == 0:
        return w0.copy()
    correction, *_ = np.linalg.lstsq(X, targets - X @ w0, rcond=None)
    return w0 + correction


class McUnconditionalState:
    """Online Monte Carlo learner of n-step unconditional predictions.

    A ring buffer holds, for the last ``max(horizons)`` steps, the feature
    vector and the per-horizon predictions made at that step. When the bit
    ``h`` steps later arrives, the ``h``-step prediction stored for that
    step is compared to it (delta rule).

    Parameters
    ----------
    horizons : sequence of `int`
        Prediction lengths, one answer-network row each.
    recipe : `FeatureRecipe`
        Non-recurrent feature recipe.
    alpha : `float`
        Step-size parameter.
    weights : `numpy.ndarray`, optional
        Initial weights, default zeros.
    special_bit : `int`, default: ``0``
        Index of the predicted observation bit.
    """

    def __init__(
        self,
        horizons,
        recipe: FeatureRecipe,
        alpha: float,
        weights: Optional[np.ndarray] = None,
        special_bit: int = SPECIAL_BIT,
    ) -> None:
        self.horizons = np.array(sorted(int(h) for h in horizons))
        if len(self.horizons) == 0 or self.horizons[0] < 1:
            raise ValueError("'horizons' must be passed positive integers!")
        self.anet = AnswerNet(len(self.horizons), recipe, "identity", weights)
        self.alpha = float(alpha)
        self.special_bit = special_bit
        self.counts = np.zeros_like(self.anet.W)
        self.buffer: collections.deque = collections.deque(maxlen=int(self.horizons[-1]))

    def observe(self, x: np.ndarray, o: np.ndarray) -> None:
        """Process the features ``x_t`` and observation ``o_t`` of a new step."""
        bit = o[self.special_bit]
        W = self.anet.W
        for age, (x_old, y_old) in enumerate(reversed(self.buffer), 1):
            rows = np.flatnonzero(self.horizons == age)
            for i in rows:
                W[i] += self.alpha * (bit - y_old[i]) * x_old
                self.counts[i] += np.abs(x_old)
        self.buffer.append((x, W @ x))


class McConditionalState:
    """Online Monte Carlo learner of action-conditional predictions.

    Predictions are ordered like `tdnet.qnet.build_action_tree`. The
    prediction for sequence ``sigma`` at the state of time ``t`` is updated
    only at times where ``(a_t, ..., a_{t+|sigma|-1}) = sigma``, toward the
    bit observed at ``t + |sigma|``, using the current weights (so that
    ``alpha = 1`` is exact after one occurrence).
    """

    def __init__(
        self,
        num_actions: int,
        depth: int,
        recipe: FeatureRecipe,
        alpha: float,
        weights: Optional[np.ndarray] = None,
        special_bit: int = SPECIAL_BIT,
    ) -> None:
        self.num_actions = int(num_actions)
        self.depth = int(depth)
        if self.num_actions < 1 or self.depth < 1:
            raise ValueError("'num_actions' and 'depth' must be positive integers!")
        n = sum(self.num_actions ** d for d in range(1, self.depth + 1))
        self.anet = AnswerNet(n, recipe, "identity", weights)
        self.alpha = float(alpha)
        self.special_bit = special_bit
        self.counts = np.zeros_like(self.anet.W)
        self.window: collections.deque = collections.deque(maxlen=self.depth)

    def observe(self, x: np.ndarray, a: Optional[int], o: np.ndarray) -> None:
        """Process the action ``a_{t-1}`` leading to a new step, then its
        features ``x_t`` and observation ``o_t``.
        """
        if a is not None and a != NULL_ACTION:
            for entry in self.window:
                entry[1].append(int(a))
            bit = o[self.special_bit]
            W = self.anet.W
            for x_old, seq in self.window:
                i = sequence_index(self.num_actions, seq)
                W[i] += self.alpha * (bit - W[i] @ x_old) * x_old
                self.counts[i] += np.abs(x_old)
        if len(self.window) == self.window.maxlen:
            self.window.popleft()
        self.window.append((x, list()))


def sequence_index(num_actions: int, seq) -> int:
    """Index of the node predicting after action sequence ``seq``."""
    k = len(seq)
    offset = sum(num_actions ** d for d in range(1, k))
    pos = 0
    for a in seq:
        pos = pos * num_actions + int(a)
    return offset + pos


def mc_train_unconditional(
    experience: Experience,
    horizons,
    recipe: FeatureRecipe,
    alpha: Optional[float] = None,
    weights: Optional[np.ndarray] = None,
    special_bit: int = SPECIAL_BIT,
) -> McResult:
    """Learn n-step predictions of the special bit by Monte Carlo.

    Parameters
    ----------
    experience : `Experience`
        Recorded stream.
    horizons : sequence of `int`
        Prediction lengths; row ``k`` of the result predicts ``horizons[k]``
        (sorted) steps ahead.
    recipe : `FeatureRecipe`
        Non-recurrent feature recipe.
    alpha : `float`, optional
        Step size of the online delta rule. `None` selects batch updating,
        solved in closed form by least squares (the sample mean of the
        outcomes for one-hot state features).
    weights : `numpy.ndarray`, optional
        Initial weights, default zeros.
    special_bit : `int`, default: ``0``
        Index of the predicted observation bit.

    Returns
    -------
    `McResult`
    """
    experience = _as_experience(experience)
    X = _features(experience, recipe)
    bits = experience.observations[:, special_bit]
    if alpha is not None:
        learner = McUnconditionalState(horizons, recipe, alpha, weights, special_bit)
        for t in range(len(X)):
            learner.observe(X[t], experience.observations[t])
        return McResult(learner.anet, learner.counts)
    horizons = sorted(int(h) for h in horizons)
    anet = AnswerNet(len(horizons), recipe, "identity", weights)
    counts = np.zeros_like(anet.W)
    T1 = len(X)
    for i, h in enumerate(horizons):
        if h < 1:
            raise ValueError("'horizons' must be passed positive integers!")
        Xh = X[: max(T1 - h, 0)]
        anet.W[i] = _least_squares(Xh, bits[h:], anet.W[i])
        counts[i] = np.abs(Xh).sum(axis=0)
    return McResult(anet, counts)


def mc_train_conditional(
    experience: Experience,
    depth: int,
    recipe: FeatureRecipe,
    alpha: Optional[float] = 1.0,
    weights: Optional[np.ndarray] = None,
    special_bit: int = SPECIAL_BIT,
) -> McResult:
    """Learn action-conditional predictions by Monte Carlo.

    Rows are ordered like ``build_action_tree(actions, depth)``.

    Parameters
    ----------
    experience : `Experience`
        Recorded stream.
    depth : `int`
        Longest action sequence.
    recipe : `FeatureRecipe`
        Non-recurrent feature recipe.
    alpha : `float`, optional, default: ``1.0``
        Step size of the online rule; `None` selects batch least squares.
    weights : `numpy.ndarray`, optional
        Initial weights, default zeros.
    special_bit : `int`, default: ``0``
        Index of the predicted observation bit.

    Returns
    -------
    `McResult`
    """
    experience = _as_experience(experience)
    X = _features(experience, recipe)
    num_actions = len(experience.action_labels)
    if alpha is not None:
        learner = McConditionalState(num_actions, depth, recipe, alpha, weights, special_bit)
        actions = [None] + [int(a) for a in experience.actions]
        for t in range(len(X)):
            learner.observe(X[t], actions[t], experience.observations[t])
        return McResult(learner.anet, learner.counts)
    n = sum(num_actions ** d for d in range(1, int(depth) + 1))
    anet = AnswerNet(n, recipe, "identity", weights)
    counts = np.zeros_like(anet.W)
    samples: dict[int, list[int]] = collections.defaultdict(list)
    T = experience.length
    for t in range(T):
        for k in range(1, min(depth, T - t) + 1):
            samples[sequence_index(num_actions, experience.actions[t:t + k])].append(t)
    bits = experience.observations[:, special_bit]
    for i, ts in samples.items():
        ts = np.array(ts)
        k = _sequence_length(num_actions, i)
        anet.W[i] = _least_squares(X[ts], bits[ts + k], anet.W[i])
        counts[i] = np.abs(X[ts]).sum(axis=0)
    return McResult(anet, counts)


def _sequence_length(num_actions: int, index: int) -> int:
    k, size = 1, num_actions
    while index >= size:
        index -= size
        k += 1
        size = num_actions ** k
    return k
