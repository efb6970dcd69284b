# -*- coding: utf-8 -*-
"""TD-network learning: the single TD step, online and batch trainers.

The quantities of one time step are computed in the order

    y_t, a_t, c_t, o_{t+1}, x_{t+1}, y~_{t+1}, z_t, W_{t+1}, y_{t+1}

where ``y~_{t+1}`` uses the weights *before* the update made on the basis of
``z_t`` and ``y_{t+1}`` uses the weights after it.
"""

import logging
from collections.abc import Callable
from typing import NamedTuple, Optional, Union

import numpy as np

from .anet import AnswerNet, build_features, forward, prediction_gradient
from .env import NULL_ACTION, Experience, RandomPolicy, RandomWalkEnv, Trace, generate_trace
from .qnet import QuestionNet, compute_conditions, compute_targets


#: Batch-updating defaults.
BATCH_ALPHA = 0.01
BATCH_TOLERANCE = 1e-9
BATCH_MAX_SWEEPS = 100_000

_DIVERGENCE_BOUND = 1e150


class StepDiagnostics(NamedTuple):
    """Quantities computed during one TD step."""

    #: Targets ``z_t``.
    z: np.ndarray
    #: Conditions ``c_t``.
    c: np.ndarray
    #: Next predictions ``y~_{t+1}`` computed with the old weights.
    y_tilde: np.ndarray
    #: Weight change ``W_{t+1} - W_t``.
    delta_w: np.ndarray


class TdState:
    """Mutable state of an online TD-network learner.

    Parameters
    ----------
    anet : `AnswerNet`
        Answer network owned by this learner, updated in place.
    q : `QuestionNet`
        Question network providing targets and conditions.
    alpha : `float`
        Step-size parameter. ``0`` freezes the weights.
    o_first : `numpy.ndarray`
        First observation ``o_1``. The first feature vector is built with
        the null previous action and ``y_0 = 0``.

    Attributes
    ----------
    y_curr : `numpy.ndarray`
        Current predictions ``y_t``.
    x_curr : `numpy.ndarray`
        Feature vector ``x_t`` that produced ``y_t``, kept because the
        weight update differentiates ``y_t``.
    a_curr : `int` or `None`
        Last action taken (``a_{t-1}``), `None` before the first step.
    t : `int`
        Current time step.
    """

    def __init__(
        self, anet: AnswerNet, q: QuestionNet, alpha: float, o_first: np.ndarray
    ) -> None:
        _check_compatible(q, anet, len(o_first), q.actions)
        if not alpha >= 0:
            raise ValueError("'alpha' must be passed a nonnegative number!")
        self.anet = anet
        self.q = q
        self.alpha = float(alpha)
        self.a_curr: Optional[int] = None
        self.x_curr = build_features(anet.recipe, NULL_ACTION, o_first, np.zeros(q.n))
        self.y_curr = forward(anet, self.x_curr)
        self.t = 1


def _check_compatible(q: QuestionNet, anet: AnswerNet, width: int, actions) -> None:
    if anet.n != q.n:
        raise ValueError(
            f"The answer network has {anet.n} nodes but the question network "
            f"has {q.n}!"
        )
    if q.observation_width != width:
        raise ValueError(
            f"The question network reads {q.observation_width}-bit observations "
            f"but the data has {width} bits!"
        )
    if tuple(q.actions) != tuple(actions):
        raise ValueError(
            f"The question network's actions {q.actions} do not match the "
            f"data's actions {tuple(actions)}!"
        )
    if anet.recipe.observation_width_needed() > width:
        raise ValueError(
            f"The feature recipe reads {anet.recipe.observation_width_needed()} "
            f"observation bits but the data has {width}!"
        )


def td_step(
    s: TdState, a_t: Union[int, str], o_next: np.ndarray
) -> tuple[TdState, StepDiagnostics]:
    """Advance a TD-network learner by one time step.

    Parameters
    ----------
    s : `TdState`
        Learner state holding ``y_t`` and ``x_t``; updated in place.
    a_t : `int` or `str`
        Action taken at time ``t``, as an id or a label of the question
        network's action set.
    o_next : `numpy.ndarray`
        Observation ``o_{t+1}``.

    Returns
    -------
    `tuple`
        The updated state and the `StepDiagnostics` of the step.
    """
    net = s.anet
    a_t = s.q.action_id(a_t)
    c = compute_conditions(s.q, a_t)
    x_next = build_features(net.recipe, a_t, o_next, s.y_curr)
    y_tilde = forward(net, x_next)
    z = compute_targets(s.q, o_next, y_tilde)
    grad = prediction_gradient(net, s.x_curr, s.y_curr)
    delta_w = (s.alpha * (z - s.y_curr) * c)[:, np.newaxis] * grad
    net.W += delta_w
    s.y_curr = forward(net, x_next)
    s.x_curr = x_next
    s.a_curr = a_t
    s.t += 1
    return s, StepDiagnostics(z, c, y_tilde, delta_w)


class PredictionLog(NamedTuple):
    """Per-step record of an online run; row ``t - 1`` belongs to step ``t``."""

    #: Predictions ``y_t``.
    y: np.ndarray
    #: Next predictions ``y~_{t+1}`` with the old weights.
    y_tilde: np.ndarray
    #: Targets ``z_t``.
    z: np.ndarray
    #: Conditions ``c_t``.
    c: np.ndarray


class OnlineResult(NamedTuple):
    anet: AnswerNet
    log: Optional[PredictionLog]
    state: TdState
    trace: Optional[Trace] = None


StepCallback = Callable[[int, np.ndarray, StepDiagnostics], None]


def _as_experience(data) -> Experience:
    if isinstance(data, Experience):
        return data
    if isinstance(data, Trace):
        raise TypeError(
            "Learners take the 'experience' part of a Trace, not the Trace "
            "itself (hidden states are reserved for evaluation)!"
        )
    raise TypeError(f"{type(data).__name__!r} is not an Experience!")


def replay_online(
    experience: Experience,
    q: QuestionNet,
    anet: AnswerNet,
    alpha: float,
    log: bool = True,
    callback: Optional[StepCallback] = None,
) -> OnlineResult:
    """Apply `td_step` along a recorded experience stream.

    Parameters
    ----------
    experience : `Experience`
        Recorded stream ``o_1, a_1, ..., a_T, o_{T+1}``.
    q : `QuestionNet`
        Question network.
    anet : `AnswerNet`
        Answer network, trained in place.
    alpha : `float`
        Step-size parameter.
    log : `bool`, default: ``True``
        Keep a `PredictionLog` of every step.
    callback : `callable`, optional
        Called after every step as ``callback(t, y_t, diagnostics)``.

    Returns
    -------
    `OnlineResult`
    """
    experience = _as_experience(experience)
    _check_compatible(q, anet, experience.observation_width, experience.action_labels)
    T = experience.length
    state = TdState(anet, q, alpha, experience.observations[0])
    if log:
        arrays = [np.empty((T, q.n)) for _ in range(4)]
    for t in range(T):
        y_t = state.y_curr
        _, diag = td_step(state, int(experience.actions[t]), experience.observations[t + 1])
        if log:
            arrays[0][t] = y_t
            arrays[1][t] = diag.y_tilde
            arrays[2][t] = diag.z
            arrays[3][t] = diag.c
        if callback is not None:
            callback(t + 1, y_t, diag)
    return OnlineResult(anet, PredictionLog(*arrays) if log else None, state)


def train_online(
    env: RandomWalkEnv,
    q: QuestionNet,
    anet: AnswerNet,
    alpha: float,
    steps: int,
    seed=None,
    log: bool = True,
    callback: Optional[StepCallback] = None,
) -> OnlineResult:
    """Generate one experience stream from ``env`` and learn from it online.

    The stream is a deterministic function of ``seed``; it is returned in the
    result (with its hidden states) for evaluation.
    """
    trace = generate_trace(env, RandomPolicy(seed, len(env.actions)), steps)
    result = replay_online(trace.experience, q, anet, alpha, log=log, callback=callback)
    return result._replace(trace=trace)


def rollout(experience: Experience, anet: AnswerNet) -> tuple[np.ndarray, np.ndarray]:
    """Features and predictions along a stream with fixed weights.

    Returns
    -------
    `tuple` of `numpy.ndarray`
        ``X`` of shape ``(T + 1) x m`` and ``Y`` of shape ``(T + 1) x n``,
        row ``t - 1`` holding ``x_t`` and ``y_t``.
    """
    experience = _as_experience(experience)
    T = experience.length
    recipe = anet.recipe
    X = np.empty((T + 1, anet.m))
    y_prev = np.zeros(anet.n)
    a_prev = NULL_ACTION
    if recipe.recurrent:
        Y = np.empty((T + 1, anet.n))
        for t in range(T + 1):
            X[t] = build_features(recipe, a_prev, experience.observations[t], y_prev)
            Y[t] = y_prev = forward(anet, X[t])
            if t < T:
                a_prev = int(experience.actions[t])
        return X, Y
    for t in range(T + 1):
        X[t] = build_features(recipe, a_prev, experience.observations[t])
        if t < T:
            a_prev = int(experience.actions[t])
    return X, anet.output(X @ anet.W.T)


class BatchResult(NamedTuple):
    """Outcome of batch updating."""

    anet: AnswerNet
    sweeps: int
    converged: bool
    diverged: bool
    #: Largest absolute entry of the last applied sweep's weight change.
    max_change: float


def batch_delta(
    experience: Experience,
    q: QuestionNet,
    anet: AnswerNet,
    alpha: float,
    X: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Sum of the TD weight changes over a stream, with fixed weights.

    Predictions ``y_t`` and next predictions ``y~_{t+1}`` both come from the
    current weights of ``anet``. ``X`` may be passed to reuse the feature
    matrix of a non-recurrent recipe.
    """
    if X is None or anet.recipe.recurrent:
        X, Y = rollout(experience, anet)
    else:
        Y = anet.output(X @ anet.W.T)
    obs = experience.observations
    C = q.condition_matrix[:, experience.actions].T
    Z = obs[1:] @ q.obs_weights.T + Y[1:] @ q.pred_weights.T
    E = (Z - Y[:-1]) * C * anet.slope(Y[:-1])
    return alpha * (E.T @ X[:-1])


def train_batch(
    experience: Experience,
    q: QuestionNet,
    anet: AnswerNet,
    alpha: float = BATCH_ALPHA,
    max_sweeps: int = BATCH_MAX_SWEEPS,
    tolerance: float = BATCH_TOLERANCE,
    logger: Optional[logging.Logger] = None,
) -> BatchResult:
    """Batch TD updating on a fixed recorded stream, repeated to convergence.

    Each sweep accumulates the weight changes of the whole stream using the
    start-of-sweep weights, then applies their sum once.

    Parameters
    ----------
    experience : `Experience`
        Fixed dataset; batch updating never regenerates data.
    q : `QuestionNet`
        Question network.
    anet : `AnswerNet`
        Answer network holding the initial weights, trained in place.
    alpha : `float`, default: ``0.01``
        Step-size parameter.
    max_sweeps : `int`, default: ``100000``
        Sweep cap.
    tolerance : `float`, default: ``1e-9``
        Convergence threshold on the largest absolute accumulated weight
        change of a sweep.
    logger : `logging.Logger`, optional
        Logger for progress and non-convergence reports.

    Returns
    -------
    `BatchResult`
        Non-convergence within ``max_sweeps`` is flagged, never raised.
    """
    if logger is None:
        logger = logging.getLogger(__name__)
    experience = _as_experience(experience)
    _check_compatible(q, anet, experience.observation_width, experience.action_labels)
    if not alpha > 0:
        raise ValueError("'alpha' must be passed a positive number!")
    X = None if anet.recipe.recurrent else rollout(experience, anet)[0]
    max_change = np.inf
    converged = diverged = False
    sweeps = 0
    with np.errstate(over="ignore", invalid="ignore"):
        while sweeps < max_sweeps:
            delta = batch_delta(experience, q, anet, alpha, X)
            sweeps += 1
            max_change = float(np.max(np.abs(delta))) if delta.size else 0.0
            anet.W += delta
            if not np.isfinite(max_change) or np.max(np.abs(anet.W)) > _DIVERGENCE_BOUND:
                diverged = True
                break
            if max_change < tolerance:
                converged = True
                break
            if sweeps % 10_000 == 0:
                logger.debug(f"Sweep {sweeps}: max weight change {max_change:.3e}.")
    if not converged:
        logger.warning(
            f"Batch updating did not converge after {sweeps} sweeps "
            f"(alpha={alpha}, last max weight change {max_change:.3e}"
            f"{', diverged' if diverged else ''})."
        )
    return BatchResult(anet, sweeps, converged, diverged, max_change)


def update_counts(experience: Experience, q: QuestionNet, anet: AnswerNet) -> np.ndarray:
    """Gated feature activity ``sum_t c^i_t |x^j_t|`` of every weight.

    Entry ``(i, j)`` is zero exactly when weight ``w^{ij}`` can never receive
    an update on this stream. Only defined for non-recurrent recipes.
    """
    experience = _as_experience(experience)
    if anet.recipe.recurrent:
        raise ValueError("Update counts are undefined for recurrent feature recipes!")
    X, _ = rollout(experience, anet)
    C = q.condition_matrix[:, experience.actions].T
    return C.T @ np.abs(X[:-1])


def learned_cells(counts: np.ndarray, state_features: np.ndarray) -> np.ndarray:
    """Which (state, node) predictions received at least one update.

    Parameters
    ----------
    counts : `numpy.ndarray`
        ``n x m`` output of `update_counts` (or of a Monte Carlo learner).
    state_features : `numpy.ndarray`
        ``num_states x m`` feature vectors of the states.

    Returns
    -------
    `numpy.ndarray`
        Boolean ``num_states x n`` array.
    """
    return (np.abs(state_features) @ counts.T) > 0
