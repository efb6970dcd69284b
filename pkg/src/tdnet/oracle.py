# -*- coding: utf-8 -*-
"""Exact ground truth for the random walk, computed from knowledge of the chain.

All functions here read hidden states and transition dynamics; they are
measurement standards for the learners and never feed data back to them.
"""

import itertools
import logging
from collections.abc import Sequence
from typing import NamedTuple, Optional, Union

import numpy as np

from .anet import AnswerNet, FeatureRecipe
from .env import EnvConfig, Experience, next_state, observation_table
from .learner import _as_experience, rollout
from .qnet import SPECIAL_BIT, QuestionNet


logger = logging.getLogger(__name__)

#: Fixed-point iteration defaults.
FIXED_POINT_TOLERANCE = 1e-12
FIXED_POINT_MAX_ITERATIONS = 10**6


class OracleTable(NamedTuple):
    """True prediction of every node in every hidden state.

    Attributes
    ----------
    .. values : `numpy.ndarray`
           ``num_states x n`` array, row ``s - 1`` holds the true
           predictions in state ``s``.
    .. labels : `tuple` of `str`
           Node labels, one per column.
    .. config : `EnvConfig`
           Environment the table was computed for.
    .. converged : `bool`, default: ``True``
           ``False`` if the fixed-point iteration hit its cap.
    .. iterations : `int`, default: ``0``
           Number of fixed-point iterations performed.
    """

    values: np.ndarray
    labels: tuple[str, ...]
    config: EnvConfig
    converged: bool = True
    iterations: int = 0

    @property
    def num_states(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[1]

    def at(self, states: np.ndarray) -> np.ndarray:
        """Rows of the table for an array of hidden states (1-based)."""
        return self.values[np.asarray(states) - 1]


def _check_state(config: EnvConfig, s: int) -> int:
    if not 1 <= s <= config.num_states:
        raise ValueError(f"'s' must be in [1, {config.num_states}], got {s!r}!")
    return int(s)


def successor_table(config: EnvConfig) -> np.ndarray:
    """``num_actions x num_states`` array of 0-based successor state indices."""
    config.validate()
    return np.array(
        [
            [next_state(config, s, a) - 1 for s in range(1, config.num_states + 1)]
            for a in range(len(config.actions))
        ]
    )


def transition_matrices(config: EnvConfig) -> np.ndarray:
    """Deterministic per-action transition matrices, shape ``|A| x S x S``."""
    succ = successor_table(config)
    P = np.zeros((len(config.actions), config.num_states, config.num_states))
    for a, row in enumerate(succ):
        P[a, np.arange(config.num_states), row] = 1.0
    return P


def policy_transition_matrix(config: EnvConfig) -> np.ndarray:
    """State transition matrix under the uniform random policy."""
    return transition_matrices(config).mean(axis=0)


def stationary_distribution(config: EnvConfig) -> np.ndarray:
    """Stationary state distribution of the walk under the random policy."""
    P = policy_transition_matrix(config)
    S = config.num_states
    A = np.vstack([P.T - np.eye(S), np.ones((1, S))])
    b = np.zeros(S + 1)
    b[-1] = 1.0
    mu, *_ = np.linalg.lstsq(A, b, rcond=None)
    return mu


def _special_bits(config: EnvConfig, special_bit: int = SPECIAL_BIT) -> np.ndarray:
    return observation_table(config)[:, special_bit]


def true_unconditional(
    config: EnvConfig, h: int, s: int, special_bit: int = SPECIAL_BIT
) -> float:
    """Probability that the special bit is 1 exactly ``h`` steps after ``s``.

    Computed by ``h``-fold application of the random-policy transition
    matrix.
    """
    if h < 1:
        raise ValueError("'h' must be passed a positive integer!")
    s = _check_state(config, s)
    dist = np.linalg.matrix_power(policy_transition_matrix(config), h)[s - 1]
    return float(dist @ _special_bits(config, special_bit))


def true_unconditional_enumerated(
    config: EnvConfig, h: int, s: int, special_bit: int = SPECIAL_BIT
) -> float:
    """Same as `true_unconditional`, by enumerating all ``|A|^h`` action sequences."""
    if h < 1:
        raise ValueError("'h' must be passed a positive integer!")
    s = _check_state(config, s)
    num_actions = len(config.actions)
    bits = _special_bits(config, special_bit)
    total = 0.0
    for seq in itertools.product(range(num_actions), repeat=h):
        total += bits[_simulate(config, s, seq) - 1]
    return total / num_actions ** h


def unconditional_table(
    config: EnvConfig, horizons: Sequence[int], special_bit: int = SPECIAL_BIT
) -> np.ndarray:
    """``num_states x len(horizons)`` table of `true_unconditional` values."""
    P = policy_transition_matrix(config)
    bits = _special_bits(config, special_bit)
    return np.column_stack(
        [np.linalg.matrix_power(P, int(h)) @ bits for h in horizons]
    )


def _simulate(config: EnvConfig, s: int, seq) -> int:
    for a in seq:
        s = next_state(config, s, a)
    return s


def _action_ids(config: EnvConfig, seq) -> list[int]:
    actions = config.actions
    ids = list()
    for a in seq:
        if isinstance(a, str):
            if a not in actions:
                raise ValueError(f"{a!r} is not a valid action label!")
            ids.append(actions.index(a))
        else:
            if not 0 <= a < len(actions):
                raise ValueError(f"{a!r} is not a valid action id!")
            ids.append(int(a))
    return ids


def true_conditional(
    config: EnvConfig,
    seq: Union[str, Sequence[Union[int, str]]],
    s: int,
    special_bit: int = SPECIAL_BIT,
) -> int:
    """Special bit observed after taking action sequence ``seq`` from ``s``.

    ``seq`` is a sequence of action ids or labels (a string such as ``"RRL"``
    is read as one label per character).
    """
    ids = _action_ids(config, seq)
    if not ids:
        raise ValueError("'seq' must be passed a nonempty action sequence!")
    s = _check_state(config, s)
    return int(_special_bits(config, special_bit)[_simulate(config, s, ids) - 1])


def conditional_table(
    config: EnvConfig, depth: int, special_bit: int = SPECIAL_BIT
) -> np.ndarray:
    """``num_states x n`` table of `true_conditional` values, with columns
    ordered like `tdnet.qnet.build_action_tree`.
    """
    num_actions = len(config.actions)
    columns = list()
    for d in range(1, depth + 1):
        for seq in itertools.product(range(num_actions), repeat=d):
            columns.append(
                [
                    true_conditional(config, seq, s, special_bit)
                    for s in range(1, config.num_states + 1)
                ]
            )
    return np.array(columns, dtype=float).T


def extensive_fixed_point(
    q: QuestionNet,
    config: EnvConfig,
    tolerance: float = FIXED_POINT_TOLERANCE,
    max_iterations: int = FIXED_POINT_MAX_ITERATIONS,
) -> OracleTable:
    """Solve the extensive definition of a question network over hidden states.

    Iterates, from the zero table,

        y*(s) <- E_pi[(1 - c) * y*(s) + c * z(o(s'), y*(s'))]

    where ``s'`` is the successor of ``s`` under the random action, until the
    largest change falls below ``tolerance``.

    Parameters
    ----------
    q : `QuestionNet`
        Question network; its observation width and actions must match the
        environment.
    config : `EnvConfig`
        Environment description.
    tolerance : `float`, default: ``1e-12``
        Sup-norm stopping threshold.
    max_iterations : `int`, default: ``1000000``
        Iteration cap. Reaching it (or diverging) is flagged in the result
        and logged, never raised.

    Returns
    -------
    `OracleTable`
    """
    if q.observation_width != config.observation_width:
        raise ValueError(
            f"The question network reads {q.observation_width}-bit observations "
            f"but the environment emits {config.observation_width} bits!"
        )
    if tuple(q.actions) != tuple(config.actions):
        raise ValueError(
            f"The question network's actions {q.actions} do not match the "
            f"environment's actions {config.actions}!"
        )
    succ = successor_table(config)
    O = observation_table(config)
    num_actions = len(config.actions)
    # Per action, the observation part of the target never changes.
    obs_part = [O[succ[a]] @ q.obs_weights.T for a in range(num_actions)]
    C = q.condition_matrix
    Y = np.zeros((config.num_states, q.n))
    converged = False
    iterations = 0
    change = np.inf
    with np.errstate(over="ignore", invalid="ignore"):
        while iterations < max_iterations:
            Y_new = np.zeros_like(Y)
            for a in range(num_actions):
                Z = obs_part[a] + Y[succ[a]] @ q.pred_weights.T
                Y_new += ((1.0 - C[:, a]) * Y + C[:, a] * Z) / num_actions
            change = float(np.max(np.abs(Y_new - Y)))
            Y = Y_new
            iterations += 1
            if not np.isfinite(change):
                break
            if change < tolerance:
                converged = True
                break
    if not converged:
        logger.warning(
            f"The fixed-point iteration did not converge after {iterations} "
            f"iterations (last change {change:.3e})."
        )
    Y.setflags(write=False)
    return OracleTable(Y, tuple(q.labels), config, converged, iterations)


def linear_td_fixed_point(
    experience: Experience,
    q: QuestionNet,
    recipe: FeatureRecipe,
    weights: Optional[np.ndarray] = None,
) -> AnswerNet:
    """Solve the batch linear TD fixed point of a recorded stream directly.

    Returns the identity-activation weights ``W`` for which the summed TD
    update over the stream vanishes,

        sum_t c_t * (z_t - W x_t) x_t^T = 0,  z_t = Z_o o_{t+1} + Z_y W x_{t+1}.

    Weights that can never receive an update (their feature is never active
    while the node's condition holds) are kept at their initial value, the
    same as batch updating does.

    Parameters
    ----------
    experience : `Experience`
        Recorded stream.
    q : `QuestionNet`
        Question network.
    recipe : `FeatureRecipe`
        Non-recurrent feature recipe.
    weights : `numpy.ndarray`, optional
        Initial weights, default zeros.

    Returns
    -------
    `AnswerNet`
    """
    experience = _as_experience(experience)
    if recipe.recurrent:
        raise ValueError(
            "The linear TD fixed point is only defined for recipes that do not "
            "feed back predictions!"
        )
    anet = AnswerNet(q.n, recipe, "identity", weights)
    X, _ = rollout(experience, anet)
    n, m = q.n, recipe.width
    C = q.condition_matrix[:, experience.actions].T
    X0, X1 = X[:-1], X[1:]
    O1 = experience.observations[1:]
    A = np.zeros((n * m, n * m))
    b = np.zeros(n * m)
    for i in range(n):
        Xc = X0 * C[:, i][:, np.newaxis]
        rows = slice(i * m, (i + 1) * m)
        A[rows, rows] += Xc.T @ X0
        for k in np.flatnonzero(q.pred_weights[i]):
            A[rows, k * m:(k + 1) * m] -= q.pred_weights[i, k] * (Xc.T @ X1)
        b[rows] = Xc.T @ (O1 @ q.obs_weights[i])
    w0 = anet.W.ravel()
    free = ((C.T @ np.abs(X0)).ravel() > 0)
    fixed = ~free
    rhs = b[free] - A[np.ix_(free, fixed)] @ w0[fixed]
    w = w0.copy()
    w[free], *_ = np.linalg.lstsq(A[np.ix_(free, free)], rhs, rcond=None)
    anet.W = w.reshape(n, m)
    return anet
