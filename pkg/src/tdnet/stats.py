# -*- coding: utf-8 -*-
"""Evaluation metrics comparing learned predictions with the oracle."""

from collections.abc import Mapping, Sequence
from typing import Any, Literal, Optional, Union

import numpy as np

from .env import Experience
from .oracle import OracleTable
from .qnet import SPECIAL_BIT, ObservationBit, QuestionNet


WeightingName = Literal["uniform", "visitation"]

TableLike = Union[OracleTable, np.ndarray]


def _values(table: TableLike) -> np.ndarray:
    return table.values if isinstance(table, OracleTable) else np.asarray(table, dtype=float)


def uniform_weights(num_states: int) -> np.ndarray:
    return np.full(num_states, 1.0 / num_states)


def visitation_weights(states: np.ndarray, num_states: int) -> np.ndarray:
    """Empirical state-visitation frequencies of a hidden-state sequence."""
    states = np.asarray(states)
    if states.size == 0:
        return uniform_weights(num_states)
    counts = np.bincount(states - 1, minlength=num_states).astype(float)
    return counts / counts.sum()


def state_weights(
    weighting: WeightingName, num_states: int, states: Optional[np.ndarray] = None
) -> np.ndarray:
    if weighting == "uniform":
        return uniform_weights(num_states)
    elif weighting == "visitation":
        if states is None:
            raise ValueError("Visitation weighting needs the hidden states of a trace!")
        return visitation_weights(states, num_states)
    raise ValueError(
        f"{weighting!r} is not a valid weighting! Valid weightings are: "
        "'uniform', 'visitation'."
    )


def rmse(
    predictions: TableLike,
    oracle: TableLike,
    weights: Optional[np.ndarray] = None,
    nodes: Optional[Sequence[int]] = None,
) -> float:
    """Root of the state-weighted mean squared prediction error.

    Parameters
    ----------
    predictions : `numpy.ndarray`
        ``num_states x n`` learned predictions.
    oracle : `OracleTable` or `numpy.ndarray`
        True predictions of the same shape.
    weights : `numpy.ndarray`, optional
        State weights summing to 1. Default is uniform.
    nodes : sequence of `int`, optional
        Columns to average over. Default is all of them.

    Returns
    -------
    `float`
    """
    P = _values(predictions)
    T = _values(oracle)
    if P.shape != T.shape:
        raise ValueError(
            f"'predictions' has shape {P.shape} but 'oracle' has shape {T.shape}!"
        )
    if nodes is not None:
        P, T = P[:, list(nodes)], T[:, list(nodes)]
    if weights is None:
        weights = uniform_weights(P.shape[0])
    return float(np.sqrt(weights @ ((P - T) ** 2).mean(axis=1)))


def rmse_by_group(
    predictions: TableLike,
    oracle: TableLike,
    groups: Mapping[Any, Sequence[int]],
    weights: Optional[np.ndarray] = None,
) -> dict:
    """`rmse` for every named group of node columns."""
    return {
        name: rmse(predictions, oracle, weights, nodes) for name, nodes in groups.items()
    }


def incorrect_proportion(
    predictions: TableLike, oracle: TableLike, learned: Optional[np.ndarray] = None
) -> float:
    """Percentage of (state, node) cells predicting the wrong binary value.

    A prediction is read as 1 when it is at least 0.5. If ``learned`` (a
    boolean array of the same shape) is given, cells that never received an
    update also count as incorrect.
    """
    P = _values(predictions)
    T = _values(oracle)
    if P.shape != T.shape:
        raise ValueError(
            f"'predictions' has shape {P.shape} but 'oracle' has shape {T.shape}!"
        )
    wrong = (P >= 0.5) != (T >= 0.5)
    if learned is not None:
        wrong |= ~np.asarray(learned, dtype=bool)
    return 100.0 * float(wrong.mean())


def binned_rmse(squared_errors: np.ndarray, bin_size: int = 1000) -> np.ndarray:
    """Root mean of per-step squared errors over consecutive bins.

    The last bin may hold fewer than ``bin_size`` steps.
    """
    if bin_size < 1:
        raise ValueError("'bin_size' must be passed a positive integer!")
    squared_errors = np.asarray(squared_errors, dtype=float)
    starts = np.arange(0, len(squared_errors), bin_size)
    if len(starts) == 0:
        return np.zeros(0)
    sums = np.add.reduceat(squared_errors, starts)
    sizes = np.diff(np.append(starts, len(squared_errors)))
    return np.sqrt(sums / sizes)


def one_step_nodes(q: QuestionNet, special_bit: int = SPECIAL_BIT) -> np.ndarray:
    """For every action, the node predicting the special bit after that action.

    Raises
    ------
    ValueError
        If some action has no such node.
    """
    found = dict()
    for i, node in enumerate(q.nodes):
        if (
            not node.condition.always
            and len(node.terms) == 1
            and node.terms[0].source == ObservationBit(special_bit)
            and node.terms[0].weight == 1.0
        ):
            found.setdefault(node.condition.action, i)
    missing = [q.actions[a] for a in range(len(q.actions)) if a not in found]
    if missing:
        raise ValueError(
            f"The question network has no one-step node for action(s) {missing}!"
        )
    return np.array([found[a] for a in range(len(q.actions))])


def empirical_errors(
    experience: Experience,
    predictions: np.ndarray,
    q: QuestionNet,
    special_bit: int = SPECIAL_BIT,
    one_step_only: bool = False,
) -> np.ndarray:
    """Error of the one-step prediction for the action actually taken.

    ``predictions`` holds ``y_t`` for ``t = 1..T`` (as in a prediction log);
    entry ``t - 1`` of the result is ``y_t[node(a_t)] - o_{t+1}[special]``.
    With ``one_step_only``, ``predictions`` only holds the columns of
    `one_step_nodes`, one per action, which is all a long run needs to keep.
    """
    nodes = one_step_nodes(q, special_bit)
    predictions = np.asarray(predictions)
    expected = len(nodes) if one_step_only else q.n
    if predictions.ndim != 2 or predictions.shape != (experience.length, expected):
        raise ValueError(
            f"'predictions' must have shape {(experience.length, expected)}, "
            f"got {predictions.shape}!"
        )
    columns = experience.actions if one_step_only else nodes[experience.actions]
    chosen = predictions[np.arange(experience.length), columns]
    return chosen - experience.observations[1:, special_bit]


def empirical_rmse(
    experience: Experience,
    predictions: np.ndarray,
    q: QuestionNet,
    bin_size: int = 1000,
    special_bit: int = SPECIAL_BIT,
    one_step_only: bool = False,
) -> np.ndarray:
    """`empirical_errors` turned into a binned RMSE curve."""
    errors = empirical_errors(experience, predictions, q, special_bit, one_step_only)
    return binned_rmse(errors ** 2, bin_size)


def standard_error(samples: np.ndarray, axis: int = 0) -> np.ndarray:
    """Standard error of the mean; zero when fewer than two samples."""
    samples = np.asarray(samples, dtype=float)
    k = samples.shape[axis]
    if k < 2:
        return np.zeros_like(samples.mean(axis=axis))
    return samples.std(axis=axis, ddof=1) / np.sqrt(k)
