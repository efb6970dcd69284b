# -*- coding: utf-8 -*-
"""Question networks: the TD targets and conditions of every prediction node.

A question network states *what* each node of a TD network predicts. Node
``i`` is given a target ``z^i``, an affine combination of next-step
observation bits and next-step predictions, and a condition ``c^i`` that
gates how responsible the node is for matching its target at a given step.
"""

import itertools
import logging
from collections.abc import Iterable, Sequence
from numbers import Integral
from typing import NamedTuple, Optional, Union

import numpy as np


logger = logging.getLogger(__name__)

#: Action labels of the seven-state random walk, in declared order.
WALK_ACTIONS: tuple[str, ...] = ("L", "R")

#: Index of the special observation bit (1 only at the two ends of the walk).
SPECIAL_BIT: int = 0

#: Observation width of the walk when the state number is visible.
FULL_OBSERVATION_WIDTH: int = 8

_PROBABILITY_ATOL = 1e-9


class QuestionNetError(ValueError):
    """Raised when a question network violates one of its invariants."""


class QuestionNetParseError(QuestionNetError):
    """Raised when a question-network document cannot be loaded."""


class ObservationBit(NamedTuple):
    """Target source reading bit ``index`` of the next observation."""

    #: Index of the observation bit.
    index: int


class NextPrediction(NamedTuple):
    """Target source reading the next-step prediction of node ``node``."""

    #: Index of the node whose prediction is read (self-reference allowed).
    node: int


TermSource = Union[ObservationBit, NextPrediction]


class TargetTerm(NamedTuple):
    """One weighted term of a node's TD target."""

    source: TermSource
    weight: float = 1.0


class Condition(NamedTuple):
    """Condition of a node.

    ``action=None`` means the node is always held responsible for its
    target; otherwise it is responsible only on steps where the action with
    id ``action`` is taken.
    """

    action: Optional[int] = None

    @property
    def always(self) -> bool:
        return self.action is None


#: Unconditional node.
ALWAYS = Condition()


def action_is(action: int) -> Condition:
    return Condition(action=int(action))


class NodeSpec(NamedTuple):
    """Target and condition of a single prediction node."""

    label: str
    terms: tuple[TargetTerm, ...]
    condition: Condition = ALWAYS

    def has_probability_semantics(self) -> bool:
        """``True`` if the target is a convex combination of its sources."""
        weights = [t.weight for t in self.terms]
        return all(w >= 0 for w in weights) and abs(sum(weights) - 1.0) <= _PROBABILITY_ATOL


class QuestionNet:
    """Immutable set of prediction nodes with their targets and conditions.

    Parameters
    ----------
    nodes : sequence of `NodeSpec`
        Ordered prediction nodes. Node labels must be unique.
    observation_width : `int`
        Number of bits of the observation vectors the targets read from.
    actions : sequence of `str`, default: ``("L", "R")``
        Labels of the environment's action set; `Condition` action ids index
        into this sequence.

    Raises
    ------
    QuestionNetError
        If a label is repeated, if a term references an observation bit or a
        node out of range, or if a condition references an unknown action.
    """

    def __init__(
        self,
        nodes: Iterable[NodeSpec],
        observation_width: int,
        actions: Sequence[str] = WALK_ACTIONS,
    ) -> None:
        self._nodes = tuple(
            NodeSpec(str(nd.label), tuple(nd.terms), nd.condition) for nd in nodes
        )
        self._observation_width = int(observation_width)
        self._actions = tuple(str(a) for a in actions)
        self._validate()
        n = len(self._nodes)
        obs_weights = np.zeros((n, self._observation_width))
        pred_weights = np.zeros((n, n))
        conditions = np.zeros((n, len(self._actions)))
        for i, node in enumerate(self._nodes):
            for term in node.terms:
                if isinstance(term.source, ObservationBit):
                    obs_weights[i, term.source.index] += term.weight
                else:
                    pred_weights[i, term.source.node] += term.weight
            if node.condition.always:
                conditions[i, :] = 1.0
            else:
                conditions[i, node.condition.action] = 1.0
        for arr in (obs_weights, pred_weights, conditions):
            arr.setflags(write=False)
        self._obs_weights = obs_weights
        self._pred_weights = pred_weights
        self._conditions = conditions
        self._index = {node.label: i for i, node in enumerate(self._nodes)}
        for i, node in enumerate(self._nodes):
            if not node.has_probability_semantics():
                logger.warning(
                    f"Node {i} ({node.label!r}) does not have probability "
                    "semantics: its target may leave [0, 1]."
                )

    def _validate(self) -> None:
        if self._observation_width < 1:
            raise QuestionNetError("'observation_width' must be a positive integer!")
        if not self._actions:
            raise QuestionNetError("The action set cannot be empty!")
        if len(set(self._actions)) != len(self._actions):
            raise QuestionNetError("Action labels must be unique!")
        n = len(self._nodes)
        if n == 0:
            raise QuestionNetError("A question network needs at least one node!")
        seen = set()
        for i, node in enumerate(self._nodes):
            if node.label in seen:
                raise QuestionNetError(f"node {i}: duplicate label {node.label!r}")
            seen.add(node.label)
            if not node.terms:
                raise QuestionNetError(f"node {i}: target has no terms")
            for term in node.terms:
                src = term.source
                if isinstance(src, ObservationBit):
                    if not 0 <= src.index < self._observation_width:
                        raise QuestionNetError(
                            f"node {i}: observation bit index out of range "
                            f"({src.index} not in [0, {self._observation_width}))"
                        )
                elif isinstance(src, NextPrediction):
                    if not 0 <= src.node < n:
                        raise QuestionNetError(
                            f"node {i}: prediction index out of range "
                            f"({src.node} not in [0, {n}))"
                        )
                else:
                    raise QuestionNetError(f"node {i}: unknown term source {src!r}")
            action = node.condition.action
            if action is not None and not 0 <= action < len(self._actions):
                raise QuestionNetError(f"node {i}: unknown action id {action!r}")

    @property
    def nodes(self) -> tuple[NodeSpec, ...]:
        return self._nodes

    @property
    def n(self) -> int:
        """Number of prediction nodes."""
        return len(self._nodes)

    @property
    def observation_width(self) -> int:
        return self._observation_width

    @property
    def actions(self) -> tuple[str, ...]:
        return self._actions

    @property
    def labels(self) -> list[str]:
        return [node.label for node in self._nodes]

    @property
    def obs_weights(self) -> np.ndarray:
        """Read-only ``n x observation_width`` matrix of observation-term weights."""
        return self._obs_weights

    @property
    def pred_weights(self) -> np.ndarray:
        """Read-only ``n x n`` matrix of next-prediction-term weights."""
        return self._pred_weights

    @property
    def condition_matrix(self) -> np.ndarray:
        """Read-only ``n x |actions|`` matrix, entry ``(i, a)`` is ``c^i`` under ``a``."""
        return self._conditions

    def node_index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValueError(f"{label!r} is not a node label of this network!")

    def action_id(self, action: Union[int, str]) -> int:
        """Return the id of an action given by id or by label."""
        if isinstance(action, str):
            try:
                return self._actions.index(action)
            except ValueError:
                raise ValueError(
                    f"{action!r} is not a valid action! Valid actions are: "
                    + ", ".join(repr(a) for a in self._actions)
                    + "."
                )
        if isinstance(action, Integral) and 0 <= action < len(self._actions):
            return int(action)
        raise ValueError(f"{action!r} is not a valid action id!")

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuestionNet):
            return NotImplemented
        return (
            self._nodes == other._nodes
            and self._observation_width == other._observation_width
            and self._actions == other._actions
        )

    def __hash__(self) -> int:
        return hash((self._nodes, self._observation_width, self._actions))

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(n={self.n}, "
            f"observation_width={self._observation_width}, actions={self._actions})"
        )


def _check_positive(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, Integral) or value < 1:
        raise ValueError(f"{name!r} must be passed a positive integer!")
    return int(value)


def build_chain(
    depth: int,
    observation_width: int = FULL_OBSERVATION_WIDTH,
    special_bit: int = SPECIAL_BIT,
    actions: Sequence[str] = WALK_ACTIONS,
) -> QuestionNet:
    """Build an unconditional chain of n-step predictions.

    Node 1 predicts the special bit one step ahead, node ``k`` predicts node
    ``k - 1`` one step ahead, so node ``k`` predicts the special bit exactly
    ``k`` steps ahead.

    Parameters
    ----------
    depth : `int`
        Length of the chain (number of nodes).
    observation_width : `int`, default: ``8``
        Width of the observation vectors.
    special_bit : `int`, default: ``0``
        Index of the predicted observation bit.
    actions : sequence of `str`, default: ``("L", "R")``
        Action set of the environment.

    Returns
    -------
    `QuestionNet`

    Raises
    ------
    ValueError
        If ``depth`` is not a positive integer.
    """
    depth = _check_positive(depth, "depth")
    nodes = [NodeSpec("y1", (TargetTerm(ObservationBit(special_bit), 1.0),))]
    for k in range(1, depth):
        nodes.append(NodeSpec(f"y{k + 1}", (TargetTerm(NextPrediction(k - 1), 1.0),)))
    return QuestionNet(nodes, observation_width, actions)


def _sequence_label(labels: Sequence[str]) -> str:
    if all(len(lab) == 1 for lab in labels):
        return "".join(labels)
    return "-".join(labels)


def build_action_tree(
    actions: Sequence[str],
    depth: int,
    observation_width: int = FULL_OBSERVATION_WIDTH,
    special_bit: int = SPECIAL_BIT,
) -> QuestionNet:
    """Build a fully action-conditional question network.

    One node is created per nonempty action sequence of length at most
    ``depth``, breadth-first by length and in the declared action order
    within a length. The node for ``(a1, ..., ak)`` is conditioned on the
    immediate action ``a1`` and targets the node for ``(a2, ..., ak)``, or
    the special bit when ``k = 1``.

    Parameters
    ----------
    actions : sequence of `str`
        Action labels, in declared order.
    depth : `int`
        Maximum action sequence length.
    observation_width : `int`, default: ``8``
        Width of the observation vectors.
    special_bit : `int`, default: ``0``
        Index of the predicted observation bit.

    Returns
    -------
    `QuestionNet`
        Network with ``sum(len(actions) ** d for d in 1..depth)`` nodes.

    Raises
    ------
    ValueError
        If ``actions`` is empty or ``depth`` is not a positive integer.
    """
    actions = tuple(str(a) for a in actions)
    if not actions:
        raise ValueError("'actions' cannot be passed an empty action set!")
    depth = _check_positive(depth, "depth")
    index: dict[tuple[int, ...], int] = dict()
    nodes = list()
    for d in range(1, depth + 1):
        for seq in itertools.product(range(len(actions)), repeat=d):
            if d == 1:
                source = ObservationBit(special_bit)
            else:
                source = NextPrediction(index[seq[1:]])
            index[seq] = len(nodes)
            nodes.append(
                NodeSpec(
                    _sequence_label([actions[a] for a in seq]),
                    (TargetTerm(source, 1.0),),
                    action_is(seq[0]),
                )
            )
    return QuestionNet(nodes, observation_width, actions)


def compute_targets(
    q: QuestionNet, o_next: np.ndarray, y_tilde_next: np.ndarray
) -> np.ndarray:
    """Evaluate the TD targets ``z_t = z(o_{t+1}, y~_{t+1})`` of every node.

    Raises
    ------
    ValueError
        If the vectors do not have the widths declared by ``q``.
    """
    o_next = np.asarray(o_next, dtype=float)
    y_tilde_next = np.asarray(y_tilde_next, dtype=float)
    if o_next.shape != (q.observation_width,):
        raise ValueError(
            f"'o_next' must have shape ({q.observation_width},), "
            f"got {o_next.shape}!"
        )
    if y_tilde_next.shape != (q.n,):
        raise ValueError(
            f"'y_tilde_next' must have shape ({q.n},), got {y_tilde_next.shape}!"
        )
    return q.obs_weights @ o_next + q.pred_weights @ y_tilde_next


def compute_conditions(q: QuestionNet, a: Union[int, str]) -> np.ndarray:
    """Return the condition vector ``c_t`` for action ``a`` (id or label).

    Raises
    ------
    ValueError
        If ``a`` is not in the network's action set.
    """
    return q.condition_matrix[:, q.action_id(a)].copy()


def node_depths(q: QuestionNet) -> list[Optional[int]]:
    """Number of steps each node looks ahead.

    A node reading only observation bits has depth 1; a node reading other
    predictions has depth one more than the deepest of them. Nodes on a
    reference cycle (e.g. discounted, self-referential nodes) have no finite
    depth and get `None`.
    """
    depths: list[Optional[int]] = [None] * q.n
    state = [0] * q.n  # 0 unvisited, 1 in progress, 2 done

    def visit(i: int) -> Optional[int]:
        if state[i] == 1:
            return None
        if state[i] == 2:
            return depths[i]
        state[i] = 1
        depth = 1
        for term in q.nodes[i].terms:
            if isinstance(term.source, NextPrediction):
                sub = visit(term.source.node)
                if sub is None:
                    depth = None
                    break
                depth = max(depth, sub + 1)
        state[i] = 2
        depths[i] = depth
        return depth

    for i in range(q.n):
        visit(i)
    # Nodes that reference a cyclic node inherit the undefined depth.
    for _ in range(q.n):
        for i, node in enumerate(q.nodes):
            if depths[i] is not None and any(
                isinstance(t.source, NextPrediction) and depths[t.source.node] is None
                for t in node.terms
            ):
                depths[i] = None
    return depths
