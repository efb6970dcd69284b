# -*- coding: utf-8 -*-
"""Answer networks: feature construction, predictions and their gradients.

Predictions are formed linearly from a feature vector,
``y_t = sigma(W_t x_t)``, where ``x_t = x(a_{t-1}, o_t, y_{t-1})`` is built
according to a `FeatureRecipe` and ``sigma`` is either the identity or the
logistic function.
"""

from collections.abc import Callable, Sequence
from typing import Literal, NamedTuple, Optional, Union

import numpy as np
from scipy.special import expit

from .env import NULL_ACTION


class Bias(NamedTuple):
    """Constant feature."""

    value: float = 1.0

    @property
    def width(self) -> int:
        return 1


class StateOneHot(NamedTuple):
    """One-hot state bits copied from ``o[offset:offset + width]``."""

    width: int = 7
    offset: int = 1


class ObservationBits(NamedTuple):
    """Raw observation bits ``o[offset:offset + width]``."""

    width: int
    offset: int = 0


class ActionOneHot(NamedTuple):
    """One-hot encoding of the previous action (all zeros for the null action)."""

    num_actions: int = 2

    @property
    def width(self) -> int:
        return self.num_actions


class ActionObsPairOneHot(NamedTuple):
    """One-hot encoding of the pair (previous action, observation bit ``bit``).

    The null action of the first time step is encoded as all zeros.
    """

    num_actions: int = 2
    bit: int = 0

    @property
    def width(self) -> int:
        return 2 * self.num_actions


class PrevPredictions(NamedTuple):
    """The ``n`` predictions of the previous time step."""

    n: int

    @property
    def width(self) -> int:
        return self.n


FeaturePart = Union[
    Bias, StateOneHot, ObservationBits, ActionOneHot, ActionObsPairOneHot, PrevPredictions
]


class FeatureRecipe(NamedTuple):
    """Ordered list of the parts concatenated into a feature vector."""

    parts: tuple[FeaturePart, ...]

    @property
    def width(self) -> int:
        """Feature vector length ``m``."""
        return sum(p.width for p in self.parts)

    @property
    def recurrent(self) -> bool:
        """``True`` if features depend on the previous predictions."""
        return any(isinstance(p, PrevPredictions) for p in self.parts)

    @property
    def uses_action(self) -> bool:
        return any(isinstance(p, (ActionOneHot, ActionObsPairOneHot)) for p in self.parts)

    def observation_width_needed(self) -> int:
        """Smallest observation width this recipe can read from."""
        needed = 0
        for p in self.parts:
            if isinstance(p, (StateOneHot, ObservationBits)):
                needed = max(needed, p.offset + p.width)
            elif isinstance(p, ActionObsPairOneHot):
                needed = max(needed, p.bit + 1)
        return needed


def state_recipe(num_states: int = 7) -> FeatureRecipe:
    """One binary feature per state, read from full-state observations."""
    return FeatureRecipe((StateOneHot(num_states, 1),))


def history_recipe(n: int, num_actions: int = 2) -> FeatureRecipe:
    """Constant 1, (action, bit) pair one-hot, and the previous ``n`` predictions."""
    return FeatureRecipe((Bias(), ActionObsPairOneHot(num_actions, 0), PrevPredictions(n)))


def build_features(
    recipe: FeatureRecipe,
    a_prev: Optional[int],
    o: np.ndarray,
    y_prev: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Build the feature vector ``x_t = x(a_{t-1}, o_t, y_{t-1})``.

    Parameters
    ----------
    recipe : `FeatureRecipe`
        Parts to concatenate, in order.
    a_prev : `int`, optional
        Previous action id. `None` or `NULL_ACTION` at the first time step.
    o : `numpy.ndarray`
        Current observation vector.
    y_prev : `numpy.ndarray`, optional
        Previous predictions. Required only if the recipe contains a
        `PrevPredictions` part; `None` stands for the zero vector.

    Returns
    -------
    `numpy.ndarray`
        Real-valued feature vector of length ``recipe.width``.

    Raises
    ------
    ValueError
        If ``y_prev`` does not match the width of the `PrevPredictions`
        part, or if the observation is too short for the recipe.
    """
    if a_prev is None:
        a_prev = NULL_ACTION
    if len(o) < recipe.observation_width_needed():
        raise ValueError(
            f"The observation has {len(o)} bits but the feature recipe reads "
            f"{recipe.observation_width_needed()}!"
        )
    x = np.zeros(recipe.width)
    pos = 0
    for part in recipe.parts:
        width = part.width
        if isinstance(part, Bias):
            x[pos] = part.value
        elif isinstance(part, (StateOneHot, ObservationBits)):
            x[pos:pos + width] = o[part.offset:part.offset + width]
        elif isinstance(part, ActionOneHot):
            if a_prev != NULL_ACTION:
                x[pos + a_prev] = 1.0
        elif isinstance(part, ActionObsPairOneHot):
            if a_prev != NULL_ACTION:
                x[pos + 2 * a_prev + int(o[part.bit] > 0.5)] = 1.0
        elif isinstance(part, PrevPredictions):
            if y_prev is not None:
                if len(y_prev) != width:
                    raise ValueError(
                        f"'y_prev' must have length {width}, got {len(y_prev)}!"
                    )
                x[pos:pos + width] = y_prev
        else:
            raise ValueError(f"{part!r} is not a valid feature part!")
        pos += width
    return x


ActivationName = Literal["identity", "logistic"]


class Activation(NamedTuple):
    """Output function and its slope written in terms of the output."""

    func: Callable[[np.ndarray], np.ndarray]
    slope: Callable[[np.ndarray], np.ndarray]


def _identity(s: np.ndarray) -> np.ndarray:
    return s


def _logistic_slope(y: np.ndarray) -> np.ndarray:
    return y * (1.0 - y)


activations: dict[str, Activation] = {
    "identity": Activation(_identity, np.ones_like),
    "logistic": Activation(expit, _logistic_slope),
}


class AnswerNet:
    """Linear answer network ``y = sigma(W x)``.

    An `AnswerNet` is a mutable value owned by exactly one training run.

    Parameters
    ----------
    n : `int`
        Number of prediction nodes.
    recipe : `FeatureRecipe`
        Feature construction recipe; ``m = recipe.width``.
    activation : {``"identity"``, ``"logistic"``}, default: ``"identity"``
        Output function ``sigma``.
    weights : `numpy.ndarray`, optional
        Initial ``n x m`` weight matrix. Default is all zeros.

    Raises
    ------
    ValueError
        If the activation is unknown or the weights have the wrong shape.
    """

    def __init__(
        self,
        n: int,
        recipe: FeatureRecipe,
        activation: ActivationName = "identity",
        weights: Optional[np.ndarray] = None,
    ) -> None:
        if activation not in activations:
            raise ValueError(
                f"{activation!r} is not a valid activation! Valid activations are: "
                + ", ".join(repr(a) for a in activations)
                + "."
            )
        for part in recipe.parts:
            if isinstance(part, PrevPredictions) and part.n != n:
                raise ValueError(
                    f"The recipe feeds back {part.n} predictions but the network "
                    f"has {n} nodes!"
                )
        self._recipe = recipe
        self._activation = activation
        if weights is None:
            self.W = np.zeros((n, recipe.width))
        else:
            weights = np.array(weights, dtype=float)
            if weights.shape != (n, recipe.width):
                raise ValueError(
                    f"'weights' must have shape ({n}, {recipe.width}), "
                    f"got {weights.shape}!"
                )
            self.W = weights

    @property
    def n(self) -> int:
        return self.W.shape[0]

    @property
    def m(self) -> int:
        return self.W.shape[1]

    @property
    def recipe(self) -> FeatureRecipe:
        return self._recipe

    @property
    def activation(self) -> str:
        return self._activation

    def output(self, s: np.ndarray) -> np.ndarray:
        """Apply ``sigma`` to net inputs ``s``."""
        return activations[self._activation].func(s)

    def slope(self, y: np.ndarray) -> np.ndarray:
        """``sigma'`` expressed from outputs ``y``."""
        return activations[self._activation].slope(y)

    def copy(self) -> "AnswerNet":
        return AnswerNet(self.n, self._recipe, self._activation, self.W.copy())

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(n={self.n}, m={self.m}, "
            f"activation={self._activation!r})"
        )


def forward(net: AnswerNet, x: np.ndarray) -> np.ndarray:
    """Compute the predictions ``y = sigma(W x)``.

    Raises
    ------
    ValueError
        If ``x`` does not have length ``m``.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (net.m,):
        raise ValueError(f"'x' must have shape ({net.m},), got {x.shape}!")
    return net.output(net.W @ x)


def prediction_gradient(net: AnswerNet, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Gradient of every prediction with respect to its own weight row.

    Row ``i`` of the returned ``n x m`` array holds ``dy^i / dw^{ij}`` for
    all ``j``; ``y^i`` does not depend on the other rows of ``W``.

    Raises
    ------
    ValueError
        If ``x`` or ``y`` do not match the network dimensions.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (net.m,):
        raise ValueError(f"'x' must have shape ({net.m},), got {x.shape}!")
    if y.shape != (net.n,):
        raise ValueError(f"'y' must have shape ({net.n},), got {y.shape}!")
    return np.outer(net.slope(y), x)


def predict_states(net: AnswerNet, observations: np.ndarray) -> np.ndarray:
    """Prediction table of a non-recurrent answer network.

    Parameters
    ----------
    net : `AnswerNet`
        Answer network whose recipe does not feed back predictions.
    observations : `numpy.ndarray`
        ``num_states x width`` array of the observation emitted in each
        state (see `tdnet.env.observation_table`).

    Returns
    -------
    `numpy.ndarray`
        ``num_states x n`` array of predictions, built with the null previous
        action.

    Raises
    ------
    ValueError
        If the recipe is recurrent, since predictions then depend on history
        and not on the state alone.
    """
    if net.recipe.recurrent:
        raise ValueError(
            "A per-state prediction table is undefined for recipes that feed "
            "back previous predictions!"
        )
    X = np.array([build_features(net.recipe, None, o) for o in observations])
    return net.output(X @ net.W.T)


def recipe_from_names(
    names: Sequence[str], n: int, num_states: int = 7, num_actions: int = 2
) -> FeatureRecipe:
    """Build a recipe from part names (``bias``, ``state``, ``obs``,
    ``action``, ``action_obs``, ``prev``).

    ``obs`` reads the whole observation; its width is fixed from
    ``num_states`` for full observations, so use ``obs:<width>`` for another
    width.
    """
    parts = list()
    for name in names:
        key, _, arg = str(name).partition(":")
        if key == "bias":
            parts.append(Bias())
        elif key == "state":
            parts.append(StateOneHot(num_states, 1))
        elif key == "obs":
            parts.append(ObservationBits(int(arg) if arg else num_states + 1))
        elif key == "action":
            parts.append(ActionOneHot(num_actions))
        elif key == "action_obs":
            parts.append(ActionObsPairOneHot(num_actions, 0))
        elif key == "prev":
            parts.append(PrevPredictions(n))
        else:
            raise ValueError(
                f"{name!r} is not a valid feature part! Valid parts are: 'bias', "
                "'state', 'obs', 'action', 'action_obs', 'prev'."
            )
    if not parts:
        raise ValueError("A feature recipe needs at least one part!")
    return FeatureRecipe(tuple(parts))
