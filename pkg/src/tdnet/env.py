# -*- coding: utf-8 -*-
"""The seven-state random walk, its random behavior policy, and experience.

States are numbered ``1..num_states`` left to right and the walk starts in
the center. Upon arriving in a state the observation consists of a special
bit that is 1 only at the two ends of the walk, followed, in the ``"full"``
observation mode, by a one-hot encoding of the state number. The task is
continuing: reaching an end state never interrupts experience.
"""

from collections.abc import Callable
from typing import Literal, NamedTuple, Optional

import numpy as np

from .qnet import SPECIAL_BIT, WALK_ACTIONS


#: Observation modes: special bit plus state bits, or the special bit only.
ObservationMode = Literal["full", "bit"]

#: Names of the registered boundary rules.
BoundaryName = Literal["stay", "reflect"]

#: Action id standing for "no previous action" at the first time step.
NULL_ACTION: int = -1

_LEFT, _RIGHT = 0, 1

boundary_rules: dict[str, Callable[[int, int, int], int]] = dict()


def boundary_rule(name: str):
    """Register a function resolving a move that would leave the walk."""

    def register(func):
        boundary_rules[name] = func
        return func

    return register


@boundary_rule("stay")
def _stay_in_place(state: int, move: int, num_states: int) -> int:
    target = state + move
    if 1 <= target <= num_states:
        return target
    return state


@boundary_rule("reflect")
def _reflect(state: int, move: int, num_states: int) -> int:
    target = state + move
    if 1 <= target <= num_states:
        return target
    return state - move


class EnvConfig(NamedTuple):
    """Static description of a random-walk environment.

    Attributes
    ----------
    .. num_states : `int`, default: ``7``
           Number of states of the walk.
    .. observation : `ObservationMode`, default: ``"full"``
           ``"full"`` for the special bit followed by the one-hot state
           bits, ``"bit"`` for the special bit alone.
    .. boundary : `BoundaryName`, default: ``"stay"``
           Rule applied when the action points off an end of the walk.
    """

    num_states: int = 7
    observation: ObservationMode = "full"
    boundary: BoundaryName = "stay"

    @property
    def center(self) -> int:
        return (self.num_states + 1) // 2

    @property
    def observation_width(self) -> int:
        return 1 + self.num_states if self.observation == "full" else 1

    @property
    def actions(self) -> tuple[str, ...]:
        return WALK_ACTIONS

    def validate(self) -> "EnvConfig":
        if self.num_states < 3 or self.num_states % 2 == 0:
            raise ValueError("'num_states' must be passed an odd integer >= 3!")
        if self.observation not in ("full", "bit"):
            raise ValueError(
                f"{self.observation!r} is not a valid observation mode! "
                "Valid modes are: 'full', 'bit'."
            )
        if self.boundary not in boundary_rules:
            raise ValueError(
                f"{self.boundary!r} is not a valid boundary rule! Valid rules are: "
                + ", ".join(repr(b) for b in boundary_rules)
                + "."
            )
        return self


def observation_table(config: EnvConfig) -> np.ndarray:
    """Observation emitted in each state, as a ``num_states x width`` array.

    Row ``s - 1`` is the observation upon arriving in state ``s``.
    """
    config.validate()
    n = config.num_states
    table = np.zeros((n, config.observation_width))
    table[0, SPECIAL_BIT] = 1.0
    table[n - 1, SPECIAL_BIT] = 1.0
    if config.observation == "full":
        table[:, 1:] = np.eye(n)
    table.setflags(write=False)
    return table


def next_state(config: EnvConfig, state: int, action: int) -> int:
    """State reached from ``state`` by taking ``action`` (deterministic)."""
    move = -1 if action == _LEFT else 1
    return boundary_rules[config.boundary](state, move, config.num_states)


class RandomWalkEnv:
    """Single-owner, mutable random-walk environment.

    Parameters
    ----------
    config : `EnvConfig`, optional
        Environment description. Default is the seven-state walk with full
        observations and the stay-in-place boundary rule.
    """

    def __init__(self, config: Optional[EnvConfig] = None) -> None:
        self._config = (config or EnvConfig()).validate()
        self._observations = observation_table(self._config)
        self._state = self._config.center

    @property
    def config(self) -> EnvConfig:
        return self._config

    @property
    def actions(self) -> tuple[str, ...]:
        return self._config.actions

    @property
    def observation_width(self) -> int:
        return self._config.observation_width

    @property
    def state(self) -> int:
        """Current hidden state (for oracle use only)."""
        return self._state

    def observation(self, state: Optional[int] = None) -> np.ndarray:
        if state is None:
            state = self._state
        return self._observations[state - 1].copy()

    def reset(self) -> np.ndarray:
        """Move to the center state and return its observation."""
        self._state = self._config.center
        return self.observation()

    def step(self, a: int) -> np.ndarray:
        """Take action ``a`` (``0`` = L, ``1`` = R) and return the new observation."""
        if a not in (_LEFT, _RIGHT):
            raise ValueError(f"{a!r} is not a valid action id! Valid ids are 0 (L), 1 (R).")
        self._state = next_state(self._config, self._state, a)
        return self.observation()


class RandomPolicy:
    """Uniform random policy over the walk's actions, with its own RNG."""

    def __init__(self, seed=None, num_actions: int = len(WALK_ACTIONS)) -> None:
        self._num_actions = num_actions
        self._rng = np.random.default_rng(seed)

    def reseed(self, seed) -> None:
        self._rng = np.random.default_rng(seed)

    def sample_actions(self, length: int) -> np.ndarray:
        return self._rng.integers(self._num_actions, size=length)


class Experience(NamedTuple):
    """What a learner is allowed to see: ``o_1, a_1, o_2, ..., a_T, o_{T+1}``.

    Attributes
    ----------
    .. observations : `numpy.ndarray`
           ``(T + 1) x width`` array, row ``t - 1`` is ``o_t``.
    .. actions : `numpy.ndarray`
           Length-``T`` integer array, entry ``t - 1`` is ``a_t``.
    .. action_labels : `tuple` of `str`
           Labels of the action ids.
    """

    observations: np.ndarray
    actions: np.ndarray
    action_labels: tuple[str, ...] = WALK_ACTIONS

    @property
    def length(self) -> int:
        """Number of actions ``T``."""
        return len(self.actions)

    @property
    def observation_width(self) -> int:
        return self.observations.shape[1]


class HiddenStates(NamedTuple):
    """Hidden state ``s_t`` for every observation of an experience stream."""

    states: np.ndarray


class Trace(NamedTuple):
    """Experience plus the hidden-state annotation used by oracles.

    Learners only accept the `Experience` part; the hidden states travel in
    a separate type so that they cannot be handed to a learner by accident.
    """

    experience: Experience
    hidden: HiddenStates
    config: EnvConfig


def generate_trace(
    env: RandomWalkEnv,
    policy: Optional[RandomPolicy],
    length: int,
    seed=None,
) -> Trace:
    """Reset ``env`` and record ``length`` steps of random-walk experience.

    Parameters
    ----------
    env : `RandomWalkEnv`
        Environment to run; it is reset first.
    policy : `RandomPolicy`, optional
        Behavior policy. If `None`, a fresh `RandomPolicy` seeded with
        ``seed`` is used.
    length : `int`
        Number of actions to take.
    seed : optional
        Seed of the policy's RNG. If given together with ``policy``, the
        policy is reseeded, making the trace a deterministic function of
        ``seed``.

    Returns
    -------
    `Trace`

    Raises
    ------
    ValueError
        If ``length`` is negative.
    """
    if length < 0:
        raise ValueError("'length' must be passed a nonnegative integer!")
    if policy is None:
        policy = RandomPolicy(seed, len(env.actions))
    elif seed is not None:
        policy.reseed(seed)
    actions = policy.sample_actions(length).astype(np.int64)
    states = np.empty(length + 1, dtype=np.int64)
    env.reset()
    states[0] = env.state
    for t, a in enumerate(actions):
        env.step(int(a))
        states[t + 1] = env.state
    observations = observation_table(env.config)[states - 1]
    return Trace(
        Experience(observations, actions, env.actions),
        HiddenStates(states),
        env.config,
    )


def truncate_trace(trace: Trace, length: int) -> Trace:
    """Return the first ``length`` steps of ``trace``."""
    if not 0 <= length <= trace.experience.length:
        raise ValueError(
            f"'length' must be in [0, {trace.experience.length}], got {length!r}!"
        )
    exp = trace.experience
    return Trace(
        Experience(exp.observations[: length + 1], exp.actions[:length], exp.action_labels),
        HiddenStates(trace.hidden.states[: length + 1]),
        trace.config,
    )
