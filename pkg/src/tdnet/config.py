# -*- coding: utf-8 -*-
"""Experiment configuration: defaults, YAML loading and validation."""

import hashlib
import os
from collections.abc import Mapping
from typing import Any, Literal, NamedTuple, Optional

import yaml

from .anet import activations, recipe_from_names
from .env import EnvConfig, boundary_rules
from .io import load_qnet


ExperimentName = Literal["exp1", "exp2", "exp3", "custom"]


class ConfigError(ValueError):
    """Raised when an experiment configuration is invalid."""


class ExperimentConfig(NamedTuple):
    """Parameters of an experiment run.

    Attributes
    ----------
    .. experiment : `ExperimentName`
           Which experiment to run.
    .. qnet : `dict`
           Question-network source: ``{"kind": "chain" | "tree", "depth": d}``
           (``d`` may be a list for experiment 3) or ``{"file": path}``.
    .. features : `list` of `str`
           Feature recipe part names (see `tdnet.anet.recipe_from_names`).
    .. activation : `str`
           ``"identity"`` or ``"logistic"``.
    .. alphas : `list` of `float`
           Step sizes of online learning, one run set per value.
    .. mode : `str`
           ``"online"`` or ``"batch"``.
    .. lengths : `list` of `int`
           Lengths of the training sequences (batch tables).
    .. runs : `int`
           Number of independent runs per cell.
    .. seed : `int`
           Root seed; every run's seed is derived from it.
    .. out_dir : `str`
           Output directory.
    .. observation : `str`
           ``"full"`` or ``"bit"``.
    .. boundary : `str`
           Boundary rule of the walk.
    .. weighting : `str`
           State weighting of the reported RMSE.
    .. batch_alpha : `float`
           Step size of batch updating.
    .. tolerance : `float`
           Convergence threshold of batch updating.
    .. max_sweeps : `int`
           Sweep cap of batch updating.
    .. horizons : `list` of `int`
           Prediction lengths reported in experiment 1.
    .. time_steps : `list` of `int`
           Snapshot times of online tables (experiment 2).
    .. steps : `int`
           Length of every online stream (experiments 2 and 3).
    .. bin_size : `int`
           Width of learning-curve bins, in time steps.
    .. ncores : `int`, optional
           Worker processes; `None` runs everything in-process.
    .. learners : `list` of `str`
           Learners to compare, among ``"td"`` and ``"mc"``.
    .. save_traces : `bool`
           Write every generated trace to ``<out_dir>/traces`` and train on
           the copy read back from disk.
    """

    experiment: ExperimentName = "custom"
    qnet: dict = {"kind": "chain", "depth": 1}
    features: list = ["state"]
    activation: str = "identity"
    alphas: list = [0.1]
    mode: str = "online"
    lengths: list = [200]
    runs: int = 10
    seed: int = 0
    out_dir: str = "results"
    observation: str = "full"
    boundary: str = "stay"
    weighting: str = "uniform"
    batch_alpha: float = 0.01
    tolerance: float = 1e-9
    max_sweeps: int = 100_000
    horizons: list = [1]
    time_steps: list = [100]
    steps: int = 1000
    bin_size: int = 1000
    ncores: Optional[int] = None
    learners: list = ["td"]
    save_traces: bool = True


#: Per-experiment defaults, applied over the `ExperimentConfig` defaults.
DEFAULTS: dict[str, dict[str, Any]] = {
    "exp1": {
        "qnet": {"kind": "chain", "depth": 25},
        "features": ["state"],
        "activation": "identity",
        "alphas": [0.1, 0.05, 0.01],
        "mode": "batch",
        "lengths": [50, 100, 150, 200],
        "runs": 100,
        "tolerance": 1e-12,
        "horizons": [1, 2, 5, 10, 25],
        "learners": ["td", "mc"],
    },
    "exp2": {
        "qnet": {"kind": "tree", "depth": 4},
        "features": ["state"],
        "activation": "identity",
        "alphas": [1.0],
        "mode": "online",
        "lengths": [50, 100, 150, 200],
        "runs": 100,
        "time_steps": [100, 200, 300, 400, 500],
        "steps": 500,
        "learners": ["td", "mc"],
    },
    "exp3": {
        "qnet": {"kind": "tree", "depth": [2, 3, 4]},
        "features": ["bias", "action_obs", "prev"],
        "activation": "logistic",
        "alphas": [1.0, 0.5, 0.25, 0.1, 0.05],
        "mode": "online",
        "runs": 50,
        "observation": "bit",
        "steps": 250_000,
        "bin_size": 1000,
        "learners": ["td"],
        "save_traces": False,
    },
    "custom": dict(),
}


def make_config(experiment: str = "custom", **overrides) -> ExperimentConfig:
    """Build a configuration from an experiment's defaults and overrides."""
    if experiment not in DEFAULTS:
        raise ConfigError(
            f"{experiment!r} is not a valid experiment! Valid experiments are: "
            + ", ".join(repr(e) for e in DEFAULTS)
            + "."
        )
    unknown = set(overrides) - set(ExperimentConfig._fields)
    if unknown:
        raise ConfigError(f"Unknown configuration key(s): {sorted(unknown)}!")
    values = dict(DEFAULTS[experiment])
    values.update(overrides)
    values["experiment"] = experiment
    return ExperimentConfig(**values)


def load_config_file(filename: str) -> dict[str, Any]:
    """Read a YAML configuration document into a mapping."""
    if not os.path.isfile(filename):
        raise ConfigError(f"The configuration file {filename!r} does not exist!")
    with open(filename, "r") as f:
        try:
            doc = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"The configuration file {filename!r} is not valid YAML: {e}")
    if doc is None:
        return dict()
    if not isinstance(doc, Mapping):
        raise ConfigError(f"The configuration file {filename!r} must hold a mapping!")
    doc = dict(doc)
    # Relative question-network paths are read from the config's directory.
    qnet = doc.get("qnet")
    if isinstance(qnet, Mapping) and "file" in qnet:
        path = str(qnet["file"])
        if not os.path.isabs(path) and not os.path.isfile(path):
            path = os.path.join(os.path.dirname(os.path.abspath(filename)), path)
        doc["qnet"] = {**qnet, "file": path}
    return doc


def load_config(
    filename: Optional[str] = None, experiment: Optional[str] = None, **overrides
) -> ExperimentConfig:
    """Load, merge and validate a configuration.

    Values are taken from, in increasing priority: the experiment defaults,
    the configuration file, and ``overrides`` (e.g. command-line flags,
    `None` values being ignored).
    """
    doc = load_config_file(filename) if filename is not None else dict()
    file_experiment = doc.pop("experiment", None)
    if experiment is None or experiment == "run":
        experiment = file_experiment or "custom"
    elif file_experiment is not None and file_experiment != experiment:
        raise ConfigError(
            f"The configuration file is for {file_experiment!r}, not {experiment!r}!"
        )
    doc.update({k: v for k, v in overrides.items() if v is not None})
    return validate_config(make_config(experiment, **doc))


def _int_list(name: str, values, minimum: int = 1) -> list[int]:
    if not isinstance(values, (list, tuple)) or not values:
        raise ConfigError(f"'{name}' must be passed a nonempty list!")
    kind = "positive" if minimum > 0 else "nonnegative"
    out = list()
    for v in values:
        if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
            raise ConfigError(f"'{name}' must hold {kind} integers, got {v!r}!")
        out.append(v)
    return out


_REQUIRED_KIND = {"exp1": "chain", "exp2": "tree", "exp3": "tree"}


def _check_experiment(cfg: ExperimentConfig, horizons: list[int]) -> None:
    """Reject combinations an experiment cannot run."""
    kind = _REQUIRED_KIND.get(cfg.experiment)
    if kind is not None and cfg.qnet.get("kind") != kind:
        raise ConfigError(
            f"Experiment {cfg.experiment[-1]} needs a {kind!r} question network, "
            f"got {cfg.qnet.get('kind')!r}!"
        )
    recurrent = recipe_from_names(cfg.features, 1).recurrent
    if cfg.experiment in ("exp1", "exp2") and recurrent:
        raise ConfigError(
            f"Experiment {cfg.experiment[-1]} scores per-state predictions and "
            "cannot use features that feed back previous predictions!"
        )
    if "file" in cfg.qnet:
        q = load_qnet(cfg.qnet["file"])
        env = EnvConfig(observation=cfg.observation)
        if q.observation_width != env.observation_width:
            raise ConfigError(
                f"The question network reads {q.observation_width}-bit observations "
                f"but the {cfg.observation!r} walk emits {env.observation_width} bits!"
            )
        if tuple(q.actions) != tuple(env.actions):
            raise ConfigError(
                f"The question network's actions {q.actions} are not the walk's "
                f"actions {env.actions}!"
            )
    if cfg.experiment == "exp1":
        depth = cfg.qnet["depth"]
        depth = max(depth) if isinstance(depth, (list, tuple)) else depth
        if max(horizons) > depth:
            raise ConfigError(f"'horizons' cannot exceed the chain depth ({depth})!")


def validate_config(cfg: ExperimentConfig) -> ExperimentConfig:
    """Check every value of a configuration before anything runs.

    Returns
    -------
    `ExperimentConfig`
        The configuration with lists normalised.

    Raises
    ------
    ConfigError
        On the first invalid value.
    """
    if cfg.experiment not in DEFAULTS:
        raise ConfigError(f"{cfg.experiment!r} is not a valid experiment!")
    qnet = cfg.qnet
    if not isinstance(qnet, Mapping):
        raise ConfigError("'qnet' must be passed a mapping!")
    if "file" in qnet:
        if not os.path.isfile(str(qnet["file"])):
            raise ConfigError(f"The question-network file {qnet['file']!r} does not exist!")
    else:
        if qnet.get("kind") not in ("chain", "tree"):
            raise ConfigError(
                f"{qnet.get('kind')!r} is not a valid question-network kind! "
                "Valid kinds are: 'chain', 'tree'."
            )
        depth = qnet.get("depth")
        depths = depth if isinstance(depth, (list, tuple)) else [depth]
        _int_list("qnet.depth", list(depths))
    if cfg.activation not in activations:
        raise ConfigError(f"{cfg.activation!r} is not a valid activation!")
    try:
        recipe_from_names(cfg.features, 1)
    except (ValueError, TypeError) as e:
        raise ConfigError(str(e))
    if not isinstance(cfg.alphas, (list, tuple)) or not cfg.alphas:
        raise ConfigError("'alphas' must be passed a nonempty list!")
    alphas = list()
    for a in cfg.alphas:
        if isinstance(a, bool) or not isinstance(a, (int, float)) or a < 0:
            raise ConfigError(f"'alphas' must hold nonnegative numbers, got {a!r}!")
        alphas.append(float(a))
    if cfg.mode not in ("online", "batch"):
        raise ConfigError(f"{cfg.mode!r} is not a valid mode! Valid modes are: 'online', 'batch'.")
    lengths = _int_list("lengths", cfg.lengths, minimum=0)
    horizons = _int_list("horizons", cfg.horizons)
    time_steps = _int_list("time_steps", cfg.time_steps, minimum=0)
    for name in ("runs", "steps", "bin_size", "max_sweeps"):
        value = getattr(cfg, name)
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise ConfigError(f"'{name}' must be passed a positive integer!")
    if isinstance(cfg.seed, bool) or not isinstance(cfg.seed, int) or not 0 <= cfg.seed < 2**64:
        raise ConfigError("'seed' must be passed an unsigned 64-bit integer!")
    if cfg.observation not in ("full", "bit"):
        raise ConfigError(f"{cfg.observation!r} is not a valid observation mode!")
    width = EnvConfig(observation=cfg.observation).observation_width
    if recipe_from_names(cfg.features, 1).observation_width_needed() > width:
        raise ConfigError(
            f"The features {list(cfg.features)} read more than the {width} "
            f"observation bit(s) of the {cfg.observation!r} walk!"
        )
    if cfg.boundary not in boundary_rules:
        raise ConfigError(
            f"{cfg.boundary!r} is not a valid boundary rule! Valid rules are: "
            + ", ".join(repr(b) for b in boundary_rules)
            + "."
        )
    if cfg.weighting not in ("uniform", "visitation"):
        raise ConfigError(f"{cfg.weighting!r} is not a valid weighting!")
    try:
        # YAML reads "1e-9" (no dot) as a string.
        batch_alpha, tolerance = float(cfg.batch_alpha), float(cfg.tolerance)
    except (TypeError, ValueError):
        raise ConfigError("'batch_alpha' and 'tolerance' must be passed numbers!")
    if not batch_alpha > 0 or not tolerance > 0:
        raise ConfigError("'batch_alpha' and 'tolerance' must be passed positive numbers!")
    if not isinstance(cfg.learners, (list, tuple)) or not cfg.learners:
        raise ConfigError("'learners' must be passed a nonempty list!")
    for learner in cfg.learners:
        if learner not in ("td", "mc"):
            raise ConfigError(f"{learner!r} is not a valid learner! Valid learners are: 'td', 'mc'.")
    if cfg.ncores is not None and (isinstance(cfg.ncores, bool) or not isinstance(cfg.ncores, int)):
        raise ConfigError("'ncores' must be passed an integer!")
    if max(time_steps) > cfg.steps and cfg.experiment == "exp2":
        raise ConfigError("'time_steps' cannot exceed 'steps'!")
    _check_experiment(cfg, horizons)
    return cfg._replace(
        batch_alpha=batch_alpha,
        tolerance=tolerance,
        alphas=alphas,
        lengths=lengths,
        horizons=horizons,
        time_steps=time_steps,
        qnet=dict(qnet),
        features=[str(f) for f in cfg.features],
        learners=list(cfg.learners),
    )


def config_hash(cfg: ExperimentConfig) -> str:
    """SHA-256 of the canonical YAML dump of a configuration.

    The output directory and worker count do not change results and are
    left out.
    """
    doc = cfg._asdict()
    doc.pop("out_dir")
    doc.pop("ncores")
    text = yaml.safe_dump(doc, sort_keys=True, default_flow_style=True)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
