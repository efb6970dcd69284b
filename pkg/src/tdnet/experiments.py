# -*- coding: utf-8 -*-
"""Experiment harness: Monte Carlo vs TD-network comparisons on the random walk.

Every experiment is split into independent tasks (one per run and table
cell), each owning its environment, learners and random generator. Tasks
are mapped over worker processes in a fixed order and their results are
reduced in the calling process, so that a configuration and its seed fully
determine every artifact.
"""

import logging
import os
from collections.abc import Callable
from typing import NamedTuple, Optional

import numpy as np

from ._misc import derive_seeds, run_parallel
from .anet import AnswerNet, build_features, predict_states, recipe_from_names
from .config import ExperimentConfig, config_hash
from .env import EnvConfig, RandomWalkEnv, Trace, generate_trace, observation_table, truncate_trace
from .io import (
    _setup_logger,
    load_qnet,
    read_trace,
    write_oracle,
    write_prediction_log,
    write_table,
    write_trace,
    write_weights,
)
from .learner import learned_cells, replay_online, rollout, train_batch, update_counts
from .montecarlo import mc_train_conditional, mc_train_unconditional
from .oracle import (
    conditional_table,
    extensive_fixed_point,
    unconditional_table,
)
from .qnet import WALK_ACTIONS, QuestionNet, build_action_tree, build_chain, node_depths
from .stats import (
    binned_rmse,
    empirical_rmse,
    incorrect_proportion,
    one_step_nodes,
    rmse,
    rmse_by_group,
    standard_error,
    state_weights,
)


_EXP1, _EXP2_ONLINE, _EXP2_BATCH, _EXP3, _CUSTOM = range(1, 6)


class ExperimentResult(NamedTuple):
    """What an experiment produced.

    Attributes
    ----------
    .. artifacts : `dict`
           Artifact name -> path of the written file.
    .. tables : `dict`
           Artifact name -> rows written to it.
    .. converged : `bool`
           ``False`` if any batch run or fixed-point computation was
           flagged as non-converged.
    """

    artifacts: dict
    tables: dict
    converged: bool = True


class Task(NamedTuple):
    """One independent unit of work of an experiment."""

    cfg: ExperimentConfig
    tag: str
    seed: int
    length: int
    index: tuple = ()


## Shared helpers.


def env_config(cfg: ExperimentConfig) -> EnvConfig:
    return EnvConfig(7, cfg.observation, cfg.boundary).validate()


def _depths(cfg: ExperimentConfig) -> list[int]:
    depth = cfg.qnet.get("depth", 1)
    return list(depth) if isinstance(depth, (list, tuple)) else [int(depth)]


def build_qnet(cfg: ExperimentConfig, depth: Optional[int] = None) -> QuestionNet:
    """Question network named by a configuration."""
    width = env_config(cfg).observation_width
    if "file" in cfg.qnet:
        return load_qnet(cfg.qnet["file"])
    if depth is None:
        depth = max(_depths(cfg))
    if cfg.qnet["kind"] == "chain":
        return build_chain(depth, observation_width=width)
    return build_action_tree(WALK_ACTIONS, depth, observation_width=width)


def metadata(cfg: ExperimentConfig, **extra) -> dict:
    meta = {
        "experiment": cfg.experiment,
        "config_hash": config_hash(cfg),
        "seed": cfg.seed,
        "runs": cfg.runs,
        "weighting": cfg.weighting,
        "boundary": cfg.boundary,
        "observation": cfg.observation,
    }
    meta.update(extra)
    return meta


def obtain_trace(task: Task) -> Trace:
    """Generate the trace of a task, round-tripping it through disk if the
    configuration saves traces, so that every learner reads the same data.
    """
    cfg = task.cfg
    env = RandomWalkEnv(env_config(cfg))
    trace = generate_trace(env, None, task.length, seed=task.seed)
    if not cfg.save_traces:
        return trace
    filename = os.path.join(cfg.out_dir, "traces", f"{task.tag}.csv")
    write_trace(filename, trace, {"seed": task.seed, "boundary": cfg.boundary})
    return read_trace(filename, env.config)


def _state_features(recipe, config: EnvConfig) -> np.ndarray:
    return np.array([build_features(recipe, None, o) for o in observation_table(config)])


def _weights(cfg: ExperimentConfig, trace: Trace, weighting: Optional[str] = None) -> np.ndarray:
    return state_weights(weighting or cfg.weighting, 7, trace.hidden.states)


def _other_weighting(cfg: ExperimentConfig) -> str:
    return "visitation" if cfg.weighting == "uniform" else "uniform"


def _alphas(cfg: ExperimentConfig) -> list[float]:
    return [cfg.batch_alpha] if cfg.mode == "batch" else list(cfg.alphas)


def _mean_se(samples: list) -> tuple[np.ndarray, np.ndarray]:
    arr = np.array(samples, dtype=float)
    return arr.mean(axis=0), standard_error(arr, axis=0)


## Experiment 1: n-step unconditional predictions.


def exp1_task(task: Task) -> dict:
    """Train TD and MC on one trace; RMSE per (alpha, horizon) and learner."""
    cfg = task.cfg
    trace = obtain_trace(task)
    exp = trace.experience
    q = build_qnet(cfg)
    recipe = recipe_from_names(cfg.features, q.n)
    horizons = sorted(cfg.horizons)
    obs = observation_table(trace.config)
    truth = unconditional_table(trace.config, horizons)
    out = {"converged": True}
    for weighting in ("uniform", "visitation"):
        out[weighting] = {"td": list(), "mc": list()}
    for alpha in _alphas(cfg):
        preds = dict()
        if "td" in cfg.learners:
            anet = AnswerNet(q.n, recipe, cfg.activation)
            if cfg.mode == "batch":
                res = train_batch(exp, q, anet, alpha, cfg.max_sweeps, cfg.tolerance)
                out["converged"] &= res.converged
            else:
                replay_online(exp, q, anet, alpha, log=False)
            preds["td"] = predict_states(anet, obs)[:, [h - 1 for h in horizons]]
        if "mc" in cfg.learners:
            mc = mc_train_unconditional(
                exp, horizons, recipe, None if cfg.mode == "batch" else alpha
            )
            preds["mc"] = predict_states(mc.anet, obs)
        for weighting in ("uniform", "visitation"):
            w = _weights(cfg, trace, weighting)
            for learner, p in preds.items():
                out[weighting][learner].append(
                    [rmse(p, truth, w, [k]) for k in range(len(horizons))]
                )
    return out


def run_exp1(cfg: ExperimentConfig, logger: Optional[logging.Logger] = None) -> ExperimentResult:
    """Table 1: RMSE of n-step predictions vs amount of training data.

    Writes ``exp1_table1.csv`` with one row per sequence length (and per
    step size in online mode), the mean RMSE of every learner and horizon,
    and its standard error over runs.
    """
    logger = logger or logging.getLogger(__name__)
    logger.info("Running experiment 1...")
    horizons = sorted(cfg.horizons)
    tasks = list()
    for li, length in enumerate(cfg.lengths):
        for run, seed in enumerate(derive_seeds(cfg.seed, _EXP1, li, count=cfg.runs)):
            tasks.append(Task(cfg, f"exp1_len{length}_run{run}", seed, length, (li, run)))
    results = run_parallel(exp1_task, tasks, cfg.ncores, logger)
    alphas = _alphas(cfg)
    learners = [lrn for lrn in ("mc", "td") if lrn in cfg.learners]
    rows = list()
    for li, length in enumerate(cfg.lengths):
        chunk = results[li * cfg.runs:(li + 1) * cfg.runs]
        summary = {
            weighting: {
                lrn: _mean_se([r[weighting][lrn] for r in chunk]) for lrn in learners
            }
            for weighting in ("uniform", "visitation")
        }
        for ai, alpha in enumerate(alphas):
            row = {"steps": length, "alpha": alpha}
            for k, h in enumerate(horizons):
                for lrn in learners:
                    mean, se = summary[cfg.weighting][lrn]
                    row[f"h{h}_{lrn}"] = mean[ai, k]
                    row[f"h{h}_{lrn}_se"] = se[ai, k]
            rows.append(row)
            other = _other_weighting(cfg)
            logger.info(
                f"{length} steps, alpha={alpha}, {other} weighting: "
                + ", ".join(
                    f"h{h} {lrn} {summary[other][lrn][0][ai, k]:.3f}"
                    for k, h in enumerate(horizons)
                    for lrn in learners
                )
            )
    fieldnames = ["steps"] + (["alpha"] if cfg.mode == "online" else [])
    for h in horizons:
        fieldnames += [f"h{h}_{lrn}" for lrn in learners]
        fieldnames += [f"h{h}_{lrn}_se" for lrn in learners]
    converged = all(r["converged"] for r in results)
    filename = os.path.join(cfg.out_dir, "exp1_table1.csv")
    write_table(
        filename,
        fieldnames,
        rows,
        metadata(
            cfg,
            protocol=f"{cfg.mode} updating, {cfg.runs} independent sequences per length",
            batch_alpha=cfg.batch_alpha,
            tolerance=cfg.tolerance,
            converged=converged,
        ),
    )
    if not converged:
        logger.warning("Some batch runs did not converge.")
    logger.info("Done running experiment 1.")
    return ExperimentResult({"table1": filename}, {"table1": rows}, converged)


## Experiment 2: action-conditional predictions.


def _depth_groups(q: QuestionNet) -> dict[int, list[int]]:
    """Node columns per prediction depth, shallowest first."""
    groups: dict[int, list[int]] = dict()
    for i, d in enumerate(node_depths(q)):
        groups.setdefault(d, list()).append(i)
    return dict(sorted(groups.items()))


def exp2_online_task(task: Task) -> dict:
    """RMSE per (alpha, snapshot time, depth) of online TD and MC on one stream."""
    cfg = task.cfg
    trace = obtain_trace(task)
    depth = max(_depths(cfg))
    q = build_qnet(cfg, depth)
    recipe = recipe_from_names(cfg.features, q.n)
    obs = observation_table(trace.config)
    truth = conditional_table(trace.config, depth)
    groups = _depth_groups(q)
    out = {"td": list(), "mc": list()}
    for alpha in cfg.alphas:
        per_alpha = {"td": list(), "mc": list()}
        for t in cfg.time_steps:
            prefix = truncate_trace(trace, t)
            w = _weights(cfg, prefix)
            if "td" in cfg.learners:
                anet = AnswerNet(q.n, recipe, cfg.activation)
                replay_online(prefix.experience, q, anet, alpha, log=False)
                p = predict_states(anet, obs)
                per_alpha["td"].append(list(rmse_by_group(p, truth, groups, w).values()))
            if "mc" in cfg.learners:
                mc = mc_train_conditional(prefix.experience, depth, recipe, alpha)
                p = predict_states(mc.anet, obs)
                per_alpha["mc"].append(list(rmse_by_group(p, truth, groups, w).values()))
        for lrn in out:
            out[lrn].append(per_alpha[lrn])
    return out


def exp2_batch_task(task: Task) -> dict:
    """Incorrect-prediction percentages of batch TD and MC on one trace."""
    cfg = task.cfg
    trace = obtain_trace(task)
    exp = trace.experience
    depth = max(_depths(cfg))
    q = build_qnet(cfg, depth)
    recipe = recipe_from_names(cfg.features, q.n)
    obs = observation_table(trace.config)
    features = _state_features(recipe, trace.config)
    truth = conditional_table(trace.config, depth)
    out = {"converged": True}
    if "td" in cfg.learners:
        anet = AnswerNet(q.n, recipe, cfg.activation)
        res = train_batch(exp, q, anet, cfg.batch_alpha, cfg.max_sweeps, cfg.tolerance)
        out["converged"] = res.converged
        p = predict_states(anet, obs)
        learned = learned_cells(update_counts(exp, q, anet), features)
        out["td_round"] = incorrect_proportion(p, truth)
        out["td_strict"] = incorrect_proportion(p, truth, learned)
    if "mc" in cfg.learners:
        mc = mc_train_conditional(exp, depth, recipe, None)
        p = predict_states(mc.anet, obs)
        learned = learned_cells(mc.counts, features)
        out["mc_round"] = incorrect_proportion(p, truth)
        out["mc_strict"] = incorrect_proportion(p, truth, learned)
    return out


def run_exp2(cfg: ExperimentConfig, logger: Optional[logging.Logger] = None) -> ExperimentResult:
    """Tables 2 and 3: action-conditional predictions, online and batch.

    ``exp2_table2.csv`` holds, per snapshot time (and step size), the mean
    RMSE of each prediction depth for MC and TD trained online on
    independent streams. ``exp2_table3.csv`` holds, per sequence length, the
    mean percentage of incorrect predictions after batch updating, under
    the rounding and the strict reading.
    """
    logger = logger or logging.getLogger(__name__)
    logger.info("Running experiment 2...")
    learners = [lrn for lrn in ("mc", "td") if lrn in cfg.learners]
    seeds = derive_seeds(cfg.seed, _EXP2_ONLINE, 0, count=cfg.runs)
    tasks = [
        Task(cfg, f"exp2_online_run{run}", seed, cfg.steps, (run,))
        for run, seed in enumerate(seeds)
    ]
    online = run_parallel(exp2_online_task, tasks, cfg.ncores, logger)
    depths = sorted(_depth_groups(build_qnet(cfg)))
    summary = {lrn: _mean_se([r[lrn] for r in online]) for lrn in learners}
    rows2 = list()
    for ai, alpha in enumerate(cfg.alphas):
        for ti, t in enumerate(cfg.time_steps):
            row = {"time_step": t, "alpha": alpha}
            for di, d in enumerate(depths):
                for lrn in learners:
                    row[f"depth{d}_{lrn}"] = summary[lrn][0][ai, ti, di]
                    row[f"depth{d}_{lrn}_se"] = summary[lrn][1][ai, ti, di]
            rows2.append(row)
    fields2 = ["time_step", "alpha"]
    for d in depths:
        fields2 += [f"depth{d}_{lrn}" for lrn in learners]
        fields2 += [f"depth{d}_{lrn}_se" for lrn in learners]
    out = os.path.join(cfg.out_dir, "exp2_table2.csv")
    write_table(
        out,
        fields2,
        rows2,
        metadata(cfg, protocol=f"online updating, {cfg.runs} independent streams of {cfg.steps} steps"),
    )

    tasks = list()
    for li, length in enumerate(cfg.lengths):
        for run, seed in enumerate(derive_seeds(cfg.seed, _EXP2_BATCH, li, count=cfg.runs)):
            tasks.append(Task(cfg, f"exp2_batch_len{length}_run{run}", seed, length, (li, run)))
    batch = run_parallel(exp2_batch_task, tasks, cfg.ncores, logger)
    columns = [f"{lrn}_{rule}" for rule in ("round", "strict") for lrn in learners]
    rows3 = list()
    for li, length in enumerate(cfg.lengths):
        chunk = batch[li * cfg.runs:(li + 1) * cfg.runs]
        row = {"steps": length}
        for col in columns:
            mean, se = _mean_se([r[col] for r in chunk])
            row[col] = float(mean)
            row[f"{col}_se"] = float(se)
        rows3.append(row)
    converged = all(r["converged"] for r in batch)
    out3 = os.path.join(cfg.out_dir, "exp2_table3.csv")
    write_table(
        out3,
        ["steps"] + columns + [f"{c}_se" for c in columns],
        rows3,
        metadata(
            cfg,
            protocol=f"batch updating, {cfg.runs} independent sequences per length",
            batch_alpha=cfg.batch_alpha,
            tolerance=cfg.tolerance,
            converged=converged,
        ),
    )
    if not converged:
        logger.warning("Some batch runs did not converge.")
    logger.info("Done running experiment 2.")
    return ExperimentResult(
        {"table2": out, "table3": out3}, {"table2": rows2, "table3": rows3}, converged
    )


## Experiment 3: non-Markov walk.


def exp3_task(task: Task) -> dict:
    """Binned true and empirical RMSE of one online TD run on the bit-only walk."""
    cfg = task.cfg
    depth, alpha = task.index[0], task.index[1]
    trace = obtain_trace(task)
    exp = trace.experience
    q = build_qnet(cfg, depth)
    recipe = recipe_from_names(cfg.features, q.n)
    truth = conditional_table(trace.config, depth)[trace.hidden.states - 1]
    nodes = one_step_nodes(q)
    squared = np.empty(exp.length)
    one_step = np.empty((exp.length, len(nodes)))

    def record(t, y, diag):
        squared[t - 1] = np.mean((y - truth[t - 1]) ** 2)
        one_step[t - 1] = y[nodes]

    anet = AnswerNet(q.n, recipe, cfg.activation)
    replay_online(exp, q, anet, alpha, log=False, callback=record)
    return {
        "rmse": binned_rmse(squared, cfg.bin_size),
        "empirical_rmse": empirical_rmse(exp, one_step, q, cfg.bin_size, one_step_only=True),
    }


def run_exp3(cfg: ExperimentConfig, logger: Optional[logging.Logger] = None) -> ExperimentResult:
    """Learning curves of action-conditional TD networks on the bit-only walk.

    Every (depth, step size) pair is trained on the same ``runs`` streams.
    ``exp3_curves.csv`` holds the run-averaged RMSE (against the true
    predictions) and empirical RMSE of every bin, one gnuplot data block
    per (depth, step size).
    """
    logger = logger or logging.getLogger(__name__)
    logger.info("Running experiment 3...")
    seeds = derive_seeds(cfg.seed, _EXP3, 0, count=cfg.runs)
    depths = _depths(cfg)
    tasks = [
        Task(cfg, f"exp3_depth{depth}_alpha{alpha:g}_run{run}", seed, cfg.steps, (depth, alpha, run))
        for depth in depths
        for alpha in cfg.alphas
        for run, seed in enumerate(seeds)
    ]
    results = run_parallel(exp3_task, tasks, cfg.ncores, logger)
    rows = list()
    for ci in range(len(depths) * len(cfg.alphas)):
        chunk = results[ci * cfg.runs:(ci + 1) * cfg.runs]
        depth, alpha = tasks[ci * cfg.runs].index[:2]
        curve = np.mean([r["rmse"] for r in chunk], axis=0)
        emp = np.mean([r["empirical_rmse"] for r in chunk], axis=0)
        for b in range(len(curve)):
            rows.append(
                {
                    "depth": depth,
                    "alpha": alpha,
                    "bin": b + 1,
                    "t_end": min((b + 1) * cfg.bin_size, cfg.steps),
                    "rmse": curve[b],
                    "empirical_rmse": emp[b],
                }
            )
        logger.info(
            f"Depth {depth}, alpha={alpha}: final-bin RMSE {curve[-1]:.4f}, "
            f"empirical RMSE {emp[-1]:.4f}."
        )
    filename = os.path.join(cfg.out_dir, "exp3_curves.csv")
    write_table(
        filename,
        ("depth", "alpha", "bin", "t_end", "rmse", "empirical_rmse"),
        rows,
        metadata(cfg, protocol=f"online updating, {cfg.runs} streams of {cfg.steps} steps", bin_size=cfg.bin_size),
        block_keys=("depth", "alpha"),
    )
    logger.info("Done running experiment 3.")
    return ExperimentResult({"curves": filename}, {"curves": rows})


## Custom runs.


def _mc_predictions(cfg: ExperimentConfig, q: QuestionNet, exp, recipe, alpha, obs):
    kind = cfg.qnet.get("kind")
    mode_alpha = None if cfg.mode == "batch" else alpha
    if kind == "chain":
        mc = mc_train_unconditional(exp, range(1, q.n + 1), recipe, mode_alpha)
    elif kind == "tree":
        mc = mc_train_conditional(exp, max(_depths(cfg)), recipe, mode_alpha)
    else:
        return None
    return predict_states(mc.anet, obs)


def custom_task(task: Task) -> dict:
    """TD (and MC where defined) on one trace, scored against the fixed point."""
    cfg = task.cfg
    alpha = task.index[1]
    trace = obtain_trace(task)
    exp = trace.experience
    q = build_qnet(cfg)
    recipe = recipe_from_names(cfg.features, q.n)
    table = extensive_fixed_point(q, trace.config)
    obs = observation_table(trace.config)
    w = _weights(cfg, trace)
    anet = AnswerNet(q.n, recipe, cfg.activation)
    out = {"converged": True, "anet": None, "log": None}
    if cfg.mode == "batch":
        res = train_batch(exp, q, anet, alpha, cfg.max_sweeps, cfg.tolerance)
        out["converged"] = res.converged
    else:
        out["log"] = replay_online(exp, q, anet, alpha, log=task.index[2] == 0).log
    if recipe.recurrent:
        # History-dependent predictions are scored along the last bin of the stream.
        _, Y = rollout(exp, anet)
        last = slice(max(len(Y) - cfg.bin_size, 0), len(Y))
        errors = (Y[last] - table.at(trace.hidden.states[last])) ** 2
        out["td"] = float(np.sqrt(errors.mean()))
    else:
        out["td"] = rmse(predict_states(anet, obs), table, w)
    if "mc" in cfg.learners and not recipe.recurrent:
        p = _mc_predictions(cfg, q, exp, recipe, alpha, obs)
        out["mc"] = None if p is None else rmse(p, table, w)
    if task.index[2] == 0:
        out["anet"] = anet
    return out


def run_custom(cfg: ExperimentConfig, logger: Optional[logging.Logger] = None) -> ExperimentResult:
    """Any question network, features and mode on the random walk.

    Writes the fixed-point oracle of the question network (``oracle.csv``),
    the mean RMSE per (length, step size) (``custom_results.csv``), and the
    weights (and, online, the prediction log) of the first run of every
    cell.
    """
    logger = logger or logging.getLogger(__name__)
    logger.info("Running custom experiment...")
    q = build_qnet(cfg)
    table = extensive_fixed_point(q, env_config(cfg))
    converged = table.converged
    artifacts = dict()
    artifacts["oracle"] = os.path.join(cfg.out_dir, "oracle.csv")
    write_oracle(
        artifacts["oracle"],
        table,
        metadata(cfg, converged=table.converged, iterations=table.iterations),
    )
    if "mc" in cfg.learners and "file" in cfg.qnet:
        logger.warning("Monte Carlo baselines need a chain or tree question network, skipping them.")
    alphas = _alphas(cfg)
    tasks = list()
    for li, length in enumerate(cfg.lengths):
        seeds = derive_seeds(cfg.seed, _CUSTOM, li, count=cfg.runs)
        for alpha in alphas:
            for run, seed in enumerate(seeds):
                tasks.append(
                    Task(cfg, f"custom_len{length}_run{run}", seed, length, (li, alpha, run))
                )
    results = run_parallel(custom_task, tasks, cfg.ncores, logger)
    rows = list()
    for first in range(0, len(tasks), cfg.runs):
        chunk = results[first:first + cfg.runs]
        task = tasks[first]
        length, alpha = task.length, task.index[1]
        row = {"steps": length, "alpha": alpha}
        row["td_rmse"], row["td_se"] = (float(v) for v in _mean_se([r["td"] for r in chunk]))
        mc_values = [r.get("mc") for r in chunk]
        if mc_values and all(v is not None for v in mc_values):
            row["mc_rmse"], row["mc_se"] = (float(v) for v in _mean_se(mc_values))
        else:
            row["mc_rmse"] = row["mc_se"] = ""
        row["converged_runs"] = sum(r["converged"] for r in chunk)
        rows.append(row)
        converged &= row["converged_runs"] == len(chunk)
        tag = f"{length}_{alpha:g}"
        artifacts[f"weights_{tag}"] = os.path.join(cfg.out_dir, f"custom_weights_{tag}.csv")
        write_weights(artifacts[f"weights_{tag}"], chunk[0]["anet"], q, metadata(cfg, steps=length, alpha=alpha))
        if chunk[0]["log"] is not None:
            artifacts[f"log_{tag}"] = os.path.join(cfg.out_dir, f"custom_predictions_{tag}.csv")
            write_prediction_log(artifacts[f"log_{tag}"], chunk[0]["log"], q, metadata(cfg, steps=length, alpha=alpha))
    artifacts["results"] = os.path.join(cfg.out_dir, "custom_results.csv")
    write_table(
        artifacts["results"],
        ("steps", "alpha", "td_rmse", "td_se", "mc_rmse", "mc_se", "converged_runs"),
        rows,
        metadata(cfg, protocol=f"{cfg.mode} updating", converged=converged),
    )
    if not converged:
        logger.warning("Some computations did not converge.")
    logger.info("Done running custom experiment.")
    return ExperimentResult(artifacts, {"results": rows}, converged)


experiment_runners: dict[str, Callable[..., ExperimentResult]] = {
    "exp1": run_exp1,
    "exp2": run_exp2,
    "exp3": run_exp3,
    "custom": run_custom,
}


def run_experiment(
    cfg: ExperimentConfig,
    logger: Optional[logging.Logger] = None,
    logger_name: Optional[str] = None,
    logging_level: Optional[int] = logging.INFO,
) -> ExperimentResult:
    """Run the experiment a validated configuration names.

    Parameters
    ----------
    cfg : `ExperimentConfig`
        Validated configuration.
    logger : `logging.Logger`, optional
        Logger instance to use for logging outputs.
    logger_name : `str`, optional
        Name of the `logging.Logger` object to create for logging outputs.
        Ignored if a Logger instance is passed to ``logger``.
    logging_level : `int`, default: ``logging.INFO``
        Logging level of the logging output.
    """
    if logger is None:
        logger = _setup_logger(name=logger_name or "tdnet", level=logging_level)
    os.makedirs(cfg.out_dir, exist_ok=True)
    return experiment_runners[cfg.experiment](cfg, logger)
