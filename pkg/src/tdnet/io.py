# -*- coding: utf-8 -*-
"""I/O: logging setup, question-network documents and CSV artifacts."""

import csv
import inspect
import logging
import os
import sys
from collections.abc import Iterable, Mapping, Sequence
from typing import Any, Optional

import numpy as np
import yaml

from .anet import (
    ActionObsPairOneHot,
    ActionOneHot,
    AnswerNet,
    Bias,
    ObservationBits,
    PrevPredictions,
    StateOneHot,
)
from .env import EnvConfig, Experience, HiddenStates, Trace, observation_table
from .learner import PredictionLog
from .oracle import OracleTable
from .qnet import (
    ALWAYS,
    NextPrediction,
    NodeSpec,
    ObservationBit,
    QuestionNet,
    QuestionNetError,
    QuestionNetParseError,
    TargetTerm,
    action_is,
)


def _log_format(level: int, pid: str) -> str:
    if level <= logging.DEBUG:
        return (
            f"%(asctime)s - %(levelname)s - %(name)s {pid}in %(funcName)s "
            "(l. %(lineno)d) - %(message)s"
        )
    return "%(asctime)s - %(levelname)s " f"- %(name)s {pid}- %(message)s"


def _setup_logger(
    name: Optional[str] = None, level: Optional[int] = logging.INFO, show_pid: bool = False
) -> logging.Logger:
    """Setup the logging configuration for a Logger.

    Return a ready-configured logging.Logger instance which will write
    to 'stdout'.

    Parameters
    ----------
    name : `str`, optional
        Name of the logging.Logger instance to get. Default is the filename
        where the function is called.
    level : `int`, default: ``logging.INFO``
        Logging level to set to the returned logging.Logger instance.
        `None` disables the logger.
    show_pid : `bool`, default: ``False``
        Show the process ID in the log records.

    Returns
    -------
    `logging.Logger`
        Ready-configured Logger
    """
    if name is None:
        name = os.path.basename(inspect.stack()[1].filename)
    logger = logging.getLogger(name)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    if level is None:
        logger.disabled = True
        return logger
    logger.disabled = False
    logger.show_pid = show_pid
    pid = f"(PID: {os.getpid()}) " if show_pid else ""
    ch = logging.StreamHandler(sys.stdout)
    ch.setFormatter(logging.Formatter(_log_format(level, pid)))
    logger.addHandler(ch)
    logger.setLevel(level)
    logger.propagate = False
    return logger


def _update_logger(logger: logging.Logger, **kwargs) -> None:
    """Update the configuration of a logging.Logger instance.

    Parameters
    ----------
    logger : logging.Logger
        Logger instance to be updated.

    Keyword arguments:

    Configuration parameters of the logging.Logger instance to update,
    such as "level" or "show_pid". See function "_setup_logger".
    """
    level = kwargs.get("level", logger.getEffectiveLevel())
    if level is None:
        logger.disabled = True
        return
    elif "level" in kwargs.keys():
        logger.disabled = False
    if not hasattr(logger, "show_pid"):
        logger.show_pid = False
    show_pid = kwargs.get("show_pid", logger.show_pid)
    logger.show_pid = show_pid
    pid = f"(PID: {os.getpid()}) " if show_pid else ""
    formatter = logging.Formatter(_log_format(level, pid))
    for handler in logger.handlers:
        handler.setFormatter(formatter)
    logger.setLevel(level)


## Question-network documents.


def _parse_condition(value: Any, actions: Sequence[str], i: int):
    if value is None or value == "always":
        return ALWAYS
    kind, _, label = str(value).partition(":")
    if kind != "action" or not label:
        raise QuestionNetParseError(
            f"node {i}: condition: {value!r} is not 'always' or 'action:<label>'"
        )
    if label not in actions:
        raise QuestionNetParseError(f"node {i}: condition: unknown action label {label!r}")
    return action_is(list(actions).index(label))


def _parse_source(value: Any, labels: Sequence[str], i: int, j: int):
    kind, _, ref = str(value).partition(":")
    where = f"node {i}: terms[{j}].source"
    if kind == "obs":
        try:
            return ObservationBit(int(ref))
        except ValueError:
            raise QuestionNetParseError(f"{where}: {value!r} has no bit index")
    if kind == "pred":
        if ref in labels:
            return NextPrediction(list(labels).index(ref))
        try:
            return NextPrediction(int(ref))
        except ValueError:
            raise QuestionNetParseError(f"{where}: unknown node {ref!r}")
    raise QuestionNetParseError(f"{where}: {value!r} is not 'obs:<i>' or 'pred:<node>'")


_DOCUMENT_KEYS = ("observation_width", "actions", "nodes")
_NODE_KEYS = ("label", "condition", "terms")
_TERM_KEYS = ("source", "weight")


def _check_keys(doc: Mapping, allowed: Sequence[str], where: str) -> None:
    unknown = sorted(str(k) for k in doc if k not in allowed)
    if unknown:
        raise QuestionNetParseError(f"{where}: unknown key(s) {unknown}")


def qnet_from_dict(doc: Mapping) -> QuestionNet:
    """Build a `QuestionNet` from an already-loaded document mapping."""
    if not isinstance(doc, Mapping):
        raise QuestionNetParseError("The document must be a mapping!")
    for key in _DOCUMENT_KEYS:
        if key not in doc:
            raise QuestionNetParseError(f"The document has no {key!r} field!")
    _check_keys(doc, _DOCUMENT_KEYS, "The document")
    raw_actions = doc["actions"]
    if not isinstance(raw_actions, list) or not all(
        isinstance(a, (str, int)) and not isinstance(a, bool) for a in raw_actions
    ):
        raise QuestionNetParseError(
            f"actions: {raw_actions!r} is not a list of action labels"
        )
    actions = [str(a) for a in raw_actions]
    raw_nodes = doc["nodes"]
    if not isinstance(raw_nodes, list):
        raise QuestionNetParseError("'nodes' must be a list!")
    labels = list()
    for i, raw in enumerate(raw_nodes):
        if not isinstance(raw, Mapping) or "label" not in raw:
            raise QuestionNetParseError(f"node {i}: label: missing")
        _check_keys(raw, _NODE_KEYS, f"node {i}")
        labels.append(str(raw["label"]))
    nodes = list()
    for i, raw in enumerate(raw_nodes):
        terms = raw.get("terms")
        if not isinstance(terms, list) or not terms:
            raise QuestionNetParseError(f"node {i}: terms: must be a nonempty list")
        parsed_terms = list()
        for j, term in enumerate(terms):
            if not isinstance(term, Mapping) or "source" not in term:
                raise QuestionNetParseError(f"node {i}: terms[{j}]: missing source")
            _check_keys(term, _TERM_KEYS, f"node {i}: terms[{j}]")
            try:
                weight = float(term.get("weight", 1.0))
            except (TypeError, ValueError):
                raise QuestionNetParseError(
                    f"node {i}: terms[{j}].weight: {term.get('weight')!r} is not a number"
                )
            parsed_terms.append(
                TargetTerm(_parse_source(term["source"], labels, i, j), weight)
            )
        condition = _parse_condition(raw.get("condition"), actions, i)
        nodes.append(NodeSpec(labels[i], tuple(parsed_terms), condition))
    try:
        return QuestionNet(nodes, int(doc["observation_width"]), actions)
    except QuestionNetError as e:
        raise QuestionNetParseError(str(e)) from e
    except (TypeError, ValueError) as e:
        raise QuestionNetParseError(f"observation_width: {e}") from e


def qnet_to_dict(q: QuestionNet) -> dict:
    labels = q.labels
    nodes = list()
    for node in q.nodes:
        terms = list()
        for term in node.terms:
            if isinstance(term.source, ObservationBit):
                source = f"obs:{term.source.index}"
            else:
                source = f"pred:{labels[term.source.node]}"
            terms.append({"source": source, "weight": float(term.weight)})
        if node.condition.always:
            condition = "always"
        else:
            condition = f"action:{q.actions[node.condition.action]}"
        nodes.append({"label": node.label, "condition": condition, "terms": terms})
    return {
        "observation_width": q.observation_width,
        "actions": list(q.actions),
        "nodes": nodes,
    }


def parse_qnet(text: str) -> QuestionNet:
    """Parse a YAML question-network document.

    Raises
    ------
    QuestionNetParseError
        If the document is malformed or violates a network invariant; the
        message names the node and field at fault.
    """
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise QuestionNetParseError(f"The document is not valid YAML: {e}") from e
    return qnet_from_dict(doc)


def serialize_qnet(q: QuestionNet) -> str:
    return yaml.safe_dump(qnet_to_dict(q), sort_keys=False, default_flow_style=None)


def load_qnet(filename: str) -> QuestionNet:
    if not os.path.isfile(filename):
        raise QuestionNetParseError(f"The file {filename!r} does not exist!")
    with open(filename, "r") as f:
        return parse_qnet(f.read())


def save_qnet(q: QuestionNet, filename: str) -> None:
    with open(filename, "w") as f:
        f.write(serialize_qnet(q))


## CSV artifacts.


def format_value(value: Any) -> str:
    """Render a cell so that equal inputs always give equal bytes."""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.10g" % value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def _write_metadata(f, metadata: Optional[Mapping[str, Any]]) -> None:
    for key, value in (metadata or dict()).items():
        f.write(f"# {key}: {format_value(value)}\n")


def write_table(
    filename: str,
    fieldnames: Sequence[str],
    rows: Iterable[Mapping[str, Any]],
    metadata: Optional[Mapping[str, Any]] = None,
    block_keys: Optional[Sequence[str]] = None,
) -> None:
    """Write rows to a CSV file preceded by ``# key: value`` metadata lines.

    Parameters
    ----------
    filename : `str`
        Output path; parent directories are created.
    fieldnames : sequence of `str`
        Column names, in order.
    rows : iterable of mappings
        Rows; extra keys are ignored.
    metadata : mapping, optional
        Header entries.
    block_keys : sequence of `str`, optional
        If given, a blank line separates consecutive rows whose values for
        these columns differ (gnuplot data blocks).
    """
    dirname = os.path.dirname(os.path.abspath(filename))
    os.makedirs(dirname, exist_ok=True)
    with open(filename, "w", newline="") as f:
        _write_metadata(f, metadata)
        writer = csv.DictWriter(
            f, fieldnames=list(fieldnames), extrasaction="ignore", lineterminator="\n"
        )
        writer.writeheader()
        previous = None
        for row in rows:
            if block_keys is not None:
                key = tuple(row[k] for k in block_keys)
                if previous is not None and key != previous:
                    f.write("\n")
                previous = key
            writer.writerow({k: format_value(row[k]) for k in fieldnames if k in row})


def read_table(filename: str) -> tuple[dict[str, str], list[dict[str, str]]]:
    """Read a file written by `write_table` into its metadata and rows."""
    metadata = dict()
    lines = list()
    with open(filename, "r", newline="") as f:
        for line in f:
            if line.startswith("# "):
                key, _, value = line[2:].rstrip("\n").partition(": ")
                metadata[key] = value
            elif line.strip():
                lines.append(line)
    return metadata, list(csv.DictReader(lines))


def feature_names(
    anet: AnswerNet, actions: Sequence[str], node_labels: Sequence[str]
) -> list[str]:
    """Readable name of every feature of an answer network's recipe."""
    names = list()
    for part in anet.recipe.parts:
        if isinstance(part, Bias):
            names.append("bias")
        elif isinstance(part, StateOneHot):
            names.extend(f"state{k}" for k in range(1, part.width + 1))
        elif isinstance(part, ObservationBits):
            names.extend(f"obs{part.offset + j}" for j in range(part.width))
        elif isinstance(part, ActionOneHot):
            names.extend(f"action:{a}" for a in actions)
        elif isinstance(part, ActionObsPairOneHot):
            names.extend(f"{a}/{b}" for a in actions for b in (0, 1))
        elif isinstance(part, PrevPredictions):
            names.extend(f"prev:{lab}" for lab in node_labels)
    return names


def write_weights(
    filename: str,
    anet: AnswerNet,
    q: QuestionNet,
    metadata: Optional[Mapping[str, Any]] = None,
) -> None:
    """Export a weight snapshot as ``node,feature,weight`` rows."""
    names = feature_names(anet, q.actions, q.labels)
    rows = (
        {"node": label, "feature": names[j], "weight": anet.W[i, j]}
        for i, label in enumerate(q.labels)
        for j in range(anet.m)
    )
    write_table(filename, ("node", "feature", "weight"), rows, metadata)


def write_prediction_log(
    filename: str,
    log: PredictionLog,
    q: QuestionNet,
    metadata: Optional[Mapping[str, Any]] = None,
) -> None:
    """Export an online run as ``t,node,y,y_tilde,z,c`` rows."""
    rows = (
        {
            "t": t + 1,
            "node": label,
            "y": log.y[t, i],
            "y_tilde": log.y_tilde[t, i],
            "z": log.z[t, i],
            "c": log.c[t, i],
        }
        for t in range(len(log.y))
        for i, label in enumerate(q.labels)
    )
    write_table(filename, ("t", "node", "y", "y_tilde", "z", "c"), rows, metadata)


def write_trace(
    filename: str, trace: Trace, metadata: Optional[Mapping[str, Any]] = None
) -> None:
    """Export a trace as ``t,state,obs_bits,action`` rows.

    ``obs_bits`` is the observation written as a string of 0/1 characters;
    the action of the last row (the final observation) is empty.
    """
    exp = trace.experience
    labels = exp.action_labels
    rows = list()
    for t in range(exp.length + 1):
        rows.append(
            {
                "t": t + 1,
                "state": int(trace.hidden.states[t]),
                "obs_bits": "".join(str(int(b)) for b in exp.observations[t]),
                "action": labels[int(exp.actions[t])] if t < exp.length else "",
            }
        )
    write_table(filename, ("t", "state", "obs_bits", "action"), rows, metadata)


def read_trace(filename: str, config: EnvConfig) -> Trace:
    """Read a trace written by `write_trace`.

    Raises
    ------
    ValueError
        If the file is inconsistent with ``config`` (unknown action labels,
        observation widths or observations that do not match the states).
    """
    _, rows = read_table(filename)
    if not rows:
        raise ValueError(f"The trace file {filename!r} has no rows!")
    labels = tuple(config.actions)
    table = observation_table(config)
    states = np.array([int(r["state"]) for r in rows], dtype=np.int64)
    observations = np.array(
        [[float(c) for c in r["obs_bits"]] for r in rows], dtype=float
    )
    if observations.shape[1] != config.observation_width:
        raise ValueError(
            f"The trace file {filename!r} holds {observations.shape[1]}-bit "
            f"observations, expected {config.observation_width}!"
        )
    if np.any(states < 1) or np.any(states > config.num_states):
        raise ValueError(f"The trace file {filename!r} holds out-of-range states!")
    if not np.array_equal(observations, table[states - 1]):
        raise ValueError(
            f"The observations of trace file {filename!r} do not match its states!"
        )
    try:
        actions = np.array([labels.index(r["action"]) for r in rows[:-1]], dtype=np.int64)
    except ValueError:
        raise ValueError(f"The trace file {filename!r} holds an unknown action label!")
    return Trace(
        Experience(observations, actions, labels), HiddenStates(states), config
    )


def write_oracle(
    filename: str, table: OracleTable, metadata: Optional[Mapping[str, Any]] = None
) -> None:
    """Export an oracle table as ``state,node_label,true_value`` rows."""
    rows = (
        {"state": s + 1, "node_label": label, "true_value": table.values[s, i]}
        for s in range(table.num_states)
        for i, label in enumerate(table.labels)
    )
    write_table(filename, ("state", "node_label", "true_value"), rows, metadata)

