# -*- coding: utf-8 -*-

import logging

import numpy as np
import pytest

from tdnet.anet import AnswerNet, history_recipe
from tdnet.env import EnvConfig
from tdnet.io import (
    _setup_logger,
    _update_logger,
    feature_names,
    format_value,
    load_qnet,
    parse_qnet,
    read_table,
    read_trace,
    save_qnet,
    serialize_qnet,
    write_oracle,
    write_prediction_log,
    write_table,
    write_trace,
    write_weights,
)
from tdnet.learner import replay_online
from tdnet.oracle import extensive_fixed_point
from tdnet.qnet import QuestionNetParseError, build_action_tree


def test_golden_action_tree(qnets_dir):
    q = load_qnet(str(qnets_dir / "action_tree_depth2.yaml"))
    built = build_action_tree(("L", "R"), 2)
    assert q.nodes == built.nodes
    assert q.observation_width == 8
    assert q.actions == ("L", "R")


def test_golden_general_network(figure_qnet):
    assert figure_qnet.n == 8
    assert figure_qnet.obs_weights[3, 1] == 0.1
    assert figure_qnet.pred_weights[3, 3] == 0.9
    np.testing.assert_array_equal(figure_qnet.condition_matrix[4], [1, 0])
    np.testing.assert_array_equal(figure_qnet.condition_matrix[5], [0, 1])


def test_serialize_round_trip(figure_qnet, tree2, tmp_path):
    for q in (figure_qnet, tree2):
        again = parse_qnet(serialize_qnet(q))
        assert again.nodes == q.nodes
        assert again.actions == q.actions
    filename = str(tmp_path / "q.yaml")
    save_qnet(figure_qnet, filename)
    assert load_qnet(filename).nodes == figure_qnet.nodes


def test_random_networks_round_trip(random_qnet):
    rng = np.random.default_rng(2024)
    for _ in range(100):
        q = random_qnet(rng)
        again = parse_qnet(serialize_qnet(q))
        assert again == q
        assert again.nodes == q.nodes
        assert again.actions == q.actions
        assert again.observation_width == q.observation_width


def test_prediction_sources_by_index():
    q = parse_qnet(
        """
observation_width: 8
actions: [L, R]
nodes:
  - {label: a, terms: [{source: "obs:0"}]}
  - {label: b, condition: "action:R", terms: [{source: "pred:0", weight: 1.0}]}
"""
    )
    assert q.pred_weights[1, 0] == 1.0
    assert q.condition_matrix[1].tolist() == [0.0, 1.0]


@pytest.mark.parametrize(
    "text,message",
    [
        ("observation_width: 8\nactions: [L, R]\n", "no 'nodes' field"),
        (
            "observation_width: 8\nactions: [L, R]\nnodes:\n"
            "  - {label: a, terms: [{source: 'obs:0'}]}\n"
            "  - {label: b, terms: [{source: 'pred:zz'}]}\n",
            r"node 1: terms\[0\].source",
        ),
        (
            "observation_width: 8\nactions: [L, R]\nnodes:\n"
            "  - {label: a, condition: 'action:U', terms: [{source: 'obs:0'}]}\n",
            "node 0: condition",
        ),
        (
            "observation_width: 8\nactions: [L, R]\nnodes:\n"
            "  - {label: a, terms: [{source: 'obs:9'}]}\n",
            "node 0: observation bit index out of range",
        ),
        (
            "observation_width: 8\nactions: [L, R]\nnodes:\n"
            "  - {label: a, terms: [{source: 'pred:3'}]}\n",
            "node 0: prediction index out of range",
        ),
        (
            "observation_width: 8\nactions: [L, R]\nnodes:\n"
            "  - {label: a, terms: [{source: 'obs:0', weight: heavy}]}\n",
            r"node 0: terms\[0\].weight",
        ),
        (
            "observation_width: 8\nactions: 5\nnodes:\n  - {label: a, terms: [{source: 'obs:0'}]}\n",
            "actions: 5 is not a list",
        ),
        (
            "observation_width: 8\nactions: [L, R]\nnodes:\n"
            "  - {label: a, when: always, terms: [{source: 'obs:0'}]}\n",
            r"node 0: unknown key\(s\) \['when'\]",
        ),
        (
            "observation_width: 8\nactions: [L, R]\nnodes:\n"
            "  - {label: a, terms: [{source: 'obs:0', wieght: 0.5}]}\n",
            r"node 0: terms\[0\]: unknown key",
        ),
        (
            "observation_width: 8\nactions: [L, R]\ngamma: 0.9\nnodes:\n"
            "  - {label: a, terms: [{source: 'obs:0'}]}\n",
            "The document: unknown key",
        ),
        ("nodes: [", "not valid YAML"),
    ],
)
def test_parse_errors(text, message):
    with pytest.raises(QuestionNetParseError, match=message):
        parse_qnet(text)


def test_missing_qnet_file(tmp_path):
    with pytest.raises(QuestionNetParseError):
        load_qnet(str(tmp_path / "missing.yaml"))


def test_format_value():
    assert format_value(0.1) == "0.1"
    assert format_value(1e-12) == "1e-12"
    assert format_value(np.float64(1 / 3)) == "0.3333333333"
    assert format_value(True) == "1"
    assert format_value(np.int64(7)) == "7"
    assert format_value("x") == "x"


def test_table_round_trip(tmp_path):
    filename = str(tmp_path / "sub" / "table.csv")
    rows = [{"k": 1, "v": 0.5}, {"k": 1, "v": 0.25}, {"k": 2, "v": 1.0}]
    write_table(filename, ("k", "v"), rows, {"seed": 3}, block_keys=("k",))
    with open(filename) as f:
        text = f.read()
    assert text == "# seed: 3\nk,v\n1,0.5\n1,0.25\n\n2,1\n"
    meta, read = read_table(filename)
    assert meta == {"seed": "3"}
    assert [r["v"] for r in read] == ["0.5", "0.25", "1"]


def test_trace_round_trip(trace, tmp_path):
    filename = str(tmp_path / "trace.csv")
    write_trace(filename, trace, {"seed": 12345})
    again = read_trace(filename, trace.config)
    np.testing.assert_array_equal(again.experience.observations, trace.experience.observations)
    np.testing.assert_array_equal(again.experience.actions, trace.experience.actions)
    np.testing.assert_array_equal(again.hidden.states, trace.hidden.states)
    _, rows = read_table(filename)
    assert rows[0]["obs_bits"] == "00001000"
    assert rows[-1]["action"] == ""


def test_trace_mismatch(trace, tmp_path):
    filename = str(tmp_path / "trace.csv")
    write_trace(filename, trace)
    with pytest.raises(ValueError):
        read_trace(filename, EnvConfig(observation="bit"))


def test_weights_and_logs(trace, tree2, recipe, tmp_path):
    res = replay_online(trace.experience, tree2, AnswerNet(tree2.n, recipe), 0.5)
    write_weights(str(tmp_path / "w.csv"), res.anet, tree2)
    _, rows = read_table(str(tmp_path / "w.csv"))
    assert len(rows) == 6 * 7
    assert rows[0]["node"] == "L" and rows[0]["feature"] == "state1"
    write_prediction_log(str(tmp_path / "log.csv"), res.log, tree2)
    _, rows = read_table(str(tmp_path / "log.csv"))
    assert len(rows) == 200 * 6
    assert list(rows[0]) == ["t", "node", "y", "y_tilde", "z", "c"]


def test_feature_names(tree2):
    names = feature_names(AnswerNet(6, history_recipe(6)), tree2.actions, tree2.labels)
    assert names[:5] == ["bias", "L/0", "L/1", "R/0", "R/1"]
    assert names[-1] == "prev:RR"


def test_write_oracle(env_config, tree2, tmp_path):
    filename = str(tmp_path / "oracle.csv")
    write_oracle(filename, extensive_fixed_point(tree2, env_config))
    _, rows = read_table(filename)
    assert len(rows) == 7 * 6
    assert rows[0] == {"state": "1", "node_label": "L", "true_value": "1"}


def test_setup_logger():
    logger = _setup_logger(name="tdnet.tests", level=logging.DEBUG)
    assert len(logger.handlers) == 1
    assert logger.level == logging.DEBUG
    _update_logger(logger, level=logging.WARNING, show_pid=True)
    assert logger.level == logging.WARNING
    assert logger.show_pid
    assert _setup_logger(name="tdnet.tests", level=None).disabled
