# -*- coding: utf-8 -*-

import numpy as np
import pytest

from tdnet.qnet import (
    ALWAYS,
    NextPrediction,
    NodeSpec,
    ObservationBit,
    QuestionNet,
    QuestionNetError,
    TargetTerm,
    action_is,
    build_action_tree,
    build_chain,
    compute_conditions,
    compute_targets,
    node_depths,
)


def test_build_chain():
    q = build_chain(3)
    assert q.n == 3
    assert q.labels == ["y1", "y2", "y3"]
    assert q.obs_weights[0, 0] == 1.0
    assert q.obs_weights[1:].sum() == 0.0
    assert q.pred_weights[1, 0] == 1.0
    assert q.pred_weights[2, 1] == 1.0
    assert np.all(q.condition_matrix == 1.0)


def test_build_action_tree_layout(tree2):
    assert tree2.labels == ["L", "R", "LL", "LR", "RL", "RR"]
    # LR: take L, then predict what R predicts.
    lr = tree2.nodes[3]
    assert lr.condition == action_is(0)
    assert lr.terms == (TargetTerm(NextPrediction(1), 1.0),)
    assert tree2.nodes[1].terms == (TargetTerm(ObservationBit(0), 1.0),)


@pytest.mark.parametrize("depth,n", [(1, 2), (2, 6), (3, 14), (4, 30)])
def test_action_tree_size(depth, n):
    assert build_action_tree(("L", "R"), depth).n == n


@pytest.mark.parametrize("actions", ["a", "ab", "abc"])
@pytest.mark.parametrize("depth", [1, 2, 3, 4, 5])
def test_action_tree_shape(actions, depth):
    q = build_action_tree(actions, depth)
    assert q.n == sum(len(actions) ** d for d in range(1, depth + 1))
    assert len(set(q.labels)) == q.n
    for i, node in enumerate(q.nodes):
        (term,) = node.terms
        assert node.condition == action_is(actions.index(node.label[0]))
        if len(node.label) == 1:
            assert term.source == ObservationBit(0)
        else:
            assert q.labels[term.source.node] == node.label[1:]
            assert term.source.node < i


def test_build_errors():
    with pytest.raises(ValueError):
        build_chain(0)
    with pytest.raises(ValueError):
        build_action_tree((), 2)


def test_compute_targets():
    q = build_chain(3)
    o_next = np.zeros(8)
    o_next[0] = 1.0
    z = compute_targets(q, o_next, np.array([0.2, 0.3, 0.4]))
    np.testing.assert_allclose(z, [1.0, 0.2, 0.3])
    with pytest.raises(ValueError):
        compute_targets(q, np.zeros(7), np.zeros(3))
    with pytest.raises(ValueError):
        compute_targets(q, o_next, np.zeros(2))


def test_compute_conditions(tree2):
    np.testing.assert_array_equal(compute_conditions(tree2, "L"), [1, 0, 1, 1, 0, 0])
    np.testing.assert_array_equal(compute_conditions(tree2, 1), [0, 1, 0, 0, 1, 1])
    np.testing.assert_array_equal(compute_conditions(build_chain(2), "R"), [1, 1])
    with pytest.raises(ValueError):
        compute_conditions(tree2, "U")
    with pytest.raises(ValueError):
        compute_conditions(tree2, 2)


def test_matrices_are_read_only(tree2):
    with pytest.raises(ValueError):
        tree2.obs_weights[0, 0] = 0.5


def test_invalid_prediction_index():
    nodes = [
        NodeSpec("a", (TargetTerm(ObservationBit(0)),)),
        NodeSpec("b", (TargetTerm(NextPrediction(5)),)),
    ]
    with pytest.raises(QuestionNetError, match=r"node 1: prediction index out of range"):
        QuestionNet(nodes, 8)


def test_invalid_observation_bit():
    with pytest.raises(QuestionNetError, match=r"node 0: observation bit index"):
        QuestionNet([NodeSpec("a", (TargetTerm(ObservationBit(8)),))], 8)


def test_invalid_nodes():
    with pytest.raises(QuestionNetError, match="duplicate label"):
        QuestionNet(
            [
                NodeSpec("a", (TargetTerm(ObservationBit(0)),)),
                NodeSpec("a", (TargetTerm(ObservationBit(1)),)),
            ],
            8,
        )
    with pytest.raises(QuestionNetError, match="unknown action"):
        QuestionNet([NodeSpec("a", (TargetTerm(ObservationBit(0)),), action_is(2))], 8)
    with pytest.raises(QuestionNetError):
        QuestionNet([], 8)


def test_probability_semantics():
    convex = NodeSpec("a", (TargetTerm(ObservationBit(0), 0.5), TargetTerm(NextPrediction(0), 0.5)))
    scaled = NodeSpec("b", (TargetTerm(ObservationBit(0), 2.0),))
    assert convex.has_probability_semantics()
    assert not scaled.has_probability_semantics()
    # Accepted with a warning only.
    assert QuestionNet([scaled], 8).n == 1


def test_node_depths(figure_qnet):
    assert node_depths(build_chain(4)) == [1, 2, 3, 4]
    assert node_depths(build_action_tree("LR", 3)) == [1] * 2 + [2] * 4 + [3] * 8
    # n4 is discounted (self-referential); n7 and n8 read it.
    assert node_depths(figure_qnet) == [1, 2, 3, None, 1, 1, None, None]


def test_node_index(tree2):
    assert tree2.node_index("RL") == 4
    with pytest.raises(ValueError):
        tree2.node_index("LLL")
    assert tree2.nodes[0].condition != ALWAYS


def test_probability_targets_stay_in_unit_interval(random_qnet):
    rng = np.random.default_rng(11)
    for _ in range(100):
        q = random_qnet(rng, probability=True)
        assert all(node.has_probability_semantics() for node in q.nodes)
        for o_next in (rng.random(q.observation_width), rng.integers(0, 2, q.observation_width)):
            z = compute_targets(q, o_next, rng.random(q.n))
            assert np.all(z >= -1e-12) and np.all(z <= 1 + 1e-12)
