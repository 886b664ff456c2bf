# SPDX-FileCopyrightText: Copyright (c) 2026 Cooper Dalrymple
#
# SPDX-License-Identifier: Unlicense

import json
import os

import numpy as np
import pytest

import dense

PRESETS = os.path.join(os.path.dirname(__file__), "..", "presets")

def test_toy_forward(toy):
    assert toy.forward([1.0, -1.0]) == pytest.approx([2.0])
    assert toy.forward([2.0, 3.0]) == pytest.approx([48.0])

def test_batch_matches_single(toy, rng):
    x = rng.uniform(-2.0, 2.0, size=(16, 2))
    batch = toy.forward(x)
    assert batch.shape == (16, 1)
    for row, out in zip(x, batch):
        assert toy.forward(row) == pytest.approx(out)

def test_zero_net_outputs_bias():
    net = dense.DenseNet([
        dense.Layer(np.zeros((4, 9)), np.zeros(4)),
        dense.Layer(np.zeros((3, 4)), [0.5, -1.0, 2.0], dense.IDENTITY),
    ])
    assert net.forward(np.ones(9)) == pytest.approx([0.5, -1.0, 2.0])

def test_identity_net():
    net = dense.DenseNet([dense.Layer(np.eye(3), np.zeros(3), dense.IDENTITY)])
    x = np.array([0.1, -0.2, 0.3])
    assert net.forward(x) == pytest.approx(x)
    grads, input_grad = net.backward(np.array([1.0, 2.0, 3.0]))
    assert input_grad == pytest.approx([1.0, 2.0, 3.0])
    assert grads[0] == pytest.approx(np.outer([1.0, 2.0, 3.0], x))

def test_shape_errors(toy):
    with pytest.raises(dense.ShapeError):
        toy.forward(np.ones(3))
    with pytest.raises(dense.ShapeError):
        dense.DenseNet([dense.Layer(np.ones((2, 2)), np.zeros(2)), dense.Layer(np.ones((1, 3)), np.zeros(1))])
    with pytest.raises(dense.ShapeError):
        dense.Layer(np.ones((2, 2)), np.zeros(3))
    with pytest.raises(dense.ShapeError):
        dense.Layer(np.ones((2, 2)), np.zeros(2), "tanh")

def test_backward_needs_forward(toy):
    with pytest.raises(dense.NoForwardCacheError):
        toy.backward(np.ones(1))

def test_predict_keeps_cache(toy):
    toy.forward([1.0, -1.0])
    toy.predict([2.0, 3.0])
    grads, input_grad = toy.backward(np.ones(1))
    # Gradient of the first input point, hidden unit 2 inactive
    assert input_grad == pytest.approx([6.0, 10.0])

def test_gradients_match_finite_differences(rng):
    net = dense.make_net((9, 8, 8, 3), rng)
    x = rng.uniform(0.0, 1.0, size=(5, 9))
    upstream = rng.normal(size=(5, 3))

    def loss() -> float:
        return float(np.sum(net.forward(x) * upstream))

    loss()
    grads, input_grad = net.backward(upstream)
    eps = 1e-6
    for param, grad in zip(net.parameters(), grads):
        flat = param.reshape(-1)
        numeric = np.zeros(flat.size)
        for i in rng.choice(flat.size, size=min(flat.size, 10), replace=False):
            saved = flat[i]
            flat[i] = saved + eps
            up = loss()
            flat[i] = saved - eps
            down = loss()
            flat[i] = saved
            numeric[i] = (up - down) / (2 * eps)
            assert abs(numeric[i] - grad.reshape(-1)[i]) <= 1e-5 * max(1.0, np.linalg.norm(grad))

    numeric = np.zeros_like(x)
    for i in range(x.shape[0]):
        for j in range(x.shape[1]):
            saved = x[i, j]
            x[i, j] = saved + eps
            up = loss()
            x[i, j] = saved - eps
            down = loss()
            x[i, j] = saved
            numeric[i, j] = (up - down) / (2 * eps)
    assert np.linalg.norm(numeric - input_grad) <= 1e-5 * max(1.0, np.linalg.norm(input_grad))

def test_make_net_shapes(rng):
    net = dense.make_net((9, 32, 32, 3), rng, out_scale=0.01)
    assert net.topology == (9, 32, 32, 3)
    assert [layer.activation for layer in net.layers] == [dense.RELU, dense.RELU, dense.IDENTITY]
    assert np.all(net.layers[0].bias == 0.0)
    assert np.abs(net.layers[-1].weight).max() <= 0.01 * np.sqrt(6.0 / 32)

def test_copy_is_independent(toy):
    other = toy.copy()
    other.layers[0].weight[0, 0] = 100.0
    assert toy.forward([1.0, -1.0]) == pytest.approx([2.0])

## Policy head

def test_softmax():
    probs = dense.softmax([1000.0, 1000.0, 1000.0])
    assert probs == pytest.approx([1 / 3] * 3)
    assert np.exp(dense.log_softmax([1.0, 2.0, 3.0])) == pytest.approx(dense.softmax([1.0, 2.0, 3.0]))
    assert dense.softmax(np.zeros((4, 3))).sum(axis=1) == pytest.approx(np.ones(4))

## Optimizer

def test_adam_first_step_moves_by_learning_rate():
    param = np.array([1.0, -1.0])
    adam = dense.Adam([param], learning_rate=0.1)
    adam.update([param], [np.array([2.0, -0.5])])
    assert param == pytest.approx([0.9, -0.9], abs=1e-6)
    assert adam.step_count == 1

def test_adam_minimizes_quadratic():
    param = np.array([3.0, -2.0])
    adam = dense.Adam([param], learning_rate=0.05)
    for i in range(2000):
        adam.update([param], [2 * param])
    assert param == pytest.approx([0.0, 0.0], abs=5e-2)

def test_adam_shape_mismatch():
    adam = dense.Adam([np.zeros(2)])
    with pytest.raises(dense.ShapeError):
        adam.update([np.zeros(2)], [np.zeros(3)])

## Serialization

def test_save_load_exact(tmp_path, rng):
    net = dense.make_net((9, 32, 32, 3), rng)
    path = str(tmp_path / "net.json")
    dense.save_net(net, path)
    loaded = dense.load_net(path)
    for a, b in zip(net.parameters(), loaded.parameters()):
        assert np.array_equal(a, b)
    x = rng.uniform(size=9)
    assert np.array_equal(net.forward(x), loaded.forward(x))

def test_topology_mismatch(tmp_path, toy):
    data = {"format": dense.FORMAT, "version": dense.VERSION, "network": dense.net_to_dict(toy)}
    data["network"]["topology"]["layers"][0][0] = 3
    path = tmp_path / "net.json"
    path.write_text(json.dumps(data))
    with pytest.raises(dense.TopologyError):
        dense.load_net(str(path))

def test_bad_files(tmp_path):
    path = tmp_path / "net.json"
    path.write_text("[1, 2")
    with pytest.raises(dense.CheckpointError):
        dense.load_net(str(path))
    path.write_text(json.dumps({"format": "world"}))
    with pytest.raises(dense.CheckpointError):
        dense.load_net(str(path))
    path.write_text(json.dumps({"format": dense.FORMAT, "version": 99, "network": {}}))
    with pytest.raises(dense.CheckpointError):
        dense.load_net(str(path))
    assert issubclass(dense.CheckpointError, ValueError)
    assert not issubclass(dense.CheckpointError, OSError)
    with pytest.raises(OSError):
        dense.load_net(str(tmp_path / "missing.json"))

def test_toy_fixture_file(toy):
    net = dense.load_net(os.path.join(PRESETS, "toy_dnn.json"))
    assert net.topology == toy.topology
    for x in ([1.0, -1.0], [2.0, 3.0], [0.5, 0.5]):
        assert net.forward(x) == pytest.approx(toy.forward(x))

def test_input_gradients_over_random_nets():
    rng = np.random.default_rng(17)
    for i in range(100):
        sizes = tuple(int(v) for v in rng.integers(2, 10, size=int(rng.integers(2, 5))))
        net = dense.make_net(sizes, rng)
        for layer in net.layers:
            layer.bias += rng.normal(scale=0.1, size=layer.outputs)
        x = rng.uniform(-1.0, 1.0, size=sizes[0])
        upstream = rng.normal(size=sizes[-1])
        net.forward(x)
        _, analytic = net.backward(upstream)
        numeric = np.array([
            (np.dot(net.predict(x + e * 1e-6), upstream) - np.dot(net.predict(x - e * 1e-6), upstream)) / 2e-6
            for e in np.eye(sizes[0])
        ])
        assert np.linalg.norm(numeric - analytic) <= 1e-4 * max(np.linalg.norm(analytic), 1e-3)
