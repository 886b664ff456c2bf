# SPDX-FileCopyrightText: Copyright (c) 2026 Cooper Dalrymple
#
# SPDX-License-Identifier: Unlicense

"""
NAME
    dense

DESCRIPTION
    Fully connected networks made of weighted-sum layers followed by ReLU
    or identity activations. Forward and backward passes, an Adam
    optimizer and a JSON weight format which round-trips every float
    exactly. Everything is 64-bit.

    import dense
    net = dense.make_net((9, 32, 32, 3), rng)
    y = net.forward(x)
    param_grads, input_grad = net.backward(upstream)
"""

import json
import math
from dataclasses import dataclass

import numpy as np

FORMAT = "dense-net"
VERSION = 1

RELU = "relu"
IDENTITY = "identity"
ACTIVATIONS = (RELU, IDENTITY)

## Errors

class DenseError(Exception):
    pass

class ShapeError(DenseError, ValueError):
    pass

class NoForwardCacheError(DenseError, RuntimeError):
    pass

class CheckpointError(DenseError, ValueError):
    pass

class TopologyError(CheckpointError):
    pass

## Layers

@dataclass
class Layer:
    weight: np.ndarray
    bias: np.ndarray
    activation: str = RELU

    def __post_init__(self):
        self.weight = np.array(self.weight, dtype=np.float64, ndmin=2)
        self.bias = np.array(self.bias, dtype=np.float64).reshape(-1)
        if self.activation not in ACTIVATIONS:
            raise ShapeError("unknown activation {:s}".format(str(self.activation)))
        if self.weight.shape[0] != self.bias.shape[0]:
            raise ShapeError("weight has {:d} rows but bias has {:d} entries".format(self.weight.shape[0], self.bias.shape[0]))

    @property
    def inputs(self) -> int:
        return self.weight.shape[1]

    @property
    def outputs(self) -> int:
        return self.weight.shape[0]

class DenseNet:

    def __init__(self, layers:list):
        if not layers:
            raise ShapeError("a network needs at least one layer")
        for i in range(1, len(layers)):
            if layers[i].inputs != layers[i - 1].outputs:
                raise ShapeError("layer {:d} expects {:d} inputs but layer {:d} produces {:d}".format(
                    i, layers[i].inputs, i - 1, layers[i - 1].outputs
                ))
        self.layers = list(layers)
        self._cache = None

    @property
    def input_dim(self) -> int:
        return self.layers[0].inputs

    @property
    def output_dim(self) -> int:
        return self.layers[-1].outputs

    @property
    def topology(self) -> tuple:
        return (self.input_dim,) + tuple(layer.outputs for layer in self.layers)

    def parameters(self) -> list:
        params = []
        for layer in self.layers:
            params += [layer.weight, layer.bias]
        return params

    def copy(self) -> "DenseNet":
        return DenseNet([Layer(layer.weight.copy(), layer.bias.copy(), layer.activation) for layer in self.layers])

    def _check_input(self, x:np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim not in (1, 2) or x.shape[-1] != self.input_dim:
            raise ShapeError("expected input of dimension {:d}, got shape {:s}".format(self.input_dim, str(x.shape)))
        return x

    def forward(self, x:np.ndarray) -> np.ndarray:
        """Accepts a single vector or a batch of row vectors; caches what backward needs."""
        x = self._check_input(x)
        single = x.ndim == 1
        a = np.atleast_2d(x)
        inputs, pre = [], []
        for layer in self.layers:
            inputs.append(a)
            z = a @ layer.weight.T + layer.bias
            pre.append(z)
            a = np.maximum(z, 0.0) if layer.activation == RELU else z
        self._cache = (inputs, pre, single)
        return a[0] if single else a

    def predict(self, x:np.ndarray) -> np.ndarray:
        """Forward pass that leaves the backward cache untouched."""
        cache = self._cache
        try:
            return self.forward(x)
        finally:
            self._cache = cache

    def backward(self, upstream:np.ndarray) -> tuple[list, np.ndarray]:
        if self._cache is None:
            raise NoForwardCacheError("backward called before forward")
        inputs, pre, single = self._cache
        g = np.atleast_2d(np.asarray(upstream, dtype=np.float64))
        if g.shape != pre[-1].shape:
            raise ShapeError("upstream gradient has shape {:s}, expected {:s}".format(str(g.shape), str(pre[-1].shape)))
        grads = [None] * (2 * len(self.layers))
        for i in reversed(range(len(self.layers))):
            layer = self.layers[i]
            if layer.activation == RELU:
                # Subgradient at 0 is 0
                g = g * (pre[i] > 0.0)
            grads[2 * i] = g.T @ inputs[i]
            grads[2 * i + 1] = g.sum(axis=0)
            g = g @ layer.weight
        return grads, (g[0] if single else g)

## Construction

def make_net(sizes:tuple, rng:np.random.Generator, out_scale:float = 1.0) -> DenseNet:
    """ReLU hidden layers and an identity output layer, He-style fan-in scaled uniform weights, zero biases."""
    if len(sizes) < 2:
        raise ShapeError("need at least input and output sizes")
    layers = []
    for i in range(len(sizes) - 1):
        fan_in, fan_out = sizes[i], sizes[i + 1]
        limit = math.sqrt(6.0 / fan_in)
        last = i == len(sizes) - 2
        if last:
            limit *= out_scale
        layers.append(Layer(
            weight=rng.uniform(-limit, limit, size=(fan_out, fan_in)),
            bias=np.zeros(fan_out),
            activation=IDENTITY if last else RELU,
        ))
    return DenseNet(layers)

def toy_net() -> DenseNet:
    # Two inputs, one weighted-sum layer with ReLU, one output
    return DenseNet([
        Layer([[3.0, 5.0], [-1.0, 1.0]], [3.0, -2.0], RELU),
        Layer([[2.0, -1.0]], [0.0], IDENTITY),
    ])

## Policy head

def softmax(logits:np.ndarray) -> np.ndarray:
    z = np.asarray(logits, dtype=np.float64)
    z = z - np.max(z, axis=-1, keepdims=True)
    e = np.exp(z)
    return e / np.sum(e, axis=-1, keepdims=True)

def log_softmax(logits:np.ndarray) -> np.ndarray:
    z = np.asarray(logits, dtype=np.float64)
    z = z - np.max(z, axis=-1, keepdims=True)
    return z - np.log(np.sum(np.exp(z), axis=-1, keepdims=True))

## Optimizer

class Adam:

    def __init__(self, params:list, learning_rate:float = 3e-4, beta1:float = 0.9, beta2:float = 0.999, eps:float = 1e-8):
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.step_count = 0
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]

    def update(self, params:list, grads:list) -> list:
        """Updates ``params`` in place and returns them."""
        if len(params) != len(self.m) or len(grads) != len(self.m):
            raise ShapeError("expected {:d} parameter arrays".format(len(self.m)))
        for p, g, m in zip(params, grads, self.m):
            if p.shape != m.shape or np.shape(g) != m.shape:
                raise ShapeError("parameter shape {:s} does not match gradient shape {:s}".format(str(p.shape), str(np.shape(g))))
        self.step_count += 1
        t = self.step_count
        for p, g, m, v in zip(params, grads, self.m, self.v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * np.square(g)
            m_hat = m / (1.0 - self.beta1 ** t)
            v_hat = v / (1.0 - self.beta2 ** t)
            p -= self.learning_rate * m_hat / (np.sqrt(v_hat) + self.eps)
        return params

## Serialization

def net_to_dict(net:DenseNet) -> dict:
    return {
        "topology": {
            "input": net.input_dim,
            "layers": [[layer.outputs, layer.activation] for layer in net.layers],
        },
        "layers": [
            {
                "weight": layer.weight.tolist(),
                "bias": layer.bias.tolist(),
                "activation": layer.activation,
            } for layer in net.layers
        ],
    }

def net_from_dict(data:dict) -> DenseNet:
    try:
        topology = data["topology"]
        prev = int(topology["input"])
        if len(topology["layers"]) != len(data["layers"]):
            raise TopologyError("topology lists {:d} layers, file holds {:d}".format(len(topology["layers"]), len(data["layers"])))
        layers = []
        for i, ((size, activation), item) in enumerate(zip(topology["layers"], data["layers"])):
            weight = np.array(item["weight"], dtype=np.float64, ndmin=2)
            bias = np.array(item["bias"], dtype=np.float64)
            if weight.shape != (size, prev) or bias.shape != (size,) or item["activation"] != activation:
                raise TopologyError("layer {:d} does not match the topology header".format(i))
            layers.append(Layer(weight, bias, activation))
            prev = size
        return DenseNet(layers)
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, DenseError):
            raise
        raise CheckpointError("malformed network: {}".format(e)) from e

def save_net(net:DenseNet, path:str) -> None:
    with open(path, "w") as file:
        json.dump({"format": FORMAT, "version": VERSION, "network": net_to_dict(net)}, file)

def read_json(path:str) -> dict:
    try:
        with open(path, "r") as file:
            data = json.load(file)
    except ValueError as e:
        raise CheckpointError("{:s} is not valid JSON: {}".format(path, e)) from e
    if type(data) is not dict or "format" not in data:
        raise CheckpointError("{:s} has no format header".format(path))
    return data

def load_net(path:str) -> DenseNet:
    data = read_json(path)
    if data["format"] != FORMAT:
        raise CheckpointError("{:s} holds {:s}, not a {:s}".format(path, str(data["format"]), FORMAT))
    if data.get("version") != VERSION:
        raise CheckpointError("{:s} has unsupported version {}".format(path, data.get("version")))
    return net_from_dict(data["network"])
