"""Minimal hand-differentiated feed-forward networks.

Dense stacks with relu/tanh/identity activations, a linear classifier
head or a dense decoder head, fan-in-scaled uniform initialization from
a Philox stream, and Adam/SGD updates. Everything is float64 numpy and
bit-reproducible for a given seed.
"""

from dataclasses import dataclass

import numpy as np

from .rng import STREAM_INIT, stream

ACTIVATIONS = ("relu", "tanh", "identity")


@dataclass(frozen=True)
class ClassifierHead:
    num_classes: int


@dataclass(frozen=True)
class DecoderHead:
    output_dim: int
    layers: tuple = ()  # hidden (width, activation) pairs before the linear output


@dataclass(frozen=True)
class ModelSpec:
    input_dim: int
    encoder_layers: tuple  # (width, activation) pairs; last width is the embedding
    embed_dim: int
    head: object

    def __post_init__(self):
        if self.embed_dim < 1:
            raise ValueError("embed_dim must be >= 1")
        if not self.encoder_layers:
            raise ValueError("encoder needs at least one layer")
        for width, act in self.encoder_layers:
            if act not in ACTIVATIONS:
                raise ValueError(f"unknown activation {act!r}")
            if width < 1:
                raise ValueError("layer widths must be positive")
        if self.encoder_layers[-1][0] != self.embed_dim:
            raise ValueError(
                f"final encoder width {self.encoder_layers[-1][0]} "
                f"must equal embed_dim {self.embed_dim}"
            )
        if isinstance(self.head, DecoderHead):
            for width, act in self.head.layers:
                if act not in ACTIVATIONS:
                    raise ValueError(f"unknown activation {act!r}")


def encoder_plan(spec):
    """(fan_in, fan_out, activation) triples for the encoder stack."""
    plan = []
    fan_in = spec.input_dim
    for width, act in spec.encoder_layers:
        plan.append((fan_in, width, act))
        fan_in = width
    return plan


def head_plan(spec):
    if isinstance(spec.head, ClassifierHead):
        return [(spec.embed_dim, spec.head.num_classes, "identity")]
    plan = []
    fan_in = spec.embed_dim
    for width, act in spec.head.layers:
        plan.append((fan_in, width, act))
        fan_in = width
    plan.append((fan_in, spec.head.output_dim, "identity"))
    return plan


def full_plan(spec):
    return encoder_plan(spec) + head_plan(spec)


def init_model(spec, seed):
    """Parameters as a list of [W, b]; W ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)), b = 0."""
    rng = stream(seed, STREAM_INIT)
    params = []
    for fan_in, fan_out, _ in full_plan(spec):
        bound = 1.0 / np.sqrt(fan_in)
        W = rng.uniform(-bound, bound, size=(fan_in, fan_out))
        params.append([W, np.zeros(fan_out)])
    return params


def _act(name, pre):
    if name == "relu":
        return np.maximum(pre, 0.0)
    if name == "tanh":
        return np.tanh(pre)
    return pre


def _act_grad(name, pre, post):
    if name == "relu":
        return (pre > 0).astype(float)
    if name == "tanh":
        return 1.0 - post**2
    return np.ones_like(pre)


def stack_forward(plan, params, x):
    caches = []
    h = np.asarray(x, dtype=float)
    for (_, _, act), (W, b) in zip(plan, params):
        pre = h @ W + b
        post = _act(act, pre)
        caches.append((h, pre, post))
        h = post
    return h, caches


def stack_backward(plan, params, caches, dout):
    """Returns (dx, grads) with grads aligned to params."""
    grads = [None] * len(plan)
    dh = dout
    for i in range(len(plan) - 1, -1, -1):
        _, _, act = plan[i]
        W, _ = params[i]
        hin, pre, post = caches[i]
        dpre = dh * _act_grad(act, pre, post)
        grads[i] = [hin.T @ dpre, dpre.sum(axis=0)]
        dh = dpre @ W.T
    return dh, grads


def encode(spec, params, x):
    plan = encoder_plan(spec)
    z, _ = stack_forward(plan, params[: len(plan)], x)
    return z


def model_forward(spec, params, x):
    ep = encoder_plan(spec)
    hp = head_plan(spec)
    z, enc_caches = stack_forward(ep, params[: len(ep)], x)
    out, head_caches = stack_forward(hp, params[len(ep) :], z)
    return z, out, enc_caches, head_caches


def softmax_cross_entropy(logits, labels):
    """Mean cross-entropy and its gradient w.r.t. the logits."""
    shifted = logits - logits.max(axis=1, keepdims=True)
    logz = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    logp = shifted - logz
    b = logits.shape[0]
    loss = -float(logp[np.arange(b), labels].mean())
    dlogits = np.exp(logp)
    dlogits[np.arange(b), labels] -= 1.0
    return loss, dlogits / b


def mse_loss(out, ref):
    """Mean squared error over all entries and its gradient w.r.t. out."""
    diff = out - ref
    loss = float(np.mean(diff**2))
    return loss, 2.0 * diff / diff.size


class Sgd:
    def __init__(self, params, learn_rate):
        self.lr = learn_rate

    def step(self, params, grads):
        for p, g in zip(params, grads):
            p[0] -= self.lr * g[0]
            p[1] -= self.lr * g[1]


class Adam:
    def __init__(self, params, learn_rate, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr = learn_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = [[np.zeros_like(W), np.zeros_like(b)] for W, b in params]
        self.v = [[np.zeros_like(W), np.zeros_like(b)] for W, b in params]

    def step(self, params, grads):
        self.t += 1
        c1 = 1.0 - self.beta1**self.t
        c2 = 1.0 - self.beta2**self.t
        for p, g, m, v in zip(params, grads, self.m, self.v):
            for j in range(2):
                m[j] = self.beta1 * m[j] + (1.0 - self.beta1) * g[j]
                v[j] = self.beta2 * v[j] + (1.0 - self.beta2) * g[j] ** 2
                p[j] -= self.lr * (m[j] / c1) / (np.sqrt(v[j] / c2) + self.eps)


def make_optimizer(name, params, learn_rate):
    if name == "adam":
        return Adam(params, learn_rate)
    if name == "sgd":
        return Sgd(params, learn_rate)
    raise ValueError(f"unknown optimizer {name!r}")
