"""Differentiable layers: dense, GraphSAGE-style message passing, 3x3 convs.

Weights start Xavier-uniform; a layer can be marked `final` to scale its
initial weights by 0.1 so freshly built heads emit near-zero values. No
normalization layers anywhere by design.
"""

from __future__ import annotations

from typing import Iterator, Optional

import numpy as np

from ..errors import InvalidArgumentError
from . import tensor as T
from .tensor import Tensor


class Module:
    """Tiny parameter container with named traversal."""

    def named_parameters(self, prefix: str = "") -> Iterator[tuple[str, Tensor]]:
        for key, value in vars(self).items():
            name = f"{prefix}{key}"
            if isinstance(value, Tensor) and value.requires_grad:
                yield name, value
            elif isinstance(value, Module):
                yield from value.named_parameters(f"{name}.")
            elif isinstance(value, (list, tuple)):
                for i, item in enumerate(value):
                    if isinstance(item, Module):
                        yield from item.named_parameters(f"{name}.{i}.")
                    elif isinstance(item, Tensor) and item.requires_grad:
                        yield f"{name}.{i}", item

    def parameters(self) -> list[Tensor]:
        return [p for _, p in self.named_parameters()]

    def num_parameters(self) -> int:
        return sum(p.data.size for p in self.parameters())

    def state_dict(self) -> dict[str, np.ndarray]:
        return {name: p.data.copy() for name, p in self.named_parameters()}

    def load_state_dict(self, state: dict[str, np.ndarray]) -> None:
        params = dict(self.named_parameters())
        missing = set(params) ^ set(state)
        if missing:
            raise InvalidArgumentError(f"parameter names do not match: {sorted(missing)}")
        for name, p in params.items():
            arr = np.asarray(state[name], dtype=p.data.dtype)
            if arr.shape != p.data.shape:
                raise InvalidArgumentError(f"shape mismatch for {name}")
            p.data = arr.copy()

    def to_dtype(self, dtype) -> "Module":
        for _, p in self.named_parameters():
            p.data = p.data.astype(dtype)
        return self


def xavier_uniform(rng: np.random.Generator, fan_in: int, fan_out: int, shape, dtype, scale: float = 1.0):
    bound = scale * np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-bound, bound, size=shape).astype(dtype)


def _apply_activation(x: Tensor, activation: Optional[str]) -> Tensor:
    if activation is None:
        return x
    if activation == "relu":
        return T.relu(x)
    if activation == "tanh":
        return T.tanh(x)
    if activation == "tanh2":
        return T.mul(T.tanh(x), 2.0)
    raise InvalidArgumentError(f"unknown activation {activation!r}")


class Dense(Module):
    def __init__(self, fan_in: int, fan_out: int, rng: np.random.Generator,
                 activation: Optional[str] = None, final: bool = False, dtype=np.float32):
        scale = 0.1 if final else 1.0
        self.w = Tensor(xavier_uniform(rng, fan_in, fan_out, (fan_in, fan_out), dtype, scale), requires_grad=True)
        self.b = Tensor(np.zeros(fan_out, dtype=dtype), requires_grad=True)
        self.activation = activation

    def __call__(self, x: Tensor) -> Tensor:
        if x.data.ndim == 2 and x.data.shape[1] != self.w.data.shape[0]:
            raise InvalidArgumentError(
                f"dense expects {self.w.data.shape[0]} inputs, got {x.data.shape[1]}")
        return _apply_activation(T.add(T.matmul(x, self.w), self.b), self.activation)


class SageConv(Module):
    """h'_v = act(W_self h_v + W_neigh mean_{u in N(v)} h_u + b)."""

    def __init__(self, fan_in: int, fan_out: int, rng: np.random.Generator,
                 activation: Optional[str] = "relu", final: bool = False, dtype=np.float32):
        scale = 0.1 if final else 1.0
        self.w_self = Tensor(xavier_uniform(rng, fan_in, fan_out, (fan_in, fan_out), dtype, scale), requires_grad=True)
        self.w_neigh = Tensor(xavier_uniform(rng, fan_in, fan_out, (fan_in, fan_out), dtype, scale), requires_grad=True)
        self.b = Tensor(np.zeros(fan_out, dtype=dtype), requires_grad=True)
        self.activation = activation

    def __call__(self, h: Tensor, src: np.ndarray, dst: np.ndarray) -> Tensor:
        n = h.data.shape[0]
        agg = T.neighbor_mean(h, src, dst, n)
        out = T.add(T.add(T.matmul(h, self.w_self), T.matmul(agg, self.w_neigh)), self.b)
        return _apply_activation(out, self.activation)


class SageStack(Module):
    def __init__(self, widths: list[int], rng: np.random.Generator,
                 out_activation: Optional[str] = "relu", final: bool = False, dtype=np.float32):
        layers = []
        for i in range(len(widths) - 1):
            last = i == len(widths) - 2
            layers.append(SageConv(
                widths[i], widths[i + 1], rng,
                activation=out_activation if last else "relu",
                final=final and last, dtype=dtype))
        self.layers = layers

    def __call__(self, h: Tensor, src: np.ndarray, dst: np.ndarray) -> Tensor:
        for layer in self.layers:
            h = layer(h, src, dst)
        return h


class MLP(Module):
    def __init__(self, widths: list[int], rng: np.random.Generator,
                 out_activation: Optional[str] = None, final: bool = False, dtype=np.float32):
        layers = []
        for i in range(len(widths) - 1):
            last = i == len(widths) - 2
            layers.append(Dense(
                widths[i], widths[i + 1], rng,
                activation=out_activation if last else "relu",
                final=final and last, dtype=dtype))
        self.layers = layers

    def __call__(self, x: Tensor) -> Tensor:
        for layer in self.layers:
            x = layer(x)
        return x


class Conv3x3(Module):
    def __init__(self, cin: int, cout: int, rng: np.random.Generator,
                 activation: Optional[str] = None, final: bool = False, dtype=np.float32):
        fan_in, fan_out = cin * 9, cout * 9
        scale = 0.1 if final else 1.0
        self.w = Tensor(xavier_uniform(rng, fan_in, fan_out, (cout, cin, 3, 3), dtype, scale), requires_grad=True)
        self.b = Tensor(np.zeros(cout, dtype=dtype), requires_grad=True)
        self.activation = activation

    def __call__(self, x: Tensor) -> Tensor:
        if x.data.ndim != 4 or x.data.shape[1] != self.w.data.shape[1]:
            raise InvalidArgumentError("conv3x3 expects (B, C, H, W) input with matching channels")
        return _apply_activation(T.conv3x3(x, self.w, self.b), self.activation)


class Conv1x1(Module):
    def __init__(self, cin: int, cout: int, rng: np.random.Generator,
                 activation: Optional[str] = None, final: bool = False, dtype=np.float32):
        scale = 0.1 if final else 1.0
        self.w = Tensor(xavier_uniform(rng, cin, cout, (cout, cin), dtype, scale), requires_grad=True)
        self.b = Tensor(np.zeros(cout, dtype=dtype), requires_grad=True)
        self.activation = activation

    def __call__(self, x: Tensor) -> Tensor:
        return _apply_activation(T.conv1x1(x, self.w, self.b), self.activation)


class ResidualBlock(Module):
    """x + conv(relu(conv(x))), channel-preserving."""

    def __init__(self, channels: int, rng: np.random.Generator, dtype=np.float32):
        self.conv1 = Conv3x3(channels, channels, rng, activation="relu", dtype=dtype)
        self.conv2 = Conv3x3(channels, channels, rng, activation=None, dtype=dtype)

    def __call__(self, x: Tensor) -> Tensor:
        return T.relu(T.add(x, self.conv2(self.conv1(x))))


def readout(h: Tensor) -> Tensor:
    """Concatenated mean, max, min, sum of node embeddings, in that order."""
    if h.data.shape[0] == 0:
        raise InvalidArgumentError("readout of an empty graph")
    return T.concat([T.tmean(h, axis=0), T.tmax0(h), T.tmin0(h), T.tsum(h, axis=0)])
