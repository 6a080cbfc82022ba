"""Minimal reverse-mode autodiff on numpy arrays.

Storage defaults to float32 with float64 accumulation inside reductions;
gradient checks run the whole stack in float64. Reduction order is fixed, so
identical seeds and inputs give bitwise-identical outputs and gradients.
"""

from __future__ import annotations

from contextlib import contextmanager
from typing import Optional, Sequence

import numpy as np

from ..errors import InvalidArgumentError

_grad_enabled = True


@contextmanager
def no_grad():
    global _grad_enabled
    prev = _grad_enabled
    _grad_enabled = False
    try:
        yield
    finally:
        _grad_enabled = prev


class Tensor:
    __slots__ = ("data", "grad", "requires_grad", "_backward", "_children")

    def __init__(self, data, requires_grad: bool = False, dtype=None):
        if isinstance(data, Tensor):
            data = data.data
        self.data = np.asarray(data, dtype=dtype if dtype is not None else None)
        if self.data.dtype not in (np.float32, np.float64):
            self.data = self.data.astype(np.float32)
        self.grad: Optional[np.ndarray] = None
        self.requires_grad = requires_grad
        self._backward = None
        self._children: tuple = ()

    @property
    def shape(self):
        return self.data.shape

    @property
    def dtype(self):
        return self.data.dtype

    def item(self) -> float:
        return float(self.data)

    def numpy(self) -> np.ndarray:
        return self.data

    def zero_grad(self) -> None:
        self.grad = None

    def _accumulate(self, g: np.ndarray) -> None:
        if self.grad is None:
            self.grad = np.zeros_like(self.data)
        self.grad += g

    def backward(self, grad: Optional[np.ndarray] = None) -> None:
        if grad is None:
            if self.data.size != 1:
                raise InvalidArgumentError("backward() without a seed needs a scalar")
            grad = np.ones_like(self.data)
        topo: list[Tensor] = []
        seen: set[int] = set()
        stack: list[tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, processed = stack.pop()
            if processed:
                topo.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for child in node._children:
                stack.append((child, False))
        self._accumulate(np.asarray(grad, dtype=self.data.dtype))
        for node in reversed(topo):
            if node._backward is not None and node.grad is not None:
                node._backward(node.grad)

    # operator sugar -------------------------------------------------------

    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __mul__(self, other):
        return mul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return mul(self, -1.0)

    def __sub__(self, other):
        return add(self, mul(other, -1.0) if isinstance(other, Tensor) else -np.asarray(other))

    def __rsub__(self, other):
        return add(mul(self, -1.0), other)

    def __matmul__(self, other):
        return matmul(self, other)

    def __repr__(self):
        return f"Tensor(shape={self.data.shape}, dtype={self.data.dtype}, grad={self.grad is not None})"


def _wrap(x, like: Tensor) -> Tensor:
    if isinstance(x, Tensor):
        return x
    return Tensor(np.asarray(x, dtype=like.data.dtype))


def _needs_grad(*tensors: Tensor) -> bool:
    return _grad_enabled and any(t.requires_grad for t in tensors)


def _make(data: np.ndarray, children: Sequence[Tensor], backward) -> Tensor:
    out = Tensor.__new__(Tensor)
    out.data = data
    out.grad = None
    out.requires_grad = _needs_grad(*children)
    if out.requires_grad:
        out._children = tuple(children)
        out._backward = backward
    else:
        out._children = ()
        out._backward = None
    return out


def _unbroadcast(grad: np.ndarray, shape: tuple) -> np.ndarray:
    """Sum grad down to `shape` after numpy broadcasting."""
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, s in enumerate(shape) if s == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad.astype(grad.dtype, copy=False)


def add(a: Tensor, b) -> Tensor:
    b = _wrap(b, a)
    data = a.data + b.data

    def backward(g):
        if a.requires_grad:
            a._accumulate(_unbroadcast(g, a.data.shape))
        if b.requires_grad:
            b._accumulate(_unbroadcast(g, b.data.shape))

    return _make(data, (a, b), backward)


def mul(a: Tensor, b) -> Tensor:
    b = _wrap(b, a)
    data = a.data * b.data

    def backward(g):
        if a.requires_grad:
            a._accumulate(_unbroadcast(g * b.data, a.data.shape))
        if b.requires_grad:
            b._accumulate(_unbroadcast(g * a.data, b.data.shape))

    return _make(data, (a, b), backward)


def matmul(a: Tensor, b: Tensor) -> Tensor:
    data = a.data @ b.data

    def backward(g):
        if a.requires_grad:
            a._accumulate(g @ b.data.T if b.data.ndim == 2 else np.outer(g, b.data))
        if b.requires_grad:
            b._accumulate(a.data.T @ g)

    return _make(data, (a, b), backward)


def relu(a: Tensor) -> Tensor:
    data = np.maximum(a.data, 0)

    def backward(g):
        a._accumulate(g * (a.data > 0))

    return _make(data, (a,), backward)


def tanh(a: Tensor) -> Tensor:
    data = np.tanh(a.data)

    def backward(g):
        a._accumulate(g * (1.0 - data * data))

    return _make(data, (a,), backward)


def square(a: Tensor) -> Tensor:
    data = a.data * a.data

    def backward(g):
        a._accumulate(g * 2.0 * a.data)

    return _make(data, (a,), backward)


def tsum(a: Tensor, axis=None) -> Tensor:
    data = a.data.sum(axis=axis, dtype=np.float64).astype(a.data.dtype)

    def backward(g):
        if axis is None:
            a._accumulate(np.broadcast_to(g, a.data.shape).astype(a.data.dtype))
        else:
            a._accumulate(np.broadcast_to(np.expand_dims(g, axis), a.data.shape).astype(a.data.dtype))

    return _make(data, (a,), backward)


def tmean(a: Tensor, axis=None) -> Tensor:
    count = a.data.size if axis is None else a.data.shape[axis]
    return mul(tsum(a, axis=axis), 1.0 / count)


def _extreme0(a: Tensor, mode: str) -> Tensor:
    """Max or min over axis 0 with gradient routed to the first attaining row."""
    if a.data.shape[0] == 0:
        raise InvalidArgumentError("reduction over an empty node set")
    fn = np.max if mode == "max" else np.min
    arg = np.argmax(a.data, axis=0) if mode == "max" else np.argmin(a.data, axis=0)
    data = fn(a.data, axis=0)

    def backward(g):
        gx = np.zeros_like(a.data)
        if a.data.ndim == 1:
            gx[arg] = g
        else:
            gx[arg, np.arange(a.data.shape[1])] = g
        a._accumulate(gx)

    return _make(data, (a,), backward)


def tmax0(a: Tensor) -> Tensor:
    return _extreme0(a, "max")


def tmin0(a: Tensor) -> Tensor:
    return _extreme0(a, "min")


def concat(parts: Sequence[Tensor]) -> Tensor:
    data = np.concatenate([p.data for p in parts])
    sizes = [p.data.shape[0] for p in parts]

    def backward(g):
        off = 0
        for p, s in zip(parts, sizes):
            if p.requires_grad:
                p._accumulate(g[off:off + s])
            off += s

    return _make(data, tuple(parts), backward)


def gather_rows(a: Tensor, idx: np.ndarray) -> Tensor:
    idx = np.asarray(idx, dtype=np.int64)
    data = a.data[idx]

    def backward(g):
        gx = np.zeros_like(a.data)
        np.add.at(gx, idx, g)
        a._accumulate(gx)

    return _make(data, (a,), backward)


def neighbor_mean(x: Tensor, src: np.ndarray, dst: np.ndarray, num_nodes: int) -> Tensor:
    """Per-node mean of neighbor features given a directed edge list
    (src -> dst aggregates src features at dst). Isolated nodes get zeros."""
    if len(src) and (src.max() >= num_nodes or dst.max() >= num_nodes):
        raise InvalidArgumentError("edge index out of range")
    deg = np.bincount(dst, minlength=num_nodes).astype(np.float64)
    scale = np.where(deg > 0, 1.0 / np.maximum(deg, 1.0), 0.0)
    acc = np.zeros((num_nodes, x.data.shape[1]), dtype=np.float64)
    np.add.at(acc, dst, x.data[src].astype(np.float64))
    data = (acc * scale[:, None]).astype(x.data.dtype)

    def backward(g):
        gmsg = (g * scale[:, None].astype(g.dtype))[dst]
        gx = np.zeros_like(x.data)
        np.add.at(gx, src, gmsg)
        x._accumulate(gx)

    return _make(data, (x,), backward)


def conv3x3(x: Tensor, w: Tensor, b: Optional[Tensor] = None) -> Tensor:
    """Same-padded 3x3 cross-correlation. x: (B,C,H,W), w: (Cout,C,3,3)."""
    B, C, H, W = x.data.shape
    cout = w.data.shape[0]
    xp = np.zeros((B, C, H + 2, W + 2), dtype=x.data.dtype)
    xp[:, :, 1:H + 1, 1:W + 1] = x.data
    cols = np.empty((B, H, W, C, 9), dtype=x.data.dtype)
    for k in range(9):
        di, dj = divmod(k, 3)
        cols[..., k] = xp[:, :, di:di + H, dj:dj + W].transpose(0, 2, 3, 1)
    flat = cols.reshape(B * H * W, C * 9)
    wmat = w.data.reshape(cout, C * 9).T
    out = flat @ wmat
    if b is not None:
        out = out + b.data
    data = out.reshape(B, H, W, cout).transpose(0, 3, 1, 2).copy()

    def backward(g):
        gflat = g.transpose(0, 2, 3, 1).reshape(B * H * W, cout)
        if w.requires_grad:
            gw = flat.T @ gflat
            w._accumulate(gw.T.reshape(cout, C, 3, 3))
        if b is not None and b.requires_grad:
            b._accumulate(gflat.sum(axis=0, dtype=np.float64).astype(b.data.dtype))
        if x.requires_grad:
            gcols = (gflat @ wmat.T).reshape(B, H, W, C, 9)
            gxp = np.zeros_like(xp)
            for k in range(9):
                di, dj = divmod(k, 3)
                gxp[:, :, di:di + H, dj:dj + W] += gcols[..., k].transpose(0, 3, 1, 2)
            x._accumulate(gxp[:, :, 1:H + 1, 1:W + 1])

    children = (x, w) if b is None else (x, w, b)
    return _make(data, children, backward)


def conv1x1(x: Tensor, w: Tensor, b: Optional[Tensor] = None) -> Tensor:
    """Pointwise convolution. x: (B,C,H,W), w: (Cout,C)."""
    B, C, H, W = x.data.shape
    cout = w.data.shape[0]
    flat = x.data.transpose(0, 2, 3, 1).reshape(-1, C)
    out = flat @ w.data.T
    if b is not None:
        out = out + b.data
    data = out.reshape(B, H, W, cout).transpose(0, 3, 1, 2).copy()

    def backward(g):
        gflat = g.transpose(0, 2, 3, 1).reshape(-1, cout)
        if w.requires_grad:
            w._accumulate(gflat.T @ flat)
        if b is not None and b.requires_grad:
            b._accumulate(gflat.sum(axis=0, dtype=np.float64).astype(b.data.dtype))
        if x.requires_grad:
            x._accumulate((gflat @ w.data).reshape(B, H, W, C).transpose(0, 3, 1, 2))

    children = (x, w) if b is None else (x, w, b)
    return _make(data, children, backward)


def reshape(a: Tensor, shape) -> Tensor:
    data = a.data.reshape(shape)

    def backward(g):
        a._accumulate(g.reshape(a.data.shape))

    return _make(data, (a,), backward)


def huber(diff: Tensor, delta: float = 1.0) -> Tensor:
    """Elementwise Huber loss of a residual."""
    absd = np.abs(diff.data)
    quad = absd <= delta
    data = np.where(quad, 0.5 * diff.data * diff.data, delta * (absd - 0.5 * delta)).astype(diff.data.dtype)

    def backward(g):
        diff._accumulate(g * np.where(quad, diff.data, delta * np.sign(diff.data)).astype(diff.data.dtype))

    return _make(data, (diff,), backward)


def softmax(logits: Tensor) -> Tensor:
    """Softmax over a 1-D logit vector."""
    z = logits.data - logits.data.max()
    e = np.exp(z)
    data = (e / e.sum(dtype=np.float64)).astype(logits.data.dtype)

    def backward(g):
        dot = float((g * data).sum(dtype=np.float64))
        logits._accumulate((data * (g - dot)).astype(logits.data.dtype))

    return _make(data, (logits,), backward)


def cross_entropy(logits: Tensor, target_probs: np.ndarray) -> Tensor:
    """-sum(pi * log softmax(logits)) for a 1-D logit vector."""
    target = np.asarray(target_probs, dtype=np.float64)
    z = logits.data.astype(np.float64)
    z = z - z.max()
    logsumexp = np.log(np.exp(z).sum())
    logp = z - logsumexp
    data = np.asarray(-(target * logp).sum(), dtype=logits.data.dtype)
    p = np.exp(logp)

    def backward(g):
        logits._accumulate((g * (p * target.sum() - target)).astype(logits.data.dtype))

    return _make(data, (logits,), backward)


def check_finite(x: Tensor, where: str) -> Tensor:
    if not np.isfinite(x.data).all():
        raise InvalidArgumentError(f"non-finite values at {where}")
    return x
