"""Reverse-mode gradient accumulation over a fixed numpy operation set.

The model graph is small and static, so instead of a general autodiff we
implement exactly the operations the encoder and ranker need: matmul,
transpose, add, mul, sigmoid, tanh, relu, softmax, mean, concat, lookup,
log, and clamp. All math is 64-bit.
"""

from __future__ import annotations

import numpy as np


class Tensor:
    """A node in the computation graph wrapping a float64 ndarray.

    Gradients accumulate into ``grad`` during ``backward``. Constants
    (``requires_grad=False`` leaves) terminate gradient flow.
    """

    __slots__ = ("value", "grad", "requires_grad", "_parents", "_backward")

    def __init__(self, value, requires_grad: bool = False, parents=(), backward=None):
        self.value = np.asarray(value, dtype=np.float64)
        self.grad: np.ndarray | None = None
        self.requires_grad = requires_grad
        self._parents = parents
        self._backward = backward

    @property
    def shape(self):
        return self.value.shape

    def item(self) -> float:
        return float(self.value.reshape(-1)[0])

    def backward(self) -> None:
        """Backpropagate from a scalar node through the graph."""
        if self.value.size != 1:
            raise ValueError("backward() requires a scalar node")
        topo: list[Tensor] = []
        visited: set[int] = set()
        stack: list[tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, done = stack.pop()
            if done:
                topo.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for p in node._parents:
                if p.requires_grad and id(p) not in visited:
                    stack.append((p, False))
        self.grad = np.ones_like(self.value)
        for node in reversed(topo):
            if node._backward is not None:
                node._backward(node.grad)

    # operator sugar; non-tensors become constants
    def __add__(self, other):
        return add(self, as_tensor(other))

    def __radd__(self, other):
        return add(as_tensor(other), self)

    def __sub__(self, other):
        return add(self, mul(as_tensor(other), as_tensor(-1.0)))

    def __rsub__(self, other):
        return add(as_tensor(other), mul(self, as_tensor(-1.0)))

    def __mul__(self, other):
        return mul(self, as_tensor(other))

    def __rmul__(self, other):
        return mul(as_tensor(other), self)

    def __neg__(self):
        return mul(self, as_tensor(-1.0))


def as_tensor(x) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(x)


def constant(value) -> Tensor:
    return Tensor(value)


def _accum(t: Tensor, g: np.ndarray) -> None:
    if not t.requires_grad:
        return
    if t.grad is None:
        t.grad = np.zeros_like(t.value)
    t.grad += g


def _unbroadcast(g: np.ndarray, shape) -> np.ndarray:
    """Reduce a gradient back to ``shape`` after numpy broadcasting."""
    while g.ndim > len(shape):
        g = g.sum(axis=0)
    for axis, dim in enumerate(shape):
        if dim == 1 and g.shape[axis] != 1:
            g = g.sum(axis=axis, keepdims=True)
    return g


def _node(value, parents, backward) -> Tensor:
    if any(p.requires_grad for p in parents):
        return Tensor(value, requires_grad=True, parents=tuple(parents), backward=backward)
    return Tensor(value)


def add(a: Tensor, b: Tensor) -> Tensor:
    out_val = a.value + b.value

    def bwd(g):
        _accum(a, _unbroadcast(g, a.value.shape))
        _accum(b, _unbroadcast(g, b.value.shape))

    return _node(out_val, (a, b), bwd)


def mul(a: Tensor, b: Tensor) -> Tensor:
    out_val = a.value * b.value

    def bwd(g):
        _accum(a, _unbroadcast(g * b.value, a.value.shape))
        _accum(b, _unbroadcast(g * a.value, b.value.shape))

    return _node(out_val, (a, b), bwd)


def matmul(a: Tensor, b: Tensor) -> Tensor:
    out_val = a.value @ b.value

    def bwd(g):
        _accum(a, g @ b.value.T)
        _accum(b, a.value.T @ g)

    return _node(out_val, (a, b), bwd)


def transpose(a: Tensor) -> Tensor:
    def bwd(g):
        _accum(a, g.T)

    return _node(a.value.T, (a,), bwd)


def sigmoid(a: Tensor) -> Tensor:
    x = a.value
    out_val = np.where(x >= 0, 1.0 / (1.0 + np.exp(-np.abs(x))), np.exp(-np.abs(x)) / (1.0 + np.exp(-np.abs(x))))

    def bwd(g):
        _accum(a, g * out_val * (1.0 - out_val))

    return _node(out_val, (a,), bwd)


def tanh(a: Tensor) -> Tensor:
    out_val = np.tanh(a.value)

    def bwd(g):
        _accum(a, g * (1.0 - out_val * out_val))

    return _node(out_val, (a,), bwd)


def relu(a: Tensor) -> Tensor:
    out_val = np.maximum(a.value, 0.0)

    def bwd(g):
        _accum(a, g * (a.value > 0.0))

    return _node(out_val, (a,), bwd)


def softmax(a: Tensor, axis: int = -1) -> Tensor:
    shifted = a.value - a.value.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    out_val = e / e.sum(axis=axis, keepdims=True)

    def bwd(g):
        dot = (g * out_val).sum(axis=axis, keepdims=True)
        _accum(a, out_val * (g - dot))

    return _node(out_val, (a,), bwd)


def mean(a: Tensor, axis: int = 0) -> Tensor:
    """Mean along one axis, keeping the axis with size 1."""
    count = a.value.shape[axis]
    out_val = a.value.mean(axis=axis, keepdims=True)

    def bwd(g):
        _accum(a, np.broadcast_to(g / count, a.value.shape).copy())

    return _node(out_val, (a,), bwd)


def concat(tensors, axis: int = 0) -> Tensor:
    tensors = list(tensors)
    out_val = np.concatenate([t.value for t in tensors], axis=axis)
    sizes = [t.value.shape[axis] for t in tensors]

    def bwd(g):
        offset = 0
        for t, size in zip(tensors, sizes):
            idx = [slice(None)] * g.ndim
            idx[axis] = slice(offset, offset + size)
            _accum(t, g[tuple(idx)])
            offset += size

    return _node(out_val, tensors, bwd)


def lookup(table: Tensor, indices) -> Tensor:
    """Row gather from a 2-D table; gradients scatter-add back."""
    idx = list(indices)
    out_val = table.value[idx]

    def bwd(g):
        if not table.requires_grad:
            return
        if table.grad is None:
            table.grad = np.zeros_like(table.value)
        np.add.at(table.grad, idx, g)

    return _node(out_val, (table,), bwd)


def log(a: Tensor) -> Tensor:
    out_val = np.log(a.value)

    def bwd(g):
        _accum(a, g / a.value)

    return _node(out_val, (a,), bwd)


def clamp(a: Tensor, lo: float, hi: float) -> Tensor:
    out_val = np.clip(a.value, lo, hi)

    def bwd(g):
        _accum(a, g * ((a.value >= lo) & (a.value <= hi)))

    return _node(out_val, (a,), bwd)
