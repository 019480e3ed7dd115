"""Named parameter storage with gradient buffers and AdaDelta state."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import NonFiniteLoss
from .autodiff import Tensor


class ParamStore:
    """Ordered map of name -> float64 array plus per-parameter gradient
    buffer and AdaDelta accumulators.

    ``begin()`` starts a new graph step; ``leaf(name)`` hands out one
    shared graph leaf per parameter for that step; ``backward(loss)``
    runs backprop and folds leaf gradients into the buffers.
    """

    def __init__(self):
        self._values: dict[str, np.ndarray] = {}
        self._grads: dict[str, np.ndarray] = {}
        self._eg2: dict[str, np.ndarray] = {}
        self._edx2: dict[str, np.ndarray] = {}
        self._leaves: dict[str, Tensor] = {}

    def add(self, name: str, value) -> None:
        if name in self._values:
            raise ValueError(f"duplicate parameter name: {name}")
        arr = np.array(value, dtype=np.float64)
        self._values[name] = arr
        self._grads[name] = np.zeros_like(arr)
        self._eg2[name] = np.zeros_like(arr)
        self._edx2[name] = np.zeros_like(arr)

    def names(self) -> list[str]:
        return list(self._values)

    def value(self, name: str) -> np.ndarray:
        return self._values[name]

    def __getitem__(self, name: str) -> np.ndarray:
        return self._values[name]

    def __contains__(self, name: str) -> bool:
        return name in self._values

    def set_value(self, name: str, value) -> None:
        arr = np.asarray(value, dtype=np.float64)
        if arr.shape != self._values[name].shape:
            raise ValueError(f"shape mismatch for {name}")
        self._values[name][...] = arr

    def grad(self, name: str) -> np.ndarray:
        return self._grads[name]

    def zero_grads(self) -> None:
        for g in self._grads.values():
            g.fill(0.0)

    def begin(self) -> None:
        """Start a fresh forward graph over the current parameter values."""
        self._leaves = {}

    def leaf(self, name: str) -> Tensor:
        t = self._leaves.get(name)
        if t is None:
            t = Tensor(self._values[name], requires_grad=True)
            self._leaves[name] = t
        return t

    def backward(self, loss: Tensor) -> None:
        loss.backward()
        for name, t in self._leaves.items():
            if t.grad is not None:
                self._grads[name] += t.grad

    def grad_norm(self) -> float:
        return math.sqrt(sum(float((g * g).sum()) for g in self._grads.values()))

    def scale_grads(self, factor: float) -> None:
        for g in self._grads.values():
            g *= factor

    def clone(self) -> "ParamStore":
        other = ParamStore()
        for name, arr in self._values.items():
            other.add(name, arr)
            other._grads[name][...] = self._grads[name]
            other._eg2[name][...] = self._eg2[name]
            other._edx2[name][...] = self._edx2[name]
        return other


@dataclass
class AdaDeltaConfig:
    learning_rate: float = 0.1
    rho: float = 0.95
    epsilon: float = 1e-6

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if not 0.0 < self.rho < 1.0:
            raise ValueError("rho must be in (0, 1)")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be > 0")


def adadelta_step(store: ParamStore, cfg: AdaDeltaConfig) -> None:
    """One AdaDelta update, scaled by the learning rate; zeroes gradients.

    E[g2] <- rho E[g2] + (1-rho) g2
    dx     = -lr * sqrt(E[dx2]+eps) / sqrt(E[g2]+eps) * g
    E[dx2] <- rho E[dx2] + (1-rho) dx2
    """
    for name in store.names():
        g = store.grad(name)
        eg2 = store._eg2[name]
        edx2 = store._edx2[name]
        eg2 *= cfg.rho
        eg2 += (1.0 - cfg.rho) * g * g
        dx = -cfg.learning_rate * np.sqrt(edx2 + cfg.epsilon) / np.sqrt(eg2 + cfg.epsilon) * g
        edx2 *= cfg.rho
        edx2 += (1.0 - cfg.rho) * dx * dx
        store.value(name)[...] += dx
    store.zero_grads()


def gradient_check(loss_fn, store: ParamStore, eps: float = 1e-4,
                   max_coords: int = 200, seed: int = 0) -> float:
    """Max relative error between analytic and central-difference gradients.

    ``loss_fn(store)`` must build a scalar loss Tensor through
    ``store.leaf(...)``. At most ``max_coords`` coordinates per parameter
    are probed, chosen by a seeded RNG. The relative error per coordinate
    is |a - n| / max(1e-8, |a| + |n|).
    """
    if eps <= 0:
        raise ValueError("eps must be > 0")
    store.zero_grads()
    store.begin()
    loss = loss_fn(store)
    if not np.isfinite(loss.value).all():
        raise NonFiniteLoss("loss is not finite")
    store.backward(loss)
    analytic = {name: store.grad(name).copy() for name in store.names()}
    store.zero_grads()

    def eval_loss() -> float:
        store.begin()
        val = loss_fn(store).item()
        if not math.isfinite(val):
            raise NonFiniteLoss("loss is not finite under perturbation")
        return val

    rng = np.random.default_rng(seed)
    max_err = 0.0
    for name in store.names():
        flat = store.value(name).reshape(-1)
        size = flat.size
        if size <= max_coords:
            coords = np.arange(size)
        else:
            coords = rng.choice(size, size=max_coords, replace=False)
        a_flat = analytic[name].reshape(-1)
        for i in coords:
            orig = flat[i]
            flat[i] = orig + eps
            f_plus = eval_loss()
            flat[i] = orig - eps
            f_minus = eval_loss()
            flat[i] = orig
            numeric = (f_plus - f_minus) / (2.0 * eps)
            a = a_flat[i]
            err = abs(a - numeric) / max(1e-8, abs(a) + abs(numeric))
            max_err = max(max_err, err)
    return max_err


def glorot_uniform(rng: np.random.Generator, fan_in: int, fan_out: int, shape) -> np.ndarray:
    r = math.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-r, r, size=shape)
