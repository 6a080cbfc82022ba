"""Prioritized replay: proportional sum-tree buffer with FIFO eviction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidStateError


@dataclass
class Transition:
    """Two-ply self-play transition: the mover's state, their action, the
    reward after their move, the reward their opponent collected one ply
    later, and the state two plies ahead (None when the game ended first)."""

    state: tuple
    action: int
    r_t: float
    r_t1: float
    next_state: Optional[tuple]
    done: bool


class SumTree:
    """Binary indexed sum tree over `capacity` leaves (power-of-two padded)."""

    def __init__(self, capacity: int):
        self.capacity = capacity
        size = 1
        while size < capacity:
            size *= 2
        self.base = size
        self.tree = np.zeros(2 * size, dtype=np.float64)

    def set(self, idx: int, value: float) -> None:
        i = self.base + idx
        delta = value - self.tree[i]
        while i:
            self.tree[i] += delta
            i //= 2

    def get(self, idx: int) -> float:
        return float(self.tree[self.base + idx])

    def total(self) -> float:
        return float(self.tree[1])

    def find(self, value: float) -> int:
        """Leaf index whose cumulative range contains `value`."""
        i = 1
        while i < self.base:
            left = 2 * i
            if value <= self.tree[left] or self.tree[left + 1] == 0.0:
                i = left
            else:
                value -= self.tree[left]
                i = left + 1
        return min(i - self.base, self.capacity - 1)


class PriorityBuffer:
    """Proportional prioritized replay. Stored priorities are already raised
    to alpha, so P(i) = stored_i / total."""

    def __init__(self, capacity: int, alpha: float = 0.6, min_priority: float = 1e-3):
        self.capacity = capacity
        self.alpha = alpha
        self.min_priority = min_priority
        self.tree = SumTree(capacity)
        self.entries: list[Optional[Transition]] = [None] * capacity
        self.write = 0
        self.size = 0
        self.max_stored = 1.0

    def __len__(self) -> int:
        return self.size

    def push(self, transition: Transition) -> None:
        self.entries[self.write] = transition
        self.tree.set(self.write, self.max_stored)
        self.write = (self.write + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def sample(self, k: int, beta: float, rng: np.random.Generator):
        """Stratified proportional sample; returns (indices, transitions,
        importance weights normalized by the batch maximum)."""
        if self.size < k:
            raise InvalidStateError(f"buffer has {self.size} entries, need {k}")
        total = self.tree.total()
        seg = total / k
        indices = np.empty(k, dtype=np.int64)
        probs = np.empty(k, dtype=np.float64)
        for j in range(k):
            value = (j + rng.random()) * seg
            idx = self.tree.find(value)
            indices[j] = idx
            probs[j] = self.tree.get(idx) / total
        weights = (self.size * probs) ** (-beta)
        weights /= weights.max()
        return indices, [self.entries[i] for i in indices], weights.astype(np.float32)

    def update_priorities(self, indices, td_errors) -> None:
        for idx, td in zip(indices, td_errors):
            stored = float(abs(td) + self.min_priority) ** self.alpha
            self.tree.set(int(idx), stored)
            self.max_stored = max(self.max_stored, stored)

    def set_priorities(self, indices, priorities) -> None:
        """Set raw priorities p (stored as p^alpha), bypassing the TD floor."""
        for idx, p in zip(indices, priorities):
            stored = float(p) ** self.alpha
            self.tree.set(int(idx), stored)
            self.max_stored = max(self.max_stored, stored)

    def priorities(self) -> np.ndarray:
        return np.array([self.tree.get(i) for i in range(self.size)])
