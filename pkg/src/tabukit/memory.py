"""Short-term tabu list and the shared elite archive.

The tabu list is a per-thread FIFO of the most recently accepted
parameter vectors; a candidate matching any entry is skipped without
being evaluated. The elite archive keeps the best solutions found so
far, ordered best first, and is the source for both restart generators:
the centroid (intensify) and per-coordinate resampling (diversify).
"""
from __future__ import annotations

import bisect
import threading
from collections import deque

import numpy as np

from .core import SearchPoint, clamp

DEFAULT_TABU_CAPACITY = 7
DEFAULT_ELITE_CAPACITY = 10
DEFAULT_MATCH_TOL = 1e-6


class TabuList:
    """Fixed-capacity FIFO of recently accepted normalized vectors."""

    def __init__(self, capacity: int = DEFAULT_TABU_CAPACITY, match_tol: float = DEFAULT_MATCH_TOL):
        if capacity < 1:
            raise ValueError("tabu capacity must be positive")
        if match_tol < 0:
            raise ValueError("match tolerance must be non-negative")
        self.capacity = capacity
        self.match_tol = match_tol
        self.entries: deque[np.ndarray] = deque(maxlen=capacity)

    def push(self, x: np.ndarray) -> None:
        """Record an accepted vector, evicting the oldest entry when full."""
        self.entries.append(np.array(x, dtype=float, copy=True))

    def is_tabu(self, x: np.ndarray) -> bool:
        """True when some entry matches ``x`` within the tolerance (max norm)."""
        for entry in self.entries:
            if np.max(np.abs(entry - x)) <= self.match_tol:
                return True
        return False

    def __len__(self) -> int:
        return len(self.entries)


class IntermediateMemory:
    """Capacity-bounded elite archive ordered best (lowest value) first.

    Shared between search threads: offers and snapshot reads are
    serialized by an internal lock, so concurrent offers are applied in
    some order with none lost.
    """

    def __init__(self, capacity: int = DEFAULT_ELITE_CAPACITY, match_tol: float = DEFAULT_MATCH_TOL):
        if capacity < 1:
            raise ValueError("elite capacity must be positive")
        self.capacity = capacity
        self.match_tol = match_tol
        self._entries: list[SearchPoint] = []
        self._values: list[float] = []  # parallel list, keeps bisect cheap
        self._lock = threading.Lock()

    def offer(self, p: SearchPoint) -> bool:
        """Insert a feasible point if it qualifies; returns True when inserted.

        A point qualifies when the archive has room or when it beats the
        current worst entry. Vectors already present (within the match
        tolerance) are rejected so the archive cannot collapse onto
        copies of one solution.
        """
        if not p.feasible:
            return False
        with self._lock:
            for entry in self._entries:
                if np.max(np.abs(entry.x - p.x)) <= self.match_tol:
                    return False
            if len(self._entries) >= self.capacity and p.value >= self._values[-1]:
                return False
            idx = bisect.bisect_right(self._values, p.value)
            self._entries.insert(idx, p)
            self._values.insert(idx, p.value)
            if len(self._entries) > self.capacity:
                self._entries.pop()
                self._values.pop()
            return True

    def snapshot(self) -> list[SearchPoint]:
        """Consistent copy of the entries, best first."""
        with self._lock:
            return list(self._entries)

    def best(self) -> SearchPoint | None:
        with self._lock:
            return self._entries[0] if self._entries else None

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)

    def diversify(self, rng: np.random.Generator) -> np.ndarray:
        """Build a point by sampling every coordinate independently.

        Each output coordinate copies the value of a uniformly random
        coordinate of a uniformly random archive entry, so good values
        found for one parameter get tried in every other position. No
        arithmetic is performed on the copied values.
        """
        entries = self.snapshot()
        if not entries:
            raise ValueError("cannot diversify from an empty archive")
        n = entries[0].x.size
        out = np.empty(n)
        for j in range(n):
            r = int(rng.integers(len(entries)))
            c = int(rng.integers(n))
            out[j] = entries[r].x[c]
        return out

    def intensify(self) -> np.ndarray:
        """Componentwise mean of the archived vectors, clamped to [0, 1]."""
        entries = self.snapshot()
        if not entries:
            raise ValueError("cannot intensify from an empty archive")
        return clamp(np.mean([e.x for e in entries], axis=0))
