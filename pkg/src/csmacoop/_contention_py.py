"""Pure-python contention sampler (numpy-vectorized fallback).

Stream contract, shared bit-for-bit with the compiled twin in _ckernel:
every slot consumes exactly one PCG64 double per node, in node-list
order, and node i transmits when its draw is < tau. Transmit decisions
never depend on protocol state (saturation), so slots can be pre-drawn
in blocks without changing which draw belongs to which slot.
"""

from __future__ import annotations

import numpy as np

_BLOCK_SLOTS = 4096


class PyContentionSampler:
    """Draws slots until one is non-idle; see next_contention."""

    kind = "pure"

    def __init__(self, bit_generator, tau: float, n_nodes: int):
        if not 1 <= n_nodes <= 64:
            raise ValueError(f"n_nodes must be in 1..64, got {n_nodes}")
        self._gen = np.random.Generator(bit_generator)
        self._tau = float(tau)
        self._n = int(n_nodes)
        self._rows = None        # (block, n) bool transmit matrix
        self._hits = None        # row indices with >= 1 transmitter
        self._hit_pos = 0
        self._pos = 0            # first unconsumed slot in the block
        self._size = 0

    def _refill(self) -> None:
        draws = self._gen.random(_BLOCK_SLOTS * self._n)
        self._rows = draws.reshape(_BLOCK_SLOTS, self._n) < self._tau
        self._hits = np.flatnonzero(self._rows.any(axis=1))
        self._hit_pos = 0
        self._pos = 0
        self._size = _BLOCK_SLOTS

    def next_contention(self, max_slots: int) -> tuple[int, int]:
        """Consume slots up to the next non-idle one.

        Returns (idle_slots, mask): the number of idle slots skipped and
        the transmitter bitmask of the following slot (bit i = node i).
        mask == 0 means the slot budget ran out first, after exactly
        max_slots idle slots.
        """
        idle = 0
        while True:
            if self._rows is None or self._pos >= self._size:
                self._refill()
            while self._hit_pos < len(self._hits) and self._hits[self._hit_pos] < self._pos:
                self._hit_pos += 1
            if self._hit_pos < len(self._hits):
                row = int(self._hits[self._hit_pos])
                gap = row - self._pos
                if idle + gap + 1 > max_slots:
                    self._pos += max_slots - idle
                    return max_slots, 0
                mask = 0
                for i in np.flatnonzero(self._rows[row]):
                    mask |= 1 << int(i)
                self._pos = row + 1
                self._hit_pos += 1
                return idle + gap, mask
            gap = self._size - self._pos
            if idle + gap >= max_slots:
                self._pos += max_slots - idle
                return max_slots, 0
            idle += gap
            self._pos = self._size
