# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled contention sampler.

Stream contract is documented in _contention_py: one double per node per
slot, node-list order, transmit when the draw is < tau. This twin pulls
doubles straight from the PCG64 bit generator with the GIL released.
"""

from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from numpy.random cimport bitgen_t


cdef class CContentionSampler:
    """Draws slots until one is non-idle; see next_contention."""

    cdef bitgen_t *_rng
    cdef object _bitgen
    cdef object _lock
    cdef double _tau
    cdef int _n

    def __init__(self, bit_generator, double tau, int n_nodes):
        if not 1 <= n_nodes <= 64:
            raise ValueError(f"n_nodes must be in 1..64, got {n_nodes}")
        capsule = bit_generator.capsule
        if not PyCapsule_IsValid(capsule, "BitGenerator"):
            raise ValueError("expected a numpy BitGenerator")
        self._rng = <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")
        self._bitgen = bit_generator  # keep the state alive
        self._lock = bit_generator.lock
        self._tau = tau
        self._n = n_nodes

    @property
    def kind(self):
        return "compiled"

    def next_contention(self, long long max_slots):
        """Consume slots up to the next non-idle one.

        Returns (idle_slots, mask); mask == 0 means the slot budget ran
        out first, after exactly max_slots idle slots.
        """
        cdef long long budget = max_slots
        cdef unsigned long long mask = 0
        cdef int i
        cdef int n = self._n
        cdef double tau = self._tau
        cdef bitgen_t *rng = self._rng
        with self._lock, nogil:
            while budget > 0:
                mask = 0
                for i in range(n):
                    if rng.next_double(rng.state) < tau:
                        mask |= (<unsigned long long> 1) << i
                budget -= 1
                if mask != 0:
                    break
        if mask == 0:
            return max_slots, 0
        # consumed = max_slots - budget slots, the last one being the contention
        return max_slots - budget - 1, int(mask)
