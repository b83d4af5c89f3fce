"""Randomness plumbing: one frozen, documented seeding contract.

Every stochastic operation takes either an integer seed or a ready
``numpy.random.Generator``.  Replicated experiments derive the generator for
replicate ``r`` from ``SeedSequence((master_seed, r))``, so results are
reproducible across machines and independent of how replicates are scheduled
onto workers.
"""

from __future__ import annotations

import numpy as np


def as_generator(seed) -> np.random.Generator:
    """Return a PCG64 generator; pass through an existing Generator unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def replicate_generator(master_seed: int, index: int) -> np.random.Generator:
    """The frozen seed-split rule for replicate `index` of a run."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence((master_seed, index)))
    )
