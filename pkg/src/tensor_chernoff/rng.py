"""Deterministic random-stream derivation.

All randomness in the package flows through numpy's PCG64 generator.  A
stream is addressed by a 64-bit master seed plus an integer key path, fed to
``numpy.random.SeedSequence`` as ``spawn_key``.  Distinct key paths give
independent, reproducible streams, so parallel workers that agree on the key
path reproduce each other bit for bit.

Key-path convention used by the experiment runner:

* ``stream(seed, DOMAIN_SUITE, suite_id)`` for suite-level draws,
* ``stream(seed, DOMAIN_WALK, walk_index)`` for the random walk with that
  index inside a Monte Carlo estimate,
* ``stream(seed, DOMAIN_TENSORS, vertex)`` for random vertex tensors.
"""

from __future__ import annotations

import numpy as np

DOMAIN_SUITE = 1
DOMAIN_WALK = 2
DOMAIN_TENSORS = 3
DOMAIN_GRAPH = 4
DOMAIN_PROBE = 5


def seed_sequence(master_seed: int, *key: int) -> np.random.SeedSequence:
    """SeedSequence for the stream addressed by ``(master_seed, *key)``."""
    return np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(int(k) for k in key))


def stream(master_seed: int, *key: int) -> np.random.Generator:
    """PCG64 generator for the stream addressed by ``(master_seed, *key)``."""
    return np.random.Generator(np.random.PCG64(seed_sequence(master_seed, *key)))
