# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Random number streams for the event-driven simulators. All randomness in
the package is derived from a master seed via numpy seed sequences. Draws
inside event loops come from buffered streams that refill blocks of random
numbers from a counter-based (Philox) generator.
"""

from typing import List, Optional, Union

import numpy as np


"""Number of values that are drawn from the generator on each refill."""
DEFAULT_CACHE_SIZE = 4096


"""Identifiers for the independent groups of random streams. The identifier
is the first component of the spawn key of a replication seed.
"""
STREAM_FTSP = 0
STREAM_FWLLN = 1
STREAM_AP = 2
STREAM_EXPAND = 3
STREAM_SSC = 4
STREAM_STEADY = 5
STREAM_SIMULATE = 6


Seed = Union[int, np.random.SeedSequence]


class RandomStream(object):
    """Buffered source of uniform and standard exponential random numbers.
    The two kinds of draws come from separate generators (child seeds of the
    given seed) so that the sequence of values of each kind only depends on
    the number of draws of that kind.
    """
    def __init__(self, seed: Optional[Seed] = None, cache_size: Optional[int] = DEFAULT_CACHE_SIZE):
        """Initialize the generators and the (empty) buffers.

        Parameters
        ----------
        seed: int or numpy.random.SeedSequence, default=None
            Parent seed for the two Philox bit generators.
        cache_size: int, default=4096
            Number of values drawn on each buffer refill.
        """
        useed, eseed = stream_seeds(seed, 2)
        self._ugen = np.random.Generator(np.random.Philox(useed))
        self._egen = np.random.Generator(np.random.Philox(eseed))
        self._cache_size = cache_size
        self._uniforms = None
        self._uindex = cache_size
        self._exponentials = None
        self._eindex = cache_size

    def exponential(self, rate: float) -> float:
        """Draw an exponentially distributed value with the given rate.

        Parameters
        ----------
        rate: float
            Positive rate parameter.

        Returns
        -------
        float
        """
        if self._eindex >= self._cache_size:
            self._exponentials = self._egen.standard_exponential(self._cache_size).tolist()
            self._eindex = 0
        x = self._exponentials[self._eindex]
        self._eindex += 1
        return x / rate

    def uniform(self) -> float:
        """Draw a value that is uniformly distributed in [0, 1).

        Returns
        -------
        float
        """
        if self._uindex >= self._cache_size:
            self._uniforms = self._ugen.random(self._cache_size).tolist()
            self._uindex = 0
        u = self._uniforms[self._uindex]
        self._uindex += 1
        return u


def replication_seed(seed: int, stream: int, n: int, replication: int) -> np.random.SeedSequence:
    """Derive the seed sequence for a single replication from the master seed.
    The derivation only depends on its arguments and not on the order in
    which replications are executed.

    Parameters
    ----------
    seed: int
        Master seed.
    stream: int
        Identifier of the group of streams (one per experiment kind).
    n: int
        Scale index of the simulated instance.
    replication: int
        Replication index.

    Returns
    -------
    numpy.random.SeedSequence
    """
    return np.random.SeedSequence(entropy=seed, spawn_key=(stream, n, replication))


def stream_seeds(seed: Seed, count: int) -> List[np.random.SeedSequence]:
    """Get independent child seed sequences for a given seed (one for each
    of the primitive Poisson processes of a coupled construction).

    Parameters
    ----------
    seed: int or numpy.random.SeedSequence
        Parent seed.
    count: int
        Number of child sequences.

    Returns
    -------
    list of numpy.random.SeedSequence
    """
    if isinstance(seed, np.random.SeedSequence):
        # Do not advance the spawn counter of the caller's sequence.
        parent = np.random.SeedSequence(entropy=seed.entropy, spawn_key=seed.spawn_key)
    else:
        parent = np.random.SeedSequence(seed)
    return parent.spawn(count)
