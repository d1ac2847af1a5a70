# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Unit tests for seeds and random streams."""

import numpy as np

from fqrt_fluid.rng import (
    STREAM_AP, STREAM_FWLLN, RandomStream, replication_seed, stream_seeds
)


def test_replication_seeds():
    """Replication seeds only depend on their arguments."""
    s1 = replication_seed(0, STREAM_FWLLN, 200, 3)
    s2 = replication_seed(0, STREAM_FWLLN, 200, 3)
    assert np.array_equal(s1.generate_state(4), s2.generate_state(4))
    for other in [
        replication_seed(1, STREAM_FWLLN, 200, 3),
        replication_seed(0, STREAM_AP, 200, 3),
        replication_seed(0, STREAM_FWLLN, 2000, 3),
        replication_seed(0, STREAM_FWLLN, 200, 4)
    ]:
        assert not np.array_equal(s1.generate_state(4), other.generate_state(4))


def test_stream_seeds():
    """Child seeds do not depend on previous calls for the same parent."""
    parent = replication_seed(0, STREAM_FWLLN, 50, 0)
    first = [s.generate_state(2) for s in stream_seeds(parent, 3)]
    second = [s.generate_state(2) for s in stream_seeds(parent, 3)]
    assert all(np.array_equal(a, b) for a, b in zip(first, second))
    assert not np.array_equal(first[0], first[1])
    assert len(stream_seeds(7, 8)) == 8


def test_random_stream():
    """Uniform and exponential draws use separate buffers."""
    r1 = RandomStream(5, cache_size=8)
    r2 = RandomStream(5, cache_size=8)
    u1 = [r1.uniform() for _ in range(20)]
    e2 = [r2.exponential(2.0) for _ in range(5)]
    u2 = [r2.uniform() for _ in range(20)]
    assert u1 == u2
    assert all(0 <= u < 1 for u in u1)
    assert all(e > 0 for e in e2)
    r3 = RandomStream(5, cache_size=8)
    e3 = [r3.exponential(1.0) for _ in range(5)]
    assert np.allclose(np.array(e2) * 2.0, e3)
