"""Counter-based random streams.

Every random draw in the package comes from a Philox generator keyed by
(seed, stream_id), so a 64-bit seed plus a documented stream id fully
determine each draw, independently of call order elsewhere.
"""

import numpy as np

# dataset generation streams
STREAM_SOURCE_TRAIN = 0
STREAM_TARGET_TRAIN = 1
STREAM_SOURCE_EVAL = 2
STREAM_TARGET_EVAL = 3
STREAM_NOISE_TRAIN = 4
STREAM_NOISE_EVAL = 5

# trainer streams
STREAM_INIT = 10
STREAM_SOURCE_BATCH = 11
STREAM_TARGET_BATCH = 12


def stream(seed, stream_id):
    """Generator for the given (seed, stream_id) pair."""
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(stream_id)],
                   dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
