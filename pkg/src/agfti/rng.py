"""Deterministic randomness for the whole package.

Every stochastic choice (anchor selection, mask sampling, synthetic data,
experiment repetition seeds) flows from a user-supplied 64-bit seed through
Philox4x64-10, a published counter-based generator, as implemented by numpy.
No ambient entropy is ever drawn.

Substreams are separated through the 128-bit Philox key:

    key word 0 = seed
    key word 1 = stream * 2^32 + index

where ``stream`` is one of the constants below (what the randomness is for)
and ``index`` distinguishes parallel uses within a stream (view number,
repetition number). Identical (seed, stream, index) triples always reproduce
identical draws, across platforms and, given a Philox implementation, across
languages.
"""

import numpy as np

STREAM_ANCHORS = 1
STREAM_VIEW_MASK = 2
STREAM_LABEL_MASK = 3
STREAM_SYNTH = 4
STREAM_EXPERIMENT = 5

_MASK64 = (1 << 64) - 1


def make_generator(seed, stream, index=0):
    """Philox generator for (seed, stream, index); see module docstring."""
    key = np.array(
        [int(seed) & _MASK64, ((int(stream) << 32) + int(index)) & _MASK64],
        dtype=np.uint64,
    )
    return np.random.Generator(np.random.Philox(key=key))
