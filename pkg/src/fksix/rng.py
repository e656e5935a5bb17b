"""Keyed random substreams.

A root seed derives independent generators for the three coin kinds, keyed
by structural indices (chain id, sample id).  Results are therefore
reproducible under a fixed seed independently of worker count or call
interleaving.
"""

from __future__ import annotations

import numpy as np

STREAM_EDGE = 1
STREAM_ORIENT = 2
STREAM_SPLIT = 3


def substream(seed, stream, index=0):
    if seed < 0 or stream < 0 or index < 0:
        raise ValueError("seed and stream keys must be nonnegative")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, stream, index])))


def edge_stream(seed, chain=0):
    return substream(seed, STREAM_EDGE, chain)


def orientation_stream(seed, sample=0):
    return substream(seed, STREAM_ORIENT, sample)


def split_stream(seed, sample=0):
    return substream(seed, STREAM_SPLIT, sample)
