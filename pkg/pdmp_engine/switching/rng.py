"""
Counter-based random streams.

A stream is a numpy Philox generator keyed by (seed, stream_id), so replica r
can build its own stream from the experiment seed alone. Independent
sub-streams for the separate sources of randomness of one replica are
obtained by jumping the Philox counter.
"""

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

_MASK_64 = (1 << 64) - 1


class Substream(IntEnum):
    """Sources of randomness inside one replica."""

    SWITCHING = 0  # initial speed and holding times
    OVERSHOOT = 1  # penalized overshoot clocks
    TARGETS = 2  # xi_0 and the shared uniform of every jump
    ROUTING = 3  # next-state uniforms of the switching chain


@dataclass(frozen=True)
class RngStream:
    """
    Reproducible random stream identified by a 64-bit seed and a 64-bit stream id.

    Identical (seed, stream_id) pairs always produce identical draws; distinct
    stream ids give independent Philox keys.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        object.__setattr__(self, "seed", int(self.seed) & _MASK_64)
        object.__setattr__(self, "stream_id", int(self.stream_id) & _MASK_64)

    @property
    def key(self) -> int:
        return (self.seed << 64) | self.stream_id

    def bit_generator(self, substream: int = Substream.SWITCHING) -> np.random.Philox:
        base = np.random.Philox(key=self.key)
        if int(substream) == 0:
            return base
        return base.jumped(int(substream))

    def generator(self, substream: int = Substream.SWITCHING) -> np.random.Generator:
        """Fresh numpy Generator positioned at the start of a sub-stream."""
        return np.random.Generator(self.bit_generator(substream))

    def replica(self, index: int) -> "RngStream":
        """Stream of replica `index` for an experiment rooted at this stream."""
        return RngStream(self.seed, self.stream_id + int(index))
