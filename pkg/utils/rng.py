"""SplitMix64, the generator behind every seeded construction.

The state is one unsigned 64-bit word. Each draw adds the golden-ratio
increment 0x9E3779B97F4A7C15 to the state and returns mix(state), where

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z =  z ^ (z >> 31)

with all arithmetic modulo 2**64. Members of a family use
derive_seed(base, i) = mix(base ^ i).
"""
import numpy as np

MASK = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def mix(z):
    z &= MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def derive_seed(base, i):
    return mix((int(base) ^ int(i)) & MASK)


def check_seed(seed):
    seed = int(seed)
    if not 0 <= seed <= MASK:
        raise ValueError("seed must be an unsigned 64-bit integer, got %d" % seed)
    return seed


class SplitMix64:
    def __init__(self, seed):
        self.state = check_seed(seed)

    def next_u64(self):
        self.state = (self.state + GOLDEN_GAMMA) & MASK
        return mix(self.state)

    def random(self):
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def below(self, n):
        """Uniform integer in [0, n) by rejection, without modulo bias."""
        if n <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - (1 << 64) % n
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def shuffle(self, items):
        """Fisher-Yates, in place, from the last position down."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items

    def numpy(self):
        """A numpy Generator seeded from the next draw (for Gaussian data)."""
        return np.random.default_rng(self.next_u64())
