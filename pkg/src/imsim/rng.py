"""Portable deterministic random numbers.

Everything random in the simulator (graph generation, node coins, adversary
bits) is derived from SplitMix64, a 64-bit generator whose output sequence is
fully specified by a handful of integer operations, so any implementation in
any language reproduces the same graphs for the same seed.
"""

MASK64 = (1 << 64) - 1

_GOLDEN = 0x9E3779B97F4A7C15

# substream identifiers for graph generation
STREAM_EDGES = 1
STREAM_UIDS = 2
STREAM_WEIGHTS = 3
STREAM_ROLES = 4
STREAM_EXTRA = 5


def mix64(z: int) -> int:
    """SplitMix64 finalizer applied to ``z + golden``."""
    z = (z + _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def hash_words(*words: int) -> int:
    h = 0
    for w in words:
        h = mix64(h ^ (w & MASK64))
    return h


def node_rng(seed: int, node: int, round: int, draw: int) -> int:
    """Counter-based 64-bit value for ``(seed, node, round, draw)``.

    Values depend only on the four arguments, never on execution order, so
    randomized kernels draw identical coins regardless of how many worker
    lanes execute a superstep. ``node = -1`` is reserved for global coins.
    """
    return hash_words(seed, node, round, draw)


class SplitMix64:
    """Sequential SplitMix64 stream."""

    def __init__(self, state: int):
        self.state = state & MASK64

    @classmethod
    def substream(cls, seed: int, stream: int) -> "SplitMix64":
        return cls(hash_words(seed, stream))

    def next(self) -> int:
        self.state = (self.state + _GOLDEN) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection (no modulo bias)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next()
            if x < limit:
                return x % bound

    def shuffle(self, items: list) -> list:
        """Fisher-Yates shuffle in place; returns ``items``."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items

    def sample(self, population: list, k: int) -> list:
        """First ``k`` slots of a partial Fisher-Yates pass over ``population``."""
        pool = list(population)
        if k > len(pool):
            raise ValueError("sample larger than population")
        for i in range(k):
            j = i + self.below(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]
