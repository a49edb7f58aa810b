"""Vectorised Philox4x32-10 keyed by a 64-bit seed.

Used as a pseudo-random function: the output for a counter depends on nothing
but (key, counter), so scenery values can be materialised lazily, in any
order, and re-queried bit-identically.
"""
import numpy as np

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = np.uint32(0x9E3779B9)
_W1 = np.uint32(0xBB67AE85)
_LO = np.uint64(0xFFFFFFFF)
_SHIFT = np.uint64(32)


def philox4x32(counter, key, rounds=10):
    """Apply Philox4x32 to an array of counters.

    ``counter`` has shape ``(4, ...)`` of uint32, ``key`` is a pair of uint32.
    Returns an array of the same shape as ``counter``.
    """
    c0, c1, c2, c3 = (np.asarray(c, dtype=np.uint32) for c in counter)
    k0 = np.uint32(key[0])
    k1 = np.uint32(key[1])
    with np.errstate(over="ignore"):
        for _ in range(rounds):
            p0 = _M0 * c0.astype(np.uint64)
            p1 = _M1 * c2.astype(np.uint64)
            hi0 = (p0 >> _SHIFT).astype(np.uint32)
            lo0 = (p0 & _LO).astype(np.uint32)
            hi1 = (p1 >> _SHIFT).astype(np.uint32)
            lo1 = (p1 & _LO).astype(np.uint32)
            c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
            k0 = k0 + _W0
            k1 = k1 + _W1
    return np.stack([c0, c1, c2, c3])


def split_seed(seed):
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    return seed & 0xFFFFFFFF, seed >> 32


def keyed_uniform(seed, index, stream):
    """Uniforms in the open interval (0, 1), one per entry of ``index``.

    ``index`` is any array of signed 64-bit integers; ``stream`` is a small
    integer tag separating independent uses of the same seed.
    """
    idx = np.asarray(index, dtype=np.int64)
    u = idx.astype(np.uint64)
    ctr = (
        (u & _LO).astype(np.uint32),
        (u >> _SHIFT).astype(np.uint32),
        np.full(idx.shape, stream, dtype=np.uint32),
        np.zeros(idx.shape, dtype=np.uint32),
    )
    out = philox4x32(ctr, split_seed(seed))
    bits = (out[0].astype(np.uint64) << _SHIFT) | out[1].astype(np.uint64)
    # 53 high bits, shifted to the cell midpoint so 0 and 1 are never hit
    return ((bits >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53
