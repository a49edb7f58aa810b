import numpy as np

from quenched_rwrs._philox import keyed_uniform, philox4x32, split_seed


def _run(ctr, key):
    out = philox4x32(np.array(ctr, dtype=np.uint32).reshape(4, 1), key)
    return [int(v[0]) for v in out]


def test_known_answer_zero():
    assert _run([0, 0, 0, 0], (0, 0)) == [0x6627E8D5, 0xE169C58D, 0xBC57AC4C, 0x9B00DBD8]


def test_known_answer_ones():
    ff = 0xFFFFFFFF
    assert _run([ff] * 4, (ff, ff)) == [0x408F276D, 0x41C83B0E, 0xA20BC7C6, 0x6D5451FD]


def test_known_answer_pi():
    ctr = [0x243F6A88, 0x85A308D3, 0x13198A2E, 0x03707344]
    key = (0xA4093822, 0x299F31D0)
    assert _run(ctr, key) == [0xD16CFE09, 0x94FDCCEB, 0x5001E420, 0x24126EA1]


def test_split_seed_roundtrip():
    lo, hi = split_seed(0x0123456789ABCDEF)
    assert (hi << 32) | lo == 0x0123456789ABCDEF


def test_keyed_uniform_open_interval_and_order_free():
    idx = np.arange(-5000, 5000)
    u = keyed_uniform(7, idx, 3)
    assert np.all((u > 0) & (u < 1))
    perm = np.random.default_rng(0).permutation(idx.size)
    assert np.array_equal(keyed_uniform(7, idx[perm], 3), u[perm])
    assert not np.array_equal(keyed_uniform(7, idx, 4), u)
    assert abs(u.mean() - 0.5) < 4 * np.sqrt(1 / 12 / u.size)
