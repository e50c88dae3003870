import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from continua import _accel, _kernels_py

try:
    from continua import _kernels as compiled
except ImportError:  # extension not built
    compiled = None

needs_ext = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")


def grids(shape=(17, 23)):
    return st.lists(st.booleans(), min_size=shape[0] * shape[1], max_size=shape[0] * shape[1]).map(
        lambda b: np.array(b, dtype=np.uint8).reshape(shape))


def test_backend_name():
    assert _accel.BACKEND in {"compiled", "python"}


def test_python_label_matches_scipy():
    from scipy import ndimage
    rng = np.random.default_rng(3)
    free = (rng.random((40, 50)) < 0.55).astype(np.uint8)
    lab, n = _kernels_py.label(free)
    ref, m = ndimage.label(free)
    assert n == m
    # same partition of cells, possibly different numbering
    pairs = set(zip(lab[free > 0].tolist(), ref[free > 0].tolist()))
    assert len(pairs) == n


@needs_ext
@settings(max_examples=40, deadline=None)
@given(grids(), st.integers(0, 17 * 23 - 1))
def test_bfs_and_label_agree(free, src):
    sources = np.array([src], dtype=np.int64)
    a = compiled.bfs_distances(free, sources)
    b = _kernels_py.bfs_distances(free, sources)
    assert np.array_equal(a, b)
    la, na = compiled.label(free)
    lb, nb = _kernels_py.label(free)
    assert na == nb and np.array_equal(la, lb)


@needs_ext
@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(*[st.floats(0, 30, allow_nan=False)] * 4), min_size=1, max_size=12))
def test_mark_agrees(segs):
    arr = np.array(segs, dtype=np.float64)
    a = np.zeros((32, 32), dtype=np.uint8)
    b = np.zeros((32, 32), dtype=np.uint8)
    compiled.mark_segments(a, arr, 1e-6)
    _kernels_py.mark_segments(b, arr, 1e-6)
    assert np.array_equal(a, b)


def test_mark_covers_segment_cells():
    g = np.zeros((8, 8), dtype=np.uint8)
    _accel.mark_segments(g, np.array([[0.5, 0.5, 6.5, 3.5]]), 1e-6)
    for t in np.linspace(0, 1, 200):
        x, y = 0.5 + 6 * t, 0.5 + 3 * t
        assert g[int(y), int(x)]
