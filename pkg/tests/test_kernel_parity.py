"""The compiled and pure kernel lanes must agree bit for bit."""

import numpy as np
import pytest

from promptseg import kernels

pytestmark = pytest.mark.skipif(
    not kernels.compiled_available(), reason="compiled kernels not built"
)


@pytest.fixture(scope="module")
def lanes():
    return kernels.get_backend("compiled"), kernels.get_backend("pure-python")


def _random_masks(seed, count, max_side=48):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        h, w = int(rng.integers(1, max_side)), int(rng.integers(1, max_side))
        yield (rng.random((h, w)) < rng.uniform(0.15, 0.9)).astype(np.uint8)


def test_label_parity(lanes):
    compiled, pure = lanes
    for m in _random_masks(101, 60):
        lc, nc = compiled.label_8(m)
        lp, np_ = pure.label_8(m)
        assert nc == np_
        assert np.array_equal(lc, lp)


def test_edt_parity(lanes):
    compiled, pure = lanes
    for m in _random_masks(202, 60):
        assert np.array_equal(compiled.edt_sq(m), pure.edt_sq(m))


def test_thinning_parity(lanes):
    compiled, pure = lanes
    for m in _random_masks(303, 60):
        assert np.array_equal(compiled.thin_zs(m), pure.thin_zs(m))
