import numpy as np
import pytest

from fsaug import ImageBuffer
from fsaug import _kernels_py

BACKENDS = [_kernels_py]
try:
    from fsaug import _kernels

    BACKENDS.append(_kernels)
except ImportError:
    pass


@pytest.fixture(params=BACKENDS, ids=lambda m: m.BACKEND_NAME)
def backend(request):
    return request.param


def random_image(rng: np.random.Generator, w: int, h: int, channels: int = 3) -> ImageBuffer:
    return ImageBuffer(rng.integers(0, 256, (h, w, channels), dtype=np.uint8))


def square_image(size: int, x: int, y: int, dim: int = 128) -> ImageBuffer:
    arr = np.zeros((dim, dim, 1), dtype=np.uint8)
    arr[y : y + size, x : x + size] = 255
    return ImageBuffer(arr)
