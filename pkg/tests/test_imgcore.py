import numpy as np
import pytest
from PIL import Image

from conftest import random_image
from fsaug import (
    ImageBuffer,
    RegionBox,
    crop,
    load_image,
    paste,
    resize_bilinear,
    save_image,
    to_grayscale,
)
from fsaug.errors import BoundsError, DecodeError, IoError


def test_load_1x1_white_png(tmp_path):
    p = tmp_path / "w.png"
    Image.new("RGB", (1, 1), (255, 255, 255)).save(p)
    img = load_image(p)
    assert (img.width, img.height, img.channels) == (1, 1, 3)
    assert list(img.data) == [255, 255, 255]


def test_load_grayscale_png(tmp_path):
    p = tmp_path / "g.png"
    Image.fromarray(np.array([[0, 85], [170, 255]], dtype=np.uint8), "L").save(p)
    img = load_image(p)
    assert img.channels == 1
    assert list(img.data) == [0, 85, 170, 255]


def test_load_truncated_file(tmp_path):
    p = tmp_path / "bad.png"
    good = tmp_path / "good.png"
    Image.new("RGB", (16, 16), (1, 2, 3)).save(good)
    p.write_bytes(good.read_bytes()[:40])
    with pytest.raises(DecodeError):
        load_image(p)


def test_load_missing_path(tmp_path):
    with pytest.raises(IoError):
        load_image(tmp_path / "nope.png")


def test_alpha_composited_over_black(tmp_path):
    p = tmp_path / "a.png"
    Image.new("RGBA", (1, 1), (200, 100, 50, 128)).save(p)
    img = load_image(p)
    # 200*128/255 = 100.39 -> 100, etc.
    assert list(img.data) == [100, 50, 25]


def test_save_load_roundtrip(tmp_path):
    rng = np.random.default_rng(0)
    for channels in (1, 3):
        img = random_image(rng, 23, 17, channels)
        p = tmp_path / f"r{channels}.png"
        save_image(img, p)
        assert load_image(p) == img


def test_save_decodable_by_reference_decoder(tmp_path):
    rng = np.random.default_rng(1)
    img = random_image(rng, 64, 64)
    p = tmp_path / "x.png"
    save_image(img, p)
    ref = np.asarray(Image.open(p).convert("RGB"))
    assert np.array_equal(ref, img.pixels)


def test_save_to_missing_dir(tmp_path):
    img = ImageBuffer(np.zeros((2, 2, 3), np.uint8))
    with pytest.raises(IoError):
        save_image(img, tmp_path / "no" / "dir" / "x.png")


def test_grayscale_white_and_red():
    white = ImageBuffer(np.full((1, 1, 3), 255, np.uint8))
    assert to_grayscale(white).data[0] == 255
    red = ImageBuffer(np.array([[[255, 0, 0]]], np.uint8))
    assert to_grayscale(red).data[0] == 76  # round(0.299 * 255)


def test_grayscale_idempotent():
    rng = np.random.default_rng(2)
    img = random_image(rng, 9, 9)
    g = to_grayscale(img)
    assert to_grayscale(g) == g


def test_resize_identity():
    rng = np.random.default_rng(3)
    img = random_image(rng, 11, 7)
    assert resize_bilinear(img, 11, 7) == img


def test_resize_monotone_upscale():
    img = ImageBuffer(np.array([[[0], [255]]], np.uint8))
    out = resize_bilinear(img, 4, 1)
    vals = list(out.data)
    assert vals == sorted(vals)


def test_resize_checkerboard_average():
    img = ImageBuffer(np.array([[[0], [255]], [[255], [0]]], np.uint8))
    out = resize_bilinear(img, 1, 1)
    assert out.data[0] == 128  # round(127.5)


def test_crop_interior():
    base = np.arange(16, dtype=np.uint8).reshape(4, 4, 1)
    img = ImageBuffer(base)
    got = crop(img, RegionBox(1, 1, 3, 3))
    assert np.array_equal(got.pixels[:, :, 0], base[1:3, 1:3, 0])


def test_paste_crop_roundtrip():
    rng = np.random.default_rng(4)
    img = random_image(rng, 16, 16)
    box = RegionBox(3, 5, 11, 12)
    assert paste(img, box, crop(img, box)) == img


def test_paste_wrong_size():
    rng = np.random.default_rng(5)
    img = random_image(rng, 8, 8)
    patch = random_image(rng, 3, 3)
    with pytest.raises(BoundsError):
        paste(img, RegionBox(0, 0, 4, 4), patch)


def test_paste_outside_unchanged():
    rng = np.random.default_rng(6)
    img = random_image(rng, 12, 10)
    box = RegionBox(2, 3, 7, 8)
    patch = random_image(rng, box.width, box.height)
    out = paste(img, box, patch)
    mask = np.ones((10, 12), bool)
    mask[box.y0 : box.y1, box.x0 : box.x1] = False
    assert np.array_equal(out.pixels[mask], img.pixels[mask])


def test_box_validation():
    with pytest.raises(BoundsError):
        RegionBox(0, 0, 5, 5).validate(4, 10)
    with pytest.raises(BoundsError):
        RegionBox(3, 0, 3, 5).validate(10, 10)


def test_buffer_invariants():
    with pytest.raises(ValueError):
        ImageBuffer(np.zeros((2, 2, 2), np.uint8))  # bad channel count
    with pytest.raises(ValueError):
        ImageBuffer(np.zeros((0, 2, 3), np.uint8))
