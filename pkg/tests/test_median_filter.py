import random
from array import array

import pytest

from rangemedian.core import Stats
from rangemedian.median_filter import (
    GrayImage,
    PgmFormatError,
    encode_pgm,
    filter_image,
    naive_filter,
    parse_pgm,
    read_pgm,
    write_pgm,
)


def random_image(w, h, seed, maxval=255):
    rng = random.Random(seed)
    return GrayImage(w, h, maxval, array("H", (rng.randrange(maxval + 1) for _ in range(w * h))))


def test_constant_image_unchanged():
    img = GrayImage(16, 16, 255, array("H", [7] * 256))
    for r in (1, 2, 3):
        assert filter_image(img, r).pixels == img.pixels
        assert naive_filter(img, r).pixels == img.pixels


def test_filter_idempotent_on_constant():
    img = GrayImage(12, 12, 255, array("H", [200] * 144))
    once = filter_image(img, 2)
    twice = filter_image(once, 2)
    assert once.pixels == twice.pixels == img.pixels


def test_five_by_five_center():
    img = GrayImage.from_rows([[5 * y + x + 1 for x in range(5)] for y in range(5)])
    out = filter_image(img, 1)
    assert out.at(2, 2) == 13
    assert out.pixels == naive_filter(img, 1).pixels


def test_random_images_match_naive():
    for seed, r in ((0, 1), (1, 2), (2, 5)):
        img = random_image(64, 64, seed)
        assert filter_image(img, r).pixels == naive_filter(img, r).pixels, (seed, r)


def test_non_square_and_odd_sizes():
    for (w, h), r in (((37, 23), 2), ((23, 37), 3), ((9, 50), 4)):
        img = random_image(w, h, w * h)
        assert filter_image(img, r).pixels == naive_filter(img, r).pixels


def test_tile_order_permutation_invariant():
    img = random_image(40, 40, 3)
    r = 2
    tile = 3 * r
    tiles = [(tx, ty) for ty in range(0, 40, tile) for tx in range(0, 40, tile)]
    base = filter_image(img, r)
    shuffled = tiles[:]
    random.Random(9).shuffle(shuffled)
    assert filter_image(img, r, tile_order=shuffled).pixels == base.pixels


def test_radius_validation():
    img = random_image(10, 10, 4)
    with pytest.raises(ValueError):
        filter_image(img, 0)
    with pytest.raises(ValueError):
        filter_image(img, 5)  # window side 11 > 10
    with pytest.raises(ValueError):
        naive_filter(img, 5)


def test_comparisons_are_counted():
    img = random_image(20, 20, 5)
    stats = Stats()
    filter_image(img, 1, stats=stats)
    assert stats.comparisons > 0


def test_16bit_samples():
    img = random_image(20, 20, 6, maxval=65535)
    assert filter_image(img, 2).pixels == naive_filter(img, 2).pixels


# -- PGM ------------------------------------------------------------------


def test_pgm_round_trip_8bit(tmp_path):
    img = random_image(31, 17, 7)
    path = tmp_path / "img.pgm"
    write_pgm(img, path)
    back = read_pgm(path)
    assert back == img
    # re-encoding is byte-stable
    assert encode_pgm(back) == path.read_bytes()


def test_pgm_round_trip_16bit(tmp_path):
    img = random_image(9, 9, 8, maxval=40_000)
    path = tmp_path / "img16.pgm"
    write_pgm(img, path)
    assert read_pgm(path) == img


def test_pgm_comments_and_whitespace():
    raw = b"P5 # magic\n# a comment line\n 3\t2 #dims\n255\n" + bytes(range(6))
    img = parse_pgm(raw)
    assert (img.width, img.height, img.maxval) == (3, 2, 255)
    assert list(img.pixels) == [0, 1, 2, 3, 4, 5]


def test_pgm_rejects_malformed():
    good = b"P5\n2 2\n255\n\x00\x01\x02\x03"
    assert parse_pgm(good).width == 2
    bad_cases = [
        b"P2\n2 2\n255\n\x00\x01\x02\x03",  # ascii magic
        b"P5\n2 2\n255\n\x00\x01\x02",  # short raster
        b"P5\n2 x\n255\n\x00\x01\x02\x03",  # bad height
        b"P5\n2 2\n0\n\x00\x01\x02\x03",  # bad maxval
        b"P5\n2 2\n255",  # truncated
    ]
    for raw in bad_cases:
        with pytest.raises(PgmFormatError):
            parse_pgm(raw)


def test_pgm_16bit_is_big_endian():
    raw = b"P5\n1 1\n1000\n\x01\x02"
    assert list(parse_pgm(raw).pixels) == [0x0102]


def test_gray_image_validation():
    with pytest.raises(ValueError):
        GrayImage(2, 2, 255, array("H", [1, 2, 3]))
    with pytest.raises(ValueError):
        GrayImage(0, 2, 255, array("H", []))
    with pytest.raises(ValueError):
        GrayImage(1, 1, 0, array("H", [0]))
