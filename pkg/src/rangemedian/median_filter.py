"""2D median filtering of grayscale images with square windows.

The filtered value of pixel (x, y) is the lower median of the (2r+1) x (2r+1)
window centred there, with out-of-bounds reads clamped to the nearest edge
pixel (replicate border).  The fast path processes the image in tiles of
3r x 3r output pixels; within a tile the pixels of the current (2r+1)-row
strip live in a dynamic range structure in column-major order, so every
window is one contiguous handle range and advancing a row costs one delete
plus one insert per strip column.  A per-window sort oracle exists alongside
for verification.
"""

from __future__ import annotations

import sys
from array import array
from dataclasses import dataclass

from .core import Stats, median_rank
from .dynamic_rmp import DynamicTree


@dataclass
class GrayImage:
    """Row-major grayscale image with 8- or 16-bit samples."""

    width: int
    height: int
    maxval: int
    pixels: array

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be positive")
        if not 1 <= self.maxval <= 65535:
            raise ValueError(f"maxval {self.maxval} outside [1, 65535]")
        if len(self.pixels) != self.width * self.height:
            raise ValueError(
                f"pixel count {len(self.pixels)} != {self.width}x{self.height}"
            )

    @classmethod
    def from_rows(cls, rows, maxval: int = 255) -> "GrayImage":
        pixels = array("H")
        for row in rows:
            pixels.extend(row)
        return cls(len(rows[0]), len(rows), maxval, pixels)

    def at(self, x: int, y: int) -> int:
        """Sample with clamping: out-of-range coordinates read the edge."""
        if x < 0:
            x = 0
        elif x >= self.width:
            x = self.width - 1
        if y < 0:
            y = 0
        elif y >= self.height:
            y = self.height - 1
        return self.pixels[y * self.width + x]


def _check_radius(img: GrayImage, r: int) -> None:
    if r < 1:
        raise ValueError(f"radius must be >= 1, got {r}")
    if 2 * r + 1 > min(img.width, img.height):
        raise ValueError(
            f"window side {2 * r + 1} exceeds image extent "
            f"{img.width}x{img.height}"
        )


def naive_filter(img: GrayImage, r: int) -> GrayImage:
    """Reference filter: copy and sort every window.  Ground truth only."""
    _check_radius(img, r)
    w, h, px = img.width, img.height, img.pixels
    out = array("H", bytes(2 * w * h))
    rank = median_rank((2 * r + 1) ** 2) - 1
    for y in range(h):
        ylo, yhi = y - r, y + r + 1
        for x in range(w):
            window = []
            for wy in range(ylo, yhi):
                cy = 0 if wy < 0 else (h - 1 if wy >= h else wy)
                base = cy * w
                for wx in range(x - r, x + r + 1):
                    cx = 0 if wx < 0 else (w - 1 if wx >= w else wx)
                    window.append(px[base + cx])
            window.sort()
            out[y * w + x] = window[rank]
    return GrayImage(w, h, img.maxval, out)


def filter_image(
    img: GrayImage,
    r: int,
    seed: int = 0,
    stats: Stats | None = None,
    tile_order: list[tuple[int, int]] | None = None,
) -> GrayImage:
    """Median filter via per-tile dynamic range structures.

    Output tiles are 3r x 3r; tiles are independent (each gets its own
    structure), so any processing order gives identical output.  `stats`
    accumulates the element-comparison counts across all tiles.
    """
    _check_radius(img, r)
    w, h = img.width, img.height
    out = array("H", bytes(2 * w * h))
    if stats is None:
        stats = Stats()
    tile = 3 * r
    if tile_order is None:
        tile_order = [
            (tx, ty) for ty in range(0, h, tile) for tx in range(0, w, tile)
        ]
    for tx, ty in tile_order:
        _filter_tile(
            img, r, tx, ty, min(tile, w - tx), min(tile, h - ty), out, stats, seed
        )
    return GrayImage(w, h, img.maxval, out)


def _filter_tile(img, r, tx, ty, tw, th, out, stats, seed):
    w, h, px = img.width, img.height, img.pixels
    wm1, hm1 = w - 1, h - 1
    tree = DynamicTree(seed=seed, stats=stats)
    side = 2 * r + 1
    ncols = tw + 2 * r
    rank = median_rank(side * side)

    def sample(cx, cy):
        if cx < 0:
            cx = 0
        elif cx > wm1:
            cx = wm1
        if cy < 0:
            cy = 0
        elif cy > hm1:
            cy = hm1
        return px[cy * w + cx]

    # strip over virtual columns [tx-r, tx+tw-1+r], rows [ty-r, ty+r],
    # inserted column-major so each window is a contiguous handle range
    cols: list[list] = []
    last = None
    for ci in range(ncols):
        cx = tx - r + ci
        block = []
        for cy in range(ty - r, ty + r + 1):
            last = tree.insert(last, sample(cx, cy))
            block.append(last)
        cols.append(block)

    span = 2 * r
    for oy in range(ty, ty + th):
        row_base = oy * w
        for ox in range(tx, tx + tw):
            ci = ox - tx
            out[row_base + ox] = tree.query(cols[ci][0], cols[ci + span][-1], rank)
        if oy < ty + th - 1:
            ny = oy + r + 1
            for ci in range(ncols):
                block = cols[ci]
                old = block.pop(0)
                newh = tree.insert(block[-1], sample(tx - r + ci, ny))
                block.append(newh)
                tree.delete(old)


# -- PGM (P5) I/O -----------------------------------------------------------


class PgmFormatError(ValueError):
    """Raised for malformed PGM input."""


def _next_token(data: bytes, i: int) -> tuple[bytes, int]:
    n = len(data)
    while i < n:
        c = data[i]
        if c in b" \t\r\n":
            i += 1
        elif c == ord("#"):
            while i < n and data[i] not in b"\r\n":
                i += 1
        else:
            break
    if i >= n:
        raise PgmFormatError("truncated header")
    start = i
    while i < n and data[i] not in b" \t\r\n":
        i += 1
    return data[start:i], i


def parse_pgm(data: bytes) -> GrayImage:
    """Decode a binary (P5) PGM byte string."""
    magic, i = _next_token(data, 0)
    if magic != b"P5":
        raise PgmFormatError(f"not a binary PGM (magic {magic!r})")
    fields = []
    for name in ("width", "height", "maxval"):
        tok, i = _next_token(data, i)
        try:
            fields.append(int(tok))
        except ValueError:
            raise PgmFormatError(f"bad {name} field {tok!r}") from None
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise PgmFormatError(f"bad dimensions {width}x{height}")
    if not 1 <= maxval <= 65535:
        raise PgmFormatError(f"maxval {maxval} outside [1, 65535]")
    if i >= len(data) or data[i] not in b" \t\r\n":
        raise PgmFormatError("missing whitespace after maxval")
    i += 1  # exactly one whitespace byte separates header and raster
    count = width * height
    if maxval <= 255:
        raster = data[i : i + count]
        if len(raster) != count:
            raise PgmFormatError(f"expected {count} samples, got {len(raster)}")
        pixels = array("H", list(raster))  # one byte per sample
    else:
        raster = data[i : i + 2 * count]
        if len(raster) != 2 * count:
            raise PgmFormatError(f"expected {2 * count} raster bytes, got {len(raster)}")
        pixels = array("H")
        pixels.frombytes(raster)
        if sys.byteorder == "little":
            pixels.byteswap()  # samples are big-endian on the wire
    if max(pixels, default=0) > maxval:
        raise PgmFormatError("sample exceeds maxval")
    return GrayImage(width, height, maxval, pixels)


def encode_pgm(img: GrayImage) -> bytes:
    """Encode as binary (P5) PGM bytes."""
    header = f"P5\n{img.width} {img.height}\n{img.maxval}\n".encode("ascii")
    if img.maxval <= 255:
        return header + array("B", img.pixels).tobytes()
    samples = array("H", img.pixels)
    if sys.byteorder == "little":
        samples.byteswap()
    return header + samples.tobytes()


def read_pgm(path) -> GrayImage:
    with open(path, "rb") as f:
        return parse_pgm(f.read())


def write_pgm(img: GrayImage, path) -> None:
    with open(path, "wb") as f:
        f.write(encode_pgm(img))
