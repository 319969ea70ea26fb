"""Raster images, mask application, and the PPM/PNG codecs.

Images are 8-bit RGB, row-major, top-left origin.  PPM (binary P6) is the
golden interchange format: its canonical encoding here is byte-reproducible,
so equality of files means equality of images.  PNG support covers 8-bit
truecolor only and exists for human inspection.

Masks index rows from the bottom; `apply_mask` is the single place where
that convention meets top-left rasters.
"""

from __future__ import annotations

import enum
import struct
import zlib
from dataclasses import dataclass

from .errors import DimensionMismatch, FormatError
from .maskgen import ImageDims, Mask

_PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


@dataclass(frozen=True)
class ImageBuffer:
    """An l x h RGB raster: 3 bytes per pixel, rows top to bottom."""

    dims: ImageDims
    data: bytes

    def __post_init__(self):
        expected = 3 * self.dims.area
        if len(self.data) != expected:
            raise ValueError(
                f"pixel payload is {len(self.data)} bytes, "
                f"{self.dims.l}x{self.dims.h} RGB needs {expected}"
            )

    def pixel(self, x: int, y: int) -> tuple[int, int, int]:
        """Color at column x, top-down row y."""
        i = 3 * (y * self.dims.l + x)
        return (self.data[i], self.data[i + 1], self.data[i + 2])


def solid_image(dims: ImageDims, rgb: tuple[int, int, int] = (0, 0, 0)) -> ImageBuffer:
    return ImageBuffer(dims, bytes(rgb) * dims.area)


def apply_mask(image: ImageBuffer, mask: Mask) -> ImageBuffer:
    """Overwrite the image with every mask pixel; returns a new buffer.

    Mask rows count from the bottom, so mask pixel (x, y) lands on raster
    row h-1-y.  Overwrites replace the full color, no blending.
    """
    if image.dims != mask.dims:
        raise DimensionMismatch(
            f"image is {image.dims.l}x{image.dims.h} "
            f"but mask is {mask.dims.l}x{mask.dims.h}"
        )
    out = bytearray(image.data)
    h, l = image.dims.h, image.dims.l
    for p in mask.pixels:
        i = 3 * ((h - 1 - p.y) * l + p.x)
        out[i] = p.r
        out[i + 1] = p.g
        out[i + 2] = p.b
    return ImageBuffer(image.dims, bytes(out))


class ImageFormat(enum.Enum):
    PPM = "ppm"
    PNG = "png"


def encode_image(image: ImageBuffer, format: ImageFormat) -> bytes:
    if format is ImageFormat.PPM:
        return encode_ppm(image)
    return encode_png(image)


def decode_image(data: bytes) -> ImageBuffer:
    """Decode PPM or PNG bytes, sniffing the format from the magic."""
    if data[:2] == b"P6":
        return decode_ppm(data)
    if data[: len(_PNG_SIGNATURE)] == _PNG_SIGNATURE:
        return decode_png(data)
    raise FormatError("not a PPM (P6) or PNG payload")


# --- PPM (binary P6, maxval 255) -------------------------------------------


def encode_ppm(image: ImageBuffer) -> bytes:
    """Canonical P6: single-space separators, one newline after the maxval."""
    header = f"P6\n{image.dims.l} {image.dims.h}\n255\n".encode("ascii")
    return header + image.data


def decode_ppm(data: bytes) -> ImageBuffer:
    pos = 2
    if data[:2] != b"P6":
        raise FormatError("not a P6 header")

    def token() -> bytes:
        nonlocal pos
        # Whitespace and '#' comments may separate header tokens.
        while pos < len(data):
            c = data[pos : pos + 1]
            if c == b"#":
                while pos < len(data) and data[pos : pos + 1] != b"\n":
                    pos += 1
            elif c.isspace():
                pos += 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise FormatError("truncated P6 header")
        return data[start:pos]

    fields = []
    for _ in range(3):
        t = token()
        if not t.isdigit():
            raise FormatError(f"malformed P6 header token {t!r}")
        fields.append(int(t))
    width, height, maxval = fields
    if maxval != 255:
        raise FormatError(f"unsupported P6 maxval {maxval}, only 255 is handled")
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise FormatError("missing raster separator after maxval")
    pos += 1

    body = data[pos:]
    expected = 3 * width * height
    if len(body) < expected:
        raise FormatError(
            f"truncated P6 raster: got {len(body)} bytes, need {expected}"
        )
    if len(body) > expected:
        raise FormatError(
            f"trailing bytes after P6 raster: got {len(body)}, need {expected}"
        )
    return ImageBuffer(ImageDims(width, height), body)


# --- PNG (8-bit RGB, non-interlaced) ----------------------------------------


def _chunk(tag: bytes, payload: bytes) -> bytes:
    crc = zlib.crc32(tag + payload)
    return struct.pack(">I", len(payload)) + tag + payload + struct.pack(">I", crc)


def encode_png(image: ImageBuffer) -> bytes:
    l, h = image.dims.l, image.dims.h
    ihdr = struct.pack(">IIBBBBB", l, h, 8, 2, 0, 0, 0)
    stride = 3 * l
    raw = bytearray()
    for y in range(h):
        raw.append(0)  # filter type None per row
        raw += image.data[y * stride : (y + 1) * stride]
    return (
        _PNG_SIGNATURE
        + _chunk(b"IHDR", ihdr)
        + _chunk(b"IDAT", zlib.compress(bytes(raw)))
        + _chunk(b"IEND", b"")
    )


def _unfilter(h: int, stride: int, raw: bytes) -> bytes:
    out = bytearray()
    prev = bytes(stride)
    pos = 0
    for _ in range(h):
        ftype = raw[pos]
        line = bytearray(raw[pos + 1 : pos + 1 + stride])
        pos += 1 + stride
        if ftype == 1:  # Sub
            for x in range(stride):
                a = line[x - 3] if x >= 3 else 0
                line[x] = (line[x] + a) & 0xFF
        elif ftype == 2:  # Up
            for x in range(stride):
                line[x] = (line[x] + prev[x]) & 0xFF
        elif ftype == 3:  # Average
            for x in range(stride):
                a = line[x - 3] if x >= 3 else 0
                line[x] = (line[x] + (a + prev[x]) // 2) & 0xFF
        elif ftype == 4:  # Paeth
            for x in range(stride):
                a = line[x - 3] if x >= 3 else 0
                b = prev[x]
                c = prev[x - 3] if x >= 3 else 0
                p = a + b - c
                pa, pb, pc = abs(p - a), abs(p - b), abs(p - c)
                if pa <= pb and pa <= pc:
                    pred = a
                elif pb <= pc:
                    pred = b
                else:
                    pred = c
                line[x] = (line[x] + pred) & 0xFF
        elif ftype != 0:
            raise FormatError(f"invalid PNG filter type {ftype}")
        out += line
        prev = line
    return bytes(out)


def decode_png(data: bytes) -> ImageBuffer:
    if data[: len(_PNG_SIGNATURE)] != _PNG_SIGNATURE:
        raise FormatError("bad PNG signature")
    pos = len(_PNG_SIGNATURE)
    idat = bytearray()
    ihdr = None
    while True:
        if pos + 8 > len(data):
            raise FormatError("truncated PNG: missing IEND")
        length, tag = struct.unpack(">I4s", data[pos : pos + 8])
        payload = data[pos + 8 : pos + 8 + length]
        if len(payload) != length or pos + 12 + length > len(data):
            raise FormatError(f"truncated PNG chunk {tag!r}")
        (crc,) = struct.unpack(">I", data[pos + 8 + length : pos + 12 + length])
        if crc != zlib.crc32(tag + payload):
            raise FormatError(f"PNG chunk {tag!r} fails its checksum")
        pos += 12 + length
        if tag == b"IHDR":
            if ihdr is not None:
                raise FormatError("duplicate IHDR")
            ihdr = struct.unpack(">IIBBBBB", payload)
        elif tag == b"IDAT":
            if ihdr is None:
                raise FormatError("IDAT before IHDR")
            idat += payload
        elif tag == b"IEND":
            break
        # ancillary chunks are skipped

    if ihdr is None:
        raise FormatError("PNG has no IHDR")
    width, height, depth, color, comp, filt, interlace = ihdr
    if depth != 8 or color != 2:
        raise FormatError(
            f"unsupported PNG pixel format (depth={depth}, color={color}); "
            "only 8-bit RGB is handled"
        )
    if comp != 0 or filt != 0 or interlace != 0:
        raise FormatError("unsupported PNG compression/filter/interlace method")

    try:
        raw = zlib.decompress(bytes(idat))
    except zlib.error as exc:
        raise FormatError(f"corrupt PNG image data: {exc}") from exc
    stride = 3 * width
    if len(raw) != (stride + 1) * height:
        raise FormatError("PNG image data does not match its declared size")
    return ImageBuffer(ImageDims(width, height), _unfilter(height, stride, raw))
