"""PGM (P2 ASCII / P5 binary) reading and writing.

The only bundled image format: zero dependencies and bit-exact round
trips for integer images. Maxval up to 65535 (two-byte big-endian samples
in P5, per the format). Parse failures carry the byte offset.
"""

from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import InvalidParameterError, PgmParseError
from .image import as_image

_WHITESPACE = b" \t\r\n\x0b\x0c"


class PgmHeader(NamedTuple):
    magic: str
    width: int
    height: int
    maxval: int
    data_offset: int


def _next_token(data, pos):
    """Skip whitespace and '#' comments; return (token, token_start, end)."""
    n = len(data)
    while pos < n:
        byte = data[pos:pos + 1]
        if byte in b"#":
            while pos < n and data[pos:pos + 1] not in b"\r\n":
                pos += 1
        elif byte in _WHITESPACE:
            pos += 1
        else:
            break
    if pos >= n:
        raise PgmParseError("unexpected end of header", pos)
    start = pos
    while pos < n and data[pos:pos + 1] not in _WHITESPACE and data[pos:pos + 1] != b"#":
        pos += 1
    return data[start:pos], start, pos


def _header_int(data, pos, what, upper=None):
    token, start, pos = _next_token(data, pos)
    try:
        value = int(token)
    except ValueError:
        raise PgmParseError(f"{what} is not an integer: {token!r}", start) from None
    if value <= 0:
        raise PgmParseError(f"{what} must be positive, got {value}", start)
    if upper is not None and value > upper:
        raise PgmParseError(f"{what} {value} exceeds the supported maximum {upper}", start)
    return value, pos


def inspect_pgm(path) -> PgmHeader:
    """Parse the header only; `data_offset` is where pixel data begins."""
    data = Path(path).read_bytes()
    return _parse_header(data)


def _parse_header(data):
    magic, start, pos = _next_token(data, 0)
    if magic not in (b"P2", b"P5"):
        raise PgmParseError(f"unsupported magic {magic!r} (want P2 or P5)", start)
    width, pos = _header_int(data, pos, "width")
    height, pos = _header_int(data, pos, "height")
    maxval, pos = _header_int(data, pos, "maxval", upper=65535)
    if magic == b"P5":
        # exactly one whitespace byte separates the header from the payload
        if pos >= len(data) or data[pos:pos + 1] not in _WHITESPACE:
            raise PgmParseError("missing whitespace after maxval", pos)
        pos += 1
    return PgmHeader(magic.decode(), width, height, maxval, pos)


def load_pgm(path) -> np.ndarray:
    """Load a P2/P5 PGM file as a float64 image."""
    data = Path(path).read_bytes()
    header = _parse_header(data)
    count = header.width * header.height
    if header.magic == "P5":
        bytes_per = 1 if header.maxval < 256 else 2
        need = count * bytes_per
        avail = len(data) - header.data_offset
        if avail < need:
            raise PgmParseError(
                f"truncated pixel data: expected {need} bytes, got {avail}",
                len(data))
        dtype = np.uint8 if bytes_per == 1 else np.dtype(">u2")
        flat = np.frombuffer(data, dtype=dtype, count=count,
                             offset=header.data_offset)
        samples = flat.astype(np.float64)
    else:
        samples = np.empty(count)
        pos = header.data_offset
        for i in range(count):
            try:
                token, start, pos = _next_token(data, pos)
            except PgmParseError:
                raise PgmParseError(
                    f"truncated pixel data: expected {count} samples, got {i}",
                    len(data)) from None
            try:
                value = int(token)
            except ValueError:
                raise PgmParseError(f"sample is not an integer: {token!r}",
                                    start) from None
            if value < 0 or value > header.maxval:
                raise PgmParseError(
                    f"sample value {value} outside [0, {header.maxval}]", start)
            samples[i] = value
    return samples.reshape(header.height, header.width)


def save_pgm(img, path, maxval=255, binary=True):
    """Write an image, clamping to [0, maxval] and rounding half away from zero."""
    f = as_image(img)
    if not 1 <= maxval <= 65535:
        raise InvalidParameterError("maxval must lie in [1, 65535]")
    clamped = np.clip(f, 0.0, float(maxval))
    quantized = np.floor(clamped + 0.5).astype(np.uint32)
    h, w = f.shape
    magic = "P5" if binary else "P2"
    header = f"{magic}\n{w} {h}\n{maxval}\n".encode()
    with open(path, "wb") as fh:
        fh.write(header)
        if binary:
            dtype = np.uint8 if maxval < 256 else np.dtype(">u2")
            fh.write(quantized.astype(dtype).tobytes())
        else:
            lines = [" ".join(str(v) for v in row) for row in quantized]
            fh.write(("\n".join(lines) + "\n").encode())
