"""Netpbm image I/O (P2/P5 grayscale, P3/P6 color) and CSV slice export.

Pixel values are normalised to [0, 1] on load by dividing by maxval and
quantised with round-half-even on save, so a write/read round trip is
accurate to half a quantisation step.  Color images use a planes-first
(3, n, m) layout in memory.  All writes are byte-deterministic.
"""

from __future__ import annotations

import numpy as np

from .grid import as_image

LUMA_WEIGHTS = (0.299, 0.587, 0.114)

_MAGICS = ("P2", "P3", "P5", "P6")


class NetpbmParseError(ValueError):
    """Malformed Netpbm input; the message names the failing byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


class _Tokenizer:
    """Whitespace/comment-aware scanner over the header bytes."""

    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def _skip_separators(self):
        data = self.data
        while self.pos < len(data):
            ch = data[self.pos : self.pos + 1]
            if ch.isspace():
                self.pos += 1
            elif ch == b"#":
                nl = data.find(b"\n", self.pos)
                self.pos = len(data) if nl < 0 else nl + 1
            else:
                return

    def token(self, what: str) -> bytes:
        self._skip_separators()
        if self.pos >= len(self.data):
            raise NetpbmParseError(f"missing {what}", self.pos)
        start = self.pos
        while self.pos < len(self.data):
            ch = self.data[self.pos : self.pos + 1]
            if ch.isspace() or ch == b"#":
                break
            self.pos += 1
        return self.data[start : self.pos]

    def integer(self, what: str) -> int:
        start_err = self.pos
        tok = self.token(what)
        try:
            return int(tok)
        except ValueError:
            raise NetpbmParseError(
                f"invalid {what} {tok[:20]!r}", max(start_err, self.pos - len(tok))
            ) from None


def read_image(path) -> np.ndarray:
    """Load a Netpbm file; returns (n, m) or (3, n, m) in [0, 1]."""
    with open(path, "rb") as fh:
        data = fh.read()
    tok = _Tokenizer(data)
    magic = tok.token("magic number").decode("ascii", "replace")
    if magic not in _MAGICS:
        raise NetpbmParseError(f"unsupported magic {magic!r}", 0)
    width = tok.integer("width")
    height = tok.integer("height")
    maxval_pos = tok.pos
    maxval = tok.integer("maxval")
    if width < 1 or height < 1:
        raise NetpbmParseError("width and height must be >= 1", 2)
    if not 1 <= maxval <= 65535:
        raise NetpbmParseError("maxval must be in [1, 65535]", maxval_pos)
    channels = 3 if magic in ("P3", "P6") else 1
    count = width * height * channels

    if magic in ("P2", "P3"):
        samples = np.empty(count, dtype=np.float64)
        for k in range(count):
            pos = tok.pos
            value = tok.integer("pixel value")
            if not 0 <= value <= maxval:
                raise NetpbmParseError(f"sample {value} exceeds maxval", pos)
            samples[k] = value
    else:
        # single whitespace byte separates maxval from the binary payload
        if tok.pos >= len(data) or not data[tok.pos : tok.pos + 1].isspace():
            raise NetpbmParseError("expected whitespace before payload", tok.pos)
        start = tok.pos + 1
        itemsize = 1 if maxval <= 255 else 2
        end = start + count * itemsize
        if len(data) < end:
            raise NetpbmParseError("truncated payload", len(data))
        dtype = np.uint8 if itemsize == 1 else np.dtype(">u2")
        raw = np.frombuffer(data[start:end], dtype=dtype)
        if raw.max(initial=0) > maxval:
            raise NetpbmParseError("sample exceeds maxval", start)
        samples = raw.astype(np.float64)

    samples /= maxval
    if channels == 1:
        return samples.reshape(height, width)
    return samples.reshape(height, width, 3).transpose(2, 0, 1)


def write_image(path, img, fmt: str | None = None, maxval: int = 255) -> None:
    """Write ``img`` (2-D or (3, n, m)) as a Netpbm file.

    ``fmt`` defaults to binary (P5 for grayscale, P6 for color); pass P2
    or P3 for the ASCII variants.
    """
    img = np.asarray(img, dtype=np.float64)
    if img.ndim == 2:
        planes = img[None]
        default_fmt = "P5"
    elif img.ndim == 3 and img.shape[0] == 3:
        planes = img
        default_fmt = "P6"
    else:
        raise ValueError(f"expected (n, m) or (3, n, m) image, got {img.shape}")
    fmt = default_fmt if fmt is None else fmt.upper()
    if fmt not in _MAGICS:
        raise ValueError(f"unsupported format {fmt!r}")
    if (fmt in ("P2", "P5")) != (planes.shape[0] == 1):
        raise ValueError(f"format {fmt} does not match channel count")
    if not 1 <= maxval <= 65535:
        raise ValueError("maxval must be in [1, 65535]")

    quant = np.clip(np.rint(planes * maxval), 0, maxval).astype(np.uint32)
    n, m = quant.shape[1], quant.shape[2]
    interleaved = quant.transpose(1, 2, 0).reshape(n, -1)
    header = f"{fmt}\n{m} {n}\n{maxval}\n".encode("ascii")
    if fmt in ("P2", "P3"):
        body = "\n".join(" ".join(str(v) for v in row) for row in interleaved)
        payload = body.encode("ascii") + b"\n"
    else:
        dtype = np.uint8 if maxval <= 255 else np.dtype(">u2")
        payload = interleaved.astype(dtype).tobytes()
    with open(path, "wb") as fh:
        fh.write(header + payload)


def luma(planes) -> np.ndarray:
    """RGB (3, n, m) to grayscale via 0.299 R + 0.587 G + 0.114 B."""
    planes = np.asarray(planes, dtype=np.float64)
    if planes.ndim != 3 or planes.shape[0] != 3:
        raise ValueError(f"expected (3, n, m) image, got {planes.shape}")
    r, g, b = LUMA_WEIGHTS
    return r * planes[0] + g * planes[1] + b * planes[2]


def load_mask(path) -> np.ndarray:
    """Read a mask image: any pixel value > 0.5 marks a known pixel."""
    img = read_image(path)
    if img.ndim == 3:
        img = luma(img)
    return (img > 0.5).astype(np.float64)


def middle_row(n: int) -> int:
    """1-based middle row index, floor((n + 1) / 2)."""
    return (n + 1) // 2


def export_slice(img, row, path) -> None:
    """Write one row of ``img`` as CSV with header ``j,value``.

    ``row`` is a 1-based index or the string ``middle``; values are
    written with full float precision.
    """
    img = as_image(img)
    n = img.shape[0]
    if row == "middle":
        index = middle_row(n)
    else:
        index = int(row)
    if not 1 <= index <= n:
        raise ValueError(f"row {index} out of range 1..{n}")
    lines = ["j,value"]
    lines.extend(f"{j + 1},{img[index - 1, j]!r}" for j in range(img.shape[1]))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
