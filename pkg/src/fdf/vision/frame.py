"""Grayscale cabin frames and binary PGM (P5) file I/O."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import ShapeError

MIN_FRAME_SIDE = 16


@dataclass(frozen=True)
class Frame:
    """One 8-bit luminance image from a cabin camera.

    ``pixels`` is a (height, width) uint8 array; ``timestamp`` is in
    sim-seconds.
    """

    pixels: np.ndarray
    timestamp: int = 0

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.uint8)
        if px.ndim != 2:
            raise ShapeError(f"frame pixels must be 2-D, got shape {px.shape}")
        h, w = px.shape
        if w < MIN_FRAME_SIDE or h < MIN_FRAME_SIDE:
            raise ShapeError(f"frame must be at least {MIN_FRAME_SIDE}x{MIN_FRAME_SIDE}, got {w}x{h}")
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class ForegroundMask:
    """Boolean image: True marks pixels classified as foreground."""

    bits: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.bits, dtype=bool)
        if b.ndim != 2:
            raise ShapeError(f"mask bits must be 2-D, got shape {b.shape}")
        object.__setattr__(self, "bits", b)

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]


def frame_filename(bus_id: str, timestamp: int) -> str:
    return f"{bus_id}_{timestamp}.pgm"


def parse_frame_filename(name: str) -> tuple[str, int]:
    """Split ``<bus>_<timestamp>.pgm`` into (bus_id, timestamp).

    Bus ids may themselves contain underscores; the timestamp is the part
    after the last one.
    """
    stem = Path(name).name
    if not stem.endswith(".pgm"):
        raise ValueError(f"not a pgm filename: {name!r}")
    stem = stem[: -len(".pgm")]
    bus_id, _, ts = stem.rpartition("_")
    if not bus_id or not ts.isdigit():
        raise ValueError(f"filename {name!r} does not match <bus>_<timestamp>.pgm")
    return bus_id, int(ts)


def write_pgm(path: str | Path, frame: Frame) -> None:
    """Write a frame as binary PGM (P5), maxval 255."""
    header = f"P5\n{frame.width} {frame.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + frame.pixels.tobytes())


def read_pgm(path: str | Path, timestamp: int | None = None) -> Frame:
    """Read a binary PGM (P5) file into a Frame.

    If ``timestamp`` is None it is taken from the filename when it matches
    the ``<bus>_<timestamp>.pgm`` convention, else 0.
    """
    raw = Path(path).read_bytes()
    if not raw.startswith(b"P5"):
        raise ValueError(f"{path}: not a binary PGM (P5) file")

    # Header: magic, width, height, maxval - separated by whitespace,
    # '#' comments allowed through end of line.
    pos = 2
    fields: list[int] = []
    while len(fields) < 3:
        while pos < len(raw) and raw[pos : pos + 1].isspace():
            pos += 1
        if pos < len(raw) and raw[pos : pos + 1] == b"#":
            eol = raw.find(b"\n", pos)
            pos = len(raw) if eol == -1 else eol + 1
            continue
        m = re.match(rb"\d+", raw[pos:])
        if not m:
            raise ValueError(f"{path}: malformed PGM header")
        fields.append(int(m.group()))
        pos += m.end()
    pos += 1  # single whitespace byte after maxval
    width, height, maxval = fields
    if maxval != 255:
        raise ValueError(f"{path}: only 8-bit PGM supported (maxval 255, got {maxval})")
    data = raw[pos : pos + width * height]
    if len(data) != width * height:
        raise ValueError(f"{path}: truncated pixel data")
    pixels = np.frombuffer(data, dtype=np.uint8).reshape(height, width)

    if timestamp is None:
        try:
            _, timestamp = parse_frame_filename(Path(path).name)
        except ValueError:
            timestamp = 0
    return Frame(pixels=pixels.copy(), timestamp=timestamp)
