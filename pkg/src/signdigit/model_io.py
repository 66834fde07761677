"""Bit-exact binary persistence of a network spec and its parameters.

Layout (all integers little-endian):

    magic "SDB1" | u32 version=1 | u32 layer count
    per layer:  u8 kind tag, then the kind's u32 fields
                conv2d(1): out_channels     dense(6): out_features
                dropout(4): the rate's float64 bit pattern as two u32 words
                relu(2) / maxpool2x2(3) / flatten(5) / softmax(7): none
    per parametric layer, ascending index, weights then bias:
                u32 rank | u32 extents... | float64 values (row-major)

Weights are stored as raw 64-bit payloads, so a round trip preserves every
bit and reloaded models predict identically.
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import BinaryIO

import numpy as np

from .nn import LayerSpec, NetworkSpec, Parameters

MAGIC = b"SDB1"
VERSION = 1
MAX_ELEMENTS = 1 << 30  # reject absurd extents before allocating

_KIND_TAGS = {
    "conv2d": 1,
    "relu": 2,
    "maxpool2x2": 3,
    "dropout": 4,
    "flatten": 5,
    "dense": 6,
    "softmax": 7,
}
_TAG_KINDS = {v: k for k, v in _KIND_TAGS.items()}


class ModelFormatError(ValueError):
    pass


class BadMagicError(ModelFormatError):
    pass


class UnsupportedVersionError(ModelFormatError):
    pass


class CorruptExtentsError(ModelFormatError):
    pass


class TruncatedModelError(ModelFormatError):
    pass


def _layer_fields(layer: LayerSpec) -> list[int]:
    if layer.kind == "conv2d":
        return [layer.out_channels]
    if layer.kind == "dense":
        return [layer.out_features]
    if layer.kind == "dropout":
        bits = struct.unpack("<2I", struct.pack("<d", layer.rate))
        return list(bits)
    return []


def _tensor_bytes(t: np.ndarray) -> bytes:
    a = np.ascontiguousarray(t, dtype="<f8")
    head = struct.pack("<I", a.ndim) + struct.pack(f"<{a.ndim}I", *a.shape)
    return head + a.tobytes()


def save_model(spec: NetworkSpec, params: Parameters, sink: str | Path | BinaryIO) -> int:
    """Serialize deterministically; returns the byte count written.

    The format carries no input shape: it is fixed at the pipeline's
    (1, 32, 32), and other specs are rejected rather than silently
    reinterpreted at load time.
    """
    if tuple(spec.input_shape) != (1, 32, 32):
        raise ValueError(f"model files are defined for (1, 32, 32) input, not {spec.input_shape}")
    parts = [MAGIC, struct.pack("<II", VERSION, len(spec.layers))]
    for layer in spec.layers:
        fields = _layer_fields(layer)
        parts.append(struct.pack(f"<B{len(fields)}I", _KIND_TAGS[layer.kind], *fields))
    for i in sorted(params):
        w, b = params[i]
        parts.append(_tensor_bytes(w))
        parts.append(_tensor_bytes(b))
    blob = b"".join(parts)
    if isinstance(sink, (str, Path)):
        Path(sink).write_bytes(blob)
    else:
        sink.write(blob)
    return len(blob)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise TruncatedModelError(
                f"need {n} bytes at offset {self.pos}, have {len(self.data) - self.pos}"
            )
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def u8(self) -> int:
        return self.take(1)[0]


def _read_tensor(r: _Reader) -> np.ndarray:
    rank = r.u32()
    if rank > 8:
        raise CorruptExtentsError(f"tensor rank {rank} is not plausible")
    shape = tuple(r.u32() for _ in range(rank))
    count = 1
    for e in shape:
        count *= e
    if count > MAX_ELEMENTS:
        raise CorruptExtentsError(f"extents {shape} exceed the element cap")
    payload = r.take(8 * count)
    return np.frombuffer(payload, dtype="<f8").reshape(shape).copy()


def load_model(source: str | Path | bytes | BinaryIO) -> tuple[NetworkSpec, Parameters]:
    """Parse a model stream; rejects bad magic, versions, extents, truncation."""
    if isinstance(source, (str, Path)):
        data = Path(source).read_bytes()
    elif isinstance(source, bytes):
        data = source
    else:
        data = source.read()

    r = _Reader(data)
    if r.take(4) != MAGIC:
        raise BadMagicError("not a model file (bad magic)")
    version = r.u32()
    if version != VERSION:
        raise UnsupportedVersionError(f"format version {version} unsupported")
    n_layers = r.u32()
    if n_layers > 1024:
        raise CorruptExtentsError(f"layer count {n_layers} is not plausible")

    layers = []
    for _ in range(n_layers):
        tag = r.u8()
        kind = _TAG_KINDS.get(tag)
        if kind is None:
            raise ModelFormatError(f"unknown layer tag {tag}")
        if kind == "conv2d":
            layers.append(LayerSpec.conv(r.u32()))
        elif kind == "dense":
            layers.append(LayerSpec.dense(r.u32()))
        elif kind == "dropout":
            bits = struct.pack("<2I", r.u32(), r.u32())
            layers.append(LayerSpec.dropout(struct.unpack("<d", bits)[0]))
        else:
            layers.append(LayerSpec(kind))
    spec = NetworkSpec(tuple(layers))

    params: Parameters = {}
    for i, expected in sorted(spec.parameter_shapes().items()):
        w = _read_tensor(r)
        b = _read_tensor(r)
        if w.shape != expected[0] or b.shape != expected[1]:
            raise CorruptExtentsError(
                f"layer {i}: stored {w.shape}/{b.shape}, spec needs {expected}"
            )
        params[i] = (w, b)
    if r.pos != len(data):
        raise ModelFormatError(f"{len(data) - r.pos} trailing bytes after model payload")
    return spec, params
