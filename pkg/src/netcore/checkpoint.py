"""
Network Checkpoints
===================
Flat binary format that round-trips parameters bit-exactly.

Layout:
    [offset] [type]                 [description]
    0000     8 bytes                magic b"M2MNET1\\n"
    0008     uint32 little-endian   header length H
    0012     H bytes UTF-8 JSON     {"input_dim": d, "layers": [{"in", "out", "activation"}]}
    ...      float64 little-endian  for each layer: weight (in x out, row-major), then bias (out)
"""

import json
import struct
from pathlib import Path

import numpy as np

from .network import DenseLayer, DifferentiableNet

MAGIC = b"M2MNET1\n"


def dumps_checkpoint(net: DifferentiableNet) -> bytes:
    header = {
        "input_dim": net.input_dim,
        "layers": [
            {"in": layer.fan_in, "out": layer.fan_out, "activation": layer.activation}
            for layer in net.layers
        ],
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    chunks = [MAGIC, struct.pack("<I", len(header_bytes)), header_bytes]
    for layer in net.layers:
        chunks.append(np.ascontiguousarray(layer.weight, dtype="<f8").tobytes())
        chunks.append(np.ascontiguousarray(layer.bias, dtype="<f8").tobytes())
    return b"".join(chunks)


def loads_checkpoint(blob: bytes) -> DifferentiableNet:
    if not blob.startswith(MAGIC):
        raise ValueError("Not a network checkpoint (bad magic)")
    offset = len(MAGIC)
    (header_len,) = struct.unpack_from("<I", blob, offset)
    offset += 4
    header = json.loads(blob[offset : offset + header_len].decode("utf-8"))
    offset += header_len

    layers = []
    for spec in header["layers"]:
        n_in, n_out = spec["in"], spec["out"]
        weight = np.frombuffer(blob, dtype="<f8", count=n_in * n_out, offset=offset)
        offset += 8 * n_in * n_out
        bias = np.frombuffer(blob, dtype="<f8", count=n_out, offset=offset)
        offset += 8 * n_out
        layers.append(
            DenseLayer(
                weight.reshape(n_in, n_out).astype(np.float64),
                bias.astype(np.float64),
                spec["activation"],
            )
        )

    if offset != len(blob):
        raise ValueError(f"Checkpoint has {len(blob) - offset} trailing bytes")
    return DifferentiableNet(layers)


def save_checkpoint(net: DifferentiableNet, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(dumps_checkpoint(net))
    return path


def load_checkpoint(path) -> DifferentiableNet:
    return loads_checkpoint(Path(path).read_bytes())
