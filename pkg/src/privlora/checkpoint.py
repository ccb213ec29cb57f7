"""Shared binary checkpoint format.

Little-endian layout: magic "PLLB", format version u32, then one record per
segment: name length u32, name bytes (utf-8), rank u32, dims u32 each,
float64 values. Segments are read until end of file.
"""

from __future__ import annotations

import struct

import numpy as np

from .diffmodel import LoraDenoiser, LoraLayer
from .numkit import ContractError, ParamVector

MAGIC = b"PLLB"
VERSION = 1


def save_params(path, pv: ParamVector) -> None:
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", VERSION))
        for name, arr in pv.segments():
            raw = name.encode("utf-8")
            fh.write(struct.pack("<I", len(raw)))
            fh.write(raw)
            fh.write(struct.pack("<I", arr.ndim))
            for d in arr.shape:
                fh.write(struct.pack("<I", d))
            fh.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())


def load_params(path) -> ParamVector:
    with open(path, "rb") as fh:
        if fh.read(4) != MAGIC:
            raise ContractError(f"{path}: bad magic")
        (version,) = struct.unpack("<I", fh.read(4))
        if version != VERSION:
            raise ContractError(f"{path}: unsupported format version {version}")
        segs = []
        while True:
            head = fh.read(4)
            if head == b"":
                break
            (name_len,) = struct.unpack("<I", head)
            name = fh.read(name_len).decode("utf-8")
            (rank,) = struct.unpack("<I", fh.read(4))
            dims = struct.unpack(f"<{rank}I", fh.read(4 * rank)) if rank else ()
            count = 1
            for d in dims:
                count *= d
            data = np.frombuffer(fh.read(8 * count), dtype="<f8").reshape(dims)
            segs.append((name, data.astype(np.float64)))
    return ParamVector(segs)


def denoiser_to_params(model: LoraDenoiser) -> ParamVector:
    """Full denoiser state plus the metadata needed to rebuild it."""
    meta = np.array([model.data_dim, model.n_classes, model.T, model.time_dim,
                     len(model.layers)], dtype=np.float64)
    segs = [("meta", meta), ("cond_table", model.cond_table)]
    for i, layer in enumerate(model.layers):
        segs.append((f"layer{i}.w", layer.frozen_w))
        segs.append((f"layer{i}.b", layer.b))
        segs.append((f"layer{i}.a", layer.a))
        segs.append((f"layer{i}.scale", np.array([layer.scale])))
    return ParamVector(segs)


def denoiser_from_params(pv: ParamVector) -> LoraDenoiser:
    meta = pv["meta"]
    data_dim, _, T, time_dim, n_layers = (int(v) for v in meta)
    layers = []
    for i in range(n_layers):
        layers.append(LoraLayer(pv[f"layer{i}.w"], pv[f"layer{i}.b"], pv[f"layer{i}.a"],
                                float(pv[f"layer{i}.scale"][0])))
    return LoraDenoiser(layers, pv["cond_table"], data_dim, T, time_dim)
