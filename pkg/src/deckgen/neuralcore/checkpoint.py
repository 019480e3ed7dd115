"""Checkpoint file format.

Layout: magic ``DGCK1``, a UTF-8 JSON header (model config plus name,
shape, dtype, and blob offset per parameter) space-padded so the data
region starts on a 64-byte boundary, then raw little-endian float32
blobs in header order. Values are stored as float32; loading restores
float64 arrays with the documented precision loss.
"""

from __future__ import annotations

import json

import numpy as np

from ..errors import BadMagic, ShapeMismatch
from .params import ParamStore

MAGIC = b"DGCK1"
_ALIGN = 64


def save_checkpoint(store: ParamStore, path, config: dict | None = None) -> None:
    entries = []
    blobs = []
    offset = 0
    for name in store.names():
        arr = store.value(name).astype("<f4")
        blob = arr.tobytes(order="C")
        entries.append(
            {"name": name, "shape": list(arr.shape), "dtype": "float32", "offset": offset}
        )
        blobs.append(blob)
        offset += len(blob)

    header = json.dumps({"config": config or {}, "params": entries}, ensure_ascii=False)
    header_bytes = header.encode("utf-8")
    prefix_len = len(MAGIC) + len(header_bytes)
    pad = (-prefix_len) % _ALIGN
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(header_bytes)
        fh.write(b" " * pad)
        for blob in blobs:
            fh.write(blob)


def load_checkpoint(path, expected_config: dict | None = None) -> tuple[ParamStore, dict]:
    """Load a checkpoint; returns (store, config).

    When ``expected_config`` is given, every key it shares with the stored
    config must agree, else ShapeMismatch.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(MAGIC):
        raise BadMagic("not a deckgen checkpoint")
    text = data[len(MAGIC):].decode("utf-8", errors="replace")
    try:
        obj, end = json.JSONDecoder().raw_decode(text)
    except json.JSONDecodeError as exc:
        raise BadMagic(f"corrupt checkpoint header: {exc}") from exc
    if not isinstance(obj, dict) or "params" not in obj:
        raise BadMagic("checkpoint header missing 'params'")

    header_len = len(text[:end].encode("utf-8"))
    blob_start = len(MAGIC) + header_len
    blob_start += (-blob_start) % _ALIGN

    config = obj.get("config", {})
    if expected_config is not None:
        for key, want in expected_config.items():
            if key in config and config[key] != want:
                raise ShapeMismatch(
                    f"checkpoint {key}={config[key]!r} but expected {want!r}"
                )

    store = ParamStore()
    for entry in obj["params"]:
        shape = tuple(entry["shape"])
        count = int(np.prod(shape)) if shape else 1
        offset = blob_start + entry["offset"]
        if offset + 4 * count > len(data):
            raise BadMagic("checkpoint truncated")
        arr = np.frombuffer(data, dtype="<f4", count=count, offset=offset)
        store.add(entry["name"], arr.reshape(shape).astype(np.float64))
    return store, config
