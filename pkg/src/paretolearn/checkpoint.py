"""Self-describing binary container for checkpoints.

Layout (little-endian):

    bytes 0..7    magic ``b"PLCHKPT1"``
    bytes 8..15   uint64 header length H
    bytes 16..16+H  UTF-8 JSON header
    remainder     concatenated float64 array payloads

The JSON header carries arbitrary metadata plus an ``arrays`` list of
``{"name", "shape"}`` entries describing the payload in order.  Arrays are
stored as raw little-endian float64, so save -> load -> save round-trips are
byte-identical.  Writes go through a temp file and an atomic rename.
"""

import json
import os
import struct
import tempfile

import numpy as np

MAGIC = b"PLCHKPT1"


class CheckpointError(ValueError):
    """Raised for corrupt or incompatible checkpoint data."""


def pack(header: dict, arrays: dict[str, np.ndarray]) -> bytes:
    """Serialize metadata and named float64 arrays into container bytes."""
    meta = dict(header)
    meta["arrays"] = [
        {"name": k, "shape": list(np.asarray(v).shape)} for k, v in arrays.items()
    ]
    blob = json.dumps(meta, sort_keys=True).encode("utf-8")
    parts = [MAGIC, struct.pack("<Q", len(blob)), blob]
    for v in arrays.values():
        parts.append(np.ascontiguousarray(v, dtype="<f8").tobytes())
    return b"".join(parts)


def unpack(data: bytes) -> tuple[dict, dict[str, np.ndarray]]:
    """Inverse of :func:`pack`.

    Raises:
        CheckpointError: wrong magic, truncated payload, or malformed header.
    """
    if len(data) < len(MAGIC) + 8 or data[: len(MAGIC)] != MAGIC:
        raise CheckpointError("not a checkpoint container (bad magic)")
    (hlen,) = struct.unpack_from("<Q", data, len(MAGIC))
    start = len(MAGIC) + 8
    if len(data) < start + hlen:
        raise CheckpointError("truncated checkpoint header")
    try:
        meta = json.loads(data[start : start + hlen].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"malformed checkpoint header: {exc}") from None
    specs = meta.pop("arrays", [])
    offset = start + hlen
    arrays: dict[str, np.ndarray] = {}
    for spec in specs:
        shape = tuple(int(s) for s in spec["shape"])
        count = int(np.prod(shape)) if shape else 1
        nbytes = count * 8
        if len(data) < offset + nbytes:
            raise CheckpointError(f"truncated payload for array {spec['name']!r}")
        flat = np.frombuffer(data, dtype="<f8", count=count, offset=offset)
        arrays[spec["name"]] = flat.reshape(shape).copy()
        offset += nbytes
    if offset != len(data):
        raise CheckpointError("trailing bytes after declared arrays")
    return meta, arrays


def write_file(path, header: dict, arrays: dict[str, np.ndarray]) -> None:
    """Atomically write a container file (temp file + rename)."""
    data = pack(header, arrays)
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_file(path) -> tuple[dict, dict[str, np.ndarray]]:
    with open(path, "rb") as fh:
        return unpack(fh.read())
