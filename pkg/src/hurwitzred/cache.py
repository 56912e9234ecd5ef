"""On-disk cache of Nielsen sets."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

import numpy as np

from .nielsen import ClassVector, NielsenSet

log = logging.getLogger(__name__)

CACHE_VERSION = 1
_SAMPLE = 16


def cache_key(descriptor: str, cv: ClassVector) -> str:
    return f"{descriptor}|{','.join(cv.labels)}"


def _path(cache_dir: str | os.PathLike, key: str) -> Path:
    return Path(cache_dir) / f"nielsen-{hashlib.sha256(key.encode()).hexdigest()[:32]}.json"


def _checksum(tuples) -> str:
    return hashlib.sha256(json.dumps(tuples, separators=(",", ":")).encode()).hexdigest()


def cache_nielsen(cache_dir: str | os.PathLike, key: str, ns: NielsenSet) -> Path:
    Path(cache_dir).mkdir(parents=True, exist_ok=True)
    tuples = [list(t) for t in ns.tuples]
    doc = {
        "version": CACHE_VERSION,
        "key": key,
        "group_order": ns.group.order,
        "classes": list(ns.class_vector.labels),
        "tuples": tuples,
        "checksum": _checksum(tuples),
    }
    target = _path(cache_dir, key)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as f:
            json.dump(doc, f, separators=(",", ":"))
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return target


def load_nielsen(cache_dir: str | os.PathLike, key: str, cv: ClassVector) -> NielsenSet | None:
    """The cached set, or ``None`` on a miss or on any integrity failure."""
    path = _path(cache_dir, key)
    if not path.exists():
        return None
    try:
        doc = json.loads(path.read_text())
        if doc.get("version") != CACHE_VERSION or doc.get("key") != key:
            raise ValueError("version or key mismatch")
        tuples = doc["tuples"]
        if doc.get("checksum") != _checksum(tuples):
            raise ValueError("checksum mismatch")
        G = cv.group
        if doc["group_order"] != G.order or tuple(doc["classes"]) != cv.labels:
            raise ValueError("group or class mismatch")
        ns = NielsenSet(cv, tuple(tuple(int(v) for v in t) for t in tuples))
        if ns.d:
            arr = ns.array[np.linspace(0, ns.d - 1, min(_SAMPLE, ns.d)).astype(int)]
            if arr.min() < 0 or arr.max() >= G.order:
                raise ValueError("element index out of range")
            prod = G.mul(G.mul(G.mul(arr[:, 0], arr[:, 1]), arr[:, 2]), arr[:, 3])
            if np.any(prod != 0):
                raise ValueError("product-one check failed")
            if np.any(G.classes.class_of[arr] != np.array(cv.classes)):
                raise ValueError("class check failed")
        return ns
    except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        log.warning("ignoring cache file %s: %s", path, exc)
        return None
