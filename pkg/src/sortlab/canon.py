"""Canonical serialization and hashing.

Every digest in the system is SHA-256 over canonical JSON: keys sorted,
no whitespace, UTF-8, no float values anywhere in the hashed documents.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any


def canonical_json(doc: Any) -> bytes:
    return json.dumps(
        doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False
    ).encode("utf-8")


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def digest_doc(doc: Any) -> str:
    return sha256_hex(canonical_json(doc))
