"""Append-only gene store backing the HTTP service.

One JSON record per line. Two operations: ``create`` (carries the canonical
gene text) and ``patch`` (currently only flips ``liked``). State is rebuilt
by replaying the log on open, so a crash mid-write loses at most the final
partial line, which the loader skips. Every write is flushed and fsynced
before the call returns — a restarted service sees everything it ever
acknowledged.
"""

from __future__ import annotations

import json
import os
import threading
import time
import uuid
from dataclasses import dataclass, replace

from .gene import parse_gene, serialize_gene

__all__ = ["GeneRecord", "GeneStore"]


@dataclass(frozen=True)
class GeneRecord:
    id: str
    gene_text: str
    liked: bool
    created_at: float

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "gene": json.loads(self.gene_text),
            "liked": self.liked,
            "createdAt": self.created_at,
        }


class GeneStore:
    def __init__(self, path: str):
        self._path = path
        self._lock = threading.Lock()
        self._records: dict[str, GeneRecord] = {}
        self._order: list[str] = []
        self._replay()

    # -- log replay ---------------------------------------------------------

    def _replay(self) -> None:
        if not os.path.exists(self._path):
            return
        with open(self._path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    op = json.loads(line)
                except json.JSONDecodeError:
                    continue  # torn final line from a crash
                self._apply(op)

    def _apply(self, op: dict) -> None:
        kind = op.get("op")
        if kind == "create":
            rec = GeneRecord(
                id=op["id"],
                gene_text=json.dumps(op["gene"], sort_keys=True),
                liked=bool(op.get("liked", False)),
                created_at=float(op.get("createdAt", 0.0)),
            )
            if rec.id not in self._records:
                self._order.append(rec.id)
            self._records[rec.id] = rec
        elif kind == "patch":
            rec = self._records.get(op.get("id", ""))
            if rec is not None and "liked" in op:
                self._records[rec.id] = replace(rec, liked=bool(op["liked"]))

    def _append(self, op: dict) -> None:
        with open(self._path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(op, sort_keys=True) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    # -- public API ---------------------------------------------------------

    def create(self, gene_bytes: bytes) -> GeneRecord:
        """Validate, canonicalise, persist. Raises SchemaError on bad input."""
        gene = parse_gene(gene_bytes)
        canonical = serialize_gene(gene).decode("utf-8")
        with self._lock:
            rec = GeneRecord(
                id=uuid.uuid4().hex,
                gene_text=canonical,
                liked=False,
                created_at=time.time(),
            )
            self._append({
                "op": "create",
                "id": rec.id,
                "gene": json.loads(canonical),
                "liked": rec.liked,
                "createdAt": rec.created_at,
            })
            self._records[rec.id] = rec
            self._order.append(rec.id)
            return rec

    def get(self, record_id: str) -> GeneRecord | None:
        with self._lock:
            return self._records.get(record_id)

    def list(self) -> list[GeneRecord]:
        """Newest first."""
        with self._lock:
            return [self._records[i] for i in reversed(self._order)]

    def set_liked(self, record_id: str, liked: bool) -> GeneRecord | None:
        with self._lock:
            rec = self._records.get(record_id)
            if rec is None:
                return None
            self._append({"op": "patch", "id": record_id, "liked": liked})
            rec = replace(rec, liked=liked)
            self._records[record_id] = rec
            return rec
