"""
Lattice Store - SQLite cache for built noncrossing partition lattices
Entries are keyed by group, Coxeter word, backend and product convention
"""

import hashlib
import os
import sqlite3
import sys
from typing import Dict, List, Optional, Tuple

import numpy as np

from utils.errors import CacheFormatError

MAGIC = "POPTSACK"
FORMAT_VERSION = 1

# Byte order of every BLOB: little-endian.
#   elements: int16 matrix, one row per lattice element (backend payload)
#   ranks:    uint8 vector
#   refsets:  fixed-width little-endian integers, ceil(#reflections / 8) bytes each
ELEMENT_DTYPE = "<i2"
RANK_DTYPE = "u1"


def entry_key(ctx) -> str:
    word = " ".join(str(i + 1) for i in ctx.c_word)
    return f"{ctx.label}|{word}|{ctx.backend.kind}|{ctx.convention.value}"


class LatticeStore:
    """Handles the on-disk lattice cache"""

    def __init__(self, cache_dir: str = ".poptsack_cache", db_name: str = "lattices.db"):
        """
        Initialize the store

        Args:
            cache_dir: Directory holding the SQLite file
            db_name: SQLite file name
        """
        self.cache_dir = cache_dir
        self.db_path = os.path.join(cache_dir, db_name)
        self._ensure_db_exists()

    def _ensure_db_exists(self):
        """Create the cache directory and tables if needed"""
        os.makedirs(self.cache_dir, exist_ok=True)
        conn = sqlite3.connect(self.db_path)
        cursor = conn.cursor()
        cursor.execute("""
            CREATE TABLE IF NOT EXISTS header (
                entry_key TEXT PRIMARY KEY,
                magic TEXT NOT NULL,
                format_version INTEGER NOT NULL,
                cox_type TEXT NOT NULL,
                rank INTEGER NOT NULL,
                c_word TEXT NOT NULL,
                backend TEXT NOT NULL,
                convention TEXT NOT NULL,
                n_elements INTEGER NOT NULL,
                element_width INTEGER NOT NULL,
                refset_bytes INTEGER NOT NULL,
                checksum TEXT NOT NULL,
                created_at DATETIME DEFAULT CURRENT_TIMESTAMP
            )
        """)
        cursor.execute("""
            CREATE TABLE IF NOT EXISTS lattice_tables (
                entry_key TEXT PRIMARY KEY,
                elements BLOB NOT NULL,
                ranks BLOB NOT NULL,
                refsets BLOB NOT NULL
            )
        """)
        conn.commit()
        conn.close()

    @staticmethod
    def _checksum(*blobs: bytes) -> str:
        digest = hashlib.sha256()
        for blob in blobs:
            digest.update(blob)
        return digest.hexdigest()

    def save(self, ctx, lattice):
        """Write a lattice, replacing any previous entry with the same key"""
        key = entry_key(ctx)
        width = ctx.backend.element_width()
        refset_bytes = (ctx.n_reflections + 7) // 8
        elements = np.asarray(lattice.elements, dtype=ELEMENT_DTYPE).reshape(len(lattice), width).tobytes()
        ranks = np.asarray(lattice.rank_of, dtype=RANK_DTYPE).tobytes()
        refsets = b"".join(bits.to_bytes(refset_bytes, "little") for bits in lattice.refset_of)
        checksum = self._checksum(elements, ranks, refsets)

        try:
            conn = sqlite3.connect(self.db_path)
            cursor = conn.cursor()
            cursor.execute("DELETE FROM header WHERE entry_key = ?", (key,))
            cursor.execute("DELETE FROM lattice_tables WHERE entry_key = ?", (key,))
            cursor.execute("""
                INSERT INTO header (entry_key, magic, format_version, cox_type, rank, c_word,
                                    backend, convention, n_elements, element_width, refset_bytes, checksum)
                VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)
            """, (key, MAGIC, FORMAT_VERSION, ctx.cox_type.value, ctx.m or ctx.rank,
                  " ".join(str(i + 1) for i in ctx.c_word), ctx.backend.kind, ctx.convention.value,
                  len(lattice), width, refset_bytes, checksum))
            cursor.execute(
                "INSERT INTO lattice_tables (entry_key, elements, ranks, refsets) VALUES (?, ?, ?, ?)",
                (key, elements, ranks, refsets),
            )
            conn.commit()
            conn.close()
        except sqlite3.Error as e:
            print(f"[WARNING] Could not cache NC({ctx.label}): {e}", file=sys.stderr)

    def _read(self, key: str) -> Tuple[tuple, tuple]:
        conn = sqlite3.connect(self.db_path)
        cursor = conn.cursor()
        cursor.execute("""
            SELECT magic, format_version, n_elements, element_width, refset_bytes, checksum
            FROM header WHERE entry_key = ?
        """, (key,))
        header = cursor.fetchone()
        cursor.execute("SELECT elements, ranks, refsets FROM lattice_tables WHERE entry_key = ?", (key,))
        tables = cursor.fetchone()
        conn.close()
        return header, tables

    def _decode(self, header: tuple, tables: tuple, expected_width: int):
        magic, version, n_elements, width, refset_bytes, checksum = header
        if magic != MAGIC or version != FORMAT_VERSION:
            raise CacheFormatError(f"unexpected header {magic!r} v{version}")
        if width != expected_width:
            raise CacheFormatError(f"element width {width}, expected {expected_width}")
        elements_blob, ranks_blob, refsets_blob = tables
        if self._checksum(elements_blob, ranks_blob, refsets_blob) != checksum:
            raise CacheFormatError("checksum mismatch")
        matrix = np.frombuffer(elements_blob, dtype=ELEMENT_DTYPE)
        if matrix.size != n_elements * width or len(refsets_blob) != n_elements * refset_bytes:
            raise CacheFormatError("truncated tables")
        elements = [tuple(row) for row in matrix.reshape(n_elements, width).tolist()]
        ranks = [int(r) for r in np.frombuffer(ranks_blob, dtype=RANK_DTYPE)]
        refsets = [
            int.from_bytes(refsets_blob[i * refset_bytes:(i + 1) * refset_bytes], "little")
            for i in range(n_elements)
        ]
        return elements, ranks, refsets

    def load(self, ctx) -> Optional[Tuple[List[tuple], List[int], List[int]]]:
        """
        Read a cached lattice

        Returns:
            (elements, ranks, refsets) or None when absent or unusable
        """
        key = entry_key(ctx)
        try:
            header, tables = self._read(key)
        except sqlite3.Error as e:
            print(f"[WARNING] Lattice cache unreadable: {e}", file=sys.stderr)
            return None
        if header is None or tables is None:
            return None
        try:
            elements, ranks, refsets = self._decode(header, tables, ctx.backend.element_width())
        except CacheFormatError as e:
            print(f"[WARNING] Rebuilding NC({ctx.label}): cached entry rejected ({e})", file=sys.stderr)
            return None
        if ctx.identity not in elements or ctx.c not in elements:
            print(f"[WARNING] Rebuilding NC({ctx.label}): cached entry does not contain e and c", file=sys.stderr)
            return None
        return elements, ranks, refsets

    def list_entries(self) -> List[Dict]:
        conn = sqlite3.connect(self.db_path)
        cursor = conn.cursor()
        cursor.execute("""
            SELECT entry_key, cox_type, rank, c_word, backend, convention, n_elements, created_at
            FROM header ORDER BY cox_type, rank, entry_key
        """)
        rows = cursor.fetchall()
        conn.close()
        columns = ["entry_key", "cox_type", "rank", "c_word", "backend", "convention", "n_elements", "created_at"]
        return [dict(zip(columns, row)) for row in rows]

    def verify_entry(self, key: str) -> Optional[str]:
        """None when the entry decodes cleanly, else the reason it would be rejected"""
        header, tables = self._read(key)
        if header is None or tables is None:
            return "missing"
        try:
            self._decode(header, tables, header[3])
        except CacheFormatError as e:
            return str(e)
        return None

    def purge(self, key: Optional[str] = None) -> int:
        """Delete one entry, or every entry when key is None"""
        conn = sqlite3.connect(self.db_path)
        cursor = conn.cursor()
        if key is None:
            cursor.execute("DELETE FROM header")
            removed = cursor.rowcount
            cursor.execute("DELETE FROM lattice_tables")
        else:
            cursor.execute("DELETE FROM header WHERE entry_key = ?", (key,))
            removed = cursor.rowcount
            cursor.execute("DELETE FROM lattice_tables WHERE entry_key = ?", (key,))
        conn.commit()
        conn.close()
        return removed
