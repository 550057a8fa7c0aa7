"""
Projection Cache - Memo table for noncrossing projections
Maps a reflection bitset to the lattice index of its join
"""

import threading
from collections import OrderedDict
from typing import Any, Dict, Optional


class ProjectionCache:
    """Bounded memo keyed by ReflectionSet bits; oldest entries are evicted first.

    Reads are lock-free; inserts are serialized.
    """

    def __init__(self, max_size: Optional[int] = None):
        """
        Initialize the cache

        Args:
            max_size: Maximum number of cached joins (None keeps everything)
        """
        self.max_size = max_size
        self.cache: "OrderedDict[int, int]" = OrderedDict()
        self._lock = threading.Lock()
        self.cache_stats = {
            "hits": 0,
            "misses": 0,
            "evictions": 0
        }

    def get(self, bits: int) -> Optional[int]:
        """
        Cached lattice index for a reflection bitset

        Args:
            bits: ReflectionSet as an integer

        Returns:
            Lattice index or None
        """
        index = self.cache.get(bits)
        if index is None:
            self.cache_stats["misses"] += 1
            return None
        self.cache_stats["hits"] += 1
        return index

    def set(self, bits: int, index: int):
        """Store the join of a reflection bitset"""
        with self._lock:
            if bits in self.cache:
                return
            if self.max_size is not None and len(self.cache) >= self.max_size:
                self.cache.popitem(last=False)
                self.cache_stats["evictions"] += 1
            self.cache[bits] = index

    def clear(self):
        with self._lock:
            self.cache.clear()

    def __len__(self):
        return len(self.cache)

    def get_stats(self) -> Dict[str, Any]:
        """Joins cached, lookups served and evictions so far"""
        lookups = self.cache_stats["hits"] + self.cache_stats["misses"]
        return {
            "joins": len(self.cache),
            "max_size": self.max_size,
            "lookups": lookups,
            "hit_ratio": self.cache_stats["hits"] / lookups if lookups else 0.0,
            "evictions": self.cache_stats["evictions"],
        }
