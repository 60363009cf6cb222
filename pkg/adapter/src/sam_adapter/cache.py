"""LRU embedding cache with per-key serialization.

Prompting is per instance, so many requests share one image: the embedding is
the expensive part and is computed once per image_id. Requests for the same
image_id serialize on that entry's lock while distinct images embed
concurrently. Capacity 16 images by default; least recently used evicted.
"""

from __future__ import annotations

import threading
from collections import OrderedDict
from typing import Any, Callable


class EmbeddingCache:
    def __init__(self, capacity: int = 16, enabled: bool = True):
        self.capacity = capacity
        self.enabled = enabled
        self.hits = 0
        self.misses = 0
        self._entries: OrderedDict[str, Any] = OrderedDict()
        self._locks: dict[str, threading.Lock] = {}
        self._mutex = threading.Lock()

    def get_or_compute(self, key: str, compute: Callable[[], Any]) -> Any:
        if not self.enabled:
            with self._mutex:
                self.misses += 1
            return compute()
        with self._mutex:
            lock = self._locks.setdefault(key, threading.Lock())
        with lock:  # same image_id serializes here
            with self._mutex:
                if key in self._entries:
                    self._entries.move_to_end(key)
                    self.hits += 1
                    return self._entries[key]
                self.misses += 1
            value = compute()
            with self._mutex:
                self._entries[key] = value
                self._entries.move_to_end(key)
                while len(self._entries) > self.capacity:
                    evicted, _ = self._entries.popitem(last=False)
                    self._locks.pop(evicted, None)
            return value

    def stats(self) -> dict:
        with self._mutex:
            return {
                "enabled": self.enabled,
                "capacity": self.capacity,
                "size": len(self._entries),
                "hits": self.hits,
                "misses": self.misses,
            }
