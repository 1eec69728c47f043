"""
Memo for the expansion coefficients psi_n.

Provides:
 - Deterministic keys from (n, xi)
 - Thread-safe access for concurrent grid / suite workers
 - Hit / miss statistics

The memo is transparent: a hit returns exactly the value a miss would have
computed.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional


logger = logging.getLogger(__name__)


# ============================================================
# Cache Entry
# ============================================================

@dataclass
class CacheEntry:
    """A memoised coefficient."""
    key: str
    value: Any


# ============================================================
# Expansion Cache
# ============================================================

class ExpansionCache:
    """
    In-memory memo keyed by (name, n, xi, tol).

    xi is keyed by its exact binary value (float.hex) so that numerically
    distinct arguments never share an entry.
    """

    def __init__(self):
        self._cache: Dict[str, CacheEntry] = {}
        self._hits = 0
        self._misses = 0
        self._lock = threading.Lock()

    @staticmethod
    def _generate_key(name: str, n: int, xi: float, tol: float) -> str:
        normalized = {"name": name, "n": int(n), "xi": float(xi).hex(), "tol": float(tol).hex()}
        digest = hashlib.sha256(json.dumps(normalized, sort_keys=True).encode()).hexdigest()
        return f"{name}:{n}:{digest[:20]}"

    def get(self, name: str, n: int, xi: float, tol: float) -> Optional[Any]:
        key = self._generate_key(name, n, xi, tol)
        with self._lock:
            entry = self._cache.get(key)
            if entry is None:
                self._misses += 1
                return None
            self._hits += 1
            logger.debug(f"[CACHE] HIT for {key}")
            return entry.value

    def set(self, name: str, n: int, xi: float, tol: float, value: Any) -> None:
        key = self._generate_key(name, n, xi, tol)
        with self._lock:
            self._cache[key] = CacheEntry(key=key, value=value)

    def get_or_compute(self, name: str, n: int, xi: float, tol: float,
                       compute: Callable[[], Any]) -> Any:
        """Return the cached value or compute, store and return it."""
        value = self.get(name, n, xi, tol)
        if value is None:
            # Computed outside the lock; concurrent misses store identical values.
            value = compute()
            self.set(name, n, xi, tol, value)
        return value

    def clear(self) -> None:
        with self._lock:
            self._cache.clear()
            self._hits = 0
            self._misses = 0
            logger.info("[CACHE] Cleared all cache entries")

    def get_stats(self) -> Dict[str, Any]:
        total = self._hits + self._misses
        hit_rate = (self._hits / total * 100) if total > 0 else 0.0
        return {
            "size": len(self._cache),
            "hits": self._hits,
            "misses": self._misses,
            "hit_rate": round(hit_rate, 2),
            "total_requests": total,
        }


psi_cache = ExpansionCache()
