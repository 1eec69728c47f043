"""
Check registry.

Acceptance checks are keyed by the criterion they verify; the id "C07" is
derived from criterion 7. The suite runner asks the registry for a
selection (all / fast / slow, optionally narrowed to explicit ids) and
instantiates checks from it.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Type


class Suite(str, Enum):
    ALL = "all"
    FAST = "fast"
    SLOW = "slow"


def check_id_for(criterion: int) -> str:
    return f"C{criterion:02d}"


# ======================================================================
#  Entries
# ======================================================================

@dataclass(frozen=True)
class CheckEntry:
    """A registered check class and what it asserts."""
    criterion: int
    check_class: Type
    description: str
    slow: bool = False

    @property
    def check_id(self) -> str:
        return check_id_for(self.criterion)

    @property
    def title(self) -> str:
        return self.check_class.title

    def in_suite(self, suite: Suite) -> bool:
        if suite == Suite.FAST:
            return not self.slow
        if suite == Suite.SLOW:
            return self.slow
        return True


# ======================================================================
#  Registry
# ======================================================================

class CheckRegistry:
    """Checks by criterion, iterated in criterion order."""

    def __init__(self):
        self._entries: Dict[str, CheckEntry] = {}

    def __contains__(self, check_id: str) -> bool:
        return check_id in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def register(self, check_class: Type, description: str, slow: bool = False) -> CheckEntry:
        """Register a check class under the id of its `criterion` attribute."""
        entry = CheckEntry(
            criterion=int(check_class.criterion),
            check_class=check_class,
            description=description,
            slow=slow,
        )
        if entry.check_id in self._entries:
            raise ValueError(f"Check '{entry.check_id}' is already registered.")
        self._entries[entry.check_id] = entry
        return entry

    def entry(self, check_id: str) -> CheckEntry:
        try:
            return self._entries[check_id]
        except KeyError:
            raise ValueError(f"Unknown check: '{check_id}'") from None

    def entries(self) -> List[CheckEntry]:
        return sorted(self._entries.values(), key=lambda e: e.criterion)

    def select(self, suite: str = "all", ids: Optional[Iterable[str]] = None) -> List[str]:
        """
        Ids of the checks in `suite`, in criterion order.

        `ids` narrows the selection; unknown ids raise ValueError before
        anything runs.
        """
        try:
            suite = Suite(suite)
        except ValueError:
            raise ValueError(f"Unknown suite '{suite}'") from None
        selected = [e.check_id for e in self.entries() if e.in_suite(suite)]
        if ids:
            wanted = set(ids)
            unknown = sorted(c for c in wanted if c not in self)
            if unknown:
                raise ValueError(f"Unknown checks: {', '.join(unknown)}")
            selected = [c for c in selected if c in wanted]
        return selected

    def create_instance(self, check_id: str, config: Optional[Dict[str, Any]] = None):
        return self.entry(check_id).check_class(check_id=check_id, config=config or {})


registry = CheckRegistry()
