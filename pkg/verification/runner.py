"""
Verification Suite Runner
Runs a selection of registered checks concurrently and collects their
results in criterion order.
"""

from typing import Any, Dict, List, Optional, Sequence
from dataclasses import dataclass, field
import asyncio
import time
import logging

from core.registry import registry
from core.settings import get_settings
from .base import CheckResult
from .registry_setup import register_all_checks

logger = logging.getLogger(__name__)


# =====================================================================
# Suite Result
# =====================================================================
@dataclass
class SuiteResult:
    """Outcome of a verification run."""

    seed: int
    success: bool
    results: List[CheckResult] = field(default_factory=list)
    execution_time: float = 0.0

    @property
    def passed(self) -> int:
        return sum(1 for r in self.results if r.success)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to a JSON-serializable dict (timings excluded)."""
        return {
            "seed": self.seed,
            "success": self.success,
            "passed": self.passed,
            "total": len(self.results),
            "results": [r.to_dict() for r in self.results],
        }


# =====================================================================
# Suite Runner
# =====================================================================
class SuiteRunner:
    """Executes verification checks under a worker limit."""

    def __init__(self, max_workers: Optional[int] = None, seed: Optional[int] = None):
        settings = get_settings()
        self.max_workers = max_workers or settings.max_workers
        self.seed = settings.seed if seed is None else seed
        self.logger = logging.getLogger(__name__)
        register_all_checks()

    # -----------------------------------------------------------------
    # Selection
    # -----------------------------------------------------------------
    @staticmethod
    def select(suite: str = "all", ids: Optional[Sequence[str]] = None) -> List[str]:
        """Check ids for a suite ("all", "fast" or "slow"), optionally narrowed to ids."""
        register_all_checks()
        return registry.select(suite, ids)

    # -----------------------------------------------------------------
    # MAIN EXECUTION ENTRY POINT
    # -----------------------------------------------------------------
    async def execute(
        self,
        check_ids: Sequence[str],
        configs: Optional[Dict[str, Dict[str, Any]]] = None,
    ) -> SuiteResult:
        configs = configs or {}
        context = {"seed": self.seed}
        semaphore = asyncio.Semaphore(self.max_workers)
        start_time = time.time()

        async def run_one(check_id: str) -> CheckResult:
            async with semaphore:
                check = registry.create_instance(check_id, configs.get(check_id))
                self.logger.info(f"Running check {check_id} ({check.title})")
                return await check.execute(context)

        results = await asyncio.gather(*(run_one(c) for c in check_ids))

        suite = SuiteResult(
            seed=self.seed,
            success=all(r.success for r in results),
            results=list(results),
            execution_time=time.time() - start_time,
        )
        self.logger.info(
            f"Suite finished: {suite.passed}/{len(results)} passed in {suite.execution_time:.2f}s"
        )
        return suite

    def run(self, check_ids: Sequence[str], configs: Optional[Dict[str, Dict[str, Any]]] = None) -> SuiteResult:
        """Synchronous wrapper around execute()."""
        return asyncio.run(self.execute(check_ids, configs))
