"""
Base check class that all acceptance checks inherit from.
Includes:
- Async-safe execution (sync run() methods go to a worker thread)
- Automatic timing
- Error capture into the result
- Lifecycle hooks
- Metadata tracking
"""

from abc import ABC, abstractmethod
from typing import Dict, Any, Optional
from dataclasses import dataclass, field
import asyncio
import inspect
import logging
import time

from core.errors import WormKernelError


logger = logging.getLogger(__name__)


@dataclass
class CheckOutcome:
    """What a check's run() reports."""
    passed: bool
    detail: str
    data: Dict[str, Any] = field(default_factory=dict)


@dataclass
class CheckResult:
    """Result of one check execution."""
    check_id: str
    title: str
    success: bool
    detail: str = ""
    output: Optional[Dict[str, Any]] = None
    error: Optional[str] = None
    execution_time: float = 0.0
    metadata: Dict[str, Any] = None

    def __post_init__(self):
        if self.metadata is None:
            self.metadata = {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check_id": self.check_id,
            "title": self.title,
            "success": self.success,
            "detail": self.detail,
            "output": self.output,
            "error": self.error,
            "metadata": self.metadata,
        }


class BaseCheck(ABC):
    """Base class for all acceptance checks."""

    title: str = ""
    criterion: int = 0

    def __init__(self, check_id: str, config: Dict[str, Any]):
        self.check_id = check_id
        self.config = config or {}
        self.logger = logging.getLogger(f"{__name__}.{self.__class__.__name__}")

    # ----------------------------------------
    # Lifecycle Hooks
    # ----------------------------------------
    async def before_run(self, context: Dict[str, Any]):
        self.log_info("Starting check.")

    async def after_run(self, result: CheckResult):
        self.log_info(
            "Check finished.",
            success=result.success,
            time=round(result.execution_time, 3),
        )

    # ----------------------------------------
    # Main Execution Wrapper
    # ----------------------------------------
    async def execute(self, context: Dict[str, Any]) -> CheckResult:
        """Run the check; library errors become a failed result, never an exception."""
        await self.before_run(context)

        metadata = {
            "check_id": self.check_id,
            "check_type": self.__class__.__name__,
            "criterion": self.criterion,
        }
        start_time = time.time()
        try:
            if inspect.iscoroutinefunction(self.run):
                outcome = await self.run(context)
            else:
                outcome = await asyncio.to_thread(self.run, context)

            result = CheckResult(
                check_id=self.check_id,
                title=self.title,
                success=bool(outcome.passed),
                detail=outcome.detail,
                output=outcome.data,
                execution_time=time.time() - start_time,
                metadata=metadata,
            )

        except (WormKernelError, ValueError, ArithmeticError) as e:
            self.log_error(f"Check raised {type(e).__name__}: {e}")
            result = CheckResult(
                check_id=self.check_id,
                title=self.title,
                success=False,
                detail=f"{type(e).__name__}: {e}",
                error=str(e),
                execution_time=time.time() - start_time,
                metadata=metadata,
            )

        await self.after_run(result)
        return result

    # ----------------------------------------
    # Methods checks MUST implement
    # ----------------------------------------
    @abstractmethod
    def run(self, context: Dict[str, Any]) -> CheckOutcome:
        pass

    # ----------------------------------------
    # Helpers
    # ----------------------------------------
    def get_config_value(self, key: str, default: Any = None):
        return self.config.get(key, default)

    def log_info(self, message: str, **kwargs):
        self.logger.info(f"[{self.check_id}] {message} | {kwargs}")

    def log_error(self, message: str, **kwargs):
        self.logger.error(f"[{self.check_id}] {message} | {kwargs}")
