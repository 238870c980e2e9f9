"""
Base check class for verification jobs
"""
import asyncio
import logging
from abc import ABC, abstractmethod
from collections import Counter
from concurrent.futures import Executor
from datetime import datetime
from typing import Any, Dict, Optional

from src.exceptions import AlgebraIdError, UsageError


class BaseCheck(ABC):
    """Base class for all verification checks"""

    def __init__(self, name: str, description: str, config: Dict[str, Any] = None):
        self.name = name
        self.description = description
        self.config = config or {}
        self.logger = logging.getLogger(f"check.{name}")
        self.status = "idle"
        self.last_update = None
        # passed / failed / usage_error / engine_error per job, plus wall time
        self.outcomes: Counter = Counter()
        self.seconds = 0.0

    @abstractmethod
    def execute(self, task: Dict[str, Any]) -> Dict[str, Any]:
        """Run the engine for one task and return a JSON-ready result"""
        pass

    async def run_task(self, task: Dict[str, Any], executor: Optional[Executor] = None) -> Dict[str, Any]:
        """Run a task with error handling and metrics"""
        start_time = datetime.now()
        self.status = "running"

        try:
            self.logger.info(f"Starting task: {task.get('type', 'unknown')}")
            loop = asyncio.get_running_loop()
            result = await loop.run_in_executor(executor, self.execute, task)

            self.outcomes["failed" if result.get("passed") is False else "passed"] += 1
            self.status = "completed"
            self.last_update = datetime.now()

            execution_time = (datetime.now() - start_time).total_seconds()
            self.seconds += execution_time

            self.logger.info(f"Task completed in {execution_time:.2f}s")

            return {
                "success": True,
                "result": result,
                "execution_time": execution_time,
            }

        except Exception as e:
            usage = isinstance(e, (AlgebraIdError, UsageError))
            self.outcomes["usage_error" if usage else "engine_error"] += 1
            self.status = "error"
            self.logger.error(f"Task failed: {str(e)}")

            return {
                "success": False,
                "error": str(e),
                "error_type": type(e).__name__,
                "usage_error": usage,
                "execution_time": (datetime.now() - start_time).total_seconds(),
            }

    def tally(self) -> Dict[str, Any]:
        """Outcome counts of the jobs this check has run"""
        return {
            "check": self.name,
            "status": self.status,
            "jobs": sum(self.outcomes.values()),
            **{key: self.outcomes[key] for key in ("passed", "failed", "usage_error", "engine_error")},
            "seconds": round(self.seconds, 3),
        }

    def clear(self):
        self.outcomes.clear()
        self.seconds = 0.0
        self.status = "idle"
