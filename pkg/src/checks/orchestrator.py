"""
Check orchestrator: fans jobs out over a worker pool and merges results in submission order
"""
import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional

from src.config import Config

from .base_check import BaseCheck
from .jobs import (BarSymmetryCheck, CartanCheck, ClassifyCheck, CoactionCheck, OracleCheck,
                   VerifyPairCheck, linked_pairs)


class CheckOrchestrator:
    """Coordinates the verification checks for one run"""

    def __init__(self, config: Dict[str, Any] = None, workers: Optional[int] = None):
        self.config = config or {}
        self.workers = max(1, workers or Config.DEFAULT_WORKERS)
        self.logger = logging.getLogger("orchestrator")

        # Check registry
        self.checks: Dict[str, BaseCheck] = {
            "cartan": CartanCheck(config),
            "verify": VerifyPairCheck(config),
            "bar": BarSymmetryCheck(config),
            "oracle": OracleCheck(config),
            "classify": ClassifyCheck(config),
            "coaction": CoactionCheck(config),
        }
        self.task_history: List[Dict[str, Any]] = []

    # pure-Python engine: the GIL serializes these threads, more workers give no speedup
    async def _run_all(self, jobs: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            coros = [self.checks[job["check"]].run_task(job, executor) for job in jobs]
            return list(await asyncio.gather(*coros))

    def run_jobs(self, jobs: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
        """Run jobs concurrently; results come back in submission order"""
        unknown = [job["check"] for job in jobs if job["check"] not in self.checks]
        if unknown:
            raise KeyError(f"unknown checks: {', '.join(unknown)}")
        self.logger.info(f"Running {len(jobs)} jobs on {self.workers} workers")
        results = asyncio.run(self._run_all(jobs))
        for job, result in zip(jobs, results):
            self.task_history.append({"job": job, "success": result["success"]})
        for name, tally in self.tallies().items():
            if tally["jobs"]:
                self.logger.debug(f"{name}: {tally}")
        return results

    def verify_jobs(self, algebra: str, variant: str = "std") -> List[Dict[str, Any]]:
        return [{"check": "verify", "type": "verify_pair", "algebra": algebra, "pair": list(pair),
                 "variant": variant} for pair in linked_pairs(algebra)]

    def report_jobs(self, algebra: str) -> List[Dict[str, Any]]:
        """Full dossier: Cartan data, every pair in both variants, coaction, classification"""
        pairs = linked_pairs(algebra)
        jobs = [{"check": "cartan", "type": "cartan", "algebra": algebra}]
        jobs += self.verify_jobs(algebra, "std")
        jobs += [{"check": "bar", "type": "bar_symmetry", "algebra": algebra, "pair": list(p)} for p in pairs]
        jobs += [{"check": "coaction", "type": "coaction", "algebra": algebra, "pair": list(p)} for p in pairs]
        jobs.append({"check": "classify", "type": "classify", "algebra": algebra})
        if algebra == "a1^1":
            jobs.append({"check": "oracle", "type": "oracle", "algebra": algebra})
        return jobs

    def tallies(self) -> Dict[str, Dict[str, Any]]:
        return {name: check.tally() for name, check in self.checks.items()}
