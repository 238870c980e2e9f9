"""
Command-line front end: cartan, verify, classify, coaction and report
"""
import argparse
import logging
import sys
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from src.cartan import build, check_pair, parse_algebra_id, render_algebra_id
from src.checks.orchestrator import CheckOrchestrator
from src.config import Config
from src.report_generator import ReportGenerator

logger = logging.getLogger("cli")

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
COMMANDS = ("cartan", "verify", "classify", "coaction", "report")


class RunConfig(BaseModel):
    """Validated request for one command"""

    command: Literal["cartan", "verify", "classify", "coaction", "report"]
    algebra: str
    pair: Optional[Tuple[int, int]] = None
    variant: Literal["std", "bar"] = "std"
    format: Literal["json", "text", "latex"] = "json"
    verbose: bool = False
    workers: int = Field(default=Config.DEFAULT_WORKERS, ge=1)

    @field_validator("algebra")
    @classmethod
    def _normalize_algebra(cls, value: str) -> str:
        return render_algebra_id(parse_algebra_id(value))

    @model_validator(mode="after")
    def _check_pair(self) -> "RunConfig":
        if self.command == "coaction" and self.pair is None:
            raise ValueError("coaction needs --pair I J")
        if self.pair is not None:
            if self.command not in ("verify", "coaction"):
                raise ValueError(f"--pair does not apply to '{self.command}'")
            check_pair(build(parse_algebra_id(self.algebra)), *self.pair)
        return self


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qonsager",
        description="Exact checks for generalized q-Onsager algebras and their boundary conditions",
    )
    parser.add_argument("command", choices=COMMANDS, help="what to run")
    parser.add_argument("algebra", help="affine algebra, e.g. a2^1, g2^1, a4^2")
    parser.add_argument("--pair", nargs=2, type=int, metavar=("I", "J"), help="node pair (verify, coaction)")
    parser.add_argument("--variant", default="std", help="realization variant: std or bar")
    parser.add_argument("--format", default="json", help="output format: json, text or latex")
    parser.add_argument("--verbose", action="store_true", help="debug logging and timing fields")
    parser.add_argument("--workers", type=int, default=Config.DEFAULT_WORKERS, help="parallel pair jobs")
    return parser


def _entry(job: Dict[str, Any], outcome: Dict[str, Any], verbose: bool) -> Dict[str, Any]:
    if outcome["success"]:
        entry = dict(outcome["result"])
    else:
        entry = {"error": outcome["error"], "errorType": outcome["error_type"]}
        if "pair" in job:
            entry = {"pair": job["pair"], **entry}
    if verbose:
        entry["execution_time"] = round(outcome["execution_time"], 3)
    return entry


def _exit_code(outcomes: List[Dict[str, Any]]) -> int:
    if any(not o["success"] and o.get("usage_error") for o in outcomes):
        return EXIT_USAGE
    if all(o["success"] and o["result"].get("passed", True) for o in outcomes):
        return EXIT_OK
    return EXIT_FAILED


def _report_errors(jobs: List[Dict[str, Any]], outcomes: List[Dict[str, Any]]) -> None:
    for job, outcome in zip(jobs, outcomes):
        if not outcome["success"]:
            where = f" pair {tuple(job['pair'])}" if "pair" in job else ""
            print(f"error: {job['check']}{where}: {outcome['error']}", file=sys.stderr)


def execute(cfg: RunConfig) -> Tuple[Dict[str, Any], int]:
    """Run the jobs of a command and assemble its payload"""
    orchestrator = CheckOrchestrator(workers=cfg.workers)
    payload: Dict[str, Any] = {"command": cfg.command, "algebra": cfg.algebra}
    base = {"algebra": cfg.algebra}

    if cfg.command == "report":
        jobs = orchestrator.report_jobs(cfg.algebra)
    elif cfg.command == "verify":
        if cfg.pair is not None:
            jobs = [{**base, "check": "verify", "type": "verify_pair", "pair": list(cfg.pair),
                     "variant": cfg.variant}]
        else:
            jobs = orchestrator.verify_jobs(cfg.algebra, cfg.variant)
        if cfg.algebra == "a1^1":
            jobs.append({**base, "check": "oracle", "type": "oracle"})
    elif cfg.command == "coaction":
        jobs = [{**base, "check": "coaction", "type": "coaction", "pair": list(cfg.pair)}]
    else:
        jobs = [{**base, "check": cfg.command, "type": cfg.command}]

    outcomes = orchestrator.run_jobs(jobs)
    _report_errors(jobs, outcomes)
    entries = [(job["check"], _entry(job, o, cfg.verbose)) for job, o in zip(jobs, outcomes)]
    code = _exit_code(outcomes)

    if cfg.command == "verify":
        payload["variant"] = cfg.variant
        payload["pairs"] = [e for check, e in entries if check == "verify"]
        payload["oracle"] = next((e for check, e in entries if check == "oracle"), None)
    elif cfg.command == "report":
        for key in ("verify", "bar", "coaction"):
            payload[key] = [e for check, e in entries if check == key]
        payload["cartan"] = next(e for check, e in entries if check == "cartan")
        payload["classify"] = next(e for check, e in entries if check == "classify")
        payload["oracle"] = next((e for check, e in entries if check == "oracle"), None)
    else:
        payload["result"] = entries[0][1]
    payload["passed"] = code == EXIT_OK
    return payload, code


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse, validate, run and print; returns the exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else Config.LOG_LEVEL,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = RunConfig(command=args.command, algebra=args.algebra,
                        pair=tuple(args.pair) if args.pair else None, variant=args.variant,
                        format=args.format, verbose=args.verbose, workers=args.workers)
    except ValidationError as e:
        for err in e.errors():
            print(f"error: {err['msg']}", file=sys.stderr)
        return EXIT_USAGE

    payload, code = execute(cfg)
    if code == EXIT_USAGE:
        return code
    sys.stdout.write(ReportGenerator(verbose=cfg.verbose).render(payload, cfg.format))
    return code


def main() -> int:
    return run()


if __name__ == "__main__":
    sys.exit(main())
