"""
Concrete checks: one per command, each wrapping an engine entry point
"""
from typing import Any, Dict, List, Tuple

from src.cartan import build, links, null_vector_ok, parse_algebra_id
from src.classify import (compare_with_paper, constraints_for, enumerate_families, instantiate_numeric,
                          numeric_residual, root_closed_form)
from src.coaction import verify_coaction_pair
from src.config import Config
from src.exceptions import PaperTableError, UsageError
from src.homver import check_bar_symmetry, matrix_oracle_sl2, verify_pair

from .base_check import BaseCheck


def _pair(task: Dict[str, Any]) -> Tuple[int, int]:
    pair = task.get("pair")
    if pair is None or len(pair) != 2:
        raise UsageError("this check needs a node pair")
    return int(pair[0]), int(pair[1])


def linked_pairs(algebra: str) -> List[Tuple[int, int]]:
    """Canonical pair order for fan-out"""
    cd = build(parse_algebra_id(algebra))
    return [link.pair for link in links(cd)]


class CartanCheck(BaseCheck):
    def __init__(self, config: Dict[str, Any] = None):
        super().__init__("cartan", "Cartan data and link classification", config)

    def execute(self, task: Dict[str, Any]) -> Dict[str, Any]:
        cd = build(parse_algebra_id(task["algebra"]))
        return {**cd.to_dict(), "nullVectorOk": null_vector_ok(cd)}


class VerifyPairCheck(BaseCheck):
    def __init__(self, config: Dict[str, Any] = None):
        super().__init__("verify", "Realization homomorphism check for one pair", config)

    def execute(self, task: Dict[str, Any]) -> Dict[str, Any]:
        cd = build(parse_algebra_id(task["algebra"]))
        i, j = _pair(task)
        report = verify_pair(cd, i, j, task.get("variant", "std"))
        return {**report.to_dict(), "passed": report.passed}


class BarSymmetryCheck(BaseCheck):
    def __init__(self, config: Dict[str, Any] = None):
        super().__init__("bar", "Standard and bar realizations agree", config)

    def execute(self, task: Dict[str, Any]) -> Dict[str, Any]:
        cd = build(parse_algebra_id(task["algebra"]))
        i, j = _pair(task)
        symmetric = check_bar_symmetry(verify_pair(cd, i, j, "std"), verify_pair(cd, i, j, "bar"))
        return {"pair": [i, j], "symmetric": symmetric, "passed": symmetric}


class OracleCheck(BaseCheck):
    def __init__(self, config: Dict[str, Any] = None):
        super().__init__("oracle", "2x2 evaluation representation of U_q(a1^(1))", config)

    def execute(self, task: Dict[str, Any]) -> Dict[str, Any]:
        holds = matrix_oracle_sl2()
        control = matrix_oracle_sl2(rho_shift=1)
        return {"holds": holds, "perturbedFails": not control, "passed": holds and not control}


class CoactionCheck(BaseCheck):
    def __init__(self, config: Dict[str, Any] = None):
        super().__init__("coaction", "Coaction compatibility for one pair", config)

    def execute(self, task: Dict[str, Any]) -> Dict[str, Any]:
        cd = build(parse_algebra_id(task["algebra"]))
        i, j = _pair(task)
        report = verify_coaction_pair(cd, i, j)
        return {**report.to_dict(), "passed": report.residual_zero and report.factors}


def _complex(z: complex) -> str:
    re = 0.0 if abs(z.real) < Config.NUMERIC_TOLERANCE else z.real
    im = 0.0 if abs(z.imag) < Config.NUMERIC_TOLERANCE else z.imag
    return f"{re:.12g}{im:+.12g}i"


class ClassifyCheck(BaseCheck):
    def __init__(self, config: Dict[str, Any] = None):
        super().__init__("classify", "Boundary-condition families of a diagram", config)

    def execute(self, task: Dict[str, Any]) -> Dict[str, Any]:
        aid = parse_algebra_id(task["algebra"])
        cd = build(aid)
        cs = constraints_for(cd)
        families = enumerate_families(cs, cd)
        try:
            comparison = compare_with_paper(aid, families, cd, strict=False)
            rows, unmatched, table = comparison.rows, comparison.unmatched, True
        except PaperTableError:
            rows = [{"code": f.code(), **f.to_dict(), "paperMatch": None} for f in families]
            unmatched, table = [], False
        tval = 2
        for row, family in zip(rows, families):
            values = instantiate_numeric(family, tval, cd)
            row["closedForm"] = {f"w{n}": root_closed_form(tag, n, cd) for n, tag in enumerate(family.tags)}
            row["numericAtT2"] = {
                f"w{n}": v if isinstance(v, str) else _complex(v[0] if isinstance(v, tuple) else v)
                for n, v in values.items()
            }
            row["numericResidualOk"] = numeric_residual(cs, values, tval, cd) < Config.NUMERIC_TOLERANCE
        extras = [row["code"] for row in rows if row["paperMatch"] == "extra"]
        return {
            "algebra": str(aid),
            "constraints": cs.to_dict(),
            "families": rows,
            "paperTable": table,
            "unmatchedPaperFamilies": unmatched,
            "passed": not unmatched and not extras and all(r["numericResidualOk"] for r in rows),
        }
