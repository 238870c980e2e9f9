"""
Boundary-condition families over a whole Dynkin diagram.

Every node gets a tag: ZERO (w = 0), ROOT (w^2 = -kappa), ROOT2
(w^2 = -kappa (q + q^-1 - 1)^2, triple links only) or FREE.  The search
splits on node tags and propagates single remaining choices along the links.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import pandas as pd

from src.cartan import AlgebraId, CartanData, links, render_algebra_id
from src.constraints import (FREE, ROOT, ROOT2, TAG_ORDER, ZERO, Constraint, KILLS, allowed_tags,
                             maximal_assignments, relaxes, satisfied, template_for_link)
from src.exceptions import EvaluationError, PaperMismatchError, PaperTableError

logger = logging.getLogger("classify")

TAG_SYMBOLS = {ROOT: "R", ROOT2: "R2", ZERO: "0", FREE: "*"}


@dataclass
class ConstraintSet:
    algebra: AlgebraId
    size: int
    by_link: Dict[Tuple[int, int], List[Constraint]]

    @property
    def constraints(self) -> List[Constraint]:
        return [c for pair in sorted(self.by_link) for c in self.by_link[pair]]

    def to_dict(self) -> Dict[str, Any]:
        return {f"{i},{j}": [c.render() for c in cs] for (i, j), cs in sorted(self.by_link.items())}


class SolutionFamily(NamedTuple):
    tags: Tuple[str, ...]
    provenance: Tuple[str, ...] = ()

    def as_map(self) -> Dict[int, str]:
        return dict(enumerate(self.tags))

    def code(self) -> str:
        return "".join(TAG_SYMBOLS[t] for t in self.tags)

    def to_dict(self) -> Dict[str, Any]:
        return {"tags": {f"w{n}": tag for n, tag in enumerate(self.tags)},
                "provenance": list(self.provenance)}


def constraints_for(cd: CartanData) -> ConstraintSet:
    """One constraint template per link, with c = cb = 1"""
    return ConstraintSet(cd.algebra, cd.size, {link.pair: template_for_link(link) for link in links(cd)})


def _propagate(cs: List[Constraint], tags: Dict[int, str], choices: Dict[int, Tuple[str, ...]],
               trail: List[str]) -> bool:
    """Force single remaining choices; False on a dead constraint"""
    changed = True
    while changed:
        changed = False
        for c in cs:
            if satisfied(c, tags):
                continue
            open_atoms = [a for a in c.atoms if a.node not in tags and KILLS[a.kind] in choices[a.node]]
            if not open_atoms:
                return False
            if len({(a.node, a.kind) for a in open_atoms}) == 1:
                atom = open_atoms[0]
                tags[atom.node] = KILLS[atom.kind]
                trail.append(f"w{atom.node}={tags[atom.node]} forced by {c.render()}")
                changed = True
    return True


def enumerate_families(cs: ConstraintSet, cd: Optional[CartanData] = None) -> List[SolutionFamily]:
    """Maximal families by case splitting with propagation, in a fixed order"""
    constraints = cs.constraints
    nodes = list(range(cs.size))
    choices = {n: allowed_tags(constraints, n) for n in nodes}
    found: Dict[Tuple[str, ...], Tuple[str, ...]] = {}

    def search(tags: Dict[int, str], trail: List[str]) -> None:
        if not _propagate(constraints, tags, choices, trail):
            return
        pending = [n for n in nodes if n not in tags]
        if not pending:
            key = tuple(tags[n] for n in nodes)
            found.setdefault(key, tuple(trail))
            return
        node = pending[0]
        for tag in choices[node]:
            search({**tags, node: tag}, trail + [f"w{node}={tag}"])

    search({}, [])
    leaves = [dict(enumerate(key)) for key in found]
    families = [SolutionFamily(tuple(a[n] for n in nodes), found[tuple(a[n] for n in nodes)])
                for a in maximal_assignments(leaves)]
    logger.debug(f"{render_algebra_id(cs.algebra)}: {len(found)} solutions, {len(families)} maximal")
    return families


def enumerate_families_brute(cs: ConstraintSet, cd: Optional[CartanData] = None) -> List[SolutionFamily]:
    """Every tag vector checked directly"""
    constraints = cs.constraints
    nodes = list(range(cs.size))
    pool = []
    for combo in itertools.product(*(allowed_tags(constraints, n) for n in nodes)):
        tags = dict(zip(nodes, combo))
        if all(satisfied(c, tags) for c in constraints):
            pool.append(tags)
    return [SolutionFamily(tuple(a[n] for n in nodes)) for a in maximal_assignments(pool)]


# Boundary-condition lists, one entry per displayed family; the all-zero family is implicit everywhere

class PaperFamily(NamedTuple):
    tags: Tuple[str, ...]
    line: str


def _fam(tags: Sequence[str], line: str) -> PaperFamily:
    return PaperFamily(tuple(tags), line)


def paper_table(aid: AlgebraId, cd: CartanData) -> List[PaperFamily]:
    series, rank, twist = aid
    size = cd.size
    R, R2, Z, F = ROOT, ROOT2, ZERO, FREE
    everything = [_fam([R] * size, f"{render_algebra_id(aid)}: all w_j roots")]
    key = (series, twist)
    if key == ("a", 1):
        if rank == 1:
            raise PaperTableError("a1^1 has no boundary-condition list (no constraints)")
        out = everything
    elif key in (("d", 1), ("e", 1), ("d", 3)):
        out = everything
    elif key == ("b", 1):
        out = [_fam([R] * (size - 1) + [F], "b_n^(1): w_0..w_{n-1} roots, w_n arbitrary")]
    elif key == ("c", 1):
        out = everything + [_fam([F] + [Z] * (size - 2) + [F], "c_n^(1): w_0, w_n arbitrary, others zero")]
    elif key == ("d", 2):
        out = [_fam([F] + [R] * (size - 2) + [F], "d_{n+1}^(2): w_0, w_n arbitrary, others roots")]
    elif key == ("a", 2) and rank == 2:
        out = [_fam([R, F], "a_2^(2): w_0 root, w_1 arbitrary"),
               _fam([F, Z], "a_2^(2): w_1 = 0, w_0 arbitrary")]
    elif key == ("a", 2) and rank == 4:
        out = [_fam([F, R, R], "a_4^(2): w_1, w_2 roots, w_0 arbitrary"),
               _fam([Z, F, R], "a_4^(2): w_0 = 0, w_2 root, w_1 arbitrary"),
               _fam([Z, Z, F], "a_4^(2): w_0 = w_1 = 0, w_2 arbitrary")]
    elif key == ("a", 2) and rank % 2 == 1:
        out = everything + [_fam([Z] * (size - 1) + [F], "a_{2n-1}^(2): w_0..w_{n-1} zero, w_n arbitrary")]
    elif key == ("a", 2):
        out = [_fam([F] + [R] * (size - 1), "a_{2n}^(2): w_1..w_n roots, w_0 arbitrary"),
               _fam([Z] * (size - 1) + [F], "a_{2n}^(2): w_0..w_{n-1} zero, w_n arbitrary")]
    elif key == ("g", 1):
        out = everything + [_fam([R, R, R2], "g_2^(1): w_2 on the second quadratic factor")]
    elif key == ("f", 1):
        out = everything + [_fam([R, R, R, Z, Z], "f_4^(1): w_3 = w_4 = 0")]
    elif key == ("e", 2):
        out = everything + [_fam([Z, Z, Z, R, R], "e_6^(2): w_0 = w_1 = w_2 = 0")]
    else:
        raise PaperTableError(f"no boundary-condition list for {render_algebra_id(aid)}")
    return out + [_fam([Z] * size, "w_j = 0 for all j")]


@dataclass
class ComparisonReport:
    algebra: str
    rows: List[Dict[str, Any]] = field(default_factory=list)
    unmatched: List[str] = field(default_factory=list)

    @property
    def extras(self) -> List[str]:
        return [row["code"] for row in self.rows if row["paperMatch"] == "extra"]

    def to_dict(self) -> Dict[str, Any]:
        return {"algebra": self.algebra, "families": self.rows, "unmatchedPaperFamilies": self.unmatched}


def match_status(family: SolutionFamily, table: Sequence[PaperFamily]) -> str:
    if any(p.tags == family.tags for p in table):
        return "exact"
    fmap = family.as_map()
    if any(relaxes(dict(enumerate(p.tags)), fmap) for p in table):
        return "subsumed"
    return "extra"


def compare_with_paper(aid: AlgebraId, families: Sequence[SolutionFamily], cd: CartanData,
                       strict: bool = True) -> ComparisonReport:
    """Containment of the tabulated families in the computed ones"""
    table = paper_table(aid, cd)
    report = ComparisonReport(render_algebra_id(aid))
    for family in families:
        report.rows.append({"code": family.code(), **family.to_dict(),
                            "paperMatch": match_status(family, table)})
    for p in table:
        pmap = dict(enumerate(p.tags))
        if not any(relaxes(pmap, f.as_map()) for f in families):
            report.unmatched.append(p.line)
    if report.unmatched and strict:
        raise PaperMismatchError(f"{report.algebra}: no computed family contains {'; '.join(report.unmatched)}")
    return report


Numeric = Union[complex, Tuple[complex, complex], str]


def instantiate_numeric(family: SolutionFamily, tval: complex, cd: CartanData) -> Dict[int, Numeric]:
    """Closed-form values at t = tval; roots come as the (+, -) pair"""
    out: Dict[int, Numeric] = {}
    for node, tag in enumerate(family.tags):
        if tag == ZERO:
            out[node] = 0j
            continue
        if tag == FREE:
            out[node] = "free"
            continue
        half = complex(tval) ** cd.d[node]
        if half == 0:
            raise EvaluationError(f"t = {tval} is not admissible")
        den = half - 1 / half
        if abs(den) == 0:
            raise EvaluationError(f"q_{node}^(1/2) - q_{node}^(-1/2) vanishes at t = {tval}")
        value = 1j / den
        if tag == ROOT2:
            q = half ** 2
            value *= q + 1 / q - 1
        out[node] = (value, -value)
    return out


def numeric_residual(cs: ConstraintSet, values: Dict[int, Numeric], tval: complex,
                     cd: CartanData) -> float:
    """Largest |constraint| with free nodes set to 1 + i/7, c = cb = 1"""
    def atom_at(atom) -> complex:
        v = values[atom.node]
        w = complex(1, 1 / 7) if v == "free" else (v[0] if isinstance(v, tuple) else v)
        q = complex(tval) ** (2 * cd.d[atom.node])
        kap = 1 / (q + 1 / q - 2)
        if atom.kind == "W":
            return w
        if atom.kind == "K1":
            return w * w + kap
        return w * w + kap * (q + 1 / q - 1) ** 2

    worst = 0.0
    for c in cs.constraints:
        prod = complex(1)
        for atom in c.atoms:
            prod *= atom_at(atom)
        worst = max(worst, abs(prod))
    return worst


def families_frame(families: Sequence[SolutionFamily], cd: CartanData,
                   status: Optional[Sequence[str]] = None) -> pd.DataFrame:
    rows = []
    for k, family in enumerate(families):
        row = {f"w{n}": TAG_SYMBOLS[tag] for n, tag in enumerate(family.tags)}
        if status is not None:
            row["paper"] = status[k]
        rows.append(row)
    frame = pd.DataFrame(rows, columns=[f"w{n}" for n in cd.nodes] + (["paper"] if status is not None else []))
    frame.index = [f"F{k + 1}" for k in range(len(rows))]
    return frame


def sort_families(families: Sequence[SolutionFamily]) -> List[SolutionFamily]:
    return sorted(families, key=lambda f: tuple(TAG_ORDER[t] for t in f.tags))


def root_closed_form(tag: str, node: int, cd: CartanData) -> str:
    d = cd.d[node]
    half = "q^(1/2)" if d == 1 else f"q^({d}/2)"
    if tag == ROOT:
        return f"±i/({half} - {half}^-1)"
    if tag == ROOT2:
        qn = "q" if d == 1 else f"q^{d}"
        return f"±i({qn} + {qn}^-1 - 1)/({half} - {half}^-1)"
    return "0" if tag == ZERO else "arbitrary"
