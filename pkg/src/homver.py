"""
Homomorphism check for the realization A_i -> c_i E_i K_i + cb_i F_i K_i + w_i K_i^2.

For a node pair the two relations (i, j) and (j, i) are pushed through the
realization and reduced to normal form.  The rho constants are then solved
from the linear system of w-free coefficients, and whatever survives is
factored into the w-constraints of the pair.
"""
import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from sympy.polys.fields import FracElement
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyElement

from src.cartan import CartanData, LinkClass, check_pair, classify_link
from src.coeff import CoefficientField, coefficient_field, kappa, qbinom, qpow, render
from src.config import Config
from src.constraints import (FREE, ROOT, ROOT2, ZERO, Atom, Constraint, allowed_tags, atom_value,
                             implies, maximal_assignments, minimal, satisfied, template_for_link)
from src.exceptions import CoefficientError, EvaluationError, HomomorphismError, OracleGateError
from src.freealg import E, F, FreeAlgebra, NCPoly, substitute
from src.onsager import build_relation, paper_rho, rho_symbols
from src.uqreduce import RewriteSystem, gate_degree, gate_report, serre_rules

logger = logging.getLogger("homver")

VARIANTS = ("std", "bar")


def session_symbols(cd: CartanData, i: int, j: int) -> Tuple[str, ...]:
    """c, cb, w of both nodes plus the rho symbols of both orientations"""
    names: List[str] = []
    for n in sorted((i, j)):
        names += [f"c{n}", f"cb{n}", f"w{n}"]
    return tuple(names + rho_symbols(cd, i, j) + rho_symbols(cd, j, i))


@dataclass
class Realization:
    variant: str
    images: Dict[int, NCPoly]

    def render(self) -> Dict[str, str]:
        return {f"A{n}": image.render() for n, image in sorted(self.images.items())}


def realize(cd: CartanData, variant: str = "std", alg: Optional[FreeAlgebra] = None,
            nodes: Optional[Sequence[int]] = None) -> Realization:
    """Images of the A-generators; the bar variant carries K^-1 and K^-2"""
    if variant not in VARIANTS:
        raise HomomorphismError(f"unknown realization variant '{variant}'")
    nodes = list(cd.nodes) if nodes is None else list(nodes)
    if alg is None:
        symbols = tuple(f"{p}{n}" for n in nodes for p in ("c", "cb", "w"))
        alg = FreeAlgebra(cd, coefficient_field(symbols))
    sign = 1 if variant == "std" else -1
    cf = alg.cf
    images = {}
    for n in nodes:
        images[n] = (alg.term((E(n),), alg.kvec(n, sign), cf.gen(f"c{n}"))
                     + alg.term((F(n),), alg.kvec(n, sign), cf.gen(f"cb{n}"))
                     + alg.term((), alg.kvec(n, 2 * sign), cf.gen(f"w{n}")))
    return Realization(variant, images)


@dataclass
class VerificationReport:
    algebra: str
    pair: Tuple[int, int]
    variant: str
    link: LinkClass
    rho_values: Dict[str, FracElement]
    constraints: List[Constraint]
    paper_constraints: List[Constraint]
    residual_zero: bool
    branches: List[Dict[str, Any]] = field(default_factory=list)
    paper_branches_zero: bool = True
    necessity: Optional[bool] = None
    necessity_points: List[Dict[str, str]] = field(default_factory=list)
    rho_paper: Dict[str, FracElement] = field(default_factory=dict)
    gates: Dict[str, Any] = field(default_factory=dict)
    range_inferred: List[str] = field(default_factory=list)
    trace: Dict[str, Any] = field(default_factory=dict)

    @property
    def rho(self) -> Dict[str, str]:
        return {name: render(value) for name, value in sorted(self.rho_values.items())}

    @property
    def rho_matches_paper(self) -> bool:
        return set(self.rho_values) == set(self.rho_paper) and all(
            not (self.rho_values[name] - self.rho_paper[name]) for name in self.rho_values)

    @property
    def constraints_agree(self) -> bool:
        return (implies(self.constraints, self.paper_constraints)
                and implies(self.paper_constraints, self.constraints))

    @property
    def mode(self) -> str:
        return "full" if self.gates.get("passed") else "sufficiency-only"

    @property
    def passed(self) -> bool:
        return (self.residual_zero and self.paper_branches_zero
                and self.rho_matches_paper and self.constraints_agree)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "algebra": self.algebra,
            "pair": list(self.pair),
            "variant": self.variant,
            "link": self.link.to_dict(),
            "rho": self.rho,
            "rhoMatchesPaper": self.rho_matches_paper,
            "constraints": [c.render() for c in self.constraints],
            "paperConstraints": [c.render() for c in self.paper_constraints],
            "constraintsAgree": self.constraints_agree,
            "residualZero": self.residual_zero,
            "branches": self.branches,
            "paperBranchesZero": self.paper_branches_zero,
            "necessity": self.necessity,
            "necessityPoints": self.necessity_points,
            "mode": self.mode,
            "gates": {k: v for k, v in self.gates.items() if k != "passed"},
            "rangeInferred": self.range_inferred,
            "trace": self.trace,
        }


def _split_rho(cf: CoefficientField, p: PolyElement, rho: Sequence[str],
               wnames: Sequence[str]) -> Dict[Tuple[int, ...], Dict[Optional[str], PolyElement]]:
    """coefficient -> {w-exponents: {rho symbol or None: c-polynomial}}"""
    rho_idx = {cf.symbols.index(name): name for name in rho}
    w_idx = [cf.symbols.index(name) for name in wnames]
    out: Dict[Tuple[int, ...], Dict[Optional[str], PolyElement]] = {}
    for monom, coeff in p.items():
        degree = sum(monom[k] for k in rho_idx)
        if degree > 1:
            raise HomomorphismError("rho symbols occur nonlinearly in a reduced coefficient")
        col = next((name for k, name in rho_idx.items() if monom[k]), None)
        wkey = tuple(monom[k] for k in w_idx)
        rest = tuple(0 if (k in rho_idx or k in w_idx) else e for k, e in enumerate(monom))
        cell = out.setdefault(wkey, {})
        term = cf.ring.from_dict({rest: coeff})
        cell[col] = cell[col] + term if col in cell else term
    return out


def _rref_solve(cf: CoefficientField, rows: List[List[FracElement]], names: Sequence[str]
                ) -> Optional[Dict[str, FracElement]]:
    """None when the system leaves some unknown undetermined"""
    n = len(names)
    domain = cf.field.to_domain()
    matrix = DomainMatrix(rows, (len(rows), n + 1), domain)
    reduced, pivots = matrix.rref()
    if n in pivots:
        raise HomomorphismError(f"inconsistent linear system for {', '.join(names)}")
    if len(pivots) < n:
        return None
    entries = reduced.to_list()
    return {names[col]: entries[r][n] for r, col in enumerate(pivots)}


def solve_rho(cf: CoefficientField, reduced: NCPoly, rho: Sequence[str],
              wnames: Sequence[str]) -> Dict[str, FracElement]:
    """Solve the rho constants from the coefficients of a reduced relation.

    The w-free part of every coefficient has to vanish outright; its rows are
    tried first and the full coefficient rows are the fallback.
    """
    if not rho:
        return {}
    zero = cf.field.zero
    free_rows: List[List[FracElement]] = []
    all_rows: List[List[FracElement]] = []
    for _, c in reduced.sorted_terms():
        for wkey, cells in sorted(_split_rho(cf, c, rho, wnames).items()):
            row = [cf.to_field(cells[name]) if name in cells else zero for name in rho]
            row.append(-cf.to_field(cells[None]) if None in cells else zero)
            if not any(row) or row in all_rows:
                continue
            all_rows.append(row)
            if not any(wkey):
                free_rows.append(row)
    for rows in (free_rows, all_rows):
        if rows:
            solution = _rref_solve(cf, rows, rho)
            if solution is not None:
                return solution
    raise HomomorphismError(f"rho constants {', '.join(rho)} are not determined by the relation")


def _apply_rho(cf: CoefficientField, p: NCPoly, values: Dict[str, FracElement]) -> NCPoly:
    try:
        engine = {name: cf.from_field(value) for name, value in values.items()}
    except CoefficientError as e:
        raise HomomorphismError(f"rho solution is not polynomial in the parameters: {e}") from e
    return p.map_coeffs(lambda c: cf.substitute(c, engine))


def _strip_atoms(cf: CoefficientField, cd: CartanData, numer: PolyElement,
                 nodes: Sequence[int]) -> Constraint:
    """Divide the atoms out of a cleared coefficient; w-dependent leftovers stay generic"""
    atoms: List[Atom] = []
    for node in nodes:
        for kind in ("W", "K1", "K2"):
            atom = Atom(kind, node)
            divisor = atom_value(cf, cd, atom).numer
            while True:
                quotient, remainder = divmod(numer, divisor)
                if remainder:
                    break
                numer = quotient
                atoms.append(atom)
    w_positions = [1 + cf.symbols.index(f"w{n}") for n in nodes]
    generic: List[str] = []
    if any(m[k] for m in numer.keys() for k in w_positions):
        _, factors = numer.factor_list()
        for factor, exp in factors:
            if any(m[k] for m in factor.keys() for k in w_positions):
                generic += [str(factor.as_expr())] * exp
    return Constraint.of(*atoms, generic=generic)


def extract_constraints(cf: CoefficientField, cd: CartanData, residual: NCPoly,
                        nodes: Sequence[int]) -> List[Constraint]:
    found = [_strip_atoms(cf, cd, cf.to_field(c).numer, nodes) for _, c in residual.sorted_terms()]
    return minimal(found)


def relation_constraints(cf: CoefficientField, cd: CartanData, residuals: Iterable[NCPoly],
                         nodes: Sequence[int]) -> List[Constraint]:
    """Constraints read from each residual on its own, then reduced together"""
    # the residuals of the two relations may share words
    return minimal(c for residual in residuals for c in extract_constraints(cf, cd, residual, nodes))


def impose(cf: CoefficientField, cd: CartanData, p: PolyElement, tags: Dict[int, str]) -> PolyElement:
    """w -> 0 for ZERO, w^2 -> -kappa (times the ROOT2 shift) for root tags"""
    for node, tag in sorted(tags.items()):
        name = f"w{node}"
        if tag == ZERO:
            p = cf.substitute(p, {name: cf.ring.zero})
        elif tag in (ROOT, ROOT2):
            scale = kappa(cd.d[node])
            if tag == ROOT2:
                scale = scale * (qpow(1, cd.d[node]) + qpow(-1, cd.d[node]) - 1) ** 2
            value = -(cf.gen(f"c{node}") * cf.gen(f"cb{node}")).mul_ground(scale)
            p = _reduce_square(cf, p, name, value)
    return p


def _reduce_square(cf: CoefficientField, p: PolyElement, name: str, value: PolyElement) -> PolyElement:
    idx = cf.symbols.index(name)
    out = cf.ring.zero
    for monom, coeff in p.items():
        e = monom[idx]
        reduced = list(monom)
        reduced[idx] = e % 2
        out += cf.ring.from_dict({tuple(reduced): coeff}) * value ** (e // 2)
    return out


def branches_for(constraints: Sequence[Constraint], nodes: Sequence[int]) -> List[Dict[int, str]]:
    """Maximal node tag assignments satisfying every constraint"""
    choices = [allowed_tags(constraints, n) for n in nodes]
    pool = []
    for combo in itertools.product(*choices):
        tags = dict(zip(nodes, combo))
        if all(satisfied(c, tags) for c in constraints):
            pool.append(tags)
    return maximal_assignments(pool)


def _branch_zero(cf: CoefficientField, cd: CartanData, residual: NCPoly, tags: Dict[int, str]) -> bool:
    return all(not impose(cf, cd, c, tags) for _, c in residual.terms.items())


def _random_point(rng: random.Random, names: Sequence[str]) -> Dict[str, Fraction]:
    point = {"t": Fraction(rng.randint(2, 9), rng.randint(1, 7))}
    while abs(point["t"]) == 1:
        point["t"] = Fraction(rng.randint(2, 9), rng.randint(1, 7))
    for name in names:
        point[name] = Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 5))
    return point


def check_necessity(cf: CoefficientField, residual: Union[NCPoly, Sequence[NCPoly]], names: Sequence[str],
                    points: int, seed: int) -> Tuple[bool, List[Dict[str, str]]]:
    """The residual (or one of several) must be nonzero at every sampled point"""
    rng = random.Random(seed)
    residuals = [residual] if isinstance(residual, NCPoly) else list(residual)
    coeffs = [c for r in residuals for _, c in r.sorted_terms()]
    shown: List[Dict[str, str]] = []
    holds = bool(coeffs)
    while len(shown) < points and coeffs:
        point = _random_point(rng, names)
        try:
            values = [cf.evaluate(c, point) for c in coeffs]
        except EvaluationError:
            continue
        shown.append({k: str(v) for k, v in point.items()})
        holds = holds and any(values)
    return holds, shown


def _reduce_relations(cd: CartanData, i: int, j: int, variant: str, alg: FreeAlgebra,
                      rs: RewriteSystem) -> Tuple[Dict[Tuple[int, int], NCPoly], List[str]]:
    images = realize(cd, variant, alg, (i, j)).images
    reduced, inferred = {}, []
    for x, y in ((i, j), (j, i)):
        rel = build_relation(cd, x, y, alg)
        inferred += [f"gamma{k}{l}_{x}{y}" for k, l in rel.range_inferred]
        reduced[(x, y)] = substitute(rel.element, images, reduce=rs.normal_form)
        logger.debug(f"relation ({x},{y}) reduced to {len(reduced[(x, y)])} terms")
    return reduced, inferred


def verify_pair(cd: CartanData, i: int, j: int, variant: str = "std") -> VerificationReport:
    """Push both relations of the pair through the realization and read off rho and constraints"""
    check_pair(cd, i, j)
    cf = coefficient_field(session_symbols(cd, i, j))
    alg = FreeAlgebra(cd, cf)
    # completed up to the longest word of the stress corpus
    rs = serre_rules(cd, i, j, complete_to=gate_degree(cd, i, j))
    nodes = sorted((i, j))
    wnames = [f"w{n}" for n in nodes]
    reduced, inferred = _reduce_relations(cd, i, j, variant, alg, rs)

    rho_values: Dict[str, FracElement] = {}
    rho_paper: Dict[str, FracElement] = {}
    residuals: Dict[Tuple[int, int], NCPoly] = {}
    for (x, y), poly in reduced.items():
        names = rho_symbols(cd, x, y)
        solved = solve_rho(cf, poly, names, wnames)
        rho_values.update(solved)
        rho_paper.update(paper_rho(cd, x, y, cf))
        residuals[(x, y)] = _apply_rho(cf, poly, solved)
    trace = rs.trace.to_dict()

    constraints = relation_constraints(cf, cd, residuals.values(), nodes)
    link = classify_link(cd, i, j)
    paper = template_for_link(link)

    def vanishes(tags: Dict[int, str]) -> bool:
        return all(_branch_zero(cf, cd, residual, tags) for residual in residuals.values())

    nonzero = [residual for residual in residuals.values() if residual]
    if nonzero:
        branches = [{"tags": {str(n): t for n, t in tags.items()}, "zero": vanishes(tags)}
                    for tags in branches_for(constraints, nodes)]
        paper_zero = all(vanishes(tags) for tags in branches_for(paper, nodes))
    else:
        branches = [{"tags": {str(n): FREE for n in nodes}, "zero": True}]
        paper_zero = True
    residual_zero = all(b["zero"] for b in branches)

    gates = gate_report(rs, alg)
    necessity, points = None, []
    if nonzero and gates["passed"]:
        parameters = [name for name in cf.symbols if not name.startswith("rho")]
        necessity, points = check_necessity(cf, nonzero, parameters, Config.NECESSITY_POINTS,
                                            Config.NECESSITY_SEED)
    elif nonzero:
        logger.warning(f"gates failed on {cd.algebra} pair ({i},{j}); constraints are sufficiency-only")

    return VerificationReport(
        algebra=str(cd.algebra), pair=(i, j), variant=variant, link=link,
        rho_values=rho_values, constraints=constraints, paper_constraints=paper,
        residual_zero=residual_zero, branches=branches, paper_branches_zero=paper_zero,
        necessity=necessity, necessity_points=points, rho_paper=rho_paper, gates=gates,
        range_inferred=inferred, trace=trace,
    )


def check_bar_symmetry(r1: VerificationReport, r2: VerificationReport) -> bool:
    """Same rho values and the same constraint generators for both variants"""
    if r1.pair != r2.pair or r1.algebra != r2.algebra:
        return False
    if set(r1.rho_values) != set(r2.rho_values):
        return False
    if any(r1.rho_values[name] - r2.rho_values[name] for name in r1.rho_values):
        return False
    return set(r1.constraints) == set(r2.constraints)


# 2x2 evaluation representation of U_q(a1^(1))

_ORACLE_SYMBOLS = ("z", "c0", "cb0", "w0", "c1", "cb1", "w1")


def _oracle_generators(cf: CoefficientField):
    K = cf.field.to_domain()
    one, zero = cf.field.one, cf.field.zero
    t, z = cf.fgen("t"), cf.fgen("z")
    e1 = DomainMatrix([[zero, one], [zero, zero]], (2, 2), K)
    f1 = DomainMatrix([[zero, zero], [one, zero]], (2, 2), K)
    k1 = DomainMatrix.diag([t, one / t], K)
    k1inv = DomainMatrix.diag([one / t, t], K)
    e = {0: f1 * z, 1: e1}
    f = {0: e1 * (one / z), 1: f1}
    k = {0: k1inv, 1: k1}
    kinv = {0: k1, 1: k1inv}
    return e, f, k, kinv


def _oracle_gate(cf: CoefficientField, e, f, k, kinv) -> None:
    """Defining relations of U_q(a1^(1)) as matrix identities"""
    K = cf.field.to_domain()
    ident = DomainMatrix.eye(2, K)
    t = cf.fgen("t")
    a = [[2, -2], [-2, 2]]

    def tp(n: int):
        return t ** n if n >= 0 else cf.field.one / t ** (-n)

    checks = []
    for i in (0, 1):
        checks.append((f"K{i} K{i}^-1 = 1", k[i] * kinv[i] - ident))
        for j in (0, 1):
            checks.append((f"K{i} e{j} K{i}^-1", k[i] * e[j] * kinv[i] - e[j] * tp(a[i][j])))
            checks.append((f"K{i} f{j} K{i}^-1", k[i] * f[j] * kinv[i] - f[j] * tp(-a[i][j])))
            bracket = e[i] * f[j] - f[j] * e[i]
            if i == j:
                bracket = bracket - (k[i] * k[i] - kinv[i] * kinv[i]) * (cf.field.one / (tp(2) - tp(-2)))
            checks.append((f"[e{i}, f{j}]", bracket))
    for i, j in ((0, 1), (1, 0)):
        for gens, name in ((e, "e"), (f, "f")):
            total = DomainMatrix.zeros((2, 2), K)
            for r in range(4):
                coeff = qbinom_field(cf, 3, r)
                word = [gens[i]] * (3 - r) + [gens[j]] + [gens[i]] * r
                prod = ident
                for m in word:
                    prod = prod * m
                total = total + prod * (coeff if r % 2 == 0 else -coeff)
            checks.append((f"q-Serre {name}{i}{name}{j}", total))
    for label, value in checks:
        if not value.is_zero_matrix:
            raise OracleGateError(f"evaluation representation violates {label}")


def qbinom_field(cf: CoefficientField, n: int, r: int) -> FracElement:
    return qbinom(n, r).set_field(cf.field)


def matrix_oracle_sl2(rho_shift: int = 0) -> bool:
    """Check the a1^(1) q-Onsager relations on the realized 2x2 matrices.

    ``rho_shift`` is added to both rho values; any nonzero shift must break
    the relations.
    """
    cf = coefficient_field(_ORACLE_SYMBOLS)
    e, f, k, kinv = _oracle_generators(cf)
    _oracle_gate(cf, e, f, k, kinv)
    t = cf.fgen("t")
    q = t ** 2
    amat = {}
    for n in (0, 1):
        c, cb, w = cf.fgen(f"c{n}"), cf.fgen(f"cb{n}"), cf.fgen(f"w{n}")
        amat[n] = e[n] * k[n] * c + f[n] * k[n] * cb + k[n] * k[n] * w
    ok = True
    for i, j in ((0, 1), (1, 0)):
        c, cb = cf.fgen(f"c{i}"), cf.fgen(f"cb{i}")
        rho = c * cb * (q + cf.field.one / q) ** 2 + rho_shift
        ai, aj = amat[i], amat[j]
        lhs = DomainMatrix.zeros((2, 2), cf.field.to_domain())
        for r in range(4):
            coeff = qbinom_field(cf, 3, r)
            prod = DomainMatrix.eye(2, cf.field.to_domain())
            for m in [ai] * (3 - r) + [aj] + [ai] * r:
                prod = prod * m
            lhs = lhs + prod * (coeff if r % 2 == 0 else -coeff)
        rhs = (ai * aj - aj * ai) * rho
        ok = ok and (lhs - rhs).is_zero_matrix
    logger.debug(f"sl2 matrix oracle (rho shift {rho_shift}): {ok}")
    return ok
