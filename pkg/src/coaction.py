"""
Coaction check: A_i -> (c_i E_i K_i + cb_i F_i K_i) (x) 1 + K_i^2 (x) A_i.

Both relations of a pair are expanded in U_q (x) O_q.  Left factors are
reduced with the U_q rewriting system; the rho constants are read off the
(x) 1 component, after which the whole expression must collapse to a single
unit times the relation element on the right, which the O_q rewrite then
kills.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

from sympy.polys.fields import FracElement
from sympy.polys.rings import PolyElement

from src.cartan import CartanData, check_pair
from src.coeff import coefficient_field, render
from src.config import Config
from src.exceptions import ReductionError
from src.freealg import (A, E, F, FreeAlgebra, Monomial, NCPoly, TensorPoly, Word, counit,
                         render_monomial, tensor_multiply)
from src.homver import solve_rho
from src.onsager import build_relation, rho_symbols
from src.uqreduce import RewriteSystem, serre_rules

logger = logging.getLogger("coaction")


def coaction_symbols(cd: CartanData, i: int, j: int) -> Tuple[str, ...]:
    names: List[str] = []
    for n in sorted((i, j)):
        names += [f"c{n}", f"cb{n}"]
    return tuple(names + rho_symbols(cd, i, j) + rho_symbols(cd, j, i))


def coaction_algebra(cd: CartanData, i: int, j: int) -> FreeAlgebra:
    return FreeAlgebra(cd, coefficient_field(coaction_symbols(cd, i, j)))


def coact_summands(cd: CartanData, i: int, alg: FreeAlgebra, k_power: int = 2
                   ) -> Tuple[TensorPoly, TensorPoly]:
    """(c E K + cb F K) (x) 1 and K^k_power (x) A"""
    cf = alg.cf
    left = (alg.term((E(i),), alg.kvec(i, 1), cf.gen(f"c{i}"))
            + alg.term((F(i),), alg.kvec(i, 1), cf.gen(f"cb{i}")))
    return (TensorPoly.pure(left, alg.one()),
            TensorPoly.pure(alg.k(i, k_power), alg.term((A(i),))))


def coact(cd: CartanData, i: int, alg: FreeAlgebra, k_power: int = 2) -> TensorPoly:
    first, second = coact_summands(cd, i, alg, k_power)
    return first + second


def counit_left(tp: TensorPoly) -> NCPoly:
    """(counit (x) id) of a tensor element"""
    alg = tp.alg
    total = alg.zero()
    for left, right in tp.by_left().items():
        total = total + right.scale(counit(alg.poly({left: alg.ring.one})))
    return total


def reduce_left(tp: TensorPoly, rs: RewriteSystem) -> TensorPoly:
    groups = {word: rs.normal_form(left) for word, left in tp.by_right().items()}
    return TensorPoly.from_groups(tp.alg, groups)


def push_relation(element: NCPoly, images: Dict[int, TensorPoly],
                  reduce: Optional[Callable[[TensorPoly], TensorPoly]] = None) -> TensorPoly:
    """Apply A_i -> images[i] to an A-polynomial, prefix products shared"""
    alg = element.alg
    one = TensorPoly.pure(alg.one(), alg.one())
    cache: Dict[Word, TensorPoly] = {(): one}
    total = TensorPoly(alg, {})
    for m, c in element.sorted_terms():
        for k in range(1, len(m.word) + 1):
            prefix = m.word[:k]
            if prefix not in cache:
                value = tensor_multiply(cache[prefix[:-1]], images[prefix[-1].node])
                cache[prefix] = reduce(value) if reduce else value
        total = total + cache[m.word].scale(c)
    return total


def _word_key(word: Word):
    """Deglex; lower node index is the greater letter"""
    return (len(word), tuple(-letter.node for letter in word))


class OqRewrite:
    """Relations of the pair as rules: greatest top-degree word -> rest"""

    def __init__(self, alg: FreeAlgebra, elements: List[NCPoly], step_bound: Optional[int] = None):
        self.alg = alg
        self.step_bound = step_bound or Config.STEP_BOUND
        self.steps = 0
        self.rules: Dict[Word, NCPoly] = {}
        for element in elements:
            lead, c = max(element.terms.items(), key=lambda item: _word_key(item[0].word))
            if c == alg.ring.one:
                rest = -(element - alg.poly({lead: c}))
            elif c == -alg.ring.one:
                rest = element - alg.poly({lead: c})
            else:
                raise ReductionError(f"relation lead {render_monomial(lead)} is not monic")
            self.rules[lead.word] = rest

    def _redex(self, word: Word) -> Optional[Tuple[int, Word]]:
        for pos in range(len(word)):
            for lead in self.rules:
                if word[pos:pos + len(lead)] == lead:
                    return pos, lead
        return None

    def normal_form(self, p: NCPoly) -> NCPoly:
        alg = self.alg
        done = alg.zero()
        todo = dict(p.terms)
        while todo:
            m = max(todo, key=lambda mono: _word_key(mono.word))
            c = todo.pop(m)
            redex = self._redex(m.word)
            if redex is None:
                done = done + alg.poly({m: c})
                continue
            self.steps += 1
            if self.steps > self.step_bound:
                raise ReductionError(f"O_q rewriting exceeded {self.step_bound} steps")
            pos, lead = redex
            prefix, suffix = alg.term(m.word[:pos]), alg.term(m.word[pos + len(lead):])
            for rm, rc in (prefix * self.rules[lead] * suffix).terms.items():
                value = todo[rm] + c * rc if rm in todo else c * rc
                if value:
                    todo[rm] = value
                else:
                    todo.pop(rm, None)
        return done


@dataclass
class CoactionReport:
    algebra: str
    pair: Tuple[int, int]
    rho_values: Dict[str, FracElement]
    units: Dict[str, str]
    intermediate: Dict[str, str]
    factors: bool
    residual: TensorPoly
    trace: Dict[str, Any] = field(default_factory=dict)

    @property
    def residual_zero(self) -> bool:
        return not self.residual

    def to_dict(self) -> Dict[str, Any]:
        return {
            "algebra": self.algebra,
            "pair": list(self.pair),
            "rho": {name: render(v) for name, v in sorted(self.rho_values.items())},
            "intermediate": self.intermediate,
            "units": self.units,
            "factorsAsUnitTimesRelation": self.factors,
            "residual": self.residual.render(),
            "residualZero": self.residual_zero,
            "trace": self.trace,
        }


def _unit_times(tp: TensorPoly, element: NCPoly) -> Optional[Monomial]:
    """The unit u when tp = u (x) (s * element) for a scalar s"""
    groups = tp.by_left()
    if len(groups) != 1:
        return None
    (unit, right), = groups.items()
    if unit.word:
        return None
    lead = max(element.terms, key=lambda mono: _word_key(mono.word))
    lc = element.coeff(lead)
    if lc not in (element.alg.ring.one, -element.alg.ring.one):
        return None
    # lc is +-1, its own inverse
    scale = right.coeff(lead) * lc
    if not scale or (right - element.scale(scale)):
        return None
    return unit


def verify_coaction_pair(cd: CartanData, i: int, j: int, k_power: int = 2) -> CoactionReport:
    check_pair(cd, i, j)
    alg = coaction_algebra(cd, i, j)
    cf = alg.cf
    rs = serre_rules(cd, i, j)
    images = {n: coact(cd, n, alg, k_power) for n in (i, j)}

    rho_values: Dict[str, FracElement] = {}
    elements, expanded = [], []
    for x, y in ((i, j), (j, i)):
        rel = build_relation(cd, x, y, alg)
        tp = push_relation(rel.element, images, reduce=lambda v: reduce_left(v, rs))
        solved = solve_rho(cf, tp.by_right().get((), alg.zero()), rel.rho, [])
        rho_values.update(solved)
        engine: Dict[str, PolyElement] = {name: cf.from_field(v) for name, v in solved.items()}
        elements.append(rel.element.map_coeffs(lambda c: cf.substitute(c, engine)))
        expanded.append(((x, y), tp.map_coeffs(lambda c: cf.substitute(c, engine))))

    oq = OqRewrite(alg, elements)
    residual = TensorPoly(alg, {})
    units, intermediate, factors = {}, {}, True
    for ((x, y), tp), element in zip(expanded, elements):
        label = f"{x},{y}"
        intermediate[label] = tp.render()
        unit = _unit_times(tp, element)
        factors = factors and unit is not None
        units[label] = render_monomial(unit) if unit is not None else "none"
        groups = {u: oq.normal_form(right) for u, right in tp.by_left().items()}
        for u, right in groups.items():
            residual = residual + TensorPoly.pure(alg.poly({u: alg.ring.one}), right)
    logger.debug(f"coaction {cd.algebra} ({i},{j}): residual {len(residual)} terms, "
                 f"{oq.steps} O_q steps")
    return CoactionReport(str(cd.algebra), (i, j), rho_values, units, intermediate, factors,
                          residual, {**rs.trace.to_dict(), "oqSteps": oq.steps})
