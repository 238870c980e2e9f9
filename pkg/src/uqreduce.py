"""
Normal forms in the rank-2 subalgebras of U_q(g^).

Target order: F-letters left of E-letters, K's on the far right.  The rules
are the e-f straightening rule and the oriented q-Serre rules for both
orientations of the pair, in E and in F.  The global letter order used to
orient Serre rules takes the lower node index as the greater letter.

Reduction to zero always proves ideal membership.  A nonzero residual is
only meaningful together with the diagnostics in this module:
``overlap_check`` (critical pairs up to a degree) and ``ideal_stress``
(x*r*y must reduce to zero).
"""
import logging
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

from sympy.polys.fields import FracElement

from src.cartan import CartanData, check_pair
from src.coeff import qbinom, qpow, t_field, tpow
from src.config import Config
from src.exceptions import ReductionError
from src.freealg import E, F, FreeAlgebra, Letter, Monomial, NCPoly, Word, multiply, render_monomial

logger = logging.getLogger("uqreduce")

RhsTerm = Tuple[Word, Tuple[int, ...], FracElement]


class Rule(NamedTuple):
    kind: str
    lhs: Word
    rhs: Tuple[RhsTerm, ...]


@dataclass
class ReductionTrace:
    steps: int = 0
    peak_terms: int = 0
    fired: Dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"steps": self.steps, "peakTerms": self.peak_terms,
                "fired": dict(sorted(self.fired.items()))}


@dataclass
class OverlapReport:
    maxdeg: int
    checked: int = 0
    discrepancies: List[str] = field(default_factory=list)

    @property
    def joinable(self) -> bool:
        return not self.discrepancies

    def to_dict(self) -> Dict[str, Any]:
        return {"maxdeg": self.maxdeg, "checked": self.checked,
                "joinable": self.joinable, "discrepancies": list(self.discrepancies)}


@dataclass
class StressReport:
    instances: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict[str, Any]:
        return {"instances": self.instances, "failures": len(self.failures),
                "passed": self.passed}


def _word_order(word: Word):
    """Deglex key; lower node index is the greater letter"""
    return (len(word), tuple(-letter.node for letter in word))


def _mirror(word: Word) -> Word:
    return tuple(Letter("F" if l.kind == "E" else "E", l.node) for l in word)


def _serre_terms(a_xy: int, d_x: int, x: int, y: int, kind: str) -> List[Tuple[Word, FracElement]]:
    m = 1 - a_xy
    letter = E if kind == "E" else F
    terms = []
    for r in range(m + 1):
        coeff = qbinom(m, r, d_x)
        if r % 2:
            coeff = -coeff
        word = (letter(x),) * (m - r) + (letter(y),) + (letter(x),) * r
        terms.append((word, coeff))
    return terms


def serre_element(cd: CartanData, x: int, y: int, kind: str = "E") -> List[Tuple[Word, FracElement]]:
    """sum_r (-1)^r [m;r]_{q_x} X_x^(m-r) X_y X_x^r with m = 1 - a_xy"""
    return _serre_terms(cd.a[x][y], cd.d[x], x, y, kind)


def _orient(terms: Sequence[Tuple[Word, FracElement]], zero_k: Tuple[int, ...], kind: str) -> Rule:
    lead, lc = max(terms, key=lambda item: _word_order(item[0]))
    rhs = tuple((w, zero_k, -c / lc) for w, c in terms if w != lead and c)
    return Rule(kind, lead, rhs)


def ef_rules(cd: CartanData, i: int, j: int) -> List[Rule]:
    zero_k = (0,) * cd.size
    rules = []
    for a in (i, j):
        for b in (i, j):
            if a != b:
                rules.append(Rule("ef", (E(a), F(b)), (((F(b), E(a)), zero_k, t_field().one),)))
                continue
            scale = t_field().one / (qpow(1, cd.d[a]) - qpow(-1, cd.d[a]))
            up, down = list(zero_k), list(zero_k)
            up[a], down[a] = 2, -2
            rules.append(Rule("ef", (E(a), F(a)), (
                ((F(a), E(a)), zero_k, t_field().one),
                ((), tuple(up), scale),
                ((), tuple(down), -scale),
            )))
    return rules


# degree-bounded completion of the positive part


def _reduce_positive(poly: Dict[Word, FracElement], rules: Dict[Word, Dict[Word, FracElement]]) -> Dict[Word, FracElement]:
    work = {w: c for w, c in poly.items() if c}
    result: Dict[Word, FracElement] = {}
    leads = sorted(rules, key=len, reverse=True)
    while work:
        w = max(work, key=_word_order)
        c = work.pop(w)
        hit = None
        for pos in range(len(w)):
            for lead in leads:
                if w[pos:pos + len(lead)] == lead:
                    hit = (pos, lead)
                    break
            if hit:
                break
        if hit is None:
            result[w] = c
            continue
        pos, lead = hit
        for rw, rc in rules[lead].items():
            new = w[:pos] + rw + w[pos + len(lead):]
            value = work.get(new, t_field().zero) + c * rc
            if value:
                work[new] = value
            else:
                work.pop(new, None)
    return result


def _rule_poly(lead: Word, rhs: Dict[Word, FracElement]) -> Dict[Word, FracElement]:
    poly = {lead: t_field().one}
    for w, c in rhs.items():
        poly[w] = -c
    return poly


def _critical_polys(l1: Word, r1: Dict[Word, FracElement], l2: Word, r2: Dict[Word, FracElement],
                    maxdeg: int) -> List[Dict[Word, FracElement]]:
    out = []
    for k in range(1, min(len(l1), len(l2))):
        if l1[-k:] != l2[:k] or len(l1) + len(l2) - k > maxdeg:
            continue
        tail, head = l2[k:], l1[:len(l1) - k]
        poly: Dict[Word, FracElement] = {}
        for w, c in r1.items():
            poly[w + tail] = poly.get(w + tail, t_field().zero) + c
        for w, c in r2.items():
            poly[head + w] = poly.get(head + w, t_field().zero) - c
        out.append(poly)
    return out


@lru_cache(maxsize=None)
def _completed_positive(a_values: Tuple[int, int], d_values: Tuple[int, int], maxdeg: int
                        ) -> Tuple[Tuple[Word, Tuple[Tuple[Word, FracElement], ...]], ...]:
    """Completion of the positive Serre relations on nodes 0, 1 up to word length maxdeg"""
    a01, a10 = a_values
    pending = [dict(_serre_terms(a01, d_values[0], 0, 1, "E")),
               dict(_serre_terms(a10, d_values[1], 1, 0, "E"))]
    rules: Dict[Word, Dict[Word, FracElement]] = {}
    while pending:
        poly = _reduce_positive(pending.pop(0), rules)
        if not poly:
            continue
        lead = max(poly, key=_word_order)
        lc = poly[lead]
        rhs = {w: -c / lc for w, c in poly.items() if w != lead}
        for old in [l for l in rules if any(l[p:p + len(lead)] == lead for p in range(len(l) - len(lead) + 1))]:
            pending.append(_rule_poly(old, rules.pop(old)))
        rules[lead] = rhs
        for other, orhs in list(rules.items()):
            pending.extend(_critical_polys(lead, rhs, other, orhs, maxdeg))
            if other != lead:
                pending.extend(_critical_polys(other, orhs, lead, rhs, maxdeg))
    final = {}
    for lead in sorted(rules, key=_word_order):
        others = {l: r for l, r in rules.items() if l != lead}
        final[lead] = _reduce_positive(rules[lead], others) if others else rules[lead]
    logger.info(f"completion of ({a01},{a10}) to degree {maxdeg}: {len(final)} rules")
    return tuple((lead, tuple(sorted(rhs.items(), key=lambda item: _word_order(item[0]))))
                 for lead, rhs in sorted(final.items(), key=lambda item: _word_order(item[0])))


def _relabel(word: Word, i: int, j: int) -> Word:
    return tuple(Letter(l.kind, i if l.node == 0 else j) for l in word)


class RewriteSystem:
    """Oriented rules for the pair (i, j) plus a memo of word normal forms"""

    def __init__(self, cd: CartanData, i: int, j: int, rules: Sequence[Rule],
                 completed_to: Optional[int] = None, step_bound: Optional[int] = None):
        self.cd = cd
        self.pair = (i, j)
        self.rules = tuple(rules)
        self.completed_to = completed_to
        self.step_bound = step_bound or Config.STEP_BOUND
        self.alphabet = {E(i), F(i), E(j), F(j)}
        self.zero_k = (0,) * cd.size
        self.trace = ReductionTrace()
        self._by_first: Dict[Letter, List[Rule]] = {}
        for rule in sorted(self.rules, key=lambda r: -len(r.lhs)):
            self._by_first.setdefault(rule.lhs[0], []).append(rule)
        self._memo: Dict[Word, Dict[Monomial, FracElement]] = {}

    @property
    def degree(self) -> int:
        """Length of the longest rule left-hand side"""
        return max(len(rule.lhs) for rule in self.rules)

    def shift(self, kexp: Sequence[int], word: Word) -> int:
        total = 0
        for letter in word:
            sign = 1 if letter.kind == "E" else -1
            total += sign * sum(e * self.cd.b(n, letter.node) for n, e in enumerate(kexp) if e)
        return total

    def find_redex(self, word: Word) -> Optional[Tuple[int, Rule]]:
        """Leftmost position, longest left-hand side first"""
        for pos, letter in enumerate(word):
            for rule in self._by_first.get(letter, ()):
                if word[pos:pos + len(rule.lhs)] == rule.lhs:
                    return pos, rule
        return None

    def apply(self, word: Word, pos: int, rule: Rule) -> List[RhsTerm]:
        suffix = word[pos + len(rule.lhs):]
        out = []
        for rword, rk, c in rule.rhs:
            texp = self.shift(rk, suffix) if any(rk) else 0
            out.append((word[:pos] + rword + suffix, rk, c * tpow(texp) if texp else c))
        return out

    def _count(self, kind: str) -> None:
        self.trace.steps += 1
        self.trace.fired[kind] = self.trace.fired.get(kind, 0) + 1
        if self.trace.steps > self.step_bound:
            raise ReductionError(f"step bound {self.step_bound} exceeded on pair {self.pair}")

    def nf_word(self, word: Word) -> Dict[Monomial, FracElement]:
        """Normal form of a bare word as {monomial: coefficient in Q(t)}"""
        memo = self._memo
        if word in memo:
            return memo[word]
        stack = [word]
        while stack:
            w = stack[-1]
            if w in memo:
                stack.pop()
                continue
            redex = self.find_redex(w)
            if redex is None:
                memo[w] = {Monomial(w, self.zero_k): t_field().one}
                stack.pop()
                continue
            children = self.apply(w, *redex)
            missing = [cw for cw, _, _ in children if cw not in memo]
            if missing:
                if len(stack) > self.step_bound:
                    raise ReductionError(f"rewriting does not terminate on {render_monomial(Monomial(w, self.zero_k))}")
                stack.extend(missing)
                continue
            result: Dict[Monomial, FracElement] = {}
            for cw, rk, c in children:
                for m, v in memo[cw].items():
                    key = Monomial(m.word, tuple(x + y for x, y in zip(m.kexp, rk))) if any(rk) else m
                    value = result[key] + c * v if key in result else c * v
                    if value:
                        result[key] = value
                    else:
                        del result[key]
            memo[w] = result
            self._count(redex[1].kind)
            self.trace.peak_terms = max(self.trace.peak_terms, len(result))
            stack.pop()
        return memo[word]

    def check_letters(self, p: NCPoly) -> None:
        for m in p.terms:
            for letter in m.word:
                if letter not in self.alphabet:
                    raise ReductionError(f"letter {letter} is outside the alphabet of pair {self.pair}")

    def normal_form(self, p: NCPoly) -> NCPoly:
        self.check_letters(p)
        terms: Dict[Monomial, Any] = {}
        for m, c in p.sorted_terms():
            for nm, v in self.nf_word(m.word).items():
                key = Monomial(nm.word, tuple(x + y for x, y in zip(nm.kexp, m.kexp)))
                value = c.mul_ground(v)
                terms[key] = terms[key] + value if key in terms else value
        result = NCPoly(p.alg, terms)
        self.trace.peak_terms = max(self.trace.peak_terms, len(result))
        return result

    def is_normal(self, p: NCPoly) -> bool:
        return all(self.find_redex(m.word) is None for m in p.terms)


def pair_degree(cd: CartanData, i: int, j: int) -> int:
    """Length of the longer Serre relation of the pair"""
    return 2 - min(cd.a[i][j], cd.a[j][i])


def gate_degree(cd: CartanData, i: int, j: int) -> int:
    """Longest word met by the stress corpus: x * r * y with |x|, |y| <= STRESS_MAX_LEN"""
    return pair_degree(cd, i, j) + 2 * Config.STRESS_MAX_LEN


def serre_rules(cd: CartanData, i: int, j: int, complete_to: Optional[int] = None,
                step_bound: Optional[int] = None) -> RewriteSystem:
    """e-f rules plus the oriented q-Serre rules of the pair, in E and in F.

    With ``complete_to`` the Serre part is replaced by its completion up to
    that word length (positive part, mirrored to F).
    """
    check_pair(cd, i, j)
    zero_k = (0,) * cd.size
    rules = ef_rules(cd, i, j)
    if complete_to is None:
        for kind in ("E", "F"):
            for x, y in ((i, j), (j, i)):
                kind_name = "commute" if cd.a[x][y] == 0 else "serre"
                rules.append(_orient(serre_element(cd, x, y, kind), zero_k, kind_name))
    else:
        lo, hi = min(i, j), max(i, j)
        completed = _completed_positive((cd.a[lo][hi], cd.a[hi][lo]), (cd.d[lo], cd.d[hi]), complete_to)
        for lead, rhs in completed:
            lead = _relabel(lead, lo, hi)
            kind_name = "commute" if cd.a[i][j] == 0 else "serre"
            terms = tuple((_relabel(w, lo, hi), zero_k, c) for w, c in rhs)
            rules.append(Rule(kind_name, lead, terms))
            rules.append(Rule(kind_name, _mirror(lead), tuple((_mirror(w), k, c) for w, k, c in terms)))
    seen, unique = set(), []
    for rule in rules:
        if rule.lhs not in seen:
            seen.add(rule.lhs)
            unique.append(rule)
    return RewriteSystem(cd, i, j, unique, completed_to=complete_to, step_bound=step_bound)


def normal_form(p: NCPoly, rs: RewriteSystem) -> NCPoly:
    return rs.normal_form(p)


def relations(rs: RewriteSystem, alg: FreeAlgebra) -> List[NCPoly]:
    """Defining relation elements of the pair: e-f relations and Serre relations"""
    cd = rs.cd
    i, j = rs.pair
    out = []
    for rule in ef_rules(cd, i, j):
        rel = alg.term(rule.lhs)
        for w, k, c in rule.rhs:
            rel = rel - alg.term(w, k, c)
        out.append(rel)
    for kind in ("E", "F"):
        for x, y in ((i, j), (j, i)):
            rel = alg.zero()
            for w, c in serre_element(cd, x, y, kind):
                rel = rel + alg.term(w, None, c)
            out.append(rel)
    return out


def _branch(rs: RewriteSystem, terms: List[RhsTerm]) -> Dict[Monomial, FracElement]:
    out: Dict[Monomial, FracElement] = {}
    for w, k, c in terms:
        for m, v in rs.nf_word(w).items():
            key = Monomial(m.word, tuple(x + y for x, y in zip(m.kexp, k)))
            value = out.get(key, t_field().zero) + c * v
            if value:
                out[key] = value
            else:
                out.pop(key, None)
    return out


def overlap_check(rs: RewriteSystem, maxdeg: int) -> OverlapReport:
    """Reduce both branches of every critical overlap up to length maxdeg"""
    report = OverlapReport(maxdeg)
    rules = rs.rules
    for r1 in rules:
        for r2 in rules:
            l1, l2 = r1.lhs, r2.lhs
            candidates = []
            for k in range(1, min(len(l1), len(l2))):
                if l1[-k:] == l2[:k] and len(l1) + len(l2) - k <= maxdeg:
                    candidates.append((l1 + l2[k:], len(l1) - k))
            if r1 is not r2 and len(l2) < len(l1):
                for p in range(len(l1) - len(l2) + 1):
                    if l1[p:p + len(l2)] == l2:
                        candidates.append((l1, p))
            for word, pos in candidates:
                report.checked += 1
                left = _branch(rs, rs.apply(word, 0, r1))
                right = _branch(rs, rs.apply(word, pos, r2))
                diff = dict(left)
                for m, v in right.items():
                    value = diff.get(m, t_field().zero) - v
                    if value:
                        diff[m] = value
                    else:
                        diff.pop(m, None)
                if diff:
                    report.discrepancies.append(render_monomial(Monomial(word, rs.zero_k)))
    logger.debug(f"overlap check on {rs.pair} to degree {maxdeg}: "
                 f"{report.checked} overlaps, {len(report.discrepancies)} discrepancies")
    return report


def _random_factor(rng: random.Random, alg: FreeAlgebra, letters: List[Letter], length: int,
                   nodes: Sequence[int]) -> NCPoly:
    word = tuple(rng.choice(letters) for _ in range(length))
    kexp = [0] * alg.cd.size
    for node in nodes:
        kexp[node] = rng.choice((-1, 0, 0, 1))
    return alg.term(word, kexp)


def ideal_stress(rs: RewriteSystem, alg: FreeAlgebra, samples: int, seed: int,
                 max_len: int = 2) -> StressReport:
    """x*r*y must reduce to zero for defining relations r and random words x, y.

    ``samples`` instances are drawn per relation, with |x|, |y| <= max_len.
    """
    rng = random.Random(seed)
    i, j = rs.pair
    letters = sorted(rs.alphabet)
    report = StressReport()
    for rel in relations(rs, alg):
        for _ in range(samples):
            lx = rng.randint(0, max_len)
            ly = rng.randint(0, max_len)
            x = _random_factor(rng, alg, letters, lx, (i, j))
            y = _random_factor(rng, alg, letters, ly, (i, j))
            report.instances += 1
            residual = rs.normal_form(multiply(multiply(x, rel), y))
            if residual:
                report.failures.append(
                    f"{render_monomial(next(iter(x.terms)))} * r * {render_monomial(next(iter(y.terms)))}")
    return report


def gate_report(rs: RewriteSystem, alg: FreeAlgebra) -> Dict[str, Any]:
    """Evidence for trusting nonzero residuals of the pair.

    Overlaps are checked up to the longest stress instance, and the corpus
    must have at least Config.STRESS_MIN_INSTANCES instances with no failure.
    """
    degree = gate_degree(rs.cd, *rs.pair)
    overlaps = overlap_check(rs, degree)
    corpus = ideal_stress(rs, alg, Config.STRESS_SAMPLES, Config.GATE_SEED, max_len=Config.STRESS_MAX_LEN)
    enough = corpus.instances >= Config.STRESS_MIN_INSTANCES
    if not corpus.passed:
        logger.warning(f"ideal stress on {rs.pair}: {len(corpus.failures)} of {corpus.instances} failed, "
                       f"first {corpus.failures[0]}")
    return {
        "passed": overlaps.joinable and corpus.passed and enough,
        "degree": degree,
        "idealCorpus": corpus.to_dict(),
        "overlaps": overlaps.to_dict(),
    }
