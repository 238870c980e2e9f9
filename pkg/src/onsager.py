"""
Generalized q-Onsager relations as noncommutative polynomials in A-letters.

For a pair (x, y) with a = a_xy:

    sum_r (-1)^r [1-a; r]_{q_x} A_x^(1-a-r) A_y A_x^r
        = sum_k rho^k_xy sum_l (-1)^l gamma^kl_xy A_x^(-2k-a-1-l) A_y A_x^l

with k in 0..ceil(-a/2)-1 (ceil(1/2) = 1) and l in 0..-a-1-2k.  The rho^k_xy
are registered parameter symbols; the gamma table is fixed data.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Tuple

from sympy.polys.fields import FracElement

from src.cartan import CartanData, check_pair
from src.coeff import CoefficientField, is_bar_invariant, qbinom, qnum, qpow, t_field
from src.exceptions import RelationError
from src.freealg import A, FreeAlgebra, NCPoly

logger = logging.getLogger("onsager")

ROLES = ("ij", "ji")


def k_range(a: int) -> range:
    """k in 0..ceil(-a/2)-1; empty for a = 0"""
    return range((-a + 1) // 2)


def l_range(a: int, k: int) -> range:
    return range(-a - 2 * k)


def _q(power: int, d: int) -> FracElement:
    return qpow(power, d)


def _triple_gamma01(d: int) -> FracElement:
    num = (_q(1, d) + _q(-1, d)) * (_q(2, d) + _q(-2, d)) * (_q(2, d) + 3 + _q(-2, d))
    den = _q(4, d) + 2 * _q(2, d) + 4 + 2 * _q(-2, d) + _q(-4, d)
    return num / den


def _quadruple_gamma0(d: int) -> FracElement:
    return qnum(3, d) * qnum(5, d) / (_q(4, d) + _q(-4, d) + 3)


# (a_ij, a_ji, role) -> {(k, l): builder(d)}; i is the node with a_ij = -1
_ONE = lambda d: t_field().one
_TABLE = {
    (-1, -1, "ij"): {(0, 0): _ONE},
    (-1, -1, "ji"): {(0, 0): _ONE},
    (-1, -2, "ij"): {(0, 0): _ONE},
    (-1, -2, "ji"): {(0, 0): _ONE, (0, 1): _ONE},
    (-1, -3, "ij"): {(0, 0): _ONE},
    (-1, -3, "ji"): {(0, 0): _ONE, (0, 1): _triple_gamma01, (0, 2): _ONE, (1, 0): _ONE},
    (-1, -4, "ij"): {(0, 0): _ONE},
    (-1, -4, "ji"): {(0, 0): _ONE, (0, 1): _quadruple_gamma0, (0, 2): _quadruple_gamma0,
                     (0, 3): _ONE, (1, 0): _ONE, (1, 1): _ONE},
    (-2, -2, "ij"): {(0, 0): _ONE, (0, 1): _ONE},
    (-2, -2, "ji"): {(0, 0): _ONE, (0, 1): _ONE},
}

# written without an explicit l in the quadruple-link table; the range comes from the index law
_RANGE_INFERRED = {(-1, -4, "ji", 1, 0), (-1, -4, "ji", 1, 1)}


def _side(a_ij: int, a_ji: int, role: str) -> int:
    return a_ij if role == "ij" else a_ji


def is_range_inferred(a_ij: int, a_ji: int, role: str, k: int, l: int) -> bool:
    return (a_ij, a_ji, role, k, l) in _RANGE_INFERRED


@lru_cache(maxsize=None)
def gamma(a_ij: int, a_ji: int, role: str, k: int, l: int, d: int = 1) -> FracElement:
    """gamma^{kl} of the (a_ij, a_ji) link on the given side, with q read as q^d"""
    if role not in ROLES:
        raise RelationError(f"role must be 'ij' or 'ji', got {role!r}")
    key = (a_ij, a_ji, role)
    if key not in _TABLE:
        raise RelationError(f"no structure constants for the link ({a_ij},{a_ji})")
    a = _side(a_ij, a_ji, role)
    if k not in k_range(a) or l not in l_range(a, k):
        raise RelationError(f"gamma^{k}{l}_{role} outside the index range of a = {a}")
    return _TABLE[key][(k, l)](d)


@lru_cache(maxsize=None)
def validate_gamma_table() -> int:
    """Every entry covers its index range exactly and is bar-invariant"""
    count = 0
    for (a_ij, a_ji, role), entries in _TABLE.items():
        a = _side(a_ij, a_ji, role)
        expected = {(k, l) for k in k_range(a) for l in l_range(a, k)}
        if set(entries) != expected:
            raise RelationError(f"gamma table for ({a_ij},{a_ji},{role}) does not match its index range")
        for (k, l), builder in entries.items():
            for d in (1, 2, 3, 4):
                if not is_bar_invariant(builder(d)):
                    raise RelationError(f"gamma^{k}{l}_{role} of ({a_ij},{a_ji}) is not bar-invariant")
            count += 1
    logger.debug(f"gamma table validated ({count} entries)")
    return count


def link_gamma(cd: CartanData, x: int, y: int, k: int, l: int) -> Tuple[FracElement, bool]:
    """gamma^{kl}_{xy} for the pair as it sits in the diagram, plus the range-inferred flag"""
    validate_gamma_table()
    a_xy, a_yx = cd.a[x][y], cd.a[y][x]
    if a_xy == -1 or (a_xy, a_yx) == (-2, -2):
        args = (a_xy, a_yx, "ij")
    else:
        args = (a_yx, a_xy, "ji")
    return gamma(*args, k, l, cd.d[x]), is_range_inferred(*args, k, l)


def rho_symbol(x: int, y: int, k: int) -> str:
    return f"rho{k}_{x}{y}"


def rho_symbols(cd: CartanData, x: int, y: int) -> List[str]:
    return [rho_symbol(x, y, k) for k in k_range(cd.a[x][y])]


@dataclass
class OnsagerRelation:
    pair: Tuple[int, int]
    lhs: NCPoly
    rhs: NCPoly
    rho: List[str]
    range_inferred: List[Tuple[int, int]]

    @property
    def element(self) -> NCPoly:
        """lhs - rhs"""
        return self.lhs - self.rhs

    def render(self) -> str:
        return f"{self.lhs.render()} = {self.rhs.render()}"


def _power(x: int, n: int):
    return (A(x),) * n


def build_relation(cd: CartanData, x: int, y: int, alg: FreeAlgebra) -> OnsagerRelation:
    """The (x, y) relation with rho^k_xy as symbols of the algebra's session"""
    check_pair(cd, x, y)
    a = cd.a[x][y]
    m = 1 - a
    lhs = alg.zero()
    for r in range(m + 1):
        coeff = qbinom_signed(m, r, cd.d[x])
        lhs = lhs + alg.term(_power(x, m - r) + (A(y),) + _power(x, r), None, coeff)
    rhs = alg.zero()
    inferred = []
    names = rho_symbols(cd, x, y)
    for k, name in zip(k_range(a), names):
        rho = alg.cf.gen(name)
        for l in l_range(a, k):
            value, flagged = link_gamma(cd, x, y, k, l)
            if flagged:
                inferred.append((k, l))
            if l % 2:
                value = -value
            word = _power(x, -2 * k - a - 1 - l) + (A(y),) + _power(x, l)
            rhs = rhs + alg.term(word, None, rho.mul_ground(value))
    return OnsagerRelation((x, y), lhs, rhs, names, inferred)


def qbinom_signed(m: int, r: int, d: int) -> FracElement:
    value = qbinom(m, r, d)
    return -value if r % 2 else value


def specialize_q1(rel: OnsagerRelation) -> OnsagerRelation:
    """t = 1 in every coefficient"""
    cf: CoefficientField = rel.lhs.alg.cf
    return OnsagerRelation(rel.pair, rel.lhs.map_coeffs(cf.at_t1), rel.rhs.map_coeffs(cf.at_t1),
                           list(rel.rho), list(rel.range_inferred))


def vanish_rho(rel: OnsagerRelation) -> NCPoly:
    """The relation element with every rho set to zero"""
    cf: CoefficientField = rel.lhs.alg.cf
    zero = cf.ring.zero
    return rel.element.map_coeffs(lambda c: cf.substitute(c, {name: zero for name in rel.rho}))


def paper_rho(cd: CartanData, x: int, y: int, cf: CoefficientField) -> Dict[str, FracElement]:
    """Tabulated rho^k_xy in Q(t, c_x, cb_x), with q read as q_x"""
    d = cd.d[x]
    a = cd.a[x][y]
    c, cb = cf.fgen(f"c{x}"), cf.fgen(f"cb{x}")
    t = cf.fgen("t")

    def q(n: int) -> FracElement:
        return t ** (2 * d * n) if n >= 0 else cf.field.one / t ** (-2 * d * n)

    names = rho_symbols(cd, x, y)
    if a == 0:
        return {}
    if a == -1:
        values = [c * cb]
    elif a == -2:
        values = [c * cb * (q(1) + q(-1)) ** 2]
    elif a == -3:
        values = [c * cb * (q(4) + 2 * q(2) + 4 + 2 * q(-2) + q(-4)),
                  -(c ** 2) * cb ** 2 * (q(4) + 1 + q(-4)) ** 2]
    elif a == -4:
        values = [c * cb * (q(1) + q(-1)) ** 2 * (q(4) + 3 + q(-4)),
                  -(c ** 2) * cb ** 2 * (q(1) + q(-1)) ** 4 * (q(2) + q(-2)) ** 4]
    else:
        raise RelationError(f"no tabulated structure constants for a = {a}")
    return dict(zip(names, values))
