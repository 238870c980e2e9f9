"""
Affine Cartan data: extended Cartan matrices, symmetrizers, Kac labels and
link classification for every affine Dynkin diagram.

Node numbering follows the standard affine pictures (e_6^(1) uses the labels
1..5, 6, 0).  Each diagram is described by its links; the matrix is filled
from them and then checked against the affine invariants.
"""
import logging
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache, reduce
from math import gcd
from typing import Any, Dict, List, NamedTuple, Optional, Tuple

from sympy import Matrix

from src.exceptions import AlgebraIdSyntaxError, CartanError, InadmissibleAlgebraError

logger = logging.getLogger("cartan")

_ID_PATTERN = re.compile(r"^([a-g])(\d+)\^(\d+)$")


class AlgebraId(NamedTuple):
    series: str
    rank: int
    twist: int

    def __str__(self) -> str:
        return render_algebra_id(self)


class LinkKind(str, Enum):
    UNLINKED = "Unlinked"
    SIMPLE = "Simple"
    DOUBLE = "Double"
    TRIPLE = "Triple"
    QUADRUPLE = "Quadruple"
    DOUBLE_BOTH = "DoubleBoth"


_KIND_BY_PATTERN = {
    (0, 0): LinkKind.UNLINKED,
    (-1, -1): LinkKind.SIMPLE,
    (-1, -2): LinkKind.DOUBLE,
    (-1, -3): LinkKind.TRIPLE,
    (-1, -4): LinkKind.QUADRUPLE,
    (-2, -2): LinkKind.DOUBLE_BOTH,
}


class LinkClass(NamedTuple):
    i: int
    j: int
    kind: LinkKind
    long_index: Optional[int] = None

    @property
    def pair(self) -> Tuple[int, int]:
        return (self.i, self.j)

    def to_dict(self) -> Dict[str, Any]:
        return {"pair": [self.i, self.j], "kind": self.kind.value, "long": self.long_index}


@dataclass(frozen=True)
class CartanData:
    algebra: AlgebraId
    a: Tuple[Tuple[int, ...], ...]
    d: Tuple[int, ...]
    marks: Tuple[int, ...]

    @property
    def nodes(self) -> range:
        return range(len(self.d))

    @property
    def size(self) -> int:
        return len(self.d)

    def b(self, i: int, j: int) -> int:
        """Symmetrized entry d_i a_ij; K_i E_j = t^b(i,j) E_j K_i"""
        return self.d[i] * self.a[i][j]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "algebra": render_algebra_id(self.algebra),
            "nodes": list(self.nodes),
            "a": [list(row) for row in self.a],
            "d": list(self.d),
            "marks": list(self.marks),
            "links": [link.to_dict() for link in links(self)],
        }


# (minimum rank, twist) per admissible series
_MIN_RANK = {
    ("a", 1): 1, ("b", 1): 3, ("c", 1): 2, ("d", 1): 4,
    ("a", 2): 2, ("d", 2): 3, ("e", 2): 6, ("d", 3): 4,
}
_EXCEPTIONAL = {("e", 1): (6, 7, 8), ("f", 1): (4,), ("g", 1): (2,), ("e", 2): (6,), ("d", 3): (4,)}


def render_algebra_id(aid: AlgebraId) -> str:
    return f"{aid.series}{aid.rank}^{aid.twist}"


def latex_algebra_id(aid: AlgebraId) -> str:
    return f"{aid.series}_{{{aid.rank}}}^{{({aid.twist})}}"


def parse_algebra_id(s: str) -> AlgebraId:
    """Parse '<series><rank>^<twist>', e.g. 'g2^1', 'a4^2', 'd4^3'"""
    text = s.strip()
    match = _ID_PATTERN.match(text)
    if not match:
        raise AlgebraIdSyntaxError(
            f"'{s}' is not an algebra id; expected <series><rank>^<twist> such as g2^1")
    series, rank, twist = match.group(1), int(match.group(2)), int(match.group(3))
    aid = AlgebraId(series, rank, twist)
    _check_admissible(aid)
    return aid


def _check_admissible(aid: AlgebraId) -> None:
    series, rank, twist = aid
    key = (series, twist)
    if twist not in (1, 2, 3):
        raise InadmissibleAlgebraError(f"twist must be 1, 2 or 3, got {twist}")
    if key in _EXCEPTIONAL:
        allowed = _EXCEPTIONAL[key]
        if rank not in allowed:
            names = ", ".join(f"{series}{r}^{twist}" for r in allowed)
            raise InadmissibleAlgebraError(f"{render_algebra_id(aid)} is not affine; only {names}")
        return
    if key not in _MIN_RANK:
        raise InadmissibleAlgebraError(f"no affine algebra of series '{series}' with twist {twist}")
    minimum = _MIN_RANK[key]
    if rank < minimum:
        raise InadmissibleAlgebraError(
            f"{render_algebra_id(aid)}: rank below minimum {minimum} for {series}^{twist}")
    if key == ("a", 2) and rank in (1, 3):
        raise InadmissibleAlgebraError(
            f"{render_algebra_id(aid)}: a^2 needs rank 2 or rank >= 4 (minimum rank 2)")


# Link helpers: (i, j, a_ij, a_ji)
def _simple(i: int, j: int) -> Tuple[int, int, int, int]:
    return (i, j, -1, -1)


def _multi(long: int, short: int, m: int) -> Tuple[int, int, int, int]:
    """Link of multiplicity m with `long` carrying the -1 toward `short`"""
    return (long, short, -1, -m)


def _chain(start: int, stop: int) -> List[Tuple[int, int, int, int]]:
    return [_simple(k, k + 1) for k in range(start, stop)]


def _diagram(aid: AlgebraId) -> Tuple[List[Tuple[int, int, int, int]], List[int], List[int], int]:
    series, r, twist = aid
    if twist == 1:
        if series == "a":
            if r == 1:
                return [(0, 1, -2, -2)], [1, 1], [1, 1], 2
            return _chain(0, r) + [_simple(r, 0)], [1] * (r + 1), [1] * (r + 1), r + 1
        if series == "b":
            edges = [_simple(0, 2), _simple(1, 2)] + _chain(2, r - 1) + [_multi(r - 1, r, 2)]
            return edges, [2] * r + [1], [1, 1] + [2] * (r - 1), r + 1
        if series == "c":
            edges = [_multi(0, 1, 2)] + _chain(1, r - 1) + [_multi(r, r - 1, 2)]
            return edges, [2] + [1] * (r - 1) + [2], [1] + [2] * (r - 1) + [1], r + 1
        if series == "d":
            edges = ([_simple(0, 2), _simple(1, 2)] + _chain(2, r - 2)
                     + [_simple(r - 2, r - 1), _simple(r - 2, r)])
            return edges, [1] * (r + 1), [1, 1] + [2] * (r - 3) + [1, 1], r + 1
        if series == "e" and r == 6:
            edges = [_simple(1, 2), _simple(2, 3), _simple(3, 4), _simple(4, 5),
                     _simple(3, 6), _simple(6, 0)]
            return edges, [1] * 7, [1, 1, 2, 3, 2, 1, 2], 7
        if series == "e" and r == 7:
            return _chain(0, 6) + [_simple(3, 7)], [1] * 8, [1, 2, 3, 4, 3, 2, 1, 2], 8
        if series == "e" and r == 8:
            edges = _chain(1, 7) + [_simple(7, 0), _simple(3, 8)]
            return edges, [1] * 9, [1, 2, 4, 6, 5, 4, 3, 2, 3], 9
        if series == "f":
            edges = [_simple(0, 1), _simple(1, 2), _multi(2, 3, 2), _simple(3, 4)]
            return edges, [2, 2, 2, 1, 1], [1, 2, 3, 4, 2], 5
        if series == "g":
            return [_simple(0, 1), _multi(1, 2, 3)], [3, 3, 1], [1, 2, 3], 3
    if twist == 2:
        if series == "a" and r == 2:
            return [_multi(0, 1, 4)], [4, 1], [1, 2], 2
        if series == "a" and r % 2 == 0:
            n = r // 2
            edges = [_multi(1, 0, 2)] + _chain(1, n - 1) + [_multi(n, n - 1, 2)]
            return edges, [1] + [2] * (n - 1) + [4], [2] * n + [1], n + 1
        if series == "a":
            n = (r + 1) // 2
            edges = [_simple(0, 2), _simple(1, 2)] + _chain(2, n - 1) + [_multi(n, n - 1, 2)]
            return edges, [1] * n + [2], [1, 1] + [2] * (n - 2) + [1], n + 1
        if series == "d":
            n = r - 1
            edges = [_multi(1, 0, 2)] + _chain(1, n - 1) + [_multi(n - 1, n, 2)]
            return edges, [1] + [2] * (n - 1) + [1], [1] * (n + 1), n + 1
        if series == "e":
            edges = [_simple(0, 1), _simple(1, 2), _multi(3, 2, 2), _simple(3, 4)]
            return edges, [1, 1, 1, 2, 2], [1, 2, 3, 2, 1], 5
    if twist == 3 and series == "d":
        return [_simple(0, 1), _multi(2, 1, 3)], [1, 1, 3], [1, 2, 1], 3
    raise InadmissibleAlgebraError(f"no diagram for {render_algebra_id(aid)}")


@lru_cache(maxsize=None)
def build(aid: AlgebraId) -> CartanData:
    """Extended Cartan matrix, symmetrizers and Kac labels for an affine type"""
    if not isinstance(aid, AlgebraId):
        aid = AlgebraId(*aid)
    _check_admissible(aid)
    edges, d, marks, size = _diagram(aid)
    a = [[2 if i == j else 0 for j in range(size)] for i in range(size)]
    for i, j, aij, aji in edges:
        if a[i][j] or a[j][i]:
            raise CartanError(f"{render_algebra_id(aid)}: link ({i},{j}) declared twice")
        a[i][j], a[j][i] = aij, aji
    cd = CartanData(aid, tuple(tuple(row) for row in a), tuple(d), tuple(marks))
    _validate(cd)
    logger.debug(f"built {render_algebra_id(aid)} with {size} nodes")
    return cd


def _validate(cd: CartanData) -> None:
    name = render_algebra_id(cd.algebra)
    n = cd.size
    for i in range(n):
        if cd.a[i][i] != 2:
            raise CartanError(f"{name}: a[{i}][{i}] != 2")
        if sum(cd.a[i][j] * cd.marks[j] for j in range(n)) != 0:
            raise CartanError(f"{name}: marks are not a null vector (row {i})")
        for j in range(n):
            if cd.b(i, j) != cd.b(j, i):
                raise CartanError(f"{name}: d_i a_ij not symmetric at ({i},{j})")
            if i != j and (min(cd.a[i][j], cd.a[j][i]), max(cd.a[i][j], cd.a[j][i])) not in {
                    tuple(sorted(p)) for p in _KIND_BY_PATTERN}:
                raise CartanError(f"{name}: unexpected link pattern at ({i},{j})")
    if reduce(gcd, cd.d) != 1:
        raise CartanError(f"{name}: symmetrizers are not coprime")


def null_vector_ok(cd: CartanData) -> bool:
    """det(a) = 0 and the marks span the kernel"""
    m = Matrix(cd.a)
    kernel = m.nullspace()
    if m.det() != 0 or len(kernel) != 1:
        return False
    return m * Matrix(cd.marks) == Matrix.zeros(cd.size, 1)


def classify_link(cd: CartanData, i: int, j: int) -> LinkClass:
    aij, aji = cd.a[i][j], cd.a[j][i]
    kind = _KIND_BY_PATTERN.get((aij, aji)) or _KIND_BY_PATTERN.get((aji, aij))
    if kind is None:
        raise CartanError(f"unknown link pattern ({aij},{aji}) at ({i},{j})")
    long_index = None
    if kind in (LinkKind.DOUBLE, LinkKind.TRIPLE, LinkKind.QUADRUPLE):
        long_index = i if aij == -1 else j
    return LinkClass(i, j, kind, long_index)


def links(cd: CartanData) -> List[LinkClass]:
    """One LinkClass per linked unordered pair, in (i, j) order"""
    return [
        classify_link(cd, i, j)
        for i in cd.nodes for j in cd.nodes
        if i < j and cd.a[i][j] != 0
    ]


def check_pair(cd: CartanData, i: int, j: int) -> None:
    if i == j or not (0 <= i < cd.size and 0 <= j < cd.size):
        raise InadmissibleAlgebraError(
            f"pair ({i},{j}) is not a pair of distinct nodes of {render_algebra_id(cd.algebra)}")
