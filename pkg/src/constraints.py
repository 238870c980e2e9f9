"""
Boundary-parameter constraints as products of atomic factors.

Atoms on a node k (kappa_k = c_k cb_k / (q_k + q_k^-1 - 2)):

    W   w_k
    K1  w_k^2 + kappa_k
    K2  w_k^2 + kappa_k (q_k + q_k^-1 - 1)^2

A constraint is the product of its atoms (a multiset); it is satisfied when
one of its atoms vanishes.
"""
from collections import Counter
from typing import Any, Dict, Iterable, List, NamedTuple, Sequence, Tuple

from sympy.polys.fields import FracElement

from src.cartan import CartanData, LinkClass, LinkKind
from src.coeff import CoefficientField, kappa, qpow

ATOM_KINDS = ("W", "K1", "K2")

# node tags of a solution branch
ZERO, ROOT, ROOT2, FREE = "ZERO", "ROOT", "ROOT2", "FREE"
TAG_ORDER = {ROOT: 0, ROOT2: 1, ZERO: 2, FREE: 3}
KILLS = {"W": ZERO, "K1": ROOT, "K2": ROOT2}


class Atom(NamedTuple):
    kind: str
    node: int

    def render(self) -> str:
        k = self.node
        if self.kind == "W":
            return f"w{k}"
        if self.kind == "K1":
            return f"(w{k}^2 + kappa{k})"
        return f"(w{k}^2 + kappa{k}*(q{k} + q{k}^-1 - 1)^2)"


class Constraint(NamedTuple):
    atoms: Tuple[Atom, ...]
    generic: Tuple[str, ...] = ()

    @classmethod
    def of(cls, *atoms: Atom, generic: Iterable[str] = ()) -> "Constraint":
        return cls(tuple(sorted(atoms)), tuple(sorted(generic)))

    def render(self) -> str:
        parts = [atom.render() for atom in self.atoms] + [f"({g})" for g in self.generic]
        return "*".join(parts) if parts else "1"

    def divides(self, other: "Constraint") -> bool:
        """Multiset inclusion of factors"""
        mine = Counter(self.atoms) + Counter(self.generic)
        theirs = Counter(other.atoms) + Counter(other.generic)
        return all(theirs[f] >= n for f, n in mine.items())

    def nodes(self) -> List[int]:
        return sorted({atom.node for atom in self.atoms})

    def to_dict(self) -> Dict[str, Any]:
        return {"factored": self.render(), "atoms": [[a.kind, a.node] for a in self.atoms],
                "generic": list(self.generic)}


def W(k: int) -> Atom:
    return Atom("W", k)


def K1(k: int) -> Atom:
    return Atom("K1", k)


def K2(k: int) -> Atom:
    return Atom("K2", k)


def template_for_link(link: LinkClass) -> List[Constraint]:
    """Constraint displays per link type; i long for the multiple links"""
    kind = link.kind
    if kind == LinkKind.SIMPLE:
        i, j = link.i, link.j
        return sorted([Constraint.of(W(i), K1(j)), Constraint.of(W(j), K1(i))])
    if kind in (LinkKind.DOUBLE, LinkKind.QUADRUPLE):
        long = link.long_index
        short = link.j if long == link.i else link.i
        return [Constraint.of(W(short), K1(long))]
    if kind == LinkKind.TRIPLE:
        long = link.long_index
        short = link.j if long == link.i else link.i
        return sorted([Constraint.of(W(short), K1(long)), Constraint.of(W(long), K1(short), K2(short))])
    return []


def minimal(constraints: Iterable[Constraint]) -> List[Constraint]:
    """Drop duplicates and multiples of other constraints"""
    unique = sorted(set(constraints))
    return [c for c in unique if not any(o != c and o.divides(c) for o in unique)]


def implies(given: Sequence[Constraint], target: Sequence[Constraint]) -> bool:
    """Every target constraint is a multiple of some given constraint"""
    return all(any(g.divides(t) for g in given) for t in target)


def atom_value(cf: CoefficientField, cd: CartanData, atom: Atom) -> FracElement:
    """The atom as an element of the session field"""
    k = atom.node
    w = cf.fgen(f"w{k}")
    if atom.kind == "W":
        return w
    scale = cf.fgen(f"c{k}") * cf.fgen(f"cb{k}") * kappa(cd.d[k]).set_field(cf.field)
    if atom.kind == "K1":
        return w ** 2 + scale
    shift = (qpow(1, cd.d[k]) + qpow(-1, cd.d[k]) - 1).set_field(cf.field)
    return w ** 2 + scale * shift ** 2


def satisfied(constraint: Constraint, tags: Dict[int, str]) -> bool:
    """Tag convention: ZERO kills W, ROOT kills K1, ROOT2 kills K2"""
    return any(tags.get(atom.node) == KILLS[atom.kind] for atom in constraint.atoms)


def allowed_tags(constraints: Sequence[Constraint], node: int) -> Tuple[str, ...]:
    """ROOT2 only where a constraint carries the second quadratic factor of the node"""
    if any(atom == K2(node) for c in constraints for atom in c.atoms):
        return (ROOT, ROOT2, ZERO, FREE)
    return (ROOT, ZERO, FREE)


def relaxes(smaller: Dict[int, str], larger: Dict[int, str]) -> bool:
    """larger agrees with smaller except on nodes it leaves FREE"""
    return all(larger[n] == tag or larger[n] == FREE for n, tag in smaller.items())


def maximal_assignments(assignments: Iterable[Dict[int, str]]) -> List[Dict[int, str]]:
    pool = list(assignments)
    out = [a for a in pool if not any(b != a and relaxes(a, b) for b in pool)]
    return sorted(out, key=lambda a: tuple(TAG_ORDER[a[n]] for n in sorted(a)))
