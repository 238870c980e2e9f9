"""
Noncommutative polynomials in E_i, F_i (with the Cartan part carried as a
K-exponent vector on the right of each monomial) and in the abstract
generators A_i, plus the tensor product used by the coaction check.

Coefficients are elements of the engine ring of a CoefficientField session.
"""
import logging
from itertools import product
from typing import Callable, Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from sympy.polys.fields import FracElement
from sympy.polys.rings import PolyElement

from src.cartan import CartanData
from src.coeff import CoefficientField, tpow
from src.exceptions import FreeAlgebraError

logger = logging.getLogger("freealg")

KINDS = ("E", "F", "A")


class Letter(NamedTuple):
    kind: str
    node: int

    def __str__(self) -> str:
        return f"{self.kind}{self.node}"


Word = Tuple[Letter, ...]


class Monomial(NamedTuple):
    word: Word
    kexp: Tuple[int, ...]


def E(i: int) -> Letter:
    return Letter("E", i)


def F(i: int) -> Letter:
    return Letter("F", i)


def A(i: int) -> Letter:
    return Letter("A", i)


def render_monomial(m: Monomial) -> str:
    """'F1 E0 K0^2 K1^-1'; the empty monomial renders as '1'"""
    parts = [str(letter) for letter in m.word]
    for node, e in enumerate(m.kexp):
        if e == 1:
            parts.append(f"K{node}")
        elif e:
            parts.append(f"K{node}^{e}")
    return " ".join(parts) if parts else "1"


def monomial_key(m: Monomial):
    """Canonical order: length, then letters, then K-exponents"""
    return (len(m.word), tuple((l.kind, l.node) for l in m.word), m.kexp)


def word_kinds(word: Word) -> set:
    return {letter.kind for letter in word}


class FreeAlgebra:
    """Multiplication context: Cartan data (for K-commutation) and a coefficient session"""

    def __init__(self, cd: CartanData, cf: CoefficientField):
        self.cd = cd
        self.cf = cf
        self.ring = cf.ring
        self.zero_k = (0,) * cd.size

    # construction
    def poly(self, terms: Optional[Dict[Monomial, PolyElement]] = None) -> "NCPoly":
        return NCPoly(self, terms or {})

    def zero(self) -> "NCPoly":
        return NCPoly(self, {})

    def one(self) -> "NCPoly":
        return self.term((), None, self.ring.one)

    def kvec(self, node: int, power: int) -> Tuple[int, ...]:
        k = list(self.zero_k)
        k[node] = power
        return tuple(k)

    def term(self, word: Iterable[Letter], kexp: Optional[Sequence[int]] = None, coeff=None) -> "NCPoly":
        word = tuple(word)
        self.check_word(word)
        kexp = tuple(kexp) if kexp is not None else self.zero_k
        if len(kexp) != self.cd.size:
            raise FreeAlgebraError(f"K-exponent vector has length {len(kexp)}, expected {self.cd.size}")
        if "A" in word_kinds(word) and any(kexp):
            raise FreeAlgebraError("A-words carry no K-exponents")
        coeff = self.ring.one if coeff is None else self.coerce(coeff)
        return NCPoly(self, {Monomial(word, kexp): coeff} if coeff else {})

    def letter(self, letter: Letter) -> "NCPoly":
        return self.term((letter,))

    def k(self, node: int, power: int = 1) -> "NCPoly":
        return self.term((), self.kvec(node, power))

    def coerce(self, c) -> PolyElement:
        if isinstance(c, PolyElement) and c.ring == self.ring:
            return c
        if isinstance(c, FracElement):
            return self.ring.ground_new(c)
        return self.cf.const(c)

    def check_word(self, word: Word) -> None:
        for letter in word:
            if letter.kind not in KINDS:
                raise FreeAlgebraError(f"unknown letter kind '{letter.kind}'")
            if not 0 <= letter.node < self.cd.size:
                raise FreeAlgebraError(f"letter {letter} outside the node range")
        kinds = word_kinds(word)
        if "A" in kinds and len(kinds) > 1:
            raise FreeAlgebraError("A-letters cannot share a monomial with E/F letters")

    # monomial arithmetic
    def shift(self, kexp: Sequence[int], word: Word) -> int:
        """t-exponent picked up by moving K^kexp rightward across word"""
        total = 0
        for letter in word:
            if letter.kind == "A":
                if any(kexp):
                    raise FreeAlgebraError("K cannot cross an A-letter")
                continue
            sign = 1 if letter.kind == "E" else -1
            total += sign * sum(e * self.cd.b(i, letter.node) for i, e in enumerate(kexp) if e)
        return total

    def mono_mul(self, m1: Monomial, m2: Monomial) -> Tuple[Monomial, int]:
        word = m1.word + m2.word
        if m1.word and m2.word and ("A" in word_kinds(m1.word)) != ("A" in word_kinds(m2.word)):
            raise FreeAlgebraError("A-letters cannot share a monomial with E/F letters")
        texp = self.shift(m1.kexp, m2.word)
        kexp = tuple(x + y for x, y in zip(m1.kexp, m2.kexp))
        return Monomial(word, kexp), texp


class NCPoly:
    """Finite sum of monomials with engine-ring coefficients"""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: FreeAlgebra, terms: Dict[Monomial, PolyElement]):
        self.alg = alg
        self.terms = {m: c for m, c in terms.items() if c}

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[Tuple[Monomial, PolyElement]]:
        return iter(self.sorted_terms())

    def sorted_terms(self) -> List[Tuple[Monomial, PolyElement]]:
        return sorted(self.terms.items(), key=lambda item: monomial_key(item[0]))

    def coeff(self, m: Monomial) -> PolyElement:
        return self.terms.get(m, self.alg.ring.zero)

    def _other(self, other) -> "NCPoly":
        if isinstance(other, NCPoly):
            if other.alg.cd != self.alg.cd or other.alg.ring != self.alg.ring:
                raise FreeAlgebraError("operands belong to different algebras")
            return other
        return self.alg.one().scale(self.alg.coerce(other))

    def __add__(self, other) -> "NCPoly":
        other = self._other(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return NCPoly(self.alg, terms)

    __radd__ = __add__

    def __neg__(self) -> "NCPoly":
        return NCPoly(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "NCPoly":
        return self + (-self._other(other))

    def __rsub__(self, other) -> "NCPoly":
        return self._other(other) - self

    def scale(self, c) -> "NCPoly":
        c = self.alg.coerce(c)
        return NCPoly(self.alg, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other) -> "NCPoly":
        if not isinstance(other, NCPoly):
            return self.scale(other)
        return multiply(self, self._other(other))

    def __rmul__(self, other) -> "NCPoly":
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCPoly):
            other = self._other(other)
        return not (self - other)

    def __ne__(self, other) -> bool:
        return not self == other

    __hash__ = None

    def map_coeffs(self, fn: Callable[[PolyElement], PolyElement]) -> "NCPoly":
        return NCPoly(self.alg, {m: fn(c) for m, c in self.terms.items()})

    def degree(self) -> int:
        return max((len(m.word) for m in self.terms), default=0)

    def letters(self) -> set:
        return {letter for m in self.terms for letter in m.word}

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            parts.append(f"({self.alg.cf.render(c)})*{render_monomial(m)}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"NCPoly({self.render()})"


def multiply(x: NCPoly, y: NCPoly, cd: Optional[CartanData] = None) -> NCPoly:
    """Product with all K's moved to the right"""
    alg = x.alg
    if cd is not None and cd != alg.cd:
        raise FreeAlgebraError("operand algebra does not match the Cartan data")
    terms: Dict[Monomial, PolyElement] = {}
    for m1, c1 in x.terms.items():
        for m2, c2 in y.terms.items():
            m, texp = alg.mono_mul(m1, m2)
            c = c1 * c2
            if texp:
                c = c.mul_ground(tpow(texp))
            terms[m] = terms[m] + c if m in terms else c
    return NCPoly(alg, terms)


def counit(p: NCPoly) -> PolyElement:
    """Counit on U_q: E, F -> 0 and K -> 1"""
    total = p.alg.ring.zero
    for m, c in p.terms.items():
        if "A" in word_kinds(m.word):
            raise FreeAlgebraError("the counit is defined on E/F/K monomials only")
        if not m.word:
            total += c
    return total


def substitute(p: NCPoly, images: Dict[int, NCPoly], cd: Optional[CartanData] = None,
               reduce: Optional[Callable[[NCPoly], NCPoly]] = None) -> NCPoly:
    """Algebra map A_i -> images[i].

    Products are built left to right with shared prefixes cached; `reduce`,
    when given, is applied after every multiplication.
    """
    alg: Optional[FreeAlgebra] = None
    for image in images.values():
        alg = image.alg
        break
    if alg is None:
        raise FreeAlgebraError("substitution needs at least one image")
    cache: Dict[Word, NCPoly] = {(): alg.one()}
    total = alg.zero()
    for m, c in p.sorted_terms():
        if any(letter.kind != "A" for letter in m.word):
            raise FreeAlgebraError(f"substitution expects A-words, got {render_monomial(m)}")
        for k in range(1, len(m.word) + 1):
            prefix = m.word[:k]
            if prefix in cache:
                continue
            node = prefix[-1].node
            if node not in images:
                raise FreeAlgebraError(f"no image given for A{node}")
            value = multiply(cache[prefix[:-1]], images[node])
            cache[prefix] = reduce(value) if reduce else value
        total = total + cache[m.word].scale(c)
    return total


def expansion_count(p: NCPoly, images: Dict[int, NCPoly]) -> int:
    """Number of raw products a substitution expands to before collection"""
    count = 0
    for m in p.terms:
        size = 1
        for letter in m.word:
            size *= len(images[letter.node])
        count += size
    return count


class TensorPoly:
    """Sums of u (x) a with u over E/F/K and a an A-word"""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: FreeAlgebra, terms: Dict[Tuple[Monomial, Monomial], PolyElement]):
        self.alg = alg
        self.terms = {key: c for key, c in terms.items() if c}

    @classmethod
    def pure(cls, left: NCPoly, right: NCPoly) -> "TensorPoly":
        """left (x) right"""
        terms: Dict[Tuple[Monomial, Monomial], PolyElement] = {}
        for (u, c1), (a, c2) in product(left.terms.items(), right.terms.items()):
            if "A" in word_kinds(u.word) or (a.word and word_kinds(a.word) != {"A"}) or any(a.kexp):
                raise FreeAlgebraError("tensor factors must be U_q on the left and A-words on the right")
            key = (u, a)
            terms[key] = terms[key] + c1 * c2 if key in terms else c1 * c2
        return cls(left.alg, terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "TensorPoly") -> "TensorPoly":
        terms = dict(self.terms)
        for key, c in other.terms.items():
            terms[key] = terms[key] + c if key in terms else c
        return TensorPoly(self.alg, terms)

    def __neg__(self) -> "TensorPoly":
        return TensorPoly(self.alg, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "TensorPoly") -> "TensorPoly":
        return self + (-other)

    def __mul__(self, other: "TensorPoly") -> "TensorPoly":
        return tensor_multiply(self, other)

    def scale(self, c) -> "TensorPoly":
        c = self.alg.coerce(c)
        return TensorPoly(self.alg, {k: v * c for k, v in self.terms.items()})

    def map_coeffs(self, fn: Callable[[PolyElement], PolyElement]) -> "TensorPoly":
        return TensorPoly(self.alg, {k: fn(c) for k, c in self.terms.items()})

    def by_right(self) -> Dict[Word, NCPoly]:
        """Left factors grouped by right A-word"""
        groups: Dict[Word, Dict[Monomial, PolyElement]] = {}
        for (u, a), c in self.terms.items():
            groups.setdefault(a.word, {})[u] = c
        return {word: NCPoly(self.alg, terms) for word, terms in groups.items()}

    def by_left(self) -> Dict[Monomial, NCPoly]:
        """Right factors grouped by left monomial"""
        groups: Dict[Monomial, Dict[Monomial, PolyElement]] = {}
        for (u, a), c in self.terms.items():
            groups.setdefault(u, {})[a] = c
        return {u: NCPoly(self.alg, terms) for u, terms in groups.items()}

    @classmethod
    def from_groups(cls, alg: FreeAlgebra, groups: Dict[Word, NCPoly]) -> "TensorPoly":
        total = cls(alg, {})
        for word, left in groups.items():
            total = total + cls.pure(left, alg.term(word))
        return total

    def sorted_terms(self):
        return sorted(self.terms.items(),
                      key=lambda item: (monomial_key(item[0][1]), monomial_key(item[0][0])))

    def render(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            f"({self.alg.cf.render(c)})*{render_monomial(u)} (x) {render_monomial(a)}"
            for (u, a), c in self.sorted_terms()
        )


def tensor_multiply(x: TensorPoly, y: TensorPoly, cd: Optional[CartanData] = None) -> TensorPoly:
    """(u (x) a)(v (x) b) = uv (x) ab"""
    alg = x.alg
    if cd is not None and cd != alg.cd:
        raise FreeAlgebraError("operand algebra does not match the Cartan data")
    terms: Dict[Tuple[Monomial, Monomial], PolyElement] = {}
    for (u1, a1), c1 in x.terms.items():
        for (u2, a2), c2 in y.terms.items():
            u, texp = alg.mono_mul(u1, u2)
            a = Monomial(a1.word + a2.word, a1.kexp)
            c = c1 * c2
            if texp:
                c = c.mul_ground(tpow(texp))
            key = (u, a)
            terms[key] = terms[key] + c if key in terms else c
    return TensorPoly(alg, terms)
