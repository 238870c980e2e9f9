"""
Exact coefficient arithmetic in t = q^(1/2) and commuting parameter symbols.

Scalars live in two places:

* ``t_field()`` is Q(t); every structure constant (q-numbers, q-binomials,
  the gamma table, rewrite rule coefficients) is an element of it.
* a ``CoefficientField`` session registers the parameter symbols of one
  computation (c_i, cb_i, w_i, rho unknowns, z).  It exposes the full field
  Q(t, symbols) and the engine ring Q(t)[symbols], in which every coefficient
  of the noncommutative engine is stored.  Conversions between the two are
  exact.
"""
import logging
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.fields import FracElement, FracField
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, PolyRing

from src.exceptions import CoefficientError, EvaluationError

logger = logging.getLogger("coeff")

T_SYMBOL = "t"

Number = Union[int, Fraction, float, complex]


@lru_cache(maxsize=None)
def t_field() -> FracField:
    """The field Q(t)"""
    return FracField((T_SYMBOL,), QQ, lex)


def t_gen() -> FracElement:
    return t_field().gens[0]


def tconst(value: Union[int, Fraction]) -> FracElement:
    """Rational constant of Q(t)"""
    value = Fraction(value)
    return t_field().ground_new(QQ(value.numerator, value.denominator))


def tpow(k: int) -> FracElement:
    """t**k for any integer k, in canonical form"""
    field = t_field()
    if k >= 0:
        return t_gen() ** k
    return field.one / (t_gen() ** (-k))


def qpow(k: int, d: int = 1) -> FracElement:
    """q_d**k with q_d = q**d = t**(2d)"""
    return tpow(2 * d * k)


def qnum(a: int, d: int = 1) -> FracElement:
    """q-number [a]_{q_d} as a symmetric Laurent polynomial in t"""
    if a < 0:
        raise CoefficientError(f"q-number requires a >= 0, got {a}")
    if d < 1:
        raise CoefficientError(f"symmetrizer must be positive, got {d}")
    if a == 0:
        # [0]_q = 1
        return t_field().one
    total = t_field().zero
    for k in range(a):
        total += tpow(2 * d * (a - 1 - 2 * k))
    return total


def qfactorial(a: int, d: int = 1) -> FracElement:
    """[a]_{q_d}! with [0]! = 1"""
    if a < 0:
        raise CoefficientError(f"q-factorial requires a >= 0, got {a}")
    result = t_field().one
    for k in range(1, a + 1):
        result *= qnum(k, d)
    return result


def _check_binom(n: int, k: int, d: int) -> None:
    if n < 0 or k < 0 or k > n:
        raise CoefficientError(f"q-binomial [{n};{k}] out of range")
    if d < 1:
        raise CoefficientError(f"symmetrizer must be positive, got {d}")


@lru_cache(maxsize=None)
def qbinom(n: int, k: int, d: int = 1) -> FracElement:
    """Gaussian binomial [n;k]_{q_d} via the factorial quotient"""
    _check_binom(n, k, d)
    return qfactorial(n, d) / (qfactorial(k, d) * qfactorial(n - k, d))


@lru_cache(maxsize=None)
def qbinom_pascal(n: int, k: int, d: int = 1) -> FracElement:
    """Gaussian binomial from [n;k] = q^k [n-1;k] + q^(k-n) [n-1;k-1]"""
    _check_binom(n, k, d)
    if k == 0 or k == n:
        return t_field().one
    return (qpow(k, d) * qbinom_pascal(n - 1, k, d)
            + qpow(k - n, d) * qbinom_pascal(n - 1, k - 1, d))


def _reverse_t(poly: PolyElement, top: int) -> PolyElement:
    ring = poly.ring
    return ring.from_dict({
        (top - monom[0],) + tuple(monom[1:]): coeff
        for monom, coeff in poly.items()
    })


def bar(x: FracElement) -> FracElement:
    """The involution t -> 1/t fixing every parameter symbol.

    Works for any field whose first generator is t.
    """
    field = x.field
    if str(field.symbols[0]) != T_SYMBOL:
        raise CoefficientError("bar needs t as the first generator")
    if not x:
        return x
    top = max(m[0] for m in list(x.numer.keys()) + list(x.denom.keys()))
    return field.new(_reverse_t(x.numer, top), _reverse_t(x.denom, top))


def is_bar_invariant(x: FracElement) -> bool:
    return not (bar(x) - x)


def kappa(d: int = 1) -> FracElement:
    """kappa for c*cb = 1, i.e. 1/(q_d + q_d^-1 - 2) = t^(2d)/(t^(2d) - 1)^2"""
    return t_field().one / (qpow(1, d) + qpow(-1, d) - 2)


def root_identity(d: int) -> bool:
    """q_d + q_d^-1 - 2 == (q_d^(1/2) - q_d^(-1/2))^2"""
    lhs = qpow(1, d) + qpow(-1, d) - 2
    rhs = (tpow(d) - tpow(-d)) ** 2
    return not (lhs - rhs)


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _eval_poly(poly: PolyElement, names: Sequence[str], assignment: Dict[str, Number]):
    exact = all(isinstance(v, (int, Fraction)) for v in assignment.values())
    total = Fraction(0) if exact else complex(0)
    for monom, coeff in poly.items():
        term = _to_fraction(coeff) if exact else complex(_to_fraction(coeff))
        for name, e in zip(names, monom):
            if not e:
                continue
            if name not in assignment:
                raise EvaluationError(f"no value assigned to symbol '{name}'")
            value = assignment[name]
            term *= (Fraction(value) if exact else complex(value)) ** e
        total += term
    return total


def evaluate(x: FracElement, assignment: Dict[str, Number]) -> Number:
    """Evaluate at a point.

    Exact (Fraction) when every assigned value is rational, complex otherwise.
    Symbols that do not occur in x need no value.
    """
    names = [str(s) for s in x.field.symbols]
    den = _eval_poly(x.denom, names, assignment)
    if den == 0:
        raise EvaluationError("denominator vanishes at the evaluation point")
    return _eval_poly(x.numer, names, assignment) / den


def _format_number(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _format_term(coeff: Fraction, texp: int, pexps: Sequence[int], names: Sequence[str]) -> str:
    factors = []
    if texp == 1:
        factors.append(T_SYMBOL)
    elif texp:
        factors.append(f"{T_SYMBOL}^{texp}")
    for name, e in zip(names, pexps):
        if e == 1:
            factors.append(name)
        elif e:
            factors.append(f"{name}^{e}")
    magnitude = abs(coeff)
    if not factors:
        return _format_number(magnitude)
    if magnitude == 1:
        return "*".join(factors)
    return "*".join([_format_number(magnitude)] + factors)


def _render_terms(terms: List[Tuple[int, Tuple[int, ...], Fraction]], names: Sequence[str]) -> str:
    if not terms:
        return "0"
    terms = sorted(terms, key=lambda term: (term[0], term[1]))
    out = ""
    for texp, pexps, coeff in terms:
        body = _format_term(coeff, texp, pexps, names)
        if not out:
            out = body if coeff > 0 else f"-{body}"
        else:
            out += f" + {body}" if coeff > 0 else f" - {body}"
    return out


def _poly_terms(poly: PolyElement, shift: int = 0, scale: Fraction = Fraction(1)):
    return [(m[0] - shift, tuple(m[1:]), _to_fraction(c) * scale) for m, c in poly.items()]


def render(x: FracElement) -> str:
    """Canonical text form.

    Laurent form when the denominator is a monomial in t, otherwise
    "(numerator)/(denominator)".  Terms are sorted by t-exponent, then by
    parameter exponents.
    """
    names = [str(s) for s in x.field.symbols[1:]]
    den = x.denom
    if len(den) == 1:
        (monom, coeff), = den.items()
        if not any(monom[1:]):
            return _render_terms(_poly_terms(x.numer, monom[0], 1 / _to_fraction(coeff)), names)
    return f"({_render_terms(_poly_terms(x.numer), names)})/({_render_terms(_poly_terms(den), names)})"


class CoefficientField:
    """Parameter session: the field Q(t, symbols) and the engine ring Q(t)[symbols]"""

    def __init__(self, symbols: Sequence[str]):
        symbols = tuple(symbols)
        if not symbols:
            raise CoefficientError("a coefficient session needs at least one symbol")
        if len(set(symbols)) != len(symbols) or T_SYMBOL in symbols:
            raise CoefficientError(f"invalid symbol registration {symbols}")
        self.symbols = symbols
        self.tfield = t_field()
        self.tdomain = self.tfield.to_domain()
        self.field = FracField((T_SYMBOL,) + symbols, QQ, lex)
        self.ring = PolyRing(symbols, self.tdomain, lex)
        self._index = {name: k for k, name in enumerate(symbols)}

    def __repr__(self) -> str:
        return f"CoefficientField({', '.join(self.symbols)})"

    def has(self, name: str) -> bool:
        return name in self._index

    def gen(self, name: str) -> PolyElement:
        """Engine-ring generator for a registered symbol"""
        if name not in self._index:
            raise CoefficientError(f"symbol '{name}' is not registered in {self!r}")
        return self.ring.gens[self._index[name]]

    def fgen(self, name: str) -> FracElement:
        """Field generator for a registered symbol (or t)"""
        if name == T_SYMBOL:
            return self.field.gens[0]
        if name not in self._index:
            raise CoefficientError(f"symbol '{name}' is not registered in {self!r}")
        return self.field.gens[self._index[name] + 1]

    def const(self, value: Union[int, Fraction, FracElement]) -> PolyElement:
        """Engine-ring constant from an integer or an element of Q(t)"""
        if isinstance(value, FracElement):
            return self.ring.ground_new(value)
        return self.ring.ground_new(tconst(value))

    def to_field(self, p: PolyElement) -> FracElement:
        """Engine ring -> Q(t, symbols)"""
        tring = self.tfield.ring
        den = tring.one
        for coeff in p.values():
            den = den.lcm(coeff.denom)
        fring = self.field.ring
        terms = {}
        for monom, coeff in p.items():
            scaled = coeff.numer * den.quo(coeff.denom)
            for tm, c in scaled.items():
                terms[(tm[0],) + tuple(monom)] = c
        num = fring.from_dict(terms)
        return self.field.new(num, den.set_ring(fring))

    def from_field(self, x: FracElement) -> PolyElement:
        """Q(t, symbols) -> engine ring; the denominator must not involve symbols"""
        if x.field != self.field:
            x = x.set_field(self.field)
        den = x.denom
        if any(any(m[1:]) for m in den.keys()):
            raise CoefficientError("denominator involves parameter symbols")
        tring = self.tfield.ring
        tden = tring.from_dict({(m[0],): c for m, c in den.items()})
        groups: Dict[Tuple[int, ...], Dict[Tuple[int], object]] = {}
        for monom, c in x.numer.items():
            groups.setdefault(tuple(monom[1:]), {})[(monom[0],)] = c
        return self.ring.from_dict({
            pm: self.tfield.new(tring.from_dict(tt), tden) for pm, tt in groups.items()
        })

    def bar(self, p: PolyElement) -> PolyElement:
        """t -> 1/t on every coefficient of an engine-ring element"""
        return self.ring.from_dict({m: bar(c) for m, c in p.items()})

    def at_t1(self, p: PolyElement) -> PolyElement:
        """Specialize t = 1 in every coefficient"""
        out = {}
        for m, c in p.items():
            out[m] = tconst(evaluate(c, {T_SYMBOL: 1}))
        return self.ring.from_dict(out)

    def substitute(self, p: PolyElement, values: Dict[str, PolyElement]) -> PolyElement:
        """Replace registered symbols by engine-ring elements"""
        if not values:
            return p
        return p.compose([(self.gen(name), value) for name, value in sorted(values.items())])

    def evaluate(self, p: PolyElement, assignment: Dict[str, Number]) -> Number:
        """Evaluate an engine-ring element at a point (t and symbols)"""
        exact = all(isinstance(v, (int, Fraction)) for v in assignment.values())
        total = Fraction(0) if exact else complex(0)
        for monom, coeff in p.items():
            term = evaluate(coeff, assignment)
            for name, e in zip(self.symbols, monom):
                if not e:
                    continue
                if name not in assignment:
                    raise EvaluationError(f"no value assigned to symbol '{name}'")
                value = assignment[name]
                term *= (Fraction(value) if exact else complex(value)) ** e
            total += term
        return total

    def render(self, p: PolyElement) -> str:
        return render(self.to_field(p))


@lru_cache(maxsize=64)
def coefficient_field(symbols: Tuple[str, ...]) -> CoefficientField:
    """Shared session for a symbol tuple (sessions are immutable)"""
    return CoefficientField(symbols)


def numer_degree_in(x: FracElement, names: Iterable[str]) -> int:
    """Total degree of the numerator in the given symbols"""
    symbols = [str(s) for s in x.field.symbols]
    idx = [symbols.index(n) for n in names if n in symbols]
    if not x:
        return 0
    return max(sum(m[k] for k in idx) for m in x.numer.keys())
