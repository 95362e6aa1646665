"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial is an immutable map from exponent vectors to nonzero
`fractions.Fraction` coefficients, tagged with an ordered variable list.
Everything downstream (Groebner bases, module presentations, differential
expansions) is built on four things provided here:

* exact ring arithmetic in canonical form,
* total monomial orders (lex, degree-reverse-lex, weighted variant),
* iterated partial derivatives and exact Taylor coefficients h^(gamma)/gamma!,
* the truncated shift h |-> h(x+u) - h(x) with all u-degrees > q deleted,
  which is the coordinate form of 1 (x) h - h (x) 1 modulo the (q+1)-st
  power of the diagonal ideal.

The canonical text rendering (descending terms under the active order,
explicit ``*`` and ``^``, e.g. ``-3*x^2*y + 2*y``) is the interchange
format used by the parser, the CLI and the test corpus.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

ExpVec = Tuple[int, ...]

# Exponents are checked, not silently wrapped: anything this large is a bug
# in the caller, never a legitimate desk-scale computation.
EXPONENT_LIMIT = 10 ** 9

_ORDER_KINDS = ("lex", "degrevlex", "weighted")


class ExponentOverflowError(OverflowError):
    """A monomial exponent exceeded EXPONENT_LIMIT."""


def _check_exponents(exps: ExpVec) -> None:
    for e in exps:
        if e < 0:
            raise ValueError("negative exponent %r" % (exps,))
        if e > EXPONENT_LIMIT:
            raise ExponentOverflowError("exponent %d exceeds limit" % e)


class MonomialOrder:
    """A total order on exponent vectors, compatible with multiplication.

    Kinds:

    * ``lex`` -- plain lexicographic, first listed variable most significant.
    * ``degrevlex`` -- total degree first; degree ties broken
      reverse-lexicographically reading exponent differences from the first
      listed variable: among monomials of equal degree, the one with the
      smaller exponent on the earliest differing variable is the larger.
      (With variables [x, y] this makes y^2 > x*y > x^2.)
    * ``weighted`` -- same tie-break, but degree is the weighted degree
      sum(w_i * e_i) for declared positive weights.

    ``key`` maps an exponent vector to a tuple that sorts in order
    (bigger key = bigger monomial), so it can be fed straight to ``sorted``.
    """

    __slots__ = ("kind", "weights")

    def __init__(self, kind: str = "degrevlex", weights: Optional[Sequence[int]] = None):
        if kind not in _ORDER_KINDS:
            raise ValueError("unknown order kind %r" % kind)
        if kind == "weighted":
            if not weights:
                raise ValueError("weighted order requires weights")
            if any(w < 1 for w in weights):
                raise ValueError("weights must be >= 1")
            self.weights = tuple(int(w) for w in weights)
        else:
            if weights is not None:
                raise ValueError("weights only apply to the weighted kind")
            self.weights = None
        self.kind = kind

    def degree(self, exps: ExpVec) -> int:
        if self.kind == "weighted":
            return sum(w * e for w, e in zip(self.weights, exps))
        return sum(exps)

    def key(self, exps: ExpVec):
        if self.kind == "lex":
            return tuple(exps)
        return (self.degree(exps), tuple(-e for e in exps))

    def sort_terms(self, poly: "Polynomial") -> List[Tuple[ExpVec, Fraction]]:
        """Terms of ``poly`` in descending order (leading term first)."""
        return sorted(poly.terms.items(), key=lambda t: self.key(t[0]), reverse=True)

    def leading_term(self, poly: "Polynomial") -> Tuple[ExpVec, Fraction]:
        if poly.is_zero():
            raise ValueError("zero polynomial has no leading term")
        exps = max(poly.terms, key=self.key)
        return exps, poly.terms[exps]

    def __eq__(self, other):
        return (isinstance(other, MonomialOrder)
                and self.kind == other.kind and self.weights == other.weights)

    def __hash__(self):
        return hash((self.kind, self.weights))

    def __repr__(self):
        if self.weights is None:
            return "MonomialOrder(%r)" % self.kind
        return "MonomialOrder(%r, weights=%r)" % (self.kind, self.weights)


class Polynomial:
    """Immutable exact polynomial; ``terms`` maps ExpVec -> nonzero Fraction."""

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Dict[ExpVec, Fraction]):
        variables = tuple(variables)
        clean: Dict[ExpVec, Fraction] = {}
        n = len(variables)
        for exps, coeff in terms.items():
            coeff = Fraction(coeff)
            if not coeff:
                continue
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise ValueError("exponent vector %r has wrong length" % (exps,))
            _check_exponents(exps)
            clean[exps] = coeff
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        return cls(variables, {})

    @classmethod
    def const(cls, variables: Sequence[str], value) -> "Polynomial":
        n = len(variables)
        return cls(variables, {(0,) * n: Fraction(value)})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "Polynomial":
        idx = list(variables).index(name)
        exps = tuple(1 if i == idx else 0 for i in range(len(variables)))
        return cls(variables, {exps: Fraction(1)})

    @classmethod
    def monomial(cls, variables: Sequence[str], exps: ExpVec, coeff=1) -> "Polynomial":
        return cls(variables, {tuple(exps): Fraction(coeff)})

    # -- predicates and views -----------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        zero = (0,) * len(self.variables)
        return self.terms.get(zero, Fraction(0))

    def coefficient(self, exps: ExpVec) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def weighted_degree(self, weights: Optional[Sequence[int]]) -> int:
        if not self.terms:
            return -1
        if weights is None:
            return self.total_degree()
        return max(sum(w * x for w, x in zip(weights, e)) for e in self.terms)

    def homogeneous_degree(self, weights: Optional[Sequence[int]]) -> Optional[int]:
        """The common (weighted) degree of all terms, or None if mixed/zero."""
        degs = set()
        for e in self.terms:
            if weights is None:
                degs.add(sum(e))
            else:
                degs.add(sum(w * x for w, x in zip(weights, e)))
        if len(degs) == 1:
            return degs.pop()
        return None

    def iter_terms(self) -> Iterator[Tuple[ExpVec, Fraction]]:
        return iter(self.terms.items())

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.variables != self.variables:
                raise ValueError("variable-list mismatch: %r vs %r"
                                 % (self.variables, other.variables))
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.const(self.variables, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = out.get(exps, Fraction(0)) + coeff
            if acc:
                out[exps] = acc
            else:
                out.pop(exps, None)
        return Polynomial(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: Dict[ExpVec, Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                exps = tuple(a + b for a, b in zip(ea, eb))
                acc = out.get(exps, Fraction(0)) + ca * cb
                if acc:
                    out[exps] = acc
                else:
                    out.pop(exps, None)
        return Polynomial(self.variables, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial.zero(self.variables)
        return Polynomial(self.variables, {e: k * c for e, k in self.terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers take a non-negative integer")
        out = Polynomial.const(self.variables, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return out

    # -- equality ------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            if isinstance(other, (int, Fraction)):
                return self.variables is not None and self == Polynomial.const(self.variables, other)
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        h = object.__getattribute__(self, "_hash")
        if h is None:
            h = hash((self.variables, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return "Polynomial(%s)" % format_polynomial(self)


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    """Exact add/sub/mul; the two inputs must share one variable list."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError("unknown op %r" % op)


def partial_derivative(h: Polynomial, var_index: int, order: int = 1) -> Polynomial:
    """Exact iterated partial derivative d^order h / d x_{var_index}^order."""
    if not 0 <= var_index < len(h.variables):
        raise ValueError("variable index out of range")
    if order < 1:
        raise ValueError("derivative order must be >= 1")
    out: Dict[ExpVec, Fraction] = {}
    for exps, coeff in h.terms.items():
        e = exps[var_index]
        if e < order:
            continue
        fall = 1
        for i in range(order):
            fall *= e - i
        new = list(exps)
        new[var_index] = e - order
        out[tuple(new)] = coeff * fall
    return Polynomial(h.variables, out)


def taylor_coefficient(h: Polynomial, gamma: ExpVec) -> Polynomial:
    """The exact Taylor coefficient d^gamma h / gamma! as a polynomial."""
    gamma = tuple(gamma)
    out: Dict[ExpVec, Fraction] = {}
    for exps, coeff in h.terms.items():
        if any(e < g for e, g in zip(exps, gamma)):
            continue
        mult = 1
        for e, g in zip(exps, gamma):
            mult *= comb(e, g)
        if mult:
            out_exps = tuple(e - g for e, g in zip(exps, gamma))
            acc = out.get(out_exps, Fraction(0)) + coeff * mult
            if acc:
                out[out_exps] = acc
            else:
                out.pop(out_exps, None)
    return Polynomial(h.variables, out)


def shift_components(h: Polynomial, q: int,
                     include_constant: bool = False) -> Dict[ExpVec, Polynomial]:
    """Taylor components of h(x+u) truncated past u-degree q.

    Returns {gamma: d^gamma h / gamma!} for 0 < |gamma| <= q (the constant
    component gamma = 0, equal to h itself, is included when asked for).
    This is the exact coefficient table of h(x+u) - h(x) mod (u)^(q+1).
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    comps: Dict[ExpVec, Dict[ExpVec, Fraction]] = {}
    n = len(h.variables)
    for exps, coeff in h.terms.items():
        ranges = [range(min(e, q) + 1) for e in exps]
        for gamma in product(*ranges):
            tot = sum(gamma)
            if tot > q or (tot == 0 and not include_constant):
                continue
            mult = 1
            for e, g in zip(exps, gamma):
                mult *= comb(e, g)
            rest = tuple(e - g for e, g in zip(exps, gamma))
            bucket = comps.setdefault(gamma, {})
            acc = bucket.get(rest, Fraction(0)) + coeff * mult
            if acc:
                bucket[rest] = acc
            else:
                bucket.pop(rest, None)
    out: Dict[ExpVec, Polynomial] = {}
    for gamma, bucket in comps.items():
        if bucket:
            out[gamma] = Polynomial(h.variables, bucket)
    return out


def doubled_variables(variables: Sequence[str]) -> Tuple[str, ...]:
    """Fresh shift-variable names u, v, w, u4, ... avoiding collisions."""
    used = set(variables)
    pool = ["u", "v", "w"] + ["u%d" % i for i in range(4, 4 + 2 * len(variables))]
    fresh: List[str] = []
    for cand in pool:
        if len(fresh) == len(variables):
            break
        name = cand
        while name in used:
            name += "_"
        fresh.append(name)
        used.add(name)
    return tuple(variables) + tuple(fresh)


def truncated_shift(h: Polynomial, q: int) -> Polynomial:
    """h(x+u) - h(x) in the doubled variable list, u-degree capped at q.

    Equals sum over 0 < |beta| <= q of (d^beta h / beta!) * u^beta; the
    u-variables are fresh names appended after the original variables.
    """
    doubled = doubled_variables(h.variables)
    n = len(h.variables)
    comps = shift_components(h, q, include_constant=False)
    terms: Dict[ExpVec, Fraction] = {}
    for gamma, poly in comps.items():
        for exps, coeff in poly.terms.items():
            terms[tuple(exps) + tuple(gamma)] = coeff
    return Polynomial(doubled, terms)


def monomial_text(exps: ExpVec, variables: Sequence[str]) -> str:
    """Render x^alpha ('1' for the empty monomial), explicit * and ^."""
    parts = []
    for name, e in zip(variables, exps):
        if e == 0:
            continue
        parts.append(name if e == 1 else "%s^%d" % (name, e))
    return "*".join(parts) if parts else "1"


def format_polynomial(p: Polynomial, order: Optional[MonomialOrder] = None) -> str:
    """Canonical text: descending terms, explicit * and ^, e.g. -3*x^2*y + 2*y."""
    if p.is_zero():
        return "0"
    if order is None:
        order = MonomialOrder("degrevlex")
    pieces: List[str] = []
    for exps, coeff in order.sort_terms(p):
        mono = monomial_text(exps, p.variables)
        mag = abs(coeff)
        if mono == "1":
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = "%s*%s" % (mag, mono)
        if not pieces:
            pieces.append("-" + body if coeff < 0 else body)
        else:
            pieces.append((" - " if coeff < 0 else " + ") + body)
    return "".join(pieces)
