"""Groebner bases, normal forms and syzygies for submodules of free modules.

Elements of a free module P^n are sparse dicts mapping (position, exponent
vector) to a Fraction.  The module order is position-over-term: terms at a
lower position index are larger, ties within a position follow the ring's
monomial order.  Buchberger runs with the normal selection strategy
(smallest lcm first) and a first-match reducer, so output is deterministic.

Syzygies are collected by expression tracking: every basis element carries
its representation over the *original* generator list, and every S-pair
that reduces to zero deposits its tracked representation as a syzygy.  The
original generators stay in the working basis and no pair is skipped while
tracking, which is exactly what Schreyer's argument needs for the recorded
set to generate the full syzygy module.

Submodules over a quotient ring R = P/I are handled by the augmentation
convention: add f*e_k for every ideal generator f and unit vector e_k,
compute over P, and project/reduce afterwards.  The helpers with
``_over_ring`` in their name package that convention.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd, lcm
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .poly import ExpVec, MonomialOrder, Polynomial
from .parser import RingSpec

Term = Tuple[int, ExpVec]          # (position, monomial)
Vec = Dict[Term, Fraction]         # sparse free-module element
FreeElement = Tuple[Polynomial, ...]


def _term_key(term: Term, order: MonomialOrder):
    # position-over-term, top (low-index) positions first
    return (-term[0], order.key(term[1]))


def _divides(a: ExpVec, b: ExpVec) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _monomial_mul(a: ExpVec, b: ExpVec) -> ExpVec:
    return tuple(x + y for x, y in zip(a, b))


def _vec_submul(target: Vec, coeff: Fraction, mono: ExpVec, src: Vec) -> None:
    """target -= coeff * x^mono * src, in place."""
    for (pos, exps), c in src.items():
        key = (pos, _monomial_mul(mono, exps))
        acc = target.get(key, Fraction(0)) - coeff * c
        if acc:
            target[key] = acc
        else:
            target.pop(key, None)


def _vec_scale(vec: Vec, c: Fraction) -> None:
    for key in vec:
        vec[key] *= c


def _make_primitive(vec: Vec, expr: Optional[Vec], order: MonomialOrder) -> None:
    """Scale so coefficients are coprime integers and the lead is positive."""
    if not vec:
        return
    den = 1
    for c in vec.values():
        den = lcm(den, c.denominator)
    num = 0
    for c in vec.values():
        num = gcd(num, abs(c.numerator * (den // c.denominator)))
    scale = Fraction(den, num) if num else Fraction(1)
    lead = max(vec, key=lambda t: _term_key(t, order))
    if vec[lead] < 0:
        scale = -scale
    if scale != 1:
        _vec_scale(vec, scale)
        if expr is not None:
            _vec_scale(expr, scale)


class _Elt:
    __slots__ = ("vec", "expr", "lead", "lc")

    def __init__(self, vec: Vec, expr: Optional[Vec], order: MonomialOrder):
        self.vec = vec
        self.expr = expr
        self.lead = max(vec, key=lambda t: _term_key(t, order))
        self.lc = vec[self.lead]


def _reduce(vec: Vec, expr: Optional[Vec], elements: List[_Elt],
            by_pos: Dict[int, List[int]], order: MonomialOrder) -> Vec:
    """Full normal form of vec against elements; expr is updated in place."""
    result: Vec = {}
    while vec:
        term = max(vec, key=lambda t: _term_key(t, order))
        pos, exps = term
        reducer = None
        for idx in by_pos.get(pos, ()):
            g = elements[idx]
            if _divides(g.lead[1], exps):
                reducer = g
                break
        if reducer is None:
            result[term] = vec.pop(term)
            continue
        coeff = vec[term] / reducer.lc
        shift = tuple(a - b for a, b in zip(exps, reducer.lead[1]))
        _vec_submul(vec, coeff, shift, reducer.vec)
        if expr is not None and reducer.expr is not None:
            _vec_submul(expr, coeff, shift, reducer.expr)
    return result


def _buchberger(inputs: List[Vec], order: MonomialOrder, rank: int,
                track: bool) -> Tuple[List[_Elt], List[Vec]]:
    """Run Buchberger; returns the full working basis and tracked syzygies.

    With track=True every pair is processed (no coprimality skips) and each
    zero reduction contributes one syzygy over the input index space.
    """
    elements: List[_Elt] = []
    by_pos: Dict[int, List[int]] = {}
    syzygies: List[Vec] = []
    pairs: List[Tuple] = []

    def add_element(vec: Vec, expr: Optional[Vec]) -> None:
        _make_primitive(vec, expr, order)
        elt = _Elt(vec, expr, order)
        idx = len(elements)
        pos = elt.lead[0]
        for jdx in by_pos.get(pos, ()):
            other = elements[jdx]
            if (not track and rank == 1
                    and all(a == 0 or b == 0
                            for a, b in zip(other.lead[1], elt.lead[1]))):
                continue  # product criterion: safe only for untracked ideals
            lcm_exps = tuple(max(a, b) for a, b in zip(other.lead[1], elt.lead[1]))
            heapq.heappush(pairs, (order.key(lcm_exps), pos, jdx, idx))
        elements.append(elt)
        by_pos.setdefault(pos, []).append(idx)

    nvars = next((len(exps) for vec in inputs for (_, exps) in vec), 0)
    zero_exps = (0,) * nvars
    for i, vec in enumerate(inputs):
        expr = {(i, zero_exps): Fraction(1)} if track else None
        if not vec:
            if track:
                syzygies.append(dict(expr))
            continue
        add_element(dict(vec), expr)

    while pairs:
        _, pos, i, j = heapq.heappop(pairs)
        gi, gj = elements[i], elements[j]
        lcm_exps = tuple(max(a, b) for a, b in zip(gi.lead[1], gj.lead[1]))
        shift_i = tuple(a - b for a, b in zip(lcm_exps, gi.lead[1]))
        shift_j = tuple(a - b for a, b in zip(lcm_exps, gj.lead[1]))
        vec: Vec = {}
        _vec_submul(vec, -gj.lc, shift_i, gi.vec)
        _vec_submul(vec, gi.lc, shift_j, gj.vec)
        expr: Optional[Vec] = None
        if track:
            expr = {}
            _vec_submul(expr, -gj.lc, shift_i, gi.expr)
            _vec_submul(expr, gi.lc, shift_j, gj.expr)
        remainder = _reduce(vec, expr, elements, by_pos, order)
        if remainder:
            add_element(remainder, expr)
        elif track and expr:
            _make_primitive(expr, None, order)
            syzygies.append(expr)

    return elements, syzygies


def _reduced_basis(elements: List[_Elt], order: MonomialOrder) -> List[Vec]:
    """Unique reduced monic GB: minimal leads, tails fully reduced, sorted."""
    keep: List[int] = []
    for i, e in enumerate(elements):
        redundant = False
        for j, f in enumerate(elements):
            if i == j or f.lead[0] != e.lead[0]:
                continue
            if _divides(f.lead[1], e.lead[1]) and (
                    f.lead[1] != e.lead[1] or j in keep):
                redundant = True
                break
        if not redundant:
            keep.append(i)
    minimal = [elements[i] for i in keep]
    minimal.sort(key=lambda e: _term_key(e.lead, order), reverse=True)
    reduced: List[Vec] = []
    for i, e in enumerate(minimal):
        others = [f for j, f in enumerate(minimal) if j != i]
        by_pos: Dict[int, List[int]] = {}
        for j, f in enumerate(others):
            by_pos.setdefault(f.lead[0], []).append(j)
        rem = _reduce(dict(e.vec), None, others, by_pos, order)
        _make_primitive(rem, None, order)
        lead = max(rem, key=lambda t: _term_key(t, order))
        if rem[lead] != 1:
            _vec_scale(rem, Fraction(1) / rem[lead])
        reduced.append(rem)
    reduced.sort(key=lambda v: _term_key(max(v, key=lambda t: _term_key(t, order)),
                                         order), reverse=True)
    return reduced


# ---------------------------------------------------------------------------
# public element conversions


def _as_row(value, rank: Optional[int] = None) -> FreeElement:
    if isinstance(value, Polynomial):
        return (value,)
    row = tuple(value)
    if rank is not None and len(row) != rank:
        raise ValueError("expected a free element of rank %d, got %d"
                         % (rank, len(row)))
    return row


def _row_to_vec(row: FreeElement) -> Vec:
    vec: Vec = {}
    for pos, poly in enumerate(row):
        for exps, coeff in poly.terms.items():
            vec[(pos, exps)] = coeff
    return vec


def _vec_to_row(vec: Vec, rank: int, variables: Tuple[str, ...]) -> FreeElement:
    buckets: List[Dict[ExpVec, Fraction]] = [dict() for _ in range(rank)]
    for (pos, exps), coeff in vec.items():
        buckets[pos][exps] = coeff
    return tuple(Polynomial(variables, b) for b in buckets)


# ---------------------------------------------------------------------------
# public engine surface


class SubmoduleBasis:
    """A generator list plus its cached reduced Groebner basis."""

    def __init__(self, generators: Sequence, order: MonomialOrder,
                 rank: Optional[int] = None,
                 variables: Optional[Tuple[str, ...]] = None):
        rows = [_as_row(g) for g in generators]
        if rows:
            widths = {len(r) for r in rows}
            if len(widths) != 1:
                raise ValueError("generators of mixed rank")
            inferred = widths.pop()
            if rank is not None and rank != inferred:
                raise ValueError("rank mismatch")
            rank = inferred
            variables = rows[0][0].variables
        if rank is None:
            raise ValueError("empty generator list needs an explicit rank")
        if variables is None:
            raise ValueError("empty generator list needs explicit variables")
        for row in rows:
            if all(p.is_zero() for p in row):
                raise ValueError("zero generator")
            for p in row:
                if p.variables != variables:
                    raise ValueError("variable-list mismatch in generators")
        self.rank = rank
        self.variables = variables
        self.generators: Tuple[FreeElement, ...] = tuple(rows)
        self.order = order
        self._groebner: Optional[List[Vec]] = None
        self._reducers: Optional[Tuple[List[_Elt], Dict[int, List[int]]]] = None

    @property
    def groebner(self) -> List[Vec]:
        if self._groebner is None:
            if not self.generators:
                self._groebner = []
            else:
                inputs = [_row_to_vec(r) for r in self.generators]
                elements, _ = _buchberger(inputs, self.order, self.rank, track=False)
                self._groebner = _reduced_basis(elements, self.order)
        return self._groebner

    def groebner_rows(self) -> List[FreeElement]:
        return [_vec_to_row(v, self.rank, self.variables) for v in self.groebner]

    def normal_form(self, value):
        row = _as_row(value, self.rank)
        if self._reducers is None:
            elements = [_Elt(dict(v), None, self.order) for v in self.groebner]
            by_pos: Dict[int, List[int]] = {}
            for i, e in enumerate(elements):
                by_pos.setdefault(e.lead[0], []).append(i)
            self._reducers = (elements, by_pos)
        elements, by_pos = self._reducers
        rem = _reduce(_row_to_vec(row), None, elements, by_pos, self.order)
        out = _vec_to_row(rem, self.rank, self.variables)
        if isinstance(value, Polynomial):
            return out[0]
        return out

    def contains(self, value) -> bool:
        out = self.normal_form(value)
        if isinstance(out, Polynomial):
            return out.is_zero()
        return all(p.is_zero() for p in out)


def groebner_basis(gens: Sequence, order: Optional[MonomialOrder] = None,
                   rank: Optional[int] = None,
                   variables: Optional[Tuple[str, ...]] = None) -> SubmoduleBasis:
    """Reduced deterministic Groebner basis of the generated submodule."""
    if order is None:
        order = MonomialOrder("degrevlex")
    return SubmoduleBasis(gens, order, rank=rank, variables=variables)


def normal_form(value, basis: SubmoduleBasis):
    """Unique remainder of value modulo the basis; zero iff member."""
    return basis.normal_form(value)


def syzygies(basis: SubmoduleBasis) -> SubmoduleBasis:
    """Generators of the first syzygy module of basis.generators.

    The result lives in P^t where t = number of generators; every output s
    satisfies sum_i s_i * gen_i = 0 identically (asserted).
    """
    gens = basis.generators
    if not gens:
        return SubmoduleBasis((), basis.order, rank=0, variables=basis.variables)
    inputs = [_row_to_vec(r) for r in gens]
    _, raw = _buchberger(inputs, basis.order, basis.rank, track=True)
    rows: List[FreeElement] = []
    seen = set()
    for vec in raw:
        row = _vec_to_row(vec, len(gens), basis.variables)
        if all(p.is_zero() for p in row):
            continue
        combo = None
        for coeff, gen in zip(row, gens):
            part = tuple(coeff * g for g in gen)
            combo = part if combo is None else tuple(a + b for a, b in zip(combo, part))
        assert all(p.is_zero() for p in combo), "tracked syzygy failed to vanish"
        key = tuple(tuple(sorted(p.terms.items())) for p in row)
        if key in seen:
            continue
        seen.add(key)
        rows.append(row)
    rows.sort(key=lambda r: _term_key(
        max(_row_to_vec(r), key=lambda t: _term_key(t, basis.order)), basis.order),
        reverse=True)
    return SubmoduleBasis(rows, basis.order, rank=len(gens),
                          variables=basis.variables)


# ---------------------------------------------------------------------------
# quotient-ring conveniences


@lru_cache(maxsize=None)
def ring_groebner(ring: RingSpec) -> SubmoduleBasis:
    """Cached reduced GB of the defining ideal (rank-1 submodule)."""
    return SubmoduleBasis(tuple((f,) for f in ring.ideal), ring.order(),
                          rank=1, variables=ring.variables)


def nf_poly(p: Polynomial, ring: RingSpec) -> Polynomial:
    """Normal form of a coefficient modulo the defining ideal."""
    if not ring.ideal:
        return p
    return ring_groebner(ring).normal_form(p)


def _ideal_unit_rows(rank: int, ring: RingSpec) -> List[FreeElement]:
    rows = []
    zero = Polynomial.zero(ring.variables)
    for f in ring.ideal:
        for pos in range(rank):
            rows.append(tuple(f if i == pos else zero for i in range(rank)))
    return rows


def submodule_over_ring(rows: Sequence[FreeElement], rank: int,
                        ring: RingSpec) -> SubmoduleBasis:
    """Basis of span(rows) + I*P^rank; `contains` decides membership over R."""
    items = [_as_row(r, rank) for r in rows] + _ideal_unit_rows(rank, ring)
    return SubmoduleBasis(items, ring.order(), rank=rank, variables=ring.variables)


def syzygies_over_ring(rows: Sequence[FreeElement], rank: int,
                       ring: RingSpec) -> List[FreeElement]:
    """Generators of {a in R^t : sum a_i * row_i = 0 in R^rank}.

    Computed over P against the ideal-augmented list, projected onto the
    row block, coefficient-reduced modulo I, zero rows dropped.
    """
    rows = [_as_row(r, rank) for r in rows]
    t = len(rows)
    if t == 0:
        return []
    items = rows + _ideal_unit_rows(rank, ring)
    inputs = [_row_to_vec(r) for r in items]
    _, raw = _buchberger(inputs, ring.order(), rank, track=True)
    out: List[FreeElement] = []
    seen = set()
    for vec in raw:
        full = _vec_to_row(vec, len(items), ring.variables)
        row = tuple(nf_poly(p, ring) for p in full[:t])
        if all(p.is_zero() for p in row):
            continue
        key = tuple(tuple(sorted(p.terms.items())) for p in row)
        if key in seen:
            continue
        seen.add(key)
        out.append(row)
    order = ring.order()
    out.sort(key=lambda r: _term_key(
        max(_row_to_vec(r), key=lambda t_: _term_key(t_, order)), order),
        reverse=True)
    return out


def row_lead_key(row: FreeElement, ring: RingSpec):
    """Sort key: the leading module term of the row (zero rows first).

    Greedy pruning is far more effective on rows sorted by ascending
    lead, since rows with small leads generate the shifted multiples
    that follow them.
    """
    vec = _row_to_vec(tuple(row))
    if not vec:
        return (float("-inf"), ())
    order = ring.order()
    return _term_key(max(vec, key=lambda t: _term_key(t, order)), order)


def prune_rows(rows: Sequence[FreeElement], rank: int,
               ring: RingSpec) -> List[FreeElement]:
    """Greedy prune: drop rows already in the span of the kept ones over R."""
    kept: List[FreeElement] = []
    basis: Optional[SubmoduleBasis] = None
    for row in rows:
        row = tuple(nf_poly(p, ring) for p in _as_row(row, rank))
        if all(p.is_zero() for p in row):
            continue
        if basis is None:
            if ring.ideal and submodule_over_ring([], rank, ring).contains(row):
                continue
        elif basis.contains(row):
            continue
        kept.append(row)
        basis = submodule_over_ring(kept, rank, ring)
    return kept


# ---------------------------------------------------------------------------
# linear solving over R


@dataclass(frozen=True)
class Solution:
    column: FreeElement


@dataclass(frozen=True)
class NoSolution:
    residual: FreeElement


def solve_linear(A: Sequence[Sequence[Polynomial]], b: Sequence[Polynomial],
                 ring: RingSpec):
    """Particular solution of A*x = b over R = P/I, or NoSolution.

    A is given by rows; a solution satisfies A*x - b in I * R^rows.  Found by
    tracked reduction of b against the GB of the columns of A augmented with
    ideal multiples of the unit vectors; NoSolution carries the nonzero
    normal form of b as certificate.
    """
    rows = [list(r) for r in A]
    if not rows:
        raise ValueError("empty system")
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ValueError("ragged matrix")
    if len(b) != len(rows):
        raise ValueError("dimension mismatch between A and b")
    nrows = len(rows)
    zero = Polynomial.zero(ring.variables)
    columns: List[FreeElement] = []
    for j in range(ncols):
        columns.append(tuple(rows[i][j] for i in range(nrows)))
    items = columns + _ideal_unit_rows(nrows, ring)
    inputs = [_row_to_vec(_as_row(r, nrows)) for r in items]
    order = ring.order()
    elements, _ = _buchberger([v for v in inputs if v], order, nrows, track=True)
    # reindex tracked expressions: _buchberger numbered only nonzero inputs
    nonzero_idx = [i for i, v in enumerate(inputs) if v]
    by_pos: Dict[int, List[int]] = {}
    for i, e in enumerate(elements):
        by_pos.setdefault(e.lead[0], []).append(i)
    work = _row_to_vec(_as_row(b, nrows))
    acc: Vec = {}
    remainder: Vec = {}
    while work:
        term = max(work, key=lambda t: _term_key(t, order))
        pos, exps = term
        reducer = None
        for idx in by_pos.get(pos, ()):
            g = elements[idx]
            if _divides(g.lead[1], exps):
                reducer = g
                break
        if reducer is None:
            remainder[term] = work.pop(term)
            continue
        coeff = work[term] / reducer.lc
        shift = tuple(a - b_ for a, b_ in zip(exps, reducer.lead[1]))
        _vec_submul(work, coeff, shift, reducer.vec)
        _vec_submul(acc, -coeff, shift, reducer.expr)
    if remainder:
        return NoSolution(_vec_to_row(remainder, nrows, ring.variables))
    track_rank = len(nonzero_idx)
    tracked = _vec_to_row(acc, track_rank, ring.variables)
    solution = [zero] * ncols
    for local, original in enumerate(nonzero_idx):
        if original < ncols:
            solution[original] = nf_poly(tracked[local], ring)
    return Solution(tuple(solution))


# ---------------------------------------------------------------------------
# Krull dimension


def krull_dimension(ring: RingSpec) -> int:
    """Krull dimension of R, from the leading-term ideal of a GB of I.

    Standard combinatorial reading: the dimension is the largest size of a
    variable subset S such that no Groebner leading monomial is supported
    inside S.  Returns -1 for the zero ring (1 in the ideal).
    """
    supports = []
    for vec in ring_groebner(ring).groebner:
        (_, exps) = max(vec, key=lambda t: _term_key(t, ring.order()))
        supports.append(frozenset(i for i, e in enumerate(exps) if e))
    s = len(ring.variables)
    for size in range(s, -1, -1):
        for subset in combinations(range(s), size):
            chosen = set(subset)
            if not any(sup <= chosen for sup in supports):
                return size
    return -1
