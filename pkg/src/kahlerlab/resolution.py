"""Free resolutions, Betti numbers, projective dimension, regularity.

free_resolution iterates syzygy computations: step 0 is the (row-pruned)
relation matrix of the presentation on its given generators, step i+1
lists a pruned generating set of the syzygy module of step i, and the
chain stops at the first zero syzygy module or at the cutoff.

minimalize rebuilds the chain with scalar pivots eliminated: a nonzero
constant entry in a step matrix certifies that one generator of the level
below is an R-combination of the others, so the pivot row, its column,
and that generator are removed.  On graded input (and on input whose
entries all vanish at the origin) the surviving Betti numbers are the
minimal ones; if a unit that is not an exact constant survives, the
elimination is incomplete and minimalize raises instead of guessing.

projective_dimension reads its verdict off the minimalized chain: Finite
at the last nonzero step when the chain terminates, AtLeast(cutoff) when
the cutoff cut it short.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from .poly import Polynomial, partial_derivative
from .parser import RingSpec, make_ringspec
from .groebner import (krull_dimension, nf_poly, prune_rows, row_lead_key,
                       syzygies_over_ring)
from .presentations import Presentation, _row_degree

Matrix = Tuple[Tuple[Polynomial, ...], ...]


@dataclass(frozen=True)
class ResolutionReport:
    module: Presentation
    steps: Tuple[Matrix, ...]
    betti: Tuple[int, ...]
    terminated: bool
    cutoff: int
    graded: bool


@dataclass(frozen=True)
class Finite:
    value: int

    def __str__(self) -> str:
        return "pd = %d" % self.value


@dataclass(frozen=True)
class AtLeast:
    value: int

    def __str__(self) -> str:
        return "pd >= %d" % self.value


def _scalar(p: Polynomial) -> Optional[Fraction]:
    """The value of a nonzero constant polynomial, else None."""
    if len(p.terms) != 1:
        return None
    (exps, coeff), = p.terms.items()
    if any(exps):
        return None
    return coeff


def _sweep_pair(upper: Sequence[Sequence[Polynomial]], lower: Sequence,
                ring: RingSpec) -> Tuple[List[List[Polynomial]], list]:
    """Scalar-pivot elimination between consecutive levels of a chain.

    `lower` is any sequence indexed parallel to `upper`'s columns (step
    matrix rows, or generator indices at the bottom level).  A constant
    entry upper[a][b] says lower[b] is an R-combination of the rest: the
    pivot column is cleared by row operations, then row a and column b of
    `upper` and entry b of `lower` are dropped.  Zero rows are discarded.
    """
    upper = [list(r) for r in upper]
    lower = list(lower)
    while True:
        hit = next(((a, b) for a, row in enumerate(upper)
                    for b, entry in enumerate(row)
                    if _scalar(entry) is not None), None)
        if hit is None:
            return upper, lower
        a, b = hit
        pivot = upper.pop(a)
        pv = _scalar(pivot[b])
        for i, row in enumerate(upper):
            if row[b].is_zero():
                continue
            c = row[b].scale(1 / pv)
            upper[i] = [nf_poly(x - c * y, ring) for x, y in zip(row, pivot)]
        for row in upper:
            del row[b]
        del lower[b]
        upper = [r for r in upper if any(not p.is_zero() for p in r)]


def _chain(rows: Sequence[Sequence[Polynomial]], ring: RingSpec, cutoff: int,
           sweep: bool) -> Tuple[List[List[List[Polynomial]]], bool]:
    """Iterated syzygies of a relation matrix, at most `cutoff` steps.

    Each syzygy set is pruned to a generating set before the next step;
    the tracked syzygies carry one element per reduced pair, so without
    pruning the ranks (and the running time) grow multiplicatively.
    """
    steps: List[List[List[Polynomial]]] = []
    current = [list(r) for r in rows]
    while current and len(steps) < cutoff:
        steps.append(current)
        nxt = [list(r) for r in syzygies_over_ring(
            [tuple(r) for r in current], len(current[0]), ring)]
        if sweep and nxt:
            nxt, steps[-1] = _sweep_pair(nxt, steps[-1], ring)
        if nxt:
            nxt.sort(key=lambda r: row_lead_key(tuple(r), ring))
            nxt = [list(r) for r in prune_rows(
                [tuple(r) for r in nxt], len(steps[-1]), ring)]
        current = nxt
    return steps, not current


def _graded_chain(m: Presentation, steps) -> bool:
    """True when generator degrees exist and every step row is homogeneous
    for them (weights default to 1 per variable)."""
    if m.degrees is None:
        return False
    weights = m.ring.weights or tuple(1 for _ in m.ring.variables)
    degrees = m.degrees
    for step in steps:
        found = []
        for row in step:
            d = _row_degree(tuple(row), degrees, weights)
            if d is None:
                return False
            found.append(d)
        degrees = tuple(found)
    return True


def _report(m: Presentation, steps, terminated: bool,
            cutoff: int) -> ResolutionReport:
    betti = (m.ngens,) + tuple(len(s) for s in steps)
    frozen = tuple(tuple(tuple(row) for row in s) for s in steps)
    return ResolutionReport(m, frozen, betti, terminated, cutoff,
                            _graded_chain(m, steps))


@lru_cache(maxsize=None)
def free_resolution(m: Presentation, cutoff: int = 6) -> ResolutionReport:
    """Resolve M on its given generators; Betti numbers are the raw ranks."""
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    rows = prune_rows(m.relations, m.ngens, m.ring)
    steps, terminated = _chain(rows, m.ring, cutoff, sweep=False)
    return _report(m, steps, terminated, cutoff)


def minimal_presentation(m: Presentation) -> Presentation:
    """Equivalent presentation with scalar relation entries eliminated.

    Every pivot removes one generator and one relation; surviving rows
    are pruned against each other over R.
    """
    if not m.relations:
        return m
    rows, keep = _sweep_pair(m.relations, range(m.ngens), m.ring)
    gens = tuple(m.generators[i] for i in keep)
    degrees = None if m.degrees is None else tuple(m.degrees[i] for i in keep)
    rows = prune_rows([tuple(r) for r in rows], len(gens), m.ring)
    return Presentation(m.ring, gens, tuple(rows), degrees)


@lru_cache(maxsize=None)
def minimalize(r: ResolutionReport) -> ResolutionReport:
    """Rebuild the chain with scalar pivots eliminated at every level.

    The Betti column keeps the raw report's length (trailing zeros) so a
    swept generator shows up as a drop in two consecutive spots.
    """
    m = minimal_presentation(r.module)
    rows = prune_rows(m.relations, m.ngens, m.ring)
    steps, terminated = _chain(rows, m.ring, r.cutoff, sweep=True)
    out = _report(m, steps, terminated, r.cutoff)
    for step in out.steps:
        for row in step:
            for entry in row:
                if entry.constant_term() != 0:
                    raise ValueError(
                        "entry %r is a unit but not a constant; "
                        "minimalization needs graded or origin-local input"
                        % entry)
    betti, frozen = out.betti, out.steps
    if terminated and len(betti) < len(r.betti):
        pad = len(r.betti) - len(betti)
        betti = betti + (0,) * pad
        frozen = frozen + ((),) * pad
    return ResolutionReport(out.module, frozen, betti, terminated,
                            out.cutoff, out.graded)


def projective_dimension(m: Presentation, cutoff: int = 6):
    """Verdict from the minimalized resolution: Finite(last nonzero step)
    when it terminates within the cutoff, else AtLeast(cutoff)."""
    r = minimalize(free_resolution(m, cutoff))
    if not r.terminated:
        return AtLeast(cutoff)
    return Finite(max((i for i, b in enumerate(r.betti) if b), default=0))


def _det(mat: List[List[Polynomial]], ring: RingSpec) -> Polynomial:
    if len(mat) == 1:
        return mat[0][0]
    total = ring.zero()
    for j, entry in enumerate(mat[0]):
        if entry.is_zero():
            continue
        sub = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = entry * _det(sub, ring)
        total = total + (term if j % 2 == 0 else -term)
    return total


def jacobian_regular(ring: RingSpec) -> bool:
    """Jacobian criterion over Q: R is regular (smooth) exactly when I
    together with the c x c minors of the Jacobian of its generators is
    the unit ideal, where c = s - dim R is the codimension."""
    if not ring.ideal:
        return True
    s = len(ring.variables)
    c = s - krull_dimension(ring)
    if c <= 0:
        return True
    jac = [[partial_derivative(f, j) for j in range(s)] for f in ring.ideal]
    minors = []
    for rsel in combinations(range(len(ring.ideal)), c):
        for csel in combinations(range(s), c):
            d = _det([[jac[i][j] for j in csel] for i in rsel], ring)
            if not d.is_zero():
                minors.append(d)
    extended = make_ringspec(ring.variables, None,
                             tuple(ring.ideal) + tuple(minors))
    return nf_poly(ring.one(), extended).is_zero()
