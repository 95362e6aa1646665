"""Higher-order differential modules, jet modules and their canonical maps.

Everything is finitely presented over R = Q[x_1..x_s]/I.  The q-th
differential module Omega^(q) is presented on the symbols d_q(x^alpha) for
1 <= |alpha| <= q; the q-jet module J_q(M) of a presented module M on the
symbols D_q[g](x^beta) for |beta| <= q.  Relation rows are produced by a
triangular expansion of polynomials against these symbol bases and pruned
to a generating set.

The symmetric-derivation solver decides whether the second-order structure
splits: it searches for generator images in S^2(Omega^(q)) compatible with
the Leibniz rule on every relation, and an independent bounded-degree
oracle double-checks the verdict without the Groebner engine.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, product
from math import comb
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .poly import ExpVec, Polynomial, doubled_variables, shift_components
from .parser import DeltaLabel, JetLabel, RingSpec
from .groebner import FreeElement, NoSolution, nf_poly, prune_rows, solve_linear
from .presentations import (
    ModuleMap,
    Presentation,
    direct_sum,
    ring_as_module,
    symmetric_square,
)


def _wdeg(exps: ExpVec, weights: Optional[Tuple[int, ...]]) -> int:
    if weights is None:
        return sum(exps)
    return sum(e * w for e, w in zip(exps, weights))


def _exponent_vectors(nvars: int, q: int, floor: int) -> List[ExpVec]:
    """All exponent vectors with floor <= total degree <= q, ascending."""
    out = [e for e in product(range(q + 1), repeat=nvars)
           if floor <= sum(e) <= q]
    out.sort(key=lambda e: (sum(e), tuple(-c for c in e)))
    return out


class DeltaBasis:
    """Ordered symbol basis {d_q(x^alpha) : 1 <= |alpha| <= q}.

    The default order is by total degree, then by exponent (x before y);
    an override must be a permutation of the same monomial set.
    """

    def __init__(self, ring: RingSpec, q: int,
                 monomials: Optional[Sequence[ExpVec]] = None):
        if q < 1:
            raise ValueError("q must be >= 1")
        default = tuple(_exponent_vectors(len(ring.variables), q, 1))
        if monomials is None:
            monomials = default
        else:
            monomials = tuple(tuple(int(e) for e in m) for m in monomials)
            if sorted(monomials) != sorted(default):
                raise ValueError(
                    "basis must be a permutation of the %d monomials with "
                    "1 <= |alpha| <= %d" % (len(default), q))
        self.ring = ring
        self.q = q
        self.monomials: Tuple[ExpVec, ...] = tuple(monomials)
        self.index = {m: i for i, m in enumerate(self.monomials)}

    def labels(self) -> Tuple[DeltaLabel, ...]:
        return tuple(DeltaLabel(self.q, m, self.ring.variables)
                     for m in self.monomials)

    def degrees(self) -> Tuple[int, ...]:
        return tuple(_wdeg(m, self.ring.weights) for m in self.monomials)


# ---------------------------------------------------------------------------
# triangular expansion against the symbol bases


def _back_substitute(table: Dict[ExpVec, Polynomial], ring: RingSpec,
                     q: int, floor: int) -> Dict[ExpVec, Polynomial]:
    """Coefficients c_gamma with sum_gamma c_gamma * row(x^gamma) matching
    the given coefficient table, where row(x^gamma) has entry
    C(gamma,eta) x^(gamma-eta) at slot eta.  Unit diagonal, so one sweep by
    descending |gamma| suffices; every emitted coefficient is reduced."""
    zero = ring.zero()
    out: Dict[ExpVec, Polynomial] = {}
    gammas = _exponent_vectors(len(ring.variables), q, floor)
    for gamma in reversed(gammas):
        c = nf_poly(table.get(gamma, zero), ring)
        out[gamma] = c
        if c.is_zero():
            continue
        ranges = [range(e + 1) for e in gamma]
        for eta in product(*ranges):
            if eta == gamma or sum(eta) < floor:
                continue
            mult = 1
            for g, e in zip(gamma, eta):
                mult *= comb(g, e)
            mono = Polynomial.monomial(
                ring.variables, tuple(g - e for g, e in zip(gamma, eta)), mult)
            table[eta] = table.get(eta, zero) - c * mono
    return out


@lru_cache(maxsize=None)
def _expansion_coords(h: Polynomial, ring: RingSpec,
                      q: int) -> Tuple[Tuple[ExpVec, Polynomial], ...]:
    # the coefficients at |gamma| >= 1 are unaffected by also solving the
    # constant slot, so one table serves both expansion flavours
    table = dict(shift_components(h, q, include_constant=True))
    coords = _back_substitute(table, ring, q, 0)
    return tuple(sorted(coords.items()))


def delta_expand(h: Polynomial, ring: RingSpec, q: int,
                 basis: Optional[DeltaBasis] = None) -> FreeElement:
    """Coordinates of the class of h in Omega^(q) over the symbol basis."""
    if basis is None:
        basis = DeltaBasis(ring, q)
    coords = dict(_expansion_coords(h, ring, q))
    return tuple(coords[m] for m in basis.monomials)


def delta_expand_via_products(h: Polynomial, ring: RingSpec,
                              q: int) -> FreeElement:
    """Same coordinates, but the coefficient table is built by repeated
    truncated products (d(ab) = a db + b da + da db, capped at u-degree q)
    instead of direct Taylor shifts; used as a cross-check route."""
    doubled = doubled_variables(h.variables)
    n = len(h.variables)
    zero = Polynomial.zero(doubled)

    def truncate(p: Polynomial) -> Polynomial:
        kept = {e: c for e, c in p.terms.items() if sum(e[n:]) <= q}
        return Polynomial(doubled, kept)

    def shift_of_monomial(exps: ExpVec) -> Polynomial:
        # x^e |-> (x+u)^e - x^e by repeated multiplication
        acc = Polynomial.const(doubled, 1)
        for i, e in enumerate(exps):
            xi = Polynomial.monomial(doubled, tuple(
                1 if j == i else 0 for j in range(2 * n)))
            ui = Polynomial.monomial(doubled, tuple(
                1 if j == n + i else 0 for j in range(2 * n)))
            for _ in range(e):
                acc = truncate(acc * (xi + ui))
        base = Polynomial.monomial(doubled, exps + (0,) * n)
        return acc - base

    total = zero
    for exps, coeff in h.terms.items():
        total = total + shift_of_monomial(exps).scale(coeff)
    table: Dict[ExpVec, Dict[ExpVec, Fraction]] = {}
    for exps, coeff in total.terms.items():
        gamma = exps[n:]
        if sum(gamma) == 0:
            continue
        table.setdefault(gamma, {})[exps[:n]] = coeff
    polys = {g: Polynomial(h.variables, b) for g, b in table.items()}
    coords = _back_substitute(polys, ring, q, 1)
    basis = DeltaBasis(ring, q)
    return tuple(coords[m] for m in basis.monomials)


def _jet_monomials(ring: RingSpec, q: int) -> Tuple[ExpVec, ...]:
    return tuple(_exponent_vectors(len(ring.variables), q, 0))


def jet_expand(h: Polynomial, ring: RingSpec, q: int, inner_index: int,
               inner_count: int) -> FreeElement:
    """Coordinates of the q-jet of h * e_t over the symbols D_q[g](x^beta),
    laid out beta-major: slot(beta, t) = position(beta) * inner_count + t."""
    coords = dict(_expansion_coords(h, ring, q))
    betas = _jet_monomials(ring, q)
    zero = ring.zero()
    out = [zero] * (len(betas) * inner_count)
    for pos, beta in enumerate(betas):
        out[pos * inner_count + inner_index] = coords[beta]
    return tuple(out)


# ---------------------------------------------------------------------------
# module presentations


def _omega_rows(ring: RingSpec, q: int, basis: DeltaBasis) -> List[FreeElement]:
    rows = []
    shifts = _exponent_vectors(len(ring.variables), q, 0)
    for f in ring.ideal:
        for beta in shifts:
            mono = Polynomial.monomial(ring.variables, beta)
            rows.append(delta_expand(mono * f, ring, q, basis))
    return rows


def omega_presentation(ring: RingSpec, q: int,
                       basis: Optional[Sequence[ExpVec]] = None) -> Presentation:
    """Presentation of Omega^(q)(R): generators d_q(x^alpha), relations the
    expansions of x^beta * f over all ideal generators f and |beta| <= q,
    pruned to a generating subset."""
    if basis is None:
        return _omega_default(ring, q)
    db = DeltaBasis(ring, q, basis)
    rows = prune_rows(_omega_rows(ring, q, db), len(db.monomials), ring)
    return Presentation(ring, db.labels(), tuple(rows), db.degrees())


@lru_cache(maxsize=None)
def _omega_default(ring: RingSpec, q: int) -> Presentation:
    db = DeltaBasis(ring, q)
    rows = prune_rows(_omega_rows(ring, q, db), len(db.monomials), ring)
    return Presentation(ring, db.labels(), tuple(rows), db.degrees())


@lru_cache(maxsize=None)
def jq_presentation(m: Presentation, q: int) -> Presentation:
    """Presentation of the q-jet module J_q(M).

    Generators D_q[g_t](x^beta) for |beta| <= q, beta-major.  Relations are
    the jet expansions of x^gamma * r for every relation row r of M and of
    x^gamma * f_j * e_t for every ideal generator, |gamma| <= q, pruned."""
    ring = m.ring
    if q < 1:
        raise ValueError("q must be >= 1")
    betas = _jet_monomials(ring, q)
    k = m.ngens
    gens = tuple(JetLabel(q, m.generators[t], beta, ring.variables)
                 for beta in betas for t in range(k))
    degrees = None
    if m.degrees is not None:
        degrees = tuple(m.degrees[t] + _wdeg(beta, ring.weights)
                        for beta in betas for t in range(k))
    rows: List[FreeElement] = []
    rank = len(gens)
    zero_row = tuple(ring.zero() for _ in range(rank))
    for r in m.relations:
        for gamma in betas:
            mono = Polynomial.monomial(ring.variables, gamma)
            row = zero_row
            for t, entry in enumerate(r):
                if entry.is_zero():
                    continue
                part = jet_expand(mono * entry, ring, q, t, k)
                row = tuple(a + b for a, b in zip(row, part))
            rows.append(row)
    for f in ring.ideal:
        for t in range(k):
            for gamma in betas:
                mono = Polynomial.monomial(ring.variables, gamma)
                rows.append(jet_expand(mono * f, ring, q, t, k))
    rows = prune_rows(rows, rank, ring)
    return Presentation(ring, gens, tuple(rows), degrees)


def jets_of_ring(ring: RingSpec, n: int) -> ModuleMap:
    """The decomposition map J_n(R) -> Omega^(n)(R) + R sending the n-jet of
    x^beta to (expansion of x^beta, x^beta)."""
    jets = jq_presentation(ring_as_module(ring), n)
    omega = omega_presentation(ring, n)
    total, _, _ = direct_sum(omega, ring_as_module(ring))
    cols = []
    for beta in _jet_monomials(ring, n):
        mono = Polynomial.monomial(ring.variables, beta)
        cols.append(delta_expand(mono, ring, n) + (nf_poly(mono, ring),))
    return ModuleMap(jets, total, tuple(cols))


# ---------------------------------------------------------------------------
# canonical maps between the differential modules


def theta_to_first(ring: RingSpec, q: int) -> ModuleMap:
    """Projection Omega^(q) -> Omega^(1), d_q(x^alpha) |-> class of x^alpha."""
    source = omega_presentation(ring, q)
    target = omega_presentation(ring, 1)
    basis = DeltaBasis(ring, q)
    cols = tuple(delta_expand(Polynomial.monomial(ring.variables, alpha),
                              ring, 1)
                 for alpha in basis.monomials)
    return ModuleMap(source, target, cols)


@lru_cache(maxsize=None)
def iota_sym_to_omega2(ring: RingSpec) -> ModuleMap:
    """Embedding S^2(Omega^1) -> Omega^(2):
    s(d(x_i), d(x_j)) |-> d_2(x_i x_j) - x_i d_2(x_j) - x_j d_2(x_i)."""
    omega1 = omega_presentation(ring, 1)
    source = symmetric_square(omega1)
    target = omega_presentation(ring, 2)
    basis2 = DeltaBasis(ring, 2)
    nvars = len(ring.variables)
    cols = []
    for i in range(nvars):
        for j in range(i, nvars):
            prod_exps = tuple((1 if k == i else 0) + (1 if k == j else 0)
                              for k in range(nvars))
            col = list(delta_expand(
                Polynomial.monomial(ring.variables, prod_exps), ring, 2))
            unit_i = tuple(1 if k == i else 0 for k in range(nvars))
            unit_j = tuple(1 if k == j else 0 for k in range(nvars))
            xi = Polynomial.monomial(ring.variables, unit_i)
            xj = Polynomial.monomial(ring.variables, unit_j)
            col[basis2.index[unit_j]] = col[basis2.index[unit_j]] - xi
            col[basis2.index[unit_i]] = col[basis2.index[unit_i]] - xj
            cols.append(tuple(nf_poly(c, ring) for c in col))
    return ModuleMap(source, target, tuple(cols))


def theta_to_jets(ring: RingSpec, q: int) -> ModuleMap:
    """Factorization Omega^(2q) -> J_q(Omega^(q)) of the q-jet of the
    q-expansion; column at alpha is the jet of the expansion of x^alpha."""
    source = omega_presentation(ring, 2 * q)
    inner = omega_presentation(ring, q)
    target = jq_presentation(inner, q)
    inner_count = inner.ngens
    cols = []
    for alpha in DeltaBasis(ring, 2 * q).monomials:
        r = delta_expand(Polynomial.monomial(ring.variables, alpha), ring, q)
        col = tuple(ring.zero() for _ in range(target.ngens))
        for pos, entry in enumerate(r):
            if entry.is_zero():
                continue
            part = jet_expand(entry, ring, q, pos, inner_count)
            col = tuple(a + b for a, b in zip(col, part))
        cols.append(tuple(nf_poly(c, ring) for c in col))
    return ModuleMap(source, target, tuple(cols))


# ---------------------------------------------------------------------------
# symmetric derivations


@dataclass(frozen=True)
class SymmetricDerivation:
    """Generator images of a derivation Omega^(q) -> S^2(Omega^(q)) obeying
    D(a w) = a D(w) + sym(expansion of a, w)."""

    ring: RingSpec
    q: int
    omega: Presentation
    sym: Presentation
    images: Tuple[FreeElement, ...]

    def __post_init__(self):
        if len(self.images) != self.omega.ngens:
            raise ValueError("need one image per generator")
        for row in self.images:
            if len(row) != self.sym.ngens:
                raise ValueError("image row length does not match S^2")


@dataclass(frozen=True)
class Found:
    derivation: SymmetricDerivation


@dataclass(frozen=True)
class NotFound:
    residual: FreeElement


def _pair_index(n: int) -> Dict[Tuple[int, int], int]:
    out = {}
    for i in range(n):
        for j in range(i, n):
            out[(i, j)] = len(out)
    return out


def _zero_derivation(ring: RingSpec, q: int) -> SymmetricDerivation:
    omega = omega_presentation(ring, q)
    sym = symmetric_square(omega)
    images = tuple(sym.zero_row() for _ in range(omega.ngens))
    return SymmetricDerivation(ring, q, omega, sym, images)


def apply_derivation(d: SymmetricDerivation,
                     element: Sequence[Polynomial]) -> FreeElement:
    """D(sum_t a_t e_t) = sum_t [sym(expansion of a_t, e_t) + a_t D(e_t)]."""
    ring = d.ring
    n = d.omega.ngens
    if len(element) != n:
        raise ValueError("element does not live in Omega^(q)")
    pair = _pair_index(n)
    out = [ring.zero()] * d.sym.ngens
    for t, a in enumerate(element):
        if a.is_zero():
            continue
        for pos, c in enumerate(delta_expand(a, ring, d.q)):
            if c.is_zero():
                continue
            idx = pair[(min(pos, t), max(pos, t))]
            out[idx] = out[idx] + c
        for s_idx, v in enumerate(d.images[t]):
            if not v.is_zero():
                out[s_idx] = out[s_idx] + a * v
    return tuple(nf_poly(p, ring) for p in out)


@lru_cache(maxsize=None)
def symmetric_derivation_solve(ring: RingSpec, q: int = 1):
    """Decide existence of a symmetric derivation by solving for generator
    images: for every relation row m of Omega^(q) the combination
    sym-part(m) + sum_s m_s D(e_s) must lie in the relation span of S^2.
    Returns Found(derivation) or NotFound(residual certificate)."""
    omega = omega_presentation(ring, q)
    sym = symmetric_square(omega)
    if not omega.relations:
        return Found(_zero_derivation(ring, q))
    zero_d = _zero_derivation(ring, q)
    nsym = sym.ngens
    nuk = omega.ngens * nsym
    slack = [(rho, k) for rho in range(len(omega.relations))
             for k in range(len(sym.relations))]
    zero = ring.zero()
    A: List[List[Polynomial]] = []
    b: List[Polynomial] = []
    for rho, m in enumerate(omega.relations):
        leib = apply_derivation(zero_d, m)
        for c in range(nsym):
            row = [zero] * (nuk + len(slack))
            for sigma, coeff in enumerate(m):
                row[sigma * nsym + c] = coeff
            for col, (rho2, k) in enumerate(slack):
                if rho2 == rho:
                    row[nuk + col] = sym.relations[k][c]
            A.append(row)
            b.append(-leib[c])
    out = solve_linear(A, b, ring)
    if isinstance(out, NoSolution):
        return NotFound(out.residual)
    sol = out.column
    images = tuple(tuple(sol[sigma * nsym + c] for c in range(nsym))
                   for sigma in range(omega.ngens))
    return Found(SymmetricDerivation(ring, q, omega, sym, images))


def operator_is_order_at_most(op: Callable[[Polynomial], Sequence[Polynomial]],
                              ring: RingSpec, q: int,
                              max_degree: int = 3) -> bool:
    """Differential-operator order test: all (q+1)-fold commutators of op
    with variable multiplications vanish on monomials up to max_degree."""
    nvars = len(ring.variables)
    monos = [Polynomial.monomial(ring.variables, e)
             for e in _exponent_vectors(nvars, max_degree, 0)]
    for combo in combinations_with_replacement(range(nvars), q + 1):
        for h in monos:
            total: Optional[List[Polynomial]] = None
            for mask in range(1 << (q + 1)):
                inside = [0] * nvars
                outside = [0] * nvars
                bits = 0
                for pos, var in enumerate(combo):
                    if mask >> pos & 1:
                        inside[var] += 1
                        bits += 1
                    else:
                        outside[var] += 1
                inner = Polynomial.monomial(ring.variables, tuple(inside))
                outer = Polynomial.monomial(ring.variables, tuple(outside))
                sign = 1 if (q + 1 - bits) % 2 == 0 else -1
                val = op(inner * h)
                if total is None:
                    total = [ring.zero()] * len(val)
                for i, c in enumerate(val):
                    total[i] = total[i] + (outer * c).scale(sign)
            if any(not nf_poly(c, ring).is_zero() for c in total):
                return False
    return True


def validate_symmetric_derivation(d: SymmetricDerivation,
                                  max_degree: int = 2) -> List[tuple]:
    """Independent checks on a claimed derivation; empty list means clean.

    Checks: (a) the Leibniz constraint on every relation row of Omega^(q)
    and on every ideal multiple of a generator; (b) the induced operator
    h |-> D(expansion of h) has differential order <= q+1; (c) the two
    expansion routes agree on low-degree monomials."""
    from .presentations import element_is_zero, normalize_element

    ring = d.ring
    problems: List[tuple] = []
    rows = list(d.omega.relations)
    for sigma in range(d.omega.ngens):
        for f in ring.ideal:
            row = list(d.omega.zero_row())
            row[sigma] = f
            rows.append(tuple(row))
    for i, row in enumerate(rows):
        value = apply_derivation(d, row)
        if not element_is_zero(d.sym, value):
            problems.append(
                ("relation", i, normalize_element(d.sym, value)))
    def induced(h):
        return apply_derivation(d, delta_expand(h, ring, d.q))
    if not operator_is_order_at_most(induced, ring, d.q + 1, max_degree):
        problems.append(("order", d.q + 1))
    for exps in _exponent_vectors(len(ring.variables), max_degree + 1, 1):
        mono = Polynomial.monomial(ring.variables, exps)
        if delta_expand(mono, ring, d.q) != \
                delta_expand_via_products(mono, ring, d.q):
            problems.append(("expansion", exps))
    return problems


def beta_to_sym(d: SymmetricDerivation) -> ModuleMap:
    """The factorization J_q(Omega^(q)) -> S^2(Omega^(q)) of a symmetric
    derivation through the jet module: the jet symbol at (beta, t) is sent
    to D(x^beta e_t)."""
    ring = d.ring
    jets = jq_presentation(d.omega, d.q)
    cols = []
    for beta in _jet_monomials(ring, d.q):
        mono = Polynomial.monomial(ring.variables, beta)
        for t in range(d.omega.ngens):
            elt = list(d.omega.zero_row())
            elt[t] = mono
            cols.append(apply_derivation(d, tuple(elt)))
    return ModuleMap(jets, d.sym, tuple(cols))


def splitting_t(ring: RingSpec, derivation: Optional[SymmetricDerivation] = None
                ) -> ModuleMap:
    """Retraction t: Omega^(2) -> S^2(Omega^1) with t(iota(s)) = 2 s,
    built from a symmetric derivation (default: zero generator images)."""
    if derivation is None:
        derivation = _zero_derivation(ring, 1)
    if derivation.q != 1:
        raise ValueError("the retraction needs a first-order derivation")
    source = omega_presentation(ring, 2)
    cols = []
    for alpha in DeltaBasis(ring, 2).monomials:
        mono = Polynomial.monomial(ring.variables, alpha)
        cols.append(apply_derivation(derivation,
                                     delta_expand(mono, ring, 1)))
    return ModuleMap(source, derivation.sym, tuple(cols))


# ---------------------------------------------------------------------------
# bounded-degree existence oracle (no Groebner machinery)


def _raw_delta_table(h: Polynomial, q: int) -> Dict[ExpVec, Polynomial]:
    """Unreduced expansion coefficients of h: plain back-substitution of the
    Taylor table over the polynomial ring itself."""
    table = dict(shift_components(h, q, include_constant=False))
    out: Dict[ExpVec, Polynomial] = {}
    zero = Polynomial.zero(h.variables)
    gammas = [g for g in product(range(q + 1), repeat=len(h.variables))
              if 1 <= sum(g) <= q]
    gammas.sort(key=lambda g: (-sum(g), tuple(-c for c in g)))
    for gamma in gammas:
        c = table.get(gamma, zero)
        out[gamma] = c
        if c.is_zero():
            continue
        ranges = [range(e + 1) for e in gamma]
        for eta in product(*ranges):
            if eta == gamma or sum(eta) == 0:
                continue
            mult = 1
            for g, e in zip(gamma, eta):
                mult *= comb(g, e)
            mono = Polynomial.monomial(
                h.variables, tuple(g - e for g, e in zip(gamma, eta)), mult)
            table[eta] = table.get(eta, zero) - c * mono
    return out


def _monomials_of_weight(variables: Tuple[str, ...],
                         weights: Tuple[int, ...], d: int) -> List[ExpVec]:
    if d < 0:
        return []
    out = []
    def rec(prefix, remaining, i):
        if i == len(variables):
            if remaining == 0:
                out.append(tuple(prefix))
            return
        w = weights[i]
        for e in range(remaining // w + 1):
            rec(prefix + [e], remaining - e * w, i + 1)
    rec([], d, 0)
    return out


def _monomials_upto(variables: Tuple[str, ...], bound: int) -> List[ExpVec]:
    return [e for e in product(range(bound + 1), repeat=len(variables))
            if sum(e) <= bound]


def _row_weight(row: Sequence[Polynomial], gen_weights: Sequence[int],
                weights: Tuple[int, ...]) -> Optional[int]:
    """Common weighted degree of a homogeneous row, or None."""
    deg = None
    for entry, g in zip(row, gen_weights):
        if entry.is_zero():
            continue
        h = entry.homogeneous_degree(weights)
        if h is None or (deg is not None and deg != h + g):
            return None
        deg = h + g
    return deg


def symmetric_derivation_oracle(ring: RingSpec, q: int = 1,
                                degree_bound: int = 6) -> bool:
    """Brute-force existence check by undetermined coefficients.

    Looks for polynomial generator images, relation-span multipliers and
    ideal multipliers making the Leibniz constraint an exact polynomial
    identity; the search is a Q-linear system over a bounded monomial
    ansatz (exact weighted degree when the ring is graded, total degree
    <= degree_bound otherwise), solved by Gaussian elimination."""
    omega = omega_presentation(ring, q)
    if not omega.relations:
        return True
    sym = symmetric_square(omega)
    nsym = sym.ngens
    pair = _pair_index(omega.ngens)
    pair_weight = [omega.degrees[i] + omega.degrees[j]
                   for (i, j) in sorted(pair, key=pair.get)]
    basis = DeltaBasis(ring, q)

    # raw Leibniz part of each relation row, never reduced modulo I
    leib_rows: List[List[Polynomial]] = []
    for m in omega.relations:
        acc = [Polynomial.zero(ring.variables) for _ in range(nsym)]
        for sigma, entry in enumerate(m):
            if entry.is_zero():
                continue
            raw = _raw_delta_table(entry, q)
            for pos, eta in enumerate(basis.monomials):
                c = raw[eta]
                if c.is_zero():
                    continue
                idx = pair[(min(pos, sigma), max(pos, sigma))]
                acc[idx] = acc[idx] + c
        leib_rows.append(acc)

    weights = ring.weights
    graded = weights is not None and bool(ring.homogeneous)
    row_degrees: List[Optional[int]] = []
    sym_degrees: List[Optional[int]] = []
    if graded:
        row_degrees = [_row_weight(m, omega.degrees, weights)
                       for m in omega.relations]
        sym_degrees = [_row_weight(l, pair_weight, weights)
                       for l in sym.relations]
        if None in row_degrees or None in sym_degrees:
            graded = False

    def ansatz(forced_degree: Optional[int]) -> List[ExpVec]:
        if graded:
            return _monomials_of_weight(ring.variables, weights, forced_degree)
        return _monomials_upto(ring.variables, degree_bound)

    # unknown polynomial coefficients, bucketed by which polynomial they
    # belong to; each bucket holds (monomial, column) pairs
    buckets: Dict[tuple, List[Tuple[ExpVec, int]]] = {}
    ncols = 0

    def add_unknown(tag, forced_degree):
        nonlocal ncols
        bucket = buckets.setdefault(tag, [])
        for e in ansatz(forced_degree):
            bucket.append((e, ncols))
            ncols += 1

    for sigma in range(omega.ngens):
        for c in range(nsym):
            forced = omega.degrees[sigma] - pair_weight[c] if graded else None
            add_unknown(("img", sigma, c), forced)
    for rho in range(len(omega.relations)):
        for k in range(len(sym.relations)):
            forced = row_degrees[rho] - sym_degrees[k] if graded else None
            add_unknown(("span", rho, k), forced)
        for c in range(nsym):
            for j, f in enumerate(ring.ideal):
                forced = None
                if graded:
                    forced = (row_degrees[rho] - pair_weight[c]
                              - f.homogeneous_degree(weights))
                add_unknown(("ideal", rho, c, j), forced)

    # one equation per monomial coefficient of each (relation, coordinate)
    # identity: Leib + sum img-terms + sum span-terms + sum ideal-terms = 0
    rows: List[Dict[int, Fraction]] = []
    rhs: List[Fraction] = []
    eq_index: Dict[Tuple[int, int, ExpVec], int] = {}

    def eq_row(rho, c, mono) -> Dict[int, Fraction]:
        key = (rho, c, mono)
        if key not in eq_index:
            eq_index[key] = len(rows)
            rows.append({})
            rhs.append(Fraction(0))
        return rows[eq_index[key]]

    def add_term(rho, c, tag, multiplier: Polynomial):
        for e, col in buckets.get(tag, ()):
            for exps, coeff in multiplier.terms.items():
                prod_e = tuple(a + b for a, b in zip(exps, e))
                row = eq_row(rho, c, prod_e)
                row[col] = row.get(col, Fraction(0)) + coeff

    for rho, m in enumerate(omega.relations):
        for c in range(nsym):
            for exps, coeff in leib_rows[rho][c].terms.items():
                eq_row(rho, c, exps)
                rhs[eq_index[(rho, c, exps)]] -= coeff
            for sigma, entry in enumerate(m):
                if not entry.is_zero():
                    add_term(rho, c, ("img", sigma, c), entry)
            for k, l in enumerate(sym.relations):
                if not l[c].is_zero():
                    add_term(rho, c, ("span", rho, k), l[c])
            for j, f in enumerate(ring.ideal):
                add_term(rho, c, ("ideal", rho, c, j), f)

    return _rational_system_solvable(rows, rhs, ncols)


def _rational_system_solvable(rows: List[Dict[int, Fraction]],
                              rhs: List[Fraction], ncols: int) -> bool:
    """Gaussian elimination over Q; True when Ax = b has a solution."""
    m = [[row.get(c, Fraction(0)) for c in range(ncols)] + [b]
         for row, b in zip(rows, rhs)]
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        pv = m[r][col]
        m[r] = [a / pv for a in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return not any(all(a == 0 for a in row[:-1]) and row[-1] != 0
                   for row in m)
