"""Parametric polytopes p(b) = {x : <mu_j, x> <= b_j}, their chambers, and
the quasi-polynomials attached to a chamber.

Every builder sums, over the vertices s_B(b) of p(b), the expansion of
e^{<xi, s_B(b)>} M^L(s_B(b), c_B)(xi) at xi = t(ell + eps*rho), then reads off
the t^m, eps^0 coefficient after checking that negative eps-orders cancel.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, factorial

from .conegen import (HalfOpenSimplicialCone, choose_generic, choose_rho,
                      cone_intermediate_series, decompose)
from .exactlin import (Subspace, as_rat, det, dot, identity, inverse, mat_mul,
                       primitive, rank, rational_nullspace, snf, transpose, integer_kernel)
from .patchwork import barvinok_family, patching_rho, rho_cone_closed_form
from .steppoly import QuasiPolynomial, qp_eval


class OnWall(ValueError):
    pass


class EmptyChamber(ValueError):
    pass


class Unbounded(ValueError):
    pass


class NotSimple(ValueError):
    pass


class OutsideClosure(ValueError):
    pass


class NormalsInsufficient(ValueError):
    pass


class ResidueCancellationFailure(ArithmeticError):
    pass


class Weight:
    """h(x) = sum of c * <ell, x>^m / m! over the stored terms."""

    def __init__(self, terms):
        self.terms = tuple((as_rat(c), tuple(as_rat(x) for x in ell), int(m)) for c, ell, m in terms)
        for _, _, m in self.terms:
            if m < 0:
                raise ValueError("powers must be nonnegative")

    @classmethod
    def one(cls, d):
        return cls([(1, [0] * d, 0)])

    @classmethod
    def power(cls, ell, m, c=1):
        return cls([(c, ell, m)])

    def __iter__(self):
        return iter(self.terms)

    @property
    def degree(self):
        return max((m for _, _, m in self.terms), default=0)

    def __call__(self, x):
        return sum(c * dot(ell, x) ** m / factorial(m) for c, ell, m in self.terms)


@dataclass(frozen=True)
class ParametricPolytope:
    mu: tuple

    def __init__(self, mu):
        rows = tuple(tuple(int(x) for x in r) for r in mu)
        object.__setattr__(self, "mu", rows)
        if not rows or rank([list(r) for r in rows]) != len(rows[0]):
            raise Unbounded("the forms mu_j do not span the dual space")
        ray = _recession_ray(rows)
        if ray is not None:
            raise Unbounded("p(b) is unbounded along %s" % (ray,))

    @property
    def d(self):
        return len(self.mu[0])

    @property
    def N(self):
        return len(self.mu)

    def contains(self, b, x):
        return all(dot(r, x) <= bj for r, bj in zip(self.mu, b))


def _recession_ray(rows):
    """A nonzero x with mu x <= 0, or None.  The cone is pointed, so an extreme ray suffices."""
    d = len(rows[0])
    for J in combinations(range(len(rows)), d - 1):
        sub = [list(rows[j]) for j in J]
        if d > 1 and rank(sub) != d - 1:
            continue
        ns = rational_nullspace(sub, d) if sub else identity(d)
        if len(ns) != 1:
            continue
        for s in (1, -1):
            x = [s * v for v in ns[0]]
            if all(dot(r, x) <= 0 for r in rows):
                return tuple(x)
    return None


@dataclass(frozen=True)
class BasisSubset:
    """B with mu_B invertible; ``shift`` is s_B as a d x N matrix, ``cone`` the tangent cone c_B."""
    indices: tuple
    shift: tuple
    cone: HalfOpenSimplicialCone

    def vertex(self, b):
        return tuple(sum(row[k] * as_rat(b[k]) for k in range(len(b))) for row in self.shift)


def vertex_map(pp, B):
    d, N = pp.d, pp.N
    muB = [list(pp.mu[j]) for j in B]
    inv = inverse(muB)
    S = [[Fraction(0)] * N for _ in range(d)]
    for col, j in enumerate(B):
        for i in range(d):
            S[i][j] = inv[i][col]
    return S


def enumerate_bases(pp):
    out = []
    d = pp.d
    for B in combinations(range(pp.N), d):
        muB = [list(pp.mu[j]) for j in B]
        if det(muB) == 0:
            continue
        S = vertex_map(pp, B)
        inv = inverse(muB)
        gens = [primitive([-inv[i][c] for i in range(d)]) for c in range(d)]
        out.append(BasisSubset(B, tuple(tuple(r) for r in S), HalfOpenSimplicialCone.closed(gens)))
    return out


@dataclass(frozen=True)
class Chamber:
    bases: tuple
    sample: tuple

    @property
    def index_sets(self):
        return [B.indices for B in self.bases]


def slacks(pp, B, b):
    v = B.vertex(b)
    return {k: as_rat(b[k]) - dot(pp.mu[k], v) for k in range(pp.N) if k not in B.indices}


def chamber_of(pp, b):
    b = tuple(as_rat(x) for x in b)
    if len(b) != pp.N:
        raise ValueError("parameter vector has the wrong length")
    chosen = []
    for B in enumerate_bases(pp):
        sl = slacks(pp, B, b)
        if any(v == 0 for v in sl.values()):
            raise OnWall("b lies on a wall (basis %s)" % (B.indices,))
        if all(v > 0 for v in sl.values()):
            chosen.append(B)
    if not chosen:
        raise EmptyChamber("no vertex is feasible at b")
    return Chamber(tuple(chosen), b)


def in_closure(pp, chamber, b):
    return all(v >= 0 for B in chamber.bases for v in slacks(pp, B, b).values())


def chamber_near(pp, b, tries=40):
    """A chamber whose closure contains b: b itself, or a small generic perturbation."""
    b = tuple(as_rat(x) for x in b)
    try:
        return chamber_of(pp, b)
    except OnWall:
        pass
    for r in (2, 3, 5, 7, 11, 13, 17, 19):
        direction = [Fraction(r) ** i for i in range(pp.N)]
        for e in range(1, tries):
            delta = Fraction(1, 10 ** e)
            cand = tuple(x + delta * y for x, y in zip(b, direction))
            try:
                ch = chamber_of(pp, cand)
            except (OnWall, EmptyChamber):
                continue
            if in_closure(pp, ch, b):
                return ch
    raise OnWall("no chamber found around b")


# -- assembly ---------------------------------------------------------------

def _compose(S, T):
    if T is None:
        return [list(r) for r in S]
    return mat_mul([list(r) for r in S], [list(r) for r in T])


def _cell_generators(pieces):
    gens = []
    for B, L, _ in pieces:
        for cell in decompose(B.cone, L):
            gens.extend(cell.lpart)
            gens.extend(cell.lifts)
    return gens


def _linear_qp(form, S):
    N = len(S[0])
    return QuasiPolynomial.linear([sum(form[i] * S[i][k] for i in range(len(S))) for k in range(N)])


def chamber_points(pp, chamber, T=None, count=200, seed=20240501):
    """Sample parameters where the chamber formula holds: b in the chamber, or t > 0 under T."""
    rng = random.Random(seed)
    out = []
    if T is not None:
        q = len(T[0])
        return [[Fraction(rng.randint(1, 400), rng.randint(1, 60)) for _ in range(q)] for _ in range(count)]
    want = chamber.index_sets
    for _ in range(50 * count):
        s = Fraction(rng.randint(1, 300), rng.randint(1, 30))
        b = [s * (x + Fraction(rng.randint(-5, 5), rng.randint(20, 200))) for x in chamber.sample]
        try:
            if chamber_of(pp, b).index_sets == want:
                out.append(b)
        except (OnWall, EmptyChamber):
            continue
        if len(out) == count:
            break
    return out


def _is_zero(q, points):
    return q.is_zero() or all(qp_eval(q, b) == 0 for b in points)


def vertex_sum_laurent(pp, pieces, ell, m, T=None, poles=False):
    """{(a, j): coefficient of t^a eps^j} of the summed vertex series at xi = t(ell + eps rho).

    Always holds a = m for j <= 0 (the entry (m, 0) is the answer); with ``poles`` also
    every a < 0.  By analyticity all entries with a < 0 or j < 0 vanish.
    """
    d = pp.d
    N = pp.N if T is None else len(T[0])
    gens = _cell_generators(pieces)
    if m == 0:
        ell = choose_generic(gens, d)
        rho = [0] * d
    else:
        rho = choose_rho(gens, ell, d)
    by_basis = {}
    for B, L, coef in pieces:
        S = _compose(B.shift, T)
        ser = cone_intermediate_series(B.cone, S, L, ell, rho, m, 0)
        if coef != 1:
            ser = ser.scale(coef)
        key = B.indices
        by_basis[key] = (B, S, ser if key not in by_basis else by_basis[key][2].add(ser))
    e_lo = min((ser.e_lo for _, _, ser in by_basis.values()), default=0)
    t_lo = min((ser.t_lo for _, _, ser in by_basis.values()), default=0)
    orders = [m] + (list(range(t_lo, min(0, m))) if poles else [])
    total = {(a, j): QuasiPolynomial(N) for a in orders for j in range(e_lo, 1)}
    top = m + d
    for B, S, ser in by_basis.values():
        A = _linear_qp(ell, S)
        C = _linear_qp(rho, S)
        Ap = [QuasiPolynomial.const(N, 1)]
        Cp = [QuasiPolynomial.const(N, 1)]
        for _ in range(top):
            Ap.append(Ap[-1] * A)
            Cp.append(Cp[-1] * C)
        for (a, j), acc in total.items():
            for r in range(0, min(a - ser.t_lo, top) + 1):
                for i in range(0, r + 1):
                    if i and not any(rho):
                        continue
                    q = ser.coeff(a - r, j - i) if j - i >= ser.e_lo else None
                    if q is None or q.is_zero():
                        continue
                    acc.iadd(q * Ap[r - i] * Cp[i], Fraction(comb(r, i), factorial(r)))
    return total


def _assemble_term(pp, chamber, pieces, ell, m, T):
    total = vertex_sum_laurent(pp, pieces, ell, m, T)
    points = None
    for (a, j), q in sorted(total.items()):
        if j >= 0 or q.is_zero():
            continue
        if points is None:
            points = chamber_points(pp, chamber, T)
        if not _is_zero(q, points):
            raise ResidueCancellationFailure("eps^%d coefficient of the vertex sum is nonzero" % j)
    return total[(m, 0)]


def _assemble(pp, chamber, pieces, h, T):
    N = pp.N if T is None else len(T[0])
    out = QuasiPolynomial(N)
    for c, ell, m in h:
        q = _assemble_term(pp, chamber, pieces, list(ell), m, T)
        out.iadd(q, c)
        if q.degrees()[2] > pp.d + m:
            raise ArithmeticError("local degree exceeds d + m")
    return out


def intermediate_ehrhart_qp(pp, chamber, L, h, param_map=None):
    """E^L(mu, h, tau) as a quasi-polynomial in b (or in t when b = param_map * t)."""
    return _assemble(pp, chamber, [(B, L, 1) for B in chamber.bases], h, param_map)


def barvinok_family_of(pp, chamber, k):
    return barvinok_family(pp.mu, chamber.index_sets, k, pp.d)


def barvinok_patched_qp(pp, chamber, k, h, param_map=None):
    if not 0 <= k <= pp.d:
        raise ValueError("need 0 <= k <= d")
    return _assemble(pp, chamber, barvinok_pieces(pp, chamber, k), h, param_map)


def barvinok_pieces(pp, chamber, k):
    fam = barvinok_family_of(pp, chamber, k)
    rho = patching_rho(fam)
    return [(B, L, rho[L]) for L in fam.members if rho[L] for B in chamber.bases]


def _check_simple(pp, chamber, b=None):
    b = chamber.sample if b is None else b
    verts = {B.vertex(b) for B in chamber.bases}
    if len(verts) != len(chamber.bases):
        raise NotSimple("p(b) is not simple at %s" % (tuple(b),))


def cone_by_cone_pieces(pp, chamber, k):
    d = pp.d
    pieces = []
    for B in chamber.bases:
        gens = B.cone.generators
        for size in range(max(d - k, 0), d + 1):
            w = rho_cone_closed_form(d, k, size)
            if w == 0:
                continue
            for I in combinations(range(d), size):
                L = Subspace.span([list(gens[i]) for i in I], d) if I else Subspace.zero(d)
                pieces.append((B, L, w))
    return pieces


def cone_by_cone_qp(pp, chamber, k, h, param_map=None):
    if not 0 <= k <= pp.d:
        raise ValueError("need 0 <= k <= d")
    _check_simple(pp, chamber)
    return _assemble(pp, chamber, cone_by_cone_pieces(pp, chamber, k), h, param_map)


def chamber_qp(pp, chamber, variant, h, k=None, L=None, param_map=None):
    if variant == "exact":
        return intermediate_ehrhart_qp(pp, chamber, L if L is not None else Subspace.zero(pp.d), h, param_map)
    if variant == "barvinok":
        return barvinok_patched_qp(pp, chamber, k, h, param_map)
    if variant == "conebycone":
        return cone_by_cone_qp(pp, chamber, k, h, param_map)
    raise ValueError("unknown variant %r" % (variant,))


def dilation_qp(pp, chamber, b0, variant, h, k=None, L=None):
    """Quasi-polynomial in t for p(t * b0), t >= 0."""
    b0 = [as_rat(x) for x in b0]
    if not in_closure(pp, chamber, b0):
        raise OutsideClosure("b0 is not in the closure of the chamber")
    if variant == "conebycone":
        _check_simple(pp, chamber, b0)
    T = [[x] for x in b0]
    return chamber_qp(pp, chamber, variant, h, k, L, T)


def linear_system_qp(pp, chamber, bs, variant, h, k=None, L=None):
    """Quasi-polynomial in (t_1..t_q) for p(t_1 b^1 + ... + t_q b^q)."""
    for b in bs:
        if not in_closure(pp, chamber, b):
            raise OutsideClosure("a parameter vector is not in the closure of the chamber")
    if variant == "conebycone":
        _check_simple(pp, chamber, [sum(as_rat(b[j]) for b in bs) for j in range(pp.N)])
    T = [[as_rat(b[j]) for b in bs] for j in range(pp.N)]
    return chamber_qp(pp, chamber, variant, h, k, L, T)


# -- constructions ------------------------------------------------------------

def simplex_system(vertices):
    """(pp, b) with p(b) the simplex on the given d+1 affinely independent points."""
    V = [[as_rat(x) for x in v] for v in vertices]
    d = len(V[0])
    if len(V) != d + 1:
        raise ValueError("need d+1 vertices")
    mu, b = [], []
    for i in range(d + 1):
        others = [V[j] for j in range(d + 1) if j != i]
        rows = [[a - c for a, c in zip(o, others[0])] for o in others[1:]]
        ns = rational_nullspace(rows, d) if rows else identity(d)
        if len(ns) != 1:
            raise ValueError("vertices are affinely dependent")
        n = primitive(ns[0])
        if dot(n, V[i]) > dot(n, others[0]):
            n = [-x for x in n]
        mu.append([int(x) for x in n])
        b.append(dot(n, others[0]))
    return ParametricPolytope(mu), b


def minkowski_support(vertex_lists, pp):
    """Support vectors b^i with p(b^i) = conv(vertex_lists[i]) for the normals of pp."""
    bases = enumerate_bases(pp)
    out = []
    for pts in vertex_lists:
        pts = [tuple(as_rat(x) for x in p) for p in pts]
        if not pts:
            raise ValueError("empty vertex list")
        b = tuple(max(dot(r, p) for p in pts) for r in pp.mu)
        verts = set()
        for B in bases:
            v = B.vertex(b)
            if pp.contains(b, v):
                verts.add(v)
        given = set(pts)
        if not verts <= given or not all(pp.contains(b, p) for p in given):
            raise NormalsInsufficient("the normals do not reproduce %s" % (pts,))
        out.append(b)
    return out


def partition_to_parametric(Phi, lam):
    """(pp, b, K): p(pp, b) maps onto {y >= 0 : Phi y = lam} via a -> K a + b."""
    Phi = [[int(x) for x in r] for r in Phi]
    n = len(Phi[0])
    lam = [as_rat(x) for x in lam]
    if rank(Phi) != len(Phi):
        raise ValueError("Phi must have full row rank")
    K = integer_kernel(Phi, n)       # list of basis vectors of ker Phi ∩ Z^n
    if not K:
        raise ValueError("kernel is trivial")
    mu = [[-K[i][j] for i in range(len(K))] for j in range(n)]
    pp = ParametricPolytope(mu)
    D, P, Q = snf(Phi)
    Pl = [sum(P[i][j] * lam[j] for j in range(len(lam))) for i in range(len(lam))]
    z = [Fraction(0)] * n
    for i in range(len(Phi)):
        z[i] = Pl[i] / D[i][i]
    b = [sum(Q[i][j] * z[j] for j in range(n)) for i in range(n)]
    return pp, b, K
