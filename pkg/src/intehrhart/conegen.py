"""Signed half-open cone decompositions and intermediate generating functions.

All decompositions here are exact identities of indicator functions.  They
rest on two facts:

* For a simplicial cone with generators g_j and any vector w = sum b_j g_j
  with at least one b_j > 0, the cones K_j obtained by replacing g_j with w
  (for b_j != 0) satisfy [cone] = sum sgn(b_j) [K_j] up to sets contained in
  finitely many hyperplanes.
* Fix a generic point y and make every facet of every cone closed when y lies
  on its inner side, open otherwise.  Then an identity that holds up to
  hyperplane-supported sets holds exactly for the half-open cones, because
  [K_half-open](x) = lim_{s -> 0+} [K](x + s y).

y is represented symbolically as y0 + s1 e_1 + s2 e_2 + ... with
s1 >> s2 >> ... > 0, so it is generic for every hyperplane at once.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, factorial, prod

from .exactlin import (Subspace, clear_denominators, det, dot, identity, inverse,
                       lattice_det, mat_vec, primitive, projected_lattice, rank,
                       snf, solve, transpose, integer_kernel)
from .steppoly import LinearFormQ, QuasiPolynomial, bernoulli_poly


class DegenerateDirection(ArithmeticError):
    pass


class NonUniformCosetCondition(ValueError):
    pass


class DependentGenerators(ValueError):
    pass


# -- basic cone type -----------------------------------------------------------

@dataclass(frozen=True)
class HalfOpenSimplicialCone:
    """cone(g_1..g_r) with coordinate t_i > 0 where open_flags[i], else t_i >= 0."""
    generators: tuple
    open_flags: tuple
    sign: int = 1

    @classmethod
    def closed(cls, generators, sign=1):
        gens = tuple(tuple(primitive(g)) for g in generators)
        return cls(gens, (False,) * len(gens), sign)

    @property
    def d(self):
        return len(self.generators[0]) if self.generators else 0

    @property
    def r(self):
        return len(self.generators)

    def coordinates(self, x):
        """Coordinates of x in the generators, or None when x is off their span."""
        if self.r == self.d:
            return mat_vec(_dual_basis(self.generators), x)
        G = [list(g) for g in self.generators]
        # least-structure route for lower-dimensional cones
        M = transpose(G)
        if rank(M) != rank([row + [xi] for row, xi in zip(M, x)]):
            return None
        sub = _independent_rows(M)
        lam = solve([M[i] for i in sub], [x[i] for i in sub])
        return lam

    def contains(self, x):
        lam = self.coordinates(x)
        if lam is None:
            return False
        for t, o in zip(lam, self.open_flags):
            if t < 0 or (o and t == 0):
                return False
        return True

    def index(self, lattice=None):
        """|det| of the generators in coordinates of the given lattice basis."""
        G = [list(g) for g in self.generators]
        if lattice is not None:
            Bi = inverse(transpose([list(v) for v in lattice]))
            G = [mat_vec(Bi, g) for g in G]
            G = [primitive(g) for g in G]
        return abs(det(G))


@lru_cache(maxsize=65536)
def _dual_basis(gens):
    return inverse(transpose([list(g) for g in gens]))


def _independent_rows(M):
    rows = []
    for i in range(len(M)):
        if rank([M[j] for j in rows + [i]]) > len(rows):
            rows.append(i)
    return rows


class LexPoint:
    """Symbolic generic point y0 + s1*y1 + s2*y2 + ... (s1 >> s2 >> ... > 0)."""

    def __init__(self, comps):
        self.comps = [list(c) for c in comps]

    @classmethod
    def inside(cls, generators, open_flags=None):
        d = len(generators[0])
        if open_flags is None:
            open_flags = (False,) * len(generators)
        y0 = [Fraction(0)] * d
        for g, o in zip(generators, open_flags):
            s = -1 if o else 1
            y0 = [a + s * b for a, b in zip(y0, g)]
        return cls([y0] + identity(d))

    def sign(self, form):
        for c in self.comps:
            v = dot(form, c)
            if v:
                return 1 if v > 0 else -1
        return 0

    def map(self, f):
        return LexPoint([f(c) for c in self.comps])


def _flags_from(gens, y):
    """Open flag i iff y has a negative i-th coordinate in the basis gens."""
    Gi = inverse(transpose([list(g) for g in gens]))
    out = []
    for row in Gi:
        s = y.sign(row)
        if s == 0:
            raise DegenerateDirection("reference point not generic")
        out.append(s < 0)
    return tuple(out)


def _exchange(gens, sign, w, allowed, y, keep_integral=True):
    """Signed exchange of w into gens at the allowed positions.

    Only the part of w along the allowed generators is inserted.  Returns None
    when that part vanishes; otherwise a list of (gens, flags, sign).
    """
    G = [list(g) for g in gens]
    beta = solve(transpose(G), list(w))
    beta = [b if j in allowed else Fraction(0) for j, b in enumerate(beta)]
    if not any(beta):
        return None
    v = [sum(beta[j] * G[j][i] for j in range(len(G))) for i in range(len(G[0]))]
    if keep_integral:
        pv = primitive(v)
        nz = next(i for i, x in enumerate(v) if x)
        if (pv[nz] > 0) != (v[nz] > 0):
            pv = [-x for x in pv]
        v = pv
    if not any(b > 0 for b in beta):
        v = [-x for x in v]
        beta = [-b for b in beta]
    out = []
    for j, b in enumerate(beta):
        if b == 0:
            continue
        ng = [tuple(g) for g in G]
        ng[j] = tuple(v)
        out.append((tuple(ng), _flags_from(ng, y), sign * (1 if b > 0 else -1)))
    return out


# -- L-adaptation ----------------------------------------------------------------

@dataclass(frozen=True)
class AdaptedCell:
    """Half-open cone whose first ``n_l`` generators span L.

    ``lifts`` are the transverse generators rescaled so that their images in
    V/L are the actual lattice vectors used by the decomposition (equal to the
    stored generators up to positive scaling).  ``vol`` is the covolume factor
    |det_{Lambda ∩ L}(L-part)|.
    """
    cone: HalfOpenSimplicialCone
    n_l: int
    lifts: tuple = ()
    vol: Fraction = Fraction(1)

    @property
    def lpart(self):
        return self.cone.generators[:self.n_l]

    @property
    def transverse(self):
        return self.cone.generators[self.n_l:]


def _reorder(gens, flags, in_l):
    idx = [j for j in range(len(gens)) if in_l[j]] + [j for j in range(len(gens)) if not in_l[j]]
    return tuple(gens[j] for j in idx), tuple(flags[j] for j in idx), sum(in_l)


def adapt_to_subspace(c, L, y=None):
    """Split a full-dimensional simplicial cone into cells with a face parallel to L.

    Returns (cells, lower) where ``lower`` lists lower-dimensional remainders;
    with the half-open construction it is always empty.
    """
    gens = c.generators
    d = c.d
    if y is None:
        y = LexPoint.inside(gens, c.open_flags)
    if c.r != d or rank([list(g) for g in gens]) != d:
        raise DependentGenerators("need d independent generators")
    work = [(gens, c.open_flags, c.sign, frozenset(j for j, g in enumerate(gens) if L.contains_vector(g)))]
    for h in L.basis:
        nxt = []
        for g, fl, sg, lset in work:
            allowed = set(range(d)) - lset
            res = _exchange(g, sg, h, allowed, y)
            if res is None:
                nxt.append((g, fl, sg, lset))
                continue
            for ng, nfl, nsg in res:
                j = next(i for i in range(d) if ng[i] != g[i])
                nxt.append((ng, nfl, nsg, lset | {j}))
        work = nxt
    cells = []
    for g, fl, sg, lset in work:
        in_l = [j in lset for j in range(d)]
        og, ofl, nl = _reorder(g, fl, in_l)
        vol = lattice_det([list(v) for v in og[:nl]], L) if nl else Fraction(1)
        cells.append(AdaptedCell(HalfOpenSimplicialCone(og, ofl, sg), nl, (), vol))
    return cells, []


# -- unimodular decomposition ----------------------------------------------------

def _short_vector(G):
    """Nonzero beta in G^{-1} Z^n with smallest max-norm (then smallest sum)."""
    n = len(G)
    M = transpose(G)  # columns are generators
    D, P, Q = snf(M)
    ds = [D[i][i] for i in range(n)]
    best = None
    for ks in product(*[range(x) for x in ds]):
        if not any(ks):
            continue
        z = [Fraction(k, x) for k, x in zip(ks, ds)]
        beta = [sum(Q[i][j] * z[j] for j in range(n)) for i in range(n)]
        beta = [b - round(b) for b in beta]
        key = (max(abs(b) for b in beta), sum(abs(b) for b in beta))
        if best is None or key < best[0]:
            best = (key, beta)
    beta = best[1]
    v = [sum(beta[j] * G[j][i] for j in range(n)) for i in range(n)]
    return [int(x) for x in v]


def _barvinok(gens, flags, sign, y):
    """Signed half-open unimodular decomposition in Z^n coordinates."""
    out = []
    stack = [(tuple(tuple(g) for g in gens), tuple(flags), sign)]
    while stack:
        g, fl, sg = stack.pop()
        n = len(g)
        if n == 0 or abs(det([list(v) for v in g])) == 1:
            out.append((g, fl, sg))
            continue
        v = _short_vector([list(x) for x in g])
        res = _exchange(g, sg, v, set(range(n)), y)
        for ng, nfl, nsg in res:
            stack.append((ng, nfl, nsg))
    out.sort()
    return out


def unimodularize(c, lattice=None, y=None):
    """Signed half-open decomposition of c into cones unimodular for the lattice."""
    d = c.d
    if rank([list(g) for g in c.generators]) != c.r or c.r != d:
        raise DependentGenerators("need d independent generators")
    B = identity(d) if lattice is None else [list(v) for v in lattice]
    Bt = transpose(B)
    Bi = inverse(Bt)
    to_coords = lambda x: mat_vec(Bi, x)
    gens = [primitive(to_coords(g)) for g in c.generators]
    if y is None:
        y = LexPoint.inside(c.generators, c.open_flags)
    yc = y.map(to_coords)
    res = _barvinok(gens, c.open_flags, c.sign, yc)
    out = []
    for g, fl, sg in res:
        amb = [tuple(primitive(mat_vec(Bt, list(v)))) for v in g]
        out.append(HalfOpenSimplicialCone(tuple(amb), fl, sg))
    return out


def _transverse_cells(cell, L, pl, y):
    """Unimodularize the transverse part of an adapted cell in the projected lattice."""
    nl = cell.n_l
    gens = cell.cone.generators
    tv = [list(g) for g in gens[nl:]]
    n = len(tv)
    if n == 0:
        return [AdaptedCell(cell.cone, nl, (), cell.vol)]
    Pi = [pl.project(g) for g in tv]            # images, integer vectors in Z^n
    yT = y.map(pl.project)
    res = _barvinok(Pi, cell.cone.open_flags[nl:], cell.cone.sign, yT)
    # lift u in Z^n to the span of the transverse generators: v = sum c_j g_j, Pi^T c = u
    PiT_inv = inverse(transpose(Pi))
    out = []
    for ug, fl, sg in res:
        lifts = []
        for u in ug:
            coef = mat_vec(PiT_inv, list(u))
            lifts.append(tuple(sum(coef[j] * tv[j][i] for j in range(n)) for i in range(len(tv[0]))))
        stored = tuple(gens[:nl]) + tuple(tuple(primitive(v)) for v in lifts)
        cone = HalfOpenSimplicialCone(stored, cell.cone.open_flags[:nl] + fl, sg)
        out.append(AdaptedCell(cone, nl, tuple(lifts), cell.vol))
    return out


@lru_cache(maxsize=4096)
def _decompose_cached(gens, flags, sign, L):
    c = HalfOpenSimplicialCone(gens, flags, sign)
    y = LexPoint.inside(gens, flags)
    cells, _ = adapt_to_subspace(c, L, y)
    pl = projected_lattice(L)
    out = []
    for cell in cells:
        out.extend(_transverse_cells(cell, L, pl, y))
    return tuple(out)


def decompose(c, L):
    """Full pipeline: L-adaptation then transverse unimodularization."""
    return list(_decompose_cached(tuple(tuple(g) for g in c.generators), tuple(c.open_flags), c.sign, L))


def collect_psi(c, L):
    """Dual forms (in Lambda* ∩ L^perp) whose fractional parts the series use."""
    out = set()
    for cell in decompose(c, L):
        for g in _transverse_duals(cell):
            out.add(LinearFormQ.from_vector(g))
    return out


def _transverse_duals(cell):
    full = [list(g) for g in cell.lpart] + [list(v) for v in cell.lifts]
    if not cell.lifts:
        return []
    Gi = inverse(transpose(full))
    return [Gi[i] for i in range(cell.n_l, len(full))]


# -- lower-dimensional cones ---------------------------------------------------

@dataclass(frozen=True)
class ReducedProblem:
    """Intermediate sum restated inside W = lin(c) with lattice Lambda ∩ W."""
    W: Subspace
    lattice: tuple          # basis of Lambda ∩ W (ambient coordinates)
    cone: tuple             # generators in lattice coordinates
    L: tuple                # basis of L in lattice coordinates
    shift: tuple            # s(b) in lattice coordinates, an r x N matrix


ZERO = "Zero"


def reduce_lower_dim(c, shift, L):
    """Restate S^L of a lower-dimensional shifted cone, or return ZERO.

    ``shift`` is a d x N matrix (s(b) = shift * b).  Supported when the
    coset condition "s(b) + W meets the lattice" does not depend on b, i.e.
    when the shift maps into W.
    """
    d = c.d
    if c.r >= d:
        raise ValueError("cone is full-dimensional")
    W = Subspace.span([list(g) for g in c.generators], d)
    if not (L <= W):
        return ZERO
    S = [list(r) for r in getattr(shift, "matrix", shift)]
    N = len(S[0]) if S else 0
    for j in range(N):
        col = [S[i][j] for i in range(d)]
        if not W.contains_vector(col):
            raise NonUniformCosetCondition("shift leaves lin(c); coset condition depends on b")
    basis = [list(r) for r in W.basis]
    Bt = transpose(basis)
    # coordinates inside W: solve on independent rows
    rows = _independent_rows(Bt)
    sub = [[Bt[i][j] for j in range(len(basis))] for i in rows]
    Si = inverse(sub)
    coords = lambda x: tuple(sum(Si[a][k] * x[rows[k]] for k in range(len(rows))) for a in range(len(rows)))
    return ReducedProblem(W, tuple(tuple(b) for b in basis),
                          tuple(tuple(primitive(coords(g))) for g in c.generators),
                          tuple(tuple(primitive(coords(v))) for v in L.basis),
                          tuple(zip(*[coords([S[i][j] for i in range(d)]) for j in range(N)])) if N else ())


# -- bivariate Laurent series ------------------------------------------------

class BiLaurentSeries:
    """Truncated Laurent series in (t, eps) with QuasiPolynomial coefficients.

    Coefficients are exact for t-orders <= t_hi and eps-orders <= e_hi; no
    coefficient sits below (t_lo, e_lo).
    """

    __slots__ = ("N", "t_lo", "t_hi", "e_lo", "e_hi", "c")

    def __init__(self, N, t_lo, t_hi, e_lo, e_hi, coeffs=None):
        self.N = N
        self.t_lo, self.t_hi, self.e_lo, self.e_hi = t_lo, t_hi, e_lo, e_hi
        self.c = {}
        for (i, j), q in (coeffs or {}).items():
            if t_lo <= i <= t_hi and e_lo <= j <= e_hi and not q.is_zero():
                self.c[(i, j)] = q

    def coeff(self, i, j=0):
        if not (self.t_lo <= i <= self.t_hi and self.e_lo <= j <= self.e_hi):
            if i < self.t_lo or j < self.e_lo:
                return QuasiPolynomial(self.N)
            raise ValueError("order (%d, %d) beyond truncation" % (i, j))
        return self.c.get((i, j), QuasiPolynomial(self.N))

    def __mul__(self, other):
        t_lo = self.t_lo + other.t_lo
        e_lo = self.e_lo + other.e_lo
        t_hi = min(self.t_hi + other.t_lo, other.t_hi + self.t_lo)
        e_hi = min(self.e_hi + other.e_lo, other.e_hi + self.e_lo)
        out = {}
        for (i1, j1), q1 in self.c.items():
            for (i2, j2), q2 in other.c.items():
                i, j = i1 + i2, j1 + j2
                if i > t_hi or j > e_hi:
                    continue
                q = q1 * q2
                if (i, j) in out:
                    out[(i, j)].iadd(q)
                else:
                    out[(i, j)] = q
        return BiLaurentSeries(self.N, t_lo, t_hi, e_lo, e_hi, out)

    def add(self, other, c=1):
        """self + c*other with the common truncation window."""
        t_lo, e_lo = min(self.t_lo, other.t_lo), min(self.e_lo, other.e_lo)
        t_hi, e_hi = min(self.t_hi, other.t_hi), min(self.e_hi, other.e_hi)
        out = {}
        for k, q in self.c.items():
            out[k] = QuasiPolynomial(self.N, q.terms)
        for k, q in other.c.items():
            if k in out:
                out[k].iadd(q, c)
            else:
                out[k] = q.scale(c)
        return BiLaurentSeries(self.N, t_lo, t_hi, e_lo, e_hi, out)

    def scale(self, c):
        return BiLaurentSeries(self.N, self.t_lo, self.t_hi, self.e_lo, self.e_hi,
                               {k: q.scale(c) for k, q in self.c.items()})

    def orders(self):
        return sorted(self.c)


def _inv_linear(a, c, e_hi):
    """Coefficients of 1/(a + eps*c) by eps-order, valid up to e_hi."""
    if a != 0:
        return {k: (-c) ** k / a ** (k + 1) for k in range(0, e_hi + 1)}
    return {-1: Fraction(1) / c}


def _pow_linear(a, c, n, e_hi):
    return {i: comb(n, i) * a ** (n - i) * c ** i for i in range(0, min(n, e_hi) + 1)}


def cell_series(cell, shift, ell, rho, m_max, e_hi=0):
    """Expansion of e^{-<xi,s(b)>} S^L(s(b) + cell)(xi) at xi = t(ell + eps*rho).

    ``shift`` is a d x N rational matrix (s(b) = shift * b).  The transverse
    generators must project to a basis of the projected lattice.
    """
    S = [list(r) for r in shift]
    N = len(S[0]) if S else 0
    d = cell.cone.d
    nl = cell.n_l
    lp = [list(w) for w in cell.lpart]
    tv = [list(v) for v in cell.lifts]
    ac = [(dot(ell, g), dot(rho, g)) for g in lp + tv]
    for a, c in ac:
        if a == 0 and c == 0:
            raise DegenerateDirection("direction orthogonal to a generator")
    K = sum(1 for a, _ in ac if a == 0)
    t_hi = m_max + d - 1
    duals = _transverse_duals(cell)
    factors = []
    for idx, (a, c) in enumerate(ac):
        K_f = 1 if a == 0 else 0
        fe_hi = e_hi + K - K_f
        if idx < nl:
            inv = _inv_linear(a, c, fe_hi)
            coeffs = {(-1, k): QuasiPolynomial.const(N, -v) for k, v in inv.items() if k <= fe_hi}
            factors.append(BiLaurentSeries(N, -1, t_hi, -K_f, fe_hi, coeffs))
            continue
        j = idx - nl
        gam = duals[j]
        sigma = [sum(gam[i] * S[i][k] for i in range(d)) for k in range(N)]
        closed = not cell.cone.open_flags[idx]
        coeffs = {}
        for n in range(0, t_hi + 2):
            bp = bernoulli_poly(n)
            if closed:
                Bq = QuasiPolynomial.step_poly([-x for x in sigma], bp)
            else:
                Bq = QuasiPolynomial.step_poly(sigma, [(-1) ** n * x for x in bp])
            base = Fraction(-1, factorial(n))
            eps = _inv_linear(a, c, fe_hi) if n == 0 else _pow_linear(a, c, n - 1, fe_hi)
            for k, v in eps.items():
                if k <= fe_hi and v:
                    coeffs[(n - 1, k)] = Bq.scale(base * v)
        factors.append(BiLaurentSeries(N, -1, t_hi, -K_f, fe_hi, coeffs))
    if not factors:
        out = BiLaurentSeries(N, 0, m_max, 0, e_hi, {(0, 0): QuasiPolynomial.const(N, 1)})
    else:
        out = factors[0]
        for f in factors[1:]:
            out = out * f
    return out.scale(cell.vol * cell.cone.sign)


def cone_intermediate_series(c, shift, L, ell, rho, m_max, e_hi=0):
    """M^L(s(b), c)(xi) at xi = t(ell + eps*rho), summed over the decomposition of c."""
    cells = decompose(c, L)
    total = None
    for cell in cells:
        s = cell_series(cell, shift, ell, rho, m_max, e_hi)
        total = s if total is None else total.add(s)
    return total


def integral_of_cone(c, xi):
    """I(c)(xi) = |det G| prod(-1/<xi, g>) for a closed simplicial cone."""
    G = [list(g) for g in c.generators]
    out = abs(det(G))
    for g in G:
        out *= Fraction(-1) / dot(xi, g)
    return out


def direction_sequence(d):
    """Candidate directions (1, r, r^2, ...) for r = 2, 3, 5, ..."""
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
              53, 59, 61, 67, 71, 73, 79, 83, 89, 97]
    for r in primes:
        yield [Fraction(r) ** i for i in range(d)]


def choose_rho(generators, ell, d):
    """First candidate with <ell + eps rho, g> not identically zero for all g."""
    gens = list(generators)
    for rho in direction_sequence(d):
        if all(dot(ell, g) != 0 or dot(rho, g) != 0 for g in gens):
            return rho
    raise DegenerateDirection("no generic direction after 25 candidates")


def choose_generic(generators, d):
    """First candidate with <rho, g> != 0 for every generator (for constant weights)."""
    gens = list(generators)
    for rho in direction_sequence(d):
        if all(dot(rho, g) != 0 for g in gens):
            return rho
    raise DegenerateDirection("no generic direction after 25 candidates")
