"""Brute-force intermediate sums and exact polytope integrals.

Nothing here uses the cone machinery: slices are enumerated directly,
their vertices found by solving subsets of tight constraints, and the
integrals computed on a pulling triangulation.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil, factorial, floor

from .exactlin import (Subspace, as_rat, det, dot, inverse, mat_vec, primitive,
                       projected_lattice, rank, rational_nullspace, solve, transpose)


class ResourceBound(RuntimeError):
    pass


@dataclass(frozen=True)
class VPolytope:
    """Polytope given by points; ``H`` = (A, c) meaning A x <= c, optional."""
    vertices: tuple
    H: tuple = None

    @classmethod
    def from_points(cls, pts):
        return cls(tuple(tuple(as_rat(x) for x in p) for p in pts))

    @classmethod
    def from_h(cls, A, c):
        """Bounded polytope {x : A x <= c}; vertices are computed."""
        A = [[as_rat(x) for x in row] for row in A]
        c = [as_rat(x) for x in c]
        verts = enumerate_vertices(A, c)
        return cls(tuple(verts), (tuple(map(tuple, A)), tuple(c)))

    @property
    def d(self):
        return len(self.vertices[0]) if self.vertices else 0

    def scaled(self, t):
        t = as_rat(t)
        H = None
        if self.H is not None:
            H = (self.H[0], tuple(t * x for x in self.H[1]))
        return VPolytope(tuple(tuple(t * x for x in v) for v in self.vertices), H)


def enumerate_vertices(A, c, eqs=None):
    """Vertices of {x : A x <= c, E x = e} by brute force over tight subsets."""
    d = len(A[0]) if A else 0
    E, e = eqs if eqs else ([], [])
    need = d - rank(E) if E else d
    out = []
    seen = set()
    for J in combinations(range(len(A)), need):
        M = [list(A[j]) for j in J] + [list(r) for r in E]
        rhs = [c[j] for j in J] + list(e)
        if rank(M) < d:
            continue
        sub = _independent(M)
        x = solve([M[i] for i in sub], [rhs[i] for i in sub])
        if any(dot(r, x) != v for r, v in zip(M, rhs)):
            continue
        if all(dot(a, x) <= ci for a, ci in zip(A, c)):
            k = tuple(x)
            if k not in seen:
                seen.add(k)
                out.append(k)
    out.sort()
    return out


def _independent(M):
    rows = []
    for i in range(len(M)):
        if rank([M[j] for j in rows + [i]]) > len(rows):
            rows.append(i)
    return rows


def _affine_dim(pts):
    if not pts:
        return -1
    p0 = pts[0]
    return rank([[a - b for a, b in zip(p, p0)] for p in pts[1:]]) if len(pts) > 1 else 0


def h_description(pts):
    """(A, c, E, e): inequalities and equalities describing conv(pts)."""
    pts = [tuple(as_rat(x) for x in p) for p in pts]
    d = len(pts[0])
    p0 = pts[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in pts[1:]]
    diffs = [r for r in diffs if any(r)]
    E = rational_nullspace(diffs, d) if diffs else [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    E = [primitive(r) for r in E]
    e = [dot(r, p0) for r in E]
    k = d - len(E)
    A, c = [], []
    seen = set()
    if k == 0:
        return A, c, E, e
    for S in combinations(range(len(pts)), k):
        base = pts[S[0]]
        rows = [[a - b for a, b in zip(pts[i], base)] for i in S[1:]] + [list(r) for r in E]
        if rows and rank(rows) != len(rows):
            continue
        ns = rational_nullspace(rows, d) if rows else [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
        if len(ns) != 1:
            continue
        a = primitive(ns[0])
        vals = [dot(a, p) for p in pts]
        m = max(vals)
        if min(vals) == m:
            continue
        for cand, val in ((a, m), ([-x for x in a], -min(vals))):
            vs = [dot(cand, p) for p in pts]
            if val == dot(cand, base) and all(v <= val for v in vs):
                key = tuple(cand)
                if key not in seen:
                    seen.add(key)
                    A.append(list(cand))
                    c.append(val)
    return A, c, E, e


def _triangulate(pts, A, c, idx, dim):
    """Pulling triangulation of the face conv(pts[idx]) of dimension dim."""
    if dim == 0:
        return [[idx[0]]]
    v0 = min(idx, key=lambda i: pts[i])
    facets = set()
    for a, ci in zip(A, c):
        sub = tuple(i for i in idx if dot(a, pts[i]) == ci)
        if v0 in sub or len(sub) < dim or len(sub) == len(idx):
            continue
        if _affine_dim([pts[i] for i in sub]) == dim - 1:
            facets.add(sub)
    out = []
    for f in sorted(facets):
        for s in _triangulate(pts, A, c, list(f), dim - 1):
            out.append([v0] + s)
    return out


def _complete_h(k, m):
    """Complete homogeneous symmetric polynomial h_m at the values k."""
    # h_m(x_1..x_n) via the recurrence over variables
    h = [Fraction(1)] + [Fraction(0)] * m
    for x in k:
        for j in range(1, m + 1):
            h[j] += x * h[j - 1]
    return h[m]


def _integrate_points(pts, A, c, forms):
    """Sum over forms (coeff, f, m) of int coeff * f^m / m! over conv(pts), f affine.

    pts are full-dimensional in their coordinate space; f is given by its values
    function.
    """
    k = len(pts[0])
    verts = [p for p in pts if rank([a for a, ci in zip(A, c) if dot(a, p) == ci] or [[0] * k]) == k]
    if _affine_dim(verts) < k:
        return Fraction(0)
    total = Fraction(0)
    for simp in _triangulate(verts, A, c, list(range(len(verts))), k):
        P = [verts[i] for i in simp]
        vol = abs(det([[a - b for a, b in zip(p, P[0])] for p in P[1:]])) if k else Fraction(1)
        for coeff, f, m in forms:
            vals = [f(p) for p in P]
            total += coeff * vol * _complete_h(vals, m) / factorial(m + k)
    return total


def integrate_polytope(p, ell, m):
    """Integral of <ell, x>^m / m! over p (Lebesgue measure normalized by Z^d)."""
    d = p.d
    A, c, E, e = h_description(p.vertices)
    if E:
        return Fraction(0)
    ell = [as_rat(x) for x in ell]
    pts = [tuple(v) for v in p.vertices]
    return _integrate_points(pts, A, c, [(Fraction(1), lambda x: dot(ell, x), m)])


def brute_intermediate_sum(p, L, h, bound=10 ** 6):
    """Sum over projected lattice points y of the integral of h over p ∩ (y + L)."""
    d = p.d
    if not p.vertices:
        return Fraction(0)
    if p.H is not None:
        A = [list(r) for r in p.H[0]]
        c = list(p.H[1])
        E, e = [], []
        if _affine_dim([list(v) for v in p.vertices]) < d:
            A, c, E, e = h_description(p.vertices)
    else:
        A, c, E, e = h_description(p.vertices)
    pl = projected_lattice(L)
    W = [list(r) for r in L.basis]
    Z = [list(r) for r in pl.complement]
    ell_dim = L.dim
    # box on the projected coordinates
    proj = [pl.project(v) for v in p.vertices]
    lo = [ceil(min(q[k] for q in proj)) for k in range(d - ell_dim)]
    hi = [floor(max(q[k] for q in proj)) for k in range(d - ell_dim)]
    count = 1
    for a, b in zip(lo, hi):
        count *= max(0, b - a + 1)
    if count > bound:
        raise ResourceBound("%d projected lattice points exceed the bound" % count)
    terms = [(as_rat(cf), [as_rat(x) for x in l], m) for cf, l, m in h]
    AW = [[dot(a, w) for w in W] for a in A]
    EW = [[dot(r, w) for w in W] for r in E]
    if ell_dim and any(any(row) for row in EW):
        return Fraction(0)
    total = Fraction(0)

    def rec(k, beta):
        nonlocal total
        if k == len(lo):
            base = [sum(bk * z[i] for bk, z in zip(beta, Z)) for i in range(d)]
            if any(dot(r, base) != v for r, v in zip(E, e)):
                return
            if ell_dim == 0:
                if all(dot(a, base) <= ci for a, ci in zip(A, c)):
                    for cf, l, m in terms:
                        total += cf * dot(l, base) ** m / factorial(m)
                return
            rhs = [ci - dot(a, base) for a, ci in zip(A, c)]
            verts = enumerate_vertices(AW, rhs)
            if len(verts) <= ell_dim:
                return
            forms = []
            for cf, l, m in terms:
                lw = [dot(l, w) for w in W]
                off = dot(l, base)
                forms.append((cf, (lambda lw, off: lambda a: dot(lw, a) + off)(lw, off), m))
            total += _integrate_points(verts, AW, rhs, forms)
            return
        for v in range(lo[k], hi[k] + 1):
            rec(k + 1, beta + [v])

    rec(0, [])
    return total


def indicator_check(cells, target, points):
    """True iff sum of sign * [cell](x) equals [target](x) at every point."""
    for x in points:
        lhs = sum(cell.sign for cell in cells if cell.contains(x))
        if lhs != (1 if target.contains(x) else 0):
            return False
    return True
