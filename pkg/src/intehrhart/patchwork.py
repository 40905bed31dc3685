"""Sum-closed subspace families and their patching functions."""

from collections import Counter
from fractions import Fraction
from itertools import combinations
from math import comb, factorial

from .exactlin import DimensionMismatch, Subspace, integer_kernel


class SubspaceFamily:
    """Finite set of subspaces of Q^d closed under sum, ordered by inclusion."""

    def __init__(self, members, d):
        self.d = d
        self.members = tuple(sorted(set(members), key=lambda L: (L.dim, L.basis)))
        for L in self.members:
            if L.d != d:
                raise DimensionMismatch("family members live in different spaces")
        keys = set(self.members)
        for a, b in combinations(self.members, 2):
            if a + b not in keys:
                raise ValueError("family is not closed under sum")

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, L):
        return L in set(self.members)


def close_under_sum(subspaces, d=None):
    subspaces = list(subspaces)
    if d is None:
        d = subspaces[0].d
    fam = set()
    for L in subspaces:
        if L.d != d:
            raise DimensionMismatch("family members live in different spaces")
        fam.add(L)
    frontier = list(fam)
    while frontier:
        new = []
        current = list(fam)
        for a in frontier:
            for b in current:
                s = a + b
                if s not in fam:
                    fam.add(s)
                    new.append(s)
                    current.append(s)
        frontier = new
    return SubspaceFamily(fam, d)


def patching_rho(fam):
    """rho(L) = -mu(0, L) on the family with a bottom element adjoined."""
    rho = {}
    for L in fam.members:  # sorted by dimension, so strict subspaces come first
        below = sum(rho[K] for K in rho if K.dim < L.dim and K <= L)
        rho[L] = 1 - below
    return rho


def indicator_union(fam, rho, xi):
    """(sum_L rho(L) [xi in L^perp], [xi in union of L^perp]) at a dual point."""
    lhs = 0
    hit = False
    for L in fam.members:
        inside = all(sum(a * b for a, b in zip(r, xi)) == 0 for r in L.basis)
        if inside:
            lhs += rho[L]
            hit = True
    return lhs, int(hit)


def rho_cone_closed_form(d, k, cardI):
    if not (0 <= k <= d) or not (d - k <= cardI <= d) or cardI < 0:
        raise ValueError("need 0 <= k <= d and d-k <= |I| <= d")
    if d - k == 0:
        # family contains {0}; the bottom is then the only nonzero value
        return 1 if cardI == 0 else 0
    return (-1) ** (cardI - d + k) * comb(cardI - 1, d - k - 1)


# -- power series helpers -------------------------------------------------------

def _series_log(a, order):
    """log of a power series with a[0] = 1, up to z^order."""
    a = list(a) + [Fraction(0)] * (order + 1 - len(a))
    out = [Fraction(0)] * (order + 1)
    # (log a)' = a'/a  =>  n c_n = n a_n - sum_{k=1}^{n-1} k c_k a_{n-k}
    for n in range(1, order + 1):
        s = n * a[n] - sum(k * out[k] * a[n - k] for k in range(1, n))
        out[n] = s / n
    return out


def _series_exp(c, order):
    c = list(c) + [Fraction(0)] * (order + 1 - len(c))
    out = [Fraction(0)] * (order + 1)
    out[0] = Fraction(1)
    # e' = c' e  =>  n e_n = sum_{k=1}^n k c_k e_{n-k}
    for n in range(1, order + 1):
        out[n] = sum(k * c[k] * out[n - k] for k in range(1, n + 1)) / n
    return out


def sigma_single(d, k, m):
    """m! times the z^m coefficient of -log(sum_{p<=d-k} z^p/p!)."""
    a = [Fraction(1, factorial(p)) for p in range(d - k + 1)]
    lg = _series_log(a, m)
    return -lg[m] * factorial(m)


def sigma_simplex(d, k, blocks):
    blocks = list(blocks)
    if not (0 <= k <= d - 1):
        raise ValueError("need 0 <= k <= d-1")
    if not blocks or any(n < d - k + 1 for n in blocks) or sum(blocks) > d + 1:
        raise ValueError("block sizes must be >= d-k+1 with total <= d+1")
    out = Fraction((-1) ** (len(blocks) - 1))
    for n in blocks:
        out *= sigma_single(d, k, n)
    assert out.denominator == 1
    return int(out)


def mobius_top(N, n):
    """mu(0, {[N]}) in the subpartition poset with blocks of size >= n."""
    mu = {}
    for M in range(n, N + 1):
        total = Fraction(1)  # the empty subpartition
        for tp in _types(M, n):
            if tp == (M,):
                continue
            cnt = factorial(M)
            for s in tp:
                cnt //= factorial(s)
            for mult in Counter(tp).values():
                cnt //= factorial(mult)
            cnt //= factorial(M - sum(tp))
            v = Fraction(1)
            for s in tp:
                v *= mu[s]
            total += cnt * v
        mu[M] = -total
    return mu.get(N, Fraction(0))


def _types(M, n, maxpart=None):
    """Multisets of block sizes >= n with total <= M (nonincreasing tuples, nonempty)."""
    if maxpart is None:
        maxpart = M
    out = []
    for first in range(min(M, maxpart), n - 1, -1):
        out.append((first,))
        for rest in _types(M - first, n, first):
            out.append((first,) + rest)
    return out


def bjorner_lovasz_series(n, order):
    """Coefficients of F_n(z) = sum_N mu_N(n) z^N / N! up to z^order."""
    c = [Fraction(0)] * (order + 1)
    for N in range(1, order + 1):
        if N == 1:
            mu = Fraction(1)
        elif N < n:
            mu = Fraction(0)
        else:
            mu = mobius_top(N, n)
        c[N] = Fraction(mu) / factorial(N)
    return c


def bjorner_lovasz_identity(n, order=12):
    if n < 2:
        raise ValueError("the identity needs block size n >= 2")
    lhs = _series_exp(bjorner_lovasz_series(n, order), order)
    rhs = [Fraction(1, factorial(N)) if N <= n - 1 else Fraction(0) for N in range(order + 1)]
    return lhs == rhs


# -- families built from faces ------------------------------------------------

def barvinok_family(mu, bases, k, d):
    """Sum-closure of lin(faces) of codimension <= k at a simple vertex set.

    ``bases`` are the index sets of tight walls at the vertices; a face of
    codimension c is a c-subset J of such a set, with lin = ker(mu_J).
    """
    faces = set()
    for B in bases:
        for c in range(0, k + 1):
            for J in combinations(sorted(B), c):
                faces.add(J)
    subs = []
    for J in sorted(faces):
        rows = [list(mu[j]) for j in J]
        subs.append(Subspace.span(integer_kernel(rows, d), d) if rows else Subspace.full(d))
    return close_under_sum(subs, d)


def cone_family(generators, k):
    """[(L_I, I)] for the face spans of a simplicial cone with |I| >= d - k."""
    d = len(generators)
    out = []
    for size in range(max(d - k, 0), d + 1):
        for I in combinations(range(d), size):
            L = Subspace.span([list(generators[i]) for i in I], len(generators[0])) if I \
                else Subspace.zero(len(generators[0]))
            out.append((L, I))
    return out


def family_from_faces(source, k):
    """Barvinok variant: source = ("barvinok", mu, bases, d); cone variant: ("cone", generators)."""
    kind = source[0]
    if kind == "barvinok":
        _, mu, bases, d = source
        return barvinok_family(mu, bases, k, d)
    if kind == "cone":
        gens = source[1]
        d = len(gens[0])
        return close_under_sum([L for L, _ in cone_family(gens, k)], d)
    raise ValueError("unknown family source %r" % (kind,))


def subpartitions(N, n):
    """All subpartitions of {0..N-1} with blocks of size >= n (nonempty)."""
    out = []

    def rec(start, used, blocks):
        if blocks:
            out.append(tuple(blocks))
        for first in range(start, N):
            if first in used:
                continue
            rest = [x for x in range(first + 1, N) if x not in used]
            for size in range(n - 1, len(rest) + 1):
                for tail in combinations(rest, size):
                    blk = (first,) + tail
                    rec(first + 1, used | set(blk), blocks + [blk])

    rec(0, frozenset(), [])
    return out


def simplex_subspace(vertices, blocks):
    """L_I = sum over blocks of the direction spaces of the faces conv(vertices[I_j])."""
    d = len(vertices[0])
    vecs = []
    for blk in blocks:
        v0 = vertices[blk[0]]
        vecs.extend([[a - b for a, b in zip(vertices[i], v0)] for i in blk[1:]])
    return Subspace.span(vecs, d) if vecs else Subspace.zero(d)
