"""Exact rational linear algebra and lattice normal forms.

Matrices are plain lists of rows.  Integer routines take and return Python
ints; rational routines work with ``fractions.Fraction``.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

Rat = Fraction


class ZeroVector(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


def as_rat(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    if not A:
        return []
    nb = len(B[0]) if B else 0
    Bt = list(zip(*B)) if B else [()] * nb
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def mat_vec(A, v):
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)]


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _row_echelon(M):
    """Fraction row echelon form; returns (rows, pivot columns, sign of swaps)."""
    A = [[as_rat(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    pivots = []
    sign = 1
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if A[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            A[r], A[p] = A[p], A[r]
            sign = -sign
        piv = A[r][c]
        for i in range(r + 1, m):
            if A[i][c]:
                f = A[i][c] / piv
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A, pivots, sign


def rank(M):
    if not M:
        return 0
    return len(_row_echelon(M)[1])


def det(M):
    n = len(M)
    if n == 0:
        return Fraction(1)
    A, piv, sign = _row_echelon(M)
    if len(piv) < n:
        return Fraction(0)
    out = Fraction(sign)
    for i in range(n):
        out *= A[i][i]
    return out


def inverse(M):
    n = len(M)
    A = [[as_rat(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [row[n:] for row in A]


def solve(M, v):
    """Solve M x = v for square invertible M."""
    return mat_vec(inverse(M), v)


def rational_nullspace(M, n=None):
    """Basis (as rows) of {x : M x = 0} over Q."""
    if n is None:
        n = len(M[0])
    if not M:
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    A = [[as_rat(x) for x in row] for row in M]
    m = len(A)
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        A[r] = [x / piv for x in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            x[pc] = -A[i][f]
        basis.append(x)
    return basis


def clear_denominators(v):
    """Smallest positive integer multiple of a rational vector that is integral."""
    v = [as_rat(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    return [int(x * den) for x in v]


def primitive(v):
    """Divide a nonzero integer (or rational) vector by the gcd of its entries."""
    w = clear_denominators(v)
    g = 0
    for x in w:
        g = gcd(g, x)
    if g == 0:
        raise ZeroVector("primitive() of the zero vector")
    return [x // g for x in w]


# -- Hermite and Smith normal forms ------------------------------------------

def hnf(M):
    """Row-style Hermite normal form.

    Returns (H, U) with H = U*M, U unimodular, pivots positive and the
    entries above each pivot reduced into [0, pivot).  Zero rows sit at the
    bottom.
    """
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if A[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(A[i][c]))
            if p != r:
                A[r], A[p] = A[p], A[r]
                U[r], U[p] = U[p], U[r]
            clean = True
            for i in range(r + 1, m):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
                    if A[i][c]:
                        clean = False
            if clean:
                break
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
        piv = A[r][c]
        for i in range(r):
            q = A[i][c] // piv
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    return A, U


def snf(M):
    """Smith normal form: (D, P, Q) with D = P*M*Q diagonal, d_i | d_{i+1}."""
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    P = identity(m)
    Q = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        P[i], P[j] = P[j], P[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in Q:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        A[dst] = [x - q * y for x, y in zip(A[dst], A[src])]
        P[dst] = [x - q * y for x, y in zip(P[dst], P[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in A:
            row[dst] -= q * row[src]
        for row in Q:
            row[dst] -= q * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            piv = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // piv)
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, A[t][j] // piv)
                    dirty = dirty or A[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % piv), None)
            if bad is None:
                break
            # pull the offending row up so the next pass lowers the pivot
            add_row(t, bad[0], -1)
        if t < m and t < n and A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            P[t] = [-x for x in P[t]]
    return A, P, Q


def int_inverse(U):
    """Inverse of a unimodular integer matrix, as ints."""
    inv = inverse(U)
    return [[int(x) for x in row] for row in inv]


def saturate(rows, d):
    """Basis of (Q-span of rows) ∩ Z^d, as integer rows (not yet canonical)."""
    M = [clear_denominators(r) for r in rows if any(x != 0 for x in r)]
    if not M:
        return []
    D, P, Q = snf(M)
    r = sum(1 for i in range(min(len(D), d)) if D[i][i] != 0)
    Qi = int_inverse(Q)
    return [Qi[i] for i in range(r)]


def integer_kernel(rows, d):
    """Saturated integer basis of {x in Z^d : <row, x> = 0 for all rows}."""
    M = [clear_denominators(r) for r in rows if any(x != 0 for x in r)]
    if not M:
        return identity(d)
    D, P, Q = snf(M)
    r = sum(1 for i in range(min(len(D), d)) if D[i][i] != 0)
    return [[Q[i][j] for i in range(d)] for j in range(r, d)]


# -- rational subspaces ------------------------------------------------------

def _canonical(rows, d):
    sat = saturate(rows, d)
    if not sat:
        return ()
    H, _ = hnf(sat)
    return tuple(tuple(row) for row in H if any(row))


class Subspace:
    """Rational subspace of Q^d keyed by the HNF basis of its lattice L ∩ Z^d."""

    __slots__ = ("d", "basis")

    def __init__(self, d, basis):
        # basis must already be canonical; use Subspace.span otherwise
        self.d = d
        self.basis = basis

    @classmethod
    def span(cls, vectors, d=None):
        vectors = [list(v) for v in vectors]
        if d is None:
            if not vectors:
                raise ValueError("ambient dimension needed for an empty span")
            d = len(vectors[0])
        for v in vectors:
            if len(v) != d:
                raise DimensionMismatch("vector length differs from ambient dimension")
        return cls(d, _canonical(vectors, d))

    @classmethod
    def zero(cls, d):
        return cls(d, ())

    @classmethod
    def full(cls, d):
        return cls(d, tuple(tuple(r) for r in identity(d)))

    @property
    def dim(self):
        return len(self.basis)

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.d == other.d and self.basis == other.basis

    def __hash__(self):
        return hash((self.d, self.basis))

    def __repr__(self):
        return "Subspace(d=%d, basis=%s)" % (self.d, [list(r) for r in self.basis])

    def _check(self, other):
        if self.d != other.d:
            raise DimensionMismatch("subspaces live in different ambient spaces")

    def __add__(self, other):
        self._check(other)
        return Subspace(self.d, _canonical(list(self.basis) + list(other.basis), self.d))

    def annihilator(self):
        """L^perp in the dual, as a Subspace of the dual lattice."""
        return Subspace(self.d, _canonical(integer_kernel(self.basis, self.d), self.d))

    def intersect(self, other):
        self._check(other)
        return (self.annihilator() + other.annihilator()).annihilator()

    def contains_vector(self, v):
        if not any(x != 0 for x in v):
            return True
        return rank(list(self.basis) + [list(v)]) == self.dim

    def __le__(self, other):
        self._check(other)
        return all(other.contains_vector(r) for r in self.basis)

    def __lt__(self, other):
        return self <= other and self.dim < other.dim


def subspace_ops(L1, L2):
    """Sum, intersection, containment and the annihilator of the first argument."""
    if L1.d != L2.d:
        raise DimensionMismatch("subspaces live in different ambient spaces")
    return {
        "sum": L1 + L2,
        "intersection": L1.intersect(L2),
        "containment": L1 <= L2,
        "annihilator": L1.annihilator(),
    }


@dataclass(frozen=True)
class ProjectedLattice:
    """Complement of L ∩ Z^d inside Z^d.

    ``complement`` holds integer vectors whose images form a basis of the
    projected lattice Z^d / (Z^d ∩ L); ``coords`` holds integer forms with
    pi(x) = (<coords[k], x>)_k, the coordinates of the image of x in that
    basis.
    """
    L: Subspace
    complement: tuple
    coords: tuple

    def project(self, x):
        return [dot(row, x) for row in self.coords]

    def split(self, x):
        """Write an integer vector as (L-lattice coordinates, complement coordinates)."""
        full = [list(r) for r in self.L.basis] + [list(r) for r in self.complement]
        c = mat_vec(transpose(inverse(full)), x)
        ell = self.L.dim
        return [int(v) for v in c[:ell]], [int(v) for v in c[ell:]]


def projected_lattice(L):
    d, ell = L.d, L.dim
    if ell == 0:
        comp = identity(d)
    else:
        D, P, Q = snf([list(r) for r in L.basis])
        Qi = int_inverse(Q)
        comp = Qi[ell:]
    full = [list(r) for r in L.basis] + comp
    Fi = inverse(full)  # x = c * full  =>  c = x * Fi
    coords = tuple(tuple(int(Fi[i][k]) for i in range(d)) for k in range(ell, d))
    return ProjectedLattice(L, tuple(tuple(r) for r in comp), coords)


def lattice_det(vectors, L):
    """|det| of vectors spanning L, measured in the lattice L ∩ Z^d."""
    if not vectors:
        return Fraction(1)
    pl = projected_lattice(L)
    full = [list(r) for r in L.basis] + [list(r) for r in pl.complement]
    Fi = inverse(full)
    coords = [mat_vec(transpose(Fi), v)[:L.dim] for v in vectors]
    return abs(det(coords))
