"""Rational step-polynomials and quasi-polynomials on parameter space R^N.

A term is ``coeff * prod {<eta, b>}^e * prod b_i^k``.  Polynomial factors are
kept expanded in the coordinate monomials, so structural equality is plain
dictionary equality; step factors are keyed by their exact rational vector
because ``{2x}`` and ``2{x}`` are different functions.
"""

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, floor, gcd

from .exactlin import DimensionMismatch, as_rat


def frac(x):
    """Fractional part in [0, 1)."""
    return x - floor(x)


@dataclass(frozen=True, order=True)
class LinearFormQ:
    """Rational linear form, stored as a primitive direction and a scale.

    The direction is an integer vector with content 1 whose first nonzero
    entry is positive; the form equals ``scale * direction``.
    """
    direction: tuple
    scale: Fraction

    @classmethod
    def from_vector(cls, v):
        v = [as_rat(x) for x in v]
        nz = [x for x in v if x != 0]
        if not nz:
            return cls(tuple(0 for _ in v), Fraction(0))
        den = 1
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in v]
        g = 0
        for x in ints:
            g = gcd(g, x)
        if nz[0] < 0:
            g = -g
        return cls(tuple(x // g for x in ints), Fraction(g, den))

    def vector(self):
        return tuple(self.scale * x for x in self.direction)

    def __call__(self, b):
        return self.scale * sum(x * y for x, y in zip(self.direction, b))


class _Form(tuple):
    """Tuple of Fractions with a cached hash; step keys are hashed constantly."""

    def __hash__(self):
        try:
            return self._h
        except AttributeError:
            self._h = tuple.__hash__(self)
            return self._h


def _merge_steps(s1, s2):
    if not s1:
        return s2
    if not s2:
        return s1
    acc = dict(s1)
    for eta, e in s2:
        acc[eta] = acc.get(eta, 0) + e
    return tuple(sorted(acc.items()))


class QuasiPolynomial:
    """Finite sum of terms; ``terms`` maps (steps, mono) -> nonzero Fraction.

    ``steps`` is a sorted tuple of (eta, exponent) with eta a tuple of
    Fractions; ``mono`` is the tuple of exponents of b_1..b_N.
    """

    __slots__ = ("N", "terms")

    def __init__(self, N, terms=None):
        self.N = N
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}

    # constructors
    @classmethod
    def zero(cls, N):
        return cls(N)

    @classmethod
    def const(cls, N, c):
        c = as_rat(c)
        return cls(N, {((), (0,) * N): c})

    @classmethod
    def var(cls, N, i):
        mono = tuple(int(j == i) for j in range(N))
        return cls(N, {((), mono): Fraction(1)})

    @classmethod
    def linear(cls, coeffs, const=0):
        """<coeffs, b> + const."""
        N = len(coeffs)
        t = {}
        for i, c in enumerate(coeffs):
            c = as_rat(c)
            if c:
                t[((), tuple(int(j == i) for j in range(N)))] = c
        if const:
            t[((), (0,) * N)] = as_rat(const)
        return cls(N, t)

    @classmethod
    def step(cls, eta, power=1):
        """{<eta, b>}^power."""
        eta = _Form(as_rat(x) for x in eta)
        N = len(eta)
        if not any(eta):
            return cls.const(N, 1) if power == 0 else cls(N)
        if power == 0:
            return cls.const(N, 1)
        return cls(N, {(((eta, power),), (0,) * N): Fraction(1)})

    @classmethod
    def step_poly(cls, eta, coeffs):
        """sum_k coeffs[k] * {<eta, b>}^k."""
        eta = _Form(as_rat(x) for x in eta)
        N = len(eta)
        zero = (0,) * N
        if not any(eta):
            return cls.const(N, coeffs[0] if coeffs else 0)
        t = {}
        for k, c in enumerate(coeffs):
            if c:
                t[((((eta, k),) if k else ()), zero)] = as_rat(c)
        return cls(N, t)

    # arithmetic
    def _check(self, other):
        if self.N != other.N:
            raise DimensionMismatch("quasi-polynomials over different parameter spaces")

    def __add__(self, other):
        if not isinstance(other, QuasiPolynomial):
            return self + QuasiPolynomial.const(self.N, other)
        self._check(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return QuasiPolynomial(self.N, t)

    __radd__ = __add__

    def __neg__(self):
        return QuasiPolynomial(self.N, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = as_rat(c)
        if c == 0:
            return QuasiPolynomial(self.N)
        return QuasiPolynomial(self.N, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, QuasiPolynomial):
            return self.scale(other)
        self._check(other)
        if not self.terms or not other.terms:
            return QuasiPolynomial(self.N)
        t = {}
        for (s1, m1), c1 in self.terms.items():
            for (s2, m2), c2 in other.terms.items():
                key = (_merge_steps(s1, s2), tuple(a + b for a, b in zip(m1, m2)))
                t[key] = t.get(key, 0) + c1 * c2
        return QuasiPolynomial(self.N, t)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = QuasiPolynomial.const(self.N, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def iadd(self, other, c=1):
        """In-place self += c * other (for accumulation loops)."""
        t = self.terms
        for k, v in other.terms.items():
            nv = t.get(k, 0) + c * v
            if nv:
                t[k] = nv
            else:
                t.pop(k, None)
        return self

    # inspection
    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, QuasiPolynomial):
            return self.N == other.N and self.terms == other.terms
        return self == QuasiPolynomial.const(self.N, other)

    def __hash__(self):
        return hash((self.N, frozenset(self.terms.items())))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0][1]), kv[0][1], kv[0][0]))

    def step_forms(self):
        return sorted({eta for (s, _), _ in self.terms.items() for eta, _ in s})

    def degrees(self):
        pd = sd = ld = 0
        for (s, m) in self.terms:
            a = sum(m)
            b = sum(e for _, e in s)
            pd, sd, ld = max(pd, a), max(sd, b), max(ld, a + b)
        return pd, sd, ld

    def poly_part(self, r):
        """Terms of polynomial degree exactly r."""
        return QuasiPolynomial(self.N, {k: v for k, v in self.terms.items() if sum(k[1]) == r})

    def constant_value(self):
        if not self.terms:
            return Fraction(0)
        if list(self.terms) != [((), (0,) * self.N)]:
            raise ValueError("not a constant")
        return self.terms[((), (0,) * self.N)]

    def __call__(self, b):
        return qp_eval(self, b)

    def __repr__(self):
        return "QuasiPolynomial(%s)" % to_text(self)


# -- module-level operations -------------------------------------------------

def qp_add(p, q):
    return p + q


def qp_mul(p, q):
    return p * q


def qp_scale(c, p):
    return p.scale(c)


def qp_eval(p, b):
    b = [as_rat(x) for x in b]
    if len(b) != p.N:
        raise DimensionMismatch("point has %d coordinates, expected %d" % (len(b), p.N))
    fr = {}
    total = Fraction(0)
    for (steps, mono), c in p.terms.items():
        v = c
        for eta, e in steps:
            f = fr.get(eta)
            if f is None:
                f = fr[eta] = frac(sum(x * y for x, y in zip(eta, b)))
            v *= f ** e
            if not v:
                break
        if v:
            for x, k in zip(b, mono):
                if k:
                    v *= x ** k
        total += v
    return total


def qp_degrees(p):
    return p.degrees()


def qp_specialize(p, T):
    """Substitute b = T t, with T a rational N x q matrix."""
    T = [[as_rat(x) for x in row] for row in T]
    if len(T) != p.N:
        raise DimensionMismatch("T must have N rows")
    q = len(T[0]) if T else 0
    var_forms = [QuasiPolynomial.linear(row) for row in T]
    step_cache = {}
    power_cache = {}

    def var_power(i, k):
        key = (i, k)
        if key not in power_cache:
            power_cache[key] = var_forms[i] ** k
        return power_cache[key]

    out = QuasiPolynomial(q)
    for (steps, mono), c in p.terms.items():
        term = QuasiPolynomial.const(q, c)
        for eta, e in steps:
            if eta not in step_cache:
                step_cache[eta] = tuple(sum(eta[i] * T[i][j] for i in range(p.N)) for j in range(q))
            term = term * QuasiPolynomial.step(step_cache[eta], e)
            if term.is_zero():
                break
        for i, k in enumerate(mono):
            if k and not term.is_zero():
                term = term * var_power(i, k)
        out.iadd(term)
    return out


def _sample_points(p, samples, seed):
    """Integer points, alcove-grid points and generic rational points."""
    rng = random.Random(seed)
    N = p.N
    forms = p.step_forms()
    den = 1
    for eta in forms:
        for x in eta:
            den = den * x.denominator // gcd(den, x.denominator)
    pts = [[Fraction(0)] * N]
    n_int = max(samples // 4, 1)
    n_grid = max(samples // 4, 1)
    for _ in range(n_int):
        pts.append([Fraction(rng.randint(-9, 9)) for _ in range(N)])
    for i in range(n_grid):
        # the lattice (1/den) Z^N meets the walls; the half-refinement hits alcove interiors
        g = den * (1 + (i % 3))
        pts.append([Fraction(rng.randint(-6 * g, 6 * g), g) for _ in range(N)])
    primes = [p_ for p_ in (101, 103, 107, 109, 113, 127, 131, 137, 139, 149) if den % p_]
    while len(pts) < samples:
        q = rng.choice(primes)
        pts.append([Fraction(rng.randint(-8 * q, 8 * q), q) for _ in range(N)])
    return pts[:max(samples, 1)]


def qp_equivalent(p, q, samples=500, seed=20240501):
    """Structural equality, else agreement at deterministic sample points."""
    if p.N != q.N:
        raise DimensionMismatch("quasi-polynomials over different parameter spaces")
    if p.terms == q.terms:
        return True
    diff = p - q
    if diff.is_zero():
        return True
    for b in _sample_points(diff, samples, seed):
        if qp_eval(diff, b) != 0:
            return False
    return True


# -- Bernoulli polynomials ---------------------------------------------------

@lru_cache(maxsize=None)
def bernoulli_numbers(n):
    """B_0..B_n with B_1 = -1/2."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(comb(m + 1, k) * B[k] for k in range(m)) / (m + 1))
    return tuple(B)


@lru_cache(maxsize=None)
def bernoulli_poly(n):
    """Coefficients c_0..c_n of B_n(x) = sum_k c_k x^k."""
    B = bernoulli_numbers(n)
    return tuple(comb(n, k) * B[n - k] for k in range(n + 1))


# -- text and JSON -----------------------------------------------------------

def _fmt_rat(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)


def _fmt_form(eta, names):
    parts = []
    for c, n in zip(eta, names):
        if c == 0:
            continue
        if c == 1:
            parts.append(n)
        elif c == -1:
            parts.append("-" + n)
        else:
            parts.append("%s*%s" % (_fmt_rat(c), n))
    s = " + ".join(parts).replace("+ -", "- ")
    return s


def to_text(p, names=None):
    if names is None:
        names = ["t"] if p.N == 1 else ["b%d" % (i + 1) for i in range(p.N)]
    if not p.terms:
        return "0"
    out = []
    for (steps, mono), c in p.sorted_terms():
        fs = []
        for eta, e in steps:
            f = "{%s}" % _fmt_form(eta, names)
            fs.append(f if e == 1 else "%s^%d" % (f, e))
        for n, k in zip(names, mono):
            if k:
                fs.append(n if k == 1 else "%s^%d" % (n, k))
        if not fs:
            out.append(_fmt_rat(c))
        elif c == 1:
            out.append("*".join(fs))
        elif c == -1:
            out.append("-" + "*".join(fs))
        else:
            out.append(_fmt_rat(c) + "*" + "*".join(fs))
    return " + ".join(out).replace("+ -", "- ")


def to_json_obj(p):
    terms = []
    N = p.N
    for (steps, mono), c in p.sorted_terms():
        poly = []
        for i, k in enumerate(mono):
            if k:
                poly.append([[_fmt_rat(int(j == i)) for j in range(N)], k])
        terms.append({
            "coeff": _fmt_rat(c),
            "step": [[[_fmt_rat(x) for x in eta], e] for eta, e in steps],
            "poly": poly,
        })
    return {"N": N, "terms": terms}


def from_json_obj(obj):
    N = int(obj["N"])
    out = QuasiPolynomial(N)
    for t in obj["terms"]:
        term = QuasiPolynomial.const(N, Fraction(t["coeff"]))
        for eta, e in t.get("step", []):
            if len(eta) != N:
                raise DimensionMismatch("step form length differs from N")
            term = term * QuasiPolynomial.step([Fraction(x) for x in eta], int(e))
        for lam, e in t.get("poly", []):
            if len(lam) != N:
                raise DimensionMismatch("linear form length differs from N")
            term = term * QuasiPolynomial.linear([Fraction(x) for x in lam]) ** int(e)
        out.iadd(term)
    return out


def to_json(p):
    return json.dumps(to_json_obj(p), sort_keys=True)


def from_json(s):
    return from_json_obj(json.loads(s))


def _linear_coeffs(q):
    """(coefficients, constant) of a quasi-polynomial that is affine in b, else None."""
    coeffs = [Fraction(0)] * q.N
    const = Fraction(0)
    for (steps, mono), c in q.terms.items():
        if steps or sum(mono) > 1:
            return None
        if sum(mono) == 0:
            const += c
        else:
            coeffs[mono.index(1)] += c
    return coeffs, const


def parse_qp(text, names):
    """Parse expressions such as ``1/2*{b1 + b3}^2 - {-t}*t`` into a QuasiPolynomial.

    ``{...}`` is the fractional part of an affine form whose constant is an
    integer; ``^`` is a nonnegative integer power.
    """
    import ast

    N = len(names)
    index = {n: i for i, n in enumerate(names)}
    src = text.replace("^", "**").replace("{", "frac(").replace("}", ")")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return QuasiPolynomial.const(N, node.value)
        if isinstance(node, ast.Name) and node.id in index:
            return QuasiPolynomial.var(N, index[node.id])
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            a = ev(node.left)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)
                        and node.right.value >= 0):
                    raise ValueError("powers must be nonnegative integers")
                return a ** node.right.value
            b = ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                lin = _linear_coeffs(b)
                if lin is None or any(lin[0]) or lin[1] == 0:
                    raise ValueError("division only by nonzero constants")
                return a.scale(1 / lin[1])
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id == "frac" and len(node.args) == 1):
            lin = _linear_coeffs(ev(node.args[0]))
            if lin is None or lin[1].denominator != 1:
                raise ValueError("fractional part of a non-affine or offset form")
            return QuasiPolynomial.step(lin[0])
        raise ValueError("unsupported expression element %s" % type(node).__name__)

    return ev(ast.parse(src, mode="eval"))
