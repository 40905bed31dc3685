"""
Patched sums of a lattice 4-simplex
====================================

For integer dilations every step function is constant, so each patched
sum is a plain polynomial in t.  We recover it by interpolation at
t = 1..5 and print the whole k-family for both patching schemes.
"""

from fractions import Fraction

from intehrhart.parametric import Weight, chamber_near, dilation_qp, simplex_system
from intehrhart.steppoly import qp_eval

pp, b0 = simplex_system([[4, 6, 4, 3], [5, 7, 9, 1], [5, 7, 3, 7], [6, 8, 3, 9], [2, 1, 8, 0]])
ch = chamber_near(pp, b0)


def poly_through(values):
    # Newton forward differences, then back to monomial coefficients
    n = len(values)
    diffs = [list(values)]
    for _ in range(n - 1):
        prev = diffs[-1]
        diffs.append([b - a for a, b in zip(prev, prev[1:])])
    coeffs = [Fraction(0)] * n
    basis = [Fraction(1)]  # prod_{i<j} (t - 1 - i) / j!
    for j in range(n):
        for r, c in enumerate(basis):
            coeffs[r] += diffs[j][0] * c
        nxt = [Fraction(0)] * (len(basis) + 1)
        for r, c in enumerate(basis):
            nxt[r + 1] += c / (j + 1)
            nxt[r] -= c * (1 + j) / (j + 1)
        basis = nxt
    return coeffs


def show(coeffs):
    out = ""
    for r, c in reversed(list(enumerate(coeffs))):
        if not c:
            continue
        mono = {0: "", 1: "*t"}.get(r, "*t^%d" % r)
        out += (" - " if c < 0 else " + ") + str(abs(c)) + mono
    return out[3:] if out.startswith(" + ") else "-" + out[3:]


for variant in ("conebycone", "barvinok"):
    print(variant)
    for k in range(5):
        q = dilation_qp(pp, ch, b0, variant, Weight.one(4), k=k)
        print("  k=%d  %s" % (k, show(poly_through([qp_eval(q, [t]) for t in range(1, 6)]))))
