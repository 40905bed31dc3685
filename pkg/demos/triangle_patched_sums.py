"""
Approximating a rational triangle's count
==========================================

Barvinok-patched and cone-by-cone sums interpolate between the area
(k = 0) and the exact count (k = d).  For k = 1 they share the two top
coefficients with the exact count but differ below.
"""

from fractions import Fraction

from intehrhart.parametric import Weight, chamber_near, dilation_qp, simplex_system
from intehrhart.steppoly import qp_eval, to_text

pp, b0 = simplex_system([(1, 1), (1, 2), (2, 2)])
ch = chamber_near(pp, b0)
h = Weight.one(2)

exact = dilation_qp(pp, ch, b0, "exact", h)
print("exact:", to_text(exact, ["t"]))

for k in (0, 1, 2):
    for variant in ("barvinok", "conebycone"):
        q = dilation_qp(pp, ch, b0, variant, h, k=k)
        print("k=%d %-10s %s" % (k, variant, to_text(q, ["t"])))

# exact values just below and above t = 1
for t in ["1/2", "99/100", "1", "101/100"]:
    print("t = %-7s exact count %s" % (t, qp_eval(exact, [Fraction(t)])))
