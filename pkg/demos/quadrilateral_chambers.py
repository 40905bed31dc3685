"""
Chambers and counting formulas of a parametric quadrilateral
=============================================================

The polytope {x : -x1 <= b1, -x2 <= b2, x1 + x2 <= b3, -x1 + x2 <= b4}
changes shape as b moves.  On each chamber its lattice point count is a
quasi-polynomial in b.
"""

from fractions import Fraction

from intehrhart.exactlin import Subspace
from intehrhart.parametric import ParametricPolytope, Weight, chamber_of, dilation_qp, intermediate_ehrhart_qp
from intehrhart.steppoly import qp_eval, to_text

pp = ParametricPolytope([[-1, 0], [0, -1], [1, 1], [-1, 1]])
names = ["b1", "b2", "b3", "b4"]

# three sample parameters, three combinatorial types
for b in [(2, 0, 0, 6), (0, 0, 5, 3), (10, 0, 1, 1)]:
    ch = chamber_of(pp, b)
    print(b, "vertex bases:", [tuple(j + 1 for j in B) for B in ch.index_sets])

# the quadrilateral chamber
ch = chamber_of(pp, (0, 0, 5, 3))
count = intermediate_ehrhart_qp(pp, ch, Subspace.zero(2), Weight.one(2))
print("\nlattice points:\n ", to_text(count, names))
print("at b = (0,0,5,3):", qp_eval(count, [0, 0, 5, 3]))

# summing lengths of vertical segments instead of counting points
vertical = Subspace.span([[0, 1]])
slices = intermediate_ehrhart_qp(pp, ch, vertical, Weight.one(2))
print("vertical slices at b = (0,0,5,3):", qp_eval(slices, [0, 0, 5, 3]))

# along the ray t * (0,0,5,3) the count is a quasi-polynomial in t alone
ray = dilation_qp(pp, ch, (0, 0, 5, 3), "exact", Weight.one(2))
print("\ndilation:", to_text(ray, ["t"]))
for t in [Fraction(1, 5), Fraction(1, 3), Fraction(1, 2), 1, 2]:
    print("  t = %-4s count = %s" % (t, qp_eval(ray, [t])))
