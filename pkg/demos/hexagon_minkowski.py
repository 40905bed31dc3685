"""
Counting points in a Minkowski sum t1 P1 + t2 P2
=================================================

Two triangles with normals among the six directions of a hexagon.  Their
support vectors b1, b2 turn the sum into the parametric polytope at
t1 b1 + t2 b2, giving one quasi-polynomial in (t1, t2).
"""

from fractions import Fraction as F

from intehrhart.exactlin import Subspace
from intehrhart.parametric import (ParametricPolytope, Weight, chamber_near, linear_system_qp,
                                   minkowski_support)
from intehrhart.steppoly import qp_eval, to_text

pp = ParametricPolytope([[1, 0], [1, 1], [-1, 1], [-1, 0], [-1, -1], [1, -1]])
P1 = [(0, 0), (F(-1, 2), F(1, 2)), (F(-1, 2), F(-1, 2))]
P2 = [(0, 0), (1, 1), (1, -1)]
bs = minkowski_support([P1, P2], pp)
print("support vectors:", [[str(x) for x in b] for b in bs])

ch = chamber_near(pp, [x + y for x, y in zip(*bs)])
names = ["t1", "t2"]
count = linear_system_qp(pp, ch, bs, "exact", Weight.one(2))
area = linear_system_qp(pp, ch, bs, "exact", Weight.one(2), L=Subspace.full(2))
print("count:", to_text(count, names))
print("area: ", to_text(area, names))
for t in ([1, 1], [2, 1], [F(1, 2), 3]):
    print(t, "count", qp_eval(count, t), "area", qp_eval(area, t))
