"""Cat1-groups: validation, the internal category, and pi_0 / pi_1 two ways."""
from semistrict import fixtures as fx
from semistrict.catgp import cat1_to_internal, nerve_of, pi0, pi1, validate_cat1
from semistrict.groups import describe
from semistrict.grp import is_isomorphic
from semistrict.sgrp import moore_homotopy

# Z/2 x Z/4 with d = t: objects are a Klein four group, kernel of d is Z/2
x = fx.e3()
print(x, validate_cat1(x).ok)

y = cat1_to_internal(x)
print("objects", y.c0.order, "arrows", y.c1.order)

n = nerve_of(y, 4)
print("nerve orders", [n.level(k).order for k in range(5)])

# closed form against the Moore complex of the nerve
print("pi0", describe(pi0(y)), is_isomorphic(pi0(y), moore_homotopy(n, 0)))
print("pi1", describe(pi1(y)), is_isomorphic(pi1(y), moore_homotopy(n, 1)))

# S3 with both endomorphisms trivial: kernels are everything, and they don't commute
rep = validate_cat1(fx.bad_s3())
v = rep.violations[0]
print(v.code, v.message, v.witness)

for x in fx.pi_fixtures()[10:14]:
    y = cat1_to_internal(x)
    print(f"{x.name:>24}  |G|={x.g.order:<3} pi0={describe(pi0(y)):<8} pi1={describe(pi1(y))}")
