"""Cat2-groups, their multinerves, and the discrete multinerve built from a retraction."""
import time

from semistrict import fixtures as fx
from semistrict.cat2gp import (cat2_from_cat1, diagonals_agree, discrete_multinerve, homotopy_groups_cat2,
                               multinerve_of, search_retraction, segal_map_bisimp, trivial_cat2,
                               validate_internal_two_nerve)
from semistrict.groups import cyclic, describe

k = trivial_cat2(cyclic(2))
print("K(Z/2,3):", [describe(g) for g in homotopy_groups_cat2(k, 3)])

m = multinerve_of(k, 3)
print([[m.level(p, q).order for q in range(4)] for p in range(4)])

# E3 in the second direction: Z/4 -> Z/2 doesn't split, so no retraction exists
print("E3@2 retraction:", search_retraction(cat2_from_cat1(fx.e3(), 2)))
print("E3@1 retraction Q:", describe(search_retraction(cat2_from_cat1(fx.e3(), 1)).Q))

for x, r in fx.retraction_fixtures():
    t = time.perf_counter()
    res = diagonals_agree(multinerve_of(x, 5), discrete_multinerve(x, r, 5).b, 5)
    rep = validate_internal_two_nerve(discrete_multinerve(x, r, 3))
    print(f"{x.name:>10} Q={describe(r.Q):<6} agree={res.agree} hyp={res.hypothesis} "
          f"valid={rep.ok} bijective={rep.extras['segal_bijective']}  {time.perf_counter() - t:.2f}s")

# the Segal map of A@2: a weak equivalence that is not a bijection
x = cat2_from_cat1(fx.klein_crossed(), 2)
res = segal_map_bisimp(discrete_multinerve(x, search_retraction(x), 3).b, 2, "v")
print("A@2 Segal map 2:", "weak equivalence" if res.is_weak_equiv else "no", "iso" if res.is_iso else "not iso")
