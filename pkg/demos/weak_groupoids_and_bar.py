"""Weak 2-groupoids from nerves of nerves, external equivalences, sets in H, and bars of monoids."""
from semistrict import fixtures as fx
from semistrict.cat2gp import discrete_multinerve, search_retraction, trivial_cat2
from semistrict.gray import homotopy_of_bar, monoid_of_abelian_2cells, monoid_of_cat1, one_object_from_monoid
from semistrict.groups import cyclic
from semistrict.tam import (collapsed_homotopy, external_equivalence_criteria, group_level_homotopy, is_h,
                            is_k, is_weak_2_groupoid, nerve_of_nerve, nerve_of_nerve_map,
                            set_nerve_of_internal_2nerve, t2_product_formula)

s = nerve_of_nerve(fx.e3())
print(is_weak_2_groupoid(s).as_dict()["clauses"])
print("collapsed:", collapsed_homotopy(s).as_dict())
print("oracle orders:", [g.order for g in group_level_homotopy(s, upto=4)])

# both verdicts on the map suite
for name, f, expected in fx.map_suite():
    e = external_equivalence_criteria(nerve_of_nerve_map(f)).extras
    print(f"{name:>16} expected={expected!s:<5} definitional={e['definitional']!s:<5} pi={e['pi_criterion']}")

x = trivial_cat2(cyclic(2))
nv = discrete_multinerve(x, search_retraction(x), 2)
s3 = set_nerve_of_internal_2nerve(nv)
print("in H:", is_h(s3).ok, "T^2 formula:", t2_product_formula(nv, s3)["ok"])

m = monoid_of_abelian_2cells(cyclic(3))
print("bar of Z/3 2-cells:", homotopy_of_bar(m).as_dict(), "in K:", is_k(one_object_from_monoid(m)).ok)
print("bar of E3 carrier:", homotopy_of_bar(monoid_of_cat1(fx.e3())).as_dict())
