"""Three independent routes to the p-Zassenhaus filtration.

Builds a handful of small p-groups and computes their fastest-descending
central series three ways: by the recursive definition (p-th powers of the
half-index term times commutators of complementary terms), by the closed
form over lower central series terms, and — when the group carries a
grading — by degree truncation. The three must agree term by term.
"""

from zassenhaus import build_magnus_group, cyclic_group, unipotent_group


def describe(name, group):
    rec = group.zassenhaus_recursive()
    laz = group.zassenhaus_lazard()
    agree = ["recursive", "closed-form"]
    if group.degrees is not None:
        deg = group.degree_filtration()
        assert rec == deg
        agree.append("degree")
    assert rec == laz
    print(f"{name}: order {group.order}, term orders {rec.orders()}")
    print(f"    routes agreeing: {', '.join(agree)}")


def main():
    describe("1 + deg>=1 part of F2<x1,x2>/deg>=3", build_magnus_group(2, 2, 3))
    describe("1 + deg>=1 part of F2<x1,x2>/deg>=4", build_magnus_group(2, 2, 4))
    describe("1 + deg>=1 part of F3<x1,x2>/deg>=3", build_magnus_group(3, 2, 3))
    describe("upper unitriangular 4x4 over F2", unipotent_group(2, 4))

    # An ungraded group still has the first two routes, and embeds into a
    # graded model: the cyclic group of order 4 is generated by 1 + x in
    # the rank-1 truncated algebra F2<x>/deg>=3.
    z4 = cyclic_group(2, 4)
    model = build_magnus_group(2, 1, 3)
    describe("cyclic of order 4", z4)
    describe("its graded model 1 + x in F2<x>/deg>=3", model)
    assert z4.zassenhaus_recursive().orders() == model.zassenhaus_recursive().orders()
    print("cyclic group and its graded model have identical term orders")


if __name__ == "__main__":
    main()
