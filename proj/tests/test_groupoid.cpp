#include <doctest.h>

#include "gad/groupoid.hpp"

using namespace gad;

TEST_CASE("Z/3 as a one-unit groupoid validates") {
    auto g = build::cyclic_groupoid(3);
    CHECK(g->num_units() == 1);
    CHECK(g->num_arrows() == 3);
    std::size_t a = g->arrow_index("u_g");
    CHECK(g->compose(a, a) == g->arrow_index("u_g2"));
    CHECK(g->inverse(a) == g->arrow_index("u_g2"));
}

TEST_CASE("pair groupoid on 2 units validates") {
    auto g = build::pair_groupoid(2);
    CHECK(g->num_units() == 2);
    CHECK(g->num_arrows() == 4);
    std::size_t uv = g->arrow_index("u0>u1");
    std::size_t vu = g->arrow_index("u1>u0");
    CHECK(g->compose(uv, vu) == g->unit_arrow(g->unit_index("u1")));
    CHECK(g->inverse(uv) == vu);
}

TEST_CASE("validation reports an r/s mismatch") {
    GroupoidData d;
    d.units = {"u", "v"};
    d.arrows = {{"a", "u", "v"}, {"b", "v", "u"}};
    // a . b should end at range(a) = v, claim it is the unit at u
    d.compose[{"a", "b"}] = "u";
    d.compose[{"b", "a"}] = "u";
    auto rep = FiniteGroupoid::validate(d);
    CHECK_FALSE(rep.ok());
    bool cited = false;
    for (const auto& v : rep.violations)
        if (v.find("a . b") != std::string::npos) cited = true;
    CHECK(cited);
}

TEST_CASE("bisections") {
    auto g = build::pair_groupoid(2);
    ArrowSet single(g, {g->arrow_index("u0>u1")});
    CHECK(is_bisection(single));
    ArrowSet swap_pair(g, {g->arrow_index("u0>u1"), g->arrow_index("u1>u0")});
    CHECK(is_bisection(swap_pair));

    auto z2 = build::cyclic_groupoid(2);
    CHECK_FALSE(is_bisection(ArrowSet::full(z2)));
}

TEST_CASE("set products") {
    auto g = build::pair_groupoid(2);
    ArrowSet B(g, {g->arrow_index("u0>u1")});
    // B . B^{-1} = unit arrows over r(B)
    ArrowSet prod = set_product(B, B.inverse());
    CHECK(prod == ArrowSet::of_units(g, {g->unit_index("u1")}));

    // D . C = D when C contains s(D) as units
    ArrowSet D(g, {g->arrow_index("u0>u1"), g->unit_arrow(g->unit_index("u1"))});
    ArrowSet C = ArrowSet::of_units(g, {g->unit_index("u0"), g->unit_index("u1")});
    CHECK(set_product(D, C) == D);
    CHECK(set_product(C, D) == D);

    auto z3 = build::cyclic_groupoid(3);
    ArrowSet gg(z3, {z3->arrow_index("u_g")});
    CHECK(set_product(gg, gg) == ArrowSet(z3, {z3->arrow_index("u_g2")}));
}

TEST_CASE("set product of bisections is a bisection, associative") {
    auto g = build::disjoint_union(build::pair_groupoid(2), build::cyclic_groupoid(2));
    std::vector<ArrowSet> sets;
    for (std::size_t a = 0; a < g->num_arrows(); ++a)
        sets.push_back(ArrowSet(g, {a, (a + 3) % g->num_arrows()}));
    for (const auto& B : sets)
        for (const auto& D : sets) {
            if (is_bisection(B) && is_bisection(D)) CHECK(is_bisection(set_product(B, D)));
            for (const auto& F : sets)
                CHECK(set_product(set_product(B, D), F) == set_product(B, set_product(D, F)));
        }
}

TEST_CASE("isotropy") {
    auto pair2 = build::pair_groupoid(2);
    CHECK(isotropy(pair2) ==
          ArrowSet::of_units(pair2, {pair2->unit_index("u0"), pair2->unit_index("u1")}));

    auto z3 = build::cyclic_groupoid(3);
    CHECK(isotropy(z3).size() == 3);

    auto both = build::disjoint_union(pair2, z3);
    // componentwise: 2 unit arrows + all 3 arrows of the Z/3 side
    CHECK(isotropy(both).size() == 5);
    CHECK(interior_of_isotropy(both) == isotropy(both));
}

TEST_CASE("invariant subsets and restriction") {
    auto pair2 = build::pair_groupoid(2);
    CHECK(is_invariant(pair2, {}));
    CHECK(is_invariant(pair2, {0, 1}));
    CHECK_FALSE(is_invariant(pair2, {pair2->unit_index("u0")}));
    CHECK_THROWS_AS(restrict_to(pair2, {pair2->unit_index("u0")}), NotInvariant);

    auto both = build::disjoint_union(pair2, build::cyclic_groupoid(3));
    std::set<std::size_t> left;
    for (std::size_t u = 0; u < both->num_units(); ++u)
        if (both->unit_names()[u].rfind("L_", 0) == 0) left.insert(u);
    CHECK(is_invariant(both, left));
    auto sub = restrict_to(both, left);
    CHECK(sub->num_units() == 2);
    CHECK(sub->num_arrows() == 4);
}

TEST_CASE("classification") {
    auto pair2 = build::pair_groupoid(2);
    auto c = classify(pair2);
    CHECK(c.principal);
    CHECK(c.effective);
    CHECK(c.strongly_effective);

    auto z3 = build::cyclic_groupoid(3);
    c = classify(z3);
    CHECK_FALSE(c.principal);
    CHECK_FALSE(c.effective);
    CHECK_FALSE(c.strongly_effective);

    auto mixed = build::disjoint_union(pair2, z3);
    c = classify(mixed);
    CHECK_FALSE(c.principal);
    CHECK_FALSE(c.effective);
    CHECK_FALSE(c.strongly_effective);
}

TEST_CASE("principal implies strongly effective on assorted instances") {
    std::vector<GroupoidPtr> corpus = {
        build::pair_groupoid(2),
        build::pair_groupoid(3),
        build::disjoint_union(build::pair_groupoid(2), build::pair_groupoid(3)),
        build::cyclic_groupoid(2),
        build::product_with_group(build::pair_groupoid(2), Group::cyclic(2)),
    };
    for (const auto& g : corpus) {
        auto c = classify(g);
        if (c.principal) CHECK(c.strongly_effective);
    }
}

TEST_CASE("inverse of composite") {
    auto g = build::product_with_group(build::pair_groupoid(2), Group::cyclic(3));
    for (std::size_t a = 0; a < g->num_arrows(); ++a)
        for (std::size_t b = 0; b < g->num_arrows(); ++b)
            if (g->composable(a, b))
                CHECK(g->inverse(g->compose(a, b)) ==
                      g->compose(g->inverse(b), g->inverse(a)));
}

TEST_CASE("invariant unit subset enumeration") {
    auto both = build::disjoint_union(build::pair_groupoid(2), build::pair_groupoid(2));
    auto subs = invariant_unit_subsets(both);
    CHECK(subs.size() == 4);
    for (const auto& u : subs) CHECK(is_invariant(both, u));
}
