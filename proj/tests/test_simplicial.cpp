#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tdr/simplicial.hpp"

using namespace tdr;

TEST_CASE("finite group basics") {
    FiniteGroup z6 = FiniteGroup::cyclic(6);
    CHECK(z6.size() == 6);
    CHECK(z6.order_of(1) == 6);
    CHECK(z6.is_abelian());

    FiniteGroup s3 = FiniteGroup::symmetric(3);
    CHECK(s3.size() == 6);
    CHECK(!s3.is_abelian());
    CHECK(!z6.isomorphism_to(s3).has_value());
    CHECK(FiniteGroup::klein4().isomorphism_to(FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2))).has_value());
    CHECK(!FiniteGroup::klein4().isomorphism_to(FiniteGroup::cyclic(4)).has_value());

    // broken table rejected
    CHECK_THROWS_AS(FiniteGroup({"a", "b"}, {{0, 1}, {0, 1}}), ValidationError);
}

TEST_CASE("standard simplex structure") {
    FinSimplicialSet d2 = standard_simplex(2);
    CHECK(d2.top_dim() == 2);
    CHECK(d2.simplices(0).size() == 3);
    CHECK(d2.simplices(1).size() == 3);
    CHECK(d2.simplices(2).size() == 1);
    CHECK(d2.euler_characteristic() == 1);
    CHECK(d2.is_connected());

    int tri = d2.simplices(2)[0];
    SimplexRef t = d2.ref(tri);
    CHECK(d2.vertex(0, t) != d2.vertex(1, t));
    SimplexRef e01 = d2.edge(0, 1, t);
    CHECK(e01.nondegenerate());
    CHECK(d2.vertex(0, e01) == d2.vertex(0, t));
    CHECK(d2.vertex(1, e01) == d2.vertex(1, t));

    // degenerate then face returns the original
    SimplexRef s0t = d2.degenerate(0, t);
    CHECK(s0t.dim() == 3);
    CHECK(!s0t.nondegenerate());
    CHECK(d2.face(0, s0t) == t);
    CHECK(d2.face(1, s0t) == t);
}

TEST_CASE("fixture surfaces validate") {
    FinSimplicialSet rp2 = rp2_six();
    CHECK(rp2.simplices(0).size() == 6);
    CHECK(rp2.simplices(1).size() == 15);
    CHECK(rp2.simplices(2).size() == 10);
    CHECK(rp2.euler_characteristic() == 1);
    CHECK(rp2.is_connected());

    FinSimplicialSet torus = torus_seven();
    CHECK(torus.simplices(0).size() == 7);
    CHECK(torus.simplices(1).size() == 21);
    CHECK(torus.simplices(2).size() == 14);
    CHECK(torus.euler_characteristic() == 0);
}

TEST_CASE("coset enumeration on known presentations") {
    // <a | a^5>
    GroupPresentation p1;
    p1.ngens = 1;
    p1.relators = {{1, 1, 1, 1, 1}};
    CHECK(coset_enumeration(p1).order == 5);

    // <a, b | a^2, b^2, (ab)^3> = S3
    GroupPresentation p2;
    p2.ngens = 2;
    p2.relators = {{1, 1}, {2, 2}, {1, 2, 1, 2, 1, 2}};
    CosetEnumeration ce = coset_enumeration(p2);
    CHECK(ce.order == 6);
    RealizedGroup rg = group_from_enumeration(ce);
    CHECK(rg.group.isomorphism_to(FiniteGroup::symmetric(3)).has_value());

    // <a, b | a^2, b^2, aba^-1b^-1> = Klein four
    GroupPresentation p3;
    p3.ngens = 2;
    p3.relators = {{1, 1}, {2, 2}, {1, 2, -1, -2}};
    CHECK(group_from_enumeration(coset_enumeration(p3))
              .group.isomorphism_to(FiniteGroup::klein4())
              .has_value());

    // free group on one generator exceeds any budget
    GroupPresentation pfree;
    pfree.ngens = 1;
    CHECK_THROWS_AS(coset_enumeration(pfree, 500), BudgetExceeded);
}

TEST_CASE("fundamental group presentations of fixtures") {
    // Δ2 is contractible
    GroupPresentation pd2 = fundamental_group_presentation(standard_simplex(2));
    CHECK(coset_enumeration(pd2).order == 1);

    // ∂Δ2 is a circle: one generator, no relations
    GroupPresentation pc = fundamental_group_presentation(boundary_simplex(2));
    CHECK(pc.ngens == 1);
    for (const auto& r : pc.relators) CHECK(r.empty());
    CHECK_THROWS_AS(coset_enumeration(pc, 1000), BudgetExceeded);

    // RP2 has order-2 edge-path group
    GroupPresentation pr = fundamental_group_presentation(rp2_six());
    CHECK(pr.ngens == 10);
    CosetEnumeration ce = coset_enumeration(pr);
    CHECK(ce.order == 2);
    RealizedGroup rg = group_from_enumeration(ce);
    CHECK(rg.group.isomorphism_to(FiniteGroup::cyclic(2)).has_value());
    // abelianization of an order-2 group is Z/2
    CHECK(rg.group.is_abelian());

    // torus has infinite pi_1
    CHECK_THROWS_AS(coset_enumeration(fundamental_group_presentation(torus_seven()), 2000),
                    BudgetExceeded);
}

TEST_CASE("edge labelings") {
    FinSimplicialSet k = boundary_simplex(2);
    GroupPresentation pres = fundamental_group_presentation(k);
    FiniteGroup z2 = FiniteGroup::cyclic(2);

    EdgeLabeling trivial = edge_labeling_from_hom(k, pres, z2, {0});
    CHECK(trivial.label.empty());

    EdgeLabeling sign = edge_labeling_from_hom(k, pres, z2, {1});
    CHECK(sign.label.size() == 1);
    sign.validate();

    // a hom violating a relator is rejected: use Δ2, whose relators force triviality
    FinSimplicialSet d2 = standard_simplex(2);
    GroupPresentation pd2 = fundamental_group_presentation(d2);
    if (pd2.ngens > 0) {
        std::vector<int> bad(pd2.ngens, 1);
        CHECK_THROWS_AS(edge_labeling_from_hom(d2, pd2, z2, bad), ValidationError);
    }

    // RP2: all ten triangle conditions hold for the pi_1 labeling
    FinSimplicialSet rp2 = rp2_six();
    GroupPresentation pr = fundamental_group_presentation(rp2);
    CosetEnumeration ce = coset_enumeration(pr);
    std::vector<int> images;
    for (int g = 0; g < pr.ngens; ++g) images.push_back((int)ce.action[g][0]);
    EdgeLabeling lab = edge_labeling_from_hom(rp2, pr, z2, images);
    lab.validate();
    bool nontrivial = false;
    for (const auto& [e, g] : lab.label) nontrivial |= (g != 0);
    CHECK(nontrivial);
}

TEST_CASE("universal covers") {
    // Δ2 with the trivial group: the cover is the complex itself
    FinSimplicialSet d2 = standard_simplex(2);
    GroupPresentation pd2 = fundamental_group_presentation(d2);
    EdgeLabeling triv = edge_labeling_from_hom(d2, pd2, FiniteGroup::trivial(),
                                               std::vector<int>(pd2.ngens, 0));
    CoverData cd = universal_cover(d2, triv);
    CHECK(cd.cover.count() == d2.count());
    CHECK(cd.cover.euler_characteristic() == d2.euler_characteristic());

    // ∂Δ2 is rejected: infinite pi_1
    FinSimplicialSet circle = boundary_simplex(2);
    GroupPresentation pc = fundamental_group_presentation(circle);
    EdgeLabeling sign = edge_labeling_from_hom(circle, pc, FiniteGroup::cyclic(2), {1});
    CHECK_THROWS_AS(universal_cover(circle, sign, 1000), BudgetExceeded);

    // RP2 with Z/2: a 2-sheeted cover with 12 vertices and chi = 2
    FinSimplicialSet rp2 = rp2_six();
    GroupPresentation pr = fundamental_group_presentation(rp2);
    CosetEnumeration ce = coset_enumeration(pr);
    std::vector<int> images;
    for (int g = 0; g < pr.ngens; ++g) images.push_back((int)ce.action[g][0]);
    EdgeLabeling lab = edge_labeling_from_hom(rp2, pr, FiniteGroup::cyclic(2), images);
    CoverData cover = universal_cover(rp2, lab);
    CHECK(cover.cover.simplices(0).size() == 12);
    CHECK(cover.cover.simplices(1).size() == 30);
    CHECK(cover.cover.simplices(2).size() == 20);
    CHECK(cover.cover.euler_characteristic() == 2);

    // a labeling that does not realize all of pi_1 is rejected
    std::vector<int> triv_images(pr.ngens, 0);
    EdgeLabeling bad = edge_labeling_from_hom(rp2, pr, FiniteGroup::cyclic(2), triv_images);
    CHECK_THROWS_AS(universal_cover(rp2, bad), ValidationError);
}
