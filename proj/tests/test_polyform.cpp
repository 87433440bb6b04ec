#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tdr/cochain.hpp"
#include "tdr/polyform.hpp"

using namespace tdr;

namespace {

PolyForm random_form(std::mt19937& rng, int p, int max_terms = 3) {
    std::uniform_int_distribution<int> nterms(1, max_terms), expd(0, 2), coin(0, 1),
        num(-3, 3);
    PolyForm f(p);
    int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
        FormMonomial m;
        m.exps.resize(p);
        for (int j = 0; j < p; ++j) m.exps[j] = expd(rng);
        for (int j = 1; j <= p; ++j)
            if (coin(rng)) m.dts.push_back(j);
        int c = num(rng);
        if (c != 0) f.add_term(m, c);
    }
    return f;
}

} // namespace

TEST_CASE("wedge examples") {
    int p = 2;
    CHECK(wedge(PolyForm::one(p), PolyForm::t(p, 1)) == PolyForm::t(p, 1));
    CHECK(wedge(PolyForm::dt(p, 1), PolyForm::dt(p, 1)).is_zero());
    // (t1 dt2) ∧ dt1 = -t1 dt1∧dt2
    PolyForm t1dt2 = wedge(PolyForm::t(p, 1), PolyForm::dt(p, 2));
    PolyForm got = wedge(t1dt2, PolyForm::dt(p, 1));
    PolyForm want = Rational(-1) * PolyForm::monomial(p, {1, 0}, {1, 2}, 1);
    CHECK(got == want);
}

TEST_CASE("differential examples") {
    int p = 2;
    PolyForm t1sq = wedge(PolyForm::t(p, 1), PolyForm::t(p, 1));
    CHECK(differential(t1sq) == Rational(2) * PolyForm::monomial(p, {1, 0}, {1}, 1));
    CHECK(differential(PolyForm::dt(p, 1)).is_zero());
    PolyForm t1t2 = wedge(PolyForm::t(p, 1), PolyForm::t(p, 2));
    PolyForm want = PolyForm::monomial(p, {0, 1}, {1}, 1) + PolyForm::monomial(p, {1, 0}, {2}, 1);
    CHECK(differential(t1t2) == want);
}

TEST_CASE("face map examples") {
    // d1(t1) on ∇(1,*) -> 0
    CHECK(face_map(1, PolyForm::t(1, 1)).is_zero());
    // d0(t1) on ∇(1,*) -> 1 on the point
    CHECK(face_map(0, PolyForm::t(1, 1)) == PolyForm::one(0));
    // d2(t1 dt2) on ∇(2,*) -> 0
    PolyForm t1dt2 = wedge(PolyForm::t(2, 1), PolyForm::dt(2, 2));
    CHECK(face_map(2, t1dt2).is_zero());
    // d0 on ∇(2,*): t1 ↦ 1 - t1, t2 ↦ t1
    CHECK(face_map(0, PolyForm::t(2, 1)) == PolyForm::one(1) - PolyForm::t(1, 1));
    CHECK(face_map(0, PolyForm::t(2, 2)) == PolyForm::t(1, 1));
    CHECK_THROWS_AS(face_map(2, PolyForm::t(1, 1)), ValidationError);
}

TEST_CASE("degeneracy map examples") {
    CHECK(degeneracy_map(0, PolyForm::one(0)) == PolyForm::one(1));
    CHECK(degeneracy_map(0, PolyForm::t(1, 1)) == PolyForm::t(2, 2));
    // s1 on ∇(1,*): t1 ↦ t1 + t2
    CHECK(degeneracy_map(1, PolyForm::t(1, 1)) == PolyForm::t(2, 1) + PolyForm::t(2, 2));
    CHECK_THROWS_AS(degeneracy_map(3, PolyForm::t(1, 1)), ValidationError);
}

TEST_CASE("monomial_basis examples and dimension formula") {
    auto b = monomial_basis(1, 0, 0);
    REQUIRE(b.size() == 1);
    CHECK(b[0] == PolyForm::one(1));

    b = monomial_basis(1, 1, 1);
    REQUIRE(b.size() == 1);
    CHECK(b[0] == PolyForm::dt(1, 1));

    b = monomial_basis(2, 1, 2);
    CHECK(b.size() == 4);

    for (int p = 0; p <= 4; ++p)
        for (int q = 0; q <= 4; ++q)
            for (int w = 0; w <= 4; ++w) {
                long expected = 0;
                if (w >= q && q <= p) {
                    if (p == 0)
                        expected = (q == 0 && w == 0) ? 1 : 0;
                    else
                        expected = binomial(w - q + p - 1, p - 1) * binomial(p, q);
                }
                CHECK((long)monomial_basis(p, q, w).size() == expected);
            }
}

TEST_CASE("Leibniz rule and d∘d = 0 on random forms") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        int p = 1 + (int)(rng() % 3);
        PolyForm a = random_form(rng, p), b = random_form(rng, p);
        auto qa = a.degree();
        if (!qa) continue; // mixed degree: skip Leibniz (sign needs homogeneity)
        PolyForm lhs = differential(wedge(a, b));
        PolyForm sign_adb = (*qa % 2 == 0 ? Rational(1) : Rational(-1)) * wedge(a, differential(b));
        CHECK(lhs == wedge(differential(a), b) + sign_adb);
        CHECK(differential(differential(a)).is_zero());
        CHECK(differential(differential(b)).is_zero());
    }
}

TEST_CASE("graded commutativity on random homogeneous forms") {
    std::mt19937 rng(555);
    for (int trial = 0; trial < 300; ++trial) {
        int p = 1 + (int)(rng() % 3);
        PolyForm a = random_form(rng, p), b = random_form(rng, p);
        auto qa = a.degree(), qb = b.degree();
        if (!qa || !qb) continue;
        Rational sign = (*qa * *qb) % 2 == 0 ? Rational(1) : Rational(-1);
        CHECK(wedge(a, b) == sign * wedge(b, a));
    }
}

TEST_CASE("simplicial identities on random forms") {
    std::mt19937 rng(31415);
    for (int trial = 0; trial < 200; ++trial) {
        int p = 2 + (int)(rng() % 2); // p in {2,3}
        PolyForm a = random_form(rng, p);

        // d_i d_j = d_{j-1} d_i for i < j
        for (int j = 1; j <= p; ++j)
            for (int i = 0; i < j; ++i)
                CHECK(face_map(i, face_map(j, a)) == face_map(j - 1, face_map(i, a)));

        // s_i s_j = s_{j+1} s_i for i <= j
        for (int j = 0; j <= p; ++j)
            for (int i = 0; i <= j; ++i)
                CHECK(degeneracy_map(i, degeneracy_map(j, a)) ==
                      degeneracy_map(j + 1, degeneracy_map(i, a)));

        // mixed identities
        for (int j = 0; j <= p; ++j)
            for (int i = 0; i <= p + 1; ++i) {
                PolyForm lhs = face_map(i, degeneracy_map(j, a));
                if (i < j)
                    CHECK(lhs == degeneracy_map(j - 1, face_map(i, a)));
                else if (i == j || i == j + 1)
                    CHECK(lhs == a);
                else
                    CHECK(lhs == degeneracy_map(j, face_map(i - 1, a)));
            }
    }
}

TEST_CASE("d preserves weight; faces never raise it; degeneracies preserve it") {
    std::mt19937 rng(999);
    for (int trial = 0; trial < 200; ++trial) {
        int p = 1 + (int)(rng() % 3);
        PolyForm a = random_form(rng, p);
        for (int w = 0; w <= a.max_weight(); ++w) {
            PolyForm aw = a.weight_component(w);
            if (aw.is_zero()) continue;
            PolyForm d = differential(aw);
            CHECK(d == d.weight_component(w));
            for (int i = 0; i <= p; ++i) {
                CHECK(face_map(i, aw).max_weight() <= w);
                PolyForm s = degeneracy_map(i, aw);
                CHECK(s == s.weight_component(w));
            }
        }
    }
}

TEST_CASE("weight subcomplexes of ∇(p,*): acyclic for w >= 1, Q at degree 0 for w = 0") {
    for (int p = 0; p <= 3; ++p) {
        for (int w = 0; w <= 4; ++w) {
            std::vector<long> dims;
            std::vector<SparseMatrix> diffs;
            std::vector<FormBasis> bases;
            for (int q = 0; q <= p; ++q) bases.emplace_back(p, q, w);
            for (int q = 0; q <= p; ++q) dims.push_back(bases[q].dim());
            for (int q = 0; q + 1 <= p; ++q) {
                SparseMatrix d(dims[q + 1], dims[q]);
                for (long j = 0; j < dims[q]; ++j) {
                    PolyForm img = differential(bases[q].from_coords(
                        [&] { QVec v(dims[q]); v[j] = 1; return v; }()));
                    QVec col = bases[q + 1].coords_of_weight_part(img);
                    for (long i = 0; i < dims[q + 1]; ++i)
                        if (!col[i].is_zero()) d.set(i, j, col[i]);
                }
                diffs.push_back(d);
            }
            if (dims.empty() || (dims.size() == 1 && dims[0] == 0)) continue;
            CochainComplex cc(0, dims, diffs);
            auto h = cc.cohomology_dims();
            for (const auto& [deg, dim] : h) {
                long expect = (w == 0 && deg == 0) ? 1 : 0;
                CHECK(dim == expect);
            }
        }
    }
}

TEST_CASE("rendering and evaluation") {
    PolyForm f = Rational(3, 2) * PolyForm::monomial(2, {2, 1}, {1}, 1);
    CHECK(f.str() == "3/2*t1^2*t2*dt1");
    CHECK(PolyForm(2).str() == "0");

    PolyForm g = PolyForm::t(1, 1) + PolyForm::constant(1, Rational(1, 2));
    CHECK(g.evaluate({Rational(1, 3)}) == Rational(5, 6));
}
