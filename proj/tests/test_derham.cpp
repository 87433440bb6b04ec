#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tdr/derham.hpp"

using namespace tdr;

namespace {

struct LabeledSpace {
    FinSimplicialSet K;
    GroupPresentation pres;
    EdgeLabeling lab; // lab.K always points at this->K

    LabeledSpace(FinSimplicialSet k, GroupPresentation p, EdgeLabeling l)
        : K(std::move(k)), pres(std::move(p)), lab(std::move(l)) {
        lab.K = &K;
    }
    LabeledSpace(LabeledSpace&& o) noexcept
        : K(std::move(o.K)), pres(std::move(o.pres)), lab(std::move(o.lab)) {
        lab.K = &K;
    }
    LabeledSpace& operator=(LabeledSpace&&) = delete;
};

LabeledSpace z2_labeled(FinSimplicialSet K) {
    GroupPresentation pres = fundamental_group_presentation(K);
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    CosetEnumeration ce = coset_enumeration(pres);
    std::vector<int> images;
    for (int g = 0; g < pres.ngens; ++g) images.push_back((int)ce.action[g][0]);
    LabeledSpace out{std::move(K), pres, {}};
    out.lab = edge_labeling_from_hom(out.K, out.pres, z2, images);
    return out;
}

LabeledSpace circle_signed() {
    FinSimplicialSet K = boundary_simplex(2);
    GroupPresentation pres = fundamental_group_presentation(K);
    LabeledSpace out{std::move(K), pres, {}};
    out.lab = edge_labeling_from_hom(out.K, out.pres, FiniteGroup::cyclic(2), {1});
    return out;
}

LocalSystem triv(const LabeledSpace& s) {
    return local_system_from_rep(s.K, s.lab, Representation::trivial(s.lab.group));
}

LocalSystem sign(const LabeledSpace& s) {
    return local_system_from_rep(s.K, s.lab, Representation::sign_of_cyclic2(s.lab.group));
}

std::map<int, long> dims_map(const CochainComplex& c) { return c.cohomology_dims(); }

} // namespace

TEST_CASE("twisted cochain oracle: constant coefficients reproduce simplicial cohomology") {
    // point
    FinSimplicialSet pt = standard_simplex(0);
    GroupPresentation pp = fundamental_group_presentation(pt);
    EdgeLabeling plab = edge_labeling_from_hom(pt, pp, FiniteGroup::trivial(), {});
    auto h = dims_map(twisted_cochain_complex(pt, trivial_system(pt, plab)));
    CHECK(h.at(0) == 1);

    // simplices Δ1, Δ2, Δ3 are acyclic
    for (int n = 1; n <= 3; ++n) {
        FinSimplicialSet K = standard_simplex(n);
        GroupPresentation pres = fundamental_group_presentation(K);
        EdgeLabeling lab = edge_labeling_from_hom(K, pres, FiniteGroup::trivial(),
                                                  std::vector<int>(pres.ngens, 0));
        auto hn = dims_map(twisted_cochain_complex(K, trivial_system(K, lab)));
        for (const auto& [deg, d] : hn) CHECK(d == (deg == 0 ? 1 : 0));
    }

    // circle
    LabeledSpace circle = circle_signed();
    auto hc = dims_map(twisted_cochain_complex(circle.K, triv(circle)));
    CHECK(hc.at(0) == 1);
    CHECK(hc.at(1) == 1);

    // RP2: (1, 0, 0) rationally
    LabeledSpace rp2 = z2_labeled(rp2_six());
    auto hr = dims_map(twisted_cochain_complex(rp2.K, triv(rp2)));
    CHECK(hr.at(0) == 1);
    CHECK(hr.at(1) == 0);
    CHECK(hr.at(2) == 0);

    // torus: (1, 2, 1)
    FinSimplicialSet torus = torus_seven();
    GroupPresentation tp = fundamental_group_presentation(torus);
    EdgeLabeling tlab = edge_labeling_from_hom(torus, tp, FiniteGroup::trivial(),
                                               std::vector<int>(tp.ngens, 0));
    auto ht = dims_map(twisted_cochain_complex(torus, trivial_system(torus, tlab)));
    CHECK(ht.at(0) == 1);
    CHECK(ht.at(1) == 2);
    CHECK(ht.at(2) == 1);
}

TEST_CASE("twisted cochain oracle: sign systems") {
    LabeledSpace circle = circle_signed();
    auto hc = dims_map(twisted_cochain_complex(circle.K, sign(circle)));
    CHECK(hc.at(0) == 0);
    CHECK(hc.at(1) == 0);

    LabeledSpace rp2 = z2_labeled(rp2_six());
    auto hr = dims_map(twisted_cochain_complex(rp2.K, sign(rp2)));
    CHECK(hr.at(0) == 0);
    CHECK(hr.at(1) == 0);
    CHECK(hr.at(2) == 1);
}

TEST_CASE("adr_component examples") {
    // point: (q=0, w=0) is one-dimensional
    FinSimplicialSet pt = standard_simplex(0);
    GroupPresentation pp = fundamental_group_presentation(pt);
    EdgeLabeling plab = edge_labeling_from_hom(pt, pp, FiniteGroup::trivial(), {});
    LocalSystem Lpt = trivial_system(pt, plab);
    CHECK(adr_component(pt, Lpt, 0, 0).dim() == 1);

    // circle, constant coefficients: flat sections are the constants
    LabeledSpace circle = circle_signed();
    LocalSystem Lc = triv(circle);
    AdrComponent c00 = adr_component(circle.K, Lc, 0, 0);
    CHECK(c00.dim() == 1);
    // sign coefficients admit no nonzero flat section
    CHECK(adr_component(circle.K, sign(circle), 0, 0).dim() == 0);

    // basis families satisfy the exact matching invariant
    for (int q = 0; q <= 1; ++q)
        for (int w = 0; w <= 2; ++w) {
            AdrComponent comp = adr_component(circle.K, Lc, q, w);
            for (const auto& fam : comp.basis) {
                std::string why;
                CHECK_MESSAGE(is_matching(circle.K, Lc, fam, &why), why);
            }
        }
}

TEST_CASE("adr_cohomology stabilization") {
    // Δ2 with constant coefficients stabilizes at weight 0
    FinSimplicialSet d2 = standard_simplex(2);
    GroupPresentation dp = fundamental_group_presentation(d2);
    EdgeLabeling dlab = edge_labeling_from_hom(d2, dp, FiniteGroup::trivial(),
                                               std::vector<int>(dp.ngens, 0));
    StabilizationReport r = adr_cohomology(d2, trivial_system(d2, dlab), 8);
    CHECK(r.stabilized);
    CHECK(r.stabilized_at == 0);
    CHECK(r.totals.at(0) == 1);
    CHECK(r.totals.at(1) == 0);

    // circle: H0 = H1 = Q, the H1 class appears at weight 1
    LabeledSpace circle = circle_signed();
    StabilizationReport rc = adr_cohomology(circle.K, triv(circle), 8);
    CHECK(rc.stabilized);
    CHECK(rc.stabilized_at == 1);
    CHECK(rc.totals.at(0) == 1);
    CHECK(rc.totals.at(1) == 1);
    CHECK(rc.per_weight.at(1).at(1) == 1);

    // circle with the sign system: everything vanishes at weight 0 already
    StabilizationReport rs = adr_cohomology(circle.K, sign(circle), 8);
    CHECK(rs.stabilized);
    CHECK(rs.stabilized_at == 0);
    CHECK(rs.totals.at(0) == 0);
    CHECK(rs.totals.at(1) == 0);

    // weight cap 0 on the circle with constant coefficients: unstabilized
    StabilizationReport rcap = adr_cohomology(circle.K, triv(circle), 0);
    CHECK(!rcap.stabilized);

    // RP2 twisted: H2 = Q only
    LabeledSpace rp2 = z2_labeled(rp2_six());
    StabilizationReport rr = adr_cohomology(rp2.K, sign(rp2), 8);
    CHECK(rr.stabilized);
    CHECK(rr.totals.at(0) == 0);
    CHECK(rr.totals.at(1) == 0);
    CHECK(rr.totals.at(2) == 1);

    // RP2 constant: rational cohomology of a point
    StabilizationReport rt = adr_cohomology(rp2.K, triv(rp2), 8);
    CHECK(rt.stabilized);
    CHECK(rt.totals.at(0) == 1);
    CHECK(rt.totals.at(1) == 0);
    CHECK(rt.totals.at(2) == 0);
}

TEST_CASE("weights beyond stabilization stay acyclic on the fixtures") {
    LabeledSpace circle = circle_signed();
    LocalSystem Lc = triv(circle);
    StabilizationReport rc = adr_cohomology(circle.K, Lc, 8);
    REQUIRE(rc.stabilized);
    for (int w = rc.stabilized_at + 1; w <= rc.stabilized_at + 3; ++w) {
        auto h = adr_weight_complex(circle.K, Lc, w).complex().cohomology_dims();
        for (const auto& [deg, d] : h) CHECK(d == 0);
    }
}

TEST_CASE("tdr_compose") {
    // Δ1 with constant coefficients: (dt1·1)∘(t1·1) = t1 dt1
    FinSimplicialSet d1 = standard_simplex(1);
    GroupPresentation dp = fundamental_group_presentation(d1);
    EdgeLabeling dlab = edge_labeling_from_hom(d1, dp, FiniteGroup::trivial(),
                                               std::vector<int>(dp.ngens, 0));
    LocalSystem L = trivial_system(d1, dlab);
    int edge = d1.simplices(1)[0];
    int v0 = d1.simplices(0)[0], v1 = d1.simplices(0)[1];

    MatchingFamily g; // t1 · 1 in Hom(Q, Q)
    g.q = 0;
    g.w = 1;
    g.values[edge] = {PolyForm::t(1, 1)};
    // the two endpoint values are the evaluations of t1
    SimplexRef e = d1.ref(edge);
    int start = d1.vertex(0, e), end = d1.vertex(1, e);
    g.values[start] = {PolyForm(0)};
    g.values[end] = {PolyForm::one(0)};
    (void)v0;
    (void)v1;
    std::string why;
    REQUIRE_MESSAGE(is_matching(d1, L, g, &why), why);

    MatchingFamily f; // dt1 · 1
    f.q = 1;
    f.w = 1;
    f.values[edge] = {PolyForm::dt(1, 1)};
    f.values[start] = {PolyForm(0)};
    f.values[end] = {PolyForm(0)};
    REQUIRE_MESSAGE(is_matching(d1, L, f, &why), why);

    MatchingFamily fg = tdr_compose(f, g, 1, 1, 1);
    CHECK(fg.q == 1);
    CHECK(fg.w == 2);
    CHECK(fg.values.at(edge)[0] == PolyForm::monomial(1, {1}, {1}, 1));
    CHECK(is_matching(d1, L, fg, &why));

    // two degree-1 families compose to degree 2
    MatchingFamily ff = tdr_compose(f, f, 1, 1, 1);
    CHECK(ff.q == 2);
    CHECK(ff.values.at(edge)[0].is_zero()); // dt1 ∧ dt1

    // identity family composes as a unit
    MatchingFamily ident = identity_family(d1, L);
    MatchingFamily idg = tdr_compose(ident, g, 1, 1, 1);
    CHECK(idg.values.at(edge)[0] == g.values.at(edge)[0]);
}

TEST_CASE("tdr_compose is associative and a derivation on real components") {
    LabeledSpace circle = circle_signed();
    LocalSystem A = triv(circle), B = sign(circle);
    LocalSystem homAB = ls_hom(A, B), homBB = ls_hom(B, B), homAA = ls_hom(A, A);

    std::mt19937 rng(5150);
    std::uniform_int_distribution<int> coeff(-3, 3);
    auto random_combo = [&](const AdrComponent& comp) {
        MatchingFamily out;
        out.q = comp.q;
        out.w = comp.w;
        bool any = false;
        for (const auto& fam : comp.basis) {
            int c = coeff(rng);
            if (c == 0) continue;
            any = true;
            for (const auto& [sid, val] : fam.values) {
                if (!out.values.count(sid))
                    out.values[sid] = std::vector<PolyForm>(val.size(),
                                                            PolyForm(val[0].simplex_dim()));
                for (size_t i = 0; i < val.size(); ++i)
                    out.values[sid][i] = out.values[sid][i] + Rational(c) * val[i];
            }
        }
        if (!any && !comp.basis.empty()) return comp.basis[0];
        return out;
    };

    for (int trial = 0; trial < 10; ++trial) {
        for (int qf = 0; qf <= 1; ++qf)
            for (int qg = 0; qg <= 1 - qf; ++qg) {
                AdrComponent cf = adr_component(circle.K, homBB, qf, 1);
                AdrComponent cg = adr_component(circle.K, homAB, qg, 1);
                AdrComponent ch = adr_component(circle.K, homAA, 0, 1);
                if (cf.basis.empty() || cg.basis.empty() || ch.basis.empty()) continue;
                MatchingFamily f = random_combo(cf), g = random_combo(cg), h = random_combo(ch);
                MatchingFamily lhs = tdr_compose(tdr_compose(f, g, 1, 1, 1), h, 1, 1, 1);
                MatchingFamily rhs = tdr_compose(f, tdr_compose(g, h, 1, 1, 1), 1, 1, 1);
                for (const auto& [sid, val] : lhs.values)
                    for (size_t i = 0; i < val.size(); ++i)
                        CHECK(val[i] == rhs.values.at(sid)[i]);

                // d(f∘g) = df∘g + (-1)^{deg f} f∘dg
                MatchingFamily dfg = family_differential(tdr_compose(f, g, 1, 1, 1));
                MatchingFamily t1 = tdr_compose(family_differential(f), g, 1, 1, 1);
                MatchingFamily t2 = tdr_compose(f, family_differential(g), 1, 1, 1);
                Rational s = (qf % 2 == 0) ? Rational(1) : Rational(-1);
                for (const auto& [sid, val] : dfg.values)
                    for (size_t i = 0; i < val.size(); ++i)
                        CHECK(val[i] == t1.values.at(sid)[i] + s * t2.values.at(sid)[i]);
            }
    }
}

TEST_CASE("pullbacks") {
    LabeledSpace rp2 = z2_labeled(rp2_six());
    LocalSystem L = sign(rp2);

    // identity map
    SimplicialMap idm;
    idm.src = &rp2.K;
    idm.dst = &rp2.K;
    for (int id = 0; id < rp2.K.count(); ++id) idm.image.push_back(rp2.K.ref(id));
    idm.validate();
    AdrComponent comp = adr_component(rp2.K, L, 1, 2);
    if (!comp.basis.empty()) {
        MatchingFamily pb = pullback_family(idm, comp.basis[0]);
        for (const auto& [sid, val] : pb.values)
            for (size_t i = 0; i < val.size(); ++i)
                CHECK(val[i] == comp.basis[0].values.at(sid)[i]);
    }

    // inclusion of the base point recovers the fiber value
    FinSimplicialSet pt = standard_simplex(0);
    SimplicialMap incl;
    incl.src = &pt;
    incl.dst = &rp2.K;
    incl.image.push_back(rp2.K.ref(rp2.K.base_vertex()));
    incl.validate();
    LocalSystem Lpt = pullback_system(incl, L);
    CHECK(Lpt.dim() == L.dim());
    AdrComponent c0 = adr_component(rp2.K, ls_hom(L, L), 0, 0);
    REQUIRE(c0.dim() >= 1);
    MatchingFamily pb = pullback_family(incl, c0.basis[0]);
    CHECK(pb.values.at(0)[0].simplex_dim() == 0);
}

TEST_CASE("flat sections of hom systems are the equivariant maps") {
    LabeledSpace rp2 = z2_labeled(rp2_six());
    LocalSystem one = triv(rp2), vm = sign(rp2);
    std::vector<std::pair<LocalSystem, LocalSystem>> pairs = {
        {one, one}, {one, vm}, {vm, vm}};
    for (const auto& [L, Lp] : pairs) {
        StabilizationReport r = adr_cohomology(rp2.K, ls_hom(L, Lp), 8);
        REQUIRE(r.stabilized);
        CHECK(r.totals.at(0) == (long)equivariant_maps(L.rep, Lp.rep).size());
    }
}

TEST_CASE("non-simplicial map data is rejected") {
    FinSimplicialSet d2 = standard_simplex(2);
    SimplicialMap bad;
    bad.src = &d2;
    bad.dst = &d2;
    for (int id = 0; id < d2.count(); ++id) bad.image.push_back(d2.ref(id));
    // swap the images of two vertices without touching the edges
    std::swap(bad.image[d2.simplices(0)[0]], bad.image[d2.simplices(0)[1]]);
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("internal hom action signs") {
    FinSimplicialSet d1 = standard_simplex(1);
    GroupPresentation dp = fundamental_group_presentation(d1);
    EdgeLabeling dlab = edge_labeling_from_hom(d1, dp, FiniteGroup::trivial(),
                                               std::vector<int>(dp.ngens, 0));
    LocalSystem L = trivial_system(d1, dlab);
    MatchingFamily id = identity_family(d1, L);

    // identities act as the identity
    MatchingFamily a = identity_family(d1, L);
    MatchingFamily out = internal_hom_action(id, id, a, 1, 1, 1, 1);
    for (const auto& [sid, val] : out.values)
        CHECK(val[0] == a.values.at(sid)[0]);

    // deg f = 1, deg g = 0, deg α = 0: sign +1, value (α-form)∧(f-form)
    int edge = d1.simplices(1)[0];
    SimplexRef e = d1.ref(edge);
    int start = d1.vertex(0, e), end = d1.vertex(1, e);
    MatchingFamily f;
    f.q = 1;
    f.w = 1;
    f.values[edge] = {PolyForm::dt(1, 1)};
    f.values[start] = {PolyForm(0)};
    f.values[end] = {PolyForm(0)};
    MatchingFamily t;
    t.q = 0;
    t.w = 1;
    t.values[edge] = {PolyForm::t(1, 1)};
    t.values[start] = {PolyForm(0)};
    t.values[end] = {PolyForm::one(0)};
    MatchingFamily res = internal_hom_action(f, id, t, 1, 1, 1, 1);
    CHECK(res.values.at(edge)[0] == PolyForm::monomial(1, {1}, {1}, 1)); // t1 dt1

    // deg f = 1, deg g = 1, deg α = 0 on Δ2: overall sign -1 against the
    // direct simplexwise expansion g∘α∘f
    FinSimplicialSet d2 = standard_simplex(2);
    GroupPresentation dp2 = fundamental_group_presentation(d2);
    EdgeLabeling dlab2 = edge_labeling_from_hom(d2, dp2, FiniteGroup::trivial(),
                                                std::vector<int>(dp2.ngens, 0));
    LocalSystem L2 = trivial_system(d2, dlab2);
    LocalSystem H2 = ls_hom(L2, L2);
    AdrComponent c11 = adr_component(d2, H2, 1, 1);
    REQUIRE(c11.dim() >= 2);
    MatchingFamily ff = c11.basis[0], gg = c11.basis[1];
    MatchingFamily alpha0 = identity_family(d2, L2);
    MatchingFamily got = internal_hom_action(ff, gg, alpha0, 1, 1, 1, 1);
    for (const auto& [sid, val] : got.values) {
        PolyForm direct = wedge(wedge(gg.values.at(sid)[0], alpha0.values.at(sid)[0]),
                                ff.values.at(sid)[0]);
        CHECK(val[0] == Rational(-1) * direct);
    }
}
