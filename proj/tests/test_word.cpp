#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tdr/word.hpp"

using namespace tdr;

TEST_CASE("word parsing and printing") {
    Word w = Word::parse("tensor(V-,hom(1,oplus(0,Vr)))");
    CHECK(w.str() == "tensor(V-,hom(1,oplus(0,Vr)))");
    CHECK(w.depth() == 3);
    CHECK(Word::parse("1").kind() == Word::Kind::One);
    CHECK(Word::parse(" 0 ").kind() == Word::Kind::Zero);
    CHECK(Word::parse("abc").leaf_name() == "abc");
    CHECK_THROWS_AS(Word::parse("tensor(1,2"), ValidationError);
    CHECK_THROWS_AS(Word::parse("tensor(1)"), ValidationError);
    CHECK_THROWS_AS(Word::parse("hom(1,2))"), ValidationError);
}

TEST_CASE("word evaluation") {
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    std::map<std::string, Representation> ctx;
    ctx.emplace("V-", Representation::sign_of_cyclic2(z2));

    Representation one = evaluate_word(ctx, z2, Word::parse("1"));
    CHECK(one.dim == 1);
    CHECK(one.rho(1) == QMat::identity(1));

    // V- ⊗ V- is 1-dimensional with trivial action
    Representation vv = evaluate_word(ctx, z2, Word::parse("tensor(V-,V-)"));
    CHECK(vv.dim == 1);
    CHECK(vv.rho(1) == QMat::identity(1));

    // hom out of the zero object is the zero space
    Representation hz = evaluate_word(ctx, z2, Word::parse("hom(0,V-)"));
    CHECK(hz.dim == 0);

    CHECK_THROWS_AS(evaluate_word(ctx, z2, Word::parse("missing")), ValidationError);
}

TEST_CASE("word depth and enumeration counts") {
    CHECK(word_depth(Word::one()) == 0);
    CHECK(word_depth(Word::leaf("a")) == 0);
    CHECK(word_depth(Word::tensor(Word::one(), Word::one())) == 1);

    auto w0 = words_up_to_depth({"a"}, 0);
    CHECK(w0.size() == 3); // {a, 1, 0}

    auto w1 = words_up_to_depth({"a"}, 1);
    CHECK(w1.size() == 3 * 3 * 3 + 3); // 30

    auto w2 = words_up_to_depth({"a"}, 2);
    CHECK(w2.size() == 3 * 30 * 30 + 3); // 2703

    CHECK_THROWS_AS(words_up_to_depth({"a"}, 3, 100000), BudgetExceeded);

    // the inclusion W^1 ⊆ W^2 is on the nose: every depth-1 word reappears
    std::set<std::string> set2;
    for (const auto& w : w2) set2.insert(w.str());
    for (const auto& w : w1) CHECK(set2.count(w.str()) == 1);

    // depth respects the filtration
    for (const auto& w : w1) CHECK(w.depth() <= 1);
    for (const auto& w : w2) CHECK(w.depth() <= 2);
}

namespace {

DgGraph loop_graph() {
    // one vertex, one self-edge concentrated in degree 0
    DgGraph g;
    g.nvertices = 1;
    DgGraph::EdgeComplex ec;
    ec.dims = {1};
    g.edges[{0, 0}] = ec;
    return g;
}

DgGraph two_vertex_graph() {
    DgGraph g;
    g.nvertices = 2;
    DgGraph::EdgeComplex ec;
    ec.dims = {0, 1}; // one edge generator in degree 1
    ec.diffs = {SparseMatrix(1, 0)};
    g.edges[{0, 1}] = ec;
    return g;
}

DgGraph dg_loop_graph() {
    // self-edge complex Q -> Q with zero differential plus a second vertex chain
    DgGraph g;
    g.nvertices = 2;
    DgGraph::EdgeComplex ec;
    ec.dims = {1, 1};
    SparseMatrix d(1, 1); // zero differential
    ec.diffs = {d};
    g.edges[{0, 0}] = ec;
    DgGraph::EdgeComplex f;
    f.dims = {1, 1};
    SparseMatrix df(1, 1);
    df.set(0, 0, 1); // acyclic edge complex
    f.diffs = {df};
    g.edges[{0, 1}] = f;
    return g;
}

} // namespace

TEST_CASE("free dg-category hom complexes") {
    // graph with no edges: Hom(v, v) is k·id in degree 0
    DgGraph empty;
    empty.nvertices = 1;
    FreeHomComplex h0 = free_dgcat_hom(empty, 0, 0, 3);
    CHECK(h0.dim(0) == 1);
    CHECK(h0.basis_by_degree.size() == 1);

    // one degree-0 self-edge, L = 3: id + e + e⊗e + e⊗e⊗e
    FreeHomComplex h1 = free_dgcat_hom(loop_graph(), 0, 0, 3);
    CHECK(h1.dim(0) == 4);

    // two vertices, one degree-1 edge, L = 2
    FreeHomComplex h2 = free_dgcat_hom(two_vertex_graph(), 0, 1, 2);
    CHECK(h2.dim(0) == 0);
    CHECK(h2.dim(1) == 1);

    CHECK_THROWS_AS(free_dgcat_hom(loop_graph(), 0, 0, 40, 30), BudgetExceeded);
}

TEST_CASE("free hom differential squares to zero and composition is a chain map") {
    DgGraph g = dg_loop_graph();
    FreeHomComplex hom00 = free_dgcat_hom(g, 0, 0, 3);
    CochainComplex cc = hom00.complex(g); // constructor asserts d∘d = 0
    CHECK(cc.dim(0) == hom00.dim(0));

    std::mt19937 rng(4711);
    auto random_elt = [&](const FreeHomComplex& h, int degree) {
        FreeHomElt x;
        if (h.dim(degree) == 0) return x;
        std::uniform_int_distribution<int> num(-3, 3);
        for (int k = 0; k < 2; ++k) {
            const auto& b = h.basis_by_degree[degree][rng() % h.dim(degree)];
            int c = num(rng);
            if (c != 0) x[b] = c;
        }
        return x;
    };

    for (int trial = 0; trial < 100; ++trial) {
        for (int df = 0; df <= 2; ++df)
            for (int dg_ = 0; dg_ <= 2; ++dg_) {
                FreeHomElt f = random_elt(hom00, df), k = random_elt(hom00, dg_);
                if (f.empty() || k.empty()) continue;
                // associativity
                FreeHomElt m = random_elt(hom00, 0);
                if (!m.empty()) {
                    auto lhs = free_hom_compose(free_hom_compose(f, k), m);
                    auto rhs = free_hom_compose(f, free_hom_compose(k, m));
                    CHECK(lhs == rhs);
                }
                // derivation rule d(f∘g) = df∘g + (-1)^{|f|} f∘dg
                auto dfg = free_hom_differential(g, free_hom_compose(f, k));
                auto lhs1 = free_hom_compose(free_hom_differential(g, f), k);
                auto rhs1 = free_hom_compose(f, free_hom_differential(g, k));
                FreeHomElt expect = lhs1;
                for (auto [b, c] : rhs1) {
                    if (df % 2) c = -c;
                    auto it = expect.find(b);
                    if (it == expect.end())
                        expect[b] = c;
                    else {
                        it->second += c;
                        if (it->second.is_zero()) expect.erase(it);
                    }
                }
                CHECK(dfg == expect);
            }
    }
}
