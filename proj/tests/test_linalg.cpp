#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tdr/cochain.hpp"
#include "tdr/linalg.hpp"

using namespace tdr;

namespace {

SparseMatrix from_rows(const std::vector<QVec>& rows) {
    long r = (long)rows.size();
    long c = rows.empty() ? 0 : (long)rows[0].size();
    SparseMatrix m(r, c);
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < c; ++j)
            if (!rows[i][j].is_zero()) m.set(i, j, rows[i][j]);
    return m;
}

SparseMatrix random_sparse(std::mt19937& rng, long rows, long cols, int density_pct) {
    std::uniform_int_distribution<int> pct(0, 99), num(-4, 4), den(1, 3);
    SparseMatrix m(rows, cols);
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < cols; ++c)
            if (pct(rng) < density_pct) m.set(r, c, Rational(num(rng), den(rng)));
    return m;
}

} // namespace

TEST_CASE("rational basics") {
    CHECK(Rational(2, 4).str() == "1/2");
    CHECK(Rational(-2, -4).str() == "1/2");
    CHECK(Rational(2, -4).str() == "-1/2");
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational::parse("3/9") == Rational(1, 3));
    CHECK(Rational::parse("-5") == Rational(-5));
    CHECK((Rational(1, 2) + Rational(1, 3)).str() == "5/6");
    CHECK((Rational(1, 2) * Rational(2, 3)).str() == "1/3");
    CHECK_THROWS_AS(Rational(1, 0), ValidationError);
    CHECK_THROWS_AS(Rational(1) / Rational(0), ValidationError);
    CHECK_THROWS_AS(Rational::parse("x"), ValidationError);
}

TEST_CASE("rank examples") {
    CHECK(rank(SparseMatrix::identity(2)) == 2);
    CHECK(rank(SparseMatrix(3, 4)) == 0);
    CHECK(rank(from_rows({{1, 2}, {2, 4}})) == 1);
}

TEST_CASE("kernel_basis examples") {
    CHECK(kernel_basis(SparseMatrix::identity(3)).empty());
    CHECK(kernel_basis(SparseMatrix(1, 3)).size() == 3);

    auto k = kernel_basis(from_rows({{1, 1}}));
    REQUIRE(k.size() == 1);
    // spans the line through (1, -1)
    CHECK(k[0][0] == -k[0][1]);
    CHECK(!k[0][0].is_zero());
}

TEST_CASE("rank-nullity on random sparse matrices") {
    std::mt19937 rng(12345);
    for (int i = 0; i < 60; ++i) {
        long r = 1 + (long)(rng() % 10), c = 1 + (long)(rng() % 10);
        SparseMatrix m = random_sparse(rng, r, c, 35);
        auto ker = kernel_basis(m);
        CHECK(rank(m) + (long)ker.size() == c);
        for (const auto& v : ker) CHECK(is_zero_vec(m.apply(v)));
    }
}

TEST_CASE("dense and sparse paths agree") {
    std::mt19937 rng(777);
    for (int i = 0; i < 20; ++i) {
        SparseMatrix m = random_sparse(rng, 8, 9, 40);
        detail::Eliminator se(m);
        se.run();
        detail::DenseElim de(m);
        de.run();
        CHECK(se.rank() == de.rank());
    }
}

TEST_CASE("solve") {
    auto x = solve(from_rows({{1, 1}, {1, 2}}), {Rational(1), Rational(0)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == Rational(2));
    CHECK((*x)[1] == Rational(-1));

    CHECK(!solve(from_rows({{1, 1}, {1, 1}}), {Rational(1), Rational(0)}).has_value());

    // regression: sparse right-hand-side column must not be chosen as pivot
    auto y = solve(from_rows({{1, 1}, {1, 2}}), {Rational(1), Rational(0)});
    REQUIRE(y.has_value());

    // underdetermined consistent system
    auto z = solve(from_rows({{1, 1, 1}}), {Rational(3)});
    REQUIRE(z.has_value());
    Rational s = (*z)[0] + (*z)[1] + (*z)[2];
    CHECK(s == Rational(3));
}

TEST_CASE("solve random round trips") {
    std::mt19937 rng(4242);
    std::uniform_int_distribution<int> num(-3, 3);
    for (int i = 0; i < 40; ++i) {
        long r = 1 + (long)(rng() % 8), c = 1 + (long)(rng() % 8);
        SparseMatrix m = random_sparse(rng, r, c, 45);
        QVec x0(c);
        for (long j = 0; j < c; ++j) x0[j] = num(rng);
        QVec b = m.apply(x0);
        auto x = solve(m, b);
        REQUIRE(x.has_value());
        CHECK(m.apply(*x) == b);
    }
}

TEST_CASE("coordinates_in_span") {
    std::vector<QVec> basis = {{1, 0, 1}, {0, 1, 1}};
    auto c = coordinates_in_span(basis, {Rational(2), Rational(3), Rational(5)});
    REQUIRE(c.has_value());
    CHECK((*c)[0] == Rational(2));
    CHECK((*c)[1] == Rational(3));
    CHECK(!coordinates_in_span(basis, {Rational(0), Rational(0), Rational(1)}).has_value());
}

TEST_CASE("matrix inverse") {
    QMat m(2, 2);
    m.at(0, 0) = 1;
    m.at(0, 1) = 2;
    m.at(1, 0) = 3;
    m.at(1, 1) = 4;
    auto inv = inverse(m);
    REQUIRE(inv.has_value());
    CHECK((m * *inv) == QMat::identity(2));
    QMat sing(2, 2);
    sing.at(0, 0) = 1;
    sing.at(1, 0) = 1;
    CHECK(!inverse(sing).has_value());
}

TEST_CASE("cochain complex examples") {
    // 0 -> Q -> 0
    CochainComplex single(0, {1}, {});
    auto h = single.cohomology_dims();
    CHECK(h.at(0) == 1);

    // 0 -> Q -> Q -> 0 with d = id
    CochainComplex acyclic(0, {1, 1}, {SparseMatrix::identity(1)});
    h = acyclic.cohomology_dims();
    CHECK(h.at(0) == 0);
    CHECK(h.at(1) == 0);

    // d∘d != 0 is rejected
    SparseMatrix d0 = SparseMatrix::identity(1);
    SparseMatrix d1 = SparseMatrix::identity(1);
    CHECK_THROWS_AS(CochainComplex(0, {1, 1, 1}, {d0, d1}), ValidationError);
}

TEST_CASE("cohomology invariant under change of basis") {
    // complex 0 -> Q^2 -> Q^2 -> 0 with d of rank 1
    std::mt19937 rng(99);
    SparseMatrix d = from_rows({{1, 1}, {1, 1}});
    CochainComplex base(0, {2, 2}, {d});
    auto h0 = base.cohomology_dims();

    for (int trial = 0; trial < 10; ++trial) {
        // random invertible P, Q (2x2, exact)
        auto rand_inv = [&]() {
            std::uniform_int_distribution<int> num(-3, 3);
            while (true) {
                QMat p(2, 2);
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) p.at(i, j) = num(rng);
                if (inverse(p).has_value()) return p;
            }
        };
        QMat p = rand_inv(), q = rand_inv();
        QMat conj = q * d.to_dense() * *inverse(p);
        CochainComplex other(0, {2, 2}, {SparseMatrix::from_dense(conj)});
        CHECK(other.cohomology_dims() == h0);
    }
}
