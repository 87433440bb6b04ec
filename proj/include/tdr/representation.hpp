#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tdr/group.hpp"
#include "tdr/linalg.hpp"

namespace tdr {

/// A finite-dimensional rational representation: one invertible matrix per
/// group element, validated as a homomorphism at construction.
struct Representation {
    FiniteGroup group;
    long dim = 0;
    std::vector<QMat> matrices; // indexed by group element

    Representation() = default;
    Representation(FiniteGroup g, long d, std::vector<QMat> mats)
        : group(std::move(g)), dim(d), matrices(std::move(mats)) {
        validate();
    }

    const QMat& rho(int g) const { return matrices[g]; }
    const QMat& rho_inv(int g) const { return matrices[group.inv(g)]; }

    void validate() const {
        if ((long)matrices.size() != group.size())
            throw ValidationError("representation needs one matrix per group element");
        for (const auto& m : matrices)
            if (m.rows() != dim || m.cols() != dim)
                throw ValidationError("representation matrix shape mismatch");
        if (!(matrices[group.identity()] == QMat::identity(dim)))
            throw ValidationError("representation of the identity must be the identity matrix");
        for (int g = 0; g < group.size(); ++g)
            for (int h = 0; h < group.size(); ++h)
                if (!(matrices[g] * matrices[h] == matrices[group.mul(g, h)]))
                    throw ValidationError("representation is not multiplicative");
    }

    static Representation trivial(const FiniteGroup& g, long dim = 1) {
        return Representation(g, dim, std::vector<QMat>(g.size(), QMat::identity(dim)));
    }

    static Representation zero(const FiniteGroup& g) {
        return Representation(g, 0, std::vector<QMat>(g.size(), QMat(0, 0)));
    }

    /// One-dimensional representation from a character with values ±1 (or any
    /// rational character table row).
    static Representation one_dimensional(const FiniteGroup& g, const std::vector<Rational>& chi) {
        if ((long)chi.size() != g.size()) throw ValidationError("character length mismatch");
        std::vector<QMat> mats;
        for (const auto& c : chi) {
            QMat m(1, 1);
            m.at(0, 0) = c;
            mats.push_back(m);
        }
        return Representation(g, 1, std::move(mats));
    }

    /// The sign representation of Z/n-style groups: g ↦ -1 for a chosen
    /// generator is a common test fixture; this general helper raises -1 to
    /// the order profile via a homomorphism to {±1} given elementwise.
    static Representation sign_of_cyclic2(const FiniteGroup& z2) {
        if (z2.size() != 2) throw ValidationError("sign_of_cyclic2 expects an order-2 group");
        return one_dimensional(z2, {Rational(1), Rational(-1)});
    }
};

inline Representation tensor(const Representation& a, const Representation& b) {
    if (a.group.size() != b.group.size() || !(a.group.table() == b.group.table()))
        throw ValidationError("tensor: group mismatch");
    long n = a.dim * b.dim;
    std::vector<QMat> mats;
    mats.reserve(a.group.size());
    for (int g = 0; g < a.group.size(); ++g) {
        QMat m(n, n);
        for (long i = 0; i < a.dim; ++i)
            for (long k = 0; k < a.dim; ++k) {
                if (a.rho(g).at(i, k).is_zero()) continue;
                for (long j = 0; j < b.dim; ++j)
                    for (long l = 0; l < b.dim; ++l)
                        if (!b.rho(g).at(j, l).is_zero())
                            m.at(i * b.dim + j, k * b.dim + l) =
                                a.rho(g).at(i, k) * b.rho(g).at(j, l);
            }
        mats.push_back(std::move(m));
    }
    return Representation(a.group, n, std::move(mats));
}

/// Internal hom: elements are dim(W) x dim(V) matrices F (so F: V -> W),
/// flattened row-major; g acts by F ↦ ρ_W(g) F ρ_V(g)^{-1}.
inline Representation hom(const Representation& v, const Representation& w) {
    if (v.group.size() != w.group.size() || !(v.group.table() == w.group.table()))
        throw ValidationError("hom: group mismatch");
    long n = v.dim * w.dim;
    auto flat = [&](long a, long b) { return a * v.dim + b; }; // a in W, b in V
    std::vector<QMat> mats;
    for (int g = 0; g < v.group.size(); ++g) {
        QMat m(n, n);
        const QMat& rw = w.rho(g);
        const QMat& rvi = v.rho_inv(g);
        // image of basis unit E_{ab}: rw * E_{ab} * rvi has (x,y) entry rw[x,a]*rvi[b,y]
        for (long a = 0; a < w.dim; ++a)
            for (long b = 0; b < v.dim; ++b)
                for (long x = 0; x < w.dim; ++x) {
                    if (rw.at(x, a).is_zero()) continue;
                    for (long y = 0; y < v.dim; ++y)
                        if (!rvi.at(b, y).is_zero())
                            m.at(flat(x, y), flat(a, b)) = rw.at(x, a) * rvi.at(b, y);
                }
        mats.push_back(std::move(m));
    }
    return Representation(v.group, n, std::move(mats));
}

inline Representation oplus(const Representation& a, const Representation& b) {
    if (a.group.size() != b.group.size() || !(a.group.table() == b.group.table()))
        throw ValidationError("oplus: group mismatch");
    long n = a.dim + b.dim;
    std::vector<QMat> mats;
    for (int g = 0; g < a.group.size(); ++g) {
        QMat m(n, n);
        for (long i = 0; i < a.dim; ++i)
            for (long j = 0; j < a.dim; ++j) m.at(i, j) = a.rho(g).at(i, j);
        for (long i = 0; i < b.dim; ++i)
            for (long j = 0; j < b.dim; ++j) m.at(a.dim + i, a.dim + j) = b.rho(g).at(i, j);
        mats.push_back(std::move(m));
    }
    return Representation(a.group, n, std::move(mats));
}

inline Representation dual(const Representation& v) {
    return hom(v, Representation::trivial(v.group));
}

/// An equivariant map between representations of the same group.
struct RepMorphism {
    Representation source, target;
    QMat matrix; // target.dim x source.dim

    RepMorphism(Representation s, Representation t, QMat m)
        : source(std::move(s)), target(std::move(t)), matrix(std::move(m)) {
        if (matrix.rows() != target.dim || matrix.cols() != source.dim)
            throw ValidationError("morphism matrix shape mismatch");
        for (int g = 0; g < source.group.size(); ++g)
            if (!(matrix * source.rho(g) == target.rho(g) * matrix))
                throw ValidationError("morphism is not equivariant");
    }
};

/// Basis of the space of equivariant maps V -> W.
inline std::vector<QMat> equivariant_maps(const Representation& v, const Representation& w) {
    long n = v.dim, m = w.dim;
    long vars = m * n; // F is m x n, flattened row-major
    SparseMatrix sys(vars * v.group.size(), vars);
    long row = 0;
    for (int g = 0; g < v.group.size(); ++g) {
        const QMat& rv = v.rho(g);
        const QMat& rw = w.rho(g);
        // F rho_V(g) - rho_W(g) F = 0, entry (x, y)
        for (long x = 0; x < m; ++x)
            for (long y = 0; y < n; ++y) {
                for (long k = 0; k < n; ++k)
                    if (!rv.at(k, y).is_zero()) sys.add(row, x * n + k, rv.at(k, y));
                for (long k = 0; k < m; ++k)
                    if (!rw.at(x, k).is_zero()) sys.add(row, k * n + y, -rw.at(x, k));
                ++row;
            }
    }
    std::vector<QMat> basis;
    for (const auto& vec : kernel_basis(sys)) {
        QMat f(m, n);
        for (long x = 0; x < m; ++x)
            for (long y = 0; y < n; ++y) f.at(x, y) = vec[x * n + y];
        basis.push_back(std::move(f));
    }
    return basis;
}

/// The regular representation on the delta-function basis, together with the
/// commuting right translation action: [ρ(g)α](g') = α(g'g), [ϱ(g)α](g') = α(gg').
struct RegularRep {
    Representation rep;          // left action ρ
    std::vector<QMat> right;     // right action ϱ, one matrix per element
};

inline RegularRep regular_representation(const FiniteGroup& G) {
    long n = G.size();
    std::vector<QMat> left(G.size(), QMat(n, n)), right(G.size(), QMat(n, n));
    for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h) {
            left[g].at(G.mul(h, G.inv(g)), h) = 1;  // ρ(g) δ_h = δ_{h g^{-1}}
            right[g].at(G.mul(G.inv(g), h), h) = 1; // ϱ(g) δ_h = δ_{g^{-1} h}
        }
    RegularRep rr{Representation(G, n, std::move(left)), std::move(right)};
    for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h)
            if (!(rr.rep.rho(g) * rr.right[h] == rr.right[h] * rr.rep.rho(g)))
                throw InternalCheckFailure("left and right regular actions do not commute");
    return rr;
}

/// φ_V: V -> Hom(V_u^∨, V_r), φ(v)(v')(g) = <v', gv>, with its one-sided
/// inverse given by evaluation at the identity.
struct PhiEmbedding {
    RepMorphism phi;
    QMat retraction; // dim(V) x (|G|·dim(V)); retraction * phi.matrix = id
};

inline PhiEmbedding phi_embedding(const Representation& v) {
    const FiniteGroup& G = v.group;
    long n = v.dim, N = G.size() * n;
    RegularRep vr = regular_representation(G);
    Representation vu_dual = dual(Representation::trivial(G, n));
    Representation target = hom(vu_dual, vr.rep);

    QMat phi(N, n);
    for (int g = 0; g < G.size(); ++g)
        for (long b = 0; b < n; ++b)
            for (long m = 0; m < n; ++m) phi.at((long)g * n + b, m) = v.rho(g).at(b, m);

    QMat retraction(n, N);
    for (long m = 0; m < n; ++m) retraction.at(m, (long)G.identity() * n + m) = 1;

    PhiEmbedding out{RepMorphism(v, target, phi), retraction};
    if (!(out.retraction * out.phi.matrix == QMat::identity(n)))
        throw InternalCheckFailure("phi retraction is not a one-sided inverse");
    SparseMatrix sp = SparseMatrix::from_dense(phi);
    if (rank(sp) != n) throw InternalCheckFailure("phi embedding is not injective");
    return out;
}

/// Tannaka reconstruction data: the tensor-natural automorphisms of the
/// fiber functor, realized concretely on the regular representation.
struct TannakaResult {
    FiniteGroup group;                  // the reconstructed group (table of found automorphisms)
    std::vector<QMat> automorphisms;    // element i of `group` acts as automorphisms[i]
    std::vector<int> iso_from_input;    // input element g -> index in `group`
};

/// Finds all invertible endomorphisms A of ω(V_r) that commute with every
/// equivariant endomorphism of V_r and respect pointwise multiplication and
/// the unit. Any such A is determined by v := A(δ_e): commutation with the
/// right translations (which are checked to be equivariant) forces
/// A(δ_a) = ϱ(a^{-1})v; multiplicativity makes v idempotent, hence a 0/1
/// vector; A(1) = 1 forces exactly one nonzero entry. So the search space is
/// the |G| candidates A_c: δ_a ↦ δ_{a·c}, each verified against the full
/// commutant and the algebra structure.
inline TannakaResult tensor_automorphisms(const FiniteGroup& G, long budget = 24) {
    if (G.size() > budget) throw BudgetExceeded("tensor_automorphisms group size over budget");
    long n = G.size();
    RegularRep rr = regular_representation(G);

    std::vector<QMat> endos = equivariant_maps(rr.rep, rr.rep);
    for (int h = 0; h < n; ++h)
        for (int g = 0; g < n; ++g)
            if (!(rr.right[h] * rr.rep.rho(g) == rr.rep.rho(g) * rr.right[h]))
                throw InternalCheckFailure("right translation is not equivariant");

    auto column = [&](const QMat& A, long c) {
        QVec v(n);
        for (long r = 0; r < n; ++r) v[r] = A.at(r, c);
        return v;
    };

    std::vector<int> passing; // values c such that A_c passes all checks
    std::vector<QMat> passing_mats;
    for (int c = 0; c < n; ++c) {
        QMat A(n, n);
        for (int a = 0; a < n; ++a) A.at(G.mul(a, c), a) = 1;
        bool ok = true;
        for (const auto& E : endos)
            if (!(A * E == E * A)) { ok = false; break; }
        if (ok) {
            // multiplicativity on the delta basis: A(δ_a δ_b) = A(δ_a) ⊙ A(δ_b)
            for (int a = 0; a < n && ok; ++a)
                for (int b = 0; b < n && ok; ++b) {
                    QVec ca = column(A, a), cb = column(A, b);
                    for (long r = 0; r < n && ok; ++r) {
                        Rational lhs = (a == b) ? ca[r] : Rational(0);
                        if (ca[r] * cb[r] != lhs) ok = false;
                    }
                }
            // unit: A(1) = 1
            for (long r = 0; r < n && ok; ++r) {
                Rational s(0);
                for (long a = 0; a < n; ++a) s += A.at(r, a);
                if (s != Rational(1)) ok = false;
            }
        }
        if (ok) {
            passing.push_back(c);
            passing_mats.push_back(A);
        }
    }

    // the result must be exactly {φ_G(g) = ρ(g)}; ρ(g) = A_{g^{-1}}
    if ((long)passing.size() != n)
        throw InternalCheckFailure("tensor automorphism count differs from |G|");
    for (int g = 0; g < n; ++g) {
        bool found = false;
        for (const auto& A : passing_mats)
            if (A == rr.rep.rho(g)) { found = true; break; }
        if (!found) throw InternalCheckFailure("φ_G(g) missing from tensor automorphisms");
    }

    // group structure by matrix composition, then the isomorphism from G
    std::vector<std::vector<int>> table(n, std::vector<int>(n, -1));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            QMat prod = passing_mats[i] * passing_mats[j];
            for (long k = 0; k < n; ++k)
                if (prod == passing_mats[k]) { table[i][j] = (int)k; break; }
            if (table[i][j] < 0)
                throw InternalCheckFailure("tensor automorphisms not closed under composition");
        }
    std::vector<std::string> names;
    for (long i = 0; i < n; ++i) names.push_back("aut" + std::to_string(i));
    TannakaResult out{FiniteGroup(names, table), passing_mats, {}};

    out.iso_from_input.resize(n, -1);
    for (int g = 0; g < n; ++g)
        for (long k = 0; k < n; ++k)
            if (rr.rep.rho(g) == passing_mats[k]) { out.iso_from_input[g] = (int)k; break; }
    // multiplication-table comparison under the isomorphism
    for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h)
            if (out.group.mul(out.iso_from_input[g], out.iso_from_input[h]) !=
                out.iso_from_input[G.mul(g, h)])
                throw InternalCheckFailure("φ_G is not a homomorphism onto the automorphisms");
    return out;
}

} // namespace tdr
