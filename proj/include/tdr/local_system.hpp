#pragma once

#include <map>
#include <vector>

#include "tdr/cochain.hpp"
#include "tdr/representation.hpp"
#include "tdr/simplicial.hpp"

namespace tdr {

/// A local system on K realized through an edge labeling and a representation
/// of the labeling group: the value space is constant, a morphism of the
/// simplex category transports by the representation of the label of the
/// [0, f(0)]-edge. Degeneracies transport by the identity.
struct LocalSystem {
    const FinSimplicialSet* K = nullptr;
    EdgeLabeling labeling; // on K
    Representation rep;    // of labeling.group

    long dim() const { return rep.dim; }

    /// Transport L(δ_i at σ): L(σ) -> L(d_i σ).
    QMat face_transport(const SimplexRef& s, int i) const {
        if (i == 0) return rep.rho(labeling.twist01(s));
        return QMat::identity(rep.dim);
    }

    QMat face_transport_inv(const SimplexRef& s, int i) const {
        if (i == 0) return rep.rho_inv(labeling.twist01(s));
        return QMat::identity(rep.dim);
    }

    /// Transport along a general monotone f at σ (only the injective part
    /// matters; degeneracies act by the identity).
    QMat transport(const std::vector<int>& f, const SimplexRef& s) const {
        int v = f.front();
        if (v == 0) return QMat::identity(rep.dim);
        return rep.rho(labeling.label_of(K->edge(0, v, s)));
    }

    void validate() const {
        if (!K) throw ValidationError("local system without a base complex");
        if (labeling.K != K) throw ValidationError("labeling is not over the system's complex");
        if (!(rep.group.table() == labeling.group.table()))
            throw ValidationError("representation group differs from labeling group");
        labeling.validate();
        rep.validate();
        // functoriality on composable coface pairs of every 2-simplex
        for (int t : K->simplices(2)) {
            SimplexRef s = K->ref(t);
            for (int j = 0; j <= 2; ++j)
                for (int i = 0; i <= 1; ++i) {
                    // δ_j ∘ δ_i : [0] -> [2]
                    std::vector<int> dj = coface_map(j, 2), di = coface_map(i, 1);
                    std::vector<int> comp = compose_monotone(dj, di);
                    QMat lhs = transport(comp, s);
                    QMat rhs = transport(di, K->face(j, s)) * transport(dj, s);
                    if (!(lhs == rhs))
                        throw ValidationError("local system transports are not functorial");
                }
        }
    }
};

inline LocalSystem local_system_from_rep(const FinSimplicialSet& K, const EdgeLabeling& labeling,
                                         const Representation& rep) {
    LocalSystem L{&K, labeling, rep};
    L.validate();
    return L;
}

/// The constant system Q over a labeling (trivial representation).
inline LocalSystem trivial_system(const FinSimplicialSet& K, const EdgeLabeling& labeling) {
    return local_system_from_rep(K, labeling, Representation::trivial(labeling.group));
}

namespace detail {
inline void require_same_base(const LocalSystem& a, const LocalSystem& b) {
    if (a.K != b.K) throw ValidationError("local systems over different complexes");
    if (!(a.labeling.group.table() == b.labeling.group.table()) ||
        a.labeling.label != b.labeling.label)
        throw ValidationError("local systems over different labelings");
}
} // namespace detail

inline LocalSystem ls_tensor(const LocalSystem& a, const LocalSystem& b) {
    detail::require_same_base(a, b);
    return LocalSystem{a.K, a.labeling, tensor(a.rep, b.rep)};
}

/// Hom system: value space Hom(a, b) with transports f ↦ ρ_b(g) f ρ_a(g)^{-1};
/// a family of matrices is stored row-major, dim = dim(b)·dim(a).
inline LocalSystem ls_hom(const LocalSystem& a, const LocalSystem& b) {
    detail::require_same_base(a, b);
    return LocalSystem{a.K, a.labeling, hom(a.rep, b.rep)};
}

inline LocalSystem ls_oplus(const LocalSystem& a, const LocalSystem& b) {
    detail::require_same_base(a, b);
    return LocalSystem{a.K, a.labeling, oplus(a.rep, b.rep)};
}

// ---------------------------------------------------------------------------
// Twisted simplicial cochain oracle
// ---------------------------------------------------------------------------

/// Index bookkeeping for the normalized twisted cochain complex: degree-n
/// cochains assign a value in L(σ) to every nondegenerate n-simplex.
struct TwistedCochainIndex {
    std::map<int, long> position; // nondeg simplex id -> slot within its degree
    long dim_at(const FinSimplicialSet& K, int n, long v) const {
        return (long)K.simplices(n).size() * v;
    }
};

/// Simplicial cochains on nondegenerate simplices with coefficients twisted
/// by L: (dc)(σ) = Σ_i (-1)^i T_i(σ)^{-1} c(d_i σ), degenerate faces dropped.
inline CochainComplex twisted_cochain_complex(const FinSimplicialSet& K, const LocalSystem& L) {
    if (L.K != &K) throw ValidationError("local system is not over this complex");
    long v = L.dim();
    int top = K.top_dim();
    std::map<int, long> pos;
    for (int n = 0; n <= top; ++n) {
        long i = 0;
        for (int id : K.simplices(n)) pos[id] = i++;
    }
    std::vector<long> dims;
    for (int n = 0; n <= top; ++n) dims.push_back((long)K.simplices(n).size() * v);
    std::vector<SparseMatrix> diffs;
    for (int n = 0; n + 1 <= top; ++n) {
        SparseMatrix d(dims[n + 1], dims[n]);
        for (int sid : K.simplices(n + 1)) {
            SimplexRef s = K.ref(sid);
            long row0 = pos[sid] * v;
            for (int i = 0; i <= n + 1; ++i) {
                const SimplexRef& f = K.stored_face(sid, i);
                if (!f.nondegenerate()) continue; // normalized cochains
                long col0 = pos[f.id] * v;
                QMat T = L.face_transport_inv(s, i);
                Rational sign = (i % 2 == 0) ? Rational(1) : Rational(-1);
                for (long r = 0; r < v; ++r)
                    for (long c = 0; c < v; ++c)
                        if (!T.at(r, c).is_zero()) d.add(row0 + r, col0 + c, sign * T.at(r, c));
            }
        }
        diffs.push_back(d);
    }
    return CochainComplex(0, dims, diffs); // constructor enforces d∘d = 0
}

} // namespace tdr
