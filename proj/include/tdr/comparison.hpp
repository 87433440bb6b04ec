#pragma once

#include <string>
#include <vector>

#include "tdr/derham.hpp"
#include "tdr/gcdga.hpp"

namespace tdr {

/// Result of the comparison between Hom_{T_dR(K)}(L, L') and the
/// pi_1-invariant part of Hom(V, W) ⊗ A_dR(cover): per (degree, weight),
/// the map must be injective with image exactly the twisted invariants,
/// and compatible with differentials and composition.
struct PhiReport {
    bool passed = false;
    int degree_bound = 0, weight_cap = 0;
    std::vector<std::string> failures;
    // (q, w) -> (dim of the base hom component, dim of the invariant subspace)
    std::map<std::pair<int, int>, std::pair<long, long>> dims;
};

namespace detail {

/// Trivial-coefficient system of dimension d on the cover.
inline LocalSystem constant_cover_system(const FinSimplicialSet& cover, long d) {
    EdgeLabeling lab;
    lab.K = &cover;
    lab.group = FiniteGroup::trivial();
    return local_system_from_rep(cover, lab, Representation::trivial(FiniteGroup::trivial(), d));
}

/// Pull a Hom(V, W)-valued family back to the cover and trivialize sheetwise:
/// the sheet-g value is ρ_W(g)^{-1} (pulled-back value) ρ_V(g).
inline MatchingFamily phi_apply(const CoverData& cd, const Representation& V,
                                const Representation& W, const MatchingFamily& fam) {
    MatchingFamily out;
    out.q = fam.q;
    out.w = fam.w;
    for (int id = 0; id < cd.cover.count(); ++id) {
        int base = cd.projection[id];
        int g = cd.sheet[id];
        const auto& val = fam.at(base); // flattened W.dim x V.dim matrices of forms
        const QMat& wl = W.rho_inv(g);
        const QMat& vr = V.rho(g);
        std::vector<PolyForm> conj(val.size(), PolyForm(cd.cover.dim_of(id)));
        for (long r = 0; r < W.dim; ++r)
            for (long c = 0; c < V.dim; ++c) {
                PolyForm acc(cd.cover.dim_of(id));
                for (long a = 0; a < W.dim; ++a) {
                    if (wl.at(r, a).is_zero()) continue;
                    for (long b = 0; b < V.dim; ++b)
                        if (!vr.at(b, c).is_zero())
                            acc = acc + (wl.at(r, a) * vr.at(b, c)) * val[a * V.dim + b];
                }
                conj[r * V.dim + c] = acc;
            }
        out.values[id] = std::move(conj);
    }
    return out;
}

} // namespace detail

/// Verifies, per degree <= N and weight <= weight_cap, that the comparison
/// map into cover forms is injective, has image exactly the deck-twisted
/// invariants, and commutes with differentials and composition.
inline PhiReport phi_comparison(const FinSimplicialSet& K, const EdgeLabeling& lab,
                                const Representation& V, const Representation& W, int N,
                                int weight_cap, long coset_budget = 10000) {
    PhiReport rep;
    rep.degree_bound = N;
    rep.weight_cap = weight_cap;
    CoverData cd = universal_cover(K, lab, coset_budget);
    LocalSystem LV = local_system_from_rep(K, lab, V);
    LocalSystem LW = local_system_from_rep(K, lab, W);
    LocalSystem H = ls_hom(LV, LW);
    long h = H.dim();
    LocalSystem cover_sys = detail::constant_cover_system(cd.cover, h);
    Representation hom_rep = hom(V, W);

    for (int q = 0; q <= N; ++q)
        for (int w = 0; w <= weight_cap; ++w) {
            AdrComponent base = adr_component(K, H, q, w);
            AdrComponent cover = adr_component(cd.cover, cover_sys, q, w);
            std::string tag = "(q=" + std::to_string(q) + ", w=" + std::to_string(w) + ")";

            // images of the filtered basis under the comparison map
            std::vector<QVec> images;
            for (const auto& kv : base.filtered_kernel) {
                MatchingFamily fam = base.unflatten(kv);
                MatchingFamily img = detail::phi_apply(cd, V, W, fam);
                std::string why;
                if (!is_matching(cd.cover, cover_sys, img, &why)) {
                    rep.failures.push_back(tag + ": image is not a matching family: " + why);
                    continue;
                }
                images.push_back(cover.flatten(img));
            }

            // (a) injectivity
            long nb = (long)base.filtered_kernel.size();
            SparseMatrix img_mat(cover.total, nb);
            for (long j = 0; j < nb; ++j)
                for (long r = 0; r < cover.total; ++r)
                    if (!images[j][r].is_zero()) img_mat.set(r, j, images[j][r]);
            if (rank(img_mat) != nb)
                rep.failures.push_back(tag + ": comparison map is not injective");

            // (b) image = twisted invariants inside F_w of the cover:
            // y[σ·h] = ρ_hom(h)^{-1} y[σ] for every h
            const FiniteGroup& G = cd.group;
            long nk = (long)cover.filtered_kernel.size();
            // rows: one block per (h, cover simplex, ambient slot)
            std::vector<QVec> deck_rows_of_kernel;
            SparseMatrix deck(((long)G.size()) * cover.total, nk);
            for (long jk = 0; jk < nk; ++jk) {
                const QVec& y = cover.filtered_kernel[jk];
                long row0 = 0;
                for (int hh = 0; hh < G.size(); ++hh) {
                    const QMat& m = hom_rep.rho_inv(hh);
                    for (const auto& [sid, fb] : cover.amb) {
                        int tid = cd.translate(sid, hh);
                        for (long mi = 0; mi < fb.dim(); ++mi)
                            for (long a = 0; a < h; ++a) {
                                Rational vsum = y[cover.offset.at(tid) + mi * h + a];
                                for (long b = 0; b < h; ++b)
                                    if (!m.at(a, b).is_zero())
                                        vsum -= m.at(a, b) * y[cover.offset.at(sid) + mi * h + b];
                                if (!vsum.is_zero())
                                    deck.set(row0 + cover.offset.at(sid) + mi * h + a, jk, vsum);
                            }
                    }
                    row0 += cover.total;
                }
            }
            long invariant_dim = nk - rank(deck);
            rep.dims[{q, w}] = {nb, invariant_dim};
            if (nb != invariant_dim)
                rep.failures.push_back(tag + ": image dimension " + std::to_string(nb) +
                                       " differs from invariant dimension " +
                                       std::to_string(invariant_dim));
            // containment: every image satisfies the deck condition
            for (long j = 0; j < nb; ++j) {
                const QVec& y = images[j];
                bool ok = true;
                for (int hh = 0; hh < G.size() && ok; ++hh) {
                    const QMat& m = hom_rep.rho_inv(hh);
                    for (const auto& [sid, fb] : cover.amb) {
                        int tid = cd.translate(sid, hh);
                        for (long mi = 0; mi < fb.dim() && ok; ++mi)
                            for (long a = 0; a < h && ok; ++a) {
                                Rational vsum = y[cover.offset.at(tid) + mi * h + a];
                                for (long b = 0; b < h; ++b)
                                    if (!m.at(a, b).is_zero())
                                        vsum -= m.at(a, b) * y[cover.offset.at(sid) + mi * h + b];
                                if (!vsum.is_zero()) ok = false;
                            }
                    }
                }
                if (!ok) {
                    rep.failures.push_back(tag + ": an image violates the deck condition");
                    break;
                }
            }

            // (c) differential compatibility on the quotient representatives
            for (const auto& fam : base.basis) {
                MatchingFamily lhs = detail::phi_apply(cd, V, W, family_differential(fam));
                MatchingFamily rhs = family_differential(detail::phi_apply(cd, V, W, fam));
                for (const auto& [sid, val] : lhs.values)
                    for (size_t i = 0; i < val.size(); ++i)
                        if (!(val[i] == rhs.values.at(sid)[i])) {
                            rep.failures.push_back(tag + ": differential compatibility fails");
                            goto next_pair;
                        }
            }
        next_pair:;
        }

    // composition compatibility at low bidegrees: Φ(f)∘Φ(g) = Φ(f∘g) with
    // g ∈ Hom(L_V, L_V), f ∈ Hom(L_V, L_W)
    {
        LocalSystem HV = ls_hom(LV, LV);
        int qc = std::min(1, N), wc = std::min(2, weight_cap);
        for (int qf = 0; qf <= qc; ++qf)
            for (int qg = 0; qg <= qc; ++qg)
                for (int wf = 0; wf <= wc; ++wf)
                    for (int wg = 0; wg + wf <= wc; ++wg) {
                        AdrComponent cf = adr_component(K, H, qf, wf);
                        AdrComponent cg = adr_component(K, HV, qg, wg);
                        for (const auto& f : cf.basis)
                            for (const auto& g : cg.basis) {
                                MatchingFamily fg = tdr_compose(f, g, V.dim, V.dim, W.dim);
                                MatchingFamily lhs = detail::phi_apply(cd, V, W, fg);
                                MatchingFamily pf = detail::phi_apply(cd, V, W, f);
                                MatchingFamily pg = detail::phi_apply(cd, V, V, g);
                                MatchingFamily rhs = tdr_compose(pf, pg, V.dim, V.dim, W.dim);
                                for (const auto& [sid, val] : lhs.values)
                                    for (size_t i = 0; i < val.size(); ++i)
                                        if (!(val[i] == rhs.values.at(sid)[i]))
                                            rep.failures.push_back(
                                                "composition compatibility fails");
                            }
                    }
    }

    rep.passed = rep.failures.empty();
    return rep;
}

} // namespace tdr
