#pragma once

#include <map>
#include <string>
#include <vector>

#include "tdr/local_system.hpp"
#include "tdr/polyform.hpp"

namespace tdr {

/// An element of A_dR(K, L): one L-valued form per nondegenerate simplex,
/// compatible under all face maps (with degeneracy words routed through the
/// simplicial operators on forms). `w` records the weight filtration level:
/// every monomial in every value has weight <= w. `q` is the form degree.
struct MatchingFamily {
    int q = 0, w = 0;
    std::map<int, std::vector<PolyForm>> values; // nondeg simplex id -> dim(L) forms

    const std::vector<PolyForm>& at(int simplex_id) const {
        auto it = values.find(simplex_id);
        if (it == values.end()) throw ValidationError("family has no value on a simplex");
        return it->second;
    }
};

/// Exact face compatibility of a family with respect to a local system.
inline bool is_matching(const FinSimplicialSet& K, const LocalSystem& L,
                        const MatchingFamily& fam, std::string* why = nullptr) {
    long v = L.dim();
    for (int n = 0; n <= K.top_dim(); ++n)
        for (int sid : K.simplices(n)) {
            auto it = fam.values.find(sid);
            if (it == fam.values.end() || (long)it->second.size() != v) {
                if (why) *why = "missing or ill-sized value";
                return false;
            }
            for (const auto& f : it->second) {
                if (f.simplex_dim() != n) {
                    if (why) *why = "form on wrong simplex dimension";
                    return false;
                }
                if (f.max_weight() > fam.w) {
                    if (why) *why = "form weight exceeds the family's filtration level";
                    return false;
                }
                auto deg = f.degree();
                if (deg && *deg != fam.q) {
                    if (why) *why = "form of wrong degree";
                    return false;
                }
            }
        }
    for (int n = 1; n <= K.top_dim(); ++n)
        for (int sid : K.simplices(n)) {
            SimplexRef s = K.ref(sid);
            const auto& val = fam.at(sid);
            for (int i = 0; i <= n; ++i) {
                QMat T = L.face_transport(s, i);
                const SimplexRef& face = K.stored_face(sid, i);
                const auto& fval = fam.at(face.id);
                for (long a = 0; a < v; ++a) {
                    PolyForm lhs(n - 1);
                    for (long b = 0; b < v; ++b)
                        if (!T.at(a, b).is_zero())
                            lhs = lhs + T.at(a, b) * form_pullback(coface_map(i, n), val[b]);
                    PolyForm rhs = form_pullback(face.epi, fval[a]);
                    if (!(lhs == rhs)) {
                        if (why)
                            *why = "face constraint fails at simplex " + std::to_string(sid) +
                                   " face " + std::to_string(i);
                        return false;
                    }
                }
            }
        }
    return true;
}

/// The weight-w slice of A_dR^q(K, L).
///
/// A_dR carries the exhaustive filtration F_w by the per-simplex weight of
/// the forms; face maps never raise weight and d preserves it, so each F_w
/// is a finite subcomplex computed exactly from the face-compatibility
/// linear system. The weight-w piece is the quotient F_w / F_{w-1},
/// realized concretely as the span of the top-weight parts of F_w-solutions
/// with the entrywise differential (d is weight-exact, so that differential
/// is the induced one). `basis` holds honest representatives in F_w whose
/// top parts form a basis of the quotient.
struct AdrComponent {
    int q = 0, w = 0;
    long ls_dim = 0;
    std::map<int, FilteredFormBasis> amb;   // per nondeg simplex id, weights <= w
    std::map<int, FormBasis> top;           // per nondeg simplex id, weight exactly w
    std::map<int, long> offset;             // flat ambient offsets
    std::map<int, long> top_offset;         // flat top-part offsets
    long total = 0, top_total = 0;
    std::vector<QVec> filtered_kernel;      // basis of F_w in ambient coordinates
    std::vector<MatchingFamily> basis;      // representatives of F_w / F_{w-1}
    std::vector<QVec> top_parts;            // their weight-w parts, flat top coordinates

    long dim() const { return (long)basis.size(); }          // dim F_w / F_{w-1}
    long filtered_dim() const { return (long)filtered_kernel.size(); } // dim F_w

    QVec flatten(const MatchingFamily& fam) const {
        QVec out(total);
        for (const auto& [sid, fb] : amb)
            for (long a = 0; a < ls_dim; ++a) {
                QVec c = fb.coords_of(fam.at(sid)[a]);
                for (long m = 0; m < fb.dim(); ++m) out[offset.at(sid) + m * ls_dim + a] = c[m];
            }
        return out;
    }

    QVec top_part(const MatchingFamily& fam) const {
        QVec out(top_total);
        for (const auto& [sid, fb] : top)
            for (long a = 0; a < ls_dim; ++a) {
                QVec c = fb.coords_of_weight_part(fam.at(sid)[a]);
                for (long m = 0; m < fb.dim(); ++m)
                    out[top_offset.at(sid) + m * ls_dim + a] = c[m];
            }
        return out;
    }

    MatchingFamily unflatten(const QVec& x) const {
        MatchingFamily fam;
        fam.q = q;
        fam.w = w;
        for (const auto& [sid, fb] : amb) {
            std::vector<PolyForm> val;
            for (long a = 0; a < ls_dim; ++a) {
                QVec c(fb.dim());
                for (long m = 0; m < fb.dim(); ++m) c[m] = x[offset.at(sid) + m * ls_dim + a];
                val.push_back(fb.from_coords(c));
            }
            fam.values[sid] = std::move(val);
        }
        return fam;
    }

    /// Coordinates of the weight-w part of a family in the quotient basis.
    QVec quotient_coordinates(const MatchingFamily& fam) const {
        auto c = coordinates_in_span(top_parts, top_part(fam));
        if (!c) throw InternalCheckFailure("family's top part is outside the weight slice");
        return *c;
    }
};

inline AdrComponent adr_component(const FinSimplicialSet& K, const LocalSystem& L, int q, int w) {
    if (L.K != &K) throw ValidationError("local system is not over this complex");
    if (q < 0 || w < 0) throw ValidationError("negative degree or weight");
    AdrComponent comp;
    comp.q = q;
    comp.w = w;
    comp.ls_dim = L.dim();
    for (int n = 0; n <= K.top_dim(); ++n)
        for (int sid : K.simplices(n)) {
            FilteredFormBasis fb(n, q, w);
            FormBasis tb(n, q, w);
            comp.offset[sid] = comp.total;
            comp.top_offset[sid] = comp.top_total;
            comp.total += fb.dim() * comp.ls_dim;
            comp.top_total += tb.dim() * comp.ls_dim;
            comp.amb.emplace(sid, std::move(fb));
            comp.top.emplace(sid, std::move(tb));
        }

    // exact face-compatibility system over the filtered ambient space
    long rows = 0;
    std::vector<std::tuple<long, long, Rational>> entries;
    for (int n = 1; n <= K.top_dim(); ++n) {
        if (K.simplices(n).empty()) continue;
        FilteredFormBasis row_basis(n - 1, q, w);
        if (row_basis.dim() == 0) continue;
        FilteredFormBasis src_basis(n, q, w);
        std::map<int, std::vector<QVec>> face_coords; // face index -> per source monomial
        for (int i = 0; i <= n; ++i) {
            std::vector<QVec> imgs;
            for (long m = 0; m < src_basis.dim(); ++m) {
                PolyForm f(n);
                f.add_term(src_basis.monos[m], 1);
                imgs.push_back(row_basis.coords_of(form_pullback(coface_map(i, n), f)));
            }
            face_coords[i] = std::move(imgs);
        }
        for (int sid : K.simplices(n)) {
            SimplexRef s = K.ref(sid);
            for (int i = 0; i <= n; ++i) {
                QMat T = L.face_transport(s, i);
                const SimplexRef& face = K.stored_face(sid, i);
                const FilteredFormBasis& tgt_basis = comp.amb.at(face.id);
                std::vector<QVec> word_imgs;
                for (long m = 0; m < tgt_basis.dim(); ++m) {
                    PolyForm f(K.dim_of(face.id));
                    f.add_term(tgt_basis.monos[m], 1);
                    word_imgs.push_back(row_basis.coords_of(form_pullback(face.epi, f)));
                }
                for (long rm = 0; rm < row_basis.dim(); ++rm)
                    for (long a = 0; a < comp.ls_dim; ++a) {
                        long row = rows + rm * comp.ls_dim + a;
                        for (long m = 0; m < src_basis.dim(); ++m) {
                            const Rational& u = face_coords[i][m][rm];
                            if (u.is_zero()) continue;
                            for (long b = 0; b < comp.ls_dim; ++b)
                                if (!T.at(a, b).is_zero())
                                    entries.push_back({row,
                                                       comp.offset.at(sid) + m * comp.ls_dim + b,
                                                       T.at(a, b) * u});
                        }
                        for (long m = 0; m < tgt_basis.dim(); ++m) {
                            const Rational& u = word_imgs[m][rm];
                            if (!u.is_zero())
                                entries.push_back(
                                    {row, comp.offset.at(face.id) + m * comp.ls_dim + a, -u});
                        }
                    }
                rows += row_basis.dim() * comp.ls_dim;
            }
        }
    }
    SparseMatrix sys(rows, comp.total);
    for (const auto& [r, c, val] : entries) sys.add(r, c, val);
    comp.filtered_kernel = kernel_basis(sys);

    // top-weight projections of the solutions; pivot columns of the projected
    // matrix select representatives of F_w / F_{w-1}
    long nk = (long)comp.filtered_kernel.size();
    SparseMatrix proj(comp.top_total, nk);
    std::vector<QVec> proj_cols;
    for (long j = 0; j < nk; ++j) {
        MatchingFamily fam = comp.unflatten(comp.filtered_kernel[j]);
        QVec t = comp.top_part(fam);
        proj_cols.push_back(t);
        for (long r = 0; r < comp.top_total; ++r)
            if (!t[r].is_zero()) proj.set(r, j, t[r]);
    }
    std::vector<long> rep_cols;
    if (comp.top_total == 0 || nk == 0) {
        // no weight-w coordinates at all: the quotient is zero
    } else if (detail::use_dense(proj)) {
        detail::DenseElim e(proj);
        e.run();
        for (const auto& [r, c] : e.pivots) rep_cols.push_back(c);
    } else {
        detail::Eliminator e(proj);
        e.run();
        for (const auto& [r, c] : e.pivots) rep_cols.push_back(c);
    }
    std::sort(rep_cols.begin(), rep_cols.end());
    for (long c : rep_cols) {
        comp.basis.push_back(comp.unflatten(comp.filtered_kernel[c]));
        comp.top_parts.push_back(proj_cols[c]);
    }
    return comp;
}

inline MatchingFamily family_differential(const MatchingFamily& fam) {
    MatchingFamily out;
    out.q = fam.q + 1;
    out.w = fam.w;
    for (const auto& [sid, val] : fam.values) {
        std::vector<PolyForm> dv;
        dv.reserve(val.size());
        for (const auto& f : val) dv.push_back(differential(f));
        out.values[sid] = std::move(dv);
    }
    return out;
}

/// The weight-w quotient complex gr_w A_dR(K, L) across degrees.
struct AdrWeightComplex {
    int w = 0;
    std::vector<AdrComponent> comps; // q = 0 .. qmax
    std::vector<long> dims;
    std::vector<SparseMatrix> diffs;

    CochainComplex complex() const { return CochainComplex(0, dims, diffs); }
};

inline AdrWeightComplex adr_weight_complex(const FinSimplicialSet& K, const LocalSystem& L,
                                           int w) {
    AdrWeightComplex out;
    out.w = w;
    int qmax = std::min(K.top_dim(), w);
    for (int q = 0; q <= qmax; ++q) out.comps.push_back(adr_component(K, L, q, w));
    for (int q = 0; q <= qmax; ++q) out.dims.push_back(out.comps[q].dim());
    for (int q = 0; q < qmax; ++q) {
        SparseMatrix d(out.dims[q + 1], out.dims[q]);
        for (long j = 0; j < out.dims[q]; ++j) {
            QVec c = out.comps[q + 1].quotient_coordinates(
                family_differential(out.comps[q].basis[j]));
            for (long i = 0; i < out.dims[q + 1]; ++i)
                if (!c[i].is_zero()) d.set(i, j, c[i]);
        }
        out.diffs.push_back(d);
    }
    return out;
}

/// Per-degree cohomology totals of A_dR accumulated over weights 0..W until
/// they match the twisted simplicial oracle in every degree; the per-weight
/// dimensions are nonnegative and may never overshoot the oracle.
struct StabilizationReport {
    std::map<int, long> oracle;
    std::map<int, long> totals;
    std::map<int, std::map<int, long>> per_weight;
    bool stabilized = false;
    int stabilized_at = -1;
    int weight_cap = 0;
};

inline StabilizationReport adr_cohomology(const FinSimplicialSet& K, const LocalSystem& L,
                                          int weight_cap) {
    if (weight_cap < 0) throw ValidationError("negative weight cap");
    StabilizationReport rep;
    rep.weight_cap = weight_cap;
    rep.oracle = twisted_cochain_complex(K, L).cohomology_dims();
    for (int n = 0; n <= K.top_dim(); ++n) rep.totals[n] = 0;
    for (int w = 0; w <= weight_cap; ++w) {
        auto h = adr_weight_complex(K, L, w).complex().cohomology_dims();
        for (int n = 0; n <= K.top_dim(); ++n) rep.per_weight[w][n] = h.count(n) ? h.at(n) : 0;
        for (int n = 0; n <= K.top_dim(); ++n) {
            rep.totals[n] += rep.per_weight[w][n];
            if (rep.totals[n] > rep.oracle[n])
                throw InternalCheckFailure(
                    "weight totals exceed the simplicial oracle; the de Rham comparison fails");
        }
        bool done = true;
        for (int n = 0; n <= K.top_dim(); ++n)
            if (rep.totals[n] != rep.oracle[n]) done = false;
        if (done) {
            rep.stabilized = true;
            rep.stabilized_at = w;
            break;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Composition, identities, pullbacks, internal hom
// ---------------------------------------------------------------------------

/// Identity of Hom(L, L): constant identity matrices, weight 0, degree 0.
inline MatchingFamily identity_family(const FinSimplicialSet& K, const LocalSystem& L) {
    MatchingFamily fam;
    fam.q = 0;
    fam.w = 0;
    long v = L.dim();
    for (int n = 0; n <= K.top_dim(); ++n)
        for (int sid : K.simplices(n)) {
            std::vector<PolyForm> val;
            for (long r = 0; r < v; ++r)
                for (long c = 0; c < v; ++c)
                    val.push_back(r == c ? PolyForm::one(n) : PolyForm(n));
            fam.values[sid] = std::move(val);
        }
    return fam;
}

/// Simplexwise wedge-and-compose: f ∈ Hom(L_mid, L_tgt), g ∈ Hom(L_src, L_mid),
/// result in Hom(L_src, L_tgt); degrees and weights add. The form part of f
/// wedges on the left, realizing (η·b)∘(ω·a) = (η·ω)·(b∘a).
inline MatchingFamily tdr_compose(const MatchingFamily& f, const MatchingFamily& g, long dim_src,
                                  long dim_mid, long dim_tgt) {
    MatchingFamily out;
    out.q = f.q + g.q;
    out.w = f.w + g.w;
    for (const auto& [sid, fval] : f.values) {
        auto it = g.values.find(sid);
        if (it == g.values.end())
            throw ValidationError("tdr_compose: families over different complexes");
        const auto& gval = it->second;
        if ((long)fval.size() != dim_tgt * dim_mid || (long)gval.size() != dim_mid * dim_src)
            throw ValidationError("tdr_compose: family value shapes mismatch");
        int p = !fval.empty() ? fval.front().simplex_dim()
                              : (!gval.empty() ? gval.front().simplex_dim() : 0);
        std::vector<PolyForm> val;
        val.reserve(dim_tgt * dim_src);
        for (long r = 0; r < dim_tgt; ++r)
            for (long c = 0; c < dim_src; ++c) {
                PolyForm acc(p);
                for (long b = 0; b < dim_mid; ++b)
                    acc = acc + wedge(fval[r * dim_mid + b], gval[b * dim_src + c]);
                val.push_back(acc);
            }
        out.values[sid] = std::move(val);
    }
    return out;
}

/// A dimension-preserving simplicial map given on nondegenerate simplices.
struct SimplicialMap {
    const FinSimplicialSet* src = nullptr;
    const FinSimplicialSet* dst = nullptr;
    std::vector<SimplexRef> image; // per src nondeg id

    void validate() const {
        if (!src || !dst) throw ValidationError("simplicial map without endpoints");
        if ((int)image.size() != src->count())
            throw ValidationError("simplicial map needs one image per nondegenerate simplex");
        for (int id = 0; id < src->count(); ++id) {
            if (image[id].dim() != src->dim_of(id))
                throw ValidationError("simplicial map image dimension mismatch");
            if (image[id].id < 0 || image[id].id >= dst->count())
                throw ValidationError("simplicial map image id out of range");
        }
        for (int id = 0; id < src->count(); ++id) {
            int d = src->dim_of(id);
            for (int i = 0; i <= d && d > 0; ++i) {
                const SimplexRef& f = src->stored_face(id, i);
                SimplexRef lhs = dst->face(i, image[id]);
                SimplexRef rhs{image[f.id].id, compose_monotone(image[f.id].epi, f.epi)};
                if (lhs != rhs) throw ValidationError("map data is not simplicial");
            }
        }
    }
};

/// The cover projection as a simplicial map.
inline SimplicialMap projection_map(const CoverData& cd, const FinSimplicialSet& base) {
    SimplicialMap f;
    f.src = &cd.cover;
    f.dst = &base;
    for (int id = 0; id < cd.cover.count(); ++id) f.image.push_back(base.ref(cd.projection[id]));
    f.validate();
    return f;
}

/// Pullback of a local system along a simplicial map.
inline LocalSystem pullback_system(const SimplicialMap& f, const LocalSystem& L) {
    if (L.K != f.dst) throw ValidationError("pullback: system not over the map target");
    EdgeLabeling lab;
    lab.K = f.src;
    lab.group = L.labeling.group;
    for (int e : f.src->simplices(1)) {
        int g = L.labeling.label_of(f.image[e]);
        if (g != lab.group.identity()) lab.label[e] = g;
    }
    return local_system_from_rep(*f.src, lab, L.rep);
}

/// Pullback of a matching family along a simplicial map; degree-, weight-,
/// and composition-preserving.
inline MatchingFamily pullback_family(const SimplicialMap& f, const MatchingFamily& fam) {
    MatchingFamily out;
    out.q = fam.q;
    out.w = fam.w;
    for (int id = 0; id < f.src->count(); ++id) {
        const SimplexRef& im = f.image[id];
        const auto& val = fam.at(im.id);
        std::vector<PolyForm> v;
        v.reserve(val.size());
        for (const auto& form : val) v.push_back(form_pullback(im.epi, form));
        out.values[id] = std::move(v);
    }
    return out;
}

/// Internal-hom action on hom-complex elements:
/// Hom(f, g)(α) = (-1)^{deg f (deg g + deg α)} g∘α∘f, with f ∈ Hom(X', X),
/// α ∈ Hom(X, Y), g ∈ Hom(Y, Y').
inline MatchingFamily internal_hom_action(const MatchingFamily& f, const MatchingFamily& g,
                                          const MatchingFamily& alpha, long dim_xp, long dim_x,
                                          long dim_y, long dim_yp) {
    MatchingFamily af = tdr_compose(alpha, f, dim_xp, dim_x, dim_y);
    MatchingFamily gaf = tdr_compose(g, af, dim_xp, dim_y, dim_yp);
    long s = (long)f.q * ((long)g.q + (long)alpha.q);
    if (s % 2) {
        for (auto& [sid, val] : gaf.values)
            for (auto& form : val) form = Rational(-1) * form;
    }
    return gaf;
}

/// The weight-indexed family of hom complexes Hom_{T_dR(K)}(L, L') =
/// A_dR(K, Hom(L, L')).
struct TdrHomComplex {
    LocalSystem hom_system;
    std::map<int, AdrWeightComplex> by_weight;
};

inline TdrHomComplex tdr_hom_complex(const FinSimplicialSet& K, const LocalSystem& L,
                                     const LocalSystem& Lp, int weight_cap) {
    TdrHomComplex out{ls_hom(L, Lp), {}};
    for (int w = 0; w <= weight_cap; ++w)
        out.by_weight.emplace(w, adr_weight_complex(K, out.hom_system, w));
    return out;
}

} // namespace tdr
