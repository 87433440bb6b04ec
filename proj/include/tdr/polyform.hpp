#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tdr/linalg.hpp"

namespace tdr {

/// Monomial t_1^{a_1}...t_p^{a_p} dt_{i_1} ∧ ... ∧ dt_{i_q} in the reduced
/// coordinates of the p-simplex (t_0 and dt_0 eliminated). dts is strictly
/// increasing. Weight counts every t and every dt once.
struct FormMonomial {
    std::vector<int> exps; // size p, exponents of t_1..t_p
    std::vector<int> dts;  // strictly increasing subset of {1..p}

    int degree() const { return (int)dts.size(); }
    int weight() const {
        int w = (int)dts.size();
        for (int e : exps) w += e;
        return w;
    }

    auto operator<=>(const FormMonomial&) const = default;
};

/// A polynomial differential form on the p-simplex, stored as a normal form
/// in reduced coordinates, so equality is coefficient comparison.
class PolyForm {
public:
    explicit PolyForm(int simplex_dim = 0) : p_(simplex_dim) {
        if (simplex_dim < 0) throw ValidationError("negative simplex dimension");
    }

    static PolyForm one(int p) { return constant(p, 1); }

    static PolyForm constant(int p, const Rational& c) {
        PolyForm f(p);
        f.add_term(FormMonomial{std::vector<int>(p, 0), {}}, c);
        return f;
    }

    /// The barycentric generator t_j, 1 <= j <= p.
    static PolyForm t(int p, int j) {
        if (j < 1 || j > p) throw ValidationError("t index out of range");
        FormMonomial m{std::vector<int>(p, 0), {}};
        m.exps[j - 1] = 1;
        PolyForm f(p);
        f.add_term(m, 1);
        return f;
    }

    static PolyForm dt(int p, int j) {
        if (j < 1 || j > p) throw ValidationError("dt index out of range");
        PolyForm f(p);
        f.add_term(FormMonomial{std::vector<int>(p, 0), {j}}, 1);
        return f;
    }

    static PolyForm monomial(int p, std::vector<int> exps, std::vector<int> dts,
                             const Rational& coeff) {
        if ((long)exps.size() != p) throw ValidationError("monomial exponent list size != p");
        for (size_t i = 1; i < dts.size(); ++i)
            if (dts[i - 1] >= dts[i]) throw ValidationError("monomial dt indices not increasing");
        for (int j : dts)
            if (j < 1 || j > p) throw ValidationError("monomial dt index out of range");
        for (int e : exps)
            if (e < 0) throw ValidationError("negative exponent");
        PolyForm f(p);
        f.add_term(FormMonomial{std::move(exps), std::move(dts)}, coeff);
        return f;
    }

    int simplex_dim() const { return p_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<FormMonomial, Rational>& terms() const { return terms_; }

    void add_term(const FormMonomial& m, const Rational& c) {
        if (c.is_zero()) return;
        if ((int)m.exps.size() != p_) throw ValidationError("monomial arity mismatch");
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_[m] = c;
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    /// Common dt-count of all terms; nullopt for 0 and for mixed-degree sums.
    std::optional<int> degree() const {
        std::optional<int> q;
        for (const auto& [m, c] : terms_) {
            if (q && *q != m.degree()) return std::nullopt;
            q = m.degree();
        }
        return q;
    }

    bool is_weight_homogeneous() const {
        std::optional<int> w;
        for (const auto& [m, c] : terms_) {
            if (w && *w != m.weight()) return false;
            w = m.weight();
        }
        return true;
    }

    int max_weight() const {
        int w = 0;
        for (const auto& [m, c] : terms_) w = std::max(w, m.weight());
        return w;
    }

    PolyForm weight_component(int w) const {
        PolyForm out(p_);
        for (const auto& [m, c] : terms_)
            if (m.weight() == w) out.add_term(m, c);
        return out;
    }

    PolyForm operator-() const {
        PolyForm out(p_);
        for (const auto& [m, c] : terms_) out.add_term(m, -c);
        return out;
    }

    friend PolyForm operator+(const PolyForm& a, const PolyForm& b) {
        if (a.p_ != b.p_) throw ValidationError("form sum: simplex dimension mismatch");
        PolyForm out = a;
        for (const auto& [m, c] : b.terms_) out.add_term(m, c);
        return out;
    }

    friend PolyForm operator-(const PolyForm& a, const PolyForm& b) { return a + (-b); }

    friend PolyForm operator*(const Rational& c, const PolyForm& a) {
        PolyForm out(a.p_);
        for (const auto& [m, v] : a.terms_) out.add_term(m, c * v);
        return out;
    }

    friend bool operator==(const PolyForm& a, const PolyForm& b) {
        return a.p_ == b.p_ && a.terms_ == b.terms_;
    }

    /// Graded-commutative product.
    friend PolyForm wedge(const PolyForm& a, const PolyForm& b) {
        if (a.p_ != b.p_) throw ValidationError("wedge: simplex dimension mismatch");
        PolyForm out(a.p_);
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                auto merged = merge_dts(ma.dts, mb.dts);
                if (!merged) continue; // repeated dt
                FormMonomial m;
                m.exps.resize(a.p_);
                for (int j = 0; j < a.p_; ++j) m.exps[j] = ma.exps[j] + mb.exps[j];
                m.dts = merged->first;
                Rational c = ca * cb;
                if (merged->second) c = -c;
                out.add_term(m, c);
            }
        }
        return out;
    }

    /// d(t_i) = dt_i extended by the Leibniz rule; degree +1, weight preserved.
    friend PolyForm differential(const PolyForm& a) {
        PolyForm out(a.p_);
        for (const auto& [m, c] : a.terms_) {
            for (int j = 1; j <= a.p_; ++j) {
                int e = m.exps[j - 1];
                if (e == 0) continue;
                // c * e * t^{exps - delta_j} dt_j ∧ dt_I
                bool dup = false;
                int inversions = 0;
                for (int i : m.dts) {
                    if (i == j) { dup = true; break; }
                    if (i < j) ++inversions;
                }
                if (dup) continue;
                FormMonomial n = m;
                n.exps[j - 1] -= 1;
                n.dts.insert(std::upper_bound(n.dts.begin(), n.dts.end(), j), j);
                Rational coeff = c * Rational(e);
                if (inversions % 2) coeff = -coeff;
                out.add_term(n, coeff);
            }
        }
        return out;
    }

    /// Substitution homomorphism: each reduced generator t_j of the source is
    /// sent to images[j-1] (a degree-0 form), dt_j to its differential.
    PolyForm substitute(int target_dim, const std::vector<PolyForm>& images) const {
        if ((long)images.size() != p_) throw ValidationError("substitution image count mismatch");
        std::vector<PolyForm> dimages;
        dimages.reserve(p_);
        for (const auto& im : images) {
            if (im.simplex_dim() != target_dim)
                throw ValidationError("substitution image dimension mismatch");
            dimages.push_back(differential(im));
        }
        PolyForm out(target_dim);
        for (const auto& [m, c] : terms_) {
            PolyForm acc = PolyForm::constant(target_dim, c);
            for (int j = 1; j <= p_ && !acc.is_zero(); ++j)
                for (int e = 0; e < m.exps[j - 1]; ++e) acc = wedge(acc, images[j - 1]);
            for (int j : m.dts) {
                if (acc.is_zero()) break;
                acc = wedge(acc, dimages[j - 1]);
            }
            out = out + acc;
        }
        return out;
    }

    /// Evaluate a degree-0 form at a point (dt-terms contribute nothing).
    Rational evaluate(const std::vector<Rational>& vals) const {
        if ((long)vals.size() != p_) throw ValidationError("evaluate: wrong number of values");
        Rational out(0);
        for (const auto& [m, c] : terms_) {
            if (!m.dts.empty()) continue;
            Rational term = c;
            for (int j = 0; j < p_; ++j)
                for (int e = 0; e < m.exps[j]; ++e) term *= vals[j];
            out += term;
        }
        return out;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << c.str();
            for (int j = 0; j < p_; ++j) {
                if (m.exps[j] == 0) continue;
                os << "*t" << (j + 1);
                if (m.exps[j] > 1) os << "^" << m.exps[j];
            }
            for (int i : m.dts) os << "*dt" << i;
        }
        return os.str();
    }

private:
    // merged dt list plus sign flag (true = negative), nullopt on collision
    static std::optional<std::pair<std::vector<int>, bool>> merge_dts(
        const std::vector<int>& a, const std::vector<int>& b) {
        std::vector<int> out;
        out.reserve(a.size() + b.size());
        size_t i = 0, j = 0;
        long inversions = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] == b[j]) return std::nullopt;
            if (a[i] < b[j]) {
                out.push_back(a[i++]);
            } else {
                // b[j] moves past the remaining a-part
                inversions += (long)(a.size() - i);
                out.push_back(b[j++]);
            }
        }
        while (i < a.size()) out.push_back(a[i++]);
        while (j < b.size()) out.push_back(b[j++]);
        return std::make_pair(std::move(out), inversions % 2 == 1);
    }

    int p_;
    std::map<FormMonomial, Rational> terms_;
};

/// Contravariant structure map of the simplicial cdga ∇(*,*): for a monotone
/// f: [m] -> [n] (given by its images), the algebra map ∇(n,*) -> ∇(m,*)
/// sending barycentric t_j to Σ_{a ∈ f^{-1}(j)} t_a, in reduced coordinates.
inline PolyForm form_pullback(const std::vector<int>& f, const PolyForm& a) {
    int n = a.simplex_dim();
    int m = (int)f.size() - 1;
    if (f.empty()) throw ValidationError("form_pullback: empty map");
    for (size_t i = 0; i + 1 < f.size(); ++i)
        if (f[i] > f[i + 1]) throw ValidationError("form_pullback: map not monotone");
    if (f.front() < 0 || f.back() > n) throw ValidationError("form_pullback: range mismatch");
    std::vector<PolyForm> images;
    images.reserve(n);
    for (int j = 1; j <= n; ++j) {
        PolyForm img(m);
        bool hits_zero = false;
        for (int a_i = 0; a_i <= m; ++a_i) {
            if (f[a_i] != j) continue;
            if (a_i == 0)
                hits_zero = true;
            else
                img = img + PolyForm::t(m, a_i);
        }
        if (hits_zero) {
            // t_0 of the source = 1 - Σ t's
            PolyForm t0 = PolyForm::one(m);
            for (int b = 1; b <= m; ++b) t0 = t0 - PolyForm::t(m, b);
            img = img + t0;
        }
        images.push_back(img);
    }
    return a.substitute(m, images);
}

/// d_i: ∇(p,*) → ∇(p-1,*). On barycentric generators t_j ↦ t_j (j<i),
/// 0 (j=i), t_{j-1} (j>i), re-expressed in reduced coordinates of the target.
inline PolyForm face_map(int i, const PolyForm& a) {
    int p = a.simplex_dim();
    if (p < 1) throw ValidationError("face_map: simplex dimension must be >= 1");
    if (i < 0 || i > p) throw ValidationError("face_map: index out of range");
    std::vector<int> delta;
    for (int x = 0; x <= p; ++x)
        if (x != i) delta.push_back(x);
    return form_pullback(delta, a);
}

/// s_i: ∇(p,*) → ∇(p+1,*). t_j ↦ t_j (j<i), t_i + t_{i+1} (j=i), t_{j+1} (j>i).
inline PolyForm degeneracy_map(int i, const PolyForm& a) {
    int p = a.simplex_dim();
    if (i < 0 || i > p) throw ValidationError("degeneracy_map: index out of range");
    std::vector<int> sigma;
    for (int x = 0; x <= p + 1; ++x) sigma.push_back(x <= i ? x : x - 1);
    return form_pullback(sigma, a);
}

inline long long binomial(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    long long r = 1;
    for (long long i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

/// Monomials spanning the weight-w, degree-q component of ∇(p,*); size
/// C(w-q+p-1, p-1)·C(p, q) when w >= q, empty otherwise.
inline std::vector<FormMonomial> weight_monomials(int p, int q, int w) {
    std::vector<FormMonomial> out;
    if (q < 0 || w < q || q > p) return out;
    if (p == 0) {
        if (q == 0 && w == 0) out.push_back(FormMonomial{{}, {}});
        return out;
    }
    // all dt index subsets of size q
    std::vector<std::vector<int>> subsets;
    std::vector<int> cur;
    auto rec_dts = [&](auto&& self, int start) -> void {
        if ((int)cur.size() == q) {
            subsets.push_back(cur);
            return;
        }
        for (int j = start; j <= p; ++j) {
            cur.push_back(j);
            self(self, j + 1);
            cur.pop_back();
        }
    };
    rec_dts(rec_dts, 1);
    // all exponent vectors summing to w - q
    std::vector<std::vector<int>> expvecs;
    std::vector<int> exps(p, 0);
    auto rec_exps = [&](auto&& self, int idx, int remaining) -> void {
        if (idx == p - 1) {
            exps[idx] = remaining;
            expvecs.push_back(exps);
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            exps[idx] = e;
            self(self, idx + 1, remaining - e);
        }
    };
    rec_exps(rec_exps, 0, w - q);
    for (const auto& ev : expvecs)
        for (const auto& ss : subsets) out.push_back(FormMonomial{ev, ss});
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<PolyForm> monomial_basis(int p, int q, int w) {
    std::vector<PolyForm> out;
    for (const auto& m : weight_monomials(p, q, w)) {
        PolyForm f(p);
        f.add_term(m, 1);
        out.push_back(f);
    }
    return out;
}

/// Indexed monomial list for degree q and all weights <= w, ordered by
/// weight then lexicographically, so lower filtration stages are prefixes.
struct FilteredFormBasis {
    int p = 0, q = 0, w = 0;
    std::vector<FormMonomial> monos;
    std::map<FormMonomial, long> index;

    FilteredFormBasis() = default;
    FilteredFormBasis(int p_, int q_, int w_) : p(p_), q(q_), w(w_) {
        for (int v = q_; v <= w_; ++v)
            for (const auto& m : weight_monomials(p_, q_, v)) monos.push_back(m);
        for (long i = 0; i < (long)monos.size(); ++i) index[monos[i]] = i;
    }

    long dim() const { return (long)monos.size(); }

    QVec coords_of(const PolyForm& f) const {
        QVec v(dim());
        for (const auto& [m, c] : f.terms()) {
            auto it = index.find(m);
            if (it == index.end())
                throw ValidationError("form term outside the filtered basis");
            v[it->second] = c;
        }
        return v;
    }

    PolyForm from_coords(const QVec& v) const {
        if ((long)v.size() != dim()) throw ValidationError("form coordinate length mismatch");
        PolyForm f(p);
        for (long i = 0; i < dim(); ++i) f.add_term(monos[i], v[i]);
        return f;
    }
};

/// Indexed basis of a (q, w) component, for building exact linear systems.
struct FormBasis {
    int p = 0, q = 0, w = 0;
    std::vector<FormMonomial> monos;
    std::map<FormMonomial, long> index;

    FormBasis() = default;
    FormBasis(int p_, int q_, int w_) : p(p_), q(q_), w(w_), monos(weight_monomials(p_, q_, w_)) {
        for (long i = 0; i < (long)monos.size(); ++i) index[monos[i]] = i;
    }

    long dim() const { return (long)monos.size(); }

    /// Coordinates of the weight-w part of `f` (other weights are ignored;
    /// degree-q' != q terms of weight w would be a caller bug and throw).
    QVec coords_of_weight_part(const PolyForm& f) const {
        QVec v(dim());
        for (const auto& [m, c] : f.terms()) {
            if (m.weight() != w) continue;
            auto it = index.find(m);
            if (it == index.end()) throw InternalCheckFailure("form term outside expected basis");
            v[it->second] = c;
        }
        return v;
    }

    PolyForm from_coords(const QVec& v) const {
        if ((long)v.size() != dim()) throw ValidationError("form coordinate length mismatch");
        PolyForm f(p);
        for (long i = 0; i < dim(); ++i) f.add_term(monos[i], v[i]);
        return f;
    }
};

} // namespace tdr
