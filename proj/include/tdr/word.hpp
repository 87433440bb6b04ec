#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tdr/cochain.hpp"
#include "tdr/representation.hpp"

namespace tdr {

/// A word over an alphabet and the formal symbols 1, 0, closed under the
/// binary operations tensor, hom, oplus.
class Word {
public:
    enum class Kind { Leaf, One, Zero, Tensor, Hom, Oplus };

    static Word leaf(std::string name) {
        Word w;
        w.kind_ = Kind::Leaf;
        w.leaf_ = std::move(name);
        return w;
    }
    static Word one() {
        Word w;
        w.kind_ = Kind::One;
        return w;
    }
    static Word zero() {
        Word w;
        w.kind_ = Kind::Zero;
        return w;
    }
    static Word tensor(Word a, Word b) { return node(Kind::Tensor, std::move(a), std::move(b)); }
    static Word hom(Word a, Word b) { return node(Kind::Hom, std::move(a), std::move(b)); }
    static Word oplus(Word a, Word b) { return node(Kind::Oplus, std::move(a), std::move(b)); }

    Kind kind() const { return kind_; }
    const std::string& leaf_name() const { return leaf_; }
    const Word& left() const { return *left_; }
    const Word& right() const { return *right_; }

    int depth() const {
        if (!left_) return 0;
        return 1 + std::max(left_->depth(), right_->depth());
    }

    std::string str() const {
        switch (kind_) {
            case Kind::Leaf: return leaf_;
            case Kind::One: return "1";
            case Kind::Zero: return "0";
            case Kind::Tensor: return "tensor(" + left_->str() + "," + right_->str() + ")";
            case Kind::Hom: return "hom(" + left_->str() + "," + right_->str() + ")";
            case Kind::Oplus: return "oplus(" + left_->str() + "," + right_->str() + ")";
        }
        return "";
    }

    friend bool operator==(const Word& a, const Word& b) { return a.str() == b.str(); }

    /// CLI word syntax: `1`, `0`, leaf names, tensor(x,y), hom(x,y), oplus(x,y).
    static Word parse(const std::string& text) {
        size_t pos = 0;
        Word w = parse_at(text, pos);
        skip_ws(text, pos);
        if (pos != text.size()) throw ValidationError("trailing characters in word: '" + text + "'");
        return w;
    }

private:
    static Word node(Kind k, Word a, Word b) {
        Word w;
        w.kind_ = k;
        w.left_ = std::make_shared<Word>(std::move(a));
        w.right_ = std::make_shared<Word>(std::move(b));
        return w;
    }

    static void skip_ws(const std::string& s, size_t& pos) {
        while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
    }

    static Word parse_at(const std::string& s, size_t& pos) {
        skip_ws(s, pos);
        size_t start = pos;
        while (pos < s.size() && s[pos] != '(' && s[pos] != ')' && s[pos] != ',' &&
               !std::isspace((unsigned char)s[pos]))
            ++pos;
        std::string tok = s.substr(start, pos - start);
        if (tok.empty()) throw ValidationError("empty token in word");
        skip_ws(s, pos);
        if ((tok == "tensor" || tok == "hom" || tok == "oplus") && pos < s.size() && s[pos] == '(') {
            ++pos;
            Word a = parse_at(s, pos);
            skip_ws(s, pos);
            if (pos >= s.size() || s[pos] != ',') throw ValidationError("expected ',' in word");
            ++pos;
            Word b = parse_at(s, pos);
            skip_ws(s, pos);
            if (pos >= s.size() || s[pos] != ')') throw ValidationError("expected ')' in word");
            ++pos;
            if (tok == "tensor") return tensor(std::move(a), std::move(b));
            if (tok == "hom") return hom(std::move(a), std::move(b));
            return oplus(std::move(a), std::move(b));
        }
        if (tok == "1") return one();
        if (tok == "0") return zero();
        return leaf(tok);
    }

    Kind kind_ = Kind::One;
    std::string leaf_;
    std::shared_ptr<Word> left_, right_;
};

/// Structural evaluation of a word through the representation operations;
/// 1 ↦ the trivial representation, 0 ↦ the zero space.
inline Representation evaluate_word(const std::map<std::string, Representation>& context,
                                    const FiniteGroup& G, const Word& w) {
    switch (w.kind()) {
        case Word::Kind::One: return Representation::trivial(G);
        case Word::Kind::Zero: return Representation::zero(G);
        case Word::Kind::Leaf: {
            auto it = context.find(w.leaf_name());
            if (it == context.end())
                throw ValidationError("unresolved word leaf: '" + w.leaf_name() + "'");
            return it->second;
        }
        case Word::Kind::Tensor:
            return tensor(evaluate_word(context, G, w.left()), evaluate_word(context, G, w.right()));
        case Word::Kind::Hom:
            return hom(evaluate_word(context, G, w.left()), evaluate_word(context, G, w.right()));
        case Word::Kind::Oplus:
            return oplus(evaluate_word(context, G, w.left()), evaluate_word(context, G, w.right()));
    }
    throw InternalCheckFailure("unhandled word kind");
}

inline int word_depth(const Word& w) { return w.depth(); }

/// All words of depth <= p over the alphabet; guarded because the count
/// satisfies |W^p| = 3·|W^{p-1}|^2 + |W^0| and explodes quickly.
inline std::vector<Word> words_up_to_depth(const std::vector<std::string>& alphabet, int p,
                                           long budget = 100000) {
    std::vector<Word> cur;
    for (const auto& a : alphabet) cur.push_back(Word::leaf(a));
    cur.push_back(Word::one());
    cur.push_back(Word::zero());
    long base = (long)cur.size();
    for (int depth = 1; depth <= p; ++depth) {
        long next_size = 3 * (long)cur.size() * (long)cur.size() + base;
        if (next_size > budget) throw BudgetExceeded("word enumeration budget exceeded");
        std::vector<Word> next;
        next.reserve(next_size);
        for (const auto& a : alphabet) next.push_back(Word::leaf(a));
        next.push_back(Word::one());
        next.push_back(Word::zero());
        for (const auto& x : cur)
            for (const auto& y : cur) {
                next.push_back(Word::tensor(x, y));
                next.push_back(Word::hom(x, y));
                next.push_back(Word::oplus(x, y));
            }
        cur = std::move(next);
    }
    return cur;
}

// ---------------------------------------------------------------------------
// Free dg-category on a dg-graph, truncated by path length
// ---------------------------------------------------------------------------

/// Finite dg-graph: a complex of edges per ordered vertex pair, nonnegatively
/// graded with finite-dimensional degree pieces.
struct DgGraph {
    struct EdgeComplex {
        std::vector<long> dims;          // dims[d] for degree d
        std::vector<SparseMatrix> diffs; // diffs[d]: degree d -> d+1; size dims.size()-1

        void validate() const {
            if (dims.empty()) throw ValidationError("edge complex needs a degree range");
            CochainComplex check(0, dims, diffs); // validates shapes and d∘d = 0
        }
        long dim(int d) const { return (d < 0 || d >= (int)dims.size()) ? 0 : dims[d]; }
        SparseMatrix diff(int d) const {
            if (d < 0 || d >= (int)diffs.size()) return SparseMatrix(dim(d + 1), dim(d));
            return diffs[d];
        }
    };

    int nvertices = 0;
    std::map<std::pair<int, int>, EdgeComplex> edges;

    void validate() const {
        for (const auto& [k, e] : edges) {
            if (k.first < 0 || k.first >= nvertices || k.second < 0 || k.second >= nvertices)
                throw ValidationError("edge endpoints out of range");
            e.validate();
        }
    }

    const EdgeComplex* edge(int a, int b) const {
        auto it = edges.find({a, b});
        return it == edges.end() ? nullptr : &it->second;
    }
};

/// Basis label in a truncated free hom complex: a composable path written
/// target-first (the slot order of Ed(v_l, v') ⊗ ... ⊗ Ed(v, v_1)), and per
/// slot a (degree, index) choice in that edge complex. The identity is the
/// empty path.
struct FreePathBasisElt {
    std::vector<int> vertices;                  // v, v1, ..., v' (size l+1); identity: {v}
    std::vector<std::pair<int, long>> factors;  // size l, slot 0 = last edge Ed(v_{l-1}, v')

    int total_degree() const {
        int d = 0;
        for (const auto& [deg, idx] : factors) d += deg;
        return d;
    }
    auto operator<=>(const FreePathBasisElt&) const = default;
};

struct FreeHomComplex {
    int source = 0, target = 0;
    std::vector<std::vector<FreePathBasisElt>> basis_by_degree; // [degree] -> labels
    std::map<FreePathBasisElt, std::pair<int, long>> index;     // label -> (degree, position)

    long dim(int d) const {
        return (d < 0 || d >= (int)basis_by_degree.size()) ? 0 : (long)basis_by_degree[d].size();
    }

    CochainComplex complex(const DgGraph& g) const;
};

using FreeHomElt = std::map<FreePathBasisElt, Rational>;

/// Enumerates the truncated hom complex of the free dg-category on `g`.
inline FreeHomComplex free_dgcat_hom(const DgGraph& g, int v, int vprime, int length_cap,
                                     long budget = 200000) {
    g.validate();
    if (v < 0 || v >= g.nvertices || vprime < 0 || vprime >= g.nvertices)
        throw ValidationError("free_dgcat_hom: vertex out of range");
    if (length_cap < 0) throw ValidationError("negative length cap");
    FreeHomComplex out;
    out.source = v;
    out.target = vprime;
    std::vector<FreePathBasisElt> all;
    if (v == vprime) all.push_back(FreePathBasisElt{{v}, {}}); // k·id_v
    // enumerate composable vertex paths up to the cap
    std::vector<std::vector<int>> paths = {{v}};
    for (int l = 1; l <= length_cap; ++l) {
        std::vector<std::vector<int>> next;
        for (const auto& p : paths) {
            if ((int)p.size() != l) continue;
            for (int w = 0; w < g.nvertices; ++w)
                if (g.edge(p.back(), w)) {
                    auto q = p;
                    q.push_back(w);
                    next.push_back(q);
                }
        }
        for (auto& q : next) {
            if (q.back() != vprime) continue;
            // factor choices per slot; slot 0 is the last edge of the path
            std::vector<const DgGraph::EdgeComplex*> slot_edges;
            for (int s = 0; s < l; ++s) slot_edges.push_back(g.edge(q[l - 1 - s], q[l - s]));
            std::vector<std::pair<int, long>> choice(l);
            auto rec = [&](auto&& self, int s) -> void {
                if ((long)all.size() > budget) throw BudgetExceeded("free hom basis budget exceeded");
                if (s == l) {
                    all.push_back(FreePathBasisElt{q, choice});
                    return;
                }
                const auto* ec = slot_edges[s];
                for (int d = 0; d < (int)ec->dims.size(); ++d)
                    for (long i = 0; i < ec->dims[d]; ++i) {
                        choice[s] = {d, i};
                        self(self, s + 1);
                    }
            };
            rec(rec, 0);
        }
        paths.insert(paths.end(), next.begin(), next.end());
    }
    int max_deg = 0;
    for (const auto& b : all) max_deg = std::max(max_deg, b.total_degree());
    out.basis_by_degree.assign(max_deg + 1, {});
    std::sort(all.begin(), all.end());
    for (const auto& b : all) {
        int d = b.total_degree();
        out.index[b] = {d, (long)out.basis_by_degree[d].size()};
        out.basis_by_degree[d].push_back(b);
    }
    return out;
}

/// Tensor-complex differential with Koszul signs: the slot-i factor picks up
/// the parity of the degrees to its left.
inline FreeHomElt free_hom_differential(const DgGraph& g, const FreeHomElt& x) {
    FreeHomElt out;
    auto add = [&](const FreePathBasisElt& b, const Rational& c) {
        if (c.is_zero()) return;
        auto it = out.find(b);
        if (it == out.end())
            out[b] = c;
        else {
            it->second += c;
            if (it->second.is_zero()) out.erase(it);
        }
    };
    for (const auto& [b, coeff] : x) {
        int l = (int)b.factors.size();
        int left_parity = 0;
        for (int s = 0; s < l; ++s) {
            auto [deg, idx] = b.factors[s];
            const auto* ec = g.edge(b.vertices[l - 1 - s], b.vertices[l - s]);
            SparseMatrix d = ec->diff(deg);
            for (const auto& [k, val] : d.entries()) {
                if (k.second != idx) continue;
                FreePathBasisElt nb = b;
                nb.factors[s] = {deg + 1, k.first};
                Rational c = coeff * val;
                if (left_parity % 2) c = -c;
                add(nb, c);
            }
            left_parity += deg;
        }
    }
    return out;
}

/// Concatenation composition in the free category, extended bilinearly.
inline FreeHomElt free_hom_compose(const FreeHomElt& f, const FreeHomElt& gx) {
    FreeHomElt out;
    for (const auto& [bf, cf] : f)
        for (const auto& [bg, cg] : gx) {
            if (bf.vertices.front() != bg.vertices.back())
                throw ValidationError("free hom composition: path endpoints mismatch");
            FreePathBasisElt nb;
            nb.vertices = bg.vertices;
            nb.vertices.insert(nb.vertices.end(), bf.vertices.begin() + 1, bf.vertices.end());
            nb.factors = bf.factors;
            nb.factors.insert(nb.factors.end(), bg.factors.begin(), bg.factors.end());
            Rational c = cf * cg;
            auto it = out.find(nb);
            if (it == out.end()) {
                if (!c.is_zero()) out[nb] = c;
            } else {
                it->second += c;
                if (it->second.is_zero()) out.erase(it);
            }
        }
    return out;
}

inline CochainComplex FreeHomComplex::complex(const DgGraph& g) const {
    int top = (int)basis_by_degree.size() - 1;
    std::vector<long> dims;
    for (int d = 0; d <= top; ++d) dims.push_back(dim(d));
    std::vector<SparseMatrix> diffs;
    for (int d = 0; d < top; ++d) {
        SparseMatrix m(dim(d + 1), dim(d));
        for (long j = 0; j < dim(d); ++j) {
            FreeHomElt x = {{basis_by_degree[d][j], Rational(1)}};
            for (const auto& [b, c] : free_hom_differential(g, x)) {
                auto it = index.find(b);
                if (it == index.end() || it->second.first != d + 1)
                    throw InternalCheckFailure("free hom differential left the truncation");
                m.set(it->second.second, j, c);
            }
        }
        diffs.push_back(m);
    }
    return CochainComplex(0, dims, diffs);
}

} // namespace tdr
