#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "tdr/errors.hpp"
#include "tdr/group.hpp"

namespace tdr {

/// A simplex of a simplicial set in Eilenberg-Zilber normal form: a
/// nondegenerate simplex id plus the weakly increasing surjection [m] ->> [k]
/// that degenerates it (identity when the simplex itself is nondegenerate).
struct SimplexRef {
    int id = -1;
    std::vector<int> epi; // images of 0..m, weakly increasing onto 0..k

    int dim() const { return (int)epi.size() - 1; }
    bool nondegenerate() const {
        for (size_t i = 0; i < epi.size(); ++i)
            if (epi[i] != (int)i) return false;
        return true;
    }
    auto operator<=>(const SimplexRef&) const = default;
};

inline std::vector<int> identity_map(int dim) {
    std::vector<int> v(dim + 1);
    for (int i = 0; i <= dim; ++i) v[i] = i;
    return v;
}

/// The injection [n-1] -> [n] skipping i.
inline std::vector<int> coface_map(int i, int n) {
    std::vector<int> v;
    v.reserve(n);
    for (int x = 0; x <= n; ++x)
        if (x != i) v.push_back(x);
    return v;
}

/// The surjection [n+1] -> [n] repeating i.
inline std::vector<int> codegeneracy_map(int i, int n) {
    std::vector<int> v;
    v.reserve(n + 2);
    for (int x = 0; x <= n + 1; ++x) v.push_back(x <= i ? x : x - 1);
    return v;
}

inline std::vector<int> compose_monotone(const std::vector<int>& outer,
                                         const std::vector<int>& inner) {
    std::vector<int> v(inner.size());
    for (size_t i = 0; i < inner.size(); ++i) {
        if (inner[i] < 0 || inner[i] >= (int)outer.size())
            throw ValidationError("monotone map composition out of range");
        v[i] = outer[inner[i]];
    }
    return v;
}

/// A finite simplicial set stored through its nondegenerate simplices; each
/// face of a nondegenerate simplex is a SimplexRef into lower dimensions.
class FinSimplicialSet {
public:
    FinSimplicialSet(int top_dim, std::vector<int> dim_of,
                     std::vector<std::vector<SimplexRef>> faces, int base)
        : top_dim_(top_dim), dim_of_(std::move(dim_of)), faces_(std::move(faces)), base_(base) {
        by_dim_.assign(top_dim_ + 1, {});
        for (int id = 0; id < (int)dim_of_.size(); ++id) {
            if (dim_of_[id] < 0 || dim_of_[id] > top_dim_)
                throw ValidationError("simplex dimension out of range");
            by_dim_[dim_of_[id]].push_back(id);
        }
        validate();
    }

    int top_dim() const { return top_dim_; }
    int base_vertex() const { return base_; }
    int count() const { return (int)dim_of_.size(); }
    int dim_of(int id) const { return dim_of_.at(id); }
    const std::vector<int>& simplices(int d) const {
        static const std::vector<int> empty;
        if (d < 0 || d > top_dim_) return empty;
        return by_dim_[d];
    }

    SimplexRef ref(int id) const { return SimplexRef{id, identity_map(dim_of_[id])}; }

    /// Stored face of a nondegenerate simplex.
    const SimplexRef& stored_face(int id, int i) const {
        if (i < 0 || i > dim_of_[id]) throw ValidationError("face index out of range");
        return faces_[id][i];
    }

    /// Contravariant action of a monotone map f: [m'] -> [m] on a simplex of
    /// dimension m, in normal form.
    SimplexRef apply_monotone(const std::vector<int>& f, const SimplexRef& x) const {
        if (f.empty()) throw ValidationError("empty monotone map");
        for (size_t i = 0; i + 1 < f.size(); ++i)
            if (f[i] > f[i + 1]) throw ValidationError("map is not monotone");
        if (f.back() > x.dim() || f.front() < 0)
            throw ValidationError("monotone map range mismatch");
        // compose with the degeneracy part of x
        std::vector<int> g = compose_monotone(x.epi, f);
        // epi-mono factorization of g
        std::vector<int> values = g;
        values.erase(std::unique(values.begin(), values.end()), values.end());
        std::vector<int> epi(g.size());
        for (size_t i = 0; i < g.size(); ++i)
            epi[i] = (int)(std::lower_bound(values.begin(), values.end(), g[i]) - values.begin());
        SimplexRef core = apply_mono_to_nondeg(values, x.id);
        return SimplexRef{core.id, compose_monotone(core.epi, epi)};
    }

    SimplexRef face(int i, const SimplexRef& x) const {
        if (x.dim() < 1) throw ValidationError("face of a vertex");
        return apply_monotone(coface_map(i, x.dim()), x);
    }

    SimplexRef degenerate(int i, const SimplexRef& x) const {
        return apply_monotone(codegeneracy_map(i, x.dim()), x);
    }

    /// Vertex j of a simplex (as a nondegenerate 0-simplex id).
    int vertex(int j, const SimplexRef& x) const {
        SimplexRef v = apply_monotone({j}, x);
        return v.id;
    }

    /// The [a,b]-edge of a simplex, a < b.
    SimplexRef edge(int a, int b, const SimplexRef& x) const {
        return apply_monotone({a, b}, x);
    }

    int edge_src(int edge_id) const { return vertex(0, ref(edge_id)); }
    int edge_dst(int edge_id) const { return vertex(1, ref(edge_id)); }

    long euler_characteristic() const {
        long chi = 0;
        for (int d = 0; d <= top_dim_; ++d) chi += (d % 2 == 0 ? 1 : -1) * (long)by_dim_[d].size();
        return chi;
    }

    bool is_connected() const {
        if (by_dim_[0].empty()) return false;
        std::map<int, int> comp;
        for (int v : by_dim_[0]) comp[v] = v;
        std::function<int(int)> find = [&](int v) {
            while (comp[v] != v) v = comp[v] = comp[comp[v]];
            return v;
        };
        if (top_dim_ >= 1)
            for (int e : by_dim_[1]) comp[find(edge_src(e))] = find(edge_dst(e));
        int c0 = find(by_dim_[0][0]);
        for (int v : by_dim_[0])
            if (find(v) != c0) return false;
        return true;
    }

private:
    SimplexRef apply_mono_to_nondeg(const std::vector<int>& mono, int id) const {
        int k = dim_of_[id];
        if ((int)mono.size() == k + 1) return ref(id); // identity injection
        // peel off the largest skipped index
        int skipped = -1;
        std::vector<bool> hit(k + 1, false);
        for (int v : mono) hit[v] = true;
        for (int v = k; v >= 0; --v)
            if (!hit[v]) { skipped = v; break; }
        // mono = delta_skipped ∘ mono' ; apply the stored face first
        std::vector<int> rest(mono.size());
        for (size_t i = 0; i < mono.size(); ++i)
            rest[i] = mono[i] < skipped ? mono[i] : mono[i] - 1;
        const SimplexRef& f = faces_[id][skipped];
        return apply_monotone(rest, f);
    }

    void validate() const {
        if ((int)faces_.size() != count()) throw ValidationError("faces table size mismatch");
        for (int id = 0; id < count(); ++id) {
            int d = dim_of_[id];
            if (d == 0) {
                if (!faces_[id].empty()) throw ValidationError("vertex with face entries");
                continue;
            }
            if ((int)faces_[id].size() != d + 1)
                throw ValidationError("wrong number of faces for simplex");
            for (int i = 0; i <= d; ++i) {
                const SimplexRef& f = faces_[id][i];
                if (f.id < 0 || f.id >= count()) throw ValidationError("face target id out of range");
                if (f.dim() != d - 1) throw ValidationError("face dimension mismatch");
                if ((int)f.epi.back() != dim_of_[f.id] || f.epi.front() != 0)
                    throw ValidationError("face degeneracy word not surjective");
                for (size_t j = 0; j + 1 < f.epi.size(); ++j)
                    if (f.epi[j] > f.epi[j + 1] || f.epi[j + 1] > f.epi[j] + 1)
                        throw ValidationError("face degeneracy word not a valid surjection");
            }
        }
        if (base_ < 0 || base_ >= count() || dim_of_[base_] != 0)
            throw ValidationError("base vertex must be a 0-simplex");
        // simplicial identities d_i d_j = d_{j-1} d_i (i < j) on every simplex
        for (int id = 0; id < count(); ++id) {
            int d = dim_of_[id];
            if (d < 2) continue;
            SimplexRef s = SimplexRef{id, identity_map(d)};
            for (int j = 1; j <= d; ++j)
                for (int i = 0; i < j; ++i)
                    if (face(i, face(j, s)) != face(j - 1, face(i, s)))
                        throw ValidationError("simplicial identity violated in face data");
        }
    }

    int top_dim_;
    std::vector<int> dim_of_;
    std::vector<std::vector<SimplexRef>> faces_;
    int base_;
    std::vector<std::vector<int>> by_dim_;
};

/// Build a simplicial set from the facets of an abstract simplicial complex
/// (vertices 0..nv-1, faces closed downward, all faces nondegenerate).
inline FinSimplicialSet from_simplicial_complex(int nv, std::vector<std::vector<int>> facets,
                                                int base_vertex = 0) {
    std::set<std::vector<int>> closed;
    for (int v = 0; v < nv; ++v) closed.insert({v});
    std::function<void(const std::vector<int>&)> close = [&](const std::vector<int>& s) {
        if (closed.count(s)) return;
        closed.insert(s);
        if (s.size() > 1)
            for (size_t i = 0; i < s.size(); ++i) {
                std::vector<int> t = s;
                t.erase(t.begin() + i);
                close(t);
            }
    };
    for (auto f : facets) {
        std::sort(f.begin(), f.end());
        if (std::unique(f.begin(), f.end()) != f.end())
            throw ValidationError("facet with repeated vertices");
        for (int v : f)
            if (v < 0 || v >= nv) throw ValidationError("facet vertex out of range");
        close(f);
    }
    std::vector<std::vector<int>> all(closed.begin(), closed.end());
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    std::map<std::vector<int>, int> index;
    std::vector<int> dim_of;
    for (const auto& s : all) {
        index[s] = (int)dim_of.size();
        dim_of.push_back((int)s.size() - 1);
    }
    int top = all.empty() ? 0 : (int)all.back().size() - 1;
    std::vector<std::vector<SimplexRef>> faces(all.size());
    for (const auto& s : all) {
        int id = index[s];
        if (s.size() == 1) continue;
        for (size_t i = 0; i < s.size(); ++i) {
            std::vector<int> t = s;
            t.erase(t.begin() + i);
            faces[id].push_back(SimplexRef{index[t], identity_map((int)t.size() - 1)});
        }
    }
    return FinSimplicialSet(top, dim_of, faces, base_vertex);
}

inline FinSimplicialSet standard_simplex(int n) {
    std::vector<int> facet(n + 1);
    for (int i = 0; i <= n; ++i) facet[i] = i;
    return from_simplicial_complex(n + 1, {facet});
}

inline FinSimplicialSet boundary_simplex(int n) {
    std::vector<std::vector<int>> facets;
    for (int skip = 0; skip <= n; ++skip) {
        std::vector<int> f;
        for (int i = 0; i <= n; ++i)
            if (i != skip) f.push_back(i);
        facets.push_back(f);
    }
    return from_simplicial_complex(n + 1, facets);
}

/// Minimal 6-vertex triangulation of the real projective plane (antipodal
/// quotient of the icosahedron boundary).
inline FinSimplicialSet rp2_six() {
    std::vector<std::vector<int>> facets = {
        {0, 1, 3}, {0, 1, 5}, {0, 2, 3}, {0, 2, 4}, {0, 4, 5},
        {1, 2, 4}, {1, 2, 5}, {1, 3, 4}, {2, 3, 5}, {3, 4, 5},
    };
    return from_simplicial_complex(6, facets);
}

/// 7-vertex (Csaszar) triangulation of the 2-torus.
inline FinSimplicialSet torus_seven() {
    std::vector<std::vector<int>> facets;
    for (int i = 0; i < 7; ++i) {
        facets.push_back({i, (i + 1) % 7, (i + 3) % 7});
        facets.push_back({i, (i + 2) % 7, (i + 3) % 7});
    }
    return from_simplicial_complex(7, facets);
}

// ---------------------------------------------------------------------------
// Fundamental group via the edge-path presentation
// ---------------------------------------------------------------------------

/// Presentation with generators indexed 0..ngens-1; relator letters are
/// g+1 for a generator and -(g+1) for its inverse, multiplied left to right.
struct GroupPresentation {
    int ngens = 0;
    std::vector<std::vector<int>> relators;
    std::vector<int> generator_edges;   // edge id per generator
    std::set<int> tree_edges;           // spanning tree edge ids
    std::map<int, int> edge_to_generator;
};

/// Edge-path presentation of pi_1: generators are nondegenerate non-tree
/// edges, one relator per nondegenerate 2-simplex.
inline GroupPresentation fundamental_group_presentation(const FinSimplicialSet& K) {
    if (!K.is_connected()) throw ValidationError("fundamental group of a disconnected complex");
    GroupPresentation pres;
    // BFS spanning tree from the base vertex
    std::map<int, bool> seen;
    seen[K.base_vertex()] = true;
    std::queue<int> bfs;
    bfs.push(K.base_vertex());
    std::multimap<int, std::pair<int, int>> incident; // vertex -> (edge, other end)
    for (int e : K.simplices(1)) {
        int a = K.edge_src(e), b = K.edge_dst(e);
        incident.insert({a, {e, b}});
        incident.insert({b, {e, a}});
    }
    while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop();
        auto [lo, hi] = incident.equal_range(v);
        for (auto it = lo; it != hi; ++it) {
            auto [e, w] = it->second;
            if (seen.count(w)) continue;
            seen[w] = true;
            pres.tree_edges.insert(e);
            bfs.push(w);
        }
    }
    for (int e : K.simplices(1)) {
        if (pres.tree_edges.count(e)) continue;
        pres.edge_to_generator[e] = pres.ngens;
        pres.generator_edges.push_back(e);
        ++pres.ngens;
    }
    // one relator g(d0)·g(d2)·g(d1)^{-1} per nondegenerate 2-simplex
    auto letter = [&](const SimplexRef& edge_face) -> std::optional<int> {
        if (!edge_face.nondegenerate()) return std::nullopt; // degenerate edge: identity
        int e = edge_face.id;
        if (pres.tree_edges.count(e)) return std::nullopt;
        return pres.edge_to_generator.at(e) + 1;
    };
    for (int t : K.simplices(2)) {
        SimplexRef s = K.ref(t);
        std::vector<int> word;
        if (auto l = letter(K.face(0, s))) word.push_back(*l);
        if (auto l = letter(K.face(2, s))) word.push_back(*l);
        if (auto l = letter(K.face(1, s))) word.push_back(-*l);
        pres.relators.push_back(word);
    }
    return pres;
}

// ---------------------------------------------------------------------------
// Todd-Coxeter coset enumeration (trivial subgroup)
// ---------------------------------------------------------------------------

struct CosetEnumeration {
    long order = 0;
    // action[g][c]: coset reached from c by generator g; inverse_action likewise
    std::vector<std::vector<long>> action, inverse_action;
};

namespace detail {

class ToddCoxeter {
public:
    ToddCoxeter(int ngens, const std::vector<std::vector<int>>& relators, long max_cosets)
        : ngens_(ngens), relators_(relators), max_cosets_(max_cosets) {
        new_coset();
    }

    CosetEnumeration run() {
        for (size_t c = 0; c < tab_.size(); ++c) {
            if (dead(c)) continue;
            for (const auto& rel : relators_) scan_and_fill((long)c, rel);
            if (dead(c)) continue;
            for (int g = 0; g < ngens_; ++g) {
                if (entry((long)c, letter_col(g + 1)) < 0) define((long)c, g + 1);
                if (entry((long)c, letter_col(-(g + 1))) < 0) define((long)c, -(g + 1));
            }
        }
        return compress();
    }

private:
    int ngens_;
    std::vector<std::vector<int>> relators_;
    long max_cosets_;
    std::vector<std::vector<long>> tab_; // per coset, 2*ngens columns, -1 undefined
    std::vector<long> parent_;
    std::vector<std::pair<long, long>> coincidences_;

    int letter_col(int letter) const {
        int g = std::abs(letter) - 1;
        return 2 * g + (letter > 0 ? 0 : 1);
    }
    int inverse_col(int letter) const {
        int g = std::abs(letter) - 1;
        return 2 * g + (letter > 0 ? 1 : 0);
    }

    long new_coset() {
        if ((long)tab_.size() >= max_cosets_)
            throw BudgetExceeded("coset enumeration budget exceeded");
        tab_.push_back(std::vector<long>(2 * ngens_, -1));
        parent_.push_back((long)tab_.size() - 1);
        return (long)tab_.size() - 1;
    }

    long find(long c) {
        while (parent_[c] != c) c = parent_[c] = parent_[parent_[c]];
        return c;
    }
    bool dead(long c) { return find(c) != c; }

    long entry(long c, int col) {
        c = find(c);
        long t = tab_[c][col];
        if (t < 0) return -1;
        t = find(t);
        tab_[c][col] = t;
        return t;
    }

    void set_entry(long c, int col_letter, long t, int letter) {
        c = find(c);
        t = find(t);
        long prev = entry(c, col_letter);
        if (prev >= 0 && prev != t) {
            queue_coincidence(prev, t);
            return;
        }
        tab_[c][col_letter] = t;
        int icol = inverse_col(letter);
        long back = entry(t, icol);
        if (back >= 0 && back != c)
            queue_coincidence(back, c);
        else
            tab_[t][icol] = c;
    }

    long define(long c, int letter) {
        long t = new_coset();
        set_entry(c, letter_col(letter), t, letter);
        process_coincidences();
        return find(t);
    }

    void queue_coincidence(long a, long b) { coincidences_.push_back({a, b}); }

    void process_coincidences() {
        while (!coincidences_.empty()) {
            auto [a, b] = coincidences_.back();
            coincidences_.pop_back();
            a = find(a);
            b = find(b);
            if (a == b) continue;
            if (b < a) std::swap(a, b);
            parent_[b] = a; // b dies
            for (int col = 0; col < 2 * ngens_; ++col) {
                long tb = tab_[b][col];
                if (tb < 0) continue;
                long ta = tab_[a][col];
                if (ta < 0)
                    tab_[a][col] = tb;
                else if (find(ta) != find(tb))
                    coincidences_.push_back({ta, tb});
            }
        }
    }

    void scan_and_fill(long c, const std::vector<int>& word) {
        if (word.empty()) return;
        while (true) {
            long front = find(c);
            size_t fi = 0;
            // forward as far as defined
            while (fi < word.size()) {
                long nxt = entry(front, letter_col(word[fi]));
                if (nxt < 0) break;
                front = nxt;
                ++fi;
            }
            if (fi == word.size()) {
                if (front != find(c)) {
                    queue_coincidence(front, find(c));
                    process_coincidences();
                }
                return;
            }
            // backward from the end
            long back = find(c);
            size_t bi = word.size();
            while (bi > fi) {
                long prv = entry(back, inverse_col(word[bi - 1]));
                if (prv < 0) break;
                back = prv;
                --bi;
            }
            if (bi == fi) {
                // full scan with one gap closed by deduction
                queue_coincidence(front, back);
                process_coincidences();
                return;
            }
            if (bi == fi + 1) {
                set_entry(front, letter_col(word[fi]), back, word[fi]);
                process_coincidences();
                return;
            }
            // gap longer than one: define a coset and rescan
            set_entry(front, letter_col(word[fi]), new_coset(), word[fi]);
            process_coincidences();
            if (dead(c)) c = find(c);
        }
    }

    CosetEnumeration compress() {
        std::vector<long> live;
        std::map<long, long> renum;
        for (long c = 0; c < (long)tab_.size(); ++c)
            if (find(c) == c) {
                renum[c] = (long)live.size();
                live.push_back(c);
            }
        CosetEnumeration out;
        out.order = (long)live.size();
        out.action.assign(ngens_, std::vector<long>(out.order, -1));
        out.inverse_action.assign(ngens_, std::vector<long>(out.order, -1));
        for (long i = 0; i < (long)live.size(); ++i) {
            for (int g = 0; g < ngens_; ++g) {
                long t = entry(live[i], 2 * g);
                long u = entry(live[i], 2 * g + 1);
                if (t < 0 || u < 0) throw InternalCheckFailure("incomplete coset table after run");
                out.action[g][i] = renum.at(find(t));
                out.inverse_action[g][i] = renum.at(find(u));
            }
        }
        return out;
    }
};

} // namespace detail

inline CosetEnumeration coset_enumeration(const GroupPresentation& pres, long max_cosets = 10000) {
    detail::ToddCoxeter tc(pres.ngens, pres.relators, max_cosets);
    return tc.run();
}

/// Finite group reconstructed from a completed coset enumeration: elements
/// are cosets, products traced through generator words. Also returns the
/// image of each presentation generator.
struct RealizedGroup {
    FiniteGroup group;
    std::vector<int> generator_images;
};

inline RealizedGroup group_from_enumeration(const CosetEnumeration& ce) {
    long n = ce.order;
    long ngens = (long)ce.action.size();
    // BFS words for each coset from the identity coset 0
    std::vector<std::vector<int>> word(n);
    std::vector<bool> have(n, false);
    have[0] = true;
    std::queue<long> q;
    q.push(0);
    while (!q.empty()) {
        long c = q.front();
        q.pop();
        for (long g = 0; g < ngens; ++g) {
            long t = ce.action[g][c];
            if (!have[t]) {
                have[t] = true;
                word[t] = word[c];
                word[t].push_back((int)g + 1);
                q.push(t);
            }
            long u = ce.inverse_action[g][c];
            if (!have[u]) {
                have[u] = true;
                word[u] = word[c];
                word[u].push_back(-((int)g + 1));
                q.push(u);
            }
        }
    }
    for (long c = 0; c < n; ++c)
        if (!have[c]) throw InternalCheckFailure("coset table not transitive");
    auto trace = [&](long start, const std::vector<int>& w) {
        long c = start;
        for (int letter : w)
            c = letter > 0 ? ce.action[letter - 1][c] : ce.inverse_action[-letter - 1][c];
        return c;
    };
    std::vector<std::vector<int>> table(n, std::vector<int>(n));
    for (long a = 0; a < n; ++a)
        for (long b = 0; b < n; ++b) table[a][b] = (int)trace(a, word[b]);
    std::vector<std::string> names;
    for (long c = 0; c < n; ++c) {
        std::string s;
        for (int letter : word[c]) {
            if (!s.empty()) s += "*";
            s += (letter > 0 ? "x" : "X") + std::to_string(std::abs(letter) - 1);
        }
        names.push_back(s.empty() ? "e" : s);
    }
    RealizedGroup out{FiniteGroup(names, table), {}};
    for (long g = 0; g < ngens; ++g) out.generator_images.push_back((int)ce.action[g][0]);
    return out;
}

// ---------------------------------------------------------------------------
// Edge labelings and universal covers
// ---------------------------------------------------------------------------

/// Group labels on nondegenerate edges subject to the 2-simplex cocycle
/// condition label(d1) = label(d0)·label(d2); degenerate edges are identity.
struct EdgeLabeling {
    const FinSimplicialSet* K = nullptr;
    FiniteGroup group;
    std::map<int, int> label; // nondeg edge id -> group element (absent = identity)

    int label_of_edge(int edge_id) const {
        auto it = label.find(edge_id);
        return it == label.end() ? group.identity() : it->second;
    }

    int label_of(const SimplexRef& edge) const {
        if (!edge.nondegenerate()) return group.identity();
        return label_of_edge(edge.id);
    }

    /// Label of the [0,1]-edge of a simplex: the face-0 transport twist.
    int twist01(const SimplexRef& s) const { return label_of(K->edge(0, 1, s)); }

    void validate() const {
        for (const auto& [e, g] : label) {
            if (K->dim_of(e) != 1) throw ValidationError("labeling on a non-edge");
            if (g < 0 || g >= group.size()) throw ValidationError("label out of group range");
        }
        for (int t : K->simplices(2)) {
            SimplexRef s = K->ref(t);
            int l1 = label_of(K->face(1, s));
            int l0 = label_of(K->face(0, s));
            int l2 = label_of(K->face(2, s));
            if (l1 != group.mul(l0, l2))
                throw ValidationError("edge labeling violates the triangle cocycle condition");
        }
    }
};

/// Labeling from a homomorphism out of the edge-path presentation; tree
/// edges are labeled by the identity.
inline EdgeLabeling edge_labeling_from_hom(const FinSimplicialSet& K,
                                           const GroupPresentation& pres,
                                           const FiniteGroup& G,
                                           const std::vector<int>& generator_images) {
    if ((int)generator_images.size() != pres.ngens)
        throw ValidationError("one image per presentation generator required");
    for (int g : generator_images)
        if (g < 0 || g >= G.size()) throw ValidationError("generator image out of range");
    for (const auto& rel : pres.relators) {
        int acc = G.identity();
        for (int letter : rel) {
            int img = generator_images[std::abs(letter) - 1];
            acc = G.mul(acc, letter > 0 ? img : G.inv(img));
        }
        if (acc != G.identity())
            throw ValidationError("homomorphism does not respect a presentation relator");
    }
    EdgeLabeling lab;
    lab.K = &K;
    lab.group = G;
    for (const auto& [e, g] : pres.edge_to_generator)
        if (generator_images[g] != G.identity()) lab.label[e] = generator_images[g];
    lab.validate();
    return lab;
}

/// A |G|-sheeted cover with a free right G-action and simplicial projection.
struct CoverData {
    FinSimplicialSet cover;
    FiniteGroup group;
    std::vector<int> projection;                 // cover id -> base id
    std::vector<int> sheet;                      // cover id -> group element
    std::vector<std::vector<int>> right_action;  // [h][cover id] -> cover id

    int translate(int cover_id, int h) const { return right_action[h][cover_id]; }
};

/// Universal cover for finite pi_1 realized by a labeling onto G. Sheets are
/// group elements; face 0 of (σ, g) lands in sheet λ(edge01(σ))·g.
inline CoverData universal_cover(const FinSimplicialSet& K, const EdgeLabeling& lab,
                                 long coset_budget = 10000) {
    lab.validate();
    GroupPresentation pres = fundamental_group_presentation(K);
    CosetEnumeration ce = coset_enumeration(pres, coset_budget); // throws BudgetExceeded if infinite
    const FiniteGroup& G = lab.group;
    if (ce.order != G.size())
        throw ValidationError("labeling group order differs from pi_1 order");
    // the labels must generate G (surjectivity of the realized hom)
    {
        std::set<int> gen;
        for (const auto& [e, g] : lab.label) gen.insert(g);
        std::set<int> closure = {G.identity()};
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<int> cur(closure.begin(), closure.end());
            for (int a : cur)
                for (int b : gen)
                    if (closure.insert(G.mul(a, b)).second) grew = true;
        }
        if ((long)closure.size() != G.size())
            throw ValidationError("labeling does not realize all of pi_1");
    }

    long n = G.size();
    int base_count = K.count();
    auto cover_id = [&](int sigma, int g) { return sigma * (int)n + g; };
    std::vector<int> dim_of(base_count * n);
    std::vector<std::vector<SimplexRef>> faces(base_count * n);
    for (int sigma = 0; sigma < base_count; ++sigma) {
        int d = K.dim_of(sigma);
        SimplexRef sref = K.ref(sigma);
        for (int g = 0; g < n; ++g) {
            int id = cover_id(sigma, g);
            dim_of[id] = d;
            if (d == 0) continue;
            faces[id].resize(d + 1);
            int twist = lab.twist01(sref);
            for (int i = 0; i <= d; ++i) {
                const SimplexRef& f = K.stored_face(sigma, i);
                int h = (i == 0) ? G.mul(twist, g) : g;
                faces[id][i] = SimplexRef{cover_id(f.id, h), f.epi};
            }
        }
    }
    CoverData data{
        FinSimplicialSet(K.top_dim(), dim_of, faces, cover_id(K.base_vertex(), G.identity())),
        G,
        {},
        {},
        {}};
    data.projection.resize(base_count * n);
    data.sheet.resize(base_count * n);
    for (int sigma = 0; sigma < base_count; ++sigma)
        for (int g = 0; g < n; ++g) {
            data.projection[cover_id(sigma, g)] = sigma;
            data.sheet[cover_id(sigma, g)] = g;
        }
    data.right_action.assign(n, std::vector<int>(base_count * n));
    for (int h = 0; h < n; ++h)
        for (int sigma = 0; sigma < base_count; ++sigma)
            for (int g = 0; g < n; ++g)
                data.right_action[h][cover_id(sigma, g)] = cover_id(sigma, G.mul(g, h));

    // constructive validation of the cover invariants
    for (int d = 0; d <= K.top_dim(); ++d)
        if ((long)data.cover.simplices(d).size() != n * (long)K.simplices(d).size())
            throw InternalCheckFailure("cover sheet count mismatch");
    if (!data.cover.is_connected()) throw ValidationError("constructed cover is not connected");
    {
        GroupPresentation cpres = fundamental_group_presentation(data.cover);
        CosetEnumeration cce = coset_enumeration(cpres, coset_budget);
        if (cce.order != 1) throw InternalCheckFailure("cover has nontrivial edge-path group");
    }
    for (int h = 0; h < n; ++h) {
        for (int id = 0; id < base_count * n; ++id) {
            int tid = data.right_action[h][id];
            if (data.projection[tid] != data.projection[id])
                throw InternalCheckFailure("action does not preserve fibers");
            if (h != G.identity() && tid == id) throw InternalCheckFailure("action is not free");
            int d = data.cover.dim_of(id);
            for (int i = 0; i <= d && d > 0; ++i) {
                SimplexRef a = data.cover.stored_face(tid, i);
                SimplexRef b = data.cover.stored_face(id, i);
                if (a.epi != b.epi || a.id != data.right_action[h][b.id])
                    throw InternalCheckFailure("action does not commute with faces");
            }
        }
    }
    for (int id = 0; id < base_count * n; ++id) {
        int d = data.cover.dim_of(id);
        if (d == 0) continue;
        for (int i = 0; i <= d; ++i) {
            SimplexRef a = data.cover.stored_face(id, i);
            const SimplexRef& b = K.stored_face(data.projection[id], i);
            if (a.epi != b.epi || data.projection[a.id] != b.id)
                throw InternalCheckFailure("projection is not simplicial");
        }
    }
    return data;
}

} // namespace tdr
