#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "tdr/errors.hpp"

namespace tdr {

/// A finite group given by its multiplication table. Element 0..n-1 with
/// names; the table is validated (identity, inverses, associativity).
class FiniteGroup {
public:
    FiniteGroup() : FiniteGroup({"e"}, {{0}}) {}

    FiniteGroup(std::vector<std::string> names, std::vector<std::vector<int>> table)
        : names_(std::move(names)), table_(std::move(table)) {
        long n = (long)names_.size();
        if (n == 0) throw ValidationError("group must be nonempty");
        if ((long)table_.size() != n) throw ValidationError("group table row count mismatch");
        for (const auto& row : table_) {
            if ((long)row.size() != n) throw ValidationError("group table column count mismatch");
            for (int v : row)
                if (v < 0 || v >= n) throw ValidationError("group table entry out of range");
        }
        identity_ = -1;
        for (int e = 0; e < n; ++e) {
            bool ok = true;
            for (int g = 0; g < n && ok; ++g) ok = table_[e][g] == g && table_[g][e] == g;
            if (ok) { identity_ = e; break; }
        }
        if (identity_ < 0) throw ValidationError("group has no identity");
        inv_.assign(n, -1);
        for (int g = 0; g < n; ++g) {
            for (int h = 0; h < n; ++h)
                if (table_[g][h] == identity_ && table_[h][g] == identity_) { inv_[g] = h; break; }
            if (inv_[g] < 0) throw ValidationError("group element without inverse");
        }
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
                        throw ValidationError("group table not associative");
    }

    long size() const { return (long)names_.size(); }
    int identity() const { return identity_; }
    int mul(int a, int b) const { return table_[a][b]; }
    int inv(int a) const { return inv_[a]; }
    const std::string& name(int a) const { return names_[a]; }
    const std::vector<std::vector<int>>& table() const { return table_; }

    int index_of(const std::string& name) const {
        for (long i = 0; i < size(); ++i)
            if (names_[i] == name) return (int)i;
        throw ValidationError("unknown group element: '" + name + "'");
    }

    int order_of(int g) const {
        int x = g, n = 1;
        while (x != identity_) {
            x = mul(x, g);
            ++n;
        }
        return n;
    }

    bool is_abelian() const {
        for (int a = 0; a < size(); ++a)
            for (int b = 0; b < size(); ++b)
                if (mul(a, b) != mul(b, a)) return false;
        return true;
    }

    static FiniteGroup trivial() { return FiniteGroup({"e"}, {{0}}); }

    static FiniteGroup cyclic(int n) {
        if (n < 1) throw ValidationError("cyclic group order must be positive");
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i)
            names.push_back(i == 0 ? "e" : (i == 1 ? "g" : "g^" + std::to_string(i)));
        std::vector<std::vector<int>> table(n, std::vector<int>(n));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) table[a][b] = (a + b) % n;
        return FiniteGroup(names, table);
    }

    /// Symmetric group on {1..n}, elements named by one-line notation.
    static FiniteGroup symmetric(int n) {
        if (n < 1 || n > 5) throw ValidationError("symmetric(n) supported for 1 <= n <= 5");
        std::vector<std::vector<int>> perms;
        std::vector<int> p(n);
        std::iota(p.begin(), p.end(), 0);
        do {
            perms.push_back(p);
        } while (std::next_permutation(p.begin(), p.end()));
        std::vector<std::string> names;
        for (const auto& q : perms) {
            std::string s;
            for (int x : q) s += std::to_string(x + 1);
            names.push_back(s);
        }
        auto index = [&](const std::vector<int>& q) {
            return (int)(std::find(perms.begin(), perms.end(), q) - perms.begin());
        };
        long m = (long)perms.size();
        std::vector<std::vector<int>> table(m, std::vector<int>(m));
        for (long a = 0; a < m; ++a)
            for (long b = 0; b < m; ++b) {
                std::vector<int> comp(n);
                for (int x = 0; x < n; ++x) comp[x] = perms[a][perms[b][x]];
                table[a][b] = index(comp);
            }
        return FiniteGroup(names, table);
    }

    static FiniteGroup product(const FiniteGroup& a, const FiniteGroup& b) {
        long n = a.size() * b.size();
        std::vector<std::string> names;
        names.reserve(n);
        for (long i = 0; i < a.size(); ++i)
            for (long j = 0; j < b.size(); ++j) names.push_back("(" + a.names_[i] + "," + b.names_[j] + ")");
        std::vector<std::vector<int>> table(n, std::vector<int>(n));
        auto idx = [&](long i, long j) { return (int)(i * b.size() + j); };
        for (long i1 = 0; i1 < a.size(); ++i1)
            for (long j1 = 0; j1 < b.size(); ++j1)
                for (long i2 = 0; i2 < a.size(); ++i2)
                    for (long j2 = 0; j2 < b.size(); ++j2)
                        table[idx(i1, j1)][idx(i2, j2)] = idx(a.mul((int)i1, (int)i2), b.mul((int)j1, (int)j2));
        return FiniteGroup(names, table);
    }

    static FiniteGroup klein4() { return product(cyclic(2), cyclic(2)); }

    /// Brute-force isomorphism search (intended for small groups); returns the
    /// element mapping this -> other if one exists.
    std::optional<std::vector<int>> isomorphism_to(const FiniteGroup& other) const {
        if (size() != other.size()) return std::nullopt;
        long n = size();
        std::vector<int> image(n, -1);
        std::vector<bool> used(n, false);
        image[identity_] = other.identity_;
        used[other.identity_] = true;
        // order elements so early mismatches prune fast
        std::vector<int> elems;
        for (int g = 0; g < n; ++g)
            if (g != identity_) elems.push_back(g);

        auto consistent = [&](int count) {
            for (int i = 0; i <= count; ++i) {
                int g = (i == count) ? elems[count] : elems[i];
                if (image[g] < 0) continue;
                for (int j = 0; j <= count; ++j) {
                    int h = elems[j];
                    if (image[h] < 0) continue;
                    int gh = mul(g, h), hg = mul(h, g);
                    if (image[gh] >= 0 && other.mul(image[g], image[h]) != image[gh]) return false;
                    if (image[hg] >= 0 && other.mul(image[h], image[g]) != image[hg]) return false;
                }
            }
            return true;
        };

        auto rec = [&](auto&& self, size_t k) -> bool {
            if (k == elems.size()) {
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        if (image[mul(a, b)] != other.mul(image[a], image[b])) return false;
                return true;
            }
            int g = elems[k];
            if (image[g] >= 0) return self(self, k + 1);
            for (int t = 0; t < n; ++t) {
                if (used[t] || order_of(g) != other.order_of(t)) continue;
                image[g] = t;
                used[t] = true;
                if (consistent((int)k) && self(self, k + 1)) return true;
                image[g] = -1;
                used[t] = false;
            }
            return false;
        };
        if (rec(rec, 0)) return image;
        return std::nullopt;
    }

private:
    std::vector<std::string> names_;
    std::vector<std::vector<int>> table_;
    int identity_;
    std::vector<int> inv_;
};

} // namespace tdr
