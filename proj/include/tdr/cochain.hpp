#pragma once

#include <map>
#include <vector>

#include "tdr/linalg.hpp"

namespace tdr {

/// A finite cochain complex over the rationals on a degree range [lo, hi].
/// d^n maps degree n to degree n+1; d^{hi} is the zero map out of the top
/// degree. d∘d = 0 is checked at construction and rejected otherwise.
class CochainComplex {
public:
    /// diffs[i] is d^{lo+i}: dim(lo+i) -> dim(lo+i+1); size dims.size()-1.
    CochainComplex(int lo, std::vector<long> dims, std::vector<SparseMatrix> diffs)
        : lo_(lo), dims_(std::move(dims)), d_(std::move(diffs)) {
        if (dims_.empty()) throw ValidationError("cochain complex needs at least one degree");
        if (d_.size() + 1 != dims_.size())
            throw ValidationError("cochain complex: differential count must be #degrees - 1");
        for (size_t i = 0; i < d_.size(); ++i) {
            if (d_[i].cols() != dims_[i] || d_[i].rows() != dims_[i + 1])
                throw ValidationError("cochain complex: differential shape mismatch");
            if (i + 1 < d_.size() && !(d_[i + 1] * d_[i]).is_zero())
                throw ValidationError("cochain complex: d∘d != 0");
        }
    }

    int lo() const { return lo_; }
    int hi() const { return lo_ + (int)dims_.size() - 1; }

    long dim(int n) const {
        if (n < lo() || n > hi()) return 0;
        return dims_[n - lo_];
    }

    /// d^n, including the implicit zero maps at the ends.
    SparseMatrix differential(int n) const {
        if (n < lo() || n > hi()) return SparseMatrix(0, 0);
        if (n == hi()) return SparseMatrix(0, dims_.back());
        return d_[n - lo_];
    }

    /// dim H^n = dim ker d^n - rank d^{n-1}, per degree in range.
    std::map<int, long> cohomology_dims() const {
        std::map<int, long> h;
        std::vector<long> ranks(dims_.size(), 0); // rank of d^{lo+i}
        for (size_t i = 0; i < d_.size(); ++i) ranks[i] = rank(d_[i]);
        for (int n = lo(); n <= hi(); ++n) {
            long rk_out = (n == hi()) ? 0 : ranks[n - lo_];
            long rk_in = (n == lo()) ? 0 : ranks[n - 1 - lo_];
            h[n] = dim(n) - rk_out - rk_in;
        }
        return h;
    }

private:
    int lo_;
    std::vector<long> dims_;
    std::vector<SparseMatrix> d_;
};

} // namespace tdr
