#ifndef PICOH_ECHELON_HPP
#define PICOH_ECHELON_HPP

#include <map>
#include <vector>

#include "picoh/coefficients.hpp"

namespace picoh {

using SparseVec = std::map<long, Rational>;  // column -> nonzero entry

inline void vec_axpy(SparseVec& dst, const Rational& a, const SparseVec& src) {
    if (a.is_zero()) return;
    for (const auto& [col, v] : src) {
        auto it = dst.find(col);
        if (it == dst.end()) {
            Rational t = a * v;
            if (!t.is_zero()) dst.emplace(col, std::move(t));
        } else {
            it->second += a * v;
            if (it->second.is_zero()) dst.erase(it);
        }
    }
}

// Reduced row echelon form over Q with sparse rows; pivots are the least
// columns, pivot entries 1, pivot columns cleared in all other rows. The
// form is canonical for the span.
class Echelon {
  public:
    // Fully reduce v against the current rows.
    SparseVec reduce(SparseVec v) const {
        auto it = v.begin();
        while (it != v.end()) {
            auto row = rows_.find(it->first);
            if (row == rows_.end()) {
                ++it;
                continue;
            }
            Rational f = -it->second;
            vec_axpy(v, f, row->second);
            it = v.upper_bound(row->first);
        }
        return v;
    }

    // Insert v's residual if independent. Returns true when the rank grew.
    bool add(SparseVec v) {
        v = reduce(std::move(v));
        if (v.empty()) return false;
        long pivot = v.begin()->first;
        Rational inv = v.begin()->second.inverse();
        for (auto& [col, val] : v) val *= inv;
        for (auto& [p, row] : rows_) {
            auto it = row.find(pivot);
            if (it == row.end()) continue;
            Rational f = -it->second;
            vec_axpy(row, f, v);
        }
        rows_.emplace(pivot, std::move(v));
        return true;
    }

    int rank() const { return static_cast<int>(rows_.size()); }
    const std::map<long, SparseVec>& rows() const { return rows_; }

  private:
    std::map<long, SparseVec> rows_;
};

inline int rank_of(const std::vector<SparseVec>& vecs) {
    Echelon e;
    for (const auto& v : vecs) e.add(v);
    return e.rank();
}

// Basis of {x in Q^n : sum_i x_i * rows[i] = 0}, returned as sparse vectors
// over coordinate indices 0..n-1. Gaussian elimination with an augmented
// identity block tracking the row operations.
inline std::vector<SparseVec> kernel_of(const std::vector<SparseVec>& rows) {
    const long n = static_cast<long>(rows.size());
    std::map<long, std::pair<SparseVec, SparseVec>> pivots;  // pivot col -> (row, op)
    std::vector<SparseVec> kernel;
    for (long i = 0; i < n; ++i) {
        SparseVec v = rows[i];
        SparseVec op;
        op.emplace(i, Rational(1));
        auto it = v.begin();
        while (it != v.end()) {
            auto f = pivots.find(it->first);
            if (f == pivots.end()) {
                ++it;
                continue;
            }
            Rational c = -it->second;
            vec_axpy(v, c, f->second.first);
            vec_axpy(op, c, f->second.second);
            it = v.upper_bound(f->first);
        }
        if (v.empty()) {
            kernel.push_back(std::move(op));
        } else {
            Rational inv = v.begin()->second.inverse();
            for (auto& [col, val] : v) val *= inv;
            for (auto& [col, val] : op) val *= inv;
            pivots.emplace(v.begin()->first, std::make_pair(std::move(v), std::move(op)));
        }
    }
    return kernel;
}

} // namespace picoh

#endif
