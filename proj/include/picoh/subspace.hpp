#ifndef PICOH_SUBSPACE_HPP
#define PICOH_SUBSPACE_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "picoh/echelon.hpp"
#include "picoh/series.hpp"

namespace picoh {

// The finite computation window: t-levels [t_lo, t_hi), u-exponents
// [u_lo, u_hi), r components. Must contain the origin region so that all
// quadrant boundaries are visible.
struct MonomialBox {
    long t_lo, t_hi;
    long u_lo, u_hi;
    int rank = 1;

    void validate() const;
    long u_width() const { return u_hi - u_lo; }
    long t_width() const { return t_hi - t_lo; }
    bool contains(long n, long u) const {
        return n >= t_lo && n < t_hi && u >= u_lo && u < u_hi;
    }
};

enum class BoundaryKind { Empty, Full, Affine };

struct BoundaryMode {
    BoundaryKind kind = BoundaryKind::Empty;
    long slope = 0;
    long intercept = 0;
};

// Tail threshold value: the tail at a level is {u <= value}, nothing (NegInf),
// or everything (PosInf).
struct Threshold {
    enum class Kind { NegInf, Finite, PosInf };
    Kind kind = Kind::NegInf;
    long value = 0;

    static Threshold neg_inf() { return {Kind::NegInf, 0}; }
    static Threshold pos_inf() { return {Kind::PosInf, 0}; }
    static Threshold finite(long v) { return {Kind::Finite, v}; }
    bool is_finite() const { return kind == Kind::Finite; }
    bool covers(long u) const {
        if (kind == Kind::NegInf) return false;
        if (kind == Kind::PosInf) return true;
        return u <= value;
    }
};

// Per-component monomial tail profile: explicit thresholds on box levels,
// affine/empty/full extrapolation beyond them. The tail set is
// span{u^a t^n e_j : a <= d_j(n)}, downward-closed in u.
struct TailProfile {
    // d[j][n]: threshold at box level n for component j; absent entry = no tail.
    std::vector<std::map<long, long>> d;
    std::vector<BoundaryMode> high;  // n >= t_hi (Empty or Affine)
    std::vector<BoundaryMode> low;   // n <  t_lo (Empty, Full or Affine)

    static TailProfile none(int rank) {
        TailProfile t;
        t.d.resize(rank);
        t.high.assign(rank, {BoundaryKind::Empty, 0, 0});
        t.low.assign(rank, {BoundaryKind::Empty, 0, 0});
        return t;
    }
};

enum class Tri { Yes, No, Indeterminate };

struct MembershipResult {
    Tri verdict = Tri::Indeterminate;
    std::string detail;
};

// A vector of bi-series, one per component.
using FieldVec = std::vector<BiSeries<Rational>>;

struct SliceReport {
    long level = 0;
    bool analytic = false;                // outside the box: description only
    std::vector<Threshold> theta;         // per component
    std::vector<SparseVec> rows;          // u-space rows, col = (u - u_lo)*r + j
    long in_box_tail_count = 0;
    long dim_in_box() const { return in_box_tail_count + static_cast<long>(rows.size()); }
};

struct LevelReport {
    long n = 0;
    std::optional<long> h0, h1;  // nullopt = infinite
    bool fredholm = false;
};

struct FredholmReport {
    std::vector<LevelReport> levels;  // box levels
    struct Boundary {
        std::string region;
        bool fredholm = false;
        std::string note;
    };
    std::vector<Boundary> boundaries;
    bool verdict = false;
};

struct SchurReport {
    Tri verdict = Tri::Indeterminate;
    std::string witness;  // violating pair or undecidable regime
};

// Finitely described k-subspace W of k((u))((t))^r: echelonized generators
// with support in the box plus a monomial tail profile with boundary modes.
// Immutable after construction.
class WindowedSubspace {
  public:
    WindowedSubspace(MonomialBox box, TailProfile tail, std::vector<FieldVec> generators);

    const MonomialBox& box() const { return box_; }
    const TailProfile& tail() const { return tail_; }
    int rank() const { return box_.rank; }

    Threshold threshold(int comp, long n) const;

    // Column encoding over box monomials in the order (t, u, component).
    long col(long n, long u, int comp) const;
    void decode(long col, long& n, long& u, int& comp) const;
    bool tail_covered_col(long c) const { return tail_cols_.count(c) > 0; }

    const Echelon& echelon() const { return ech_; }
    // Canonical reduced generator rows (box coordinates).
    std::vector<SparseVec> gen_rows() const;
    int gen_count() const { return ech_.rank(); }

    MembershipResult membership(const FieldVec& v) const;
    MembershipResult membership1(const BiSeries<Rational>& v) const;

    SliceReport slice(long n) const;
    LevelReport fredholm_level(long n) const;
    FredholmReport fredholm_check() const;

    WindowedSubspace enlarged(long margin) const;
    WindowedSubspace shifted(long p, long q) const;  // multiply by u^p t^q

    // All in-box tail monomials (as column indices).
    const std::set<long>& tail_cols() const { return tail_cols_; }

    // Generators exactly as supplied (serialization and window changes).
    const std::vector<FieldVec>& raw_generators() const { return raw_generators_; }

  private:
    MonomialBox box_;
    TailProfile tail_;
    Echelon ech_;
    std::set<long> tail_cols_;
    std::vector<FieldVec> raw_generators_;  // as supplied, for window changes
};

// A*W subset of W, decided pair-by-pair on representatives plus exact
// threshold closure conditions for the infinite monomial tails. A must be
// rank 1 and closed under multiplication (validated first).
SchurReport schur_check(const WindowedSubspace& A, const WindowedSubspace& W);

// Existence condition for an invertible degree-1 element: a in A,
// t_order(a) = 1, and a^-1 in A within the window.
Tri condition_star_star(const WindowedSubspace& A, const BiSeries<Rational>& a,
                        long inv_t_levels = 8, long inv_u_breadth = 16);

// (ord a, ord b, ord ab) under the t-adic filtration; rejects non-units.
std::tuple<long, long, long> ord_unit(const BiSeries<Rational>& a, const BiSeries<Rational>& b);

} // namespace picoh

#endif
