#ifndef PICOH_COHOMOLOGY_HPP
#define PICOH_COHOMOLOGY_HPP

#include <cstdint>
#include <optional>

#include "picoh/subspace.hpp"

namespace picoh {

// One cohomology dimension: the exact global value when the boundary modes
// certify finiteness, a proven-unbounded flag otherwise; the in-window count
// is always available and is never a substitute for the global value.
struct DimValue {
    std::optional<long> global;
    bool unbounded = false;
    long in_window = 0;

    bool certified() const { return global.has_value(); }
};

struct CohomologyReport {
    DimValue h0, h1, h2;
    bool finiteness_certified = false;
};

// Closed-form route: H0 = W n O1 n O2, H1 = (W n (O1+O2))/(W n O1 + W n O2),
// H2 = K^r/(W + O1 + O2), all by echelon ranks plus boundary-mode counts.
CohomologyReport picture_cohomology(const WindowedSubspace& W);

// Independent route: materialize the two boundary maps of the three-term
// complex over box coordinates and take kernel/image dimension differences;
// the same boundary-mode corrections are applied outside the box.
CohomologyReport complex_cohomology(const WindowedSubspace& W);

// dim H1 = dim[(W n (O1+O2))/(W n O1)] - dim[(W n O2)/(W n O1 n O2)],
// each quotient computed independently. Falls back to in-window graded
// pieces when an intermediate quotient is infinite.
bool pc_cross_identity(const WindowedSubspace& W);

struct TangentReport {
    DimValue pic_kernel;              // dim H1(A)
    DimValue brauer;                  // dim H2(A)
    std::optional<bool> representable;  // H1(A) = 0; nullopt if undecidable
};

// Requires A to pass fredholm_check and schur_check(A, A).
TangentReport tangent_report(const WindowedSubspace& A);

// Random units over k[eps]/(eps^2) factor as a0 * (1 + eps b) with a0 the
// value part and b window-exact inside A; exp/log are inverse on the
// infinitesimal part. Deterministic in the seed.
bool dual_number_splitting(const WindowedSubspace& A, int samples, std::uint64_t seed = 1);

// Recompute both routes on the box enlarged by margin in all directions;
// true iff certified dimensions are unchanged and uncertified in-window
// counts did not move either.
bool stability_probe(const WindowedSubspace& W, long margin);

} // namespace picoh

#endif
