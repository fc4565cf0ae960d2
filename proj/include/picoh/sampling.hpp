#ifndef PICOH_SAMPLING_HPP
#define PICOH_SAMPLING_HPP

#include <random>

#include "picoh/hierarchy.hpp"
#include "picoh/subspace.hpp"

namespace picoh {

// Deterministic sample builders for the property suites (selfcheck and the
// test corpora). All draws come from the supplied engine.

Rational random_rational(std::mt19937_64& rng, long num_range = 9, long den_range = 4);

// Tails only, affine modes with slope <= -1 on both sides: finiteness
// certifiable and generalized Fredholm at every level.
WindowedSubspace random_monomial_subspace(std::mt19937_64& rng, int rank);

// Mixed generators + tails over a small box; certified boundary modes.
WindowedSubspace random_subspace(std::mt19937_64& rng, int rank);

// A unit of the field window: unit leading monomial plus a few later terms.
BiSeries<Rational> random_unit(std::mt19937_64& rng);

// L = d + a_1 d^-1 + ... over Q[[x]] with small polynomial coefficients.
Psdo<XSeriesRing> random_lax(std::mt19937_64& rng, int depth, long floor);

// S = 1 + (strictly negative d2-part) with small nested coefficients.
EOp random_monic_dressing(std::mt19937_64& rng, const ParshinCoeffRing& rg, int terms);

// An element of E with a couple of terms (for action property sweeps).
EOp random_e_operator(std::mt19937_64& rng, const ParshinCoeffRing& rg);

// Exact finite series supported near the origin.
BiSeries<Rational> random_field_element(std::mt19937_64& rng);

} // namespace picoh

#endif
