#ifndef PICOH_HIERARCHY_HPP
#define PICOH_HIERARCHY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "picoh/diffpoly.hpp"
#include "picoh/psdo.hpp"
#include "picoh/series.hpp"

namespace picoh {

// Differential polynomials as a coefficient ring (exact, derivation = ').
struct DiffPolyRing {
    using Elem = DiffPoly;
    Elem zero() const { return {}; }
    Elem one() const { return DiffPoly::constant(Rational(1)); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem scale(const Elem& a, const Rational& q) const { return a.scaled(q); }
    Elem derive(const Elem& a) const { return a.derived(); }
    bool is_exact_zero(const Elem& a) const { return a.is_zero(); }
    bool is_window_zero(const Elem& a) const { return a.is_zero(); }
    bool exhausted(const Elem&) const { return false; }
    Elem invert(const Elem&) const { throw not_invertible("differential polynomials"); }
    std::string str(const Elem& a) const { return a.str(); }
};

using KPOp = Psdo<DiffPolyRing>;

// L = d + a_1 d^-1 + ... + a_depth d^-depth, coefficients generic; terms
// below -depth are the truncated-away tail.
KPOp generic_lax(int depth);

// The t_n-flow: sends a_i to the d^-i coefficient of [(L^n)_+, L].
EvolutionaryDerivation kp_flow(int n, int depth);

struct KpReport {
    DiffPoly residual;
    int depth_used = 0;
};

// (4u_t - u''' - 12uu')' - 3u_yy with u = a_1, y = t_2, t = t_3, flows
// expanded symbolically; residual must be identically zero.
KpReport derive_kp(int depth_cap = 12);

// Same computation with the right-hand coefficient 3 replaced, for the
// perturbation check.
DiffPoly kp_residual_with_coefficient(const Rational& rhs_coeff, int depth);

struct KdvReport {
    Rational derived_constant;       // c in 4u_t - c*u''' - 12uu' = 0
    bool evolution_exact = false;    // reduced flow matched that shape exactly
    Rational paper_constant;         // printed coefficient for comparison
    bool matches_paper = false;
    int depth_low = 0, depth_high = 0;
    bool consistent = false;         // same c at both depths
    DiffPoly reduced_flow;           // D(a_1) after the 1-reduction
};

// Impose (L^2)_- = 0, solve a_2, a_3, ... in terms of u = a_1, then push u
// through the t_3-flow and read off the u''' coefficient.
KdvReport derive_kdv(int depth = 6);

// The 1-reduction substitution a_{i+1} = ... for i+1 <= depth.
std::map<int, DiffPoly> kdv_reduction(int depth);

// ---------------------------------------------------------------------------
// Two-dimensional hierarchy over E = C[[x1,x2]]((d1^-1))((d2^-1)).
// ---------------------------------------------------------------------------

struct EWindow {
    long outer_floor = -8;   // d2-floor requests
    long inner_floor = -8;   // d1-floor requests
    long inv_prec = 16;      // x-series inversion precision
};

ParshinCoeffRing make_e_ring(const EWindow& w);

EOp e_delta1(const ParshinCoeffRing& rg);
EOp e_delta2(const ParshinCoeffRing& rg);
EOp e_x1(const ParshinCoeffRing& rg);
EOp e_x2(const ParshinCoeffRing& rg);

struct ParshinPair {
    EOp L;
    EOp M;
};

// True when [L, M] vanishes within the provable window.
bool pair_admissible(const ParshinCoeffRing& rg, const ParshinPair& p, long outer_floor);

// L = S^-1 d1 S, M = S^-1 d2 S for S in 1 + E_-.
ParshinPair dress(const ParshinCoeffRing& rg, const EOp& S, long outer_floor);

// V = ([(L^i M^j)_+, L], [(L^i M^j)_+, M]); the +/- split is taken with
// respect to d2. alpha, when given, validates i <= alpha * j.
std::pair<EOp, EOp> parshin_flow(const ParshinCoeffRing& rg, const ParshinPair& p,
                                 long i, long j, long outer_floor,
                                 std::optional<Rational> alpha = std::nullopt);

// Left action of E on k((u))((t)) through E / E(x1,x2), d1^-1 -> u,
// d2^-1 -> t: lift f, compose A on the left, normal-order x to the right,
// drop the left-ideal part, read off the image.
BiSeries<Rational> apply_to_field(const ParshinCoeffRing& rg, const EOp& A,
                                  const BiSeries<Rational>& f);

} // namespace picoh

#endif
