#pragma once

#include <optional>
#include <string>

#include "scldpc/coupled.hpp"

namespace scldpc {

// Closed-form and profile-based speed bounds.

enum class LBVariant { as_stated, as_tabulated };

std::string to_string(LBVariant v);
LBVariant lb_variant_from_string(const std::string& s);

// Profile upper bound: alpha * U(x_infty; eps) divided by the quadratic
// variation sum_z rho'(1-x_z)(x_z - x_{z-1})^2 of the formed profile (x_0 = 0
// on the left; plateau differences vanish on the right).
double bound_B1(const CoupledConfig& cfg, const DensityProfile& formed, double alpha = 1.0);

// Closed-form upper bound w*alpha*U(x_bp) / (2U(x_u) - U(x_bp)); with the
// finite-w correction the denominator loses D*x_bp^2/w, where D is the
// largest |U''| on (0, x_bp).
double bound_B2(const DegreeDistribution& dd, double epsilon, int w, double alpha = 1.0,
                bool include_D_term = false);

// Lower bound on v_1. as_tabulated: w*U(x_bp)/(x_bp*(1-rho(1-x_bp))).
// as_stated: w*U(x_bp)/(x_bp*(1-rho(x_bp))) - 1/w. The reference tables match
// the former; the latter keeps the literal statement available.
double bound_LB(const DegreeDistribution& dd, double epsilon, int w,
                LBVariant variant = LBVariant::as_tabulated);

struct BoundsReport {
    double B1 = 0.0;
    double B2 = 0.0;
    std::optional<double> B2_finite_w;  // empty when the corrected denominator is not positive
    std::string B2_finite_w_note;       // says why when empty
    double LB = 0.0;
    double alpha = 1.0;
    double D = 0.0;
    LBVariant variant = LBVariant::as_tabulated;
};

BoundsReport compute_bounds(const CoupledConfig& cfg, const DensityProfile& formed,
                            double alpha = 1.0, LBVariant variant = LBVariant::as_tabulated);

// Two-wave forms of the profile bound over a separated profile.
//   full:          alpha*U(s2) / (sum over all positions)       >= v_lower
//   upper_segment: alpha*(U(s2)-U(s1)) / (sum where x > s1)     >= v_upper
//   lower_segment: alpha*U(s1) / (sum where x <= s1)            >= v_lower
struct TwoWaveB1 {
    double full = 0.0;
    double upper_segment = 0.0;
    double lower_segment = 0.0;
};

TwoWaveB1 bound_B1_two_wave(const CoupledConfig& cfg, const DensityProfile& formed, double s1,
                            double s2, double alpha = 1.0, double separation_tol = 1e-6);

}  // namespace scldpc
