#pragma once

#include <utility>
#include <vector>

#include "scldpc/degree_distribution.hpp"

namespace scldpc {

// Scalar potential of the uncoupled recursion and its derivatives, the area
// threshold it defines, and the chain (profile) extension of the potential.
//
//   U(x; eps) = (1 - R(1-x))/R'(1) - x*rho(1-x) - (eps/L'(1)) * L(1 - rho(1-x))
//
// U(0) = 0 exactly (complement forms), and U' vanishes exactly at the fixed
// points of the recursion.

double potential_single(const DegreeDistribution& dd, double epsilon, double x);

// U'(x) = rho'(1-x) * (x - eps*lambda(1-rho(1-x)))
double potential_derivative(const DegreeDistribution& dd, double epsilon, double x);

// U''(x) = -rho''(1-x)*(x - eps*lambda(.)) + rho'(1-x)*(1 - eps*lambda'(.)*rho'(1-x))
double potential_second_derivative(const DegreeDistribution& dd, double epsilon, double x);

// max over (0, x_hi) of |U''|, by grid scan plus golden-section refinement.
double max_abs_second_derivative(const DegreeDistribution& dd, double epsilon, double x_hi,
                                 int grid_size = 10000);

// min over [0, 1] of U(x; eps), grid scan refined around every local dip.
double min_potential(const DegreeDistribution& dd, double epsilon, int grid_size = 10000);

// Largest epsilon at which min_x U(x; eps) stays nonnegative (up to a -1e-12
// rounding allowance: U(0) = 0 sits exactly on the boundary, so an exact
// predicate would chatter on noise). Bisection over [bp_threshold, 1].
double area_threshold(const DegreeDistribution& dd, double tol = 1e-6);

// (x, U(x)) samples on a uniform grid, for plotting.
std::vector<std::pair<double, double>> potential_curve(const DegreeDistribution& dd, double epsilon,
                                                       int samples = 512);

// Potential of a one-sided chain profile. Boundary convention: x_z = 0 to the
// left of the array, reads past the right end clamp to the last entry. Each
// position contributes a U-like term whose lambda argument is the w-window
// average seen by that position.
double potential_coupled(const DegreeDistribution& dd, double epsilon, int w,
                         const std::vector<double>& profile);

// Analytic partial derivative of potential_coupled with respect to profile[z]
// (0-based). Interior positions reduce to rho'(1-x_z)*(x_z - next DE iterate).
double potential_coupled_partial(const DegreeDistribution& dd, double epsilon, int w,
                                 const std::vector<double>& profile, int z);

}  // namespace scldpc
