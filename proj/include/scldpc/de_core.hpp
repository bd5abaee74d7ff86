#pragma once

#include <vector>

#include "scldpc/degree_distribution.hpp"

namespace scldpc {

// Density evolution for the uncoupled ensemble on the erasure channel:
// the scalar recursion x <- eps * lambda(1 - rho(1 - x)).

// One update of the scalar recursion.
double de_step_single(const DegreeDistribution& dd, double epsilon, double x);

struct ForwardLimit {
  double value = 0.0;
  long iters = 0;
  bool converged = false;
};

// Iterates from x = 1 until successive iterates differ by less than tol.
// The sequence is monotone non-increasing, so the limit is the largest
// fixed point reachable from full erasure.
ForwardLimit forward_de_limit(const DegreeDistribution& dd, double epsilon, double tol = 1e-12,
                              long max_iters = 50000);

// True when the recursion from x = 1 sinks below 1e-10 within max_iters.
bool decodes_to_zero(const DegreeDistribution& dd, double epsilon, long max_iters = 50000);

// Largest epsilon at which decodes_to_zero holds, by bisection to width tol.
double bp_threshold(const DegreeDistribution& dd, double tol = 1e-6);

enum class Stability { stable, unstable };

struct FixedPoint {
  double x = 0.0;
  Stability stability = Stability::stable;
};

struct FixedPointSet {
  double epsilon = 0.0;
  std::vector<FixedPoint> points;  // ascending in x; stabilities alternate
  bool grid_warning = false;       // two roots closer than two grid cells
};

// All roots of g(x) = eps*lambda(1-rho(1-x)) - x in [0,1]: uniform sign-change
// scan refined by bisection to 1e-12. Stability from the sign of g' (stable
// iff g' < 0, i.e. the DE map has slope < 1). x = 0 is always reported.
FixedPointSet find_fixed_points(const DegreeDistribution& dd, double epsilon, int grid_size = 10000);

}  // namespace scldpc
