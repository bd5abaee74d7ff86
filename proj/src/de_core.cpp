#include "scldpc/de_core.hpp"

#include <cmath>

namespace scldpc {

double de_step_single(const DegreeDistribution& dd, double epsilon, double x) {
  return epsilon * dd.lam(dd.rho_complement(x));
}

ForwardLimit forward_de_limit(const DegreeDistribution& dd, double epsilon, double tol, long max_iters) {
  ForwardLimit out;
  double x = 1.0;
  for (long t = 0; t < max_iters; ++t) {
    double xn = de_step_single(dd, epsilon, x);
    if (std::abs(xn - x) < tol) {
      out.value = xn;
      out.iters = t + 1;
      out.converged = true;
      return out;
    }
    x = xn;
  }
  out.value = x;
  out.iters = max_iters;
  out.converged = false;
  return out;
}

bool decodes_to_zero(const DegreeDistribution& dd, double epsilon, long max_iters) {
  double x = 1.0;
  for (long t = 0; t < max_iters; ++t) {
    x = de_step_single(dd, epsilon, x);
    if (x < 1e-10) return true;
    // stalled well above zero: no need to burn the remaining iterations
    if (t > 100 && x > 1e-6) {
      double xn = de_step_single(dd, epsilon, x);
      if (x - xn < 1e-15) return false;
      x = xn;
      ++t;
    }
  }
  return x < 1e-10;
}

double bp_threshold(const DegreeDistribution& dd, double tol) {
  double lo = 0.0, hi = 1.0;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (decodes_to_zero(dd, mid))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

double fp_residual(const DegreeDistribution& dd, double epsilon, double x) {
  return de_step_single(dd, epsilon, x) - x;
}

double refine_root(const DegreeDistribution& dd, double epsilon, double lo, double hi) {
  double flo = fp_residual(dd, epsilon, lo);
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = fp_residual(dd, epsilon, mid);
    if ((flo <= 0) == (fm <= 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

FixedPointSet find_fixed_points(const DegreeDistribution& dd, double epsilon, int grid_size) {
  FixedPointSet out;
  out.epsilon = epsilon;

  std::vector<double> roots{0.0};  // origin is always a fixed point (lambda(0) = 0)
  const double h = 1.0 / grid_size;
  double prev_x = 0.0, prev_f = 0.0;  // residual at 0 is exactly 0
  int last_root_cell = 0;
  for (int i = 1; i <= grid_size; ++i) {
    double x = i * h;
    double f = fp_residual(dd, epsilon, x);
    if (f == 0.0) {
      roots.push_back(x);
      if (i - last_root_cell < 2) out.grid_warning = true;
      last_root_cell = i;
    } else if ((prev_f < 0) != (f < 0) && prev_f != 0.0) {
      roots.push_back(refine_root(dd, epsilon, prev_x, x));
      if (i - last_root_cell < 2) out.grid_warning = true;
      last_root_cell = i;
    }
    prev_x = x;
    prev_f = f;
  }

  for (double r : roots) {
    // g'(x) = eps*lambda'(1-rho(1-x))*rho'(1-x) - 1
    double gp = epsilon * dd.lam_prime(dd.rho_complement(r)) * dd.rho_prime(1 - r) - 1.0;
    out.points.push_back({r, gp < 0 ? Stability::stable : Stability::unstable});
  }
  return out;
}

}  // namespace scldpc
