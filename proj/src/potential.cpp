#include "scldpc/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scldpc/de_core.hpp"

namespace scldpc {

double potential_single(const DegreeDistribution& dd, double epsilon, double x) {
    const double rc = dd.rho_complement(x);
    return dd.R_complement(x) / dd.R_prime_one() - x * dd.rho(1.0 - x) -
           (epsilon / dd.L_prime_one()) * dd.L(rc);
}

double potential_derivative(const DegreeDistribution& dd, double epsilon, double x) {
    return dd.rho_prime(1.0 - x) * (x - epsilon * dd.lam(dd.rho_complement(x)));
}

double potential_second_derivative(const DegreeDistribution& dd, double epsilon, double x) {
    const double rc = dd.rho_complement(x);
    const double rp = dd.rho_prime(1.0 - x);
    const double first = -dd.rho_second(1.0 - x) * (x - epsilon * dd.lam(rc));
    const double second = rp * (1.0 - epsilon * dd.lam_prime(rc) * rp);
    return first + second;
}

namespace {

// Golden-section search for the minimum of f on [a, b].
template <typename F>
double golden_min(F f, double a, double b) {
    constexpr double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && (b - a) > 1e-14; ++it) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double max_abs_second_derivative(const DegreeDistribution& dd, double epsilon, double x_hi,
                                 int grid_size) {
    if (!(x_hi > 0.0)) throw std::invalid_argument("max_abs_second_derivative: x_hi must be > 0");
    auto f = [&](double x) { return std::abs(potential_second_derivative(dd, epsilon, x)); };
    double best = f(0.0);
    int best_i = 0;
    for (int i = 1; i <= grid_size; ++i) {
        const double x = x_hi * static_cast<double>(i) / grid_size;
        const double v = f(x);
        if (v > best) { best = v; best_i = i; }
    }
    const double a = x_hi * static_cast<double>(std::max(0, best_i - 1)) / grid_size;
    const double b = x_hi * static_cast<double>(std::min(grid_size, best_i + 1)) / grid_size;
    const double xr = golden_min([&](double x) { return -f(x); }, a, b);
    return std::max(best, f(xr));
}

double min_potential(const DegreeDistribution& dd, double epsilon, int grid_size) {
    auto f = [&](double x) { return potential_single(dd, epsilon, x); };
    std::vector<double> vals(static_cast<size_t>(grid_size) + 1);
    for (int i = 0; i <= grid_size; ++i)
        vals[static_cast<size_t>(i)] = f(static_cast<double>(i) / grid_size);
    double best = std::min(vals.front(), vals.back());
    for (int i = 1; i < grid_size; ++i) {
        const size_t u = static_cast<size_t>(i);
        if (vals[u] <= vals[u - 1] && vals[u] <= vals[u + 1]) {
            const double a = static_cast<double>(i - 1) / grid_size;
            const double b = static_cast<double>(i + 1) / grid_size;
            best = std::min(best, f(golden_min(f, a, b)));
        }
        best = std::min(best, vals[u]);
    }
    return best;
}

double area_threshold(const DegreeDistribution& dd, double tol) {
    // U(0) = 0 exactly, so the "nonnegative everywhere" predicate needs a hair
    // of slack against rounding in the grid/refinement evaluation.
    auto nonneg = [&](double eps) { return min_potential(dd, eps) >= -1e-12; };
    double lo = bp_threshold(dd);
    double hi = 1.0;
    if (!nonneg(lo)) throw std::runtime_error("area_threshold: potential dips below zero at the BP threshold");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (nonneg(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<std::pair<double, double>> potential_curve(const DegreeDistribution& dd, double epsilon,
                                                       int samples) {
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<size_t>(samples) + 1);
    for (int i = 0; i <= samples; ++i) {
        const double x = static_cast<double>(i) / samples;
        out.emplace_back(x, potential_single(dd, epsilon, x));
    }
    return out;
}

double potential_coupled(const DegreeDistribution& dd, double epsilon, int w,
                         const std::vector<double>& profile) {
    if (w < 1) throw std::invalid_argument("potential_coupled: w must be >= 1");
    const int m = static_cast<int>(profile.size());
    if (m < w) throw std::invalid_argument("potential_coupled: profile shorter than coupling width");
    double total = 0.0;
    for (int z = 0; z < m; ++z) {
        double g = 0.0;
        for (int j = 0; j < w; ++j) g += dd.rho(1.0 - profile[static_cast<size_t>(std::min(z + j, m - 1))]);
        g /= w;
        const double xz = profile[static_cast<size_t>(z)];
        total += dd.R_complement(xz) / dd.R_prime_one() - xz * dd.rho(1.0 - xz) -
                 (epsilon / dd.L_prime_one()) * dd.L(1.0 - g);
    }
    return total;
}

double potential_coupled_partial(const DegreeDistribution& dd, double epsilon, int w,
                                 const std::vector<double>& profile, int z) {
    const int m = static_cast<int>(profile.size());
    if (m < w) throw std::invalid_argument("potential_coupled_partial: profile shorter than coupling width");
    if (z < 0 || z >= m) throw std::out_of_range("potential_coupled_partial: position out of range");
    // Every position z' whose lambda-window covers z contributes; positions
    // below 0 do not exist in the sum, and the last position is read with
    // multiplicity where windows clamp past the right end. The bracket
    // reduces to x_z minus the uniform-epsilon DE update of position z.
    double acc = 0.0;
    for (int k = 0; k < w; ++k) {
        const int zp = z - k;
        if (zp < 0) continue;
        double g = 0.0;
        int mult = 0;
        for (int j = 0; j < w; ++j) {
            const int r = std::min(zp + j, m - 1);
            g += dd.rho(1.0 - profile[static_cast<size_t>(r)]);
            if (r == z) ++mult;
        }
        g /= w;
        acc += mult * dd.lam(1.0 - g);
    }
    const double xz = profile[static_cast<size_t>(z)];
    return dd.rho_prime(1.0 - xz) * (xz - epsilon * acc / w);
}

}  // namespace scldpc
