#pragma once

#include <limits>
#include <string>
#include <vector>

#include "scldpc/degree_distribution.hpp"

namespace scldpc {

// One-sided coupled density evolution: positions z = 1..N' (stored 0-based),
// x_z = 0 for z <= 0, reads past the right end clamp to x_{N'}, and the
// channel parameter is 0 for z <= 0 and epsilon for every stored position.

struct CoupledConfig {
    DegreeDistribution dd;
    int N_prime;
    int w;
    double epsilon;

    CoupledConfig(DegreeDistribution d, int n_prime, int coupling_w, double eps);
};

struct DensityProfile {
    std::vector<double> x;
    long t = 0;
};

DensityProfile init_profile(const CoupledConfig& cfg);

// Reusable stepping kernel. Window sums are computed with running cumulative
// sums, so one step is O(N') regardless of w.
class CoupledStepper {
  public:
    explicit CoupledStepper(const CoupledConfig& cfg);
    void step(std::vector<double>& x);

  private:
    const DegreeDistribution dd_;
    int w_;
    double eps_;
    std::vector<double> cum_, act_;
};

DensityProfile coupled_de_step(const CoupledConfig& cfg, const DensityProfile& profile);

enum class WaveMode { single_wave, two_wave };

// Leftmost position whose value exceeds half the right-end plateau; the
// profile is monotone in z, so this tracks the (upper) wavefront.
int front_position(const std::vector<double>& x);

struct FormationResult {
    DensityProfile profile;  // state at detection (decayed profile when !formed)
    bool formed = false;
    std::string reason;      // set when !formed
    WaveMode mode = WaveMode::single_wave;
    double plateau = 0.0;    // right-end value at detection
    double s1 = std::numeric_limits<double>::quiet_NaN();  // two_wave middle plateau
    long formed_at = 0;

    // Recorded diagnostics: best one-position translation match against the
    // recent history at detection time. The drift per iteration is not a
    // whole number of positions, so this deviation does not reach 0 on a
    // moving wave; it is reported, not gated on.
    double shape_deviation = std::numeric_limits<double>::quiet_NaN();
    int shape_period = 0;
};

// Iterates from all-ones until the wave has formed. Formation means the
// profile has detached from the left boundary (x_w below detach_tol, the
// regime the speed bounds assume) with the front at least 2w positions into
// the chain; in the two-wave regime the middle plateau must additionally span
// at least 2w positions within separation_tol of s1. If the underlying
// recursion decodes to zero there is no wave: returns formed=false with the
// decayed profile. shape_tol only labels the recorded diagnostic.
FormationResult run_until_wave_formed(const CoupledConfig& cfg, double shape_tol = 1e-9,
                                      long max_iters = 20000, double separation_tol = 1e-6);

namespace detail {
inline constexpr double kDetachTol = 1e-12;
inline constexpr int kShapeHistory = 64;
}  // namespace detail

}  // namespace scldpc
