#pragma once

#include <optional>
#include <vector>

#include "scldpc/coupled.hpp"

namespace scldpc {

// Propagation-speed measurement on formed waves, the two-wave decomposition,
// and the empirical Taylor factor of the potential expansion.

struct SpeedReport {
    int I = 0;
    long T_I = 0;
    double v_I = 0.0;  // I / T_I
    WaveMode mode = WaveMode::single_wave;
    std::optional<double> v_upper, v_lower;  // filled in two_wave mode
};

// Classified scalar fixed-point structure. single_wave: three fixed points
// {0, u1, s2}; two_wave: five {0, u1, s1, u2, s2}. s1 is NaN in single mode.
struct WaveModeInfo {
    WaveMode mode = WaveMode::single_wave;
    double s1, s2;  // stable
    double u1, u2;  // unstable (u2 NaN in single mode)
};

WaveModeInfo classify_wave_mode(const DegreeDistribution& dd, double epsilon);

// T_I = least number of further iterations after which the profile sits below
// its reference translated right by I positions, compared over the interior
// window [max(2w, I), N'-2w). A small domination allowance absorbs the
// last-ulp limit cycling of plateau values, which otherwise blocks the
// comparison at a handful of positions for hundreds of iterations.
SpeedReport measure_speed(const CoupledConfig& cfg, const FormationResult& formed, int I,
                          long max_iters = 100000);

// Shared forward run for several shifts at once (the per-I tests reuse the
// same trajectory). Results come back in the order of `shifts`.
std::vector<SpeedReport> measure_speeds(const CoupledConfig& cfg, const FormationResult& formed,
                                        const std::vector<int>& shifts, long max_iters = 100000);

struct TwoWaveSpeeds {
    int I = 0;
    long T_upper = 0, T_lower = 0;
    double v_upper = 0.0, v_lower = 0.0;
};

// Segmented measurement for the five-fixed-point regime: positions whose
// reference value lies above s1 belong to the upper (s2 -> s1) wave, the rest
// to the lower (s1 -> 0) wave. Requires a separated middle plateau.
TwoWaveSpeeds measure_two_wave_speeds(const CoupledConfig& cfg, const FormationResult& formed,
                                      int I, double separation_tol = 1e-6,
                                      long max_iters = 100000);

struct AlphaEstimate {
    double alpha = 1.0;      // max(1, max ratio): the certified factor
    double max_ratio = 0.0;  // largest first-order-term / potential-drop ratio
    double max_remainder = 0.0;  // largest remainder (potential drop minus first-order term)
    int steps = 0;
};

// Empirical Taylor factor over n_steps consecutive iterations from a formed
// wave: ratio of the first-order potential term sum_z dU/dx_z * (x'_z - x_z)
// to the actual potential difference, maximized over steps.
AlphaEstimate estimate_alpha(const CoupledConfig& cfg, const FormationResult& formed,
                             int n_steps = 64);

namespace detail {
// Domination allowance for the shift test (see measure_speed).
inline constexpr double kDominationTol = 1e-11;
}  // namespace detail

}  // namespace scldpc
