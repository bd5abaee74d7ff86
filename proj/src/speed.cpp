#include "scldpc/speed.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scldpc/de_core.hpp"
#include "scldpc/potential.hpp"

namespace scldpc {

WaveModeInfo classify_wave_mode(const DegreeDistribution& dd, double epsilon) {
    const FixedPointSet fps = find_fixed_points(dd, epsilon);
    const auto& pts = fps.points;
    WaveModeInfo info;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (pts.size() == 3) {
        info.mode = WaveMode::single_wave;
        info.u1 = pts[1].x;
        info.s2 = pts[2].x;
        info.s1 = nan;
        info.u2 = nan;
        return info;
    }
    if (pts.size() == 5) {
        info.mode = WaveMode::two_wave;
        info.u1 = pts[1].x;
        info.s1 = pts[2].x;
        info.u2 = pts[3].x;
        info.s2 = pts[4].x;
        return info;
    }
    throw std::runtime_error("unsupported fixed-point structure: " + std::to_string(pts.size()) +
                             " fixed points");
}

namespace {

void require_formed(const FormationResult& formed, int n_prime) {
    if (!formed.formed) throw std::invalid_argument("speed measurement requires a formed wave (" + formed.reason + ")");
    if (static_cast<int>(formed.profile.x.size()) != n_prime)
        throw std::invalid_argument("speed measurement: profile length does not match config");
}

}  // namespace

std::vector<SpeedReport> measure_speeds(const CoupledConfig& cfg, const FormationResult& formed,
                                        const std::vector<int>& shifts, long max_iters) {
    require_formed(formed, cfg.N_prime);
    for (int I : shifts)
        if (I < 1) throw std::invalid_argument("measure_speeds: shift must be >= 1");

    const int m = cfg.N_prime;
    const std::vector<double>& ref = formed.profile.x;
    std::vector<double> cur = ref;
    CoupledStepper stepper(cfg);

    std::vector<int> pending(shifts);
    std::sort(pending.begin(), pending.end());
    pending.erase(std::unique(pending.begin(), pending.end()), pending.end());
    std::vector<std::pair<int, long>> done;

    long T = 0;
    while (!pending.empty() && T < max_iters) {
        stepper.step(cur);
        ++T;
        if (front_position(cur) > m - 2 * cfg.w)
            throw std::runtime_error("wavefront reached the boundary during measurement: extend N_prime");
        for (auto it = pending.begin(); it != pending.end();) {
            const int I = *it;
            const int lo = std::max(2 * cfg.w, I);
            bool dominated = true;
            for (int z = lo; z < m - 2 * cfg.w; ++z) {
                if (cur[static_cast<size_t>(z)] > ref[static_cast<size_t>(z - I)] + detail::kDominationTol) {
                    dominated = false;
                    break;
                }
            }
            if (dominated) {
                done.emplace_back(I, T);
                it = pending.erase(it);
            } else {
                ++it;
            }
        }
    }
    if (!pending.empty())
        throw std::runtime_error("speed measurement did not resolve within max_iters (wave stalled?)");

    std::vector<SpeedReport> out;
    out.reserve(shifts.size());
    for (int I : shifts) {
        const auto hit = std::find_if(done.begin(), done.end(), [&](const auto& p) { return p.first == I; });
        SpeedReport r;
        r.I = I;
        r.T_I = hit->second;
        r.v_I = static_cast<double>(I) / static_cast<double>(hit->second);
        r.mode = formed.mode;
        if (formed.mode == WaveMode::two_wave) {
            const auto tw = measure_two_wave_speeds(cfg, formed, I, 1e-6, max_iters);
            r.v_upper = tw.v_upper;
            r.v_lower = tw.v_lower;
        }
        out.push_back(r);
    }
    return out;
}

SpeedReport measure_speed(const CoupledConfig& cfg, const FormationResult& formed, int I,
                          long max_iters) {
    return measure_speeds(cfg, formed, {I}, max_iters).front();
}

TwoWaveSpeeds measure_two_wave_speeds(const CoupledConfig& cfg, const FormationResult& formed,
                                      int I, double separation_tol, long max_iters) {
    require_formed(formed, cfg.N_prime);
    if (formed.mode != WaveMode::two_wave)
        throw std::invalid_argument("measure_two_wave_speeds: input is a single wave");
    if (I < 1) throw std::invalid_argument("measure_two_wave_speeds: shift must be >= 1");

    const int m = cfg.N_prime;
    const std::vector<double>& ref = formed.profile.x;
    const double threshold = formed.s1 + separation_tol;

    // The middle plateau must be wide enough that the two fronts move
    // independently over the measurement.
    int plateau = 0, run = 0;
    for (double v : ref) {
        run = (std::abs(v - formed.s1) < separation_tol) ? run + 1 : 0;
        plateau = std::max(plateau, run);
    }
    if (plateau < 2 * cfg.w)
        throw std::runtime_error("overlapping waves: middle plateau spans only " +
                                 std::to_string(plateau) + " positions");

    std::vector<double> cur = ref;
    CoupledStepper stepper(cfg);
    TwoWaveSpeeds out;
    out.I = I;

    long T = 0;
    while ((out.T_upper == 0 || out.T_lower == 0) && T < max_iters) {
        stepper.step(cur);
        ++T;
        if (front_position(cur) > m - 2 * cfg.w)
            throw std::runtime_error("wavefront reached the boundary during measurement: extend N_prime");
        const int lo = std::max(2 * cfg.w, I);
        bool upper_ok = true, lower_ok = true;
        for (int z = lo; z < m - 2 * cfg.w; ++z) {
            const double rv = ref[static_cast<size_t>(z - I)];
            const bool dominated =
                cur[static_cast<size_t>(z)] <= rv + detail::kDominationTol;
            if (rv > threshold)
                upper_ok = upper_ok && dominated;
            else
                lower_ok = lower_ok && dominated;
        }
        if (out.T_upper == 0 && upper_ok) out.T_upper = T;
        if (out.T_lower == 0 && lower_ok) out.T_lower = T;
    }
    if (out.T_upper == 0 || out.T_lower == 0)
        throw std::runtime_error("two-wave measurement did not resolve within max_iters");
    out.v_upper = static_cast<double>(I) / static_cast<double>(out.T_upper);
    out.v_lower = static_cast<double>(I) / static_cast<double>(out.T_lower);
    return out;
}

AlphaEstimate estimate_alpha(const CoupledConfig& cfg, const FormationResult& formed, int n_steps) {
    require_formed(formed, cfg.N_prime);
    if (n_steps < 10) throw std::invalid_argument("estimate_alpha: need at least 10 steps");

    std::vector<double> x = formed.profile.x;
    std::vector<double> next = x;
    CoupledStepper stepper(cfg);
    AlphaEstimate out;
    out.max_ratio = -std::numeric_limits<double>::infinity();
    out.max_remainder = -std::numeric_limits<double>::infinity();

    double u_cur = potential_coupled(cfg.dd, cfg.epsilon, cfg.w, x);
    for (int s = 0; s < n_steps; ++s) {
        stepper.step(next);
        if (front_position(next) > cfg.N_prime - 2 * cfg.w)
            throw std::runtime_error("wavefront reached the boundary during measurement: extend N_prime");
        const double u_next = potential_coupled(cfg.dd, cfg.epsilon, cfg.w, next);
        const double u_diff = u_next - u_cur;
        if (std::abs(u_diff) < 1e-14)
            throw std::runtime_error("estimate_alpha: potential stalled (wave not moving)");

        // First-order term: dU/dx_z = rho'(1-x_z) * (x_z - x'_z), so the
        // directional term along the step is -sum rho'(1-x_z) (x'_z - x_z)^2.
        double first_order = 0.0;
        for (size_t z = 0; z < x.size(); ++z) {
            const double d = next[z] - x[z];
            first_order -= cfg.dd.rho_prime(1.0 - x[z]) * d * d;
        }
        out.max_ratio = std::max(out.max_ratio, first_order / u_diff);
        out.max_remainder = std::max(out.max_remainder, u_diff - first_order);
        ++out.steps;

        x = next;
        u_cur = u_next;
    }
    out.alpha = std::max(1.0, out.max_ratio);
    return out;
}

}  // namespace scldpc
