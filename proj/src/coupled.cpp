#include "scldpc/coupled.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "scldpc/de_core.hpp"

namespace scldpc {

CoupledConfig::CoupledConfig(DegreeDistribution d, int n_prime, int coupling_w, double eps)
    : dd(std::move(d)), N_prime(n_prime), w(coupling_w), epsilon(eps) {
    if (w < 2) throw std::invalid_argument("coupled config: w must be >= 2");
    if (N_prime < 4 * w) throw std::invalid_argument("coupled config: N_prime must be >= 4w");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("coupled config: epsilon outside [0,1]");
}

DensityProfile init_profile(const CoupledConfig& cfg) {
    DensityProfile p;
    p.x.assign(static_cast<size_t>(cfg.N_prime), 1.0);
    p.t = 0;
    return p;
}

CoupledStepper::CoupledStepper(const CoupledConfig& cfg) : dd_(cfg.dd), w_(cfg.w), eps_(cfg.epsilon) {
    cum_.resize(static_cast<size_t>(cfg.N_prime) + static_cast<size_t>(w_));
    act_.resize(static_cast<size_t>(cfg.N_prime) + 1);
}

void CoupledStepper::step(std::vector<double>& x) {
    const int m = static_cast<int>(x.size());
    // cum_[i] = sum of the first i check-side values rho(1 - x_z), the last
    // value repeated w-1 times past the right end (the clamp).
    cum_[0] = 0.0;
    double r_last = 0.0;
    for (int i = 0; i < m; ++i) {
        r_last = dd_.rho(1.0 - x[static_cast<size_t>(i)]);
        cum_[static_cast<size_t>(i) + 1] = cum_[static_cast<size_t>(i)] + r_last;
    }
    for (int i = m; i < m + w_ - 1; ++i)
        cum_[static_cast<size_t>(i) + 1] = cum_[static_cast<size_t>(i)] + r_last;

    // act_[i+1]-act_[i] windows give the variable-side update; positions left
    // of the chain carry no channel noise, which the clamped-at-0 lower index
    // below encodes.
    act_[0] = 0.0;
    for (int i = 0; i < m; ++i) {
        const double s = (cum_[static_cast<size_t>(i + w_)] - cum_[static_cast<size_t>(i)]) / w_;
        act_[static_cast<size_t>(i) + 1] = act_[static_cast<size_t>(i)] + eps_ * dd_.lam(1.0 - s);
    }
    for (int i = 0; i < m; ++i) {
        const int lo = std::max(i + 1 - w_, 0);
        x[static_cast<size_t>(i)] = (act_[static_cast<size_t>(i) + 1] - act_[static_cast<size_t>(lo)]) / w_;
    }
}

DensityProfile coupled_de_step(const CoupledConfig& cfg, const DensityProfile& profile) {
    if (static_cast<int>(profile.x.size()) != cfg.N_prime)
        throw std::invalid_argument("coupled_de_step: profile length does not match config");
    DensityProfile next{profile.x, profile.t + 1};
    CoupledStepper stepper(cfg);
    stepper.step(next.x);
    return next;
}

int front_position(const std::vector<double>& x) {
    const double half = x.back() / 2.0;
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i] > half) return static_cast<int>(i);
    return static_cast<int>(x.size());
}

namespace {

int longest_plateau_run(const std::vector<double>& x, double level, double tol) {
    int best = 0, run = 0;
    for (double v : x) {
        run = (std::abs(v - level) < tol) ? run + 1 : 0;
        best = std::max(best, run);
    }
    return best;
}

// Best single-position translation match of x against a recent history of
// profiles: min over lag T of max_z |x_z - hist[-T]_{z-1}|.
std::pair<double, int> shape_diagnostic(const std::vector<double>& x,
                                        const std::deque<std::vector<double>>& hist) {
    double best = std::numeric_limits<double>::infinity();
    int best_T = 0;
    for (size_t back = 0; back < hist.size(); ++back) {
        const auto& prev = hist[hist.size() - 1 - back];
        double dev = 0.0;
        for (size_t z = 1; z < x.size(); ++z) dev = std::max(dev, std::abs(x[z] - prev[z - 1]));
        if (dev < best) {
            best = dev;
            best_T = static_cast<int>(back) + 1;
        }
    }
    return {best, best_T};
}

}  // namespace

FormationResult run_until_wave_formed(const CoupledConfig& cfg, double shape_tol, long max_iters,
                                      double separation_tol) {
    (void)shape_tol;  // diagnostic only; see FormationResult::shape_deviation
    FormationResult out;

    // No wave below the scalar threshold: the whole chain decodes.
    const ForwardLimit scalar = forward_de_limit(cfg.dd, cfg.epsilon);
    DensityProfile p = init_profile(cfg);
    CoupledStepper stepper(cfg);
    if (scalar.value < 1e-10) {
        while (p.t < max_iters && p.x.back() >= 1e-8) {
            stepper.step(p.x);
            ++p.t;
        }
        out.profile = std::move(p);
        out.formed = false;
        out.reason = "decayed";
        return out;
    }

    const FixedPointSet fps = find_fixed_points(cfg.dd, cfg.epsilon);
    if (fps.points.size() > 5) throw std::runtime_error("unsupported fixed-point structure");
    out.mode = fps.points.size() == 5 ? WaveMode::two_wave : WaveMode::single_wave;
    if (out.mode == WaveMode::two_wave) out.s1 = fps.points[2].x;

    std::deque<std::vector<double>> hist;
    const size_t wi = static_cast<size_t>(cfg.w) - 1;
    while (p.t < max_iters) {
        hist.push_back(p.x);
        if (hist.size() > detail::kShapeHistory) hist.pop_front();
        stepper.step(p.x);
        ++p.t;

        if (p.x.back() < 1e-8) {
            out.profile = std::move(p);
            out.formed = false;
            out.reason = "decayed";
            return out;
        }
        const int front = front_position(p.x);
        if (front > cfg.N_prime - 2 * cfg.w) throw std::runtime_error("chain too short: extend N_prime");
        if (p.x[wi] > detail::kDetachTol || front < 2 * cfg.w) continue;
        if (out.mode == WaveMode::two_wave &&
            longest_plateau_run(p.x, out.s1, separation_tol) < 2 * cfg.w)
            continue;

        auto [dev, period] = shape_diagnostic(p.x, hist);
        out.shape_deviation = dev;
        out.shape_period = period;
        out.formed = true;
        out.formed_at = p.t;
        out.plateau = p.x.back();
        out.profile = std::move(p);
        return out;
    }
    out.profile = std::move(p);
    out.formed = false;
    out.reason = "not formed within max_iters";
    return out;
}

}  // namespace scldpc
