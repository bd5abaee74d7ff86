#include "scldpc/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "scldpc/de_core.hpp"
#include "scldpc/potential.hpp"

namespace scldpc {

std::string to_string(LBVariant v) {
    return v == LBVariant::as_tabulated ? "as_tabulated" : "as_stated";
}

LBVariant lb_variant_from_string(const std::string& s) {
    if (s == "as_tabulated") return LBVariant::as_tabulated;
    if (s == "as_stated") return LBVariant::as_stated;
    throw std::invalid_argument("unknown LB variant: " + s);
}

namespace {

void check_alpha(double alpha) {
    if (!(alpha >= 1.0 && alpha <= 2.0)) throw std::invalid_argument("alpha must lie in [1,2]");
}

double quadratic_variation(const DegreeDistribution& dd, const std::vector<double>& x) {
    double acc = 0.0;
    double prev = 0.0;  // x_0 = 0 left of the chain
    for (double v : x) {
        const double d = v - prev;
        acc += dd.rho_prime(1.0 - v) * d * d;
        prev = v;
    }
    return acc;
}

struct ScalarLandscape {
    double x_u = 0.0, x_bp = 0.0;
    double U_u = 0.0, U_bp = 0.0;
};

ScalarLandscape scalar_landscape(const DegreeDistribution& dd, double epsilon) {
    const FixedPointSet fps = find_fixed_points(dd, epsilon);
    if (fps.points.size() < 3)
        throw std::runtime_error("speed bounds need the bistable regime (no nonzero fixed points at this epsilon)");
    ScalarLandscape out;
    out.x_u = fps.points[1].x;
    out.x_bp = fps.points.back().x;
    out.U_u = potential_single(dd, epsilon, out.x_u);
    out.U_bp = potential_single(dd, epsilon, out.x_bp);
    return out;
}

}  // namespace

double bound_B1(const CoupledConfig& cfg, const DensityProfile& formed, double alpha) {
    check_alpha(alpha);
    if (static_cast<int>(formed.x.size()) != cfg.N_prime)
        throw std::invalid_argument("bound_B1: profile length does not match config");
    const double x_inf = forward_de_limit(cfg.dd, cfg.epsilon).value;
    const double den = quadratic_variation(cfg.dd, formed.x);
    if (den < 1e-14) throw std::runtime_error("degenerate profile: quadratic variation vanishes");
    return alpha * potential_single(cfg.dd, cfg.epsilon, x_inf) / den;
}

double bound_B2(const DegreeDistribution& dd, double epsilon, int w, double alpha,
                bool include_D_term) {
    check_alpha(alpha);
    const ScalarLandscape s = scalar_landscape(dd, epsilon);
    double den = 2.0 * s.U_u - s.U_bp;
    if (include_D_term) {
        const double D = max_abs_second_derivative(dd, epsilon, s.x_bp);
        den -= D * s.x_bp * s.x_bp / w;
        if (den <= 0.0) throw std::runtime_error("bound vacuous at this w");
    }
    return w * alpha * s.U_bp / den;
}

double bound_LB(const DegreeDistribution& dd, double epsilon, int w, LBVariant variant) {
    const ScalarLandscape s = scalar_landscape(dd, epsilon);
    if (variant == LBVariant::as_tabulated)
        return w * s.U_bp / (s.x_bp * (1.0 - dd.rho(1.0 - s.x_bp)));
    return w * s.U_bp / (s.x_bp * (1.0 - dd.rho(s.x_bp))) - 1.0 / w;
}

BoundsReport compute_bounds(const CoupledConfig& cfg, const DensityProfile& formed, double alpha,
                            LBVariant variant) {
    check_alpha(alpha);
    BoundsReport out;
    out.alpha = alpha;
    out.variant = variant;
    out.B1 = bound_B1(cfg, formed, alpha);
    out.B2 = bound_B2(cfg.dd, cfg.epsilon, cfg.w, alpha, false);
    out.LB = bound_LB(cfg.dd, cfg.epsilon, cfg.w, variant);
    const ScalarLandscape s = scalar_landscape(cfg.dd, cfg.epsilon);
    out.D = max_abs_second_derivative(cfg.dd, cfg.epsilon, s.x_bp);
    try {
        out.B2_finite_w = bound_B2(cfg.dd, cfg.epsilon, cfg.w, alpha, true);
    } catch (const std::runtime_error& e) {
        out.B2_finite_w.reset();
        out.B2_finite_w_note = e.what();
    }
    return out;
}

TwoWaveB1 bound_B1_two_wave(const CoupledConfig& cfg, const DensityProfile& formed, double s1,
                            double s2, double alpha, double separation_tol) {
    check_alpha(alpha);
    if (static_cast<int>(formed.x.size()) != cfg.N_prime)
        throw std::invalid_argument("bound_B1_two_wave: profile length does not match config");
    const double threshold = s1 + separation_tol;
    double den_all = 0.0, den_upper = 0.0, den_lower = 0.0;
    double prev = 0.0;
    for (double v : formed.x) {
        const double d = v - prev;
        const double term = cfg.dd.rho_prime(1.0 - v) * d * d;
        den_all += term;
        (v > threshold ? den_upper : den_lower) += term;
        prev = v;
    }
    if (den_all < 1e-14 || den_upper < 1e-14 || den_lower < 1e-14)
        throw std::runtime_error("degenerate profile: quadratic variation vanishes on a segment");
    const double U_s1 = potential_single(cfg.dd, cfg.epsilon, s1);
    const double U_s2 = potential_single(cfg.dd, cfg.epsilon, s2);
    TwoWaveB1 out;
    out.full = alpha * U_s2 / den_all;
    out.upper_segment = alpha * (U_s2 - U_s1) / den_upper;
    out.lower_segment = alpha * U_s1 / den_lower;
    return out;
}

}  // namespace scldpc
