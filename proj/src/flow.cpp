#include "spiralflow/flow.hpp"

#include <cmath>

#include "spiralflow/asymptotics.hpp"

namespace spiralflow {

Complex FlowSolution::w(double x) const {
    return kCbrt3 * sol.V(x / kCbrt3) - profile_shift;
}

Complex FlowSolution::w_x(double x) const { return sol.step_factor(x / kCbrt3); }

Complex FlowSolution::v(double x) const {
    return Complex(0.0, 2.0 / kCbrt3 * sol.p(x / kCbrt3));
}

Complex FlowSolution::v_x(double x) const {
    return Complex(0.0, 2.0 / kCbrt3Sq * sol.dp(x / kCbrt3));
}

Complex FlowSolution::w_xx(double x) const { return w_x(x) * v(x); }

Complex FlowSolution::w_xxx(double x) const {
    Complex vv = v(x);
    return w_x(x) * (v_x(x) + vv * vv);
}

Complex FlowSolution::g(double x) const {
    if (x == 0.0) throw ZeroArgument("g undefined at the origin");
    return unit_phase(params.mu * std::log(std::fabs(x))) * w(x) / x;
}

Complex FlowSolution::z(double t, double x) const {
    if (!(t > 0.0)) throw OutOfRange("self-similar solution defined for t > 0");
    const double xi = x / std::cbrt(t);
    return unit_phase(beta) * std::cbrt(t) * unit_phase(-params.mu / 3.0 * std::log(t)) * w(xi);
}

Complex compute_w(const FlowSolution& fs, double x) { return fs.w(x); }
Complex compute_g(const FlowSolution& fs, double x) { return fs.g(x); }

double extract_tilde_plus(const FlowSolution& fs, double x_cut) {
    if (x_cut > fs.xmax() + 1e-9 || x_cut < 8.0)
        throw GridTooShort("right cut outside the covered flow grid");
    const Complex graw = fs.g(x_cut);
    double th = std::arg(graw);
    for (int it = 0; it < 6; ++it) {
        PlusExpansion pe = plus_expansion(fs.params.mu, th);
        Complex corrected =
            graw - pe.c1 * std::pow(x_cut, -3.0) - pe.c2 * std::pow(x_cut, -6.0);
        th = std::arg(corrected);
    }
    return wrap_angle(th);
}

double extract_tilde_minus(const FlowSolution& fs, double x_cut) {
    if (-x_cut < fs.xmin() - 1e-9 || x_cut < 12.0)
        throw GridTooShort("left cut outside the covered flow grid");
    const Complex graw = fs.g(-x_cut);
    const ConnectionConstants& cc = fs.sol.cc;
    double th = std::arg(graw);
    for (int it = 0; it < 6; ++it) {
        MinusExpansion me = minus_expansion(fs.params.mu, th, cc, MinusConvention::kProposition);
        Complex corrected = graw - me.c1 * std::pow(x_cut, -1.5);
        if (!me.degenerate)
            corrected -= me.c2 * std::pow(x_cut, -2.25) * std::cos(phase_psi(-x_cut, cc));
        th = std::arg(corrected);
    }
    return wrap_angle(th);
}

std::pair<double, double> tilde_thetas(const FlowSolution& fs) {
    return {fs.theta_tilde_plus, fs.theta_tilde_minus};
}

double rotation_beta(const SpiralParams& params, const FlowSolution& fs) {
    return wrap_angle(params.theta_minus - fs.theta_tilde_minus);
}

FlowSolution build_flow(PiiSolution sol, const SpiralParams& params) {
    FlowSolution fs;
    fs.sol = std::move(sol);
    fs.params = params;
    const double p0 = fs.sol.p(0.0);
    const double dp0 = fs.sol.dp(0.0);
    // (2*3^(1/3)/(1-i mu)) (u_x(0) - u^2(0)) with u = i p
    fs.profile_shift = 2.0 * kCbrt3 * Complex(p0 * p0, dp0) / Complex(1.0, -params.mu);

    const double cut_plus = std::min(15.0, 0.98 * fs.xmax());
    const double cut_minus = std::min(45.0, 0.98 * (-fs.xmin()));
    fs.theta_tilde_plus = extract_tilde_plus(fs, cut_plus);
    fs.theta_tilde_minus = extract_tilde_minus(fs, cut_minus);
    fs.beta = rotation_beta(params, fs);
    return fs;
}

Complex evaluate_z(const FlowSolution& fs, double t, double x) { return fs.z(t, x); }

Complex spiral_z0(const SpiralParams& params, double x) {
    if (x == 0.0) throw ZeroArgument("spiral undefined at the origin");
    const double theta = (x > 0.0) ? params.theta_plus : params.theta_minus;
    return x / std::sqrt(1.0 + params.mu * params.mu) *
           unit_phase(theta - params.mu * std::log(std::fabs(x)));
}

double singularity_gap(const FlowSolution& fs, const SpiralParams& params, double t, double x) {
    if (x == 0.0) throw ZeroArgument("gap undefined at the origin");
    return std::abs(fs.z(t, x) - spiral_z0(params, x)) / std::cbrt(t);
}

CurveSample sample_curve(const FlowSolution& fs, double t, const std::vector<double>& xs) {
    CurveSample cs;
    cs.t = t;
    cs.xs = xs;
    cs.zs.reserve(xs.size());
    for (double x : xs) cs.zs.push_back(fs.z(t, x));
    return cs;
}

Complex BackwardSolution::z_minus(double t, double x) const {
    if (!(t < 0.0)) throw OutOfRange("backward solution defined for t < 0");
    return -flow.z(-t, -x);
}

Complex BackwardSolution::swapped_spiral(double x) const { return spiral_z0(flow.params, x); }

double BackwardSolution::gap(double t, double x) const {
    if (x == 0.0) throw ZeroArgument("gap undefined at the origin");
    return std::abs(z_minus(t, x) - spiral_z0(original, x)) / std::cbrt(std::fabs(t));
}

BackwardSolution backward_solution(const SpiralParams& params, const ShootConfig& cfg) {
    SpiralParams swapped =
        normalize_spiral_params(params.theta_minus, params.theta_plus, params.mu);
    MonodromyData md = solve_k(swapped);
    ConnectionConstants cc = connection_constants(swapped);
    PiiSolution ps = shoot_solution(md, cc, cfg);
    return BackwardSolution{build_flow(std::move(ps), swapped), params};
}

}  // namespace spiralflow
