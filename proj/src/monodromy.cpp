#include "spiralflow/monodromy.hpp"

#include <cmath>

#include "spiralflow/special.hpp"

namespace spiralflow {

namespace {

constexpr double kDegenerateTol = 1e-12;

void fill_stokes(MonodromyData& md) {
    // sin(pi*alpha) = i sinh(pi*alpha_im), -ik = kappa for k = i*kappa.
    const double sh = std::sinh(kPi * md.alpha_im);
    md.s1 = Complex(md.kappa, -sh);
    md.s2 = Complex(0.0, 0.0);
    md.s3 = Complex(-md.kappa, -sh);
}

}  // namespace

SpiralParams normalize_spiral_params(double theta_plus, double theta_minus, double mu) {
    if (!std::isfinite(theta_plus) || !std::isfinite(theta_minus) || !std::isfinite(mu))
        throw DegenerateSpiral("spiral parameters must be finite");
    SpiralParams p;
    p.theta_plus = wrap_angle(theta_plus);
    p.theta_minus = wrap_angle(theta_minus);
    p.mu = mu;
    const double delta = p.theta_plus - p.theta_minus;
    if (std::fabs(std::fabs(delta) - kPi) < kDegenerateTol)
        throw DegenerateSpiral("|theta_plus - theta_minus| = pi is excluded");
    // Three branches, mapping delta in (-2pi,2pi)\{...} into (-pi/2, pi/2).
    if (delta > kPi)
        p.a = 0.5 * (delta - kTwoPi);
    else if (delta < -kPi)
        p.a = 0.5 * (delta + kTwoPi);
    else
        p.a = 0.5 * delta;
    return p;
}

double half_angle(const SpiralParams& params) { return params.a; }

MonodromyData solve_k(const SpiralParams& params) {
    MonodromyData md;
    md.alpha_im = -0.5 * params.mu;
    md.a = params.a;
    // Splitting the defining relation into modulus and argument gives the
    // closed form kappa = cosh(pi*mu/2) * tan(a); the square root is the
    // positive real root of cosh^2 + kappa^2.
    md.kappa = std::cosh(0.5 * kPi * params.mu) * std::tan(params.a);
    fill_stokes(md);
    return md;
}

MonodromyData monodromy_from_alpha_kappa(double alpha_im, double kappa) {
    MonodromyData md;
    md.alpha_im = alpha_im;
    md.kappa = kappa;
    md.a = std::atan2(kappa, std::cosh(kPi * alpha_im));
    fill_stokes(md);
    return md;
}

std::array<Complex, 3> stokes_multipliers(const MonodromyData& md) {
    return {md.s1, md.s2, md.s3};
}

double stokes_constraint_residual(const MonodromyData& md) {
    const Complex sin_pi_alpha(0.0, std::sinh(kPi * md.alpha_im));
    Complex r = md.s1 - md.s2 + md.s3 + md.s1 * md.s2 * md.s3 + 2.0 * sin_pi_alpha;
    return std::abs(r);
}

double parameter_map_residual(const MonodromyData& md) {
    const double ch = std::cosh(kPi * md.alpha_im);  // cos(pi*alpha), real
    const Complex lhs = Complex(ch, md.kappa) / std::sqrt(ch * ch + md.kappa * md.kappa);
    return std::abs(lhs - unit_phase(md.a));
}

ConnectionConstants ConnectionConstants::make(double d_sq_neg, double phi) {
    ConnectionConstants cc;
    cc.d_sq_neg = d_sq_neg;
    cc.degenerate = false;
    cc.phi_ = wrap_angle(phi);
    return cc;
}

ConnectionConstants ConnectionConstants::make_degenerate() {
    ConnectionConstants cc;
    cc.d_sq_neg = 0.0;
    cc.degenerate = true;
    return cc;
}

namespace {

ConnectionConstants assemble_connection(double d_sq_neg, double arg_term) {
    if (d_sq_neg <= 0.0) return ConnectionConstants::make_degenerate();
    const double d_sq = -d_sq_neg;
    double phi = 1.5 * d_sq_neg * std::log(2.0) + arg_gamma_imag(0.5 * d_sq) - 0.25 * kPi + arg_term;
    return ConnectionConstants::make(d_sq_neg, phi);
}

}  // namespace

ConnectionConstants connection_from_monodromy(const MonodromyData& md) {
    const double ch = std::cosh(kPi * md.alpha_im);  // cosh(i pi alpha), real
    const double d_sq_neg = std::log(ch * ch + md.kappa * md.kappa) / kPi;
    // i sinh(i pi alpha) - i k = kappa - i sinh(pi*alpha_im)
    const double arg_term = std::atan2(-std::sinh(kPi * md.alpha_im), md.kappa);
    return assemble_connection(d_sq_neg, arg_term);
}

ConnectionConstants connection_from_spiral(const SpiralParams& params) {
    const double t = std::tan(params.a);  // tan is pi-periodic in (theta+ - theta-)/2
    const double lc = std::log(std::cosh(0.5 * kPi * params.mu));
    const double d_sq_neg = (std::log1p(t * t) + 2.0 * lc) / kPi;
    // Two-argument arctangent: the principal-value form differs by pi
    // exactly when kappa < 0 and would break the route equality.
    const double arg_term = std::atan2(std::tanh(0.5 * kPi * params.mu), t);
    return assemble_connection(d_sq_neg, arg_term);
}

ConnectionConstants connection_constants(const SpiralParams& params) {
    ConnectionConstants via_md = connection_from_monodromy(solve_k(params));
    ConnectionConstants via_sp = connection_from_spiral(params);
    if (via_md.degenerate != via_sp.degenerate)
        throw Error("connection routes disagree on degeneracy");
    if (!via_md.degenerate) {
        if (std::fabs(via_md.d_sq_neg - via_sp.d_sq_neg) > 1e-12 ||
            angle_dist(via_md.phi(), via_sp.phi()) > 1e-10)
            throw Error("connection-constant routes disagree");
    }
    return via_md;
}

}  // namespace spiralflow
