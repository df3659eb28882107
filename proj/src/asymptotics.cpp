#include "spiralflow/asymptotics.hpp"

#include <cmath>

namespace spiralflow {

PlusExpansion plus_expansion(double mu, double theta) {
    PlusExpansion pe;
    const Complex imu(0.0, mu);
    pe.c0 = unit_phase(theta) / std::sqrt(1.0 + mu * mu);
    pe.t2 = imu + 0.5 * mu * mu;
    pe.t5 = (4.0 + mu * mu) * (6.0 * imu + 1.5 * mu * mu);
    pe.c1 = (imu - 1.0) * pe.t2 * pe.c0;
    pe.c2 = (2.0 + imu) * (0.25 * mu * mu - imu + 6.0) * pe.c1;
    return pe;
}

MinusExpansion minus_expansion(double mu, double theta, const ConnectionConstants& cc,
                               MinusConvention conv) {
    MinusExpansion me;
    const Complex imu(0.0, mu);
    const double d_sq = cc.d_sq();
    me.degenerate = cc.degenerate;
    me.c0 = unit_phase(theta) / std::sqrt(1.0 + mu * mu);
    const Complex sign_factor =
        (conv == MinusConvention::kTheorem) ? (1.0 - imu) : (imu - 1.0);
    me.c1 = 2.0 * kSqrt3 * d_sq * sign_factor * me.c0;
    me.q1 = Complex(2.0 * d_sq / kSqrt3, 0.0);
    const Complex d = cc.d();
    me.q2 = 4.0 * imu * d / kRoot4Of3;
    me.q3 = 2.0 * (1.0 - imu) * me.c0 * d / kRoot4Of3;
    if (!me.degenerate)
        me.c2 = -kRoot4Of3 / d * me.c1;
    else
        me.c2 = Complex(0.0, 0.0);
    return me;
}

double phase_psi(double x, const ConnectionConstants& cc) {
    if (!(x < 0.0)) throw RegionViolation("phase defined for negative abscissae");
    const double tau = -x / kCbrt3;
    double ph = 2.0 / 3.0 * tau * std::sqrt(tau) + 0.75 * cc.d_sq_neg * std::log(tau);
    if (!cc.degenerate) ph += cc.phi();
    return ph;
}

bool in_region_plus(double t, double x, double c_region) {
    return t > 0.0 && x > 0.0 && std::cbrt(t) <= c_region * x;
}

bool in_region_minus(double t, double x, double c_region) {
    return t > 0.0 && x < 0.0 && std::cbrt(t) <= -c_region * x;
}

Complex expansion_plus(const PlusExpansion& pe, double mu, double t, double x, double c_region) {
    if (!in_region_plus(t, x, c_region))
        throw RegionViolation("(t, x) outside the right asymptotic region");
    return unit_phase(-mu * std::log(x)) *
           (pe.c0 * x + pe.c1 * t * std::pow(x, -2.0) + pe.c2 * t * t * std::pow(x, -5.0));
}

Complex expansion_minus(const MinusExpansion& me, const ConnectionConstants& cc, double mu,
                        double t, double x, double c_region) {
    if (!in_region_minus(t, x, c_region))
        throw RegionViolation("(t, x) outside the left asymptotic region");
    const double ax = -x;
    Complex val = me.c0 * x + me.c1 * std::sqrt(t) / std::sqrt(ax);
    if (!me.degenerate)
        val += me.c2 * std::pow(t, 0.75) * std::pow(ax, -1.25) *
               std::cos(phase_psi(x / std::cbrt(t), cc));
    return unit_phase(-mu * std::log(ax)) * val;
}

Complex g_expansion_plus(const PlusExpansion& pe, double x) {
    if (!(x >= 8.0)) throw RegionViolation("right g expansion needs x >= 8");
    return pe.c0 + pe.c1 * std::pow(x, -3.0) + pe.c2 * std::pow(x, -6.0);
}

Complex g_expansion_minus(const MinusExpansion& me, const ConnectionConstants& cc, double x) {
    if (!(x <= -8.0)) throw RegionViolation("left g expansion needs x <= -8");
    Complex val = me.c0 + me.c1 * std::pow(-x, -1.5);
    if (!me.degenerate) val += me.c2 * std::pow(-x, -2.25) * std::cos(phase_psi(x, cc));
    return val;
}

Complex g_expansions(const FlowSolution& fs, double x) {
    if (x > 0.0)
        return g_expansion_plus(plus_expansion(fs.params.mu, fs.theta_tilde_plus), x);
    return g_expansion_minus(
        minus_expansion(fs.params.mu, fs.theta_tilde_minus, fs.sol.cc, MinusConvention::kProposition),
        fs.sol.cc, x);
}

namespace {

double loglog_slope(const std::vector<double>& ax, const std::vector<double>& err) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
        if (!(err[i] > 0.0)) continue;
        double lx = std::log(ax[i]), ly = std::log(err[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return 0.0;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

RemainderReport remainder_report(const FlowSolution& fs, const std::vector<double>& t_list,
                                 const std::vector<double>& x_plus,
                                 const std::vector<double>& x_minus, double c_region) {
    RemainderReport rep;
    const double mu = fs.params.mu;
    PlusExpansion pe = plus_expansion(mu, fs.params.theta_plus);
    MinusExpansion me =
        minus_expansion(mu, fs.params.theta_minus, fs.sol.cc, MinusConvention::kTheorem);

    const double t_mid = t_list.empty() ? 1.0 : t_list[t_list.size() / 2];
    std::vector<double> sx_p, se_p, sx_m, se_m;

    for (double t : t_list) {
        for (double x : x_plus) {
            if (!in_region_plus(t, x, c_region)) continue;
            double err = std::abs(fs.z(t, x) - expansion_plus(pe, mu, t, x, c_region));
            double ratio = err / (t * t * t * std::pow(x, -8.0));
            rep.plus_rows.push_back({t, x, ratio});
            rep.sup_plus = std::max(rep.sup_plus, ratio);
            if (t == t_mid) {
                sx_p.push_back(x);
                se_p.push_back(err);
            }
        }
        for (double x : x_minus) {
            if (!in_region_minus(t, x, c_region)) continue;
            double err = std::abs(fs.z(t, x) - expansion_minus(me, fs.sol.cc, mu, t, x, c_region));
            double ratio = err / (t * std::pow(x, -2.0));
            rep.minus_rows.push_back({t, x, ratio});
            rep.sup_minus = std::max(rep.sup_minus, ratio);
            if (t == t_mid) {
                sx_m.push_back(-x);
                se_m.push_back(err);
            }
        }
    }
    rep.slope_plus = loglog_slope(sx_p, se_p);
    rep.slope_minus = loglog_slope(sx_m, se_m);
    return rep;
}

}  // namespace spiralflow
