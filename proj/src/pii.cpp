#include "spiralflow/pii.hpp"

#include <algorithm>
#include <cmath>

#include "spiralflow/special.hpp"

namespace spiralflow {

namespace {

constexpr double kPoleGuard = 1e6;
constexpr double kHugeAmplitude = 1e9;

struct PiiRhs {
    double alpha_im;
    void operator()(double x, const State<5>& y, State<5>& dy) const {
        const double p = y[0];
        dy[0] = y[1];
        dy[1] = x * p - 2.0 * p * p * p - alpha_im;
        dy[2] = p;
        const double ph = 2.0 * y[2];
        dy[3] = std::cos(ph);
        dy[4] = std::sin(ph);
    }
};

void pole_guard(double x, const double* y) {
    if (std::fabs(y[0]) > kPoleGuard) throw BlowUp("trajectory left the pole-free family", x);
}

}  // namespace

TailSeries TailSeries::make(double alpha_im, int nterms) {
    TailSeries s;
    s.c_.assign(static_cast<std::size_t>(std::max(1, nterms)), 0.0);
    s.c_[0] = alpha_im;
    for (std::size_t n = 1; n < s.c_.size(); ++n) {
        double cubic = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; i + j < n; ++j) cubic += s.c_[i] * s.c_[j] * s.c_[n - 1 - i - j];
        s.c_[n] = (3.0 * n - 2.0) * (3.0 * n - 1.0) * s.c_[n - 1] + 2.0 * cubic;
    }
    return s;
}

double TailSeries::p(double x, int n) const {
    double sum = 0.0;
    double xp = 1.0 / x;
    const double x3 = 1.0 / (x * x * x);
    for (int m = 0; m < n && m < static_cast<int>(c_.size()); ++m) {
        sum += c_[m] * xp;
        xp *= x3;
    }
    return sum;
}

double TailSeries::dp(double x, int n) const {
    double sum = 0.0;
    double xp = 1.0 / (x * x);
    const double x3 = 1.0 / (x * x * x);
    for (int m = 0; m < n && m < static_cast<int>(c_.size()); ++m) {
        sum -= (3.0 * m + 1.0) * c_[m] * xp;
        xp *= x3;
    }
    return sum;
}

double TailSeries::ddp(double x, int n) const {
    double sum = 0.0;
    double xp = 1.0 / (x * x * x);
    const double x3 = xp;
    for (int m = 0; m < n && m < static_cast<int>(c_.size()); ++m) {
        sum += (3.0 * m + 1.0) * (3.0 * m + 2.0) * c_[m] * xp;
        xp *= x3;
    }
    return sum;
}

double TailSeries::integral(double x0, double x1, int n) const {
    double sum = c_[0] * std::log(x1 / x0);
    for (int m = 1; m < n && m < static_cast<int>(c_.size()); ++m)
        sum += c_[m] * (std::pow(x0, -3.0 * m) - std::pow(x1, -3.0 * m)) / (3.0 * m);
    return sum;
}

double TailSeries::tail_integral(double X, int n) const {
    double sum = 0.0;
    for (int m = 1; m < n && m < static_cast<int>(c_.size()); ++m)
        sum += c_[m] * std::pow(X, -3.0 * m) / (3.0 * m);
    return sum;
}

int TailSeries::optimal_terms(double x) const {
    if (c_.size() < 2 || c_[0] == 0.0) return 1;
    double prev = std::fabs(c_[0] / x);
    for (std::size_t m = 1; m < c_.size(); ++m) {
        double t = std::fabs(c_[m] * std::pow(x, -(3.0 * m + 1.0)));
        if (t > prev) return static_cast<int>(m);
        prev = t;
    }
    return static_cast<int>(c_.size());
}

double asym_series_plus_imag(double x, double mu) {
    const double A = -0.5 * mu;
    const double A2 = A * A;
    return A / x + 2.0 * A * (1.0 + A2) / std::pow(x, 4) +
           4.0 * A * (1.0 + A2) * (10.0 + 3.0 * A2) / std::pow(x, 7);
}

double asym_series_plus_imag_deriv(double x, double mu) {
    const double A = -0.5 * mu;
    const double A2 = A * A;
    return -A / (x * x) - 8.0 * A * (1.0 + A2) / std::pow(x, 5) -
           28.0 * A * (1.0 + A2) * (10.0 + 3.0 * A2) / std::pow(x, 8);
}

Complex asym_series_plus(double x, double mu) { return Complex(0.0, asym_series_plus_imag(x, mu)); }

double left_phase(double tau, const ConnectionConstants& cc) {
    double ph = 2.0 / 3.0 * tau * std::sqrt(tau) + 0.75 * cc.d_sq_neg * std::log(tau);
    if (!cc.degenerate) ph += cc.phi();
    return ph;
}

double left_phase_deriv(double tau, const ConnectionConstants& cc) {
    return std::sqrt(tau) + 0.75 * cc.d_sq_neg / tau;
}

Complex asym_osc_minus(double x, const ConnectionConstants& cc, double mu) {
    const double A = -0.5 * mu;
    double v = A / x;
    if (!cc.degenerate) {
        const double tau = -x;
        v += cc.amplitude() * std::pow(tau, -0.25) * std::sin(left_phase(tau, cc));
    }
    return Complex(0.0, v);
}

double left_tail_integral(const ConnectionConstants& cc, double alpha_im, double X) {
    double sum = 2.0 * alpha_im * cc.d_sq_neg * std::pow(X, -1.5);
    if (!cc.degenerate) {
        const double psi = left_phase(X, cc);
        const double dpsi = left_phase_deriv(X, cc);
        const double ddpsi = 0.5 / std::sqrt(X) - 0.75 * cc.d_sq_neg / (X * X);
        const double g1 = std::pow(X, -0.25) / dpsi;
        const double dg1 = -0.25 * std::pow(X, -1.25) / dpsi - std::pow(X, -0.25) * ddpsi / (dpsi * dpsi);
        sum += cc.amplitude() * (g1 * std::cos(psi) - dg1 / dpsi * std::sin(psi));
    }
    return sum;
}

EnvelopeFit fit_envelope(const std::function<double(double)>& p_of_x, double mu, double x_lo,
                         double x_hi) {
    if (!(x_lo < x_hi) || x_hi > -8.0)
        throw WindowTooShort("fit window must lie in the negative axis with x_hi <= -8");
    const double alpha_im = -0.5 * mu;
    auto chi0 = [](double x) { return 2.0 / 3.0 * std::pow(-x, 1.5); };
    const double periods = (chi0(x_lo) - chi0(x_hi)) / kTwoPi;
    if (periods < 5.0) throw WindowTooShort("fit window spans fewer than 5 oscillation periods");

    const int n = std::max(600, static_cast<int>(32.0 * periods));
    std::vector<double> xs(n), r(n);
    double msq = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = x_lo + (x_hi - x_lo) * (i + 0.5) / n;
        xs[i] = x;
        r[i] = (p_of_x(x) - alpha_im / x) * std::pow(-x, 0.25);
        msq += r[i] * r[i];
    }
    msq /= n;
    double amp = std::sqrt(2.0 * msq);
    if (amp < 1e-10) throw DegenerateFit("no resolvable oscillation in the fit window");

    double cs = 0.0, cc_ = 0.0;
    for (int iter = 0; iter < 12; ++iter) {
        double sss = 0.0, scc = 0.0, ssc = 0.0, srs = 0.0, src = 0.0;
        const double logamp = 0.75 * amp * amp;
        for (int i = 0; i < n; ++i) {
            double chi = chi0(xs[i]) + logamp * std::log(-xs[i]);
            double s = std::sin(chi), c = std::cos(chi);
            sss += s * s;
            scc += c * c;
            ssc += s * c;
            srs += r[i] * s;
            src += r[i] * c;
        }
        double det = sss * scc - ssc * ssc;
        cs = (srs * scc - src * ssc) / det;
        cc_ = (src * sss - srs * ssc) / det;
        double next = std::hypot(cs, cc_);
        bool done = std::fabs(next - amp) < 1e-13;
        amp = next;
        if (done) break;
    }
    if (amp < 1e-10) throw DegenerateFit("fitted oscillation amplitude below threshold");

    double res = 0.0;
    const double logamp = 0.75 * amp * amp;
    for (int i = 0; i < n; ++i) {
        double chi = chi0(xs[i]) + logamp * std::log(-xs[i]);
        double e = r[i] - cs * std::sin(chi) - cc_ * std::cos(chi);
        res += e * e;
    }
    EnvelopeFit fit;
    fit.d_fit = amp;
    fit.phi_fit = wrap_angle(std::atan2(cc_, cs));
    fit.x_lo = x_lo;
    fit.x_hi = x_hi;
    fit.rms_residual = std::sqrt(res / n) / amp;
    return fit;
}

DenseTrajectory<2> integrate_pii(double mu, double p0, double p0_prime, double x0, double x1,
                                 double tol) {
    if (!(tol >= 1e-13 && tol <= 1e-6)) throw Error("integration tolerance outside [1e-13, 1e-6]");
    const double alpha_im = -0.5 * mu;
    auto rhs = [alpha_im](double x, const State<2>& y, State<2>& dy) {
        dy[0] = y[1];
        dy[1] = x * y[0] - 2.0 * y[0] * y[0] * y[0] - alpha_im;
    };
    OdeOptions opt;
    opt.atol = opt.rtol = tol;
    opt.guard = pole_guard;
    return integrate_dopri5<2>(rhs, x0, x1, State<2>{p0, p0_prime}, opt);
}

namespace {

struct Shooter {
    const MonodromyData& md;
    const ConnectionConstants& cc;
    const ShootConfig& cfg;
    PiiSolution& sol;

    double anchor;
    double sigma_a = 0.0, dsigma_a = 0.0;  // series data at the anchor
    double psi_a = 0.0, dpsi_a = 0.0;      // transported mode at the anchor
    double ipsi_a = 0.0;

    void build_mode() {
        sol.series = TailSeries::make(md.alpha_im);
        sol.nterms = sol.series.optimal_terms(anchor);
        sigma_a = sol.series.p(anchor, sol.nterms);
        dsigma_a = sol.series.dp(anchor, sol.nterms);

        AiryPair ai = airy_decaying(cfg.R);
        auto rhs = [this](double x, const State<3>& y, State<3>& dy) {
            double s = sol.series.p(x, sol.nterms);
            dy[0] = y[1];
            dy[1] = (x - 6.0 * s * s) * y[0];
            dy[2] = y[0];
        };
        OdeOptions opt;
        opt.atol = opt.rtol = std::min(cfg.tol, 1e-12);
        sol.mode_traj =
            integrate_dopri5<3>(rhs, cfg.R, anchor, State<3>{ai.ai, ai.dai, 0.0}, opt);
        psi_a = sol.mode_traj.y_end[0];
        dpsi_a = sol.mode_traj.y_end[1];
        ipsi_a = sol.mode_traj.y_end[2];
    }

    DenseTrajectory<5> run(double c) const {
        OdeOptions opt;
        opt.atol = opt.rtol = cfg.tol;
        opt.guard = pole_guard;
        State<5> y0{sigma_a + c * psi_a, dsigma_a + c * dpsi_a, 0.0, 0.0, 0.0};
        return integrate_dopri5<5>(PiiRhs{md.alpha_im}, anchor, -cfg.L, y0, opt);
    }

    double fit_amplitude(const DenseTrajectory<5>& t) const {
        EnvelopeFit f = fit_envelope([&t](double x) { return t.eval(x)[0]; }, md.mu(),
                                     cfg.window_lo, cfg.window_hi);
        return f.d_fit;
    }

    // d_fit(c) - target, with blow-ups reported as a huge surplus.
    double objective(double c) const {
        try {
            return fit_amplitude(run(c)) - cc.amplitude();
        } catch (const BlowUp&) {
            return kHugeAmplitude;
        } catch (const DegenerateFit&) {
            return -cc.amplitude();
        }
    }

    // exp of int_{-X}^{X} u plus tail corrections equals exp(i a); returns
    // the accumulated imaginary exponent for the branch test.
    double measured_angle(const DenseTrajectory<5>& t, double c) const {
        const double X = std::min(30.0, cfg.L - 2.0);
        double delta = sol.series.integral(anchor, X, sol.nterms) - c * ipsi_a;
        delta -= t.eval(-X)[2];  // P~(anchor) = 0
        delta += sol.series.tail_integral(X, sol.nterms);
        delta += left_tail_integral(cc, md.alpha_im, X);
        return delta;
    }

    double refine(double ca, double fa, double cb, double fb) const {
        // Illinois variant; falls back to bisection around blow-up sentinels.
        for (int it = 0; it < cfg.max_iterations; ++it) {
            double cm;
            if (fa >= kHugeAmplitude || fb >= kHugeAmplitude || fb == fa)
                cm = 0.5 * (ca + cb);
            else
                cm = (ca * fb - cb * fa) / (fb - fa);
            if (!(cm > std::min(ca, cb) && cm < std::max(ca, cb))) cm = 0.5 * (ca + cb);
            double fm = objective(cm);
            if (std::fabs(fm) < cfg.match_tol || std::fabs(cb - ca) < 1e-13 * (1.0 + std::fabs(cm)))
                return cm;
            if ((fm > 0.0) == (fa > 0.0)) {
                ca = cm;
                fa = fm;
                if (fb < kHugeAmplitude) fb *= 0.5;
            } else {
                cb = cm;
                fb = fm;
                if (fa < kHugeAmplitude) fa *= 0.5;
            }
        }
        throw NoConvergence("amplitude matching did not converge within the iteration budget");
    }

    // Find a point with objective below zero, walking a geometric ladder and
    // falling back to a golden-section descent around the best ladder point.
    double find_inner(double f0) const {
        if (f0 < 0.0) return 0.0;
        double best_c = 0.0, best_f = f0;
        std::vector<double> cs;
        for (double c = 0.25; c <= cfg.c_max; c *= 2.0) {
            cs.push_back(c);
            cs.push_back(-c);
        }
        for (double c : cs) {
            double f = objective(c);
            if (f < 0.0) return c;
            if (f < best_f) {
                best_f = f;
                best_c = c;
            }
        }
        // golden-section descent around the best point
        double lo = best_c - std::max(0.5, std::fabs(best_c)),
               hi = best_c + std::max(0.5, std::fabs(best_c));
        const double gr = 0.6180339887498949;
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = objective(x1), f2 = objective(x2);
        for (int it = 0; it < 40; ++it) {
            if (f1 < 0.0) return x1;
            if (f2 < 0.0) return x2;
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = objective(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = objective(x2);
            }
        }
        throw NoConvergence("target amplitude not reachable from the mode bracket");
    }

    double bracket_root(double inner, double f_inner, double dir) const {
        double step = 0.25 * std::max(1.0, std::fabs(inner));
        double ca = inner, fa = f_inner;
        for (int it = 0; it < 48; ++it) {
            double cb = ca + dir * step;
            if (std::fabs(cb) > cfg.c_max)
                throw NoConvergence("bracket expansion exhausted before enclosing the target");
            double fb = objective(cb);
            if (fb > 0.0) return refine(ca, fa, cb, fb);
            ca = cb;
            fa = fb;
            step *= 2.0;
        }
        throw NoConvergence("bracket expansion exhausted before enclosing the target");
    }
};

}  // namespace

PiiSolution shoot_solution(const MonodromyData& md, const ConnectionConstants& cc,
                           const ShootConfig& cfg) {
    if (cfg.R < 10.0 || cfg.R > 20.0) throw Error("grid right edge must lie in [10, 20]");
    if (cfg.L < 20.0) throw Error("grid left extent must be at least 20");
    if (!(cfg.tol >= 1e-13 && cfg.tol <= 1e-6)) throw Error("tolerance outside [1e-13, 1e-6]");
    if (cfg.window_lo < -cfg.L || cfg.window_hi > -8.0 || !(cfg.window_lo < cfg.window_hi))
        throw Error("fit window must lie inside [-L, -8]");

    PiiSolution sol;
    sol.md = md;
    sol.cc = cc;
    sol.config = cfg;
    sol.anchor_ = std::min(cfg.anchor, cfg.R);
    sol.x_min_ = -cfg.L;
    sol.x_max_ = cfg.R;

    Shooter sh{md, cc, cfg, sol, sol.anchor_};
    sh.build_mode();

    double c_star = 0.0;
    if (cc.amplitude() > 0.0) {
        double f0 = sh.objective(0.0);
        double inner = sh.find_inner(f0);
        double f_inner = (inner == 0.0) ? f0 : sh.objective(inner);
        double c_up = sh.bracket_root(inner, f_inner, +1.0);
        double c_dn = sh.bracket_root(inner, f_inner, -1.0);

        // The amplitude fixes |k| only; the total-integral angle separates
        // the two members with opposite kappa.
        DenseTrajectory<5> t_up = sh.run(c_up);
        DenseTrajectory<5> t_dn = sh.run(c_dn);
        double ang_up = angle_dist(sh.measured_angle(t_up, c_up), md.a);
        double ang_dn = angle_dist(sh.measured_angle(t_dn, c_dn), md.a);
        if (std::min(ang_up, ang_dn) > 0.5)
            throw NoConvergence("matched amplitude but the total integral is inconsistent");
        if (ang_up <= ang_dn) {
            c_star = c_up;
            sol.main_traj = std::move(t_up);
        } else {
            c_star = c_dn;
            sol.main_traj = std::move(t_dn);
        }
        sol.fit = fit_envelope([&](double x) { return sol.main_traj.eval(x)[0]; }, md.mu(),
                               cfg.window_lo, cfg.window_hi);
    } else {
        sol.main_traj = sh.run(0.0);
        sol.fit = EnvelopeFit{0.0, 0.0, cfg.window_lo, cfg.window_hi, 0.0};
    }
    sol.shoot_param = c_star;

    // Re-anchor the cumulative integrals at x = 0 and rotate the profile
    // integral accordingly.
    State<5> at0 = sol.main_traj.eval(0.0);
    sol.p_shift = at0[2];
    sol.v_shift = Complex(at0[3], at0[4]);
    sol.v_rot = unit_phase(-2.0 * sol.p_shift);

    // Analytic continuation of the dense data over [anchor, R]: the series
    // plus c times the transported mode, with the profile integrand
    // accumulated by composite Simpson on a fine uniform grid.
    if (cfg.R > sol.anchor_ + 1e-12) {
        const int nseg = std::max(2, static_cast<int>(std::ceil((cfg.R - sol.anchor_) / 0.004)) + 1);
        sol.seg_x.resize(nseg);
        sol.seg_v.resize(nseg);
        sol.seg_f.resize(nseg);
        const double h = (cfg.R - sol.anchor_) / (nseg - 1);
        auto Pseg = [&](double x) {
            double ip = (x >= sol.mode_traj.xmin() && x <= sol.mode_traj.xmax())
                            ? sol.mode_traj.eval(x)[2]
                            : 0.0;
            return -sol.p_shift + sol.series.integral(sol.anchor_, x, sol.nterms) +
                   c_star * (ip - sh.ipsi_a);
        };
        for (int i = 0; i < nseg; ++i) {
            double x = sol.anchor_ + h * i;
            sol.seg_x[i] = x;
            sol.seg_f[i] = unit_phase(2.0 * Pseg(x));
        }
        sol.seg_v[0] = sol.v_rot * (Complex(0.0, 0.0) - sol.v_shift);
        for (int i = 0; i + 1 < nseg; ++i) {
            Complex fm = unit_phase(2.0 * Pseg(sol.seg_x[i] + 0.5 * h));
            sol.seg_v[i + 1] = sol.seg_v[i] + h / 6.0 * (sol.seg_f[i] + 4.0 * fm + sol.seg_f[i + 1]);
        }
    }

    if (cc.amplitude() > 0.0 && std::fabs(sol.fit.d_fit - cc.amplitude()) > 1e-5)
        throw NoConvergence("converged mode coefficient no longer matches the amplitude");
    return sol;
}

double PiiSolution::p(double x) const {
    if (x <= anchor_) return main_traj.eval(x)[0];
    if (x > x_max_ + 1e-9) throw OutOfRange("abscissa beyond the dense grid");
    return series.p(x, nterms) + shoot_param * mode_traj.eval(x)[0];
}

double PiiSolution::dp(double x) const {
    if (x <= anchor_) return main_traj.eval(x)[1];
    if (x > x_max_ + 1e-9) throw OutOfRange("abscissa beyond the dense grid");
    return series.dp(x, nterms) + shoot_param * mode_traj.eval(x)[1];
}

double PiiSolution::cumulative(double x) const {
    if (x <= anchor_) return main_traj.eval(x)[2] - p_shift;
    if (x > x_max_ + 1e-9) throw OutOfRange("abscissa beyond the dense grid");
    double ip = mode_traj.eval(x)[2];
    double ipa = mode_traj.y_end[2];
    return -p_shift + series.integral(anchor_, x, nterms) + shoot_param * (ip - ipa);
}

Complex PiiSolution::step_factor(double x) const { return unit_phase(2.0 * cumulative(x)); }

Complex PiiSolution::V(double x) const {
    if (x <= anchor_) {
        State<5> y = main_traj.eval(x);
        return v_rot * (Complex(y[3], y[4]) - v_shift);
    }
    if (seg_x.empty() || x > x_max_ + 1e-9) throw OutOfRange("abscissa beyond the dense grid");
    const double h = seg_x[1] - seg_x[0];
    int i = std::clamp(static_cast<int>((x - seg_x[0]) / h), 0, static_cast<int>(seg_x.size()) - 2);
    double s = (x - seg_x[i]) / h;
    double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    double h10 = s * (1.0 - s) * (1.0 - s);
    double h01 = s * s * (3.0 - 2.0 * s);
    double h11 = s * s * (s - 1.0);
    return h00 * seg_v[i] + h * h10 * seg_f[i] + h01 * seg_v[i + 1] + h * h11 * seg_f[i + 1];
}

std::vector<double> PiiSolution::grid() const {
    std::vector<double> xs = main_traj.knots();       // anchor down to -L
    std::reverse(xs.begin(), xs.end());               // ascending
    for (std::size_t i = 1; i < seg_x.size(); ++i) xs.push_back(seg_x[i]);
    return xs;
}

Complex evaluate_u(const PiiSolution& sol, double x) {
    if (x > sol.xmax()) return asym_series_plus(x, sol.mu());
    if (x < sol.xmin()) return asym_osc_minus(x, sol.cc, sol.mu());
    return sol.u(x);
}

}  // namespace spiralflow
