#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "spiralflow/errors.hpp"

namespace spiralflow {

// Dormand-Prince 5(4) pair with the standard quartic continuous extension.
// Supports integration in either direction; the dense trajectory keeps the
// per-step interpolation coefficients so values and first derivatives can
// be evaluated anywhere on the covered interval.

template <int N>
using State = std::array<double, N>;

template <int N>
class DenseTrajectory {
  public:
    struct Step {
        double x0;
        double h;
        State<N> r1, r2, r3, r4, r5;
    };

    std::vector<Step> steps;
    double x_start = 0.0;
    double x_end = 0.0;
    State<N> y_start{};
    State<N> y_end{};

    bool forward() const { return x_end >= x_start; }

    double xmin() const { return std::min(x_start, x_end); }
    double xmax() const { return std::max(x_start, x_end); }

    bool covers(double x) const {
        const double lo = xmin(), hi = xmax();
        const double slack = 1e-9 * (1.0 + hi - lo);
        return x >= lo - slack && x <= hi + slack;
    }

    State<N> eval(double x) const {
        const Step& s = locate(x);
        double th = theta(s, x);
        State<N> y;
        for (int i = 0; i < N; ++i)
            y[i] = s.r1[i] +
                   th * (s.r2[i] + (1.0 - th) * (s.r3[i] + th * (s.r4[i] + (1.0 - th) * s.r5[i])));
        return y;
    }

    // d/dx of the interpolant.
    State<N> eval_deriv(double x) const {
        const Step& s = locate(x);
        double th = theta(s, x);
        State<N> d;
        for (int i = 0; i < N; ++i) {
            double v = s.r2[i] + (1.0 - 2.0 * th) * s.r3[i] + th * (2.0 - 3.0 * th) * s.r4[i] +
                       2.0 * th * (1.0 - th) * (1.0 - 2.0 * th) * s.r5[i];
            d[i] = v / s.h;
        }
        return d;
    }

    // Step boundaries in integration order (x_start first).
    std::vector<double> knots() const {
        std::vector<double> xs;
        xs.reserve(steps.size() + 1);
        for (const Step& s : steps) xs.push_back(s.x0);
        xs.push_back(x_end);
        return xs;
    }

  private:
    double theta(const Step& s, double x) const {
        double th = (x - s.x0) / s.h;
        return std::clamp(th, 0.0, 1.0);
    }

    const Step& locate(double x) const {
        if (steps.empty()) throw OutOfRange("empty trajectory");
        if (!covers(x)) throw OutOfRange("abscissa outside integrated range");
        // Steps are monotone in x0 along the integration direction.
        std::size_t lo = 0, hi = steps.size() - 1;
        const bool fwd = forward();
        while (lo < hi) {
            std::size_t mid = (lo + hi + 1) / 2;
            bool before = fwd ? (steps[mid].x0 <= x) : (steps[mid].x0 >= x);
            if (before)
                lo = mid;
            else
                hi = mid - 1;
        }
        return steps[lo];
    }
};

struct OdeOptions {
    double atol = 1e-13;
    double rtol = 1e-13;
    double max_step = 0.5;
    double initial_step = 1e-4;
    std::size_t max_steps = 4000000;
    // Called with the accepted state; may throw (pole guard).
    std::function<void(double, const double*)> guard;
};

template <int N, typename Rhs>
DenseTrajectory<N> integrate_dopri5(Rhs&& rhs, double x0, double x1, const State<N>& y0,
                                    const OdeOptions& opt = {}) {
    DenseTrajectory<N> traj;
    traj.x_start = x0;
    traj.x_end = x0;
    traj.y_start = y0;
    traj.y_end = y0;
    if (x1 == x0) return traj;

    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                            a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                            e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
    static constexpr double d1 = -12715105075.0 / 11282082432.0,
                            d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0,
                            d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

    const double dir = (x1 > x0) ? 1.0 : -1.0;
    double x = x0;
    State<N> y = y0;
    State<N> k1, k2, k3, k4, k5, k6, k7, ytmp, y1;
    rhs(x, y, k1);

    double h = dir * std::min(opt.initial_step, opt.max_step);
    std::size_t nsteps = 0;
    while (dir * (x1 - x) > 0.0) {
        if (++nsteps > opt.max_steps) throw NoConvergence("step budget exhausted in integrator");
        if (dir * (x + h - x1) > 0.0) h = x1 - x;

        for (int i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(x + h / 5.0, ytmp, k2);
        for (int i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(x + 3.0 * h / 10.0, ytmp, k3);
        for (int i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(x + 4.0 * h / 5.0, ytmp, k4);
        for (int i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(x + 8.0 * h / 9.0, ytmp, k5);
        for (int i = 0; i < N; ++i)
            ytmp[i] =
                y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(x + h, ytmp, k6);
        for (int i = 0; i < N; ++i)
            y1[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(x + h, y1, k7);

        double errnorm = 0.0;
        for (int i = 0; i < N; ++i) {
            double erri =
                h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            double scale = opt.atol + opt.rtol * std::max(std::fabs(y[i]), std::fabs(y1[i]));
            double q = erri / scale;
            errnorm += q * q;
        }
        errnorm = std::sqrt(errnorm / N);

        if (errnorm <= 1.0) {
            typename DenseTrajectory<N>::Step st;
            st.x0 = x;
            st.h = h;
            for (int i = 0; i < N; ++i) {
                double ydiff = y1[i] - y[i];
                st.r1[i] = y[i];
                st.r2[i] = ydiff;
                st.r3[i] = h * k1[i] - ydiff;
                st.r4[i] = ydiff - h * k7[i] - st.r3[i];
                st.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                                d7 * k7[i]);
            }
            traj.steps.push_back(st);
            x += h;
            y = y1;
            k1 = k7;  // FSAL
            if (opt.guard) opt.guard(x, y.data());
            double fac = 0.9 * std::pow(std::max(errnorm, 1e-16), -0.2);
            h *= std::clamp(fac, 0.2, 5.0);
            if (std::fabs(h) > opt.max_step) h = dir * opt.max_step;
        } else {
            double fac = 0.9 * std::pow(errnorm, -0.2);
            h *= std::clamp(fac, 0.1, 0.9);
        }
    }
    traj.x_end = x;
    traj.y_end = y;
    return traj;
}

}  // namespace spiralflow
