#pragma once

#include <array>

#include "spiralflow/errors.hpp"
#include "spiralflow/numeric.hpp"

namespace spiralflow {

// Singularity data of the double logarithmic spiral: the two arm angles
// (reduced into [0, 2*pi)) and the pitch mu. The half angle `a` in
// (-pi/2, pi/2) is derived at construction.
struct SpiralParams {
    double theta_plus = 0.0;
    double theta_minus = 0.0;
    double mu = 0.0;
    double a = 0.0;
};

SpiralParams normalize_spiral_params(double theta_plus, double theta_minus, double mu);

double half_angle(const SpiralParams& params);

// Monodromy data of the purely imaginary transcendent. alpha and k are
// purely imaginary and stored by their imaginary parts; s2 = 0 always.
struct MonodromyData {
    double alpha_im = 0.0;  // alpha = i*alpha_im, alpha_im = -mu/2
    double kappa = 0.0;     // k = i*kappa
    double a = 0.0;         // half angle
    Complex s1, s2, s3;

    double mu() const { return -2.0 * alpha_im; }
};

MonodromyData solve_k(const SpiralParams& params);
MonodromyData monodromy_from_alpha_kappa(double alpha_im, double kappa);

std::array<Complex, 3> stokes_multipliers(const MonodromyData& md);

// Residual of the Stokes constraint s1 - s2 + s3 + s1 s2 s3 + 2 sin(pi alpha).
double stokes_constraint_residual(const MonodromyData& md);

// Residual of the defining relation for k: |(cosh(pi mu/2)+k)/sqrt(...) - e^{ia}|.
double parameter_map_residual(const MonodromyData& md);

// Amplitude and phase of the oscillatory tail. d is purely imaginary and
// stored through d_sq_neg = -d^2 >= 0. The phase is undefined in the fully
// degenerate case d = 0 (theta_plus == theta_minus and mu == 0).
struct ConnectionConstants {
    double d_sq_neg = 0.0;
    bool degenerate = true;
    double amplitude() const { return std::sqrt(d_sq_neg); }
    double d_sq() const { return -d_sq_neg; }
    Complex d() const { return Complex(0.0, amplitude()); }
    double phi() const {
        if (degenerate) throw DegenerateAmplitude("phase undefined: oscillation amplitude is zero");
        return phi_;
    }
    static ConnectionConstants make(double d_sq_neg, double phi);
    static ConnectionConstants make_degenerate();

  private:
    double phi_ = 0.0;
};

// Route through (alpha, k).
ConnectionConstants connection_from_monodromy(const MonodromyData& md);
// Route through (theta_plus, theta_minus, mu).
ConnectionConstants connection_from_spiral(const SpiralParams& params);
// Both routes with the cross-check enforced; returns the (alpha, k) values.
ConnectionConstants connection_constants(const SpiralParams& params);

}  // namespace spiralflow
