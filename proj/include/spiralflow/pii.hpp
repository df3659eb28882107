#pragma once

#include <functional>
#include <vector>

#include "spiralflow/monodromy.hpp"
#include "spiralflow/ode.hpp"

namespace spiralflow {

// Coefficients of the algebraic tail p(x) ~ sum_n c[n] x^{-(3n+1)} of the
// real form p (u = i p, p'' = x p - 2 p^3 + mu/2). c[0] = alpha_im and the
// recursion c[n] = (3n-2)(3n-1) c[n-1] + 2 sum_{i+j+k=n-1} c_i c_j c_k
// follows from substituting the expansion into the equation. The series is
// asymptotic; eval with the optimal truncation for the abscissa at hand.
class TailSeries {
  public:
    static TailSeries make(double alpha_im, int nterms = 16);

    double p(double x, int n) const;
    double dp(double x, int n) const;
    double ddp(double x, int n) const;
    // Integral of the n-term partial sum over [x0, x1], 0 < x0 <= x1.
    double integral(double x0, double x1, int n) const;
    // Tail integral of the algebraic part past X with the leading c0/y
    // removed: int_X^inf (p - c0/y) dy.
    double tail_integral(double X, int n) const;
    // Truncation index minimizing the magnitude of the first kept term at x.
    int optimal_terms(double x) const;

    const std::vector<double>& coeff() const { return c_; }

  private:
    std::vector<double> c_;
};

// Three-term right asymptotics of u itself (purely imaginary).
Complex asym_series_plus(double x, double mu);
double asym_series_plus_imag(double x, double mu);
double asym_series_plus_imag_deriv(double x, double mu);

// Left oscillatory asymptotics of u: alpha/x plus the d-amplitude
// oscillation. Degenerate connection constants drop the oscillatory term.
Complex asym_osc_minus(double x, const ConnectionConstants& cc, double mu);

// Phase of the left oscillation at the transcendent level, evaluated at
// tau = -x > 0: (2/3) tau^{3/2} - (3/4) d^2 ln(tau) + phi.
double left_phase(double tau, const ConnectionConstants& cc);
double left_phase_deriv(double tau, const ConnectionConstants& cc);

// int_{-inf}^{-X} (Im u - alpha_im/y) dy: two integration-by-parts terms of
// the oscillation plus the first non-oscillatory correction.
double left_tail_integral(const ConnectionConstants& cc, double alpha_im, double X);

struct EnvelopeFit {
    double d_fit = 0.0;
    double phi_fit = 0.0;
    double x_lo = 0.0;
    double x_hi = 0.0;
    double rms_residual = 0.0;
};

// Least-squares amplitude/phase fit of the left oscillation on a window of
// the negative axis. Subtracts the algebraic part, rescales by (-x)^{1/4}
// and fits against the model oscillation, iterating the amplitude-dependent
// log term of the phase.
EnvelopeFit fit_envelope(const std::function<double(double)>& p_of_x, double mu, double x_lo,
                         double x_hi);

struct ShootConfig {
    double R = 12.0;        // right edge of the dense grid
    double L = 40.0;        // grid covers [-L, R]
    double anchor = 10.0;   // abscissa where the boundary ansatz seeds the IVP
    double tol = 1e-13;     // integrator tolerance (absolute and relative)
    double window_lo = -35.0;
    double window_hi = -15.0;
    double match_tol = 1e-8;   // amplitude matching tolerance on d_fit
    double c_max = 4096.0;     // bracket expansion limit for the mode coefficient
    int max_iterations = 80;   // root-finder budget per bracket
};

// Dense solution of the purely imaginary transcendent on [-L, R] in the
// real form p, with the cumulative integrals needed by the flow profile:
// P(x) = int_0^x p and V(x) = int_0^x exp(2 i P).
class PiiSolution {
  public:
    MonodromyData md;
    ConnectionConstants cc;
    ShootConfig config;
    double shoot_param = 0.0;  // coefficient of the decaying mode at the anchor
    EnvelopeFit fit;

    TailSeries series;
    int nterms = 1;

    double mu() const { return md.mu(); }
    double xmin() const { return x_min_; }
    double xmax() const { return x_max_; }
    double anchor_x() const { return anchor_; }

    double p(double x) const;
    double dp(double x) const;
    double cumulative(double x) const;   // P(x)
    Complex step_factor(double x) const; // exp(2 i P(x)) = d/dx V
    Complex V(double x) const;

    Complex u(double x) const { return Complex(0.0, p(x)); }
    Complex u_prime(double x) const { return Complex(0.0, dp(x)); }

    // Strictly increasing abscissae: integrator knots plus segment nodes.
    std::vector<double> grid() const;

    // Construction internals (the shooting routine fills these).
    DenseTrajectory<5> main_traj;  // anchor -> -L: (p, p', P~, Re V~, Im V~)
    DenseTrajectory<3> mode_traj;  // R -> anchor: (psi, psi', int psi)
    double p_shift = 0.0;          // P~(0)
    Complex v_shift{0.0, 0.0};     // V~(0)
    Complex v_rot{1.0, 0.0};       // exp(-2 i P~(0))
    std::vector<double> seg_x;     // nodes on [anchor, R]
    std::vector<Complex> seg_v;    // corrected V at the nodes
    std::vector<Complex> seg_f;    // integrand exp(2 i P) at the nodes

  private:
    friend PiiSolution shoot_solution(const MonodromyData&, const ConnectionConstants&,
                                      const ShootConfig&);
    double x_min_ = 0.0, x_max_ = 0.0, anchor_ = 0.0;
};

// Plain initial-value integration of p'' = x p - 2 p^3 + mu/2 with dense
// output; throws BlowUp past the pole guard.
DenseTrajectory<2> integrate_pii(double mu, double p0, double p0_prime, double x0, double x1,
                                 double tol);

// One-parameter shooting on the decaying-mode coefficient: the boundary
// ansatz (optimally truncated series plus c times the transported decaying
// mode of the linearization) seeds the IVP at the anchor; c is root-found so
// the fitted left amplitude equals the connection-formula amplitude. The
// fitted phase is never targeted and remains an independent prediction.
PiiSolution shoot_solution(const MonodromyData& md, const ConnectionConstants& cc,
                           const ShootConfig& cfg = {});

// Dense values inside [-L, R], asymptotic series outside.
Complex evaluate_u(const PiiSolution& sol, double x);

}  // namespace spiralflow
