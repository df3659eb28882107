#pragma once

#include <utility>
#include <vector>

#include "spiralflow/pii.hpp"

namespace spiralflow {

// One evaluated curve z(t, .) on a set of abscissae.
struct CurveSample {
    double t = 0.0;
    std::vector<double> xs;
    std::vector<Complex> zs;
};

// The geometric-flow solution built on top of a transcendent: the unit-speed
// profile w, the normalized map g, the boundary angles of g and the rotation
// aligning the profile with the target spiral.
class FlowSolution {
  public:
    PiiSolution sol;
    SpiralParams params;
    Complex profile_shift{0.0, 0.0};  // the constant subtracted in w
    double theta_tilde_plus = 0.0;
    double theta_tilde_minus = 0.0;
    double beta = 0.0;

    double xmin() const { return kCbrt3 * sol.xmin(); }
    double xmax() const { return kCbrt3 * sol.xmax(); }

    Complex w(double x) const;
    Complex w_x(double x) const;    // exp of the inner integral; unimodular
    Complex w_xx(double x) const;   // w_x * v
    Complex w_xxx(double x) const;  // w_x * (v_x + v^2)
    Complex v(double x) const;      // scaled transcendent 2 u(x/3^(1/3)) / 3^(1/3)
    Complex v_x(double x) const;
    Complex g(double x) const;

    Complex z(double t, double x) const;
};

FlowSolution build_flow(PiiSolution sol, const SpiralParams& params);

Complex compute_w(const FlowSolution& fs, double x);
Complex compute_g(const FlowSolution& fs, double x);

// Boundary angles with the next-order corrections subtracted before taking
// the argument; the custom-cut variants support convergence studies.
double extract_tilde_plus(const FlowSolution& fs, double x_cut);
double extract_tilde_minus(const FlowSolution& fs, double x_cut);
std::pair<double, double> tilde_thetas(const FlowSolution& fs);

double rotation_beta(const SpiralParams& params, const FlowSolution& fs);

Complex evaluate_z(const FlowSolution& fs, double t, double x);

Complex spiral_z0(const SpiralParams& params, double x);

// |z(t,x) - z0(x)| / t^(1/3)
double singularity_gap(const FlowSolution& fs, const SpiralParams& params, double t, double x);

CurveSample sample_curve(const FlowSolution& fs, double t, const std::vector<double>& xs);

// Solution reaching the spiral in forward time, built from the swapped
// spiral by time reversal: z_-(t, x) = -z_swapped(-t, -x) for t < 0.
struct BackwardSolution {
    FlowSolution flow;       // solves the swapped spiral
    SpiralParams original;

    Complex z_minus(double t, double x) const;
    Complex swapped_spiral(double x) const;
    double gap(double t, double x) const;
};

BackwardSolution backward_solution(const SpiralParams& params, const ShootConfig& cfg = {});

}  // namespace spiralflow
