#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spiralflow/asymptotics.hpp"
#include "spiralflow/flow.hpp"

namespace spiralflow {

struct Check {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerificationReport {
    std::string suite_name;
    std::vector<Check> checks;
    double worst_ratio = 0.0;

    void add(const std::string& name, double measured, double tolerance);
    bool all_pass() const;
};

struct SuiteConfig {
    std::uint64_t seed = 0xC0FFEE;
    int sweep_size = 100;
    ShootConfig shoot;
};

// Reproducible random parameter triples: mu in [-3, 3], angles in [0, 2pi)
// with the near-degenerate band |delta - pi| < 0.1 rejected.
std::vector<SpiralParams> sweep_params(std::uint64_t seed, int n);

// As above, additionally filtered to oscillation amplitudes in [d_lo, d_hi].
std::vector<SpiralParams> sweep_params_with_amplitude(std::uint64_t seed, int n, double d_lo,
                                                      double d_hi);

// exp of the two-sided integral of u over [-X, X] with closed-form tail
// corrections; unimodular, to be compared against exp(i a).
Complex cauchy_total_integral(const PiiSolution& sol, double X);

// sup over [-L, 0] of |u_x| / (1 + |x|^(1/4)).
double ux_growth_check(const PiiSolution& sol);

// name in {monodromy, pii, flow, asymptotics, all}.
VerificationReport run_suite(const std::string& name, const SpiralParams& params,
                             const SuiteConfig& cfg = {});

// Product-series evaluation of arg Gamma(i y), independent of log_gamma.
double arg_gamma_imag_series(double y);

}  // namespace spiralflow
