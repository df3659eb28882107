#pragma once

#include "spiralflow/numeric.hpp"

namespace spiralflow {

// Principal branch of log Gamma, accurate to ~1e-14 relative on the strip
// needed here (purely imaginary arguments of modulus <= 10 and real
// arguments away from the poles). Throws PoleOfGamma at non-positive
// integers.
Complex log_gamma(Complex z);

// arg Gamma(i*y) for real y != 0.
double arg_gamma_imag(double y);

// Decaying Airy solution and its derivative, from the large-x asymptotic
// expansion. Intended for x >= 8; relative accuracy improves like
// exp(-4/3 x^(3/2)) and is ~1e-15 for x >= 10.
struct AiryPair {
    double ai;
    double dai;
};
AiryPair airy_decaying(double x);

}  // namespace spiralflow
