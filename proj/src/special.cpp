#include "spiralflow/special.hpp"

#include <cmath>

#include "spiralflow/errors.hpp"

namespace spiralflow {

namespace {

// Bernoulli coefficients B_{2j} / (2j (2j-1)) of the Stirling series.
constexpr double kStirling[] = {
    1.0 / 12.0,          -1.0 / 360.0,      1.0 / 1260.0,  -1.0 / 1680.0,
    1.0 / 1188.0,        -691.0 / 360360.0, 1.0 / 156.0,   -3617.0 / 122400.0,
    43867.0 / 244188.0,
};

Complex stirling_log_gamma(Complex w) {
    Complex lg = (w - 0.5) * std::log(w) - w + 0.5 * std::log(kTwoPi);
    Complex w2 = w * w;
    Complex p = 1.0 / w;
    for (double c : kStirling) {
        lg += c * p;
        p /= w2;
    }
    return lg;
}

}  // namespace

Complex log_gamma(Complex z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw PoleOfGamma("log_gamma pole at non-positive integer");

    // Shift until the Stirling series is accurate, then remove the factors.
    int n = 0;
    if (z.real() < 9.0) n = static_cast<int>(std::ceil(9.0 - z.real()));
    Complex lg = stirling_log_gamma(z + static_cast<double>(n));
    for (int j = 0; j < n; ++j) lg -= std::log(z + static_cast<double>(j));
    return lg;
}

double arg_gamma_imag(double y) {
    if (y == 0.0) throw PoleOfGamma("log_gamma pole at zero");
    return log_gamma(Complex(0.0, y)).imag();
}

AiryPair airy_decaying(double x) {
    if (x < 6.0) throw OutOfRange("airy_decaying requires x >= 6");
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    const double pref = std::exp(-zeta) / (2.0 * std::sqrt(kPi));

    double u = 1.0, sum_ai = 1.0, sum_dai = 1.0;
    double sign = 1.0, zk = 1.0;
    double prev = 1.0;
    for (int k = 1; k <= 40; ++k) {
        u *= (6.0 * k - 5.0) * (6.0 * k - 1.0) / (72.0 * k);
        sign = -sign;
        zk *= zeta;
        double term = u / zk;
        if (term > prev) break;  // asymptotic series started diverging
        prev = term;
        double v = u * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
        sum_ai += sign * term;
        sum_dai += sign * v / zk;
        if (term < 1e-18) break;
    }
    AiryPair out;
    out.ai = pref * sum_ai / std::pow(x, 0.25);
    out.dai = -pref * std::pow(x, 0.25) * sum_dai;
    return out;
}

}  // namespace spiralflow
