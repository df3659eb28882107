#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace spiralflow {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kCbrt3 = 1.4422495703074083;      // 3^(1/3)
inline constexpr double kCbrt3Sq = 2.0800838230519041;    // 3^(2/3)
inline constexpr double kSqrt3 = std::numbers::sqrt3;
inline constexpr double kRoot4Of3 = 1.3160740129524924;   // 3^(1/4)

// Reduce an angle to [0, 2*pi).
inline double wrap_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

// Distance between two angles modulo 2*pi, in [0, pi].
inline double angle_dist(double a, double b) {
    double d = std::fabs(wrap_angle(a) - wrap_angle(b));
    return std::min(d, kTwoPi - d);
}

inline Complex unit_phase(double a) {
    return Complex(std::cos(a), std::sin(a));
}

}  // namespace spiralflow
