#pragma once

#include <stdexcept>
#include <string>

namespace spiralflow {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateSpiral : Error {
    using Error::Error;
};

struct DegenerateAmplitude : Error {
    using Error::Error;
};

struct PoleOfGamma : Error {
    using Error::Error;
};

// The integration left the pole-free family; carries the abscissa where
// the trajectory exceeded the guard threshold.
struct BlowUp : Error {
    double where;
    BlowUp(const std::string& msg, double x) : Error(msg), where(x) {}
};

struct NoConvergence : Error {
    using Error::Error;
};

struct OutOfRange : Error {
    using Error::Error;
};

struct ZeroArgument : Error {
    using Error::Error;
};

struct GridTooShort : Error {
    using Error::Error;
};

struct WindowTooShort : Error {
    using Error::Error;
};

struct DegenerateFit : Error {
    using Error::Error;
};

struct RegionViolation : Error {
    using Error::Error;
};

struct UnknownSuite : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

}  // namespace spiralflow
