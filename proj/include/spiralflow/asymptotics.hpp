#pragma once

#include <vector>

#include "spiralflow/flow.hpp"
#include "spiralflow/monodromy.hpp"

namespace spiralflow {

// Coefficients of the right expansions: c0 + c1 x^{-3} + c2 x^{-6} for g,
// equivalently (c0 x + c1 t x^{-2} + c2 t^2 x^{-5}) for z. t2 and t5 are the
// x^{-2} and x^{-5} coefficients of v_x - v^2/2 appearing in the chain.
struct PlusExpansion {
    Complex c0, c1, c2;
    Complex t2, t5;
};

PlusExpansion plus_expansion(double mu, double theta);

enum class MinusConvention { kTheorem, kProposition };

// Left-side coefficients: c0 + c1 |x|^{-3/2} + c2 |x|^{-9/4} cos(Psi) for g.
// The two conventions differ by the sign of c1 (and hence c2); they are
// reconciled by the rotation beta. q1..q3 are the proof intermediates.
struct MinusExpansion {
    Complex c0, c1, c2;
    Complex q1, q2, q3;
    bool degenerate = false;
    Complex c2_checked() const {
        if (degenerate)
            throw DegenerateAmplitude("oscillatory coefficient undefined at zero amplitude");
        return c2;
    }
};

MinusExpansion minus_expansion(double mu, double theta, const ConnectionConstants& cc,
                               MinusConvention conv);

// WKB phase of the oscillatory correction at (negative) flow abscissa x:
// (2/3)(-x/3^(1/3))^(3/2) - (3/4) d^2 ln(-x/3^(1/3)) + phi.
double phase_psi(double x, const ConnectionConstants& cc);

// Region membership 0 < t^(1/3) <= c_region * |x|.
bool in_region_plus(double t, double x, double c_region = 0.5);
bool in_region_minus(double t, double x, double c_region = 0.5);

Complex expansion_plus(const PlusExpansion& pe, double mu, double t, double x,
                       double c_region = 0.5);
Complex expansion_minus(const MinusExpansion& me, const ConnectionConstants& cc, double mu,
                        double t, double x, double c_region = 0.5);

Complex g_expansion_plus(const PlusExpansion& pe, double x);
Complex g_expansion_minus(const MinusExpansion& me, const ConnectionConstants& cc, double x);

// Dispatches on the sign of x using the boundary angles stored in the flow.
Complex g_expansions(const FlowSolution& fs, double x);

struct RemainderRow {
    double t, x, ratio;
};

struct RemainderReport {
    std::vector<RemainderRow> plus_rows, minus_rows;
    double sup_plus = 0.0, sup_minus = 0.0;
    double slope_plus = 0.0, slope_minus = 0.0;  // log-log error slopes in x
};

// Ratios |R+|/(t^3 x^{-8}) and |R-|/(t |x|^{-2}) over region grids, with the
// log-log slope of the raw error against |x| at the middle t.
RemainderReport remainder_report(const FlowSolution& fs, const std::vector<double>& t_list,
                                 const std::vector<double>& x_plus,
                                 const std::vector<double>& x_minus, double c_region = 0.5);

}  // namespace spiralflow
