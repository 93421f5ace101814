#pragma once

/// @file spline.hpp
/// Periodic natural cubic spline interpolation on a closed parameter range.

#include <cstddef>
#include <vector>

namespace curveflow {

/// Interpolates values y_i at strictly increasing knots u_i, periodic with
/// period `period` (so y wraps from u.back() to u.front() + period).
class PeriodicCubicSpline {
public:
    PeriodicCubicSpline(std::vector<double> knots, std::vector<double> values, double period);

    /// Evaluates at u (reduced mod period).
    double operator()(double u) const;

    /// First derivative at u.
    double derivative(double u) const;

private:
    std::size_t segment(double& u) const;

    std::vector<double> u_;   // knots, plus wrapped terminal knot
    std::vector<double> y_;
    std::vector<double> m_;   // second derivatives at knots
    double period_;
};

}  // namespace curveflow
