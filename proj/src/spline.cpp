#include "curveflow/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "curveflow/tridiag.hpp"

namespace curveflow {

PeriodicCubicSpline::PeriodicCubicSpline(std::vector<double> knots, std::vector<double> values,
                                         double period)
    : u_(std::move(knots)), y_(std::move(values)), period_(period) {
    const std::size_t n = u_.size();
    if (n < 3 || y_.size() != n)
        throw std::invalid_argument("PeriodicCubicSpline: need >= 3 matching knots/values");
    if (!(period_ > 0.0))
        throw std::invalid_argument("PeriodicCubicSpline: period must be positive");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(u_[i] < u_[i + 1]))
            throw std::invalid_argument("PeriodicCubicSpline: knots must be increasing");

    // Interval widths, wrapping the last knot back to the first.
    std::vector<double> h(n);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = u_[i + 1] - u_[i];
    h[n - 1] = u_[0] + period_ - u_[n - 1];
    if (!(h[n - 1] > 0.0))
        throw std::invalid_argument("PeriodicCubicSpline: knot span exceeds period");

    // Second-derivative (moment) system: for each knot i,
    //   h_{i-1}/6 M_{i-1} + (h_{i-1}+h_i)/3 M_i + h_i/6 M_{i+1}
    //     = (y_{i+1}-y_i)/h_i - (y_i-y_{i-1})/h_{i-1},  cyclically.
    std::vector<double> a(n), b(n), c(n), d(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t im = (i + n - 1) % n;
        const std::size_t ip = (i + 1) % n;
        a[i] = h[im] / 6.0;
        b[i] = (h[im] + h[i]) / 3.0;
        c[i] = h[i] / 6.0;
        d[i] = (y_[ip] - y_[i]) / h[i] - (y_[i] - y_[im]) / h[im];
    }
    m_ = solve_cyclic_tridiagonal(a, b, c, d);

    // Append wrapped terminal knot/value so evaluation uses closed segments.
    u_.push_back(u_[0] + period_);
    y_.push_back(y_[0]);
    m_.push_back(m_[0]);
}

std::size_t PeriodicCubicSpline::segment(double& u) const {
    u -= period_ * std::floor((u - u_[0]) / period_);
    const auto it = std::upper_bound(u_.begin(), u_.end() - 1, u);
    const std::size_t i = (it == u_.begin()) ? 0 : static_cast<std::size_t>(it - u_.begin()) - 1;
    return std::min(i, u_.size() - 2);
}

double PeriodicCubicSpline::operator()(double u) const {
    const std::size_t i = segment(u);
    const double h = u_[i + 1] - u_[i];
    const double A = (u_[i + 1] - u) / h;
    const double B = (u - u_[i]) / h;
    return A * y_[i] + B * y_[i + 1] +
           ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
}

double PeriodicCubicSpline::derivative(double u) const {
    const std::size_t i = segment(u);
    const double h = u_[i + 1] - u_[i];
    const double A = (u_[i + 1] - u) / h;
    const double B = (u - u_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           ((3.0 * B * B - 1.0) * m_[i + 1] - (3.0 * A * A - 1.0) * m_[i]) * h / 6.0;
}

}  // namespace curveflow
