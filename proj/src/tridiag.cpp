#include "curveflow/tridiag.hpp"

#include <stdexcept>

namespace curveflow {

namespace {
// Plain Thomas algorithm for the non-cyclic system.
std::vector<double> solve_tridiagonal(std::vector<double> a, std::vector<double> b,
                                      std::vector<double> c, std::vector<double> d) {
    const std::size_t n = b.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double m = a[i] / b[i - 1];
        b[i] -= m * c[i - 1];
        d[i] -= m * d[i - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = d[n - 1] / b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        x[i] = (d[i] - c[i] * x[i + 1]) / b[i];
    return x;
}
}  // namespace

std::vector<double> solve_cyclic_tridiagonal(const std::vector<double>& a,
                                             const std::vector<double>& b,
                                             const std::vector<double>& c,
                                             const std::vector<double>& d) {
    const std::size_t n = b.size();
    if (n < 3 || a.size() != n || c.size() != n || d.size() != n)
        throw std::invalid_argument("solve_cyclic_tridiagonal: need matching sizes >= 3");

    // A = T + u v^T with u = (gamma, 0, ..., 0, c[n-1])^T,
    // v = (1, 0, ..., 0, a[0]/gamma)^T.
    const double gamma = -b[0];
    std::vector<double> bb = b;
    bb[0] -= gamma;
    bb[n - 1] -= c[n - 1] * a[0] / gamma;

    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = c[n - 1];

    std::vector<double> y = solve_tridiagonal(a, bb, c, d);
    std::vector<double> z = solve_tridiagonal(a, bb, c, u);

    const double vy = y[0] + a[0] / gamma * y[n - 1];
    const double vz = 1.0 + z[0] + a[0] / gamma * z[n - 1];
    const double factor = vy / vz;
    for (std::size_t i = 0; i < n; ++i) y[i] -= factor * z[i];
    return y;
}

}  // namespace curveflow
