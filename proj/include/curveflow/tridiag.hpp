#pragma once

/// @file tridiag.hpp
/// Periodic (cyclic) tridiagonal solver via the Sherman-Morrison trick.

#include <vector>

namespace curveflow {

/// Solves the cyclic system with sub-diagonal a, diagonal b, super-diagonal
/// c and wrap couplings a[0] (row 0 to x[n-1]) and c[n-1] (row n-1 to x[0]).
/// Requires n >= 3 and a diagonally dominant system.
std::vector<double> solve_cyclic_tridiagonal(const std::vector<double>& a,
                                             const std::vector<double>& b,
                                             const std::vector<double>& c,
                                             const std::vector<double>& d);

}  // namespace curveflow
