#pragma once

#include <vector>

namespace sshbp {

/// Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

QuadratureRule gauss_legendre(int n);

/// Relative error of `rule` on exp(i theta x) over [-1, 1], i.e.
/// |Q - 2 sin(theta)/theta| / 2.
double oscillatory_error(const QuadratureRule& rule, double theta);

/// Largest half-panel phase theta such that oscillatory_error stays below
/// `tol` for every phase up to theta.
double max_panel_phase(const QuadratureRule& rule, double tol);

} // namespace sshbp
