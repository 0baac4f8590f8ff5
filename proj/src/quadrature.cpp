#include "sshbp/quadrature.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "sshbp/errors.hpp"

namespace sshbp {

QuadratureRule gauss_legendre(int n)
{
    if (n < 1)
        throw ValidationError("nodes_per_panel", "must be positive");
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));

    // Newton iteration on P_n from the Chebyshev-like initial guesses;
    // nodes are symmetric so only half are solved.
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1)
        rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

double oscillatory_error(const QuadratureRule& rule, double theta)
{
    std::complex<double> q = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        q += rule.weights[i] * std::exp(std::complex<double>(0.0, theta * rule.nodes[i]));
    const double exact = theta == 0.0 ? 2.0 : 2.0 * std::sin(theta) / theta;
    return std::abs(q - exact) / 2.0;
}

double max_panel_phase(const QuadratureRule& rule, double tol)
{
    constexpr double step = 1e-3;
    double theta = 0.0;
    while (oscillatory_error(rule, theta + step) <= tol)
        theta += step;
    return theta;
}

} // namespace sshbp
