#ifndef BLINDSSR_QUADRATURE_HPP
#define BLINDSSR_QUADRATURE_HPP

#include <functional>

namespace blindssr {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels = 0;
};

/// Adaptive Gauss-Kronrod (7-15) integration of f over [a, b] to the given
/// absolute tolerance. Throws NumericError with diagnostics when the panel
/// budget is exhausted before the tolerance is met.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol);

} // namespace blindssr

#endif
