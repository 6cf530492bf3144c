#ifndef BLINDSSR_CALIBRATION_HPP
#define BLINDSSR_CALIBRATION_HPP

#include "blindssr/design.hpp"

#include <string>
#include <vector>

namespace blindssr {

struct CalibrationResult {
    double confidence = 0.0;          // solved 1 - gamma, full precision
    double achieved_lower_bound = 0.0;
    int n_int = 0;
    double alpha = 0.0;
    double power_target = 0.0;
    int solver_iterations = 0;
};

/// Power lower bound of the proposed rule at Delta = delta: integrates the
/// asymptotic conditional power against the central chi-squared density with
/// df = n_int - 1. Free of sigma^2 and of the effect size, so it can be
/// pre-specified in a protocol.
double lower_bound_power(double confidence, int n_int, const DesignSpec& spec);

/// Solve lower_bound_power(1-gamma) = power target by bisection over
/// (0.001, 0.999). The bound is strictly increasing in the confidence level.
CalibrationResult calibrate_gamma(int n_int, const DesignSpec& spec);

/// Protocol value: the calibrated confidence rounded UP to 2 decimals — the
/// smallest printable level whose lower bound still meets the target.
double protocol_confidence(double calibrated_confidence);

struct GammaTableCell {
    int n_int = 0;
    double alpha = 0.0;
    double power_target = 0.0;
    bool ok = false;
    CalibrationResult result;    // valid when ok
    double protocol_value = 0.0; // ceil-2dp of the calibrated confidence
    std::string error;           // set when !ok
};

/// One calibration per (n_int, spec); per-cell failures are reported in the
/// cell, the table is still emitted.
std::vector<GammaTableCell> gamma_table(const std::vector<int>& n_int_list,
                                        const std::vector<DesignSpec>& specs);

} // namespace blindssr

#endif
