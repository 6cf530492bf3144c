#include "blindssr/estimators.hpp"
#include "blindssr/distributions.hpp"
#include "blindssr/errors.hpp"

#include <cmath>
#include <sstream>

namespace blindssr {

PilotSummary::PilotSummary(int n1, int n0, double os_var)
    : n_int(n1 + n0), n1_int(n1), n0_int(n0), os_variance(os_var) {
    if (n1 < 1 || n0 < 1)
        throw DomainError("pilot group counts must each be >= 1");
    if (n_int < 2)
        throw InsufficientDataError("pilot needs at least 2 subjects");
    if (!(os_var >= 0.0) || !std::isfinite(os_var))
        throw DomainError("one-sample variance must be finite and >= 0");
}

VarianceEstimate one_sample_variance(std::span<const double> outcomes) {
    const std::size_t n = outcomes.size();
    if (n < 2)
        throw InsufficientDataError("one-sample variance needs at least 2 outcomes");
    for (double y : outcomes) {
        if (!std::isfinite(y)) throw DomainError("outcomes must be finite");
    }
    // Two-pass: mean, then centered squares. Keeps the ~1e-7 scale variances
    // of the case studies free of cancellation.
    double mean = 0.0;
    for (double y : outcomes) mean += y;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double y : outcomes) {
        const double d = y - mean;
        ss += d * d;
    }
    VarianceEstimate est;
    est.value = ss / static_cast<double>(n - 1);
    est.kind = VarianceKind::OneSample;
    return est;
}

VarianceEstimate adjusted_variance(const PilotSummary& pilot, double delta) {
    if (!std::isfinite(delta)) throw DomainError("delta must be finite");
    const double n = pilot.n_int;
    const double bias = delta * delta * pilot.n1_int * pilot.n0_int / (n * (n - 1.0));
    VarianceEstimate est;
    est.kind = VarianceKind::Adjusted;
    est.value = pilot.os_variance - bias;
    if (est.value < 0.0) {
        est.value = 0.0;
        est.clamped = true;
    }
    return est;
}

VarianceEstimate conservative_upper_limit(const PilotSummary& pilot, double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0))
        throw DomainError("confidence must lie in (0,1)");
    const int df = pilot.n_int - 1;
    const double d = chi2_quantile_upper(CentralChiSq(df), confidence);
    VarianceEstimate est;
    est.kind = VarianceKind::ConservativeUCL;
    est.confidence = confidence;
    est.value = pilot.os_variance * static_cast<double>(df) / d;
    return est;
}

VarianceEstimate infeasible_upper_limit(const PilotSummary& pilot, double confidence,
                                        double effect_size) {
    if (!(confidence > 0.0 && confidence < 1.0))
        throw DomainError("confidence must lie in (0,1)");
    if (!std::isfinite(effect_size))
        throw DomainError("effect size must be finite");
    const int df = pilot.n_int - 1;
    const double lambda = effect_size * effect_size *
                          static_cast<double>(pilot.n1_int) * pilot.n0_int / pilot.n_int;
    const double d = noncentral_chi2_quantile_upper(NoncentralChiSq(df, lambda), confidence);
    VarianceEstimate est;
    est.kind = VarianceKind::InfeasibleUCL;
    est.confidence = confidence;
    est.effect_size = effect_size;
    est.blind_estimable = false;
    est.value = pilot.os_variance * static_cast<double>(df) / d;
    return est;
}

double os_variance_expectation(double sigma2, double delta_true, int n1_int, int n0_int) {
    if (!(sigma2 > 0.0)) throw DomainError("sigma2 must be > 0");
    if (n1_int < 1 || n0_int < 1) throw DomainError("group counts must be >= 1");
    const double n = n1_int + n0_int;
    return sigma2 + delta_true * delta_true * n1_int * n0_int / (n * (n - 1.0));
}

std::pair<int, int> split_group_counts(int n_int, double pi) {
    if (n_int < 2) throw InsufficientDataError("n_int must be >= 2 to split");
    if (!(pi > 0.0 && pi < 1.0)) throw DomainError("pi must lie in (0,1)");
    const double raw1 = pi * n_int;
    int n1;
    if (pi > 0.5) {
        n1 = static_cast<int>(std::ceil(raw1 - 1e-12));
    } else if (pi < 0.5) {
        n1 = static_cast<int>(std::floor(raw1 + 1e-12));
    } else {
        // Ties to group 1.
        n1 = (n_int + 1) / 2;
    }
    if (n1 < 1) n1 = 1;
    if (n1 > n_int - 1) n1 = n_int - 1;
    return {n1, n_int - n1};
}

} // namespace blindssr
