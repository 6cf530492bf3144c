#ifndef BLINDSSR_ESTIMATORS_HPP
#define BLINDSSR_ESTIMATORS_HPP

#include <span>
#include <utility>

namespace blindssr {

enum class VarianceKind {
    OneSample,
    Adjusted,
    ConservativeUCL,
    InfeasibleUCL,
};

/// A variance value tagged with the estimator that produced it.
struct VarianceEstimate {
    double value = 0.0;
    VarianceKind kind = VarianceKind::OneSample;
    /// 1 - gamma for the UCL kinds; unused otherwise.
    double confidence = 0.0;
    /// Delta/sigma for the infeasible UCL; unused otherwise.
    double effect_size = 0.0;
    /// Set when a negative adjusted variance was clamped to zero.
    bool clamped = false;
    /// False only for the infeasible UCL, which needs the true effect size.
    bool blind_estimable = true;
};

/// Blinded interim state: group counts are known from randomization
/// bookkeeping even though per-subject labels are concealed.
struct PilotSummary {
    int n_int;
    int n1_int;
    int n0_int;
    double os_variance;

    PilotSummary(int n1, int n0, double os_var);
};

/// Pooled sample variance of the blinded interim outcomes (two-pass).
VarianceEstimate one_sample_variance(std::span<const double> outcomes);

/// One-sample variance minus the design-effect bias term, clamped at zero.
VarianceEstimate adjusted_variance(const PilotSummary& pilot, double delta);

/// sigma_bar^2_{U,1-gamma} = os_variance * (n_int - 1) / d_{1-gamma}.
/// Computable blind; covers sigma^2 with probability >= confidence.
VarianceEstimate conservative_upper_limit(const PilotSummary& pilot, double confidence);

/// sigma_hat^2_{U,1-gamma} = os_variance * (n_int - 1) / d_{lambda,1-gamma}
/// with lambda = effect_size^2 * n1 * n0 / n. Requires the true effect size,
/// so it is an oracle/simulation device, not a blind-review estimator.
VarianceEstimate infeasible_upper_limit(const PilotSummary& pilot, double confidence,
                                        double effect_size);

/// E[os variance] = sigma2 + delta^2 * n1 * n0 / (n * (n - 1)).
double os_variance_expectation(double sigma2, double delta_true, int n1_int, int n0_int);

/// Deterministic split of n_int by allocation probability pi when the group
/// counts are not recorded: larger share to the more probable group, ties to
/// group 1. Returns (n1, n0).
std::pair<int, int> split_group_counts(int n_int, double pi);

} // namespace blindssr

#endif
