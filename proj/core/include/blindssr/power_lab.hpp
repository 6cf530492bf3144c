#ifndef BLINDSSR_POWER_LAB_HPP
#define BLINDSSR_POWER_LAB_HPP

#include "blindssr/design.hpp"

#include <cstdint>
#include <optional>

namespace blindssr {

/// Ground truth for operating-characteristic evaluation.
struct TruthScenario {
    double mu1;
    double mu0;
    double sigma2;

    TruthScenario(double mu1_, double mu0_, double sigma2_);

    double delta_true() const { return mu1 - mu0; }
    double effect_size() const;
    /// Noncentrality of the scaled one-sample variance for the given split.
    double noncentrality(int n1_int, int n0_int) const;
};

struct RejectionSummary {
    double rate = 0.0;
    double std_error = 0.0;
};

/// Per-group (group 1) re-estimated sample size distribution summaries.
struct NfinSummary {
    double mean = 0.0;
    double sd = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
};

struct SimulationReport {
    std::uint64_t replicates = 0;
    std::uint64_t seed = 0;
    Method method = Method::OneSample;
    TruthScenario scenario{0.0, 0.0, 1.0};
    int n1_int = 0;
    int n0_int = 0;
    std::optional<double> confidence;      // used by Proposed/Theoretical
    std::optional<RejectionSummary> rejection; // absent for nfin-only runs
    NfinSummary n_fin;
};

struct SimOptions {
    std::optional<double> confidence;
    /// Assign second-stage subjects by Bernoulli(pi) draws instead of the
    /// deterministic count split.
    bool binomial_allocation = false;
    /// 0 resolves from BLINDSSR_THREADS, then hardware concurrency.
    int threads = 0;
};

/// Asymptotic conditional power given a (possibly fractional) final total.
double asymptotic_conditional_power(double n_fin, const TruthScenario& scenario,
                                    const DesignSpec& spec);

/// Asymptotic power of the proposed (conservative-UCL) rule; requires the
/// interim split because the noncentrality does.
double asymptotic_power_proposed(double confidence, int n1_int, int n0_int,
                                 const TruthScenario& scenario, const DesignSpec& spec);

/// Asymptotic power of the infeasible-UCL rule (true effect size inside the
/// quantile, hence oracle-only).
double asymptotic_power_theoretical(double confidence, int n1_int, int n0_int,
                                    const TruthScenario& scenario, const DesignSpec& spec);

/// Full two-stage trial Monte Carlo: blinded interim variance, re-estimation,
/// second-stage enrolment, pooled-variance t test. Deterministic given seed,
/// independent of thread count.
SimulationReport simulate_trials(Method method, const TruthScenario& scenario,
                                 const DesignSpec& spec, int n1_int, int n0_int,
                                 std::uint64_t replicates, std::uint64_t seed,
                                 const SimOptions& options = {});

/// Re-calculated sample-size distribution: draws the scaled one-sample
/// variance directly from its noncentral chi-squared law and maps it through
/// the method formula (no outcome-level simulation, no integer rounding).
SimulationReport sample_size_distribution(Method method, const TruthScenario& scenario,
                                          const DesignSpec& spec, int n1_int, int n0_int,
                                          std::uint64_t replicates, std::uint64_t seed,
                                          const SimOptions& options = {});

} // namespace blindssr

#endif
