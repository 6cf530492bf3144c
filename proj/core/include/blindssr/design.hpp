#ifndef BLINDSSR_DESIGN_HPP
#define BLINDSSR_DESIGN_HPP

#include "blindssr/estimators.hpp"

#include <optional>
#include <string_view>

namespace blindssr {

/// Trial design parameters governing every sample-size formula.
struct DesignSpec {
    double alpha;        // one-sided significance level
    double power_target; // 1 - beta
    double delta;        // target treatment effect
    double pi;           // allocation probability P(Z = 1)

    DesignSpec(double alpha_, double power_target_, double delta_, double pi_);

    double z_alpha() const;
    double z_power() const;
};

enum class Method {
    OneSample,
    Adjusted,
    InflationFactor,
    Proposed,
    Theoretical,
};

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);

struct ReestimateOptions {
    /// 1 - gamma for Proposed/Theoretical (typically from calibration).
    std::optional<double> confidence;
    /// True Delta/sigma for Theoretical.
    std::optional<double> effect_size;
    /// Clamp the total at n_int (pilot subjects are already enrolled).
    bool floor_at_pilot = false;
};

struct SampleSizeResult {
    long long n_total = 0;
    long long n_group1 = 0;
    long long n_group0 = 0;
    double raw_total = 0.0;
    std::optional<Method> method; // empty for design-stage sizing
    bool floor_applied = false;
};

/// Design-stage sizing for a postulated variance.
SampleSizeResult initial_sample_size(const DesignSpec& spec, double sigma2);

/// IF = (t_{n_int-2,alpha} - t_{n_int-2,1-beta})^2 / (z_alpha - z_{1-beta})^2.
double inflation_factor(int n_int, const DesignSpec& spec);

/// Re-estimated total via the method's variance estimate; rounding and floor
/// policy per module conventions (ceiling of the raw total).
SampleSizeResult reestimate(const DesignSpec& spec, const PilotSummary& pilot,
                            Method method, const ReestimateOptions& options = {});

namespace detail {

/// (1/pi + 1/(1-pi)) * ((z_alpha - z_{1-beta}) / delta)^2 * sigma2.
double raw_total_from_variance(const DesignSpec& spec, double sigma2);

/// Ceiling with a few-ulp guard so totals that are integers up to double
/// rounding are not bumped a whole unit.
long long ceil_guard(double x);

/// Group split: n1 = ceil(pi * n_total), ties resolved upward (group 1).
std::pair<long long, long long> split_total(long long n_total, double pi);

} // namespace detail

} // namespace blindssr

#endif
