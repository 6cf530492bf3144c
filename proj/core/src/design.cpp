#include "blindssr/design.hpp"
#include "blindssr/distributions.hpp"
#include "blindssr/errors.hpp"

#include <cmath>
#include <sstream>
#include <tuple>

namespace blindssr {

DesignSpec::DesignSpec(double alpha_, double power_target_, double delta_, double pi_)
    : alpha(alpha_), power_target(power_target_), delta(delta_), pi(pi_) {
    std::ostringstream problems;
    if (!(alpha > 0.0 && alpha < 0.5)) problems << "alpha must lie in (0, 0.5); ";
    if (!(power_target >= 0.5 && power_target < 1.0))
        problems << "power target must lie in [0.5, 1); ";
    if (!(delta > 0.0) || !std::isfinite(delta)) problems << "delta must be > 0; ";
    if (!(pi > 0.0 && pi < 1.0)) problems << "pi must lie in (0, 1); ";
    const std::string msg = problems.str();
    if (!msg.empty()) throw DomainError("invalid design: " + msg);
}

double DesignSpec::z_alpha() const { return std_normal_quantile_upper(alpha); }
double DesignSpec::z_power() const { return std_normal_quantile_upper(power_target); }

std::string_view method_name(Method m) {
    switch (m) {
        case Method::OneSample: return "one-sample";
        case Method::Adjusted: return "adjusted";
        case Method::InflationFactor: return "if";
        case Method::Proposed: return "proposed";
        case Method::Theoretical: return "theoretical";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
    if (name == "one-sample" || name == "os") return Method::OneSample;
    if (name == "adjusted" || name == "adj") return Method::Adjusted;
    if (name == "if" || name == "inflation-factor") return Method::InflationFactor;
    if (name == "proposed") return Method::Proposed;
    if (name == "theoretical") return Method::Theoretical;
    return std::nullopt;
}

namespace detail {

double raw_total_from_variance(const DesignSpec& spec, double sigma2) {
    const double zdiff = (spec.z_alpha() - spec.z_power()) / spec.delta;
    return (1.0 / spec.pi + 1.0 / (1.0 - spec.pi)) * zdiff * zdiff * sigma2;
}

long long ceil_guard(double x) {
    const double guarded = x - std::fabs(x) * 4e-15;
    return static_cast<long long>(std::ceil(guarded));
}

std::pair<long long, long long> split_total(long long n_total, double pi) {
    long long n1 = ceil_guard(pi * static_cast<double>(n_total));
    if (n1 < 1) n1 = 1;
    if (n1 > n_total - 1) n1 = n_total - 1;
    return {n1, n_total - n1};
}

} // namespace detail

SampleSizeResult initial_sample_size(const DesignSpec& spec, double sigma2) {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
        throw DomainError("sigma2 must be finite and > 0");
    SampleSizeResult r;
    r.raw_total = detail::raw_total_from_variance(spec, sigma2);
    r.n_total = std::max<long long>(2, detail::ceil_guard(r.raw_total));
    std::tie(r.n_group1, r.n_group0) = detail::split_total(r.n_total, spec.pi);
    return r;
}

double inflation_factor(int n_int, const DesignSpec& spec) {
    if (n_int < 3)
        throw InsufficientDataError("inflation factor needs n_int >= 3 (t with df = n_int - 2)");
    const double ta = t_quantile_upper(n_int - 2, spec.alpha);
    const double tb = t_quantile_upper(n_int - 2, spec.power_target);
    const double zdiff = spec.z_alpha() - spec.z_power();
    const double tdiff = ta - tb;
    return (tdiff * tdiff) / (zdiff * zdiff);
}

SampleSizeResult reestimate(const DesignSpec& spec, const PilotSummary& pilot,
                            Method method, const ReestimateOptions& options) {
    double variance = 0.0;
    switch (method) {
        case Method::OneSample:
            variance = pilot.os_variance;
            break;
        case Method::Adjusted:
            variance = adjusted_variance(pilot, spec.delta).value;
            break;
        case Method::InflationFactor:
            variance = pilot.os_variance;
            break;
        case Method::Proposed: {
            if (!options.confidence)
                throw DomainError("proposed method requires a confidence level");
            variance = conservative_upper_limit(pilot, *options.confidence).value;
            break;
        }
        case Method::Theoretical: {
            if (!options.confidence)
                throw DomainError("theoretical method requires a confidence level");
            if (!options.effect_size)
                throw DomainError("theoretical method requires the true effect size");
            variance =
                infeasible_upper_limit(pilot, *options.confidence, *options.effect_size).value;
            break;
        }
    }

    SampleSizeResult r;
    r.method = method;
    if (method == Method::InflationFactor) {
        if (pilot.n_int < 3)
            throw InsufficientDataError(
                "inflation factor needs n_int >= 3 (t with df = n_int - 2)");
        const double ta = t_quantile_upper(pilot.n_int - 2, spec.alpha);
        const double tb = t_quantile_upper(pilot.n_int - 2, spec.power_target);
        const double tdiff = (ta - tb) / spec.delta;
        r.raw_total = (1.0 / spec.pi + 1.0 / (1.0 - spec.pi)) * tdiff * tdiff * variance;
    } else {
        r.raw_total = detail::raw_total_from_variance(spec, variance);
    }

    r.n_total = std::max<long long>(2, detail::ceil_guard(r.raw_total));
    if (options.floor_at_pilot && r.n_total < pilot.n_int) {
        r.n_total = pilot.n_int;
        r.floor_applied = true;
    }
    std::tie(r.n_group1, r.n_group0) = detail::split_total(r.n_total, spec.pi);
    return r;
}

} // namespace blindssr
