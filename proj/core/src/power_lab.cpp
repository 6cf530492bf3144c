#include "blindssr/power_lab.hpp"
#include "blindssr/distributions.hpp"
#include "blindssr/errors.hpp"
#include "blindssr/quadrature.hpp"
#include "blindssr/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <unordered_map>
#include <vector>

namespace blindssr {

TruthScenario::TruthScenario(double mu1_, double mu0_, double sigma2_)
    : mu1(mu1_), mu0(mu0_), sigma2(sigma2_) {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
        throw DomainError("scenario sigma2 must be finite and > 0");
    if (!std::isfinite(mu1) || !std::isfinite(mu0))
        throw DomainError("scenario means must be finite");
}

double TruthScenario::effect_size() const { return delta_true() / std::sqrt(sigma2); }

double TruthScenario::noncentrality(int n1_int, int n0_int) const {
    const double es = effect_size();
    const double n = n1_int + n0_int;
    return es * es * n1_int * n0_int / n;
}

double asymptotic_conditional_power(double n_fin, const TruthScenario& scenario,
                                    const DesignSpec& spec) {
    if (!(n_fin > 0.0)) throw DomainError("n_fin must be > 0");
    const double za = spec.z_alpha();
    const double unit_var = scenario.sigma2 * (1.0 / spec.pi + 1.0 / (1.0 - spec.pi)) / n_fin;
    return 1.0 - std_normal_cdf(za - scenario.delta_true() / std::sqrt(unit_var));
}

namespace {

double marginal_power(double d_quantile, int n1_int, int n0_int,
                      const TruthScenario& scenario, const DesignSpec& spec) {
    const int n_int = n1_int + n0_int;
    const NoncentralChiSq mix(n_int - 1, scenario.noncentrality(n1_int, n0_int));
    const double za = spec.z_alpha();
    const double k = std::fabs(za - spec.z_power());
    const double ratio = scenario.delta_true() / spec.delta;
    const double w_max = noncentral_chi2_quantile_upper(mix, 1e-12);

    const auto integrand = [&](double w) {
        return std_normal_cdf(za - ratio * k * std::sqrt(w / d_quantile)) *
               noncentral_chi2_pdf(mix, w);
    };
    const QuadratureResult q = integrate_adaptive(integrand, 0.0, w_max, 1e-9);
    return 1.0 - q.value;
}

} // namespace

double asymptotic_power_proposed(double confidence, int n1_int, int n0_int,
                                 const TruthScenario& scenario, const DesignSpec& spec) {
    if (n1_int < 1 || n0_int < 1) throw DomainError("interim group counts must be >= 1");
    const int n_int = n1_int + n0_int;
    if (n_int < 2) throw InsufficientDataError("needs n_int >= 2");
    const double d = chi2_quantile_upper(CentralChiSq(n_int - 1), confidence);
    return marginal_power(d, n1_int, n0_int, scenario, spec);
}

double asymptotic_power_theoretical(double confidence, int n1_int, int n0_int,
                                    const TruthScenario& scenario, const DesignSpec& spec) {
    if (n1_int < 1 || n0_int < 1) throw DomainError("interim group counts must be >= 1");
    const int n_int = n1_int + n0_int;
    if (n_int < 2) throw InsufficientDataError("needs n_int >= 2");
    const double lambda = scenario.noncentrality(n1_int, n0_int);
    const double d =
        noncentral_chi2_quantile_upper(NoncentralChiSq(n_int - 1, lambda), confidence);
    return marginal_power(d, n1_int, n0_int, scenario, spec);
}

namespace {

constexpr std::uint64_t kChunkSize = 4096;

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("BLINDSSR_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Runs body(chunk_index, first_replicate, count) over all chunks; chunks are
/// claimed through an atomic counter, so any schedule visits each exactly once.
template <typename Body>
void run_chunked(std::uint64_t replicates, int threads, Body body) {
    const std::uint64_t n_chunks = (replicates + kChunkSize - 1) / kChunkSize;
    const int n_threads =
        static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), n_chunks));
    std::atomic<std::uint64_t> next{0};
    const auto worker = [&] {
        for (;;) {
            const std::uint64_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            const std::uint64_t first = c * kChunkSize;
            const std::uint64_t count = std::min(kChunkSize, replicates - first);
            body(c, first, count);
        }
    };
    if (n_threads <= 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

double kahan_mean(const std::vector<double>& xs) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum / static_cast<double>(xs.size());
}

double kahan_sd(const std::vector<double>& xs, double mean) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        const double sq = (x - mean) * (x - mean);
        const double y = sq - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return std::sqrt(sum / static_cast<double>(xs.size() - 1));
}

/// Type-7 quantile (linear interpolation between order statistics).
double sorted_quantile(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double pos = p * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= n) return sorted[n - 1];
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

NfinSummary summarize(std::vector<double>& values) {
    NfinSummary s;
    s.mean = kahan_mean(values);
    s.sd = values.size() > 1 ? kahan_sd(values, s.mean) : 0.0;
    std::sort(values.begin(), values.end());
    s.q1 = sorted_quantile(values, 0.25);
    s.median = sorted_quantile(values, 0.50);
    s.q3 = sorted_quantile(values, 0.75);
    return s;
}

struct MethodMap {
    // raw_total = scale * os_variance for every method except Adjusted, which
    // first subtracts the fixed bias term.
    double scale = 0.0;
    double bias = 0.0; // Adjusted only
};

MethodMap make_method_map(Method method, const DesignSpec& spec,
                          const TruthScenario& scenario, int n1_int, int n0_int,
                          const std::optional<double>& confidence) {
    const int n_int = n1_int + n0_int;
    const double base = detail::raw_total_from_variance(spec, 1.0);
    MethodMap m;
    switch (method) {
        case Method::OneSample:
            m.scale = base;
            break;
        case Method::Adjusted: {
            m.scale = base;
            m.bias = spec.delta * spec.delta * n1_int * n0_int /
                     (static_cast<double>(n_int) * (n_int - 1.0));
            break;
        }
        case Method::InflationFactor: {
            if (n_int < 3)
                throw InsufficientDataError(
                    "inflation factor needs n_int >= 3 (t with df = n_int - 2)");
            const double ta = t_quantile_upper(n_int - 2, spec.alpha);
            const double tb = t_quantile_upper(n_int - 2, spec.power_target);
            const double tdiff = (ta - tb) / spec.delta;
            m.scale = (1.0 / spec.pi + 1.0 / (1.0 - spec.pi)) * tdiff * tdiff;
            break;
        }
        case Method::Proposed: {
            if (!confidence) throw DomainError("proposed method requires a confidence level");
            const double d = chi2_quantile_upper(CentralChiSq(n_int - 1), *confidence);
            m.scale = base * static_cast<double>(n_int - 1) / d;
            break;
        }
        case Method::Theoretical: {
            if (!confidence)
                throw DomainError("theoretical method requires a confidence level");
            const double lambda = scenario.noncentrality(n1_int, n0_int);
            const double d = noncentral_chi2_quantile_upper(
                NoncentralChiSq(n_int - 1, lambda), *confidence);
            m.scale = base * static_cast<double>(n_int - 1) / d;
            break;
        }
    }
    return m;
}

double raw_total_for(const MethodMap& m, double os_variance) {
    const double v = std::max(0.0, os_variance - m.bias);
    return m.scale * v;
}

/// Per-thread cache of upper-tail t critical values keyed by df.
struct TCritCache {
    double alpha;
    std::unordered_map<int, double> by_df;
    double get(int df) {
        const auto it = by_df.find(df);
        if (it != by_df.end()) return it->second;
        const double v = t_quantile_upper(df, alpha);
        by_df.emplace(df, v);
        return v;
    }
};

} // namespace

SimulationReport simulate_trials(Method method, const TruthScenario& scenario,
                                 const DesignSpec& spec, int n1_int, int n0_int,
                                 std::uint64_t replicates, std::uint64_t seed,
                                 const SimOptions& options) {
    if (n1_int < 1 || n0_int < 1) throw DomainError("interim group counts must be >= 1");
    if (replicates < 1) throw DomainError("replicates must be >= 1");
    const int n_int = n1_int + n0_int;
    const MethodMap map = make_method_map(method, spec, scenario, n1_int, n0_int,
                                          options.confidence);

    const double sd = std::sqrt(scenario.sigma2);
    const std::uint64_t n_chunks = (replicates + kChunkSize - 1) / kChunkSize;
    std::vector<double> n1_values(replicates);
    std::vector<std::uint32_t> rejects(n_chunks, 0);
    const int threads = resolve_threads(options.threads);

    run_chunked(replicates, threads, [&](std::uint64_t chunk, std::uint64_t first,
                                         std::uint64_t count) {
        Xoshiro256pp rng(seed, chunk);
        TCritCache tcrit{spec.alpha, {}};
        std::vector<double> g1, g0;
        g1.reserve(256);
        g0.reserve(256);
        std::uint32_t chunk_rejects = 0;

        for (std::uint64_t r = 0; r < count; ++r) {
            g1.clear();
            g0.clear();
            for (int i = 0; i < n1_int; ++i) g1.push_back(rng.normal(scenario.mu1, sd));
            for (int i = 0; i < n0_int; ++i) g0.push_back(rng.normal(scenario.mu0, sd));

            // Blinded one-sample variance over the pooled interim outcomes.
            double mean = 0.0;
            for (double y : g1) mean += y;
            for (double y : g0) mean += y;
            mean /= static_cast<double>(n_int);
            double ss = 0.0;
            for (double y : g1) ss += (y - mean) * (y - mean);
            for (double y : g0) ss += (y - mean) * (y - mean);
            const double s2os = ss / static_cast<double>(n_int - 1);

            const double raw = raw_total_for(map, s2os);
            // Pilot subjects are enrolled; the pooled t test needs df >= 1.
            long long n_total = std::max<long long>(3, detail::ceil_guard(raw));
            if (n_total < n_int) n_total = n_int;

            long long n1_fin, n0_fin;
            if (options.binomial_allocation) {
                long long extra1 = 0;
                const long long extra = n_total - n_int;
                for (long long i = 0; i < extra; ++i)
                    if (rng.uniform01() < spec.pi) ++extra1;
                n1_fin = n1_int + extra1;
                n0_fin = n0_int + (extra - extra1);
            } else {
                std::tie(n1_fin, n0_fin) = detail::split_total(n_total, spec.pi);
                if (n1_fin < n1_int) n1_fin = n1_int;
                if (n0_fin < n0_int) n0_fin = n0_int;
            }
            const long long n_fin = n1_fin + n0_fin;

            for (long long i = n1_int; i < n1_fin; ++i)
                g1.push_back(rng.normal(scenario.mu1, sd));
            for (long long i = n0_int; i < n0_fin; ++i)
                g0.push_back(rng.normal(scenario.mu0, sd));

            double m1 = 0.0, m0 = 0.0;
            for (double y : g1) m1 += y;
            for (double y : g0) m0 += y;
            m1 /= static_cast<double>(g1.size());
            m0 /= static_cast<double>(g0.size());
            double pooled_ss = 0.0;
            for (double y : g1) pooled_ss += (y - m1) * (y - m1);
            for (double y : g0) pooled_ss += (y - m0) * (y - m0);
            const double s2fin = pooled_ss / static_cast<double>(n_fin - 2);
            const double t_stat =
                (m1 - m0) / std::sqrt(s2fin * (1.0 / static_cast<double>(n1_fin) +
                                               1.0 / static_cast<double>(n0_fin)));
            if (t_stat >= tcrit.get(static_cast<int>(n_fin - 2))) ++chunk_rejects;

            n1_values[first + r] = static_cast<double>(n1_fin);
        }
        rejects[chunk] = chunk_rejects;
    });

    std::uint64_t total_rejects = 0;
    for (std::uint32_t c : rejects) total_rejects += c;

    SimulationReport report;
    report.replicates = replicates;
    report.seed = seed;
    report.method = method;
    report.scenario = scenario;
    report.n1_int = n1_int;
    report.n0_int = n0_int;
    report.confidence = options.confidence;
    const double rate = static_cast<double>(total_rejects) / static_cast<double>(replicates);
    report.rejection = RejectionSummary{
        rate, std::sqrt(rate * (1.0 - rate) / static_cast<double>(replicates))};
    report.n_fin = summarize(n1_values);
    return report;
}

SimulationReport sample_size_distribution(Method method, const TruthScenario& scenario,
                                          const DesignSpec& spec, int n1_int, int n0_int,
                                          std::uint64_t replicates, std::uint64_t seed,
                                          const SimOptions& options) {
    if (n1_int < 1 || n0_int < 1) throw DomainError("interim group counts must be >= 1");
    if (replicates < 1) throw DomainError("replicates must be >= 1");
    const int n_int = n1_int + n0_int;
    const int df = n_int - 1;
    const MethodMap map = make_method_map(method, spec, scenario, n1_int, n0_int,
                                          options.confidence);
    const double lambda = scenario.noncentrality(n1_int, n0_int);

    std::vector<double> values(replicates);
    const int threads = resolve_threads(options.threads);

    run_chunked(replicates, threads, [&](std::uint64_t chunk, std::uint64_t first,
                                         std::uint64_t count) {
        Xoshiro256pp rng(seed, chunk);
        for (std::uint64_t r = 0; r < count; ++r) {
            const double w = rng.noncentral_chi_squared(df, lambda);
            const double s2os = scenario.sigma2 * w / static_cast<double>(df);
            const double raw_total = raw_total_for(map, s2os);
            // Continuous per-group value, floored at the enrolled pilot count.
            const double raw_g1 = spec.pi * raw_total;
            values[first + r] = std::max(raw_g1, static_cast<double>(n1_int));
        }
    });

    SimulationReport report;
    report.replicates = replicates;
    report.seed = seed;
    report.method = method;
    report.scenario = scenario;
    report.n1_int = n1_int;
    report.n0_int = n0_int;
    report.confidence = options.confidence;
    report.n_fin = summarize(values);
    return report;
}

} // namespace blindssr
