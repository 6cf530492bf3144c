#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "blindssr/design.hpp"
#include "blindssr/distributions.hpp"
#include "blindssr/errors.hpp"
#include "blindssr/rng.hpp"

#include <cmath>

using namespace blindssr;

namespace {
const DesignSpec kTable3Spec(0.025, 0.80, 1.0, 0.5);
}

TEST_CASE("design-stage sample sizes reproduce the published grid") {
    CHECK(initial_sample_size(kTable3Spec, 2.038).n_group1 == 32);
    CHECK(initial_sample_size(kTable3Spec, 4.013).n_group1 == 63);
    CHECK(initial_sample_size(kTable3Spec, 11.08).n_group1 == 174);
    CHECK(initial_sample_size(kTable3Spec, 2.038).n_total == 64);

    // Clinical case-study design stages.
    const DesignSpec pancreatitis(0.025, 0.85, 4.5e-4, 0.5);
    CHECK(initial_sample_size(pancreatitis, 1.35e-7).n_total == 24);
    const DesignSpec parkinsons(0.025, 0.80, 0.40, 0.5);
    CHECK(initial_sample_size(parkinsons, 0.362).n_total == 72);

    CHECK_THROWS_AS(initial_sample_size(kTable3Spec, 0.0), DomainError);
}

TEST_CASE("re-estimation reproduces the case studies") {
    const DesignSpec parkinsons(0.025, 0.80, 0.40, 0.5);
    const PilotSummary parkinsons_pilot(11, 11, 0.192);
    CHECK(reestimate(parkinsons, parkinsons_pilot, Method::OneSample).n_total == 38);
    ReestimateOptions opts;
    opts.confidence = 0.57;
    CHECK(reestimate(parkinsons, parkinsons_pilot, Method::Proposed, opts).n_total == 42);

    const DesignSpec pancreatitis(0.025, 0.85, 4.5e-4, 0.5);
    const PilotSummary pancreatitis_printed(6, 6, 3.67e-7);
    ReestimateOptions opts2;
    opts2.confidence = 0.62;
    CHECK(reestimate(pancreatitis, pancreatitis_printed, Method::Proposed, opts2).n_total == 80);

    // The trial's own one-sample figure: variance reconstructed exactly from
    // the reported 65 (the printed 3.67e-7 is its 3-significant-digit display).
    const double factor = detail::raw_total_from_variance(pancreatitis, 1.0);
    const PilotSummary pancreatitis_exact(6, 6, 65.0 / factor);
    CHECK(reestimate(pancreatitis, pancreatitis_exact, Method::OneSample).n_total == 65);
}

TEST_CASE("inflation factor") {
    // t -> z for large pilots.
    CHECK(inflation_factor(10000, kTable3Spec) == doctest::Approx(1.0).epsilon(1e-3));

    // Small pilots inflate; direct evaluation against the t-quantile identity.
    const double if4 = inflation_factor(4, kTable3Spec);
    CHECK(if4 > 1.0);
    const double ta = t_quantile_upper(2, 0.025);
    const double tb = t_quantile_upper(2, 0.80);
    const double za = std_normal_quantile_upper(0.025);
    const double zb = std_normal_quantile_upper(0.80);
    CHECK(if4 == doctest::Approx((ta - tb) * (ta - tb) / ((za - zb) * (za - zb)))
                     .epsilon(1e-12));

    // The inflation-factor raw total is exactly IF times the one-sample one.
    const PilotSummary pilot(5, 5, 1.3);
    const double raw_if = reestimate(kTable3Spec, pilot, Method::InflationFactor).raw_total;
    const double raw_os = reestimate(kTable3Spec, pilot, Method::OneSample).raw_total;
    CHECK(raw_if / raw_os == doctest::Approx(inflation_factor(10, kTable3Spec)).epsilon(1e-12));

    CHECK_THROWS_AS(inflation_factor(2, kTable3Spec), InsufficientDataError);
    const PilotSummary tiny(1, 1, 1.0);
    CHECK_THROWS_AS(reestimate(kTable3Spec, tiny, Method::InflationFactor),
                    InsufficientDataError);
}

TEST_CASE("method ordering at a common pilot") {
    for (double conf : {0.5, 0.57, 0.65}) {
        for (int nz : {3, 6, 15}) {
            const PilotSummary pilot(nz, nz, 1.9);
            ReestimateOptions opts;
            opts.confidence = conf;
            opts.effect_size = 0.6;
            const double prop = reestimate(kTable3Spec, pilot, Method::Proposed, opts).raw_total;
            const double os = reestimate(kTable3Spec, pilot, Method::OneSample).raw_total;
            const double adj = reestimate(kTable3Spec, pilot, Method::Adjusted).raw_total;
            const double theo =
                reestimate(kTable3Spec, pilot, Method::Theoretical, opts).raw_total;
            CHECK(prop > os);
            CHECK(os >= adj);
            CHECK(theo <= prop + 1e-12);
        }
    }
}

TEST_CASE("homogeneity of the raw totals") {
    const PilotSummary pilot(8, 8, 1.0);
    const PilotSummary pilot3(8, 8, 3.0);
    const double r1 = reestimate(kTable3Spec, pilot, Method::OneSample).raw_total;
    const double r3 = reestimate(kTable3Spec, pilot3, Method::OneSample).raw_total;
    CHECK(r3 == doctest::Approx(3.0 * r1).epsilon(1e-12));

    const DesignSpec half_delta(0.025, 0.80, 0.5, 0.5);
    const double rh = reestimate(half_delta, pilot, Method::OneSample).raw_total;
    CHECK(rh == doctest::Approx(4.0 * r1).epsilon(1e-12));
}

TEST_CASE("allocation consistency") {
    for (double pi : {0.3, 0.5, 0.62, 0.75}) {
        const DesignSpec spec(0.025, 0.80, 0.4, pi);
        const SampleSizeResult r = initial_sample_size(spec, 5.0);
        CHECK(r.n_group1 + r.n_group0 == r.n_total);
        CHECK(std::fabs(static_cast<double>(r.n_group1) / r.n_total - pi) <
              1.0 / r.n_total + 1e-12);
    }
    // pi = 0.5 with an even total gives exactly equal groups.
    const SampleSizeResult even = initial_sample_size(kTable3Spec, 2.038);
    CHECK(even.n_group1 == even.n_group0);
}

TEST_CASE("rounding is conservative") {
    Xoshiro256pp rng(99, 0);
    for (int i = 0; i < 2000; ++i) {
        const double sigma2 = 0.05 + 30.0 * rng.uniform01();
        const SampleSizeResult r = initial_sample_size(kTable3Spec, sigma2);
        CHECK(static_cast<double>(r.n_total) >= r.raw_total * (1.0 - 1e-12));
        CHECK(r.n_total >= 2);
    }
}

TEST_CASE("floor policy") {
    // A tiny interim variance re-estimates below the pilot size.
    const PilotSummary pilot(10, 10, 1e-4);
    const SampleSizeResult unrestricted = reestimate(kTable3Spec, pilot, Method::OneSample);
    CHECK(unrestricted.n_total < pilot.n_int);
    CHECK(!unrestricted.floor_applied);

    ReestimateOptions opts;
    opts.floor_at_pilot = true;
    const SampleSizeResult floored =
        reestimate(kTable3Spec, pilot, Method::OneSample, opts);
    CHECK(floored.n_total == pilot.n_int);
    CHECK(floored.floor_applied);

    // Floor inactive when the re-estimate clears the pilot.
    const PilotSummary big(10, 10, 5.0);
    const SampleSizeResult clear = reestimate(kTable3Spec, big, Method::OneSample, opts);
    CHECK(clear.n_total > pilot.n_int);
    CHECK(!clear.floor_applied);
}

TEST_CASE("option validation") {
    const PilotSummary pilot(5, 5, 1.0);
    CHECK_THROWS_AS(reestimate(kTable3Spec, pilot, Method::Proposed), DomainError);
    ReestimateOptions opts;
    opts.confidence = 0.6;
    CHECK_THROWS_AS(reestimate(kTable3Spec, pilot, Method::Theoretical, opts), DomainError);
    CHECK_THROWS_AS(DesignSpec(0.0, 0.8, 1.0, 0.5), DomainError);
    CHECK_THROWS_AS(DesignSpec(0.025, 0.4, 1.0, 0.5), DomainError);
    CHECK_THROWS_AS(DesignSpec(0.025, 0.8, -1.0, 0.5), DomainError);
    CHECK_THROWS_AS(DesignSpec(0.025, 0.8, 1.0, 1.0), DomainError);
}

TEST_CASE("method names round trip") {
    for (Method m : {Method::OneSample, Method::Adjusted, Method::InflationFactor,
                     Method::Proposed, Method::Theoretical}) {
        CHECK(parse_method(method_name(m)) == m);
    }
    CHECK(!parse_method("bogus"));
}
