#ifndef BLINDSSR_DISTRIBUTIONS_HPP
#define BLINDSSR_DISTRIBUTIONS_HPP

#include <cstdint>

namespace blindssr {

/// Central chi-squared distribution with integer degrees of freedom.
struct CentralChiSq {
    int df;
    explicit CentralChiSq(int df_);
};

/// Noncentral chi-squared distribution; lambda = 0 reduces to the central case.
struct NoncentralChiSq {
    int df;
    double lambda;
    NoncentralChiSq(int df_, double lambda_);
};

// Standard normal.
double std_normal_cdf(double x);
double std_normal_pdf(double x);
/// z_p with P(Z >= z_p) = p. Negative for p > 0.5.
double std_normal_quantile_upper(double p);

// Central chi-squared.
double chi2_cdf(const CentralChiSq& dist, double w);
double chi2_pdf(const CentralChiSq& dist, double w);
/// d with P(W >= d) = q, i.e. chi2_cdf(dist, d) = 1 - q.
double chi2_quantile_upper(const CentralChiSq& dist, double q);

// Noncentral chi-squared (Poisson mixture of central distributions).
double noncentral_chi2_cdf(const NoncentralChiSq& dist, double w);
double noncentral_chi2_pdf(const NoncentralChiSq& dist, double w);
double noncentral_chi2_quantile_upper(const NoncentralChiSq& dist, double q);

// Student t.
double t_cdf(int df, double x);
/// Upper-tail quantile: x with P(T >= x) = p.
double t_quantile_upper(int df, double p);

namespace detail {

/// Regularized lower incomplete gamma P(a, x); series/continued-fraction split at x = a + 1.
double regularized_gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);
/// Regularized incomplete beta I_x(a, b) via Lentz continued fraction.
double regularized_beta(double a, double b, double x);

/// Noncentral CDF with an explicit Poisson-mixture truncation threshold
/// (total untouched Poisson mass < tail_eps). Exposed for truncation-stability tests.
double noncentral_chi2_cdf_trunc(const NoncentralChiSq& dist, double w, double tail_eps);
double noncentral_chi2_pdf_trunc(const NoncentralChiSq& dist, double w, double tail_eps);

} // namespace detail

} // namespace blindssr

#endif
