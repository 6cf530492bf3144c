#include "blindssr/distributions.hpp"
#include "blindssr/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace blindssr {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

void require_finite(double x, const char* name) {
    if (!std::isfinite(x)) {
        std::ostringstream os;
        os << name << " must be finite, got " << x;
        throw DomainError(os.str());
    }
}

void require_open_unit(double p, const char* name) {
    require_finite(p, name);
    if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream os;
        os << name << " must lie in (0,1), got " << p;
        throw DomainError(os.str());
    }
}

} // namespace

CentralChiSq::CentralChiSq(int df_) : df(df_) {
    if (df < 1) throw DomainError("chi-squared degrees of freedom must be >= 1");
}

NoncentralChiSq::NoncentralChiSq(int df_, double lambda_) : df(df_), lambda(lambda_) {
    if (df < 1) throw DomainError("chi-squared degrees of freedom must be >= 1");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw DomainError("noncentrality parameter must be finite and >= 0");
}

namespace detail {

namespace {

// Series expansion of P(a,x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
    const double gln = std::lgamma(a);
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int i = 0; i < 10000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-17)
            return sum * std::exp(-x + a * std::log(x) - gln);
    }
    throw NumericError("incomplete gamma series failed to converge");
}

// Lentz continued fraction for Q(a,x), valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double gln = std::lgamma(a);
    const double eps = 1e-17;
    const double fpmin = std::numeric_limits<double>::min() / eps;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= eps)
            return std::exp(-x + a * std::log(x) - gln) * h;
    }
    throw NumericError("incomplete gamma continued fraction failed to converge");
}

} // namespace

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0)) throw DomainError("incomplete gamma requires a > 0");
    if (x <= 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0)) throw DomainError("incomplete gamma requires a > 0");
    if (x <= 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

namespace {

double beta_cf(double a, double b, double x) {
    const double eps = 1e-16;
    const double fpmin = std::numeric_limits<double>::min() / eps;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m < 10000; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    throw NumericError("incomplete beta continued fraction failed to converge");
}

} // namespace

double regularized_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete beta requires a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                               a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0))
        return bt * beta_cf(a, b, x) / a;
    return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

} // namespace detail

double std_normal_cdf(double x) {
    require_finite(x, "x");
    return 0.5 * std::erfc(-x / kSqrt2);
}

double std_normal_pdf(double x) {
    require_finite(x, "x");
    return 0.3989422804014327 * std::exp(-0.5 * x * x);
}

double std_normal_quantile_upper(double p) {
    require_open_unit(p, "p");
    const double target = 1.0 - p;
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (std_normal_cdf(mid) < target) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double chi2_cdf(const CentralChiSq& dist, double w) {
    require_finite(w, "w");
    if (w <= 0.0) return 0.0;
    return detail::regularized_gamma_p(0.5 * dist.df, 0.5 * w);
}

double chi2_pdf(const CentralChiSq& dist, double w) {
    require_finite(w, "w");
    if (w < 0.0) return 0.0;
    const double a = 0.5 * dist.df;
    if (w == 0.0) {
        if (dist.df == 1) return std::numeric_limits<double>::infinity();
        if (dist.df == 2) return 0.5;
        return 0.0;
    }
    const double x = 0.5 * w;
    return 0.5 * std::exp((a - 1.0) * std::log(x) - x - std::lgamma(a));
}

namespace {

// Bracketed bisection for a nondecreasing CDF: smallest w with cdf(w) >= target.
template <typename Cdf>
double bisect_quantile(Cdf cdf, double target, double lo, double hi) {
    for (int i = 0; i < 60 && cdf(hi) < target; ++i) {
        lo = hi;
        hi *= 2.0;
    }
    for (int i = 0; i < 300; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (cdf(mid) < target) lo = mid; else hi = mid;
        if (hi - lo <= 1e-12 * (1.0 + std::fabs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double chi2_quantile_upper(const CentralChiSq& dist, double q) {
    require_open_unit(q, "q");
    const double target = 1.0 - q;
    const double hi0 = dist.df + 10.0 * std::sqrt(2.0 * dist.df) + 50.0;
    return bisect_quantile([&](double w) { return chi2_cdf(dist, w); }, target, 0.0, hi0);
}

namespace detail {

// Poisson-weighted mixture of central chi-squared terms (Benton-Krishnamoorthy
// style two-directional walk from the Poisson mode). Truncated when the
// unvisited Poisson mass drops below tail_eps.
double noncentral_chi2_cdf_trunc(const NoncentralChiSq& dist, double w, double tail_eps) {
    require_finite(w, "w");
    if (dist.lambda == 0.0) return chi2_cdf(CentralChiSq(dist.df), w);
    if (w <= 0.0) return 0.0;

    const double x = 0.5 * w;
    const double hl = 0.5 * dist.lambda;
    const int j0 = static_cast<int>(hl);
    const double a0 = 0.5 * dist.df + j0;

    const double pois0 = std::exp(-hl + j0 * std::log(hl) - std::lgamma(j0 + 1.0));
    const double cdf0 = regularized_gamma_p(a0, x);
    // g(a) = x^a e^{-x} / Gamma(a+1) = P(a, x) - P(a+1, x)
    double g_up = std::exp(a0 * std::log(x) - x - std::lgamma(a0 + 1.0));

    double sum = pois0 * cdf0;
    double mass = pois0;

    // Downward: j0-1 .. 0. Central CDF grows toward 1.
    {
        double pois = pois0;
        double cdf = cdf0;
        double g = g_up * a0 / x; // g(a0 - 1)
        for (int j = j0 - 1; j >= 0; --j) {
            pois *= (j + 1.0) / hl;
            cdf += g;
            if (cdf > 1.0) cdf = 1.0;
            sum += pois * cdf;
            mass += pois;
            g *= (0.5 * dist.df + j) / x;
            if (pois * cdf < 1e-18 && cdf > 0.999) break; // remaining terms negligible
        }
    }

    // Upward: j0+1, ... Central CDF shrinks toward 0.
    {
        double pois = pois0;
        double cdf = cdf0;
        double g = g_up;
        for (int j = j0 + 1; j < j0 + 100000; ++j) {
            pois *= hl / j;
            cdf -= g;
            if (cdf < 0.0) cdf = 0.0;
            sum += pois * cdf;
            mass += pois;
            g *= x / (0.5 * dist.df + j);
            if (1.0 - mass < tail_eps) break;
            if (cdf == 0.0) break;
        }
    }

    if (sum < 0.0) sum = 0.0;
    if (sum > 1.0) sum = 1.0;
    return sum;
}

double noncentral_chi2_pdf_trunc(const NoncentralChiSq& dist, double w, double tail_eps) {
    if (!(w >= 0.0) || !std::isfinite(w))
        throw DomainError("noncentral chi-squared pdf requires w >= 0");
    if (dist.lambda == 0.0) return chi2_pdf(CentralChiSq(dist.df), w);
    if (w == 0.0) {
        if (dist.df == 1) return std::numeric_limits<double>::infinity();
        if (dist.df == 2) return 0.5 * std::exp(-0.5 * dist.lambda);
        return 0.0;
    }

    const double x = 0.5 * w;
    const double hl = 0.5 * dist.lambda;
    const int j0 = static_cast<int>(hl);
    const double a0 = 0.5 * dist.df + j0;

    const double pois0 = std::exp(-hl + j0 * std::log(hl) - std::lgamma(j0 + 1.0));
    // Central chi-squared pdf with df + 2*j0 degrees of freedom at w.
    const double pdf0 = 0.5 * std::exp((a0 - 1.0) * std::log(x) - x - std::lgamma(a0));

    double sum = pois0 * pdf0;
    double mass = pois0;

    {
        double pois = pois0;
        double pdf = pdf0;
        for (int j = j0 - 1; j >= 0; --j) {
            pois *= (j + 1.0) / hl;
            pdf *= (0.5 * dist.df + j) / x;
            sum += pois * pdf;
            mass += pois;
        }
    }
    {
        double pois = pois0;
        double pdf = pdf0;
        for (int j = j0 + 1; j < j0 + 100000; ++j) {
            pois *= hl / j;
            pdf *= x / (0.5 * dist.df + j - 1.0);
            sum += pois * pdf;
            mass += pois;
            if (1.0 - mass < tail_eps) break;
        }
    }
    return sum;
}

} // namespace detail

double noncentral_chi2_cdf(const NoncentralChiSq& dist, double w) {
    return detail::noncentral_chi2_cdf_trunc(dist, w, 1e-14);
}

double noncentral_chi2_pdf(const NoncentralChiSq& dist, double w) {
    return detail::noncentral_chi2_pdf_trunc(dist, w, 1e-14);
}

double noncentral_chi2_quantile_upper(const NoncentralChiSq& dist, double q) {
    require_open_unit(q, "q");
    const double target = 1.0 - q;
    const double mean = dist.df + dist.lambda;
    const double sd = std::sqrt(2.0 * (dist.df + 2.0 * dist.lambda));
    const double hi0 = mean + 10.0 * sd + 50.0;
    return bisect_quantile([&](double w) { return noncentral_chi2_cdf(dist, w); },
                           target, 0.0, hi0);
}

double t_cdf(int df, double x) {
    if (df < 1) throw DomainError("t distribution requires df >= 1");
    require_finite(x, "x");
    if (x == 0.0) return 0.5;
    const double p = detail::regularized_beta(0.5 * df, 0.5, df / (df + x * x));
    return x > 0.0 ? 1.0 - 0.5 * p : 0.5 * p;
}

double t_quantile_upper(int df, double p) {
    if (df < 1) throw DomainError("t distribution requires df >= 1");
    require_open_unit(p, "p");
    if (p == 0.5) return 0.0;
    if (p > 0.5) return -t_quantile_upper(df, 1.0 - p);
    const double target = 1.0 - p;
    return bisect_quantile([&](double x) { return t_cdf(df, x); }, target, 0.0, 1.0);
}

} // namespace blindssr
