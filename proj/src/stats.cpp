#include "switchlab/stats.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "switchlab/errors.hpp"

namespace switchlab::stats {

void PearsonAccumulator::add(double x, double y) {
    ++n_;
    const double k = static_cast<double>(n_);
    const double dx = x - mean_x_;
    const double dy = y - mean_y_;
    mean_x_ += dx / k;
    mean_y_ += dy / k;
    m2x_ += dx * (x - mean_x_);
    m2y_ += dy * (y - mean_y_);
    cxy_ += dx * (y - mean_y_);
}

double PearsonAccumulator::r() const {
    if (n_ < 3) throw insufficient_data("pearson: need at least 3 samples");
    if (m2x_ <= 0.0 || m2y_ <= 0.0)
        throw insufficient_data("pearson: undefined correlation for constant input");
    return cxy_ / std::sqrt(m2x_ * m2y_);
}

double pearson_corr(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("pearson: input lengths differ");
    PearsonAccumulator acc;
    for (std::size_t i = 0; i < x.size(); ++i) acc.add(x[i], y[i]);
    return acc.r();
}

namespace {

// Acklam's rational approximation of the standard normal quantile.
double acklam_quantile(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double q, r;
    if (p < p_low) {
        q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        q = p - 0.5;
        r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("normal_quantile: p must lie in (0,1)");
    double x = acklam_quantile(p);
    // one Newton step against the exact CDF brings the result to ~1 ulp
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    if (pdf > 0.0) x -= (normal_cdf(x) - p) / pdf;
    return x;
}

namespace {

double critical_z(double level) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("fisher_ci: level must lie in (0,1)");
    if (std::abs(level - 0.95) < 1e-12) return 1.959963984540054;
    if (std::abs(level - 0.99) < 1e-12) return 2.575829303548901;
    if (std::abs(level - 0.90) < 1e-12) return 1.644853626951472;
    return normal_quantile(0.5 + level / 2.0);
}

}  // namespace

std::pair<double, double> fisher_ci(double r, std::size_t n, double level) {
    if (!(std::abs(r) < 1.0))
        throw std::invalid_argument("fisher_ci: |r| must be < 1");
    if (n < 4) throw insufficient_data("fisher_ci: need n >= 4");
    const double z = std::atanh(r);
    const double half = critical_z(level) / std::sqrt(static_cast<double>(n - 3));
    return {std::tanh(z - half), std::tanh(z + half)};
}

CorrelationReport correlation_report(std::span<const double> x, std::span<const double> y,
                                     double level) {
    CorrelationReport rep;
    rep.r = pearson_corr(x, y);
    rep.n = x.size();
    rep.level = level;
    std::tie(rep.ci_lo, rep.ci_hi) = fisher_ci(rep.r, rep.n, level);
    return rep;
}

double skewness(std::span<const double> sample, bool bias_corrected) {
    const std::size_t n = sample.size();
    if (n < 3) throw insufficient_data("skewness: need at least 3 samples");
    double mean = 0.0;
    for (double v : sample) mean += v;
    mean /= static_cast<double>(n);
    double m2 = 0.0, m3 = 0.0;
    for (double v : sample) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    if (m2 <= 0.0) throw insufficient_data("skewness: undefined for constant input");
    double g1 = m3 / std::pow(m2, 1.5);
    if (bias_corrected) {
        const double nd = static_cast<double>(n);
        g1 *= std::sqrt(nd * (nd - 1.0)) / (nd - 2.0);
    }
    return g1;
}

}  // namespace switchlab::stats
