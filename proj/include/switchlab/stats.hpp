#pragma once

#include <cstddef>
#include <span>
#include <utility>

namespace switchlab::stats {

struct CorrelationReport {
    double r = 0.0;
    std::size_t n = 0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double level = 0.95;
};

// Single-pass, numerically stable co-moment accumulator (Welford updates),
// usable for streaming inputs of 1e6+ points.
class PearsonAccumulator {
public:
    void add(double x, double y);
    std::size_t n() const noexcept { return n_; }
    // Throws insufficient_data when n < 3 or either input is constant.
    double r() const;

private:
    std::size_t n_ = 0;
    double mean_x_ = 0.0, mean_y_ = 0.0;
    double m2x_ = 0.0, m2y_ = 0.0, cxy_ = 0.0;
};

double pearson_corr(std::span<const double> x, std::span<const double> y);

// Fisher z interval: z = atanh(r), half-width z_crit(level)/sqrt(n-3),
// bounds tanh(z -/+ half-width).
std::pair<double, double> fisher_ci(double r, std::size_t n, double level = 0.95);

CorrelationReport correlation_report(std::span<const double> x, std::span<const double> y,
                                     double level = 0.95);

// Standardized third central moment. bias_corrected applies the
// sqrt(n(n-1))/(n-2) small-sample factor.
double skewness(std::span<const double> sample, bool bias_corrected = false);

// Inverse standard normal CDF. Hard-coded values at the common confidence
// levels, rational approximation plus one Newton step elsewhere.
double normal_quantile(double p);

}  // namespace switchlab::stats
