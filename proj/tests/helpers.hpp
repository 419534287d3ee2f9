#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "switchlab/extrema.hpp"
#include "switchlab/processes.hpp"

namespace testutil {

inline switchlab::processes::PricePath path_from_prices(std::vector<double> prices) {
    switchlab::processes::PricePath path;
    path.increments.resize(prices.size() - 1);
    for (std::size_t i = 0; i + 1 < prices.size(); ++i)
        path.increments[i] = prices[i + 1] - prices[i];
    path.prices = std::move(prices);
    return path;
}

// Literal transcription of the window-dominance definition plus the
// first-of-plateau rule; O(n * order), kept independent of the detector.
inline std::vector<switchlab::extrema::Extremum> brute_force_extrema(
    const std::vector<double>& prices, std::size_t order) {
    using namespace switchlab::extrema;
    std::vector<Extremum> out;
    if (prices.size() < 2 * order + 1) return out;
    for (std::size_t t0 = order; t0 + order < prices.size(); ++t0) {
        if (prices[t0 - 1] == prices[t0]) continue;  // not first of its plateau
        bool is_max = true, is_min = true;
        for (std::size_t t = t0 - order; t <= t0 + order; ++t) {
            if (prices[t] > prices[t0]) is_max = false;
            if (prices[t] < prices[t0]) is_min = false;
        }
        if (is_max) out.push_back({t0, ExtremumKind::maximum, order, prices[t0]});
        if (is_min) out.push_back({t0, ExtremumKind::minimum, order, prices[t0]});
    }
    return out;
}

inline bool same_extrema(const std::vector<switchlab::extrema::Extremum>& a,
                         const std::vector<switchlab::extrema::Extremum>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].t0 != b[i].t0 || a[i].kind != b[i].kind) return false;
    return true;
}

// One-sample Kolmogorov-Smirnov distance against the standard normal CDF.
inline double ks_distance_standard_normal(std::vector<double> sample) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double cdf = 0.5 * std::erfc(-sample[i] / std::sqrt(2.0));
        d = std::max(d, std::abs(cdf - static_cast<double>(i + 1) / n));
        d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    }
    return d;
}

}  // namespace testutil
