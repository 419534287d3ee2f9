#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "switchlab/extrema.hpp"
#include "switchlab/processes.hpp"

namespace switchlab::profiles {

enum class Quantity { volatility, volume, intertrade };
enum class Normalization { none, per_window };

// How a sample (t, series(t)) maps onto the epsilon grid. `point` assigns it
// to the single bin containing eps(t). `span` assigns it to every bin its
// move overlaps in renormalized time, i.e. eps in [eps(t-1), eps(t)]: short
// bins near the extremum then see the adjacent conditioned move from every
// trend instead of only from trends long enough to place an integer sample
// there, which is what sustains the power-law flanks at small |eps - 1|.
enum class Sampling { point, span };

std::string to_string(Quantity q);
std::string to_string(extrema::ExtremumKind k);

struct StackOptions {
    Normalization normalization = Normalization::per_window;
    std::size_t min_duration = 5;  // trends shorter than this are skipped
    Sampling sampling = Sampling::point;
};

struct BinCell {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::uint64_t count = 0;
};

// Epsilon-stacked conditional average of one quantity around extrema of one
// kind. Counts and moments are kept per order dt so that (i) the final mean
// weights every order equally and (ii) profiles merge associatively.
struct StackedProfile {
    Quantity quantity = Quantity::volatility;
    extrema::ExtremumKind kind = extrema::ExtremumKind::maximum;
    std::size_t n_bins = 100;  // uniform bins covering [0,2]
    std::map<std::size_t, std::vector<BinCell>> per_order;

    double bin_width() const noexcept { return 2.0 / static_cast<double>(n_bins); }
    double bin_center(std::size_t b) const noexcept {
        return (static_cast<double>(b) + 0.5) * bin_width();
    }
    std::size_t bin_containing(double eps) const noexcept;

    std::uint64_t total_count() const noexcept;
    // Per-bin equal-weight-per-order average; NaN where no order has data.
    std::vector<double> mean() const;
    std::vector<std::uint64_t> count() const;
    // Standard error of the order-averaged bin mean.
    std::vector<double> std_error() const;
};

// Finalized profile samples (populated bins only) as written to CSV.
struct ProfileData {
    std::vector<double> epsilon_center;
    std::vector<double> mean;
    std::vector<std::uint64_t> count;
};

ProfileData finalize(const StackedProfile& profile);

// sigma^2(t) = dp(t)^2, aligned with the increments.
std::vector<double> local_volatility(const processes::PricePath& path);

// Accumulates the trends of one order into the profile. `series` holds the
// quantity of the increment ending at price-time i+1; the sample mapped to
// eps(t) is series[t-1]. Only trends matching the profile's conditioning
// kind (positive trends for maxima) are stacked; support is clipped to the
// series end; with per-window normalization each trend's samples are divided
// by their own support mean before binning.
void add_trends(StackedProfile& profile, std::span<const double> series, std::size_t order,
                std::span<const extrema::Trend> trends, const StackOptions& opt = {});

struct TrendsOfOrder {
    std::size_t order;
    std::vector<extrema::Trend> trends;
};

StackedProfile stack_profile(Quantity quantity, extrema::ExtremumKind kind,
                             std::span<const double> series,
                             std::span<const TrendsOfOrder> trends_by_order,
                             std::size_t n_bins, const StackOptions& opt = {});

// Count-weighted cell-wise merge; commutative, and associative up to the
// fixed left-to-right summation convention.
StackedProfile merge_profiles(const StackedProfile& a, const StackedProfile& b);

// Distribution of the increment k steps from the conditioning extremum.
struct ConditionalDistribution {
    extrema::ExtremumKind kind = extrema::ExtremumKind::maximum;
    int offset = 0;
    std::size_t n = 0;  // conditioned samples; 0 signals an empty distribution
    double cond_mean = 0.0;
    double cond_std_error = 0.0;
    double uncond_mean = 0.0;
    double min_value = 0.0;
    double max_value = 0.0;
    std::vector<double> edges;    // n_hist_bins + 1
    std::vector<double> density;  // integrates to 1
};

ConditionalDistribution conditional_increment_stats(const processes::PricePath& path,
                                                    std::span<const extrema::Extremum> extrema,
                                                    int offset, std::size_t n_hist_bins = 81);

// Same statistic computed from already-pooled conditioned increments.
ConditionalDistribution conditional_from_samples(extrema::ExtremumKind kind, int offset,
                                                 std::span<const double> samples,
                                                 double uncond_mean,
                                                 std::size_t n_hist_bins = 81);

// CSV with header epsilon_center,mean,count; populated bins only.
void write_csv(const StackedProfile& profile, std::ostream& out);
ProfileData read_profile_csv(std::istream& in);

}  // namespace switchlab::profiles
