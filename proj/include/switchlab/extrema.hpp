#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace switchlab::extrema {

enum class ExtremumKind { maximum, minimum };

// A local extremum of order dt: no higher (maxima) / lower (minima) price in
// [t0 - dt, t0 + dt], with the full window inside the series. Ties are
// allowed; of a run of adjacent equal prices only the first index qualifies.
struct Extremum {
    std::size_t t0;
    ExtremumKind kind;
    std::size_t order;
    double price;
};

enum class TrendSign { positive, negative };  // min->max, max->min

// Segment between consecutive opposite-kind extrema. `peak` is the index of
// the terminating extremum the epsilon axis is anchored to.
struct Trend {
    std::size_t start;
    std::size_t peak;
    TrendSign sign;
    std::size_t duration() const noexcept { return peak - start; }
};

// Affine renormalized-time map: eps(start) = 0, eps(peak) = 1, extending one
// trend length past the peak when the series is long enough.
struct EpsilonWindow {
    Trend trend;
    std::size_t support_end;  // last price index with eps <= 2, clipped
    bool full_range;          // whether eps = 2 lies inside the series

    double epsilon_of(std::size_t t) const noexcept {
        return (static_cast<double>(t) - static_cast<double>(trend.start)) /
               static_cast<double>(trend.duration());
    }
};

// All order-dt extrema of both kinds, sorted by index. O(n) monotonic-deque
// scan; contractually identical to the brute-force window check.
std::vector<Extremum> find_extrema(std::span<const double> prices, std::size_t order);

// Reduces same-kind runs (most extreme price wins, ties to the earliest
// index) and pairs consecutive opposite-kind extrema into alternating trends.
std::vector<Trend> segment_trends(std::span<const Extremum> extrema);

EpsilonWindow epsilon_window(const Trend& trend, std::size_t series_len);

}  // namespace switchlab::extrema
