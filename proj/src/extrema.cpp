#include "switchlab/extrema.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace switchlab::extrema {

std::vector<Extremum> find_extrema(std::span<const double> prices, std::size_t order) {
    if (order < 1) throw std::invalid_argument("find_extrema: order must be >= 1");
    if (prices.size() < 2 * order + 1)
        throw std::invalid_argument("find_extrema: series shorter than 2*order + 1");

    const std::size_t n = prices.size();
    std::vector<Extremum> maxima, minima;
    std::deque<std::size_t> max_dq, min_dq;  // indices, values monotone from the front

    for (std::size_t right = 0; right < n; ++right) {
        while (!max_dq.empty() && prices[max_dq.back()] < prices[right]) max_dq.pop_back();
        max_dq.push_back(right);
        while (!min_dq.empty() && prices[min_dq.back()] > prices[right]) min_dq.pop_back();
        min_dq.push_back(right);
        if (right < 2 * order) continue;

        const std::size_t t0 = right - order;  // window [t0-order, right] is complete
        const std::size_t lo = t0 - order;
        while (max_dq.front() < lo) max_dq.pop_front();
        while (min_dq.front() < lo) min_dq.pop_front();

        const bool first_of_plateau = prices[t0 - 1] != prices[t0];
        if (first_of_plateau && prices[t0] == prices[max_dq.front()])
            maxima.push_back({t0, ExtremumKind::maximum, order, prices[t0]});
        if (first_of_plateau && prices[t0] == prices[min_dq.front()])
            minima.push_back({t0, ExtremumKind::minimum, order, prices[t0]});
    }

    std::vector<Extremum> out;
    out.reserve(maxima.size() + minima.size());
    std::merge(maxima.begin(), maxima.end(), minima.begin(), minima.end(),
               std::back_inserter(out),
               [](const Extremum& a, const Extremum& b) { return a.t0 < b.t0; });
    return out;
}

std::vector<Trend> segment_trends(std::span<const Extremum> extrema) {
    for (std::size_t i = 1; i < extrema.size(); ++i)
        if (extrema[i].t0 <= extrema[i - 1].t0)
            throw std::invalid_argument("segment_trends: extrema must be sorted by index");

    // reduce same-kind runs to their most extreme member
    std::vector<Extremum> alternating;
    for (const Extremum& e : extrema) {
        if (!alternating.empty() && alternating.back().kind == e.kind) {
            Extremum& held = alternating.back();
            const bool more_extreme = e.kind == ExtremumKind::maximum ? e.price > held.price
                                                                      : e.price < held.price;
            if (more_extreme) held = e;
        } else {
            alternating.push_back(e);
        }
    }

    std::vector<Trend> trends;
    if (alternating.size() < 2) return trends;
    trends.reserve(alternating.size() - 1);
    for (std::size_t i = 1; i < alternating.size(); ++i) {
        const Extremum& from = alternating[i - 1];
        const Extremum& to = alternating[i];
        trends.push_back({from.t0, to.t0,
                          to.kind == ExtremumKind::maximum ? TrendSign::positive
                                                           : TrendSign::negative});
    }
    return trends;
}

EpsilonWindow epsilon_window(const Trend& trend, std::size_t series_len) {
    if (series_len == 0 || trend.peak >= series_len || trend.duration() == 0)
        throw std::invalid_argument("epsilon_window: trend does not fit the series");
    const std::size_t last = series_len - 1;
    const std::size_t eps2 = trend.start + 2 * trend.duration();
    return {trend, std::min(eps2, last), eps2 <= last};
}

}  // namespace switchlab::extrema
