#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "switchlab/stats.hpp"

namespace switchlab::ingest {

struct TickRecord {
    std::int64_t timestamp_ms;
    double price;
    double volume;
};

// Parsed transaction ticks plus the derived series aligned with the moves:
// for the move ending at record t (t >= 1), price_increments[t-1],
// volumes[t-1] (the volume of that trade) and intertrade_ms[t-1]
// (timestamp difference; zeros are book-walking bursts, preserved exactly).
struct TickSeries {
    std::vector<TickRecord> records;
    std::vector<double> price_increments;
    std::vector<double> volumes;
    std::vector<double> intertrade_ms;
};

struct ParseOptions {
    char delimiter = ',';
};

// Header `timestamp,price,volume` required; UTF-8, LF or CRLF. Timestamps
// are integer milliseconds, non-decreasing; price and volume must be > 0.
// Violations raise data_error naming the 1-based line.
TickSeries parse_ticks(std::istream& in, const ParseOptions& opt = {});

// Identical format back out: timestamps and volumes exact, prices at full
// round-trip precision.
void write_ticks(const TickSeries& series, std::ostream& out, const ParseOptions& opt = {});

TickSeries make_series(std::vector<TickRecord> records);

struct ZeroIntervalSummary {
    double overall_fraction;      // share of tau == 0 among all intervals
    double conditional_fraction;  // share of tau == 0 among nonzero same-sign continuations
    std::size_t n_intervals;
    std::size_t n_conditional;
};

ZeroIntervalSummary zero_interval_fraction(const TickSeries& series);

struct TickCorrelations {
    stats::CorrelationReport signed_vs_volume;  // (dp, v)
    stats::CorrelationReport abs_vs_volume;     // (|dp|, v)
};

TickCorrelations corr_report(const TickSeries& series, double level = 0.95);

}  // namespace switchlab::ingest
