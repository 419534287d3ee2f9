#include "switchlab/ingest.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <tuple>

#include "switchlab/errors.hpp"

namespace switchlab::ingest {

namespace {

std::vector<std::string> split_fields(const std::string& line, char delim) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(delim, start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

template <class T>
T parse_number(const std::string& field, const char* what, long line_no) {
    T value{};
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end)
        throw data_error(std::string("malformed ") + what + " '" + field + "'", line_no);
    return value;
}

}  // namespace

TickSeries make_series(std::vector<TickRecord> records) {
    TickSeries s;
    s.records = std::move(records);
    if (s.records.size() < 2) return s;
    const std::size_t m = s.records.size() - 1;
    s.price_increments.resize(m);
    s.volumes.resize(m);
    s.intertrade_ms.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        s.price_increments[i] = s.records[i + 1].price - s.records[i].price;
        s.volumes[i] = s.records[i + 1].volume;
        s.intertrade_ms[i] =
            static_cast<double>(s.records[i + 1].timestamp_ms - s.records[i].timestamp_ms);
    }
    return s;
}

TickSeries parse_ticks(std::istream& in, const ParseOptions& opt) {
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw data_error("missing header line");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    {
        const auto header = split_fields(line, opt.delimiter);
        if (header.size() != 3 || header[0] != "timestamp" || header[1] != "price" ||
            header[2] != "volume")
            throw data_error("expected header timestamp" + std::string(1, opt.delimiter) +
                                 "price" + std::string(1, opt.delimiter) + "volume",
                             line_no);
    }

    std::vector<TickRecord> records;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_fields(line, opt.delimiter);
        if (fields.size() != 3) throw data_error("expected 3 fields", line_no);
        TickRecord rec;
        rec.timestamp_ms = parse_number<std::int64_t>(fields[0], "timestamp", line_no);
        rec.price = parse_number<double>(fields[1], "price", line_no);
        rec.volume = parse_number<double>(fields[2], "volume", line_no);
        if (!(rec.price > 0.0) || !std::isfinite(rec.price))
            throw data_error("price must be positive, got '" + fields[1] + "'", line_no);
        if (!(rec.volume > 0.0) || !std::isfinite(rec.volume))
            throw data_error("volume must be positive, got '" + fields[2] + "'", line_no);
        if (!records.empty() && rec.timestamp_ms < records.back().timestamp_ms)
            throw data_error("timestamps must be non-decreasing", line_no);
        records.push_back(rec);
    }
    return make_series(std::move(records));
}

namespace {

void write_double(std::ostream& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, res.ptr - buf);
}

}  // namespace

void write_ticks(const TickSeries& series, std::ostream& out, const ParseOptions& opt) {
    out << "timestamp" << opt.delimiter << "price" << opt.delimiter << "volume\n";
    for (const TickRecord& rec : series.records) {
        out << rec.timestamp_ms << opt.delimiter;
        write_double(out, rec.price);
        out << opt.delimiter;
        write_double(out, rec.volume);
        out.put('\n');
    }
}

ZeroIntervalSummary zero_interval_fraction(const TickSeries& series) {
    if (series.records.size() < 2)
        throw insufficient_data("zero_interval_fraction: need at least 2 records");
    ZeroIntervalSummary s{0.0, 0.0, series.intertrade_ms.size(), 0};
    std::size_t zeros = 0, cond_zeros = 0;
    int prev_sign = 0;
    for (std::size_t i = 0; i < series.intertrade_ms.size(); ++i) {
        const bool zero = series.intertrade_ms[i] == 0.0;
        if (zero) ++zeros;
        const double dp = series.price_increments[i];
        const int sign = (dp > 0.0) - (dp < 0.0);
        if (sign != 0) {
            if (sign == prev_sign) {
                ++s.n_conditional;
                if (zero) ++cond_zeros;
            }
            prev_sign = sign;
        }
    }
    s.overall_fraction = static_cast<double>(zeros) / static_cast<double>(s.n_intervals);
    s.conditional_fraction =
        s.n_conditional == 0
            ? 0.0
            : static_cast<double>(cond_zeros) / static_cast<double>(s.n_conditional);
    return s;
}

TickCorrelations corr_report(const TickSeries& series, double level) {
    if (series.records.size() < 4)
        throw insufficient_data("corr_report: need at least 4 ticks");
    stats::PearsonAccumulator signed_acc, abs_acc;
    for (std::size_t i = 0; i < series.price_increments.size(); ++i) {
        signed_acc.add(series.price_increments[i], series.volumes[i]);
        abs_acc.add(std::abs(series.price_increments[i]), series.volumes[i]);
    }
    TickCorrelations out;
    out.signed_vs_volume.r = signed_acc.r();
    out.signed_vs_volume.n = signed_acc.n();
    out.signed_vs_volume.level = level;
    std::tie(out.signed_vs_volume.ci_lo, out.signed_vs_volume.ci_hi) =
        stats::fisher_ci(out.signed_vs_volume.r, out.signed_vs_volume.n, level);
    out.abs_vs_volume.r = abs_acc.r();
    out.abs_vs_volume.n = abs_acc.n();
    out.abs_vs_volume.level = level;
    std::tie(out.abs_vs_volume.ci_lo, out.abs_vs_volume.ci_hi) =
        stats::fisher_ci(out.abs_vs_volume.r, out.abs_vs_volume.n, level);
    return out;
}

}  // namespace switchlab::ingest
