#include "switchlab/profiles.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "switchlab/errors.hpp"

namespace switchlab::profiles {

std::string to_string(Quantity q) {
    switch (q) {
        case Quantity::volatility: return "volatility";
        case Quantity::volume: return "volume";
        case Quantity::intertrade: return "intertrade";
    }
    return "?";
}

std::string to_string(extrema::ExtremumKind k) {
    return k == extrema::ExtremumKind::maximum ? "max" : "min";
}

std::size_t StackedProfile::bin_containing(double eps) const noexcept {
    const auto b = static_cast<std::size_t>(eps / bin_width());
    return std::min(b, n_bins - 1);
}

std::uint64_t StackedProfile::total_count() const noexcept {
    std::uint64_t total = 0;
    for (const auto& [order, bins] : per_order)
        for (const BinCell& c : bins) total += c.count;
    return total;
}

std::vector<double> StackedProfile::mean() const {
    std::vector<double> out(n_bins, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t b = 0; b < n_bins; ++b) {
        double acc = 0.0;
        std::size_t orders = 0;
        for (const auto& [order, bins] : per_order) {
            if (bins[b].count == 0) continue;
            acc += bins[b].sum / static_cast<double>(bins[b].count);
            ++orders;
        }
        if (orders > 0) out[b] = acc / static_cast<double>(orders);
    }
    return out;
}

std::vector<std::uint64_t> StackedProfile::count() const {
    std::vector<std::uint64_t> out(n_bins, 0);
    for (const auto& [order, bins] : per_order)
        for (std::size_t b = 0; b < n_bins; ++b) out[b] += bins[b].count;
    return out;
}

std::vector<double> StackedProfile::std_error() const {
    std::vector<double> out(n_bins, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t b = 0; b < n_bins; ++b) {
        double var_sum = 0.0;
        std::size_t orders = 0;
        for (const auto& [order, bins] : per_order) {
            const BinCell& c = bins[b];
            if (c.count == 0) continue;
            const double cnt = static_cast<double>(c.count);
            const double m = c.sum / cnt;
            const double var = std::max(0.0, c.sum_sq / cnt - m * m);
            var_sum += var / cnt;
            ++orders;
        }
        if (orders > 0) out[b] = std::sqrt(var_sum) / static_cast<double>(orders);
    }
    return out;
}

ProfileData finalize(const StackedProfile& profile) {
    ProfileData data;
    const auto means = profile.mean();
    const auto counts = profile.count();
    for (std::size_t b = 0; b < profile.n_bins; ++b) {
        if (counts[b] == 0) continue;
        data.epsilon_center.push_back(profile.bin_center(b));
        data.mean.push_back(means[b]);
        data.count.push_back(counts[b]);
    }
    return data;
}

std::vector<double> local_volatility(const processes::PricePath& path) {
    if (path.increments.empty())
        throw std::invalid_argument("local_volatility: path has no increments");
    std::vector<double> out(path.increments.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = path.increments[i] * path.increments[i];
    return out;
}

void add_trends(StackedProfile& profile, std::span<const double> series, std::size_t order,
                std::span<const extrema::Trend> trends, const StackOptions& opt) {
    const extrema::TrendSign want = profile.kind == extrema::ExtremumKind::maximum
                                        ? extrema::TrendSign::positive
                                        : extrema::TrendSign::negative;
    auto& bins = profile.per_order[order];
    if (bins.empty()) bins.assign(profile.n_bins, BinCell{});

    for (const extrema::Trend& trend : trends) {
        if (trend.sign != want) continue;
        const std::size_t d = trend.duration();
        if (d < opt.min_duration) continue;
        // price-times carrying an increment: t in [max(start,1), start+2d],
        // clipped to the last increment
        const std::size_t t_lo = std::max<std::size_t>(trend.start, 1);
        const std::size_t t_hi = std::min(trend.start + 2 * d, series.size());
        if (t_hi < t_lo) continue;

        double norm = 1.0;
        if (opt.normalization == Normalization::per_window) {
            double acc = 0.0;
            for (std::size_t t = t_lo; t <= t_hi; ++t) acc += series[t - 1];
            norm = acc / static_cast<double>(t_hi - t_lo + 1);
            if (!(norm > 0.0) || !std::isfinite(norm)) continue;
        }
        const double dur = static_cast<double>(d);
        const double start = static_cast<double>(trend.start);
        for (std::size_t t = t_lo; t <= t_hi; ++t) {
            const double eps = (static_cast<double>(t) - start) / dur;
            const double v = series[t - 1] / norm;
            std::size_t b_lo = profile.bin_containing(eps);
            if (opt.sampling == Sampling::span) {
                const double eps_prev =
                    std::max(0.0, (static_cast<double>(t) - 1.0 - start) / dur);
                b_lo = profile.bin_containing(eps_prev);
            }
            const std::size_t b_hi = profile.bin_containing(eps);
            for (std::size_t b = b_lo; b <= b_hi; ++b) {
                BinCell& cell = bins[b];
                cell.sum += v;
                cell.sum_sq += v * v;
                ++cell.count;
            }
        }
    }
}

StackedProfile stack_profile(Quantity quantity, extrema::ExtremumKind kind,
                             std::span<const double> series,
                             std::span<const TrendsOfOrder> trends_by_order,
                             std::size_t n_bins, const StackOptions& opt) {
    if (n_bins < 1) throw std::invalid_argument("stack_profile: need at least one bin");
    StackedProfile profile;
    profile.quantity = quantity;
    profile.kind = kind;
    profile.n_bins = n_bins;
    for (const TrendsOfOrder& group : trends_by_order)
        add_trends(profile, series, group.order, group.trends, opt);
    return profile;
}

StackedProfile merge_profiles(const StackedProfile& a, const StackedProfile& b) {
    if (a.quantity != b.quantity || a.kind != b.kind || a.n_bins != b.n_bins)
        throw std::invalid_argument("merge_profiles: quantity, kind and grid must match");
    StackedProfile out = a;
    for (const auto& [order, bins] : b.per_order) {
        auto& dst = out.per_order[order];
        if (dst.empty()) dst.assign(out.n_bins, BinCell{});
        for (std::size_t i = 0; i < bins.size(); ++i) {
            dst[i].sum += bins[i].sum;
            dst[i].sum_sq += bins[i].sum_sq;
            dst[i].count += bins[i].count;
        }
    }
    return out;
}

ConditionalDistribution conditional_from_samples(extrema::ExtremumKind kind, int offset,
                                                 std::span<const double> samples,
                                                 double uncond_mean, std::size_t n_hist_bins) {
    if (n_hist_bins < 1)
        throw std::invalid_argument("conditional_from_samples: need at least one bin");
    ConditionalDistribution dist;
    dist.kind = kind;
    dist.offset = offset;
    dist.uncond_mean = uncond_mean;
    dist.n = samples.size();
    if (samples.empty()) {
        dist.cond_mean = dist.cond_std_error = std::numeric_limits<double>::quiet_NaN();
        dist.min_value = dist.max_value = std::numeric_limits<double>::quiet_NaN();
        return dist;
    }
    double sum = 0.0, lo = samples[0], hi = samples[0];
    for (double v : samples) {
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double n = static_cast<double>(samples.size());
    dist.cond_mean = sum / n;
    double ss = 0.0;
    for (double v : samples) {
        const double d = v - dist.cond_mean;
        ss += d * d;
    }
    dist.cond_std_error = samples.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    dist.min_value = lo;
    dist.max_value = hi;

    double edge_lo = lo, edge_hi = hi;
    if (edge_lo == edge_hi) {
        edge_lo -= 0.5;
        edge_hi += 0.5;
    }
    const double width = (edge_hi - edge_lo) / static_cast<double>(n_hist_bins);
    dist.edges.resize(n_hist_bins + 1);
    for (std::size_t b = 0; b <= n_hist_bins; ++b)
        dist.edges[b] = edge_lo + width * static_cast<double>(b);
    std::vector<std::uint64_t> counts(n_hist_bins, 0);
    for (double v : samples) {
        auto b = static_cast<std::size_t>((v - edge_lo) / width);
        ++counts[std::min(b, n_hist_bins - 1)];
    }
    dist.density.resize(n_hist_bins);
    for (std::size_t b = 0; b < n_hist_bins; ++b)
        dist.density[b] = static_cast<double>(counts[b]) / (n * width);
    return dist;
}

ConditionalDistribution conditional_increment_stats(const processes::PricePath& path,
                                                    std::span<const extrema::Extremum> extrema,
                                                    int offset, std::size_t n_hist_bins) {
    if (path.increments.empty())
        throw std::invalid_argument("conditional_increment_stats: path has no increments");
    extrema::ExtremumKind kind = extrema::ExtremumKind::maximum;
    if (!extrema.empty()) {
        kind = extrema.front().kind;
        for (const auto& e : extrema)
            if (e.kind != kind)
                throw std::invalid_argument(
                    "conditional_increment_stats: extrema must be of uniform kind");
    }
    std::vector<double> samples;
    samples.reserve(extrema.size());
    const auto last = static_cast<long long>(path.increments.size());  // price-time T
    for (const auto& e : extrema) {
        const long long t = static_cast<long long>(e.t0) + offset;
        if (t >= 1 && t <= last) samples.push_back(path.increments[static_cast<std::size_t>(t - 1)]);
    }
    double uncond = 0.0;
    for (double v : path.increments) uncond += v;
    uncond /= static_cast<double>(path.increments.size());
    return conditional_from_samples(kind, offset, samples, uncond, n_hist_bins);
}

namespace {

void write_double(std::ostream& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, res.ptr - buf);
}

}  // namespace

void write_csv(const StackedProfile& profile, std::ostream& out) {
    const ProfileData data = finalize(profile);
    out << "epsilon_center,mean,count\n";
    for (std::size_t i = 0; i < data.epsilon_center.size(); ++i) {
        write_double(out, data.epsilon_center[i]);
        out.put(',');
        write_double(out, data.mean[i]);
        out.put(',');
        out << data.count[i];
        out.put('\n');
    }
}

ProfileData read_profile_csv(std::istream& in) {
    ProfileData data;
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw data_error("empty profile file");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "epsilon_center,mean,count")
        throw data_error("expected header epsilon_center,mean,count", line_no);
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        double vals[2];
        for (int f = 0; f < 2; ++f) {
            if (!std::getline(row, field, ','))
                throw data_error("expected 3 fields", line_no);
            const char* begin = field.data();
            const char* end = begin + field.size();
            const auto res = std::from_chars(begin, end, vals[f]);
            if (res.ec != std::errc{} || res.ptr != end)
                throw data_error("malformed number '" + field + "'", line_no);
        }
        if (!std::getline(row, field)) throw data_error("expected 3 fields", line_no);
        std::uint64_t cnt = 0;
        const auto res = std::from_chars(field.data(), field.data() + field.size(), cnt);
        if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
            throw data_error("malformed count '" + field + "'", line_no);
        data.epsilon_center.push_back(vals[0]);
        data.mean.push_back(vals[1]);
        data.count.push_back(cnt);
    }
    return data;
}

}  // namespace switchlab::profiles
