#include "switchlab/fitting.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "switchlab/errors.hpp"

namespace switchlab::fitting {

std::string to_string(Side s) { return s == Side::pre_peak ? "pre" : "post"; }

namespace {

void check_range(FitRange range) {
    if (!(range.d_lo > 0.0) || !(range.d_lo < range.d_hi))
        throw std::invalid_argument("fit range must satisfy 0 < d_lo < d_hi");
}

struct Points {
    std::vector<double> d;
    std::vector<double> y;       // profile mean at d
    std::vector<double> weight;  // bin count (or 1)
};

Points collect(const profiles::ProfileData& data, Side side, FitRange range,
               bool positive_mean_only) {
    Points pts;
    for (std::size_t i = 0; i < data.epsilon_center.size(); ++i) {
        if (data.count[i] == 0) continue;
        const double d = side == Side::post_peak ? data.epsilon_center[i] - 1.0
                                                 : 1.0 - data.epsilon_center[i];
        if (!(d >= range.d_lo && d <= range.d_hi)) continue;
        if (positive_mean_only && !(data.mean[i] > 0.0)) continue;
        pts.d.push_back(d);
        pts.y.push_back(data.mean[i]);
        pts.weight.push_back(static_cast<double>(data.count[i]));
    }
    return pts;
}

}  // namespace

PowerLawFit fit_power_law(const profiles::ProfileData& data, Side side, FitRange range,
                          bool count_weighted) {
    check_range(range);
    // bins with non-positive mean cannot enter a log fit; they are dropped
    // and simply absent from n_points
    const Points pts = collect(data, side, range, /*positive_mean_only=*/true);
    const std::size_t n = pts.d.size();
    if (n < 3) throw insufficient_data("fit_power_law: fewer than 3 usable bins in range");

    double sw = 0.0, sx = 0.0, sy = 0.0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        lx[i] = std::log(pts.d[i]);
        ly[i] = std::log(pts.y[i]);
        const double w = count_weighted ? pts.weight[i] : 1.0;
        sw += w;
        sx += w * lx[i];
        sy += w * ly[i];
    }
    const double mx = sx / sw, my = sy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = count_weighted ? pts.weight[i] : 1.0;
        sxx += w * (lx[i] - mx) * (lx[i] - mx);
        sxy += w * (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw insufficient_data("fit_power_law: degenerate abscissae");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = count_weighted ? pts.weight[i] : 1.0;
        const double fit = intercept + slope * lx[i];
        ss_res += w * (ly[i] - fit) * (ly[i] - fit);
        ss_tot += w * (ly[i] - my) * (ly[i] - my);
    }
    const double r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return {side, slope, intercept, range, r2, n};
}

PowerLawFit fit_power_law(const profiles::StackedProfile& profile, Side side, FitRange range,
                          bool count_weighted) {
    return fit_power_law(finalize(profile), side, range, count_weighted);
}

SingularFit fit_finite_singularity(const profiles::ProfileData& data, Side side, FitRange range,
                                   BetaGrid grid) {
    check_range(range);
    if (!(grid.lo > 0.0) || !(grid.hi >= grid.lo) || !(grid.step > 0.0))
        throw std::invalid_argument("fit_finite_singularity: invalid beta grid");
    const Points pts = collect(data, side, range, /*positive_mean_only=*/false);
    const std::size_t n = pts.d.size();
    if (n < 4)
        throw insufficient_data("fit_finite_singularity: fewer than 4 usable bins in range");

    const auto steps = static_cast<std::size_t>(std::round((grid.hi - grid.lo) / grid.step));
    SingularFit best{side, 0.0, 0.0, 0.0, range, std::numeric_limits<double>::infinity(), n};
    for (std::size_t j = 0; j <= steps; ++j) {
        const double beta = grid.lo + grid.step * static_cast<double>(j);
        // least squares for y = a - b x with x = d^beta
        double sx = 0.0, sy = 0.0;
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = std::pow(pts.d[i], beta);
            sx += x[i];
            sy += pts.y[i];
        }
        const double mx = sx / static_cast<double>(n);
        const double my = sy / static_cast<double>(n);
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sxx += (x[i] - mx) * (x[i] - mx);
            sxy += (x[i] - mx) * (pts.y[i] - my);
        }
        if (!(sxx > 0.0)) continue;
        const double slope = sxy / sxx;  // = -b
        const double a = my - slope * mx;
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double resid = pts.y[i] - (a + slope * x[i]);
            sse += resid * resid;
        }
        if (sse < best.sse) {
            best.a = a;
            best.b = -slope;
            best.beta = beta;
            best.sse = sse;
        }
    }
    if (!std::isfinite(best.sse))
        throw insufficient_data("fit_finite_singularity: no usable beta in grid");
    return best;
}

SingularFit fit_finite_singularity(const profiles::StackedProfile& profile, Side side,
                                   FitRange range, BetaGrid grid) {
    return fit_finite_singularity(finalize(profile), side, range, grid);
}

std::vector<std::optional<PowerLawFit>> scan_fit_range(const profiles::ProfileData& data,
                                                       Side side,
                                                       std::span<const FitRange> candidates) {
    std::vector<std::optional<PowerLawFit>> out;
    out.reserve(candidates.size());
    for (const FitRange& range : candidates) {
        try {
            out.push_back(fit_power_law(data, side, range));
        } catch (const insufficient_data&) {
            out.push_back(std::nullopt);
        }
    }
    return out;
}

}  // namespace switchlab::fitting
