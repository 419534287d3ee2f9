#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "switchlab/profiles.hpp"

namespace switchlab::fitting {

// Which branch of the peak the distance d = |eps - 1| is measured on.
enum class Side { pre_peak, post_peak };

std::string to_string(Side s);

struct FitRange {
    double d_lo;
    double d_hi;
};

// Log-log OLS fit mean(d) ~ amplitude * d^beta over populated bins.
struct PowerLawFit {
    Side side;
    double beta;
    double log_amplitude;
    FitRange range;
    double r2;
    std::size_t n_points;
};

// Finite-time-singularity fit mean(d) ~ a - b d^beta: finite peak value,
// infinite slope at d -> 0 when 0 < beta < 1.
struct SingularFit {
    Side side;
    double a;
    double b;
    double beta;
    FitRange range;
    double sse;
    std::size_t n_points;
};

struct BetaGrid {
    double lo = 0.05;
    double hi = 0.95;
    double step = 0.005;
};

PowerLawFit fit_power_law(const profiles::ProfileData& data, Side side, FitRange range,
                          bool count_weighted = false);
PowerLawFit fit_power_law(const profiles::StackedProfile& profile, Side side, FitRange range,
                          bool count_weighted = false);

// Grid search over beta with the (a, b) subproblem solved exactly by least
// squares; ties in SSE go to the smallest beta.
SingularFit fit_finite_singularity(const profiles::ProfileData& data, Side side, FitRange range,
                                   BetaGrid grid = {});
SingularFit fit_finite_singularity(const profiles::StackedProfile& profile, Side side,
                                   FitRange range, BetaGrid grid = {});

// One fit per candidate range; ranges with too few points yield nullopt.
std::vector<std::optional<PowerLawFit>> scan_fit_range(const profiles::ProfileData& data,
                                                       Side side,
                                                       std::span<const FitRange> candidates);

}  // namespace switchlab::fitting
