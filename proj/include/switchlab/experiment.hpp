#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "switchlab/extrema.hpp"
#include "switchlab/fitting.hpp"
#include "switchlab/ingest.hpp"
#include "switchlab/processes.hpp"
#include "switchlab/profiles.hpp"

namespace switchlab::experiment {

inline constexpr const char* kToolName = "switchlab";
inline constexpr const char* kVersion = "0.1.0";

struct ProcessConfig {
    std::string model = "gaussian-unit";  // gaussian-unit | discrete | lag1 | gbm | qmf
    double p_zero = 0.4;                  // discrete
    double rho = -0.2;                    // lag1
    double drift = 0.0;                   // gbm
    double vol = 1.0;                     // gbm
    processes::QmfParams qmf;             // qmf
};

struct FitSpec {
    profiles::Quantity quantity = profiles::Quantity::volatility;
    extrema::ExtremumKind kind = extrema::ExtremumKind::maximum;
    std::string form = "power";  // power | singular
    fitting::Side side = fitting::Side::post_peak;
    double d_lo = 0.0;
    double d_hi = 0.0;
};

struct ExperimentConfig {
    ProcessConfig process;
    std::size_t n = 100000;          // path length per realization
    std::size_t realizations = 1;
    std::uint64_t seed = 1;
    std::vector<std::size_t> orders = {10, 20, 50, 100};
    std::size_t grid_bins = 100;
    profiles::Normalization normalization = profiles::Normalization::per_window;
    std::size_t min_trend_duration = 5;
    profiles::Sampling sampling = profiles::Sampling::point;

    bool with_volume = false;
    double volume_corr_target = 0.2;
    double sigma_mu = -1.0;  // < 0: calibrate to volume_corr_target
    std::size_t calibration_n = 1000000;

    bool with_intertrade = false;
    double intertrade_p0 = 0.5;
    double intertrade_rate = 1.0;

    std::vector<int> conditional_offsets;
    std::size_t conditional_hist_bins = 81;

    std::vector<FitSpec> fits;
    double quad_tol = 1e-10;
    unsigned threads = 1;  // 0 = hardware concurrency

    void validate() const;
};

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::ordered_json& j);
ExperimentConfig load_config(const std::filesystem::path& file);

// Shipped experiment presets: fig1, fig2a, fig2b, fig2c, fig2d, fig3.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

struct PowerFitResult {
    FitSpec spec;
    std::optional<fitting::PowerLawFit> fit;  // nullopt when too few points
    std::string error;
};

struct SingularFitResult {
    FitSpec spec;
    std::optional<fitting::SingularFit> fit;
    std::string error;
};

struct ExperimentResult {
    ExperimentConfig config;
    double sigma_mu_used = 0.0;
    // key "<quantity>_<kind>", e.g. "volatility_max"
    std::map<std::string, profiles::StackedProfile> profiles;
    std::vector<PowerFitResult> power_fits;
    std::vector<SingularFitResult> singular_fits;
    std::vector<profiles::ConditionalDistribution> conditionals;  // maxima, per offset
    std::uint64_t total_trends = 0;
};

// Simulate -> detect -> stack -> fit, deterministically in (config, seed):
// realizations may run on several threads but are reduced in index order,
// so outputs do not depend on the thread count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Same, plus the report bundle under out_dir: profile and conditional CSVs,
// fits.json, and manifest.json (written last; its presence marks a complete
// run). Identical configs reproduce identical bytes.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::filesystem::path& out_dir);

nlohmann::ordered_json manifest_json(const ExperimentResult& result);

struct CorrelateReport {
    ingest::TickCorrelations correlations;
    ingest::ZeroIntervalSummary zero_intervals;
    std::size_t n_ticks = 0;
};

CorrelateReport run_correlate(const std::filesystem::path& input, char delimiter = ',');
nlohmann::ordered_json correlate_json(const CorrelateReport& report);

// Tick-file view of a simulated path: timestamps accumulate the intertrade
// series (ms, rounded) when present and tick once per step otherwise;
// prices are offset by base_price and must stay positive; volumes come from
// the attached series (first record gets a unit placeholder that never
// enters the derived series).
ingest::TickSeries ticks_from_path(const processes::PricePath& path, double base_price = 0.0,
                                   double ms_per_unit = 1000.0);

std::string config_hash(const ExperimentConfig& cfg);

}  // namespace switchlab::experiment
