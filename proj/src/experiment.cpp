#include "switchlab/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <set>
#include <sstream>

#include "switchlab/errors.hpp"
#include "switchlab/gp.hpp"
#include "switchlab/parallel.hpp"
#include "switchlab/rng.hpp"

namespace switchlab::experiment {

using nlohmann::ordered_json;

namespace {

profiles::Quantity quantity_from_string(const std::string& s) {
    if (s == "volatility") return profiles::Quantity::volatility;
    if (s == "volume") return profiles::Quantity::volume;
    if (s == "intertrade") return profiles::Quantity::intertrade;
    throw std::invalid_argument("unknown quantity '" + s + "'");
}

extrema::ExtremumKind kind_from_string(const std::string& s) {
    if (s == "max") return extrema::ExtremumKind::maximum;
    if (s == "min") return extrema::ExtremumKind::minimum;
    throw std::invalid_argument("unknown extremum kind '" + s + "'");
}

fitting::Side side_from_string(const std::string& s) {
    if (s == "post") return fitting::Side::post_peak;
    if (s == "pre") return fitting::Side::pre_peak;
    throw std::invalid_argument("unknown side '" + s + "' (want pre|post)");
}

std::string profile_key(profiles::Quantity q, extrema::ExtremumKind k) {
    return profiles::to_string(q) + "_" + profiles::to_string(k);
}

template <class Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    const auto tag = [&](const std::string& msg) { return "[" + std::string(name) + "] " + msg; };
    try {
        return fn();
    } catch (const data_error& e) {
        throw data_error(tag(e.what()));
    } catch (const insufficient_data& e) {
        throw insufficient_data(tag(e.what()));
    } catch (const numerics_error& e) {
        throw numerics_error(tag(e.what()));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(tag(e.what()));
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    static const std::set<std::string> kModels = {"gaussian-unit", "discrete", "lag1", "gbm",
                                                  "qmf"};
    if (!kModels.count(process.model))
        throw std::invalid_argument("config: unknown model '" + process.model + "'");
    if (n < 2) throw std::invalid_argument("config: n must be >= 2");
    if (realizations < 1) throw std::invalid_argument("config: realizations must be >= 1");
    if (orders.empty()) throw std::invalid_argument("config: orders must be non-empty");
    std::set<std::size_t> seen;
    for (std::size_t dt : orders) {
        if (dt < 1) throw std::invalid_argument("config: orders must be >= 1");
        if (n < 2 * dt + 1)
            throw std::invalid_argument("config: n must be >= 2*order+1 for every order");
        if (!seen.insert(dt).second)
            throw std::invalid_argument("config: duplicate order " + std::to_string(dt));
    }
    if (grid_bins < 1) throw std::invalid_argument("config: grid_bins must be >= 1");
    if (process.model == "discrete") {
        processes::IncrementSpec spec{processes::IncrementKind::discrete, process.p_zero, 0.0};
        spec.validate();
    }
    if (process.model == "lag1") {
        processes::IncrementSpec spec{processes::IncrementKind::lag1_anticorrelated, 0.0,
                                      process.rho};
        spec.validate();
    }
    if (process.model == "gbm" && !(process.vol > 0.0))
        throw std::invalid_argument("config: gbm vol must be > 0");
    if (process.model == "qmf") process.qmf.validate();
    if (with_volume) {
        if (sigma_mu < 0.0 && !(volume_corr_target > 0.0 && volume_corr_target < 1.0))
            throw std::invalid_argument("config: volume_corr_target must lie in (0,1)");
        if (sigma_mu < 0.0 && calibration_n < 4)
            throw std::invalid_argument("config: calibration_n too small");
    }
    if (with_intertrade) {
        if (!(intertrade_p0 >= 0.0 && intertrade_p0 <= 1.0))
            throw std::invalid_argument("config: intertrade_p0 must lie in [0,1]");
        if (!(intertrade_rate > 0.0))
            throw std::invalid_argument("config: intertrade_rate must be > 0");
    }
    if (!conditional_offsets.empty() && conditional_hist_bins < 1)
        throw std::invalid_argument("config: conditional_hist_bins must be >= 1");
    for (const FitSpec& f : fits) {
        if (f.form != "power" && f.form != "singular")
            throw std::invalid_argument("config: fit form must be power|singular");
        if (!(f.d_lo > 0.0 && f.d_lo < f.d_hi))
            throw std::invalid_argument("config: fit range must satisfy 0 < d_lo < d_hi");
        if (f.quantity == profiles::Quantity::volume && !with_volume)
            throw std::invalid_argument("config: volume fit requires volume attachment");
        if (f.quantity == profiles::Quantity::intertrade && !with_intertrade)
            throw std::invalid_argument("config: intertrade fit requires intertrade attachment");
    }
    if (!(quad_tol > 0.0)) throw std::invalid_argument("config: quad_tol must be > 0");
}

ordered_json config_to_json(const ExperimentConfig& cfg) {
    ordered_json p;
    p["model"] = cfg.process.model;
    if (cfg.process.model == "discrete") p["p_zero"] = cfg.process.p_zero;
    if (cfg.process.model == "lag1") p["rho"] = cfg.process.rho;
    if (cfg.process.model == "gbm") {
        p["drift"] = cfg.process.drift;
        p["vol"] = cfg.process.vol;
    }
    if (cfg.process.model == "qmf") {
        p["phi"] = cfg.process.qmf.phi;
        p["sigma2"] = cfg.process.qmf.sigma2;
    }

    ordered_json j;
    j["process"] = p;
    j["n"] = cfg.n;
    j["realizations"] = cfg.realizations;
    j["seed"] = cfg.seed;
    j["orders"] = cfg.orders;
    j["grid_bins"] = cfg.grid_bins;
    j["normalization"] =
        cfg.normalization == profiles::Normalization::per_window ? "per-window" : "none";
    j["min_trend_duration"] = cfg.min_trend_duration;
    j["sampling"] = cfg.sampling == profiles::Sampling::span ? "span" : "point";
    if (cfg.with_volume) {
        ordered_json v;
        if (cfg.sigma_mu >= 0.0)
            v["sigma_mu"] = cfg.sigma_mu;
        else
            v["target_corr"] = cfg.volume_corr_target;
        v["calibration_n"] = cfg.calibration_n;
        j["volume"] = v;
    }
    if (cfg.with_intertrade) {
        ordered_json t;
        t["p0"] = cfg.intertrade_p0;
        t["rate"] = cfg.intertrade_rate;
        j["intertrade"] = t;
    }
    if (!cfg.conditional_offsets.empty()) {
        j["conditional_offsets"] = cfg.conditional_offsets;
        j["conditional_hist_bins"] = cfg.conditional_hist_bins;
    }
    if (!cfg.fits.empty()) {
        ordered_json fits = ordered_json::array();
        for (const FitSpec& f : cfg.fits) {
            ordered_json e;
            e["quantity"] = profiles::to_string(f.quantity);
            e["kind"] = profiles::to_string(f.kind);
            e["form"] = f.form;
            e["side"] = fitting::to_string(f.side);
            e["d_lo"] = f.d_lo;
            e["d_hi"] = f.d_hi;
            fits.push_back(e);
        }
        j["fits"] = fits;
    }
    // threads is execution infrastructure, not experiment identity: outputs
    // must not depend on it, so it stays out of the serialized config
    j["quad_tol"] = cfg.quad_tol;
    return j;
}

ExperimentConfig config_from_json(const ordered_json& j) {
    ExperimentConfig cfg;
    cfg.orders.clear();
    if (!j.contains("process") || !j["process"].contains("model"))
        throw std::invalid_argument("config: missing process.model");
    const auto& p = j["process"];
    cfg.process.model = p["model"].get<std::string>();
    if (p.contains("p_zero")) cfg.process.p_zero = p["p_zero"].get<double>();
    if (p.contains("rho")) cfg.process.rho = p["rho"].get<double>();
    if (p.contains("drift")) cfg.process.drift = p["drift"].get<double>();
    if (p.contains("vol")) cfg.process.vol = p["vol"].get<double>();
    if (p.contains("phi")) cfg.process.qmf.phi = p["phi"].get<double>();
    if (p.contains("sigma2")) cfg.process.qmf.sigma2 = p["sigma2"].get<double>();

    cfg.n = j.value("n", std::size_t{100000});
    cfg.realizations = j.value("realizations", std::size_t{1});
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.orders = j.value("orders", std::vector<std::size_t>{10, 20, 50, 100});
    cfg.grid_bins = j.value("grid_bins", std::size_t{100});
    const std::string norm = j.value("normalization", std::string("per-window"));
    if (norm == "per-window")
        cfg.normalization = profiles::Normalization::per_window;
    else if (norm == "none")
        cfg.normalization = profiles::Normalization::none;
    else
        throw std::invalid_argument("config: normalization must be per-window|none");
    cfg.min_trend_duration = j.value("min_trend_duration", std::size_t{5});
    const std::string sampling = j.value("sampling", std::string("point"));
    if (sampling == "point")
        cfg.sampling = profiles::Sampling::point;
    else if (sampling == "span")
        cfg.sampling = profiles::Sampling::span;
    else
        throw std::invalid_argument("config: sampling must be point|span");

    if (j.contains("volume")) {
        cfg.with_volume = true;
        const auto& v = j["volume"];
        if (v.contains("sigma_mu"))
            cfg.sigma_mu = v["sigma_mu"].get<double>();
        else
            cfg.volume_corr_target = v.value("target_corr", 0.2);
        cfg.calibration_n = v.value("calibration_n", std::size_t{1000000});
    }
    if (j.contains("intertrade")) {
        cfg.with_intertrade = true;
        const auto& t = j["intertrade"];
        cfg.intertrade_p0 = t.value("p0", 0.5);
        cfg.intertrade_rate = t.value("rate", 1.0);
    }
    cfg.conditional_offsets = j.value("conditional_offsets", std::vector<int>{});
    cfg.conditional_hist_bins = j.value("conditional_hist_bins", std::size_t{81});
    if (j.contains("fits")) {
        for (const auto& e : j["fits"]) {
            FitSpec f;
            f.quantity = quantity_from_string(e.at("quantity").get<std::string>());
            f.kind = kind_from_string(e.at("kind").get<std::string>());
            f.form = e.at("form").get<std::string>();
            f.side = side_from_string(e.at("side").get<std::string>());
            f.d_lo = e.at("d_lo").get<double>();
            f.d_hi = e.at("d_hi").get<double>();
            cfg.fits.push_back(f);
        }
    }
    cfg.quad_tol = j.value("quad_tol", 1e-10);
    cfg.threads = j.value("threads", 1u);
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw data_error("cannot open config file " + file.string());
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw data_error("config parse error: " + std::string(e.what()));
    }
    return config_from_json(j);
}

std::vector<std::string> preset_names() {
    return {"fig1", "fig2a", "fig2b", "fig2c", "fig2d", "fig3"};
}

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig cfg;
    const auto pow10 = [](double e) { return std::pow(10.0, e); };
    if (name == "fig1") {
        cfg.n = 1000000;
        cfg.realizations = 4;
        cfg.orders = {10};
        cfg.grid_bins = 100;
        cfg.conditional_offsets = {-5, -2, -1, 0, 1, 2, 5};
    } else if (name == "fig2a" || name == "fig2b" || name == "fig2c") {
        cfg.n = 1000000;
        cfg.realizations = 100;
        cfg.orders = {10, 20, 50, 100};
        cfg.grid_bins = 2000;
        cfg.sampling = profiles::Sampling::span;
        if (name != "fig2a") {
            cfg.with_volume = true;
            cfg.volume_corr_target = 0.2;
        }
        if (name == "fig2b") {
            cfg.realizations = 20;
            cfg.grid_bins = 100;  // linear plot of v*(eps)
        } else {
            const auto quantity =
                name == "fig2a" ? profiles::Quantity::volatility : profiles::Quantity::volume;
            cfg.fits = {
                {quantity, extrema::ExtremumKind::maximum, "power", fitting::Side::post_peak,
                 pow10(-1.95), pow10(-1.05)},
                {quantity, extrema::ExtremumKind::maximum, "power", fitting::Side::pre_peak,
                 pow10(-2.45), pow10(-1.3)},
                // the finite-slope regime lives right at the peak
                {quantity, extrema::ExtremumKind::maximum, "singular", fitting::Side::post_peak,
                 4e-4, 0.03},
            };
        }
    } else if (name == "fig2d") {
        cfg.process.model = "discrete";
        cfg.process.p_zero = 0.4;
        cfg.n = 1000000;
        cfg.realizations = 20;
        cfg.orders = {10, 20, 50, 100};
        cfg.grid_bins = 100;
        cfg.with_intertrade = true;
        cfg.intertrade_p0 = 0.5;
        cfg.intertrade_rate = 1.0;
    } else if (name == "fig3") {
        cfg.process.model = "qmf";
        cfg.process.qmf = {0.1, 5.0};
        cfg.n = 262145;  // 2^18 increments
        cfg.realizations = 100;
        cfg.orders = {50, 100, 200, 500};
        cfg.grid_bins = 1000;
        cfg.sampling = profiles::Sampling::span;
        // unnormalized stacking keeps the heavy-tailed volatility structure
        cfg.normalization = profiles::Normalization::none;
        cfg.fits = {{profiles::Quantity::volatility, extrema::ExtremumKind::maximum, "power",
                     fitting::Side::post_peak, pow10(-1.7), pow10(-0.4)}};
    } else {
        throw std::invalid_argument("unknown preset '" + name + "'");
    }
    return cfg;
}

namespace {

// per-realization accumulation, merged in realization order
struct Partial {
    std::map<std::string, profiles::StackedProfile> profiles;
    std::map<int, std::vector<double>> cond_samples;
    double uncond_sum = 0.0;
    std::uint64_t uncond_n = 0;
    std::uint64_t trends = 0;
};

processes::PricePath make_path(const ExperimentConfig& cfg, const gp::StationarySampler* omega,
                               std::size_t realization) {
    const std::uint64_t path_seed = rng::stream_seed(cfg.seed, "realization", realization);
    processes::PricePath path;
    if (cfg.process.model == "gaussian-unit") {
        path = processes::gen_random_walk(cfg.n, {processes::IncrementKind::gaussian_unit},
                                          path_seed);
    } else if (cfg.process.model == "discrete") {
        path = processes::gen_random_walk(
            cfg.n, {processes::IncrementKind::discrete, cfg.process.p_zero, 0.0}, path_seed);
    } else if (cfg.process.model == "lag1") {
        path = processes::gen_random_walk(
            cfg.n, {processes::IncrementKind::lag1_anticorrelated, 0.0, cfg.process.rho},
            path_seed);
    } else if (cfg.process.model == "gbm") {
        path = processes::gen_gbm(cfg.n, cfg.process.drift, cfg.process.vol, path_seed);
    } else {
        path = processes::gen_qmf(*omega, path_seed);
    }
    return path;
}

Partial run_realization(const ExperimentConfig& cfg, const gp::StationarySampler* omega,
                        double sigma_mu, std::size_t realization) {
    processes::PricePath path = make_path(cfg, omega, realization);
    if (cfg.with_volume)
        path = processes::attach_volume(std::move(path), sigma_mu,
                                        rng::stream_seed(cfg.seed, "volume", realization));
    if (cfg.with_intertrade)
        path = processes::attach_intertrade(std::move(path), cfg.intertrade_p0,
                                            cfg.intertrade_rate,
                                            rng::stream_seed(cfg.seed, "intertrade", realization));

    std::vector<std::pair<profiles::Quantity, std::vector<double>>> series;
    series.emplace_back(profiles::Quantity::volatility, profiles::local_volatility(path));
    if (cfg.with_volume) series.emplace_back(profiles::Quantity::volume, path.volume);
    if (cfg.with_intertrade) series.emplace_back(profiles::Quantity::intertrade, path.intertrade);

    const profiles::StackOptions stack_opt{cfg.normalization, cfg.min_trend_duration,
                                           cfg.sampling};
    Partial part;
    for (const auto& [quantity, values] : series)
        for (const auto kind :
             {extrema::ExtremumKind::maximum, extrema::ExtremumKind::minimum}) {
            auto& prof = part.profiles[profile_key(quantity, kind)];
            prof.quantity = quantity;
            prof.kind = kind;
            prof.n_bins = cfg.grid_bins;
        }

    for (const std::size_t order : cfg.orders) {
        const auto ext = extrema::find_extrema(path.prices, order);
        const auto trends = extrema::segment_trends(ext);
        part.trends += trends.size();
        for (const auto& [quantity, values] : series) {
            profiles::add_trends(part.profiles[profile_key(quantity, extrema::ExtremumKind::maximum)],
                                 values, order, trends, stack_opt);
            profiles::add_trends(part.profiles[profile_key(quantity, extrema::ExtremumKind::minimum)],
                                 values, order, trends, stack_opt);
        }
        if (order == cfg.orders.front() && !cfg.conditional_offsets.empty()) {
            const auto last = static_cast<long long>(path.increments.size());
            for (const int k : cfg.conditional_offsets) {
                auto& bucket = part.cond_samples[k];
                for (const auto& e : ext) {
                    if (e.kind != extrema::ExtremumKind::maximum) continue;
                    const long long t = static_cast<long long>(e.t0) + k;
                    if (t >= 1 && t <= last)
                        bucket.push_back(path.increments[static_cast<std::size_t>(t - 1)]);
                }
            }
        }
    }
    for (const double dp : path.increments) part.uncond_sum += dp;
    part.uncond_n = path.increments.size();
    return part;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    stage("config", [&] { cfg.validate(); return 0; });

    ExperimentResult result;
    result.config = cfg;

    result.sigma_mu_used = 0.0;
    if (cfg.with_volume) {
        result.sigma_mu_used =
            cfg.sigma_mu >= 0.0
                ? cfg.sigma_mu
                : stage("calibrate", [&] {
                      return processes::calibrate_sigma_mu(
                          cfg.volume_corr_target, cfg.calibration_n,
                          rng::stream_seed(cfg.seed, "calibration"));
                  });
    }

    std::unique_ptr<gp::StationarySampler> omega;
    if (cfg.process.model == "qmf") {
        omega = stage("covariance", [&] {
            gp::SamplerOptions opt;
            opt.threads = cfg.threads;
            auto table = gp::build_cov_table(cfg.process.qmf, cfg.n - 1, cfg.quad_tol,
                                             cfg.threads);
            return std::make_unique<gp::StationarySampler>(std::move(table), cfg.n - 1, opt);
        });
    }

    // chunked so several realizations run concurrently, merged in index
    // order so the reduction is identical for every thread count
    std::map<std::string, profiles::StackedProfile> merged;
    std::map<int, std::vector<double>> cond_samples;
    double uncond_sum = 0.0;
    std::uint64_t uncond_n = 0;
    const unsigned workers = par::resolve_threads(cfg.threads);
    stage("simulate", [&] {
        for (std::size_t base = 0; base < cfg.realizations; base += workers) {
            const std::size_t count = std::min<std::size_t>(workers, cfg.realizations - base);
            std::vector<Partial> slots(count);
            par::parallel_for(count, workers, [&](std::size_t i) {
                slots[i] = run_realization(cfg, omega.get(), result.sigma_mu_used, base + i);
            });
            for (Partial& part : slots) {
                for (auto& [key, prof] : part.profiles) {
                    auto it = merged.find(key);
                    if (it == merged.end())
                        merged.emplace(key, std::move(prof));
                    else
                        it->second = profiles::merge_profiles(it->second, prof);
                }
                for (auto& [k, samples] : part.cond_samples) {
                    auto& dst = cond_samples[k];
                    dst.insert(dst.end(), samples.begin(), samples.end());
                }
                uncond_sum += part.uncond_sum;
                uncond_n += part.uncond_n;
                result.total_trends += part.trends;
            }
        }
        return 0;
    });
    result.profiles = std::move(merged);

    if (!cfg.conditional_offsets.empty()) {
        const double uncond_mean = uncond_sum / static_cast<double>(uncond_n);
        stage("conditional", [&] {
            for (const int k : cfg.conditional_offsets)
                result.conditionals.push_back(profiles::conditional_from_samples(
                    extrema::ExtremumKind::maximum, k, cond_samples[k], uncond_mean,
                    cfg.conditional_hist_bins));
            return 0;
        });
    }

    for (const FitSpec& spec : cfg.fits) {
        const auto& prof = result.profiles.at(profile_key(spec.quantity, spec.kind));
        const fitting::FitRange range{spec.d_lo, spec.d_hi};
        if (spec.form == "power") {
            PowerFitResult fr{spec, std::nullopt, ""};
            try {
                fr.fit = fitting::fit_power_law(prof, spec.side, range);
            } catch (const insufficient_data& e) {
                fr.error = e.what();
            }
            result.power_fits.push_back(std::move(fr));
        } else {
            SingularFitResult fr{spec, std::nullopt, ""};
            try {
                fr.fit = fitting::fit_finite_singularity(prof, spec.side, range);
            } catch (const insufficient_data& e) {
                fr.error = e.what();
            }
            result.singular_fits.push_back(std::move(fr));
        }
    }
    return result;
}

std::string config_hash(const ExperimentConfig& cfg) {
    const std::string dump = config_to_json(cfg).dump();
    const std::uint64_t h = rng::fnv1a(dump);
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << h;
    return hex.str();
}

namespace {

ordered_json fit_spec_json(const FitSpec& spec) {
    ordered_json e;
    e["quantity"] = profiles::to_string(spec.quantity);
    e["kind"] = profiles::to_string(spec.kind);
    e["side"] = fitting::to_string(spec.side);
    e["d_lo"] = spec.d_lo;
    e["d_hi"] = spec.d_hi;
    return e;
}

ordered_json fits_json(const ExperimentResult& result) {
    ordered_json j;
    j["power"] = ordered_json::array();
    for (const PowerFitResult& fr : result.power_fits) {
        ordered_json e = fit_spec_json(fr.spec);
        if (fr.fit) {
            e["beta"] = fr.fit->beta;
            e["log_amplitude"] = fr.fit->log_amplitude;
            e["r2"] = fr.fit->r2;
            e["n_points"] = fr.fit->n_points;
        } else {
            e["error"] = fr.error;
        }
        j["power"].push_back(e);
    }
    j["singular"] = ordered_json::array();
    for (const SingularFitResult& fr : result.singular_fits) {
        ordered_json e = fit_spec_json(fr.spec);
        if (fr.fit) {
            e["a"] = fr.fit->a;
            e["b"] = fr.fit->b;
            e["beta"] = fr.fit->beta;
            e["sse"] = fr.fit->sse;
            e["n_points"] = fr.fit->n_points;
        } else {
            e["error"] = fr.error;
        }
        j["singular"].push_back(e);
    }
    return j;
}

ordered_json conditional_stats_json(const ExperimentResult& result) {
    ordered_json arr = ordered_json::array();
    for (const auto& dist : result.conditionals) {
        ordered_json e;
        e["kind"] = profiles::to_string(dist.kind);
        e["offset"] = dist.offset;
        e["n"] = dist.n;
        if (dist.n > 0) {
            e["cond_mean"] = dist.cond_mean;
            e["cond_std_error"] = dist.cond_std_error;
            e["uncond_mean"] = dist.uncond_mean;
            e["min"] = dist.min_value;
            e["max"] = dist.max_value;
        }
        arr.push_back(e);
    }
    return arr;
}

void write_text_file(const std::filesystem::path& file, const std::string& content) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw data_error("cannot write " + file.string());
    out << content;
    if (!out) throw data_error("failed writing " + file.string());
}

}  // namespace

nlohmann::ordered_json manifest_json(const ExperimentResult& result) {
    ordered_json m;
    m["tool"] = kToolName;
    m["version"] = kVersion;
    m["config"] = config_to_json(result.config);
    m["config_hash"] = config_hash(result.config);
    m["seed"] = result.config.seed;
    if (result.config.with_volume) m["sigma_mu"] = result.sigma_mu_used;
    ordered_json counts;
    counts["realizations"] = result.config.realizations;
    counts["trends"] = result.total_trends;
    for (const auto& dist : result.conditionals)
        counts["conditional_k" + std::to_string(dist.offset)] = dist.n;
    m["counts"] = counts;
    return m;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    // a run directory without manifest.json is incomplete by convention
    std::filesystem::remove(out_dir / "manifest.json");

    ExperimentResult result = run_experiment(cfg);

    std::vector<std::string> outputs;
    for (const auto& [key, prof] : result.profiles) {
        const std::string name = "profile_" + key + ".csv";
        std::ostringstream body;
        profiles::write_csv(prof, body);
        write_text_file(out_dir / name, body.str());
        outputs.push_back(name);
    }
    for (const auto& dist : result.conditionals) {
        const std::string name = "conditional_" + profiles::to_string(dist.kind) + "_k" +
                                 std::to_string(dist.offset) + ".csv";
        std::ostringstream body;
        body << "bin_center,density\n";
        for (std::size_t b = 0; b + 1 < dist.edges.size(); ++b) {
            char buf[32];
            auto res = std::to_chars(buf, buf + sizeof(buf),
                                     0.5 * (dist.edges[b] + dist.edges[b + 1]));
            body.write(buf, res.ptr - buf);
            body.put(',');
            res = std::to_chars(buf, buf + sizeof(buf), dist.density[b]);
            body.write(buf, res.ptr - buf);
            body.put('\n');
        }
        write_text_file(out_dir / name, body.str());
        outputs.push_back(name);
    }
    if (!result.conditionals.empty()) {
        write_text_file(out_dir / "conditional_stats.json",
                        conditional_stats_json(result).dump(2) + "\n");
        outputs.push_back("conditional_stats.json");
    }
    if (!result.power_fits.empty() || !result.singular_fits.empty()) {
        write_text_file(out_dir / "fits.json", fits_json(result).dump(2) + "\n");
        outputs.push_back("fits.json");
    }

    ordered_json manifest = manifest_json(result);
    std::sort(outputs.begin(), outputs.end());
    manifest["outputs"] = outputs;
    write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
    return result;
}

CorrelateReport run_correlate(const std::filesystem::path& input, char delimiter) {
    std::ifstream in(input, std::ios::binary);
    if (!in) throw data_error("cannot open " + input.string());
    ingest::ParseOptions opt;
    opt.delimiter = delimiter;
    const ingest::TickSeries series = stage("ingest", [&] { return ingest::parse_ticks(in, opt); });
    CorrelateReport report;
    report.n_ticks = series.records.size();
    report.zero_intervals = stage("analyze", [&] { return ingest::zero_interval_fraction(series); });
    report.correlations = stage("analyze", [&] { return ingest::corr_report(series); });
    return report;
}

nlohmann::ordered_json correlate_json(const CorrelateReport& report) {
    const auto corr = [](const stats::CorrelationReport& r) {
        ordered_json e;
        e["r"] = r.r;
        e["n"] = r.n;
        e["ci_lo"] = r.ci_lo;
        e["ci_hi"] = r.ci_hi;
        e["level"] = r.level;
        return e;
    };
    ordered_json j;
    j["n_ticks"] = report.n_ticks;
    j["signed_vs_volume"] = corr(report.correlations.signed_vs_volume);
    j["abs_vs_volume"] = corr(report.correlations.abs_vs_volume);
    ordered_json z;
    z["overall_fraction"] = report.zero_intervals.overall_fraction;
    z["conditional_fraction"] = report.zero_intervals.conditional_fraction;
    z["n_intervals"] = report.zero_intervals.n_intervals;
    z["n_conditional"] = report.zero_intervals.n_conditional;
    j["zero_intervals"] = z;
    return j;
}

ingest::TickSeries ticks_from_path(const processes::PricePath& path, double base_price,
                                   double ms_per_unit) {
    if (path.prices.empty()) throw std::invalid_argument("ticks_from_path: empty path");
    std::vector<ingest::TickRecord> records(path.prices.size());
    std::int64_t ts = 0;
    for (std::size_t t = 0; t < path.prices.size(); ++t) {
        if (t > 0) {
            const double step = path.has_intertrade()
                                    ? path.intertrade[t - 1] * ms_per_unit
                                    : ms_per_unit;
            ts += std::llround(step);
        }
        const double price = base_price + path.prices[t];
        if (!(price > 0.0))
            throw data_error("ticks_from_path: non-positive price at t=" + std::to_string(t) +
                             "; raise base_price");
        double volume = 1.0;
        if (path.has_volume() && t > 0) volume = path.volume[t - 1];
        if (!(volume > 0.0))
            throw data_error("ticks_from_path: non-positive volume at t=" + std::to_string(t) +
                             "; attach volume with sigma_mu > 0");
        records[t] = {ts, price, volume};
    }
    return ingest::make_series(std::move(records));
}

}  // namespace switchlab::experiment
