// switchlab — simulate featureless tick series, stack quantities around
// local price extrema in renormalized time, fit the resulting power laws,
// and run correlation reports on tick files.

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "switchlab/errors.hpp"
#include "switchlab/experiment.hpp"
#include "switchlab/gp.hpp"
#include "switchlab/processes.hpp"
#include "switchlab/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace switchlab;

namespace {

void write_double(std::ostream& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, res.ptr - buf);
}

struct SimulateArgs {
    std::string model = "gaussian-unit";
    std::size_t n = 100000;
    std::uint64_t seed = 1;
    double p_zero = 0.4;
    double rho = -0.2;
    double drift = 0.0;
    double vol = 1.0;
    double phi = 0.1;
    double sigma2 = 5.0;
    double quad_tol = 1e-10;
    bool with_volume = false;
    double sigma_mu = -1.0;
    double volume_corr = 0.2;
    std::size_t calibration_n = 1000000;
    bool with_intertrade = false;
    double p0 = 0.5;
    double rate = 1.0;
    bool emit_ticks = false;
    double base_price = 10000.0;
    double ms_per_unit = 1000.0;
    std::string out = "sim_out";
};

int cmd_simulate(const SimulateArgs& a) {
    processes::PricePath path;
    if (a.model == "gaussian-unit") {
        path = processes::gen_random_walk(a.n, {processes::IncrementKind::gaussian_unit}, a.seed);
    } else if (a.model == "discrete") {
        path = processes::gen_random_walk(
            a.n, {processes::IncrementKind::discrete, a.p_zero, 0.0}, a.seed);
    } else if (a.model == "lag1") {
        path = processes::gen_random_walk(
            a.n, {processes::IncrementKind::lag1_anticorrelated, 0.0, a.rho}, a.seed);
    } else if (a.model == "gbm") {
        path = processes::gen_gbm(a.n, a.drift, a.vol, a.seed);
    } else if (a.model == "qmf") {
        path = processes::gen_qmf(a.n, {a.phi, a.sigma2}, a.seed, a.quad_tol);
    } else {
        throw std::invalid_argument("unknown model '" + a.model + "'");
    }
    if (a.with_volume) {
        const double sigma_mu =
            a.sigma_mu >= 0.0 ? a.sigma_mu
                              : processes::calibrate_sigma_mu(a.volume_corr, a.calibration_n,
                                                              rng::stream_seed(a.seed, "calibration"));
        path = processes::attach_volume(std::move(path), sigma_mu,
                                        rng::stream_seed(a.seed, "volume"));
    }
    if (a.with_intertrade)
        path = processes::attach_intertrade(std::move(path), a.p0, a.rate,
                                            rng::stream_seed(a.seed, "intertrade"));

    fs::create_directories(a.out);
    {
        std::ofstream out(fs::path(a.out) / "series.csv", std::ios::binary);
        if (!out) throw data_error("cannot write series.csv under " + a.out);
        out << "t,price";
        if (path.has_volume()) out << ",volume";
        if (path.has_intertrade()) out << ",intertrade";
        out << "\n";
        for (std::size_t t = 0; t < path.prices.size(); ++t) {
            out << t << ',';
            write_double(out, path.prices[t]);
            if (path.has_volume()) {
                out << ',';
                write_double(out, t > 0 ? path.volume[t - 1] : 0.0);
            }
            if (path.has_intertrade()) {
                out << ',';
                write_double(out, t > 0 ? path.intertrade[t - 1] : 0.0);
            }
            out.put('\n');
        }
    }
    if (a.emit_ticks) {
        const auto ticks = experiment::ticks_from_path(path, a.base_price, a.ms_per_unit);
        std::ofstream out(fs::path(a.out) / "ticks.csv", std::ios::binary);
        if (!out) throw data_error("cannot write ticks.csv under " + a.out);
        ingest::write_ticks(ticks, out);
    }
    std::cout << "wrote " << a.out << "/series.csv"
              << (a.emit_ticks ? " and ticks.csv" : "") << " (n=" << path.prices.size() << ")\n";
    return 0;
}

experiment::ExperimentConfig resolve_config(const std::string& source) {
    const auto names = experiment::preset_names();
    if (std::find(names.begin(), names.end(), source) != names.end())
        return experiment::preset(source);
    if (fs::exists(source)) return experiment::load_config(source);
    std::string known;
    for (const auto& name : names) known += (known.empty() ? "" : ", ") + name;
    throw std::invalid_argument("'" + source + "' is neither a preset (" + known +
                                ") nor an existing config file");
}

int run_bundle(const std::string& source, const std::string& out_dir, bool drop_fits,
               std::optional<std::uint64_t> seed, std::optional<unsigned> threads) {
    experiment::ExperimentConfig cfg = resolve_config(source);
    if (drop_fits) cfg.fits.clear();
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    const auto result = experiment::run_experiment(cfg, out_dir);
    std::cout << "run complete: " << result.profiles.size() << " profiles, "
              << result.total_trends << " trends, outputs in " << out_dir << "\n";
    for (const auto& fr : result.power_fits) {
        std::cout << "  power " << profiles::to_string(fr.spec.quantity) << "/"
                  << profiles::to_string(fr.spec.kind) << "/" << fitting::to_string(fr.spec.side)
                  << ": ";
        if (fr.fit)
            std::cout << "beta=" << fr.fit->beta << " r2=" << fr.fit->r2
                      << " points=" << fr.fit->n_points << "\n";
        else
            std::cout << fr.error << "\n";
    }
    for (const auto& fr : result.singular_fits) {
        std::cout << "  singular " << profiles::to_string(fr.spec.quantity) << "/"
                  << profiles::to_string(fr.spec.kind) << "/" << fitting::to_string(fr.spec.side)
                  << ": ";
        if (fr.fit)
            std::cout << "a=" << fr.fit->a << " b=" << fr.fit->b << " beta=" << fr.fit->beta
                      << "\n";
        else
            std::cout << fr.error << "\n";
    }
    return 0;
}

int cmd_fit(const std::string& input, const std::string& side_str, double d_lo, double d_hi,
            const std::string& form, bool weighted, double beta_lo, double beta_hi,
            double beta_step, const std::string& out_file, const std::string& format) {
    std::ifstream in(input, std::ios::binary);
    if (!in) throw data_error("cannot open " + input);
    const profiles::ProfileData data = profiles::read_profile_csv(in);
    const fitting::Side side =
        side_str == "pre" ? fitting::Side::pre_peak : fitting::Side::post_peak;
    if (side_str != "pre" && side_str != "post")
        throw std::invalid_argument("--side must be pre|post");
    const fitting::FitRange range{d_lo, d_hi};

    ordered_json j;
    std::ostringstream csv;
    if (form == "power") {
        const auto fit = fitting::fit_power_law(data, side, range, weighted);
        j["form"] = "power";
        j["side"] = side_str;
        j["d_lo"] = d_lo;
        j["d_hi"] = d_hi;
        j["beta"] = fit.beta;
        j["log_amplitude"] = fit.log_amplitude;
        j["r2"] = fit.r2;
        j["n_points"] = fit.n_points;
        csv << "form,side,d_lo,d_hi,beta,log_amplitude,r2,n_points\npower," << side_str << ','
            << d_lo << ',' << d_hi << ',' << fit.beta << ',' << fit.log_amplitude << ','
            << fit.r2 << ',' << fit.n_points << '\n';
    } else if (form == "singular") {
        const auto fit =
            fitting::fit_finite_singularity(data, side, range, {beta_lo, beta_hi, beta_step});
        j["form"] = "singular";
        j["side"] = side_str;
        j["d_lo"] = d_lo;
        j["d_hi"] = d_hi;
        j["a"] = fit.a;
        j["b"] = fit.b;
        j["beta"] = fit.beta;
        j["sse"] = fit.sse;
        j["n_points"] = fit.n_points;
        csv << "form,side,d_lo,d_hi,a,b,beta,sse,n_points\nsingular," << side_str << ',' << d_lo
            << ',' << d_hi << ',' << fit.a << ',' << fit.b << ',' << fit.beta << ',' << fit.sse
            << ',' << fit.n_points << '\n';
    } else {
        throw std::invalid_argument("--form must be power|singular");
    }
    const std::string payload = format == "csv" ? csv.str() : j.dump(2) + "\n";
    if (out_file.empty()) {
        std::cout << payload;
    } else {
        std::ofstream out(out_file, std::ios::binary);
        if (!out) throw data_error("cannot write " + out_file);
        out << payload;
    }
    return 0;
}

int cmd_correlate(const std::string& input, char delimiter, const std::string& out_file,
                  const std::string& format) {
    const auto report = experiment::run_correlate(input, delimiter);
    const ordered_json j = experiment::correlate_json(report);
    std::string payload;
    if (format == "csv") {
        std::ostringstream csv;
        csv << "metric,r,n,ci_lo,ci_hi\nsigned_vs_volume," << report.correlations.signed_vs_volume.r
            << ',' << report.correlations.signed_vs_volume.n << ','
            << report.correlations.signed_vs_volume.ci_lo << ','
            << report.correlations.signed_vs_volume.ci_hi << "\nabs_vs_volume,"
            << report.correlations.abs_vs_volume.r << ',' << report.correlations.abs_vs_volume.n
            << ',' << report.correlations.abs_vs_volume.ci_lo << ','
            << report.correlations.abs_vs_volume.ci_hi << '\n';
        payload = csv.str();
    } else {
        payload = j.dump(2) + "\n";
    }
    std::cout << payload;
    if (!out_file.empty()) {
        std::ofstream out(out_file, std::ios::binary);
        if (!out) throw data_error("cannot write " + out_file);
        out << payload;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"switchlab: extrema-conditioned statistics of simulated and real tick series"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "generate a synthetic path");
    simulate->add_option("--model", sim.model, "gaussian-unit|discrete|lag1|gbm|qmf");
    simulate->add_option("-n,--length", sim.n, "path length");
    simulate->add_option("--seed", sim.seed, "master seed");
    simulate->add_option("--p-zero", sim.p_zero, "discrete: zero-tick probability");
    simulate->add_option("--rho", sim.rho, "lag1: AR(1) coefficient in (-1,0]");
    simulate->add_option("--drift", sim.drift, "gbm drift");
    simulate->add_option("--vol", sim.vol, "gbm volatility");
    simulate->add_option("--phi", sim.phi, "qmf shape");
    simulate->add_option("--sigma2", sim.sigma2, "qmf variance scale");
    simulate->add_option("--quad-tol", sim.quad_tol, "qmf covariance quadrature tolerance");
    simulate->add_flag("--with-volume", sim.with_volume, "attach a volume series");
    simulate->add_option("--sigma-mu", sim.sigma_mu, "volume noise scale (default: calibrate)");
    simulate->add_option("--volume-corr", sim.volume_corr, "calibration target for |dp|-volume corr");
    simulate->add_flag("--with-intertrade", sim.with_intertrade, "attach intertrade times");
    simulate->add_option("--p0", sim.p0, "intertrade zero atom probability");
    simulate->add_option("--rate", sim.rate, "intertrade exponential rate");
    simulate->add_flag("--ticks", sim.emit_ticks, "also write ticks.csv (timestamp,price,volume)");
    simulate->add_option("--base-price", sim.base_price, "price offset for tick output");
    simulate->add_option("--out", sim.out, "output directory");

    std::string source, out_dir = "run_out";
    std::optional<std::uint64_t> seed_override;
    std::optional<unsigned> threads_override;
    std::uint64_t seed_raw = 0;
    unsigned threads_raw = 0;

    auto* run = app.add_subcommand("run", "full pipeline from a preset or config file");
    run->add_option("source", source, "preset name (fig1,fig2a,...) or config.json path")
        ->required();
    run->add_option("--out", out_dir, "run directory");
    auto* run_seed = run->add_option("--seed", seed_raw, "override master seed");
    auto* run_threads = run->add_option("--threads", threads_raw, "worker threads (0 = auto)");

    std::string p_source, p_out = "profile_out";
    auto* prof = app.add_subcommand("profile", "simulate and stack profiles (no fits)");
    prof->add_option("source", p_source, "preset name or config.json path")->required();
    prof->add_option("--out", p_out, "run directory");
    auto* prof_seed = prof->add_option("--seed", seed_raw, "override master seed");
    auto* prof_threads = prof->add_option("--threads", threads_raw, "worker threads (0 = auto)");

    std::string fit_input, fit_side = "post", fit_form = "power", fit_out, fit_format = "json";
    double fit_d_lo = 0.01, fit_d_hi = 0.1;
    double beta_lo = 0.05, beta_hi = 0.95, beta_step = 0.005;
    bool fit_weighted = false;
    auto* fit = app.add_subcommand("fit", "fit a stacked-profile CSV");
    fit->add_option("--input", fit_input, "profile CSV (epsilon_center,mean,count)")->required();
    fit->add_option("--side", fit_side, "pre|post")->check(CLI::IsMember({"pre", "post"}));
    fit->add_option("--d-lo", fit_d_lo, "lower |eps-1| bound")->required();
    fit->add_option("--d-hi", fit_d_hi, "upper |eps-1| bound")->required();
    fit->add_option("--form", fit_form, "power|singular")
        ->check(CLI::IsMember({"power", "singular"}));
    fit->add_flag("--weighted", fit_weighted, "weight bins by count");
    fit->add_option("--beta-lo", beta_lo, "singular: grid start");
    fit->add_option("--beta-hi", beta_hi, "singular: grid end");
    fit->add_option("--beta-step", beta_step, "singular: grid step");
    fit->add_option("--out", fit_out, "write the report here instead of stdout only");
    fit->add_option("--format", fit_format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

    std::string corr_input, corr_out, corr_format = "json", corr_delim = ",";
    auto* corr = app.add_subcommand("correlate", "correlation report for a tick CSV");
    corr->add_option("input", corr_input, "tick file (timestamp,price,volume)")->required();
    corr->add_option("--delimiter", corr_delim, "field delimiter (single character)");
    corr->add_option("--out", corr_out, "also write the JSON report here");
    corr->add_option("--format", corr_format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*simulate) return cmd_simulate(sim);
        if (*run) {
            if (*run_seed) seed_override = seed_raw;
            if (*run_threads) threads_override = threads_raw;
            return run_bundle(source, out_dir, /*drop_fits=*/false, seed_override,
                              threads_override);
        }
        if (*prof) {
            if (*prof_seed) seed_override = seed_raw;
            if (*prof_threads) threads_override = threads_raw;
            return run_bundle(p_source, p_out, /*drop_fits=*/true, seed_override,
                              threads_override);
        }
        if (*fit)
            return cmd_fit(fit_input, fit_side, fit_d_lo, fit_d_hi, fit_form, fit_weighted,
                           beta_lo, beta_hi, beta_step, fit_out, fit_format);
        if (*corr) {
            if (corr_delim.size() != 1)
                throw std::invalid_argument("--delimiter must be a single character");
            return cmd_correlate(corr_input, corr_delim[0], corr_out, corr_format);
        }
    } catch (const data_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const insufficient_data& e) {
        std::cerr << "insufficient data: " << e.what() << "\n";
        return 3;
    } catch (const numerics_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
