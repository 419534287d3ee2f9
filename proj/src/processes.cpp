#include "switchlab/processes.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "switchlab/errors.hpp"
#include "switchlab/gp.hpp"
#include "switchlab/rng.hpp"
#include "switchlab/stats.hpp"

namespace switchlab::processes {

void IncrementSpec::validate() const {
    if (!(p_zero >= 0.0 && p_zero <= 1.0))
        throw std::invalid_argument("IncrementSpec: p_zero must lie in [0,1]");
    if (!(rho > -1.0 && rho <= 0.0))
        throw std::invalid_argument("IncrementSpec: rho must lie in (-1, 0]");
}

void QmfParams::validate() const {
    if (!(phi > 0.0)) throw std::invalid_argument("QmfParams: phi must be > 0");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("QmfParams: sigma2 must be > 0");
}

namespace {

PricePath from_increments(std::vector<double> increments, std::uint64_t seed,
                          double level0 = 0.0, bool exponentiate = false) {
    PricePath path;
    path.seed = seed;
    path.prices.resize(increments.size() + 1);
    double level = level0;
    path.prices[0] = exponentiate ? std::exp(level) : level;
    for (std::size_t i = 0; i < increments.size(); ++i) {
        level += increments[i];
        path.prices[i + 1] = exponentiate ? std::exp(level) : level;
    }
    if (exponentiate) {
        // increments of the price itself, consistent with dp(t) = p(t)-p(t-1)
        for (std::size_t i = 0; i < increments.size(); ++i)
            increments[i] = path.prices[i + 1] - path.prices[i];
    }
    path.increments = std::move(increments);
    return path;
}

}  // namespace

PricePath gen_random_walk(std::size_t n, const IncrementSpec& spec, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gen_random_walk: n must be >= 2");
    spec.validate();
    auto engine = rng::make_engine(seed, "price");
    std::vector<double> inc(n - 1);
    switch (spec.kind) {
        case IncrementKind::gaussian_unit: {
            std::normal_distribution<double> gauss;
            for (double& x : inc) x = gauss(engine);
            break;
        }
        case IncrementKind::discrete: {
            std::uniform_real_distribution<double> unif;
            const double half = 0.5 * (1.0 - spec.p_zero);
            for (double& x : inc) {
                const double u = unif(engine);
                x = (u < spec.p_zero) ? 0.0 : (u < spec.p_zero + half ? -1.0 : 1.0);
            }
            break;
        }
        case IncrementKind::lag1_anticorrelated: {
            std::normal_distribution<double> gauss;
            // stationary start, unit innovation variance
            double x = gauss(engine) / std::sqrt(1.0 - spec.rho * spec.rho);
            inc[0] = x;
            for (std::size_t i = 1; i < inc.size(); ++i) {
                x = spec.rho * x + gauss(engine);
                inc[i] = x;
            }
            break;
        }
    }
    return from_increments(std::move(inc), seed);
}

PricePath gen_gbm(std::size_t n, double drift, double vol, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gen_gbm: n must be >= 2");
    if (!(vol > 0.0)) throw std::invalid_argument("gen_gbm: vol must be > 0");
    auto engine = rng::make_engine(seed, "price");
    std::normal_distribution<double> gauss(drift - 0.5 * vol * vol, vol);
    std::vector<double> log_inc(n - 1);
    for (double& x : log_inc) x = gauss(engine);
    return from_increments(std::move(log_inc), seed, 0.0, /*exponentiate=*/true);
}

PricePath gen_qmf(std::size_t n, const QmfParams& params, std::uint64_t seed, double quad_tol) {
    if (n < 2) throw std::invalid_argument("gen_qmf: n must be >= 2");
    params.validate();
    gp::CovarianceTable table = gp::build_cov_table(params, n - 1, quad_tol);
    gp::StationarySampler sampler(std::move(table), n - 1);
    return gen_qmf(sampler, seed);
}

PricePath gen_qmf(const gp::StationarySampler& omega_sampler, std::uint64_t seed) {
    const std::size_t m = omega_sampler.length();
    auto xi_engine = rng::make_engine(seed, "qmf-xi");
    std::normal_distribution<double> gauss;
    const std::vector<double> omega =
        omega_sampler.sample(rng::stream_seed(seed, "qmf-omega"));
    std::vector<double> inc(m);
    for (std::size_t i = 0; i < m; ++i) inc[i] = gauss(xi_engine) * std::exp(omega[i]);
    return from_increments(std::move(inc), seed);
}

PricePath attach_volume(PricePath path, double sigma_mu, std::uint64_t seed) {
    if (path.increments.empty())
        throw std::invalid_argument("attach_volume: path has no increments");
    if (!(sigma_mu >= 0.0)) throw std::invalid_argument("attach_volume: sigma_mu must be >= 0");
    path.volume.resize(path.increments.size());
    if (sigma_mu == 0.0) {
        for (std::size_t i = 0; i < path.increments.size(); ++i)
            path.volume[i] = std::abs(path.increments[i]);
        return path;
    }
    auto engine = rng::make_engine(seed, "volume-noise");
    std::normal_distribution<double> gauss;
    for (std::size_t i = 0; i < path.increments.size(); ++i)
        path.volume[i] = std::abs(std::abs(path.increments[i]) + sigma_mu * gauss(engine));
    return path;
}

namespace {

double volume_corr(const std::vector<double>& abs_inc, const std::vector<double>& noise,
                   double sigma_mu) {
    stats::PearsonAccumulator acc;
    for (std::size_t i = 0; i < abs_inc.size(); ++i)
        acc.add(abs_inc[i], std::abs(abs_inc[i] + sigma_mu * noise[i]));
    return acc.r();
}

}  // namespace

double calibrate_sigma_mu(double target_corr, std::size_t n_cal, std::uint64_t seed) {
    if (!(target_corr > 0.0 && target_corr < 1.0))
        throw std::invalid_argument("calibrate_sigma_mu: target_corr must lie in (0,1)");
    if (n_cal < 4) throw std::invalid_argument("calibrate_sigma_mu: n_cal too small");

    const PricePath path = gen_random_walk(n_cal, IncrementSpec{}, seed);
    std::vector<double> abs_inc(path.increments.size());
    for (std::size_t i = 0; i < abs_inc.size(); ++i) abs_inc[i] = std::abs(path.increments[i]);
    auto engine = rng::make_engine(seed, "calibration-noise");
    std::normal_distribution<double> gauss;
    std::vector<double> noise(abs_inc.size());
    for (double& x : noise) x = gauss(engine);

    // corr is 1 at sigma_mu = 0 and decreases monotonically; expand the upper
    // bracket, then bisect on the fixed calibration draw.
    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (volume_corr(abs_inc, noise, hi) > target_corr) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 200)
            throw numerics_error("calibrate_sigma_mu: failed to bracket the target");
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double c = volume_corr(abs_inc, noise, mid);
        if (std::abs(c - target_corr) <= 0.005) return mid;
        (c > target_corr ? lo : hi) = mid;
    }
    throw numerics_error("calibrate_sigma_mu: bisection did not reach the tolerance");
}

PricePath attach_intertrade(PricePath path, double p0, double rate, std::uint64_t seed) {
    if (path.increments.empty())
        throw std::invalid_argument("attach_intertrade: path has no increments");
    if (!(p0 >= 0.0 && p0 <= 1.0))
        throw std::invalid_argument("attach_intertrade: p0 must lie in [0,1]");
    if (!(rate > 0.0)) throw std::invalid_argument("attach_intertrade: rate must be > 0");
    auto engine = rng::make_engine(seed, "intertrade");
    std::uniform_real_distribution<double> unif;
    std::exponential_distribution<double> expo(rate);
    path.intertrade.resize(path.increments.size());
    int prev_sign = 0;  // sign of the most recent nonzero move, 0 = none yet
    for (std::size_t i = 0; i < path.increments.size(); ++i) {
        const double dp = path.increments[i];
        const int sign = (dp > 0.0) - (dp < 0.0);
        const bool continuation = sign != 0 && sign == prev_sign;
        if (continuation && unif(engine) < p0)
            path.intertrade[i] = 0.0;
        else
            path.intertrade[i] = expo(engine);
        if (sign != 0) prev_sign = sign;
    }
    return path;
}

}  // namespace switchlab::processes
