#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace switchlab::gp {
class StationarySampler;
}

namespace switchlab::processes {

enum class IncrementKind { gaussian_unit, discrete, lag1_anticorrelated };

struct IncrementSpec {
    IncrementKind kind = IncrementKind::gaussian_unit;
    double p_zero = 0.0;  // discrete: probability mass of a zero tick
    double rho = 0.0;     // lag1: AR(1) coefficient, in (-1, 0]
    void validate() const;
};

// Shape and scale of the log-volatility field of the quasi-multifractal model.
struct QmfParams {
    double phi = 0.1;
    double sigma2 = 5.0;
    void validate() const;
};

// A simulated or ingested price series in transaction time, with optional
// volume and intertrade series aligned with the increments:
// increments[i] = prices[i+1] - prices[i], i.e. the move ending at time i+1.
struct PricePath {
    std::vector<double> prices;
    std::vector<double> increments;
    std::vector<double> volume;      // empty unless attached
    std::vector<double> intertrade;  // empty unless attached
    std::uint64_t seed = 0;

    bool has_volume() const noexcept { return !volume.empty(); }
    bool has_intertrade() const noexcept { return !intertrade.empty(); }
};

// Random walk p(t) = sum of increments drawn per spec, p(0) = 0.
PricePath gen_random_walk(std::size_t n, const IncrementSpec& spec, std::uint64_t seed);

// Geometric walk: p(t) = exp of a Gaussian walk with per-step mean
// drift - vol^2/2 and standard deviation vol; p(0) = 1.
PricePath gen_gbm(std::size_t n, double drift, double vol, std::uint64_t seed);

// Quasi-multifractal walk: increments xi(i) * exp(omega(i)) with xi iid
// N(0,1) and omega a long-memory stationary Gaussian field (module gp).
// The two streams come from independent labeled sub-seeds.
PricePath gen_qmf(std::size_t n, const QmfParams& params, std::uint64_t seed,
                  double quad_tol = 1e-10);
// Variant reusing a prepared omega sampler (amortizes the covariance table
// and embedding spectrum across realizations). Path length = sampler length + 1.
PricePath gen_qmf(const gp::StationarySampler& omega_sampler, std::uint64_t seed);

// v(t) = | |dp(t)| + sigma_mu * mu(t) | with mu iid N(0,1) independent of the
// price stream.
PricePath attach_volume(PricePath path, double sigma_mu, std::uint64_t seed);

// Finds sigma_mu such that Pearson(|dp|, v) on a fixed gaussian-unit
// calibration path of length n_cal is within +-0.005 of target_corr.
// The correlation is monotone decreasing in sigma_mu; solved by bisection.
double calibrate_sigma_mu(double target_corr, std::size_t n_cal, std::uint64_t seed);

// Intertrade times: exponential(rate) draws, except that a nonzero move in
// the same direction as the previous nonzero move gets tau = 0 with
// probability p0 (book-walking atom).
PricePath attach_intertrade(PricePath path, double p0, double rate, std::uint64_t seed);

}  // namespace switchlab::processes
