#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "switchlab/processes.hpp"

namespace switchlab::gp {

// Tabulated stationary covariance B(k) of the log-volatility field,
//   B(k) = (sigma^2 phi / 2) * Int_0^inf dx / ((1+x)(1+x+k))^(phi+1/2).
struct CovarianceTable {
    processes::QmfParams params;
    std::vector<double> values;  // B(k) for k = 0..K-1
    double quad_tol = 1e-10;
};

// Evaluates B(k) to absolute error <= quad_tol by adaptive Gauss-Kronrod
// quadrature after mapping [0,inf) to (0,1] with x = v^(-1/(2 phi)) - 1,
// which compactifies the domain and absorbs the endpoint singularity the
// plain x = u/(1-u) map leaves behind for phi < 1/2. At k = 0 the mapped
// integrand is the constant 1, so B(0) = sigma^2/4 exactly.
double cov_eval(const processes::QmfParams& params, std::size_t lag, double quad_tol = 1e-10);

// values[k] = cov_eval(params, k, quad_tol) for k < K. Lags are evaluated
// in parallel when threads != 1 (0 = hardware concurrency); results are
// identical regardless of thread count.
CovarianceTable build_cov_table(const processes::QmfParams& params, std::size_t K,
                                double quad_tol = 1e-10, unsigned threads = 1);

enum class SamplerMethod { automatic, circulant, dense };

struct SamplerOptions {
    SamplerMethod method = SamplerMethod::automatic;
    double neg_eig_tol = 1e-8;     // relative clip tolerance for the embedding spectrum
    std::size_t dense_cap = 2048;  // largest n served by the dense fallback
    unsigned threads = 1;          // used when the table must be extended
};

// Sampler of zero-mean stationary Gaussian sequences with covariance B(|i-j|).
// Primary method embeds the covariance in a circulant ring of length
// >= 2(n-1) and samples spectrally; when the embedding spectrum has negative
// components beyond tolerance the dense symmetric square root (Cholesky)
// takes over for n <= dense_cap. Construction does the spectral work once;
// sample() is cheap and safe to call concurrently with distinct seeds.
class StationarySampler {
public:
    StationarySampler(CovarianceTable table, std::size_t n, SamplerOptions opt = {});

    std::size_t length() const noexcept { return n_; }
    bool dense() const noexcept { return dense_; }
    const CovarianceTable& table() const noexcept { return table_; }

    std::vector<double> sample(std::uint64_t seed) const;

private:
    CovarianceTable table_;
    std::size_t n_;
    SamplerOptions opt_;
    bool dense_ = false;
    std::vector<double> spectral_amp_;  // circulant: sqrt(lambda_k / M)
    std::vector<double> chol_;          // dense: lower-triangular factor, row-major
};

std::vector<double> sample_stationary_gaussian(const CovarianceTable& table, std::size_t n,
                                               std::uint64_t seed, SamplerOptions opt = {});

}  // namespace switchlab::gp
