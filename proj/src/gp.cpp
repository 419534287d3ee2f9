#include "switchlab/gp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>

#include "switchlab/errors.hpp"
#include "switchlab/fft.hpp"
#include "switchlab/parallel.hpp"

namespace switchlab::gp {

namespace {

// QUADPACK 7-15 Gauss-Kronrod pair on [-1,1]. Odd-indexed Kronrod
// abscissae are the Gauss-7 nodes.
constexpr double kXgk[8] = {0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
                            0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
                            0.2077849550078985, 0.0};
constexpr double kWgk[8] = {0.02293532201052922, 0.06309209262997855, 0.1047900103222502,
                            0.1406532597155259,  0.1690047266392679,  0.1903505780647854,
                            0.2044329400752989,  0.2094821410847278};
constexpr double kWg[4] = {0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
                           0.4179591836734694};

struct Segment {
    double a, b;
    double integral;
    double error;
};

template <class F>
Segment gk15(const F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[(j - 1) / 2] * (f1 + f2);
    }
    return {a, b, resk * half, std::abs(resk - resg) * half};
}

template <class F>
double adaptive_quadrature(const F& f, double a, double b, double tol) {
    std::vector<Segment> segs;
    segs.push_back(gk15(f, a, b));
    constexpr std::size_t kMaxSegments = 4000;
    for (;;) {
        double total_err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            total_err += segs[i].error;
            if (segs[i].error > segs[worst].error) worst = i;
        }
        if (total_err <= tol) break;
        if (segs.size() >= kMaxSegments)
            throw numerics_error("quadrature did not converge within the evaluation budget");
        const Segment s = segs[worst];
        const double mid = 0.5 * (s.a + s.b);
        segs[worst] = gk15(f, s.a, mid);
        segs.push_back(gk15(f, mid, s.b));
    }
    double sum = 0.0;
    for (const Segment& s : segs) sum += s.integral;
    return sum;
}

}  // namespace

double cov_eval(const processes::QmfParams& params, std::size_t lag, double quad_tol) {
    params.validate();
    if (!(quad_tol > 0.0)) throw std::invalid_argument("cov_eval: quad_tol must be > 0");
    const double scale = params.sigma2 / 4.0;
    if (lag == 0) return scale;  // mapped integrand is identically 1
    const double k = static_cast<double>(lag);
    const double inv2phi = 1.0 / (2.0 * params.phi);
    const double expo = -(params.phi + 0.5);
    const auto f = [k, inv2phi, expo](double v) {
        return std::pow(1.0 + k * std::pow(v, inv2phi), expo);
    };
    // run the quadrature on the unit integral so quad_tol stays absolute
    // in units of B regardless of sigma2
    return scale * adaptive_quadrature(f, 0.0, 1.0, quad_tol / scale);
}

CovarianceTable build_cov_table(const processes::QmfParams& params, std::size_t K,
                                double quad_tol, unsigned threads) {
    params.validate();
    if (K < 1) throw std::invalid_argument("build_cov_table: K must be >= 1");
    CovarianceTable table{params, std::vector<double>(K), quad_tol};
    par::parallel_for(K, threads,
                      [&](std::size_t k) { table.values[k] = cov_eval(params, k, quad_tol); });
    return table;
}

namespace {

void extend_table(CovarianceTable& table, std::size_t needed, unsigned threads) {
    const std::size_t have = table.values.size();
    if (have >= needed) return;
    table.values.resize(needed);
    par::parallel_for(needed - have, threads, [&](std::size_t i) {
        table.values[have + i] = cov_eval(table.params, have + i, table.quad_tol);
    });
}

}  // namespace

StationarySampler::StationarySampler(CovarianceTable table, std::size_t n, SamplerOptions opt)
    : table_(std::move(table)), n_(n), opt_(opt) {
    if (n_ == 0) throw std::invalid_argument("StationarySampler: n must be >= 1");
    if (table_.values.size() < n_)
        throw std::invalid_argument("StationarySampler: covariance table shorter than n");
    if (table_.values.empty() || !(table_.values[0] > 0.0))
        throw std::invalid_argument("StationarySampler: B(0) must be positive");

    const auto build_dense = [&] {
        if (n_ > opt_.dense_cap)
            throw numerics_error("dense sampler: n exceeds the dense cap (" +
                                 std::to_string(opt_.dense_cap) + ")");
        chol_.assign(n_ * (n_ + 1) / 2, 0.0);
        const auto at = [&](std::size_t i, std::size_t j) -> double& {
            return chol_[i * (i + 1) / 2 + j];
        };
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                double s = table_.values[i - j];
                for (std::size_t k = 0; k < j; ++k) s -= at(i, k) * at(j, k);
                if (i == j) {
                    if (!(s > 0.0))
                        throw numerics_error(
                            "dense sampler: covariance matrix is not positive definite "
                            "(pivot " +
                            std::to_string(s) + " at index " + std::to_string(i) + ")");
                    at(i, i) = std::sqrt(s);
                } else {
                    at(i, j) = s / at(j, j);
                }
            }
        }
        dense_ = true;
    };

    if (opt_.method == SamplerMethod::dense) {
        build_dense();
        return;
    }

    // circulant embedding into a ring of length M >= 2(n-1)
    const std::size_t M = fft::next_pow2(std::max<std::size_t>(2 * (n_ - 1), 1));
    extend_table(table_, M / 2 + 1, opt_.threads);
    std::vector<std::complex<double>> ring(M);
    for (std::size_t j = 0; j < M; ++j) ring[j] = table_.values[std::min(j, M - j)];
    fft::transform(ring, -1);

    double lambda_max = 0.0, lambda_min = 0.0;
    for (const auto& z : ring) {
        lambda_max = std::max(lambda_max, z.real());
        lambda_min = std::min(lambda_min, z.real());
    }
    if (lambda_min < -opt_.neg_eig_tol * lambda_max) {
        if (opt_.method == SamplerMethod::automatic && n_ <= opt_.dense_cap) {
            build_dense();
            return;
        }
        throw numerics_error("circulant embedding has a negative spectrum: most negative "
                             "eigenvalue " +
                             std::to_string(lambda_min) + " (max " +
                             std::to_string(lambda_max) + ")");
    }
    spectral_amp_.resize(M);
    const double inv_m = 1.0 / static_cast<double>(M);
    for (std::size_t k = 0; k < M; ++k)
        spectral_amp_[k] = std::sqrt(std::max(ring[k].real(), 0.0) * inv_m);
}

std::vector<double> StationarySampler::sample(std::uint64_t seed) const {
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> gauss;
    std::vector<double> out(n_);
    if (dense_) {
        std::vector<double> z(n_);
        for (double& v : z) v = gauss(engine);
        for (std::size_t i = 0; i < n_; ++i) {
            double s = 0.0;
            const double* row = chol_.data() + i * (i + 1) / 2;
            for (std::size_t j = 0; j <= i; ++j) s += row[j] * z[j];
            out[i] = s;
        }
        return out;
    }
    const std::size_t M = spectral_amp_.size();
    std::vector<std::complex<double>> z(M);
    for (std::size_t k = 0; k < M; ++k) {
        const double u = gauss(engine);
        const double v = gauss(engine);
        z[k] = std::complex<double>(spectral_amp_[k] * u, spectral_amp_[k] * v);
    }
    fft::transform(z, -1);
    for (std::size_t i = 0; i < n_; ++i) out[i] = z[i].real();
    return out;
}

std::vector<double> sample_stationary_gaussian(const CovarianceTable& table, std::size_t n,
                                               std::uint64_t seed, SamplerOptions opt) {
    return StationarySampler(table, n, opt).sample(seed);
}

}  // namespace switchlab::gp
