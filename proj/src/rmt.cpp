#include "slrt/rmt.hpp"

#include "slrt/matrixstats.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace slrt {

void LogNormalSpec::validate() const {
    if (!(sigma2 >= 0.0) || !std::isfinite(mu)) {
        throw std::invalid_argument("log-normal: need finite mu and sigma2 >= 0");
    }
    if (!(band_cutoff >= 0.0)) throw std::invalid_argument("log-normal: band cutoff must be >= 0");
}

double LogNormalSpec::geometric() const { return std::exp(mu); }
double LogNormalSpec::algebraic() const { return std::exp(mu + 0.5 * sigma2); }
double LogNormalSpec::q() const { return std::exp(-0.5 * sigma2); }

MomentMatch match_moments(double algebraic, double geometric) {
    if (!(geometric > 0.0) || !(geometric <= algebraic) || !std::isfinite(algebraic)) {
        throw std::domain_error("match_moments: need 0 < geometric <= algebraic");
    }
    return {std::log(geometric), 2.0 * std::log(algebraic / geometric)};
}

Eigen::MatrixXd sample_matrix(const LogNormalSpec& spec, const std::vector<double>& energies) {
    spec.validate();
    if (energies.size() != spec.size) {
        throw std::invalid_argument("sample_matrix: energy count differs from spec size");
    }
    const auto n = static_cast<Eigen::Index>(spec.size);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
    std::mt19937_64 engine(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sd = std::sqrt(spec.sigma2);
    // Row-major upper triangle: the draw order fixes the matrix for a seed.
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (std::abs(energies[j] - energies[i]) > spec.band_cutoff) continue;
            const double v = std::exp(spec.mu + sd * normal(engine));
            x(i, j) = v;
            x(j, i) = v;
        }
    }
    return x;
}

PerturbedSystem rmt_twin(const PerturbedSystem& system, const DriveSpec& drive, double e_lo,
                         double e_hi, std::uint64_t seed) {
    const auto band = select_band(system, e_lo, e_hi, drive.cutoff);
    const double a = algebraic_average(band);
    const double g = geometric_average(band);
    if (!(g > 0.0)) throw std::domain_error("rmt_twin: q = 0 band cannot be matched");
    const auto moments = match_moments(a, std::min(g, a));

    LogNormalSpec spec;
    spec.mu = moments.mu;
    spec.sigma2 = moments.sigma2;
    spec.size = system.size();
    spec.band_cutoff = drive.cutoff;
    spec.seed = seed;
    return make_system(system.energies, sample_matrix(spec, system.energies), system.dos);
}

}  // namespace slrt
