#pragma once

// Banded log-normal random matrices matched to physical band averages.

#include "slrt/billiard.hpp"
#include "slrt/network.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace slrt {

struct LogNormalSpec {
    double mu = 0.0;      // <ln x>
    double sigma2 = 0.0;  // Var(ln x)
    std::size_t size = 0;
    double band_cutoff = 0.0;  // elements with |E_n - E_m| > cutoff are zero
    std::uint64_t seed = 0;

    void validate() const;
    [[nodiscard]] double geometric() const;
    [[nodiscard]] double algebraic() const;
    [[nodiscard]] double q() const;
};

struct MomentMatch {
    double mu = 0.0;
    double sigma2 = 0.0;
};

/// mu = ln g, sigma2 = 2 ln(a/g). Throws std::domain_error unless 0 < g <= a.
MomentMatch match_moments(double algebraic, double geometric);

/// Symmetric matrix over `energies` with every in-band off-diagonal pair
/// drawn independently from the log-normal law. Bit-reproducible per seed.
Eigen::MatrixXd sample_matrix(const LogNormalSpec& spec, const std::vector<double>& energies);

/// Synthetic system on the physical energies whose band (|omega| <= omega_c
/// inside the window) has log-normal elements with the physical (a, g).
/// Throws std::domain_error for a q = 0 band.
PerturbedSystem rmt_twin(const PerturbedSystem& system, const DriveSpec& drive, double e_lo,
                         double e_hi, std::uint64_t seed);

}  // namespace slrt
