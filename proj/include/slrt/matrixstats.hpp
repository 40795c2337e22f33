#pragma once

#include "slrt/billiard.hpp"

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace slrt {

/// Thrown when no pair of levels qualifies for a band.
class EmptyBandError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BandElement {
    std::size_t n = 0;  // n < m
    std::size_t m = 0;
    double x = 0.0;      // |V_nm|^2
    double omega = 0.0;  // E_n - E_m
};

/// Near-diagonal band: every unordered in-window pair with |E_n - E_m| <= cutoff.
/// Exactly degenerate pairs (omega = 0) are included.
struct BandSelection {
    double e_lo = 0.0;
    double e_hi = 0.0;
    double cutoff = 0.0;
    std::size_t first_level = 0;  // first in-window level index
    std::size_t level_count = 0;
    std::vector<BandElement> elements;

    [[nodiscard]] std::size_t size() const noexcept { return elements.size(); }
};

struct AveragesReport {
    double algebraic = 0.0;
    double geometric = 0.0;
    double harmonic = 0.0;
    double network = 0.0;  // filled by the network module
    double sparsity_q = 0.0;
    std::size_t zero_count = 0;
    std::size_t element_count = 0;
};

BandSelection select_band(const PerturbedSystem& system, double e_lo, double e_hi, double cutoff);

/// Same selection, from raw levels and matrix (used for synthetic systems).
BandSelection select_band(const std::vector<double>& energies, const Eigen::MatrixXd& x,
                          double e_lo, double e_hi, double cutoff);

[[nodiscard]] double algebraic_average(const BandSelection& band);

/// exp<ln x>; 0 when any element is exactly zero. A positive floor replaces
/// values below it (plotting only; the default keeps the strict definition).
[[nodiscard]] double geometric_average(const BandSelection& band, double floor = 0.0);

/// 1/<1/x>; 0 when any element is exactly zero.
[[nodiscard]] double harmonic_average(const BandSelection& band);

/// q = geometric / algebraic. Throws std::domain_error on an all-zero band.
[[nodiscard]] double sparsity(const BandSelection& band);

AveragesReport summarize(const BandSelection& band);

struct LogHistogram {
    double ln_lo = 0.0;  // left edge of the first bin, in ln x
    double ln_width = 0.0;
    std::vector<std::size_t> counts;
    std::size_t zero_count = 0;  // x == 0 elements have no logarithm

    [[nodiscard]] double bin_left(std::size_t i) const noexcept { return ln_lo + ln_width * i; }
    [[nodiscard]] double bin_right(std::size_t i) const noexcept {
        return ln_lo + ln_width * (i + 1);
    }
    [[nodiscard]] std::size_t total() const noexcept;
};

/// Histogram of ln x over the positive elements. counts + zero_count equals
/// the band size. Throws std::invalid_argument for bins < 1 or no positive x.
LogHistogram log_histogram(const BandSelection& band, int bins);

/// Copy with each diagonal v[n, n+d] (d >= 1) randomly permuted and mirrored
/// to keep the matrix symmetric. Energies are untouched.
PerturbedSystem untexture(const PerturbedSystem& system, std::uint64_t seed);

}  // namespace slrt
