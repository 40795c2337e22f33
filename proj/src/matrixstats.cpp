#include "slrt/matrixstats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace slrt {

BandSelection select_band(const std::vector<double>& energies, const Eigen::MatrixXd& x,
                          double e_lo, double e_hi, double cutoff) {
    if (!(cutoff > 0.0)) throw std::invalid_argument("select_band: cutoff must be positive");
    if (!(e_lo <= e_hi)) throw std::invalid_argument("select_band: empty window");

    BandSelection band;
    band.e_lo = e_lo;
    band.e_hi = e_hi;
    band.cutoff = cutoff;
    const auto first = std::lower_bound(energies.begin(), energies.end(), e_lo);
    const auto last = std::upper_bound(energies.begin(), energies.end(), e_hi);
    band.first_level = static_cast<std::size_t>(first - energies.begin());
    band.level_count = static_cast<std::size_t>(last - first);

    const std::size_t end = band.first_level + band.level_count;
    for (std::size_t n = band.first_level; n < end; ++n) {
        for (std::size_t m = n + 1; m < end; ++m) {
            const double omega = energies[n] - energies[m];
            if (-omega > cutoff) break;  // energies ascend
            band.elements.push_back({n, m, x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)),
                                     omega});
        }
    }
    if (band.elements.empty()) throw EmptyBandError("select_band: no level pair within cutoff");
    return band;
}

BandSelection select_band(const PerturbedSystem& system, double e_lo, double e_hi, double cutoff) {
    return select_band(system.energies, system.v_squared, e_lo, e_hi, cutoff);
}

double algebraic_average(const BandSelection& band) {
    double sum = 0.0;
    for (const auto& e : band.elements) sum += e.x;
    return sum / static_cast<double>(band.size());
}

double geometric_average(const BandSelection& band, double floor) {
    double sum = 0.0;
    for (const auto& e : band.elements) {
        const double x = std::max(e.x, floor);
        if (x == 0.0) return 0.0;
        sum += std::log(x);
    }
    return std::exp(sum / static_cast<double>(band.size()));
}

double harmonic_average(const BandSelection& band) {
    double sum = 0.0;
    for (const auto& e : band.elements) {
        if (e.x == 0.0) return 0.0;
        sum += 1.0 / e.x;
    }
    return static_cast<double>(band.size()) / sum;
}

double sparsity(const BandSelection& band) {
    const double a = algebraic_average(band);
    if (!(a > 0.0)) throw std::domain_error("sparsity: all-zero band");
    // Rounding in exp/log can push an all-equal band a hair above 1.
    return std::min(1.0, geometric_average(band) / a);
}

AveragesReport summarize(const BandSelection& band) {
    AveragesReport r;
    r.algebraic = algebraic_average(band);
    r.geometric = geometric_average(band);
    r.harmonic = harmonic_average(band);
    r.sparsity_q = r.algebraic > 0.0 ? sparsity(band) : 0.0;
    r.element_count = band.size();
    r.zero_count = static_cast<std::size_t>(std::count_if(
        band.elements.begin(), band.elements.end(), [](const BandElement& e) { return e.x == 0.0; }));
    return r;
}

std::size_t LogHistogram::total() const noexcept {
    return std::accumulate(counts.begin(), counts.end(), zero_count);
}

LogHistogram log_histogram(const BandSelection& band, int bins) {
    if (bins < 1) throw std::invalid_argument("log_histogram: bins must be >= 1");
    LogHistogram h;
    std::vector<double> logs;
    logs.reserve(band.size());
    for (const auto& e : band.elements) {
        if (e.x > 0.0) {
            logs.push_back(std::log(e.x));
        } else {
            ++h.zero_count;
        }
    }
    if (logs.empty()) throw std::invalid_argument("log_histogram: no positive elements");

    const auto [lo_it, hi_it] = std::minmax_element(logs.begin(), logs.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    if (hi == lo) {
        // Degenerate sample: unit-width bins, the first one centred on the value.
        h.ln_lo = lo - 0.5;
        h.ln_width = 1.0;
        h.counts[0] = logs.size();
        return h;
    }
    h.ln_lo = lo;
    h.ln_width = (hi - lo) / bins;
    for (const double v : logs) {
        auto i = static_cast<std::size_t>((v - lo) / h.ln_width);
        h.counts[std::min(i, h.counts.size() - 1)] += 1;
    }
    return h;
}

PerturbedSystem untexture(const PerturbedSystem& system, std::uint64_t seed) {
    PerturbedSystem out = system;
    auto& v = out.v_squared;
    const Eigen::Index n = v.rows();
    std::mt19937_64 engine(seed);
    std::vector<double> diag;
    for (Eigen::Index d = 1; d < n; ++d) {
        diag.resize(static_cast<std::size_t>(n - d));
        for (Eigen::Index i = 0; i + d < n; ++i) diag[i] = v(i, i + d);
        std::shuffle(diag.begin(), diag.end(), engine);
        for (Eigen::Index i = 0; i + d < n; ++i) {
            v(i, i + d) = diag[i];
            v(i + d, i) = diag[i];
        }
    }
    // The permuted matrix no longer belongs to any eigenbasis.
    out.overlaps.resize(0, 0);
    out.overlap_matrix_available = false;
    return out;
}

}  // namespace slrt
