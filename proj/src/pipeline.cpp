#include "slrt/pipeline.hpp"

#include "slrt/rmt.hpp"
#include "slrt/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <limits>
#include <mutex>
#include <random>
#include <thread>
#include <tuple>

namespace slrt {
namespace {

constexpr double kPi = 3.14159265358979323846;
// Gaps this close to the cutoff are treated as breaks: deformation shifts the
// levels slightly and the choice must not flip with u.
constexpr double kGapMargin = 0.9;

std::uint64_t bits_of(double v) {
    std::uint64_t b = 0;
    std::memcpy(&b, &v, sizeof b);
    return b;
}

}  // namespace

std::uint64_t point_seed(std::uint64_t seed, std::uint64_t stream, double u, double sigma) {
    return derive_seed(derive_seed(derive_seed(seed, stream), bits_of(u)), bits_of(sigma));
}

StatisticsWindow statistics_window(const RunConfig& config) {
    config.validate();
    const auto& box = config.box;
    const double caps_energy = config.converged_energy;
    const auto caps = BasisSpec::for_window(box, 0.0, caps_energy, 1.0 + 1e-12);
    const auto modes = enumerate_modes(box, caps_energy, caps.max_mode_x, caps.max_mode_y);
    std::vector<double> e;
    e.reserve(modes.size());
    for (const auto& m : modes) e.push_back(box_energy(m, box));

    StatisticsWindow w;
    w.converged_levels = e.size();
    if (e.size() < 4) throw ConfigError("basis.converged_energy: too few levels", 0, "basis");

    if (config.window_e_lo) {
        w.e_lo = *config.window_e_lo;
        w.e_hi = *config.window_e_hi;
        w.level_lo = static_cast<std::size_t>(std::lower_bound(e.begin(), e.end(), w.e_lo) - e.begin());
        w.level_hi = static_cast<std::size_t>(std::upper_bound(e.begin(), e.end(), w.e_hi) - e.begin());
        if (w.level_hi <= w.level_lo) throw ConfigError("window: contains no level", 0, "window");
        w.level_hi -= 1;
        return w;
    }

    const auto n = e.size();
    std::size_t lo = static_cast<std::size_t>(std::floor(config.fraction_lo * n));
    std::size_t hi = std::min(n - 1, static_cast<std::size_t>(std::ceil(config.fraction_hi * n)) - 1);
    // Keep degenerate groups whole.
    while (lo > 0 && e[lo - 1] == e[lo]) --lo;
    while (hi + 1 < n && e[hi + 1] == e[hi]) ++hi;

    if (config.require_percolation) {
        const double limit = kGapMargin * config.cutoff_spacings / dos(box);
        const double reach = config.drive_shape == DriveShape::rectangular ? limit : 40.0 * limit;
        std::size_t best_lo = lo;
        std::size_t best_hi = lo;
        std::size_t run_lo = lo;
        for (std::size_t i = lo + 1; i <= hi + 1; ++i) {
            if (i == hi + 1 || e[i] - e[i - 1] >= reach) {
                if (i - 1 - run_lo > best_hi - best_lo) {
                    best_lo = run_lo;
                    best_hi = i - 1;
                }
                run_lo = i;
            }
        }
        w.shrunk = best_lo != lo || best_hi != hi;
        lo = best_lo;
        hi = best_hi;
    }

    w.level_lo = lo;
    w.level_hi = hi;
    w.e_lo = lo > 0 ? 0.5 * (e[lo - 1] + e[lo]) : 0.5 * e[lo];
    w.e_hi = hi + 1 < n ? 0.5 * (e[hi] + e[hi + 1]) : e[hi] + 0.5 / dos(box);
    return w;
}

BumpSpec place_bump(const RunConfig& config, double sigma, std::uint64_t seed, double u) {
    BumpSpec bump;
    bump.strength = u;
    bump.sigma_x = sigma;
    bump.sigma_y = sigma;
    std::mt19937_64 engine(derive_seed(seed, kStreamBumpPosition));
    std::uniform_real_distribution<double> unit(0.4, 0.6);
    const double fx = unit(engine);
    const double fy = unit(engine);
    bump.center_x = config.center_x.value_or(fx * config.box.length_x);
    bump.center_y = config.center_y.value_or(fy * config.box.length_y);
    return bump;
}

BasisSpec basis_for(const RunConfig& config, const StatisticsWindow& window) {
    return BasisSpec::for_window(config.box, window.e_lo, window.e_hi, config.buffer_factor);
}

SweepRow measure_point(const SystemBuilder& builder, const RunConfig& config,
                       const StatisticsWindow& window, double u, double sigma,
                       std::uint64_t seed, PointDetail* detail) {
    SweepRow row;
    row.u = u;
    row.sigma = sigma;
    row.seed = seed;
    const auto bump = place_bump(config, sigma, seed, u);
    row.center_x = bump.center_x;
    row.center_y = bump.center_y;
    const auto drive = config.drive();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.slrt_untextured = nan;
    row.slrt_rmt_twin = nan;
    row.vrh_ratio = nan;

    try {
        row.estimates = analytic_estimates(config.box, bump, 0.5 * (window.e_lo + window.e_hi));
        const auto system = builder.build(u);
        row.levels = system.size();
        const auto band = select_band(system, window.e_lo, window.e_hi, drive.cutoff);
        row.averages = summarize(band);
        const double rho = system.dos;
        row.g_lrt = kPi * rho * row.averages.algebraic;
        const double alpha = vrh_alpha(rho, drive.cutoff);
        row.vrh_ratio = row.averages.sparsity_q > 0.0 ? vrh_ratio(row.averages.sparsity_q, alpha)
                                                      : 0.0;

        const auto physical = slrt_average(system, drive, window.e_lo, window.e_hi);
        row.averages.network = physical.value;
        row.g_slrt = kPi * rho * physical.value;

        const auto flat = untexture(system, point_seed(seed, kStreamUntexture, u, sigma));
        row.slrt_untextured = slrt_average(flat, drive, window.e_lo, window.e_hi).value;

        if (row.averages.geometric > 0.0) {
            const auto twin = rmt_twin(system, drive, window.e_lo, window.e_hi,
                                       point_seed(seed, kStreamRmtTwin, u, sigma));
            row.slrt_rmt_twin = slrt_average(twin, drive, window.e_lo, window.e_hi).value;
        }
        if (!physical.percolates) row.status = "percolation_failure";

        if (detail) {
            detail->network = assemble_bonds(system, drive, window.e_lo, window.e_hi);
            detail->band = band;
            detail->system = system;
        }
    } catch (const NumericalError& e) {
        row.status = std::string("numerical_error: ") + e.what();
    } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
    }
    return row;
}

std::vector<SweepRow> run_sweep(const RunConfig& config, int jobs, const ProgressFn& progress) {
    config.validate();
    if (config.u_values.empty()) throw ConfigError("sweep.u_values: empty", 0, "sweep.u_values");
    const auto window = statistics_window(config);
    const auto basis = basis_for(config, window);

    struct Geometry {
        double sigma;
        std::uint64_t seed;
    };
    std::vector<Geometry> geometries;
    for (const double s : config.sigma_values) {
        for (const auto seed : config.seeds) geometries.push_back({s, seed});
    }

    std::vector<std::vector<SweepRow>> results(geometries.size());
    std::atomic<std::size_t> next{0};
    std::mutex progress_lock;
    auto worker = [&] {
        for (std::size_t g = next++; g < geometries.size(); g = next++) {
            const auto& geo = geometries[g];
            auto& out = results[g];
            try {
                const SystemBuilder builder(config.box, place_bump(config, geo.sigma, geo.seed),
                                            basis);
                for (const double u : config.u_values) {
                    out.push_back(measure_point(builder, config, window, u, geo.sigma, geo.seed));
                    if (progress) {
                        std::lock_guard<std::mutex> lock(progress_lock);
                        progress(out.back());
                    }
                }
            } catch (const std::exception& e) {
                // The geometry itself failed (e.g. quadrature): one status row per u.
                out.clear();
                for (const double u : config.u_values) {
                    SweepRow row;
                    row.u = u;
                    row.sigma = geo.sigma;
                    row.seed = geo.seed;
                    row.status = std::string("error: ") + e.what();
                    out.push_back(row);
                }
            }
        }
    };
    const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(geometries.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::vector<SweepRow> rows;
    for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return std::tie(a.u, a.sigma, a.seed) < std::tie(b.u, b.sigma, b.seed);
    });
    return rows;
}

}  // namespace slrt
