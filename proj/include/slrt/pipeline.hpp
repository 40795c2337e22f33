#pragma once

// Orchestration shared by the CLI and the acceptance suite: statistics window,
// bump placement, and the per-(u, sigma, seed) measurement.

#include "slrt/billiard.hpp"
#include "slrt/config.hpp"
#include "slrt/matrixstats.hpp"
#include "slrt/network.hpp"
#include "slrt/vrh.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace slrt {

struct StatisticsWindow {
    double e_lo = 0.0;
    double e_hi = 0.0;
    std::size_t level_lo = 0;  // unperturbed level indices, inclusive
    std::size_t level_hi = 0;
    std::size_t converged_levels = 0;
    bool shrunk = false;  // reduced to the longest conducting stretch
};

/// Window over the unperturbed spectrum. Edges sit halfway between distinct
/// levels so that small deformations cannot move a level across them.
StatisticsWindow statistics_window(const RunConfig& config);

/// Bump of width sigma at the configured centre, or at a position drawn from
/// the seed in [0.4, 0.6] L_x x [0.4, 0.6] L_y.
BumpSpec place_bump(const RunConfig& config, double sigma, std::uint64_t seed, double u = 0.0);

/// Engine seed for one consumer (stream tag) at one sweep point.
std::uint64_t point_seed(std::uint64_t seed, std::uint64_t stream, double u, double sigma);

BasisSpec basis_for(const RunConfig& config, const StatisticsWindow& window);

struct SweepRow {
    double u = 0.0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    double center_x = 0.0;
    double center_y = 0.0;
    std::size_t levels = 0;
    AveragesReport averages;  // averages.network holds slrt
    double slrt_untextured = 0.0;
    double slrt_rmt_twin = 0.0;
    double vrh_ratio = 0.0;
    double g_lrt = 0.0;
    double g_slrt = 0.0;
    AnalyticEstimates estimates;
    std::string status = "ok";

    [[nodiscard]] bool ok() const noexcept { return status == "ok"; }
};

/// Optional by-products of one measurement.
struct PointDetail {
    PerturbedSystem system;
    BandSelection band;
    BondNetwork network;
};

/// One diagonalization plus every average for deformation u. Failures are
/// reported through the status field, never thrown.
SweepRow measure_point(const SystemBuilder& builder, const RunConfig& config,
                       const StatisticsWindow& window, double u, double sigma,
                       std::uint64_t seed, PointDetail* detail = nullptr);

using ProgressFn = std::function<void(const SweepRow&)>;

/// Every (u, sigma, seed) of the config, rows sorted by (u, sigma, seed).
/// Geometries are spread over `jobs` worker threads; the output does not
/// depend on scheduling.
std::vector<SweepRow> run_sweep(const RunConfig& config, int jobs,
                                const ProgressFn& progress = {});

}  // namespace slrt
