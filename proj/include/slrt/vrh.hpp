#pragma once

// Closed-form estimates: wall formula, element averages, variable range
// hopping, heating predictions.

#include "slrt/billiard.hpp"
#include "slrt/network.hpp"

#include <stdexcept>

namespace slrt {

struct AnalyticEstimates {
    double v_e = 0.0;  // sqrt(2E/m)
    double p0 = 0.0;   // fraction of non-vanishing elements
    bool p0_valid = false;
    double alg_estimate = 0.0;
    double geo_estimate = 0.0;
    double q_estimate = 0.0;
    double g_lrt = 0.0;  // 2D wall formula
};

/// Throws std::invalid_argument for reference_energy <= 0 or u < 0.
AnalyticEstimates analytic_estimates(const BoxSpec& box, const BumpSpec& bump,
                                     double reference_energy);

/// (4/3pi) m^2 v^3 / L_x. Unit-agnostic: SI inputs give J^2 s / m^2.
[[nodiscard]] double wall_formula(double mass, double velocity, double length_x) noexcept;

struct VrhEstimate {
    double q = 0.0;
    double alpha = 0.0;
    double x_omega = 0.0;
    double ratio = 0.0;  // G_SLRT / G_LRT
};

/// alpha = ln(rho omega_c).
[[nodiscard]] double vrh_alpha(double dos, double cutoff);

/// g exp(2 sqrt(alpha (-ln q))). Throws std::domain_error outside
/// 0 < q <= 1, alpha >= 0.
[[nodiscard]] double vrh_x_omega(double q, double alpha, double geometric);

/// q exp(2 sqrt(alpha (-ln q))). Same domain.
[[nodiscard]] double vrh_ratio(double q, double alpha);

VrhEstimate vrh_estimate(double q, double alpha, double geometric);

/// Exponential line shape: the typical element reachable by a hop of range
/// s / rho grows as g exp(2 sqrt(ln s (-ln q))), while the spectrum weighs it
/// by exp(-(s - 1)/(rho omega_c)). The ratio is q times the best trade-off
/// over s >= 1, normalized so that q = 1 gives 1.
[[nodiscard]] double vrh_exponential(double q, double alpha, const DriveSpec& drive);

struct HeatingPrediction {
    double g_coefficient = 0.0;
    DriveSpec drive;
    double diffusion = 0.0;     // G RMS^2
    double temperature = 0.0;   // energy units
    double heating_rate = 0.0;  // D / T
};

HeatingPrediction predict_heating(double g, const DriveSpec& drive, double temperature);

/// Physical (SI) scenario for a cold-atom billiard.
struct ExperimentSpec {
    double mass = 1.4e-25;        // kg
    double length_x = 2e-4;       // m
    double length_y = 1e-5;       // m
    double temperature = 10e-6;   // K
    double velocity = 0.0;        // m/s; 0 derives sqrt(k_B T / m)
    double rms_velocity = 0.015;  // m/s
    double cutoff_spacings = 1000.0;
};

struct ExperimentReport {
    double velocity = 0.0;             // m/s actually used
    double thermal_energy = 0.0;       // J (k_B T)
    double mean_spacing = 0.0;         // J
    double mean_spacing_hz = 0.0;      // Delta / h
    double g_lrt = 0.0;                // J^2 s / m^2
    double diffusion = 0.0;            // J^2 / s
    double heating_rate = 0.0;         // J/s
    double heating_rate_kelvin = 0.0;  // K/s
    // The same scenario in the internal units (hbar = m = 1, lengths in um).
    double velocity_internal = 0.0;
    double g_lrt_internal = 0.0;
    double dos_internal = 0.0;
};

ExperimentReport experiment_estimate(const ExperimentSpec& spec);

inline constexpr double kBoltzmann = 1.380649e-23;   // J/K
inline constexpr double kHbar = 1.054571817e-34;     // J s
inline constexpr double kPlanck = 6.62607015e-34;    // J s

}  // namespace slrt
