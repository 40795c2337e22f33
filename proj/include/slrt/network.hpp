#pragma once

// Energy-space resistor network built from Fermi-golden-rule rates.

#include "slrt/billiard.hpp"
#include "slrt/matrixstats.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace slrt {

enum class DriveShape { rectangular, exponential };

struct DriveSpec {
    DriveShape shape = DriveShape::rectangular;
    double cutoff = 0.0;        // omega_c
    double rms_velocity = 0.0;  // RMS(dR/dt)

    void validate() const;
    /// Normalized line shape F(omega).
    [[nodiscard]] double line_shape(double omega) const noexcept;
    /// Power spectrum S(omega) = RMS^2 F(omega).
    [[nodiscard]] double power_spectrum(double omega) const noexcept {
        return rms_velocity * rms_velocity * line_shape(omega);
    }
    /// Largest |omega| that carries a bond. The exponential tail is cut at
    /// 40 omega_c, where F < 5e-18.
    [[nodiscard]] double reach() const noexcept;
};

[[nodiscard]] const char* to_string(DriveShape shape) noexcept;
/// Accepts "rectangular" / "exponential"; throws std::invalid_argument.
DriveShape parse_drive_shape(const std::string& text);

struct Bond {
    std::size_t n = 0;
    std::size_t m = 0;
    double omega = 0.0;
    double g = 0.0;
};

/// When buffer > 0 the lowest and highest `buffer` nodes are shorted into the
/// source and sink electrodes (source_node = 0, sink_node = N-1); with
/// buffer = 0 source and sink are arbitrary single nodes.
struct BondNetwork {
    std::vector<double> node_energies;
    std::vector<Bond> bonds;
    std::size_t source_node = 0;
    std::size_t sink_node = 0;
    std::size_t buffer = 0;

    [[nodiscard]] std::size_t size() const noexcept { return node_energies.size(); }
};

/// Bond conductance 2 rho^-3 x / omega^2 F(omega). |omega| is floored at
/// 1e-9 Delta, so exactly degenerate levels act as near-shorts.
[[nodiscard]] double bond_conductance(double x, double omega, double dos,
                                      const DriveSpec& drive) noexcept;

BondNetwork assemble_bonds(const PerturbedSystem& system, const DriveSpec& drive, double e_lo,
                           double e_hi);

/// Same network with every in-reach |V_nm|^2 replaced by one.
BondNetwork reference_network(const PerturbedSystem& system, const DriveSpec& drive,
                              double e_lo, double e_hi);

struct ResistanceResult {
    double resistance = 0.0;  // +inf when source and sink are disconnected
    double backward_error = 0.0;
    bool connected = false;
    std::size_t source_component = 0;  // node counts, electrodes included
    std::size_t sink_component = 0;
    std::size_t components = 0;
};

/// Kirchhoff two-terminal resistance by ordered star-mesh elimination of the
/// interior nodes. Every update is a sum of positive terms, so the result
/// keeps full relative accuracy across many decades of conductance. Throws
/// NumericalError when the potentials miss a 1e-10 normwise backward error.
ResistanceResult two_point_resistance(const BondNetwork& net);

struct SlrtResult {
    double value = 0.0;  // <<x>>; 0 on percolation failure
    double r_actual = 0.0;
    double r_ref = 0.0;
    bool percolates = false;
    std::size_t source_component = 0;
    std::size_t sink_component = 0;
    std::string diagnostic;
};

/// <<x>> = R_ref / R_actual.
SlrtResult slrt_average(const PerturbedSystem& system, const DriveSpec& drive, double e_lo,
                        double e_hi);

/// pi rho <<x>>.
[[nodiscard]] double g_slrt(const PerturbedSystem& system, const DriveSpec& drive, double e_lo,
                            double e_hi);

/// pi rho <<x>>_a over the band |omega| <= omega_c.
[[nodiscard]] double g_lrt_kubo(const PerturbedSystem& system, const DriveSpec& drive,
                                double e_lo, double e_hi);

}  // namespace slrt
