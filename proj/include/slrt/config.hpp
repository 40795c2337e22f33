#pragma once

// Run configuration: flat "section.key = value" text, '#' comments, lists as
// comma-separated values. Every key has a default taken from a preset.

#include "slrt/billiard.hpp"
#include "slrt/network.hpp"
#include "slrt/vrh.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace slrt {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line, std::string field)
        : std::runtime_error(what), line_(line), field_(std::move(field)) {}
    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    int line_;
    std::string field_;
};

struct RunConfig {
    std::string preset = "as1";
    BoxSpec box;

    // Bump centre; unset coordinates are drawn per seed in [0.4, 0.6] L.
    std::optional<double> center_x;
    std::optional<double> center_y;

    double converged_energy = 8.0;  // levels below it are trusted
    double buffer_factor = 1.5;     // basis keeps E <= buffer_factor * converged_energy

    // Statistics window, as fractions of the converged level list (by index),
    // or explicit energies when both are given.
    double fraction_lo = 0.5;
    double fraction_hi = 0.8;
    std::optional<double> window_e_lo;
    std::optional<double> window_e_hi;
    bool require_percolation = true;  // shrink to the longest conducting stretch

    DriveShape drive_shape = DriveShape::rectangular;
    double cutoff_spacings = 7.0;  // omega_c / Delta
    double rms_velocity = 1.0;
    double temperature = 1.0;  // internal units, for the heating prediction

    std::vector<double> u_values{1e-4, 1e-3, 1e-2};
    std::vector<double> sigma_values{0.0};
    std::vector<std::uint64_t> seeds{1};

    int histogram_bins = 60;
    std::set<std::string> emit{"averages", "histogram", "rmt_twin", "sweep", "vrh"};
    std::string output_dir = "out";

    ExperimentSpec experiment;

    /// Throws ConfigError (line 0) on inconsistent values.
    void validate() const;
    /// Every key in sorted order, values printed round-trip exactly.
    [[nodiscard]] std::string canonical_text() const;
    /// FNV-1a over the canonical text of the physics keys (output_dir and
    /// emit excluded), as 16 hex digits.
    [[nodiscard]] std::string hash() const;
    [[nodiscard]] DriveSpec drive() const;
};

/// "as1" (40 x 40) or "as20" (200 x 10). Throws ConfigError otherwise.
RunConfig preset_config(const std::string& name);

/// Apply `text` on top of `base`. A "preset" key, if present, must come first
/// and resets the base. Errors carry the line number and key.
RunConfig parse_config(const std::string& text, const RunConfig& base = preset_config("as1"));

RunConfig load_config(const std::string& path, const RunConfig& base = preset_config("as1"));

/// "%.16e", the CSV number format.
std::string format_number(double v);

}  // namespace slrt
