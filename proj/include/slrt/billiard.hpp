#pragma once

// Rectangular billiard with a Gaussian floor bump, driven by displacement of
// the x = L_x wall. Units: hbar = 1 throughout.

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace slrt {

/// Raised when a numerical routine cannot meet its accuracy contract.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    [[nodiscard]] double residual() const noexcept { return residual_; }

private:
    double residual_;
};

struct BoxSpec {
    double length_x = 40.0;
    double length_y = 40.0;
    double mass = 1.0;

    [[nodiscard]] double aspect_ratio() const noexcept { return length_x / length_y; }
    /// Throws std::invalid_argument on non-positive lengths or mass.
    void validate() const;
};

struct ModeIndex {
    int nx = 1;
    int ny = 1;

    friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

/// Normalized Gaussian bump U(x,y); sigma = 0 is the point (s-scatterer) limit.
struct BumpSpec {
    double strength = 0.0;  // u, energy x area
    double sigma_x = 0.0;
    double sigma_y = 0.0;
    double center_x = 0.0;
    double center_y = 0.0;

    void validate(const BoxSpec& box) const;
};

/// Basis truncation control. Every mode with E <= buffer_factor * e_hi is
/// retained, subject to the per-direction caps.
struct BasisSpec {
    int max_mode_x = 0;
    int max_mode_y = 0;
    double e_lo = 0.0;
    double e_hi = 0.0;
    double buffer_factor = 1.5;

    /// Caps chosen so that the energy cutoff alone decides the retained set.
    static BasisSpec for_window(const BoxSpec& box, double e_lo, double e_hi,
                                double buffer_factor = 1.5);
    [[nodiscard]] double energy_cutoff() const noexcept { return buffer_factor * e_hi; }
};

/// Eigenvalues of H0 + uU in [e_lo, e_hi] together with the squared wall
/// perturbation |V_nm|^2 in that eigenbasis. Immutable once built.
struct PerturbedSystem {
    std::vector<double> energies;          // ascending
    Eigen::MatrixXd v_squared;             // symmetric, >= 0, indexed like energies
    double dos = 0.0;                      // rho_E
    double mean_spacing = 0.0;             // 1 / rho_E
    bool overlap_matrix_available = false;
    Eigen::MatrixXd overlaps;              // basis x levels, only when requested
    std::vector<ModeIndex> dominant_mode;  // largest-weight unperturbed mode per level
    std::vector<double> dominant_weight;
    std::size_t basis_size = 0;

    [[nodiscard]] std::size_t size() const noexcept { return energies.size(); }
};

/// Build a system from externally supplied levels and matrix (synthetic
/// ensembles, tests). Validates shape and symmetry.
PerturbedSystem make_system(std::vector<double> energies, Eigen::MatrixXd v_squared, double dos);

[[nodiscard]] double box_energy(const ModeIndex& mode, const BoxSpec& box) noexcept;
[[nodiscard]] double dos(const BoxSpec& box) noexcept;
[[nodiscard]] double wall_matrix_element(const ModeIndex& n, const ModeIndex& m,
                                         const BoxSpec& box) noexcept;

/// Box eigenfunction (2/sqrt(LxLy)) sin(nx pi x/Lx) sin(ny pi y/Ly).
[[nodiscard]] double box_wavefunction(const ModeIndex& mode, const BoxSpec& box, double x,
                                      double y) noexcept;

/// <n|U|m> for the normalized Gaussian. Throws NumericalError when the
/// quadrature misses its 1e-12 absolute tolerance.
[[nodiscard]] double bump_matrix_element(const ModeIndex& n, const ModeIndex& m,
                                         const BumpSpec& bump, const BoxSpec& box);

/// Modes with E <= cutoff (and within the caps), sorted by (E, nx, ny).
std::vector<ModeIndex> enumerate_modes(const BoxSpec& box, double energy_cutoff, int max_mode_x,
                                       int max_mode_y);

/// 1D factor tables of the separable bump matrix:
/// U_{nm} = factor_x(nx, mx) * factor_y(ny, my).
class BumpFactors {
public:
    BumpFactors(const BumpSpec& bump, const BoxSpec& box, int max_mode_x, int max_mode_y);
    [[nodiscard]] double operator()(const ModeIndex& n, const ModeIndex& m) const noexcept;

private:
    // cos_x_[k] = (2/Lx) int_0^Lx cos(k pi x / Lx) g(x - x0) dx, same for y.
    std::vector<double> cos_x_;
    std::vector<double> cos_y_;
};

struct BuildOptions {
    bool keep_overlaps = false;
};

/// Caches the retained modes and the bump matrix so that several deformation
/// strengths can be diagonalized against one geometry.
class SystemBuilder {
public:
    SystemBuilder(const BoxSpec& box, const BumpSpec& bump, const BasisSpec& basis);

    /// Diagonalize H0 + uU and keep the levels inside the basis window.
    [[nodiscard]] PerturbedSystem build(double u, const BuildOptions& options = {}) const;

    /// Every eigenvalue of the retained basis with its dominant mode.
    struct Level {
        double energy;
        ModeIndex dominant;
        double weight;
    };
    [[nodiscard]] std::vector<Level> full_spectrum(double u) const;

    [[nodiscard]] const std::vector<ModeIndex>& modes() const noexcept { return modes_; }
    [[nodiscard]] const BoxSpec& box() const noexcept { return box_; }
    [[nodiscard]] const BasisSpec& basis() const noexcept { return basis_; }

private:
    [[nodiscard]] Eigen::MatrixXd hamiltonian(double u) const;

    BoxSpec box_;
    BumpSpec bump_;
    BasisSpec basis_;
    std::vector<ModeIndex> modes_;
    Eigen::MatrixXd bump_matrix_;
};

PerturbedSystem build_perturbed_system(const BoxSpec& box, const BumpSpec& bump,
                                       const BasisSpec& basis, double u,
                                       const BuildOptions& options = {});

}  // namespace slrt
