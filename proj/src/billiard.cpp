#include "slrt/billiard.hpp"

#include "slrt/eigensolver.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <tuple>

namespace slrt {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kQuadratureTolerance = 1e-12;
// Gaussian tails beyond this many widths are below 1e-36 of the peak.
constexpr double kGaussianReach = 13.0;

bool in_open_interval(double v, double hi) { return v > 0.0 && v < hi; }

/// (2/L) * int_0^L cos(k pi x / L) g_sigma(x - c) dx for a normalized 1D
/// Gaussian g_sigma. sigma = 0 is the delta-function limit.
double cos_moment(int k, double length, double center, double sigma) {
    const double wave = k * kPi / length;
    if (sigma == 0.0) return 2.0 / length * std::cos(wave * center);

    const double lo = std::max(0.0, center - kGaussianReach * sigma);
    const double hi = std::min(length, center + kGaussianReach * sigma);
    const double norm = 1.0 / (std::sqrt(2.0 * kPi) * sigma);
    auto integrand = [&](double x) {
        const double z = (x - center) / sigma;
        return std::cos(wave * x) * norm * std::exp(-0.5 * z * z);
    };

    // Panels no wider than one width or half an oscillation period keep the
    // 61-point rule in its asymptotic regime.
    double panel = sigma;
    if (k > 0) panel = std::min(panel, length / k);
    const auto panels = static_cast<int>(std::ceil((hi - lo) / panel));

    // The error is the change from one panel to its two halves, which bounds
    // the coarse value; the rule's own Kronrod-Gauss difference only bounds the
    // embedded Gauss rule and overstates the error by orders of magnitude.
    using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
    double total = 0.0;
    double error = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = lo + (hi - lo) * p / panels;
        const double b = lo + (hi - lo) * (p + 1) / panels;
        const double mid = 0.5 * (a + b);
        const double whole = Rule::integrate(integrand, a, b, 0);
        const double halves = Rule::integrate(integrand, a, mid, 0) + Rule::integrate(integrand, mid, b, 0);
        total += halves;
        error += std::abs(halves - whole);
    }
    total *= 2.0 / length;
    error *= 2.0 / length;
    if (error > kQuadratureTolerance) {
        std::ostringstream msg;
        msg << "bump quadrature did not converge (k=" << k << ", sigma=" << sigma
            << ", error=" << error << ")";
        throw NumericalError(msg.str(), error);
    }
    return total;
}

std::vector<double> cos_moments(int max_k, double length, double center, double sigma) {
    std::vector<double> out(static_cast<std::size_t>(max_k) + 1);
    for (int k = 0; k <= max_k; ++k) out[k] = cos_moment(k, length, center, sigma);
    return out;
}

double sine_overlap(const std::vector<double>& moments, int n, int m) {
    return 0.5 * (moments[std::abs(n - m)] - moments[n + m]);
}

int mode_cap(double length, double mass, double energy) {
    // Largest n with (pi^2 / 2m)(n / L)^2 <= energy.
    return static_cast<int>(std::floor(length * std::sqrt(2.0 * mass * energy) / kPi)) + 1;
}

}  // namespace

void BoxSpec::validate() const {
    if (!(length_x > 0.0) || !(length_y > 0.0) || !(mass > 0.0) || !std::isfinite(length_x) ||
        !std::isfinite(length_y) || !std::isfinite(mass)) {
        throw std::invalid_argument("box: lengths and mass must be positive and finite");
    }
}

void BumpSpec::validate(const BoxSpec& box) const {
    if (!std::isfinite(strength)) throw std::invalid_argument("bump: strength must be finite");
    if (!(sigma_x >= 0.0) || !(sigma_y >= 0.0)) {
        throw std::invalid_argument("bump: widths must be non-negative");
    }
    if (!in_open_interval(center_x, box.length_x) || !in_open_interval(center_y, box.length_y)) {
        throw std::invalid_argument("bump: center must lie strictly inside the box");
    }
}

BasisSpec BasisSpec::for_window(const BoxSpec& box, double e_lo, double e_hi,
                                double buffer_factor) {
    BasisSpec spec;
    spec.e_lo = e_lo;
    spec.e_hi = e_hi;
    spec.buffer_factor = buffer_factor;
    const double cutoff = spec.energy_cutoff();
    spec.max_mode_x = mode_cap(box.length_x, box.mass, cutoff);
    spec.max_mode_y = mode_cap(box.length_y, box.mass, cutoff);
    return spec;
}

double box_energy(const ModeIndex& mode, const BoxSpec& box) noexcept {
    const double kx = mode.nx / box.length_x;
    const double ky = mode.ny / box.length_y;
    return kPi * kPi / (2.0 * box.mass) * (kx * kx + ky * ky);
}

double dos(const BoxSpec& box) noexcept {
    return box.mass * box.length_x * box.length_y / (2.0 * kPi);
}

double wall_matrix_element(const ModeIndex& n, const ModeIndex& m, const BoxSpec& box) noexcept {
    if (n.ny != m.ny) return 0.0;
    const double lx3 = box.length_x * box.length_x * box.length_x;
    return -kPi * kPi / (box.mass * lx3) * n.nx * m.nx;
}

double box_wavefunction(const ModeIndex& mode, const BoxSpec& box, double x, double y) noexcept {
    return 2.0 / std::sqrt(box.length_x * box.length_y) *
           std::sin(mode.nx * kPi * x / box.length_x) * std::sin(mode.ny * kPi * y / box.length_y);
}

double bump_matrix_element(const ModeIndex& n, const ModeIndex& m, const BumpSpec& bump,
                           const BoxSpec& box) {
    auto factor = [](int a, int b, double length, double center, double sigma) {
        const double diff = cos_moment(std::abs(a - b), length, center, sigma);
        const double sum = cos_moment(a + b, length, center, sigma);
        return 0.5 * (diff - sum);
    };
    return factor(n.nx, m.nx, box.length_x, bump.center_x, bump.sigma_x) *
           factor(n.ny, m.ny, box.length_y, bump.center_y, bump.sigma_y);
}

std::vector<ModeIndex> enumerate_modes(const BoxSpec& box, double energy_cutoff, int max_mode_x,
                                       int max_mode_y) {
    std::vector<std::pair<double, ModeIndex>> found;
    for (int nx = 1; nx <= max_mode_x; ++nx) {
        for (int ny = 1; ny <= max_mode_y; ++ny) {
            const ModeIndex mode{nx, ny};
            const double e = box_energy(mode, box);
            if (e > energy_cutoff) break;
            found.emplace_back(e, mode);
        }
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        return std::tie(a.first, a.second.nx, a.second.ny) <
               std::tie(b.first, b.second.nx, b.second.ny);
    });
    std::vector<ModeIndex> out;
    out.reserve(found.size());
    for (const auto& f : found) out.push_back(f.second);
    return out;
}

BumpFactors::BumpFactors(const BumpSpec& bump, const BoxSpec& box, int max_mode_x,
                         int max_mode_y)
    : cos_x_(cos_moments(2 * max_mode_x, box.length_x, bump.center_x, bump.sigma_x)),
      cos_y_(cos_moments(2 * max_mode_y, box.length_y, bump.center_y, bump.sigma_y)) {}

double BumpFactors::operator()(const ModeIndex& n, const ModeIndex& m) const noexcept {
    return sine_overlap(cos_x_, n.nx, m.nx) * sine_overlap(cos_y_, n.ny, m.ny);
}

PerturbedSystem make_system(std::vector<double> energies, Eigen::MatrixXd v_squared, double dos) {
    const auto n = static_cast<Eigen::Index>(energies.size());
    if (v_squared.rows() != n || v_squared.cols() != n) {
        throw std::invalid_argument("make_system: matrix shape does not match level count");
    }
    if (!(dos > 0.0)) throw std::invalid_argument("make_system: dos must be positive");
    if (!std::is_sorted(energies.begin(), energies.end())) {
        throw std::invalid_argument("make_system: energies must be ascending");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double v = v_squared(i, j);
            if (!(v >= 0.0) || v != v_squared(j, i)) {
                throw std::invalid_argument("make_system: matrix must be symmetric and >= 0");
            }
        }
    }
    PerturbedSystem sys;
    sys.energies = std::move(energies);
    sys.v_squared = std::move(v_squared);
    sys.dos = dos;
    sys.mean_spacing = 1.0 / dos;
    sys.basis_size = sys.energies.size();
    return sys;
}

SystemBuilder::SystemBuilder(const BoxSpec& box, const BumpSpec& bump, const BasisSpec& basis)
    : box_(box), bump_(bump), basis_(basis) {
    box_.validate();
    bump_.validate(box_);
    if (!(basis_.e_lo < basis_.e_hi) || basis_.e_lo < 0.0) {
        throw std::invalid_argument("basis: energy window must satisfy 0 <= e_lo < e_hi");
    }
    if (!(basis_.buffer_factor > 1.0)) {
        throw std::invalid_argument("basis: buffer factor must exceed 1");
    }
    if (basis_.max_mode_x < 1 || basis_.max_mode_y < 1) {
        throw std::invalid_argument("basis: mode caps must be positive");
    }
    modes_ = enumerate_modes(box_, basis_.energy_cutoff(), basis_.max_mode_x, basis_.max_mode_y);
    if (modes_.empty() || box_energy(modes_.back(), box_) <= basis_.e_hi ||
        box_energy(modes_.front(), box_) > basis_.e_hi) {
        throw std::invalid_argument("window not covered by basis");
    }

    const auto n = static_cast<Eigen::Index>(modes_.size());
    const BumpFactors factors(bump_, box_, basis_.max_mode_x, basis_.max_mode_y);
    bump_matrix_.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i <= j; ++i) {
            const double v = factors(modes_[i], modes_[j]);
            bump_matrix_(i, j) = v;
            bump_matrix_(j, i) = v;
        }
    }
}

Eigen::MatrixXd SystemBuilder::hamiltonian(double u) const {
    Eigen::MatrixXd h = u * bump_matrix_;
    for (Eigen::Index i = 0; i < h.rows(); ++i) h(i, i) += box_energy(modes_[i], box_);
    return h;
}

PerturbedSystem SystemBuilder::build(double u, const BuildOptions& options) const {
    const auto basis_n = static_cast<Eigen::Index>(modes_.size());
    std::vector<double> values;
    std::vector<Eigen::Index> dominant;
    Eigen::MatrixXd vectors;

    if (u == 0.0) {
        // Unperturbed: the eigenvectors are basis vectors, so take the exact
        // route and keep the selection-rule zeros exact.
        for (Eigen::Index a = 0; a < basis_n; ++a) {
            const double e = box_energy(modes_[a], box_);
            if (e >= basis_.e_lo && e <= basis_.e_hi) {
                values.push_back(e);
                dominant.push_back(a);
            }
        }
        vectors = Eigen::MatrixXd::Zero(basis_n, static_cast<Eigen::Index>(values.size()));
        for (std::size_t i = 0; i < values.size(); ++i) {
            vectors(dominant[i], static_cast<Eigen::Index>(i)) = 1.0;
        }
    } else {
        auto eig = symmetric_eigen_in_range(hamiltonian(u), basis_.e_lo, basis_.e_hi, true);
        const auto count = eig.values.size();
        std::vector<Eigen::Index> order(static_cast<std::size_t>(count));
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::vector<Eigen::Index> dom(order.size());
        for (Eigen::Index i = 0; i < count; ++i) {
            eig.vectors.col(i).cwiseAbs().maxCoeff(&dom[i]);
        }
        // Degeneracy-safe order: ties go by the dominant basis state.
        std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            return std::tie(eig.values[a], dom[a]) < std::tie(eig.values[b], dom[b]);
        });
        vectors.resize(basis_n, count);
        for (Eigen::Index i = 0; i < count; ++i) {
            const Eigen::Index src = order[i];
            values.push_back(eig.values[src]);
            dominant.push_back(dom[src]);
            vectors.col(i) = eig.vectors.col(src);
        }
    }

    const auto levels = static_cast<Eigen::Index>(values.size());
    if (levels == 0) throw std::invalid_argument("window not covered by basis: no levels");

    // V is rank one inside each n_y channel: V = -kappa * W^T W with
    // W(c, i) = sum_{a in channel c} nx(a) T(a, i).
    int channels = 0;
    for (const auto& m : modes_) channels = std::max(channels, m.ny);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(channels, levels);
    for (Eigen::Index a = 0; a < basis_n; ++a) {
        w.row(modes_[a].ny - 1).noalias() += modes_[a].nx * vectors.row(a);
    }
    const double kappa = kPi * kPi / (box_.mass * box_.length_x * box_.length_x * box_.length_x);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(levels, levels);
    gram.selfadjointView<Eigen::Upper>().rankUpdate(w.transpose());
    gram.triangularView<Eigen::StrictlyLower>() = gram.transpose();

    PerturbedSystem sys;
    sys.energies = std::move(values);
    sys.v_squared = (kappa * gram).array().square().matrix();
    sys.dos = slrt::dos(box_);
    sys.mean_spacing = 1.0 / sys.dos;
    sys.basis_size = modes_.size();
    sys.dominant_mode.reserve(dominant.size());
    sys.dominant_weight.reserve(dominant.size());
    for (Eigen::Index i = 0; i < levels; ++i) {
        const double amp = vectors(dominant[i], i);
        sys.dominant_mode.push_back(modes_[dominant[i]]);
        sys.dominant_weight.push_back(amp * amp);
    }
    if (options.keep_overlaps) {
        sys.overlaps = std::move(vectors);
        sys.overlap_matrix_available = true;
    }
    return sys;
}

std::vector<SystemBuilder::Level> SystemBuilder::full_spectrum(double u) const {
    std::vector<Level> out;
    out.reserve(modes_.size());
    if (u == 0.0) {
        for (const auto& m : modes_) out.push_back({box_energy(m, box_), m, 1.0});
        return out;
    }
    const auto eig = symmetric_eigen(hamiltonian(u), true);
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        Eigen::Index dom = 0;
        eig.vectors.col(i).cwiseAbs().maxCoeff(&dom);
        const double amp = eig.vectors(dom, i);
        out.push_back({eig.values[i], modes_[dom], amp * amp});
    }
    std::stable_sort(out.begin(), out.end(), [](const Level& a, const Level& b) {
        return std::tie(a.energy, a.dominant.nx, a.dominant.ny) <
               std::tie(b.energy, b.dominant.nx, b.dominant.ny);
    });
    return out;
}

PerturbedSystem build_perturbed_system(const BoxSpec& box, const BumpSpec& bump,
                                       const BasisSpec& basis, double u,
                                       const BuildOptions& options) {
    return SystemBuilder(box, bump, basis).build(u, options);
}

}  // namespace slrt
