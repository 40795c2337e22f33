#include "slrt/billiard.hpp"
#include "slrt/eigensolver.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace slrt;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Generic (non-commensurate) box so that the spectrum has no degeneracies.
BoxSpec odd_box() { return {7.3, 5.1, 1.0}; }

/// Brute-force <n|U|m>: composite Simpson over the whole box on a fine grid,
/// with the 2D Gaussian evaluated directly (no separation).
double bump_element_2d(const ModeIndex& n, const ModeIndex& m, const BumpSpec& b,
                       const BoxSpec& box, int grid) {
    const double hx = box.length_x / grid;
    const double hy = box.length_y / grid;
    auto weight = [grid](int i) { return (i == 0 || i == grid) ? 1.0 : (i % 2 ? 4.0 : 2.0); };
    const double norm = 1.0 / (2.0 * kPi * b.sigma_x * b.sigma_y);
    double sum = 0.0;
    for (int i = 0; i <= grid; ++i) {
        const double x = i * hx;
        const double gx = std::exp(-0.5 * std::pow((x - b.center_x) / b.sigma_x, 2));
        double row = 0.0;
        for (int j = 0; j <= grid; ++j) {
            const double y = j * hy;
            const double gy = std::exp(-0.5 * std::pow((y - b.center_y) / b.sigma_y, 2));
            row += weight(j) * box_wavefunction(n, box, x, y) * box_wavefunction(m, box, x, y) *
                   gx * gy;
        }
        sum += weight(i) * row;
    }
    return sum * norm * hx * hy / 9.0;
}

}  // namespace

TEST_CASE("box energies and density of states") {
    const BoxSpec square{40.0, 40.0, 1.0};
    CHECK(box_energy({1, 1}, square) == doctest::Approx(6.1685e-3).epsilon(1e-4));
    CHECK(box_energy({2, 1}, square) == box_energy({1, 2}, square));

    BoxSpec wide = square;
    wide.length_x *= 2.0;
    const double ex = kPi * kPi / 2.0 / (40.0 * 40.0);
    CHECK(box_energy({1, 1}, square) - ex == doctest::Approx(box_energy({1, 1}, wide) - ex / 4.0));

    CHECK(dos(square) == doctest::Approx(254.648).epsilon(1e-5));
    CHECK(dos(BoxSpec{200.0, 10.0, 1.0}) == doctest::Approx(318.31).epsilon(1e-5));
    CHECK(dos(BoxSpec{40.0, 40.0, 2.0}) == doctest::Approx(2.0 * dos(square)));
    CHECK(square.aspect_ratio() == 1.0);
    CHECK(BoxSpec{200.0, 10.0, 1.0}.aspect_ratio() == 20.0);
}

TEST_CASE("wall matrix element selection rule") {
    const BoxSpec box{40.0, 40.0, 1.0};
    CHECK(wall_matrix_element({2, 3}, {5, 3}, box) ==
          doctest::Approx(-kPi * kPi * 10.0 / 64000.0));
    CHECK(wall_matrix_element({2, 3}, {5, 3}, box) == doctest::Approx(-1.5421e-3).epsilon(1e-4));
    CHECK(wall_matrix_element({2, 3}, {5, 4}, box) == 0.0);
    CHECK(wall_matrix_element({5, 3}, {2, 3}, box) == wall_matrix_element({2, 3}, {5, 3}, box));
}

TEST_CASE("bump matrix elements") {
    const BoxSpec box{40.0, 40.0, 1.0};
    BumpSpec point{1.0, 0.0, 0.0, 20.0, 20.0};
    CHECK(bump_matrix_element({1, 1}, {1, 1}, point, box) == doctest::Approx(2.5e-3));
    CHECK(bump_matrix_element({2, 1}, {1, 1}, point, box) == doctest::Approx(0.0).scale(1.0));
    CHECK(std::abs(bump_matrix_element({4, 3}, {4, 5}, point, box)) < 1e-18);

    SUBCASE("point limit equals the product of wavefunctions") {
        const BoxSpec b = odd_box();
        const BumpSpec p{1.0, 0.0, 0.0, 3.1, 2.2};
        for (const ModeIndex n : {ModeIndex{1, 1}, ModeIndex{3, 2}, ModeIndex{7, 4}}) {
            for (const ModeIndex m : {ModeIndex{2, 1}, ModeIndex{5, 3}}) {
                const double oracle = box_wavefunction(n, b, 3.1, 2.2) * box_wavefunction(m, b, 3.1, 2.2);
                CHECK(bump_matrix_element(n, m, p, b) == doctest::Approx(oracle).epsilon(1e-12));
            }
        }
    }

    SUBCASE("Gaussian far from the walls smooths each cosine exactly") {
        // Away from the walls, convolving cos(k pi x / L) with a normalized
        // Gaussian multiplies it by exp(-(k pi sigma / L)^2 / 2).
        const BoxSpec b = odd_box();
        auto axis = [](int n, int m, double length, double c, double sigma) {
            auto moment = [&](int k) {
                const double w = k * M_PI / length;
                return 2.0 / length * std::cos(w * c) * std::exp(-0.5 * w * w * sigma * sigma);
            };
            return 0.5 * (moment(std::abs(n - m)) - moment(n + m));
        };
        for (const double sigma : {1e-4 * b.length_x, 0.1, 0.2}) {
            const BumpSpec g{1.0, sigma, sigma, 3.1, 2.2};
            for (const ModeIndex n : {ModeIndex{1, 1}, ModeIndex{2, 3}, ModeIndex{6, 5}}) {
                for (const ModeIndex m : {ModeIndex{3, 1}, ModeIndex{4, 4}}) {
                    const double ref = axis(n.nx, m.nx, b.length_x, 3.1, sigma) *
                                       axis(n.ny, m.ny, b.length_y, 2.2, sigma);
                    const double got = bump_matrix_element(n, m, g, b);
                    CHECK(std::abs(got - ref) <= 1e-10 * (std::abs(ref) + 1e-3));
                }
            }
        }
    }

    SUBCASE("separable quadrature matches a direct 2D integral") {
        const BoxSpec b = odd_box();
        const BumpSpec wide{1.0, 0.8, 0.6, 3.1, 2.2};
        for (const auto& [n, m] : {std::pair<ModeIndex, ModeIndex>{{1, 1}, {1, 1}},
                                   {{2, 3}, {5, 1}},
                                   {{4, 2}, {4, 3}}}) {
            const double oracle = bump_element_2d(n, m, wide, b, 800);
            CHECK(bump_matrix_element(n, m, wide, b) == doctest::Approx(oracle).epsilon(1e-8).scale(1e-3));
        }
    }

    SUBCASE("factor tables agree with the element function") {
        const BoxSpec b = odd_box();
        const BumpSpec g{1.0, 0.5, 0.3, 3.1, 2.2};
        const BumpFactors f(g, b, 8, 8);
        CHECK(f({3, 2}, {7, 5}) == doctest::Approx(bump_matrix_element({3, 2}, {7, 5}, g, b)));
        CHECK(f({7, 5}, {3, 2}) == f({3, 2}, {7, 5}));
    }
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS((BoxSpec{0.0, 1.0, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((BoxSpec{1.0, 1.0, -1.0}.validate()), std::invalid_argument);
    const BoxSpec box{10.0, 10.0, 1.0};
    CHECK_THROWS_AS((BumpSpec{1.0, -0.1, 0.0, 5.0, 5.0}.validate(box)), std::invalid_argument);
    CHECK_THROWS_AS((BumpSpec{1.0, 0.0, 0.0, 10.0, 5.0}.validate(box)), std::invalid_argument);
    CHECK_NOTHROW((BumpSpec{1.0, 0.0, 0.0, 5.0, 5.0}.validate(box)));
}

TEST_CASE("mode enumeration") {
    const BoxSpec box{40.0, 40.0, 1.0};
    const auto modes = enumerate_modes(box, 0.1, 100, 100);
    REQUIRE(!modes.empty());
    CHECK(modes.front() == ModeIndex{1, 1});
    CHECK(modes[1] == ModeIndex{1, 2});  // degenerate with (2,1); ties by (nx, ny)
    CHECK(modes[2] == ModeIndex{2, 1});
    for (std::size_t i = 1; i < modes.size(); ++i) {
        CHECK(box_energy(modes[i - 1], box) <= box_energy(modes[i], box));
    }
    const auto caps = BasisSpec::for_window(box, 0.0, 0.1, 1.0 + 1e-9);
    CHECK(enumerate_modes(box, 0.1, caps.max_mode_x, caps.max_mode_y).size() == modes.size());
}

TEST_CASE("eigensolver range selection") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
    m.diagonal() << 1.0, 2.0, 3.0, 4.0;
    const auto all = symmetric_eigen(m, true);
    CHECK(all.values.size() == 4);
    const auto mid = symmetric_eigen_in_range(m, 2.0, 3.0, false);
    REQUIRE(mid.values.size() == 2);  // both endpoints included
    CHECK(mid.values[0] == 2.0);
    CHECK(mid.values[1] == 3.0);
}

TEST_CASE("unperturbed system") {
    const BoxSpec box{40.0, 40.0, 1.0};
    const BumpSpec bump{0.0, 0.0, 0.0, 21.0, 19.0};
    const auto basis = BasisSpec::for_window(box, 0.2, 0.4);
    const auto sys = build_perturbed_system(box, bump, basis, 0.0);

    std::vector<double> expected;
    for (const auto& m : enumerate_modes(box, 0.4, 1000, 1000)) {
        const double e = box_energy(m, box);
        if (e >= 0.2) expected.push_back(e);
    }
    REQUIRE(sys.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) CHECK(sys.energies[i] == expected[i]);
    CHECK(sys.dos == doctest::Approx(dos(box)));
    CHECK(sys.mean_spacing == doctest::Approx(1.0 / dos(box)));

    for (std::size_t i = 0; i < sys.size(); ++i) {
        for (std::size_t j = 0; j < sys.size(); ++j) {
            const auto& a = sys.dominant_mode[i];
            const auto& b = sys.dominant_mode[j];
            const double x = sys.v_squared(i, j);
            if (a.ny != b.ny) {
                CHECK(x == 0.0);
            } else {
                CHECK(x == doctest::Approx(std::pow(wall_matrix_element(a, b, box), 2)));
            }
        }
    }
}

TEST_CASE("perturbed system against a dense transformation") {
    const BoxSpec box = odd_box();
    const BumpSpec bump{0.3, 0.4, 0.3, 3.1, 2.2};
    const auto basis = BasisSpec::for_window(box, 2.0, 8.0);
    const SystemBuilder builder(box, bump, basis);
    const auto sys = builder.build(0.3, BuildOptions{true});
    REQUIRE(sys.overlap_matrix_available);

    const auto& modes = builder.modes();
    const auto n = static_cast<Eigen::Index>(modes.size());
    Eigen::MatrixXd v(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) v(a, b) = wall_matrix_element(modes[a], modes[b], box);
    }
    const Eigen::MatrixXd vt = sys.overlaps.transpose() * v * sys.overlaps;
    const double scale = vt.cwiseAbs2().maxCoeff();
    for (Eigen::Index i = 0; i < vt.rows(); ++i) {
        for (Eigen::Index j = 0; j < vt.cols(); ++j) {
            CHECK(std::abs(sys.v_squared(i, j) - vt(i, j) * vt(i, j)) <= 1e-12 * scale);
            CHECK(sys.v_squared(i, j) == sys.v_squared(j, i));
            CHECK(sys.v_squared(i, j) >= 0.0);
        }
    }
    for (std::size_t i = 1; i < sys.size(); ++i) CHECK(sys.energies[i - 1] <= sys.energies[i]);
    for (const double e : sys.energies) {
        CHECK(e >= 2.0);
        CHECK(e <= 8.0);
    }
}

TEST_CASE("first-order level shifts") {
    const BoxSpec box = odd_box();
    const BumpSpec bump{1.0, 0.0, 0.0, 3.1, 2.2};
    const auto basis = BasisSpec::for_window(box, 0.0, 4.0, 3.0);
    const SystemBuilder builder(box, bump, basis);
    const double spacing = 1.0 / dos(box);
    const double typical_u = 4.0 / (box.length_x * box.length_y);
    const double u = 0.02 * spacing / typical_u;
    const auto base = builder.build(0.0);
    const auto pert = builder.build(u);
    REQUIRE(base.size() == pert.size());
    int checked = 0;
    for (std::size_t i = 0; i < base.size(); ++i) {
        const auto& mode = base.dominant_mode[i];
        const double unn = bump_matrix_element(mode, mode, bump, box);
        if (std::abs(unn) < 0.2 * typical_u) continue;  // near a nodal line
        const double predicted = u * unn;
        const double actual = pert.energies[i] - base.energies[i];
        CHECK(std::abs(actual - predicted) <= 0.05 * std::abs(predicted));
        ++checked;
    }
    CHECK(checked >= 5);
}

TEST_CASE("density of states from the level count") {
    const BoxSpec box{40.0, 40.0, 1.0};
    const BumpSpec bump{1e-3, 0.0, 0.0, 21.0, 19.0};
    const auto sys = build_perturbed_system(box, bump, BasisSpec::for_window(box, 2.0, 3.0), 1e-3);
    REQUIRE(sys.size() >= 200);
    const double empirical = static_cast<double>(sys.size()) / 1.0;
    CHECK(std::abs(empirical / dos(box) - 1.0) < 0.1);
}

TEST_CASE("deformation continuity") {
    const BoxSpec box = odd_box();
    const BumpSpec bump{1.0, 0.3, 0.3, 3.1, 2.2};
    const SystemBuilder builder(box, bump, BasisSpec::for_window(box, 2.0, 8.0));
    const auto base = builder.build(0.0);
    double previous = std::numeric_limits<double>::infinity();
    for (const double u : {1e-1, 3e-2, 1e-2, 3e-3, 1e-3}) {
        const auto sys = builder.build(u);
        REQUIRE(sys.size() == base.size());
        const double d = (sys.v_squared - base.v_squared).norm();
        CHECK(d < previous);
        previous = d;
    }
    CHECK(previous < 1e-2 * base.v_squared.norm());
}

TEST_CASE("basis completeness") {
    const BoxSpec box{20.0, 20.0, 1.0};
    const BumpSpec bump{1e-3, 1.0, 1.0, 9.3, 10.8};
    const double e_lo = 1.5;
    const double e_hi = 2.0;
    const auto small = build_perturbed_system(box, bump, BasisSpec::for_window(box, e_lo, e_hi, 1.5), 1e-3);
    const auto large = build_perturbed_system(box, bump, BasisSpec::for_window(box, e_lo, e_hi, 2.25), 1e-3);
    REQUIRE(small.size() == large.size());
    for (std::size_t i = 0; i < small.size(); ++i) {
        CHECK(std::abs(small.energies[i] - large.energies[i]) <= 1e-8 * large.energies[i]);
    }
    const double cutoff = 7.0 / dos(box);
    auto band_mean = [&](const PerturbedSystem& s) {
        double sum = 0.0;
        int count = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            for (std::size_t j = i + 1; j < s.size() && s.energies[j] - s.energies[i] <= cutoff; ++j) {
                sum += s.v_squared(i, j);
                ++count;
            }
        }
        return sum / count;
    };
    CHECK(std::abs(band_mean(small) / band_mean(large) - 1.0) < 1e-3);
}

TEST_CASE("build errors") {
    const BoxSpec box{10.0, 10.0, 1.0};
    const BumpSpec bump{1.0, 0.0, 0.0, 5.0, 5.0};
    BasisSpec basis = BasisSpec::for_window(box, 1.0, 2.0);
    basis.max_mode_x = 2;
    basis.max_mode_y = 2;
    CHECK_THROWS_WITH_AS(SystemBuilder(box, bump, basis), "window not covered by basis",
                         std::invalid_argument);

    const PerturbedSystem sys = make_system({1.0, 2.0}, Eigen::MatrixXd::Ones(2, 2), 1.0);
    CHECK(sys.size() == 2);
    Eigen::MatrixXd asym = Eigen::MatrixXd::Ones(2, 2);
    asym(0, 1) = 2.0;
    CHECK_THROWS_AS(make_system({1.0, 2.0}, asym, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_system({2.0, 1.0}, Eigen::MatrixXd::Ones(2, 2), 1.0), std::invalid_argument);
}
