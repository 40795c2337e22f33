#include "slrt/matrixstats.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

using namespace slrt;

namespace {

BandSelection band_of(std::initializer_list<double> xs) {
    BandSelection b;
    std::size_t i = 0;
    for (const double x : xs) {
        b.elements.push_back({i, i + 1, x, -1.0});
        ++i;
    }
    return b;
}

/// Levels with mean spacing 1 and random jitter, plus a matrix of ones.
PerturbedSystem jittered_levels(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-0.3, 0.3);
    std::vector<double> e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = static_cast<double>(i) + jitter(rng);
    std::sort(e.begin(), e.end());
    return make_system(e, Eigen::MatrixXd::Ones(n, n), 1.0);
}

Eigen::MatrixXd random_symmetric(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::lognormal_distribution<double> dist(0.0, 2.0);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) x(i, j) = x(j, i) = dist(rng);
    }
    return x;
}

/// Band by index offset 1..d over the whole matrix (test-side definition).
BandSelection offset_band(const Eigen::MatrixXd& x, Eigen::Index d) {
    BandSelection b;
    for (Eigen::Index k = 1; k <= d; ++k) {
        for (Eigen::Index i = 0; i + k < x.rows(); ++i) {
            b.elements.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(i + k), x(i, i + k), 0.0});
        }
    }
    return b;
}

}  // namespace

TEST_CASE("averages on small samples") {
    CHECK(algebraic_average(band_of({2.5, 2.5, 2.5})) == 2.5);
    CHECK(algebraic_average(band_of({1.0, 3.0})) == 2.0);
    CHECK(geometric_average(band_of({2.5, 2.5})) == doctest::Approx(2.5));
    CHECK(geometric_average(band_of({1.0, 100.0})) == doctest::Approx(10.0));
    CHECK(geometric_average(band_of({1.0, 0.0, 100.0})) == 0.0);
    CHECK(geometric_average(band_of({1.0, 0.0}), 1e-4) == doctest::Approx(1e-2));
    CHECK(harmonic_average(band_of({4.0, 4.0})) == doctest::Approx(4.0));
    CHECK(harmonic_average(band_of({1.0, 1.0 / 3.0})) == doctest::Approx(0.5));
    CHECK(harmonic_average(band_of({1.0, 0.0})) == 0.0);
    CHECK(sparsity(band_of({3.0, 3.0, 3.0})) == 1.0);
    CHECK(sparsity(band_of({3.0, 0.0})) == 0.0);
    CHECK_THROWS_AS((void)sparsity(band_of({0.0, 0.0})), std::domain_error);

    const auto r = summarize(band_of({1.0, 0.0, 4.0}));
    CHECK(r.element_count == 3);
    CHECK(r.zero_count == 1);
    CHECK(r.sparsity_q == 0.0);
}

TEST_CASE("mean inequality and scaling") {
    std::mt19937_64 rng(7);
    std::lognormal_distribution<double> dist(-3.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        BandSelection b;
        for (std::size_t i = 0; i < 40; ++i) b.elements.push_back({i, i + 1, dist(rng), 1.0});
        const double a = algebraic_average(b);
        const double g = geometric_average(b);
        const double h = harmonic_average(b);
        CHECK(h <= g);
        CHECK(g <= a);
        const double q = sparsity(b);
        CHECK(q > 0.0);
        CHECK(q <= 1.0);

        BandSelection scaled = b;
        for (auto& e : scaled.elements) e.x *= 1e3;
        CHECK(algebraic_average(scaled) == doctest::Approx(1e3 * a));
        CHECK(geometric_average(scaled) == doctest::Approx(1e3 * g));
        CHECK(harmonic_average(scaled) == doctest::Approx(1e3 * h));
        CHECK(sparsity(scaled) == doctest::Approx(q));
    }
}

TEST_CASE("band selection") {
    SUBCASE("roughly rho * cutoff pairs per level") {
        const auto sys = jittered_levels(100, 3);
        const auto band = select_band(sys, sys.energies.front(), sys.energies.back(), 7.0);
        // Oracle: each level pairs with ~7 higher neighbours; edge levels fewer.
        const double expected = 100.0 * 7.0 - 7.0 * 8.0 / 2.0;
        CHECK(std::abs(band.size() / expected - 1.0) < 0.2);
        CHECK(std::abs(band.size() / 700.0 - 1.0) < 0.2);
        for (const auto& e : band.elements) {
            CHECK(e.n < e.m);
            CHECK(std::abs(e.omega) <= 7.0);
        }
    }
    SUBCASE("cutoff below the smallest gap") {
        const auto sys = make_system({0.0, 1.0, 2.0}, Eigen::MatrixXd::Ones(3, 3), 1.0);
        CHECK_THROWS_AS(select_band(sys, 0.0, 2.0, 0.5), EmptyBandError);
    }
    SUBCASE("two levels give one element") {
        const auto sys = make_system({0.0, 1.0, 5.0}, Eigen::MatrixXd::Ones(3, 3), 1.0);
        const auto band = select_band(sys, -0.5, 1.5, 2.0);
        REQUIRE(band.size() == 1);
        CHECK(band.elements[0].n == 0);
        CHECK(band.elements[0].m == 1);
        CHECK(band.elements[0].omega == -1.0);
        CHECK(band.level_count == 2);
    }
}

TEST_CASE("log histogram") {
    SUBCASE("constant sample fills one bin") {
        const auto h = log_histogram(band_of({2.0, 2.0, 2.0}), 10);
        CHECK(std::count_if(h.counts.begin(), h.counts.end(), [](std::size_t c) { return c > 0; }) == 1);
        CHECK(h.total() == 3);
    }
    SUBCASE("zeros are counted apart") {
        const auto h = log_histogram(band_of({0.0, 1.0, 10.0, 0.0}), 4);
        CHECK(h.zero_count == 2);
        CHECK(h.total() == 4);
    }
    SUBCASE("moments of a log-normal sample") {
        const double mu = -5.0;
        const double sigma = 2.0;
        std::mt19937_64 rng(11);
        std::normal_distribution<double> normal(mu, sigma);
        BandSelection b;
        const std::size_t n = 20000;
        for (std::size_t i = 0; i < n; ++i) b.elements.push_back({i, i + 1, std::exp(normal(rng)), 1.0});
        const auto h = log_histogram(b, 200);
        REQUIRE(h.total() == n);
        double mean = 0.0;
        for (std::size_t i = 0; i < h.counts.size(); ++i) {
            mean += h.counts[i] * 0.5 * (h.bin_left(i) + h.bin_right(i));
        }
        mean /= n;
        double var = 0.0;
        for (std::size_t i = 0; i < h.counts.size(); ++i) {
            const double c = 0.5 * (h.bin_left(i) + h.bin_right(i)) - mean;
            var += h.counts[i] * c * c;
        }
        var /= n;
        // Standard errors of the sample mean and variance, plus binning.
        const double se_mean = sigma / std::sqrt(n);
        const double se_var = sigma * sigma * std::sqrt(2.0 / (n - 1));
        const double bin_var = h.ln_width * h.ln_width / 12.0;
        CHECK(std::abs(mean - mu) < 3.0 * se_mean + h.ln_width / 2.0);
        CHECK(std::abs(var - sigma * sigma) < 3.0 * se_var + bin_var);
    }
    CHECK_THROWS_AS(log_histogram(band_of({0.0, 0.0}), 5), std::invalid_argument);
    CHECK_THROWS_AS(log_histogram(band_of({1.0}), 0), std::invalid_argument);
}

TEST_CASE("untexture") {
    const Eigen::Index n = 60;
    auto sys = make_system(jittered_levels(static_cast<std::size_t>(n), 5).energies,
                           random_symmetric(n, 9), 1.0);
    const auto flat = untexture(sys, 42);

    CHECK(flat.energies == sys.energies);
    CHECK(flat.v_squared == flat.v_squared.transpose());
    bool moved = false;
    for (Eigen::Index d = 1; d < n; ++d) {
        std::vector<double> before;
        std::vector<double> after;
        for (Eigen::Index i = 0; i + d < n; ++i) {
            before.push_back(sys.v_squared(i, i + d));
            after.push_back(flat.v_squared(i, i + d));
        }
        moved = moved || before != after;
        std::sort(before.begin(), before.end());
        std::sort(after.begin(), after.end());
        CHECK(before == after);
    }
    CHECK(moved);

    SUBCASE("offset-defined bands keep their statistics") {
        const auto b0 = offset_band(sys.v_squared, 7);
        const auto b1 = offset_band(flat.v_squared, 7);
        CHECK(sparsity(b1) == doctest::Approx(sparsity(b0)).epsilon(1e-12));
        const auto h0 = log_histogram(b0, 30);
        const auto h1 = log_histogram(b1, 30);
        CHECK(h0.counts == h1.counts);
    }
    SUBCASE("energy-defined bands agree within sampling error") {
        const auto b0 = select_band(sys, sys.energies.front(), sys.energies.back(), 7.0);
        const auto b1 = select_band(flat, flat.energies.front(), flat.energies.back(), 7.0);
        CHECK(b0.size() == b1.size());
        // ln x has standard deviation 2; two samples of the same law.
        const double se = 2.0 * std::sqrt(2.0 / static_cast<double>(b0.size()));
        CHECK(std::abs(std::log(geometric_average(b1) / geometric_average(b0))) < 3.0 * se);
    }
    SUBCASE("constant matrix is a fixed point") {
        const auto ones = make_system(sys.energies, Eigen::MatrixXd::Constant(n, n, 3.0), 1.0);
        CHECK(untexture(ones, 1).v_squared == ones.v_squared);
    }
    SUBCASE("same seed, same permutation") {
        CHECK(untexture(sys, 42).v_squared == flat.v_squared);
        CHECK(untexture(sys, 43).v_squared != flat.v_squared);
    }
}
