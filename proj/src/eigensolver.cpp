#include "slrt/eigensolver.hpp"

#include "slrt/billiard.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace slrt {
namespace {

SymmetricEigenResult run_dsyevr(Eigen::MatrixXd& matrix, char range, double lo, double hi,
                                bool want_vectors) {
    const auto n = static_cast<lapack_int>(matrix.rows());
    SymmetricEigenResult result;
    if (n == 0) return result;

    Eigen::VectorXd values(n);
    Eigen::MatrixXd vectors(want_vectors ? n : 1, want_vectors ? n : 1);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    lapack_int found = 0;

    const lapack_int info = LAPACKE_dsyevr(
        LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', range, 'U', n, matrix.data(), n, lo, hi, 0,
        0, 0.0, &found, values.data(), vectors.data(), static_cast<lapack_int>(vectors.rows()),
        support.data());
    if (info != 0) {
        throw NumericalError("dsyevr failed with info = " + std::to_string(info),
                             std::numeric_limits<double>::quiet_NaN());
    }
    result.values = values.head(found);
    if (want_vectors) result.vectors = vectors.leftCols(found);
    return result;
}

}  // namespace

SymmetricEigenResult symmetric_eigen_in_range(Eigen::MatrixXd matrix, double lo, double hi,
                                              bool want_vectors) {
    // dsyevr selects the half-open interval (vl, vu].
    const double vl = std::nextafter(lo, -std::numeric_limits<double>::infinity());
    return run_dsyevr(matrix, 'V', vl, hi, want_vectors);
}

SymmetricEigenResult symmetric_eigen(Eigen::MatrixXd matrix, bool want_vectors) {
    return run_dsyevr(matrix, 'A', 0.0, 0.0, want_vectors);
}

}  // namespace slrt
