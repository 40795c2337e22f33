#pragma once

#include <Eigen/Dense>

namespace slrt {

struct SymmetricEigenResult {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns, empty when not requested
};

/// Dense symmetric eigensolver (LAPACK dsyevr). Only the eigenpairs with
/// lo <= value <= hi are returned. The input is consumed.
SymmetricEigenResult symmetric_eigen_in_range(Eigen::MatrixXd matrix, double lo, double hi,
                                              bool want_vectors);

/// All eigenpairs.
SymmetricEigenResult symmetric_eigen(Eigen::MatrixXd matrix, bool want_vectors);

}  // namespace slrt
