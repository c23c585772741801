#pragma once

#include "ggdd/diffops.hpp"

#include <Eigen/Dense>

namespace ggdd {

// W_cod^{1/2} A W_dom^{-1/2}: the operator in orthonormal coordinates of both spaces.
Eigen::MatrixXd isometric_dense(const OperatorHandle& a);
// Singular values in descending order (LAPACK divide and conquer, values only).
Eigen::VectorXd singular_values(const Eigen::MatrixXd& a);
// Number of singular values of a (taken as an n-column map) below rel * sigma_max, counting missing rows.
int null_count(const Eigen::MatrixXd& a, double rel = 1e-8);

}  // namespace ggdd
