#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tt/tensor_train.hpp"

namespace tt {

/// Row interpolative decomposition M ~= x * skeleton with an exact identity
/// block at the pivot rows.
struct InterpolativeFactor {
    Eigen::MatrixXd x;        // m x rank
    std::vector<Index> pivots; // selection order, distinct rows
    Eigen::MatrixXd skeleton; // rank x n, pivot rows of the input (bit-exact)
    Index rank = 0;
    double local_error = 0.0; // max |entry| of the final Schur complement
};

/// Greedy fully-pivoted LU row-ID. Terminates when the Schur complement's max
/// magnitude falls below eps_id * (first pivot magnitude), rank hits chi_max,
/// or the complement is exhausted. Ties break to the lowest row-major linear
/// index. All-zero input yields rank 0.
InterpolativeFactor prrlu_row_id(const Eigen::MatrixXd& m, Index chi_max, double eps_id);

Eigen::MatrixXd id_reconstruct(const InterpolativeFactor& f);

} // namespace tt
