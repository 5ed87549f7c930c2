#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tt/tensor_train.hpp"

namespace tt {

/// Random one-cluster-basis sketch of a TT's tails.
///
/// omegas[j] (k x d_j) exists for sites j = 2..n-1 (0-based). sketch_mats[j]
/// (chi_{j-1} x k) sketches sites j..n-1:
///   sketch_mats[n-1][a,kk] = sum_s omegas[n-1](kk,s) * core_{n-1}(a,s,0)
///   sketch_mats[j][a,kk]   = sum_{s,b} omegas[j](kk,s) * core_j(a,s,b) *
///                            sketch_mats[j+1][b,kk]
struct SketchBundle {
    Index k = 0;
    std::vector<Eigen::MatrixXd> omegas;      // index j in [2, n); empty elsewhere
    std::vector<Core> sketched_cores;         // [j] = Omega_j applied to core j, shape (chi_{j-1}, k, chi_j)
    std::vector<Eigen::MatrixXd> sketch_mats; // index j in [2, n); chi_{j-1} x k
};

/// One seeded standard-normal k x d_j matrix per site j = 2..n-1 (0-based).
/// Entries are drawn in ascending site order from a single stream.
std::vector<Eigen::MatrixXd> make_omegas(const std::vector<Index>& phys_dims, Index k,
                                         std::uint64_t seed);

SketchBundle make_sketch_bundle(const TensorTrain& tt,
                                const std::vector<Eigen::MatrixXd>& omegas, Index k);

} // namespace tt
