#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace tt {

using Index = Eigen::Index;
using MatRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// One order-3 TT core, shape (left, phys, right), flat row-major storage.
struct Core {
    Index left = 1;
    Index phys = 1;
    Index right = 1;
    Eigen::VectorXd data; // size left*phys*right, index ((a*phys + s)*right + b)

    Core() = default;
    Core(Index l, Index p, Index r) : left(l), phys(p), right(r), data(l * p * r) {
        data.setZero();
    }

    double& at(Index a, Index s, Index b) { return data[(a * phys + s) * right + b]; }
    double at(Index a, Index s, Index b) const { return data[(a * phys + s) * right + b]; }

    /// (left*phys) x right unfolding.
    Eigen::Map<MatRM> lmap() { return {data.data(), left * phys, right}; }
    Eigen::Map<const MatRM> lmap() const { return {data.data(), left * phys, right}; }
    /// left x (phys*right) unfolding.
    Eigen::Map<MatRM> rmap() { return {data.data(), left, phys * right}; }
    Eigen::Map<const MatRM> rmap() const { return {data.data(), left, phys * right}; }
    /// phys x right matrix slice at fixed left index a.
    Eigen::Map<const MatRM> slice_left(Index a) const {
        return {data.data() + a * phys * right, phys, right};
    }
};

/// Tensor train: chain of order-3 cores with matching bonds, boundary bonds 1.
class TensorTrain {
public:
    explicit TensorTrain(std::vector<Core> cores);

    Index order() const { return static_cast<Index>(cores_.size()); }
    const Core& core(Index j) const { return cores_[static_cast<std::size_t>(j)]; }
    Core& core(Index j) { return cores_[static_cast<std::size_t>(j)]; }
    const std::vector<Core>& cores() const { return cores_; }

    std::vector<Index> phys_dims() const;
    /// Internal bonds chi_1..chi_{n-1}.
    std::vector<Index> bond_dims() const;
    Index max_bond() const;

    /// Throws std::invalid_argument if bond/boundary invariants are violated.
    void validate() const;

private:
    std::vector<Core> cores_;
};

/// Dense order-n tensor, row-major values. Guarded by an entry cap.
struct DenseTensor {
    std::vector<Index> shape;
    Eigen::VectorXd values;

    Index size() const { return values.size(); }
};

inline constexpr Index kDenseCapDefault = Index(1) << 26;

Index checked_dense_size(const std::vector<Index>& shape, Index cap = kDenseCapDefault);

double tt_eval(const TensorTrain& tt, const std::vector<Index>& idx);
DenseTensor tt_to_dense(const TensorTrain& tt, Index cap = kDenseCapDefault);
TensorTrain tt_from_dense(const DenseTensor& dense, Index chi_max, double eps,
                          Index cap = kDenseCapDefault);
TensorTrain tt_hadamard_direct(const TensorTrain& a, const TensorTrain& b);
TensorTrain tt_round(const TensorTrain& tt, Index chi_max, double eps);
double tt_inner(const TensorTrain& a, const TensorTrain& b);
double relative_error(const TensorTrain& approx, const TensorTrain& truth);
TensorTrain tt_random(Index n, Index d, Index chi, std::uint64_t seed);
TensorTrain tt_normalize(const TensorTrain& tt);

/// Rank-1 all-zero TT with the given physical dimensions.
TensorTrain tt_zero(const std::vector<Index>& phys_dims);

} // namespace tt
