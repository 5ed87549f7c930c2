#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "tt/tensor_train.hpp"

namespace tt {

struct RsiConfig {
    Index chi_max = 1;
    double eps_id = 1e-14;
    Index oversample_p = 0;
    std::uint64_t seed = 0;
    bool skip_sketch_auto = true;
    bool share_omegas = true;
};

/// Sketch dimension k = ceil(chi_max / d_max) + p.
Index rsi_sketch_dim(const RsiConfig& cfg, Index d_max);

/// Per-iteration pivot sets, both as flat matricization row indices and as
/// resolved multi-indices over (s_1..s_j). Left-nested by construction.
struct PivotTrail {
    std::vector<std::vector<Index>> flat;               // [iter][t]
    std::vector<std::vector<std::vector<Index>>> multi; // [iter][t][site]

    /// Throws std::logic_error if any multi-index prefix is missing upstream.
    void validate_left_nesting() const;
};

struct IterationStats {
    Index rank = 0;
    double local_error = 0.0;
    bool sketched = false;
};

struct RsiReport {
    TensorTrain output;
    PivotTrail trail;
    std::vector<IterationStats> iterations;
    std::int64_t t_sketch_ns = 0; // bundle construction
    std::int64_t t_iter_ns = 0;   // all iterations
    double flops = 0.0;           // counted floating-point work
    Index max_intermediate_bond = 0;
    int retries = 0;
};

/// Raised when a sketched iteration's ID rank collapses to zero on nonzero
/// input; the driver reseeds up to twice before letting it propagate.
class DegenerateSketchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Hadamard product of >= 2 TTs sharing order and physical dims. Passing the
/// same pointer repeatedly squares that factor while sketching it only once.
/// omegas_override (tests only) supplies the shared Omega matrices in
/// make_omegas layout and implies share_omegas.
RsiReport rsi_hadamard(const std::vector<const TensorTrain*>& inputs, const RsiConfig& cfg,
                       const std::vector<Eigen::MatrixXd>* omegas_override = nullptr);

/// Elementwise map f of a single TT; identical control flow with f replacing
/// the product in the sketched and dense steps.
RsiReport rsi_map(const TensorTrain& input, const std::function<double(double)>& f,
                  const RsiConfig& cfg,
                  const std::vector<Eigen::MatrixXd>* omegas_override = nullptr);

} // namespace tt
