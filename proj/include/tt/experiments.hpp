#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tt/rsi.hpp"
#include "tt/tensor_train.hpp"

namespace tt::bench {

struct PhaseTimes {
    std::int64_t kron_ns = 0;  // Kronecker-core entry formation
    std::int64_t round_ns = 0; // orthogonalization + truncated SVD
};

/// Exact elementwise product of the factors followed by rounding to chi_out at
/// tolerance eps, in a single pass over the full Kronecker-product chain (bond
/// = product of all factor bonds). Kronecker cores are formed block-wise and
/// streamed straight into the orthogonalization GEMM, so product bonds never
/// materialize as a stored TT; entries and flop count match the classical
/// two-phase algorithm, including its multiplicative cost in the factor count.
TensorTrain direct_product_rounded(const std::vector<const TensorTrain*>& factors,
                                   Index chi_out, double eps,
                                   PhaseTimes* phases = nullptr);

/// Analytic flop count of direct_product_rounded on two chi-bonded random TTs
/// (dry shape simulation; no allocation). Used by the scaling property test.
double direct_flop_estimate(Index n, Index d, Index chi, Index chi_out);

/// Sum of nearest-neighbor <S^z_j S^z_{j+1}> for a normalized spin TT
/// (weights +1, 0, -1, ... per physical level), via transfer contraction.
double expectation_zz(const TensorTrain& psi);

/// The same correlator sum evaluated from a probability TT p ~ |psi|^2 by
/// contracting against site weight vectors.
double weighted_sum_zz(const TensorTrain& p);

/// Relative Frobenius error of a TT against a dense truth vector (row-major
/// flattening of the truth tensor).
double dense_rel_error(const TensorTrain& approx, const Eigen::VectorXd& truth);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ExperimentRecord {
    std::string experiment;
    std::string method; // "rsi" or "direct"
    Index n = 0;
    Index d = 0;
    Index chi_in = 0;
    Index chi_out = 0;
    Index k = 0;
    Index p = 0;
    double eps_id = 0.0;
    std::uint64_t seed = 0;
    std::optional<double> rel_error;
    std::optional<double> z_dev;
    std::int64_t t_sketch_ns = 0;
    std::int64_t t_iter_ns = 0;
    std::int64_t t_kron_ns = 0;
    std::int64_t t_round_ns = 0;
    std::int64_t timestamp_ns = 0; // not serialized to CSV
};

std::string csv_header();
void write_csv(const std::vector<ExperimentRecord>& records, std::ostream& os);
std::vector<ExperimentRecord> read_csv(std::istream& is);
void write_json(const std::vector<ExperimentRecord>& records, std::ostream& os);

std::vector<ExperimentRecord> exp_psi_squared(Index n, Index chi,
                                              const std::vector<Index>& chi_out_list,
                                              const std::vector<std::uint64_t>& seeds,
                                              std::uint64_t psi_seed, double eps_id,
                                              Index oversample_p);

std::vector<ExperimentRecord> exp_gaussian(const std::string& variant, double mu1,
                                           double mu2, double sigma, Index n_bits,
                                           const std::vector<Index>& chi_out_list,
                                           const std::vector<std::uint64_t>& seeds,
                                           double eps_id, Index oversample_p);

std::vector<ExperimentRecord> exp_oscillatory(Index n_bits,
                                              const std::vector<Index>& chi_out_list,
                                              const std::vector<Index>& p_list,
                                              const std::vector<std::uint64_t>& seeds,
                                              double eps_id);

std::vector<ExperimentRecord> exp_scaling(const std::vector<Index>& chi_list, Index n,
                                          Index d,
                                          const std::vector<std::uint64_t>& seeds,
                                          double eps_id, Index oversample_p);

std::vector<ExperimentRecord> exp_relu(Index n_bits,
                                       const std::vector<Index>& chi_out_list,
                                       const std::vector<std::uint64_t>& seeds,
                                       double eps_id, Index oversample_p);

} // namespace tt::bench
