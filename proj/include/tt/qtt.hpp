#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tt/tensor_train.hpp"

namespace tt {

/// Uniform dyadic grid of 2^n_bits points on [a, b); bit s_1 is most significant.
struct QttGrid {
    Index n_bits = 2;
    double a = 0.0;
    double b = 1.0;

    QttGrid(Index bits, double lo = 0.0, double hi = 1.0) : n_bits(bits), a(lo), b(hi) {
        if (bits < 2) throw std::invalid_argument("QttGrid: n_bits must be >= 2");
        if (!(lo < hi)) throw std::invalid_argument("QttGrid: need a < b");
    }

    Index grid_size() const { return Index(1) << n_bits; }
    double spacing() const { return (b - a) / static_cast<double>(grid_size()); }
};

/// x = a + (b-a) * sum_j bits[j-1] * 2^-j.
double bits_to_x(const QttGrid& grid, const std::vector<Index>& bits);

/// Sample f on the full grid and compress with TT-SVD (d = 2 per bit).
TensorTrain qtt_from_function(const std::function<double(double)>& f, const QttGrid& grid,
                              Index chi_max, double eps,
                              Index cap = kDenseCapDefault);

/// Named closed-form test functions, parameterized by name -> value pairs.
/// Catalog: gaussian(mu, sigma); osc1; osc2; relu_target (= gaussian(0.5, 0.1) - 0.5).
std::function<double(double)> builtin_function(const std::string& name,
                                               const std::map<std::string, double>& params = {});

std::vector<std::string> builtin_function_names();

} // namespace tt
