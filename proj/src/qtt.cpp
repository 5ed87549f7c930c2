#include "tt/qtt.hpp"

#include <cmath>
#include <stdexcept>

namespace tt {

double bits_to_x(const QttGrid& grid, const std::vector<Index>& bits) {
    if (static_cast<Index>(bits.size()) != grid.n_bits)
        throw std::invalid_argument("bits_to_x: bit count mismatch");
    double frac = 0.0;
    double w = 0.5;
    for (Index b : bits) {
        if (b != 0 && b != 1) throw std::invalid_argument("bits_to_x: bits must be 0/1");
        frac += static_cast<double>(b) * w;
        w *= 0.5;
    }
    return grid.a + (grid.b - grid.a) * frac;
}

TensorTrain qtt_from_function(const std::function<double(double)>& f, const QttGrid& grid,
                              Index chi_max, double eps, Index cap) {
    Index total = grid.grid_size();
    if (total > cap) throw std::length_error("qtt_from_function: grid exceeds dense cap");
    DenseTensor dense;
    dense.shape.assign(static_cast<std::size_t>(grid.n_bits), 2);
    dense.values.resize(total);
    // Row-major order over bits with s_1 most significant == ascending x.
    double step = (grid.b - grid.a) / static_cast<double>(total);
    for (Index i = 0; i < total; ++i) {
        double v = f(grid.a + step * static_cast<double>(i));
        if (!std::isfinite(v))
            throw std::domain_error("qtt_from_function: non-finite sample");
        dense.values[i] = v;
    }
    return tt_from_dense(dense, chi_max, eps, cap);
}

namespace {

double get_param(const std::map<std::string, double>& params, const std::string& key,
                 double dflt) {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
}

} // namespace

std::function<double(double)> builtin_function(const std::string& name,
                                               const std::map<std::string, double>& params) {
    if (name == "gaussian") {
        double mu = get_param(params, "mu", 0.5);
        double sigma = get_param(params, "sigma", 0.15);
        return [mu, sigma](double x) {
            double z = (x - mu) / sigma;
            return std::exp(-0.5 * z * z);
        };
    }
    if (name == "osc1") {
        // cos(2^10 x) e^{-x^2} + 4 e^x - 3 x^2 + 10 x
        return [](double x) {
            return std::cos(1024.0 * x) * std::exp(-x * x) + 4.0 * std::exp(x) -
                   3.0 * x * x + 10.0 * x;
        };
    }
    if (name == "osc2") {
        // sin(2^10 x) (e^{x^2} + 5 x + 2) - 4 x
        return [](double x) {
            return std::sin(1024.0 * x) * (std::exp(x * x) + 5.0 * x + 2.0) - 4.0 * x;
        };
    }
    if (name == "relu_target") {
        // sign-changing smooth target for the ReLU map demo
        return [](double x) {
            double z = (x - 0.5) / 0.1;
            return std::exp(-0.5 * z * z) - 0.5;
        };
    }
    throw std::invalid_argument("builtin_function: unknown name '" + name + "'");
}

std::vector<std::string> builtin_function_names() {
    return {"gaussian", "osc1", "osc2", "relu_target"};
}

} // namespace tt
