#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace tt {

/// Deterministic standard-normal sampler (mt19937_64 + Box-Muller).
/// std::normal_distribution is implementation-defined, so rolling the
/// transform ourselves keeps seeded streams identical across toolchains.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    // uniform in (0, 1]
    double uniform01() {
        std::uint64_t x = gen_();
        return (static_cast<double>(x >> 11) + 1.0) * 0x1p-53;
    }

    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace tt
