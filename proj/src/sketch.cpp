#include "tt/sketch.hpp"

#include <stdexcept>

#include "tt/rng.hpp"

namespace tt {

std::vector<Eigen::MatrixXd> make_omegas(const std::vector<Index>& phys_dims, Index k,
                                         std::uint64_t seed) {
    if (k < 1) throw std::invalid_argument("make_omegas: k must be >= 1");
    Index n = static_cast<Index>(phys_dims.size());
    std::vector<Eigen::MatrixXd> omegas(static_cast<std::size_t>(n));
    NormalSampler normal(seed);
    for (Index j = 2; j < n; ++j) {
        Eigen::MatrixXd& o = omegas[static_cast<std::size_t>(j)];
        o.resize(k, phys_dims[static_cast<std::size_t>(j)]);
        for (Index r = 0; r < o.rows(); ++r)
            for (Index c = 0; c < o.cols(); ++c) o(r, c) = normal();
    }
    return omegas;
}

SketchBundle make_sketch_bundle(const TensorTrain& tt,
                                const std::vector<Eigen::MatrixXd>& omegas, Index k) {
    Index n = tt.order();
    if (static_cast<Index>(omegas.size()) != n)
        throw std::invalid_argument("make_sketch_bundle: omegas count mismatch");
    SketchBundle b;
    b.k = k;
    b.omegas = omegas;
    b.sketched_cores.resize(static_cast<std::size_t>(n));
    b.sketch_mats.resize(static_cast<std::size_t>(n));

    // Backward sweep over sites n-1 .. 2.
    for (Index j = n - 1; j >= 2; --j) {
        const Core& c = tt.core(j);
        const Eigen::MatrixXd& o = omegas[static_cast<std::size_t>(j)];
        if (o.rows() != k || o.cols() != c.phys)
            throw std::invalid_argument("make_sketch_bundle: omega shape mismatch");
        // sketched core: oc(a, kk, bb) = sum_s o(kk, s) c(a, s, bb)
        Core oc(c.left, k, c.right);
        for (Index a = 0; a < c.left; ++a) {
            // c.slice_left(a): (phys x right); o * slice: (k x right)
            Eigen::MatrixXd m = o * c.slice_left(a);
            for (Index kk = 0; kk < k; ++kk)
                for (Index bb = 0; bb < c.right; ++bb) oc.at(a, kk, bb) = m(kk, bb);
        }
        Eigen::MatrixXd& s = b.sketch_mats[static_cast<std::size_t>(j)];
        s.resize(c.left, k);
        if (j == n - 1) {
            for (Index a = 0; a < c.left; ++a)
                for (Index kk = 0; kk < k; ++kk) s(a, kk) = oc.at(a, kk, 0);
        } else {
            const Eigen::MatrixXd& snext = b.sketch_mats[static_cast<std::size_t>(j + 1)];
            for (Index a = 0; a < c.left; ++a)
                for (Index kk = 0; kk < k; ++kk) {
                    double acc = 0.0;
                    for (Index bb = 0; bb < c.right; ++bb)
                        acc += oc.at(a, kk, bb) * snext(bb, kk);
                    s(a, kk) = acc;
                }
        }
        b.sketched_cores[static_cast<std::size_t>(j)] = std::move(oc);
    }
    return b;
}

} // namespace tt
