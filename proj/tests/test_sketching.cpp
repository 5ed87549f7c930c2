#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tt/sketch.hpp"
#include "tt/tensor_train.hpp"

using namespace tt;

TEST_CASE("make_omegas determinism and shapes") {
    std::vector<Index> dims{2, 2, 2, 2, 2}; // n=5
    auto o1 = make_omegas(dims, 7, 42);
    auto o2 = make_omegas(dims, 7, 42);
    CHECK(o1.size() == 5);
    CHECK(o1[0].size() == 0);
    CHECK(o1[1].size() == 0);
    for (Index j = 2; j < 5; ++j) {
        CHECK(o1[j].rows() == 7);
        CHECK(o1[j].cols() == 2);
        CHECK((o1[j].array() == o2[j].array()).all());
    }
    auto o3 = make_omegas(dims, 7, 43);
    CHECK(!(o1[2].array() == o3[2].array()).all());
}

TEST_CASE("omega statistics") {
    std::vector<Index> dims(12, 5); // 10 sites * 5 cols * 200 rows = 10^4 entries
    auto o = make_omegas(dims, 200, 7);
    double sum = 0.0, sum2 = 0.0, cnt = 0.0;
    for (Index j = 2; j < 12; ++j) {
        sum += o[j].sum();
        sum2 += o[j].array().square().sum();
        cnt += static_cast<double>(o[j].size());
    }
    double mean = sum / cnt;
    double var = sum2 / cnt - mean * mean;
    CHECK(std::abs(mean) <= 0.05);
    CHECK(std::abs(var - 1.0) <= 0.1);
}

TEST_CASE("all-ones omega equals tail sum") {
    TensorTrain t = tt_random(5, 2, 3, 11);
    std::vector<Eigen::MatrixXd> omegas(5);
    for (Index j = 2; j < 5; ++j) omegas[j] = Eigen::MatrixXd::Ones(1, 2);
    SketchBundle b = make_sketch_bundle(t, omegas, 1);
    // S_2[a, 0] = sum over all tail indices of the contraction of sites 2..4
    const Core& c2 = t.core(2);
    for (Index a = 0; a < c2.left; ++a) {
        double oracle = 0.0;
        for (Index s2 = 0; s2 < 2; ++s2)
            for (Index s3 = 0; s3 < 2; ++s3)
                for (Index s4 = 0; s4 < 2; ++s4) {
                    const Core& c3 = t.core(3);
                    const Core& c4 = t.core(4);
                    for (Index b1 = 0; b1 < c2.right; ++b1)
                        for (Index b2 = 0; b2 < c3.right; ++b2)
                            oracle += c2.at(a, s2, b1) * c3.at(b1, s3, b2) *
                                      c4.at(b2, s4, 0);
                }
        CHECK(b.sketch_mats[2](a, 0) ==
              doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("one-hot omegas give exact tail fibers") {
    Index n = 5, d = 2;
    TensorTrain t = tt_random(n, d, 3, 13);
    Index k = 8; // covers all 2^3 tail multi-indices of sites 2..4
    std::vector<Eigen::MatrixXd> omegas(static_cast<std::size_t>(n));
    for (Index j = 2; j < n; ++j) {
        omegas[j] = Eigen::MatrixXd::Zero(k, d);
        for (Index kk = 0; kk < k; ++kk) {
            Index bit = (kk >> (n - 1 - j)) & 1; // site j's digit of fiber kk
            omegas[j](kk, bit) = 1.0;
        }
    }
    SketchBundle b = make_sketch_bundle(t, omegas, k);
    const Core& c2 = t.core(2);
    for (Index a = 0; a < c2.left; ++a)
        for (Index kk = 0; kk < k; ++kk) {
            Index s2 = (kk >> 2) & 1, s3 = (kk >> 1) & 1, s4 = kk & 1;
            double oracle = 0.0;
            const Core& c3 = t.core(3);
            const Core& c4 = t.core(4);
            for (Index b1 = 0; b1 < c2.right; ++b1)
                for (Index b2 = 0; b2 < c3.right; ++b2)
                    oracle += c2.at(a, s2, b1) * c3.at(b1, s3, b2) * c4.at(b2, s4, 0);
            CHECK(b.sketch_mats[2](a, kk) == doctest::Approx(oracle).epsilon(1e-12));
        }
}

TEST_CASE("KRP recursion consistency") {
    Index n = 6, d = 3, k = 5;
    TensorTrain t = tt_random(n, d, 4, 17);
    auto omegas = make_omegas(t.phys_dims(), k, 23);
    SketchBundle b = make_sketch_bundle(t, omegas, k);
    // direct per-kappa chain multiply of sketched cores j..n-1
    for (Index j = 2; j < n; ++j) {
        const Eigen::MatrixXd& s = b.sketch_mats[static_cast<std::size_t>(j)];
        double scale = s.cwiseAbs().maxCoeff();
        for (Index kk = 0; kk < k; ++kk) {
            Eigen::VectorXd v = Eigen::VectorXd::Ones(1);
            for (Index jj = n - 1; jj >= j; --jj) {
                const Core& oc = b.sketched_cores[static_cast<std::size_t>(jj)];
                Eigen::VectorXd nv(oc.left);
                for (Index a = 0; a < oc.left; ++a) {
                    double acc = 0.0;
                    for (Index bb = 0; bb < oc.right; ++bb)
                        acc += oc.at(a, kk, bb) * v[bb];
                    nv[a] = acc;
                }
                v = std::move(nv);
            }
            for (Index a = 0; a < s.rows(); ++a)
                CHECK(std::abs(s(a, kk) - v[a]) <= 1e-12 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("bundle determinism") {
    TensorTrain t = tt_random(5, 2, 3, 29);
    auto om = make_omegas(t.phys_dims(), 4, 31);
    SketchBundle b1 = make_sketch_bundle(t, om, 4);
    SketchBundle b2 = make_sketch_bundle(t, om, 4);
    for (Index j = 2; j < 5; ++j)
        CHECK((b1.sketch_mats[j].array() == b2.sketch_mats[j].array()).all());
}

TEST_CASE("column-space capture for low-rank tails (statistical)") {
    // TT whose site-2 unfolding has exact rank r <= k-2: the sketched matrix
    // must keep numerical rank >= r across seeds.
    Index n = 6, d = 2, chi = 3, k = 5; // tail rank <= 3 = k-2
    TensorTrain t = tt_random(n, d, chi, 41);
    int failures = 0;
    for (int seed = 0; seed < 20; ++seed) {
        auto om = make_omegas(t.phys_dims(), k, 600 + seed);
        SketchBundle b = make_sketch_bundle(t, om, k);
        // build T~ over (s_1 s_2) x k: contract cores 0,1 with S_2
        const Core& c0 = t.core(0);
        const Core& c1 = t.core(1);
        Eigen::MatrixXd m(d * d, k);
        for (Index s1 = 0; s1 < d; ++s1)
            for (Index s2 = 0; s2 < d; ++s2)
                for (Index kk = 0; kk < k; ++kk) {
                    double acc = 0.0;
                    for (Index a = 0; a < c1.left; ++a)
                        for (Index bb = 0; bb < c1.right; ++bb)
                            acc += c0.at(0, s1, a) * c1.at(a, s2, bb) *
                                   b.sketch_mats[2](bb, kk);
                    m(s1 * d + s2, kk) = acc;
                }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
        Eigen::VectorXd sv = svd.singularValues();
        Index rank = 0;
        for (Index i = 0; i < sv.size(); ++i)
            if (sv[i] > 1e-10 * sv[0]) ++rank;
        // exact rank of the unfolding
        DenseTensor dd = tt_to_dense(t);
        Eigen::Map<MatRM> unf(dd.values.data(), d * d, dd.values.size() / (d * d));
        Eigen::JacobiSVD<Eigen::MatrixXd> svd2{Eigen::MatrixXd(unf)};
        Eigen::VectorXd sv2 = svd2.singularValues();
        Index true_rank = 0;
        for (Index i = 0; i < sv2.size(); ++i)
            if (sv2[i] > 1e-10 * sv2[0]) ++true_rank;
        if (rank < std::min(true_rank, k - 2)) ++failures;
    }
    CHECK(failures == 0);
}
