#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tt/tensor_train.hpp"

using namespace tt;

namespace {

TensorTrain all_ones(Index n, Index d, Index chi) {
    std::vector<Core> cores;
    for (Index j = 0; j < n; ++j) {
        Index l = j == 0 ? 1 : chi;
        Index r = j == n - 1 ? 1 : chi;
        Core c(l, d, r);
        c.data.setOnes();
        cores.push_back(std::move(c));
    }
    return TensorTrain(std::move(cores));
}

TensorTrain rank1(const std::vector<Eigen::VectorXd>& vecs) {
    std::vector<Core> cores;
    for (const Eigen::VectorXd& v : vecs) {
        Core c(1, v.size(), 1);
        c.data = v;
        cores.push_back(std::move(c));
    }
    return TensorTrain(std::move(cores));
}

double dense_rel(const DenseTensor& a, const DenseTensor& b) {
    return (a.values - b.values).norm() / b.values.norm();
}

} // namespace

TEST_CASE("tt_eval basics") {
    TensorTrain ones = all_ones(4, 2, 3);
    // all-ones: chain of all-ones matrices -> product of bond dims
    CHECK(tt_eval(ones, {0, 1, 1, 0}) == doctest::Approx(27.0).epsilon(1e-14));

    std::vector<Eigen::VectorXd> vs;
    for (int j = 0; j < 3; ++j) {
        Eigen::VectorXd v(2);
        v << 1.0 + j, 2.0 + j;
        vs.push_back(v);
    }
    TensorTrain r1 = rank1(vs);
    CHECK(tt_eval(r1, {1, 0, 1}) == doctest::Approx(2.0 * 2.0 * 4.0).epsilon(1e-14));

    TensorTrain t = tt_random(5, 2, 3, 42);
    DenseTensor d = tt_to_dense(t);
    // flat row-major index of (0,1,1,0,1)
    Index flat = ((((0 * 2 + 1) * 2 + 1) * 2 + 0) * 2 + 1);
    double ev = tt_eval(t, {0, 1, 1, 0, 1});
    CHECK(std::abs(ev - d.values[flat]) <= 1e-12 * std::abs(d.values[flat]));

    CHECK_THROWS_AS(tt_eval(t, {0, 1, 2, 0, 1}), std::out_of_range);
}

TEST_CASE("tt_to_dense") {
    TensorTrain ones = all_ones(3, 2, 1);
    DenseTensor d = tt_to_dense(ones);
    CHECK(d.values.size() == 8);
    for (Index i = 0; i < 8; ++i) CHECK(d.values[i] == doctest::Approx(1.0));

    // round trip through tt_from_dense
    DenseTensor src;
    src.shape = {2, 3, 2};
    src.values.resize(12);
    for (Index i = 0; i < 12; ++i) src.values[i] = std::sin(0.7 * double(i) + 0.2);
    TensorTrain t = tt_from_dense(src, 6, 1e-14);
    CHECK(dense_rel(tt_to_dense(t), src) <= 1e-12);

    // n=2 cores reshaped from U, V -> dense equals U*V
    Eigen::MatrixXd u(3, 2), v(2, 4);
    u << 1, 2, 3, 4, 5, 6;
    v << 1, 0, 2, 1, 3, 1, 0, 2;
    std::vector<Core> cores;
    Core cu(1, 3, 2);
    cu.lmap() = u;
    Core cv(2, 4, 1);
    cv.rmap() = v;
    cores.push_back(std::move(cu));
    cores.push_back(std::move(cv));
    TensorTrain uv(std::move(cores));
    DenseTensor duv = tt_to_dense(uv);
    Eigen::MatrixXd prod = u * v;
    for (Index i = 0; i < 3; ++i)
        for (Index j = 0; j < 4; ++j)
            CHECK(duv.values[i * 4 + j] == doctest::Approx(prod(i, j)).epsilon(1e-14));

    // cap guard
    CHECK_THROWS_AS(tt_to_dense(all_ones(30, 2, 1), Index(1) << 20), std::length_error);
}

TEST_CASE("tt_from_dense") {
    // rank-1 structure -> all bonds 1
    std::vector<Eigen::VectorXd> vs;
    for (int j = 0; j < 4; ++j) {
        Eigen::VectorXd v(2);
        v << 0.3 + j, 1.1 - 0.2 * j;
        vs.push_back(v);
    }
    DenseTensor d = tt_to_dense(rank1(vs));
    TensorTrain t = tt_from_dense(d, 8, 1e-12);
    for (Index b : t.bond_dims()) CHECK(b == 1);
    CHECK(dense_rel(tt_to_dense(t), d) <= 1e-14);

    // reconstruction of a chi=4 TT at chi_max=4
    TensorTrain src = tt_random(5, 2, 4, 7);
    DenseTensor ds = tt_to_dense(src);
    TensorTrain rec = tt_from_dense(ds, 4, 1e-14);
    CHECK(dense_rel(tt_to_dense(rec), ds) <= 1e-12);

    // error non-increasing in chi_max
    double prev = 2.0;
    for (Index chi : {1, 2, 4, 8}) {
        TensorTrain tr = tt_from_dense(ds, chi, 0.0);
        double err = dense_rel(tt_to_dense(tr), ds);
        CHECK(err <= prev + 1e-12);
        prev = err;
    }
}

TEST_CASE("tt_hadamard_direct") {
    std::vector<Eigen::VectorXd> va, vb;
    for (int j = 0; j < 3; ++j) {
        Eigen::VectorXd x(2), y(2);
        x << 1.0 + j, 0.5 * j + 2.0;
        y << 2.0 - 0.3 * j, 1.0 + 0.1 * j;
        va.push_back(x);
        vb.push_back(y);
    }
    TensorTrain pa = rank1(va), pb = rank1(vb);
    TensorTrain prod = tt_hadamard_direct(pa, pb);
    for (Index b : prod.bond_dims()) CHECK(b == 1);
    for (Index j = 0; j < 3; ++j)
        for (Index s = 0; s < 2; ++s)
            CHECK(prod.core(j).at(0, s, 0) ==
                  doctest::Approx(va[j][s] * vb[j][s]).epsilon(1e-14));

    // multiplicative identity values
    TensorTrain ones = all_ones(4, 2, 1);
    TensorTrain b = tt_random(4, 2, 3, 3);
    TensorTrain ob = tt_hadamard_direct(ones, b);
    DenseTensor dob = tt_to_dense(ob), db = tt_to_dense(b);
    CHECK((dob.values - db.values).norm() <= 1e-12 * db.values.norm());

    // dense oracle on a random pair
    TensorTrain x = tt_random(5, 2, 3, 21), y = tt_random(5, 2, 3, 22);
    DenseTensor dx = tt_to_dense(x), dy = tt_to_dense(y);
    DenseTensor dp = tt_to_dense(tt_hadamard_direct(x, y));
    Eigen::VectorXd truth = dx.values.cwiseProduct(dy.values);
    CHECK((dp.values - truth).norm() <= 1e-12 * truth.norm());

    CHECK_THROWS_AS(tt_hadamard_direct(x, tt_random(4, 2, 3, 1)),
                    std::invalid_argument);
}

TEST_CASE("hadamard exactness sweep (property)") {
    for (Index n = 3; n <= 6; ++n)
        for (Index d = 2; d <= 3; ++d)
            for (Index chi : {1, 4}) {
                TensorTrain a = tt_random(n, d, chi, 100 + n * 10 + d);
                TensorTrain b = tt_random(n, d, chi, 200 + n * 10 + d);
                TensorTrain p = tt_hadamard_direct(a, b);
                DenseTensor da = tt_to_dense(a), db = tt_to_dense(b),
                            dp = tt_to_dense(p);
                for (Index i = 0; i < dp.values.size(); ++i) {
                    double truth = da.values[i] * db.values[i];
                    CHECK(std::abs(dp.values[i] - truth) <=
                          1e-12 * std::abs(truth) + 1e-14);
                }
            }
}

TEST_CASE("tt_round") {
    std::vector<Eigen::VectorXd> vs;
    for (int j = 0; j < 4; ++j) {
        Eigen::VectorXd v(2);
        v << 1.0, 0.5 + 0.1 * j;
        vs.push_back(v);
    }
    TensorTrain r1 = rank1(vs);
    TensorTrain rr = tt_round(r1, 3, 1e-14);
    CHECK(relative_error(rr, r1) <= 1e-14);

    TensorTrain a = tt_random(5, 2, 3, 31), b = tt_random(5, 2, 3, 32);
    TensorTrain p = tt_hadamard_direct(a, b); // bonds up to 9
    TensorTrain p9 = tt_round(p, 9, 1e-14);
    CHECK(dense_rel(tt_to_dense(p9), tt_to_dense(p)) <= 1e-12);
    for (Index bd : p9.bond_dims()) CHECK(bd <= 9);

    // chi_max=3 rounding matches the dense TT-SVD oracle error
    TensorTrain p3 = tt_round(p, 3, 0.0);
    double err_round = dense_rel(tt_to_dense(p3), tt_to_dense(p));
    TensorTrain oracle = tt_from_dense(tt_to_dense(p), 3, 0.0);
    double err_svd = dense_rel(tt_to_dense(oracle), tt_to_dense(p));
    CHECK(std::abs(err_round - err_svd) <= 1e-10);

    // monotone in chi_max
    double prev = 2.0;
    for (Index chi : {1, 2, 4, 9}) {
        double e = relative_error(tt_round(p, chi, 0.0), p);
        CHECK(e <= prev + 1e-10);
        prev = e;
    }
}

TEST_CASE("tt_inner") {
    Eigen::VectorXd e0(2);
    e0 << 1.0, 0.0;
    TensorTrain unit = rank1({e0, e0, e0});
    CHECK(tt_inner(unit, unit) == doctest::Approx(1.0).epsilon(1e-14));

    TensorTrain ones = all_ones(4, 2, 1);
    TensorTrain b = tt_random(4, 2, 3, 9);
    double s = tt_inner(ones, b);
    CHECK(s == doctest::Approx(tt_to_dense(b).values.sum()).epsilon(1e-12));

    for (int seed = 0; seed < 100; ++seed) {
        TensorTrain t = tt_random(4, 2, 2, 1000 + seed);
        CHECK(tt_inner(t, t) >= 0.0);
    }

    // symmetry
    TensorTrain x = tt_random(5, 2, 3, 51), y = tt_random(5, 2, 3, 52);
    double nx = std::sqrt(tt_inner(x, x)), ny = std::sqrt(tt_inner(y, y));
    CHECK(std::abs(tt_inner(x, y) - tt_inner(y, x)) <= 1e-12 * nx * ny);
}

TEST_CASE("relative_error") {
    TensorTrain t = tt_random(5, 2, 3, 61);
    CHECK(relative_error(t, t) <= 1e-12);

    std::vector<Core> cs = t.cores();
    cs[0].data *= 2.0;
    TensorTrain t2(std::move(cs));
    CHECK(relative_error(t2, t) == doctest::Approx(1.0).epsilon(1e-10));

    // agreement with the dense error well above the Gram-formula noise floor
    TensorTrain a = tt_random(6, 2, 4, 62);
    TensorTrain ar = tt_round(a, 2, 0.0); // hard truncation, O(1e-1) error
    double re = relative_error(ar, a);
    double dense = dense_rel(tt_to_dense(ar), tt_to_dense(a));
    CHECK(re > 1e-3);
    CHECK(std::abs(re - dense) <= 1e-8);

    CHECK_THROWS_AS(relative_error(t, tt_zero({2, 2, 2, 2, 2})), std::domain_error);
}

TEST_CASE("relative_error gauge invariance") {
    TensorTrain a = tt_random(4, 2, 3, 71), b = tt_random(4, 2, 3, 72);
    double base = relative_error(a, b);
    // insert M, M^-1 on the middle bond of a (dimension 3)
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
    m(0, 1) = 0.4;
    m(2, 0) = -0.7;
    m(1, 1) = 1.5;
    std::vector<Core> cs = a.cores();
    Core c1(cs[1].left, cs[1].phys, cs[1].right);
    c1.lmap() = cs[1].lmap() * m;
    Core c2(cs[2].left, cs[2].phys, cs[2].right);
    c2.rmap() = m.inverse() * cs[2].rmap();
    cs[1] = std::move(c1);
    cs[2] = std::move(c2);
    TensorTrain ag(std::move(cs));
    CHECK(std::abs(relative_error(ag, b) - base) <= 1e-10);
}

TEST_CASE("tt_random") {
    TensorTrain a = tt_random(5, 2, 3, 99), b = tt_random(5, 2, 3, 99);
    for (Index j = 0; j < 5; ++j)
        CHECK((a.core(j).data.array() == b.core(j).data.array()).all());

    CHECK(tt_random(2, 2, 5, 1).bond_dims() == std::vector<Index>{2});

    std::vector<Index> bonds = tt_random(6, 2, 3, 2).bond_dims();
    CHECK(bonds == std::vector<Index>{2, 3, 3, 3, 2});
}

TEST_CASE("tt_normalize") {
    Eigen::VectorXd e0(2);
    e0 << 1.0, 0.0;
    TensorTrain unit = rank1({e0, e0, e0});
    TensorTrain un = tt_normalize(unit);
    CHECK(relative_error(un, unit) <= 1e-14);

    TensorTrain ones = all_ones(4, 2, 1);
    CHECK(tt_inner(ones, ones) == doctest::Approx(16.0));
    TensorTrain on = tt_normalize(ones);
    CHECK(tt_inner(on, on) == doctest::Approx(1.0).epsilon(1e-12));

    TensorTrain r = tt_normalize(tt_random(6, 3, 4, 5));
    CHECK(std::abs(tt_inner(r, r) - 1.0) <= 1e-12);

    CHECK_THROWS_AS(tt_normalize(tt_zero({2, 2})), std::domain_error);
}

TEST_CASE("validator") {
    std::vector<Core> bad;
    bad.emplace_back(1, 2, 3);
    bad.emplace_back(2, 2, 1); // bond mismatch 3 vs 2
    CHECK_THROWS_AS(TensorTrain(std::move(bad)), std::invalid_argument);

    std::vector<Core> bad2;
    bad2.emplace_back(2, 2, 2); // boundary bond != 1
    bad2.emplace_back(2, 2, 1);
    CHECK_THROWS_AS(TensorTrain(std::move(bad2)), std::invalid_argument);

    // every operation yields validating TTs (validate() called in ctor)
    TensorTrain a = tt_random(4, 2, 3, 8);
    tt_round(a, 2, 0.0).validate();
    tt_hadamard_direct(a, a).validate();
    tt_normalize(a).validate();
}
