#include "tt/tensor_train.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "tt/rng.hpp"

namespace tt {

TensorTrain::TensorTrain(std::vector<Core> cores) : cores_(std::move(cores)) {
    validate();
}

void TensorTrain::validate() const {
    if (cores_.size() < 2)
        throw std::invalid_argument("TensorTrain: order must be >= 2");
    if (cores_.front().left != 1 || cores_.back().right != 1)
        throw std::invalid_argument("TensorTrain: boundary bonds must be 1");
    for (std::size_t j = 0; j < cores_.size(); ++j) {
        const Core& c = cores_[j];
        if (c.left < 1 || c.phys < 1 || c.right < 1)
            throw std::invalid_argument("TensorTrain: all dimensions must be >= 1");
        if (c.data.size() != c.left * c.phys * c.right)
            throw std::invalid_argument("TensorTrain: core storage size mismatch");
        if (j + 1 < cores_.size() && c.right != cores_[j + 1].left)
            throw std::invalid_argument("TensorTrain: adjacent bond mismatch");
    }
}

std::vector<Index> TensorTrain::phys_dims() const {
    std::vector<Index> d;
    d.reserve(cores_.size());
    for (const Core& c : cores_) d.push_back(c.phys);
    return d;
}

std::vector<Index> TensorTrain::bond_dims() const {
    std::vector<Index> b;
    for (std::size_t j = 0; j + 1 < cores_.size(); ++j) b.push_back(cores_[j].right);
    return b;
}

Index TensorTrain::max_bond() const {
    Index m = 1;
    for (std::size_t j = 0; j + 1 < cores_.size(); ++j) m = std::max(m, cores_[j].right);
    return m;
}

Index checked_dense_size(const std::vector<Index>& shape, Index cap) {
    Index total = 1;
    for (Index d : shape) {
        if (d < 1) throw std::invalid_argument("dense shape entries must be >= 1");
        if (total > cap / d) throw std::length_error("dense tensor exceeds entry cap");
        total *= d;
    }
    return total;
}

double tt_eval(const TensorTrain& tt, const std::vector<Index>& idx) {
    if (static_cast<Index>(idx.size()) != tt.order())
        throw std::out_of_range("tt_eval: index length mismatch");
    Eigen::RowVectorXd v = Eigen::RowVectorXd::Ones(1);
    for (Index j = 0; j < tt.order(); ++j) {
        const Core& c = tt.core(j);
        Index s = idx[static_cast<std::size_t>(j)];
        if (s < 0 || s >= c.phys) throw std::out_of_range("tt_eval: index out of range");
        // slice (left x right) at physical index s
        Eigen::MatrixXd m(c.left, c.right);
        for (Index a = 0; a < c.left; ++a)
            for (Index b = 0; b < c.right; ++b) m(a, b) = c.at(a, s, b);
        v = v * m;
    }
    return v(0);
}

DenseTensor tt_to_dense(const TensorTrain& tt, Index cap) {
    DenseTensor out;
    out.shape = tt.phys_dims();
    checked_dense_size(out.shape, cap);
    // Left fold: W has shape (prefix_size x chi_j), stored row-major.
    MatRM w = tt.core(0).lmap(); // (d_0 x chi_1), left bond 1
    for (Index j = 1; j < tt.order(); ++j) {
        const Core& c = tt.core(j);
        MatRM next = w * c.rmap();           // (pref x d_j*chi_j)
        w = Eigen::Map<MatRM>(next.data(), next.rows() * c.phys, c.right);
    }
    out.values = Eigen::Map<const Eigen::VectorXd>(w.data(), w.size());
    return out;
}

namespace {

// Truncation rank: smallest r with sqrt(sum_{t>=r} s_t^2) <= delta, clamped to [1, chi_max].
Index truncation_rank(const Eigen::VectorXd& sv, Index chi_max, double delta) {
    Index full = sv.size();
    Index rank = full;
    double tail2 = 0.0;
    for (Index t = full - 1; t >= 0; --t) {
        tail2 += sv[t] * sv[t];
        if (std::sqrt(tail2) <= delta)
            rank = t;
        else
            break;
    }
    return std::max<Index>(1, std::min(rank, chi_max));
}

} // namespace

TensorTrain tt_from_dense(const DenseTensor& dense, Index chi_max, double eps, Index cap) {
    if (chi_max < 1) throw std::invalid_argument("tt_from_dense: chi_max must be >= 1");
    if (eps < 0) throw std::invalid_argument("tt_from_dense: eps must be >= 0");
    Index total = checked_dense_size(dense.shape, cap);
    if (total != dense.size())
        throw std::invalid_argument("tt_from_dense: shape/value count mismatch");
    Index n = static_cast<Index>(dense.shape.size());
    if (n < 2) throw std::invalid_argument("tt_from_dense: order must be >= 2");

    double nrm = dense.values.norm();
    double delta = eps * nrm / std::sqrt(static_cast<double>(n - 1));

    std::vector<Core> cores;
    cores.reserve(static_cast<std::size_t>(n));
    Eigen::VectorXd work = dense.values;
    Index r = 1;
    Index rest = total;
    for (Index j = 0; j + 1 < n; ++j) {
        Index dj = dense.shape[static_cast<std::size_t>(j)];
        rest /= dj;
        Eigen::Map<MatRM> m(work.data(), r * dj, rest);
        Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        Index rank = truncation_rank(svd.singularValues(), chi_max, delta);
        Core c(r, dj, rank);
        c.lmap() = svd.matrixU().leftCols(rank);
        MatRM w = svd.singularValues().head(rank).asDiagonal() *
                  svd.matrixV().leftCols(rank).transpose();
        cores.push_back(std::move(c));
        work = Eigen::Map<const Eigen::VectorXd>(w.data(), w.size());
        r = rank;
    }
    Core last(r, dense.shape.back(), 1);
    last.data = work;
    cores.push_back(std::move(last));
    return TensorTrain(std::move(cores));
}

TensorTrain tt_hadamard_direct(const TensorTrain& a, const TensorTrain& b) {
    if (a.order() != b.order() || a.phys_dims() != b.phys_dims())
        throw std::invalid_argument("tt_hadamard_direct: shape mismatch");
    std::vector<Core> cores;
    cores.reserve(static_cast<std::size_t>(a.order()));
    for (Index j = 0; j < a.order(); ++j) {
        const Core& ca = a.core(j);
        const Core& cb = b.core(j);
        Core c(ca.left * cb.left, ca.phys, ca.right * cb.right);
        for (Index al = 0; al < ca.left; ++al)
            for (Index bl = 0; bl < cb.left; ++bl)
                for (Index s = 0; s < ca.phys; ++s)
                    for (Index ar = 0; ar < ca.right; ++ar)
                        for (Index br = 0; br < cb.right; ++br)
                            c.at(al * cb.left + bl, s, ar * cb.right + br) =
                                ca.at(al, s, ar) * cb.at(bl, s, br);
        cores.push_back(std::move(c));
    }
    return TensorTrain(std::move(cores));
}

TensorTrain tt_round(const TensorTrain& tt, Index chi_max, double eps) {
    if (chi_max < 1) throw std::invalid_argument("tt_round: chi_max must be >= 1");
    if (eps < 0) throw std::invalid_argument("tt_round: eps must be >= 0");
    Index n = tt.order();

    // Right-to-left LQ sweep: leaves cores 1..n-1 right-orthogonal,
    // all weight in core 0.
    std::vector<Core> cs = tt.cores();
    for (Index j = n - 1; j >= 1; --j) {
        Core& c = cs[static_cast<std::size_t>(j)];
        // LQ of the (left x phys*right) unfolding via QR of its transpose.
        Eigen::MatrixXd mt = c.rmap().transpose(); // (phys*right x left)
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(mt);
        Index r = std::min(mt.rows(), mt.cols());
        Eigen::MatrixXd thin_q =
            qr.householderQ() * Eigen::MatrixXd::Identity(mt.rows(), r);
        Eigen::MatrixXd l =
            qr.matrixQR().topRows(r).triangularView<Eigen::Upper>().toDenseMatrix().transpose();
        Core nc(r, c.phys, c.right);
        nc.rmap() = thin_q.transpose();
        cs[static_cast<std::size_t>(j)] = std::move(nc);
        Core& prev = cs[static_cast<std::size_t>(j - 1)];
        Core np(prev.left, prev.phys, r);
        np.lmap() = prev.lmap() * l;
        cs[static_cast<std::size_t>(j - 1)] = std::move(np);
    }

    double nrm = cs[0].data.norm();
    double delta = eps * nrm;

    // Left-to-right truncated SVD sweep.
    for (Index j = 0; j + 1 < n; ++j) {
        Core& c = cs[static_cast<std::size_t>(j)];
        Eigen::BDCSVD<Eigen::MatrixXd> svd(c.lmap(),
                                           Eigen::ComputeThinU | Eigen::ComputeThinV);
        Index rank = truncation_rank(svd.singularValues(), chi_max, delta);
        Core nc(c.left, c.phys, rank);
        nc.lmap() = svd.matrixU().leftCols(rank);
        Eigen::MatrixXd w = svd.singularValues().head(rank).asDiagonal() *
                            svd.matrixV().leftCols(rank).transpose(); // (rank x chi_j)
        cs[static_cast<std::size_t>(j)] = std::move(nc);
        Core& next = cs[static_cast<std::size_t>(j + 1)];
        Core nn(rank, next.phys, next.right);
        nn.rmap() = w * next.rmap();
        cs[static_cast<std::size_t>(j + 1)] = std::move(nn);
    }
    return TensorTrain(std::move(cs));
}

double tt_inner(const TensorTrain& a, const TensorTrain& b) {
    if (a.order() != b.order() || a.phys_dims() != b.phys_dims())
        throw std::invalid_argument("tt_inner: shape mismatch");
    // Transfer contraction: E (chi_a x chi_b), E_0 = 1x1 ones.
    Eigen::MatrixXd e = Eigen::MatrixXd::Ones(1, 1);
    for (Index j = 0; j < a.order(); ++j) {
        const Core& ca = a.core(j);
        const Core& cb = b.core(j);
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(ca.right, cb.right);
        for (Index s = 0; s < ca.phys; ++s) {
            // A_s: (la x ra), B_s: (lb x rb); next += A_s^T E B_s
            Eigen::MatrixXd as(ca.left, ca.right), bs(cb.left, cb.right);
            for (Index al = 0; al < ca.left; ++al)
                for (Index ar = 0; ar < ca.right; ++ar) as(al, ar) = ca.at(al, s, ar);
            for (Index bl = 0; bl < cb.left; ++bl)
                for (Index br = 0; br < cb.right; ++br) bs(bl, br) = cb.at(bl, s, br);
            next.noalias() += as.transpose() * e * bs;
        }
        e = std::move(next);
    }
    return e(0, 0);
}

double relative_error(const TensorTrain& approx, const TensorTrain& truth) {
    double gg = tt_inner(truth, truth);
    if (gg <= 0.0) throw std::domain_error("relative_error: zero-norm truth");
    double gh = tt_inner(truth, approx);
    double hh = tt_inner(approx, approx);
    double num2 = gg - 2.0 * gh + hh;
    if (num2 < 0.0) num2 = 0.0; // clamp negative rounding residue
    return std::sqrt(num2) / std::sqrt(gg);
}

TensorTrain tt_random(Index n, Index d, Index chi, std::uint64_t seed) {
    if (n < 2 || d < 1 || chi < 1) throw std::invalid_argument("tt_random: bad dimensions");
    // Bond caps: min(chi, d^j, d^(n-j)) with saturating products.
    std::vector<Index> bonds(static_cast<std::size_t>(n + 1), 1);
    Index left_cap = 1;
    for (Index j = 1; j < n; ++j) {
        left_cap = (left_cap > chi / d + 1) ? chi + 1 : left_cap * d;
        Index right_cap = 1;
        for (Index t = 0; t < n - j && right_cap <= chi; ++t) right_cap *= d;
        bonds[static_cast<std::size_t>(j)] = std::min({chi, left_cap, right_cap});
    }
    NormalSampler normal(seed);
    std::vector<Core> cores;
    for (Index j = 0; j < n; ++j) {
        Core c(bonds[static_cast<std::size_t>(j)], d, bonds[static_cast<std::size_t>(j + 1)]);
        for (Index t = 0; t < c.data.size(); ++t) c.data[t] = normal();
        cores.push_back(std::move(c));
    }
    return TensorTrain(std::move(cores));
}

TensorTrain tt_normalize(const TensorTrain& tt) {
    double nn = tt_inner(tt, tt);
    if (nn <= 0.0) throw std::domain_error("tt_normalize: zero norm");
    std::vector<Core> cs = tt.cores();
    cs[0].data /= std::sqrt(nn);
    return TensorTrain(std::move(cs));
}

TensorTrain tt_zero(const std::vector<Index>& phys_dims) {
    std::vector<Core> cores;
    for (Index d : phys_dims) cores.emplace_back(1, d, 1);
    return TensorTrain(std::move(cores));
}

} // namespace tt
