#include "tt/interpolative.hpp"

#include <cmath>
#include <stdexcept>

namespace tt {

InterpolativeFactor prrlu_row_id(const Eigen::MatrixXd& m, Index chi_max, double eps_id) {
    if (m.size() == 0) throw std::invalid_argument("prrlu_row_id: empty matrix");
    if (chi_max < 1) throw std::invalid_argument("prrlu_row_id: chi_max must be >= 1");
    if (eps_id < 0) throw std::invalid_argument("prrlu_row_id: eps_id must be >= 0");
    if (!m.allFinite()) throw std::domain_error("prrlu_row_id: non-finite entries");

    const Index rows = m.rows();
    const Index cols = m.cols();
    const Index max_rank = std::min({chi_max, rows, cols});

    Eigen::MatrixXd s = m; // working Schur complement
    Eigen::MatrixXd lcols(rows, max_rank);
    std::vector<Index> pivots;
    pivots.reserve(static_cast<std::size_t>(max_rank));
    double first_pivot = 0.0;
    double local_error = 0.0;

    while (true) {
        // Full pivot search; ties break to the lowest row-major linear index.
        Index pi = 0, pj = 0;
        double mx = -1.0;
        for (Index i = 0; i < rows; ++i)
            for (Index j = 0; j < cols; ++j) {
                double v = std::abs(s(i, j));
                if (v > mx) {
                    mx = v;
                    pi = i;
                    pj = j;
                }
            }
        if (pivots.empty()) {
            if (mx == 0.0) break; // all-zero input: rank 0
            first_pivot = mx;
        }
        if (mx <= eps_id * first_pivot) {
            local_error = mx;
            break;
        }
        double p = s(pi, pj);
        Eigen::VectorXd l = s.col(pj) / p;
        s.noalias() -= l * s.row(pi);
        lcols.col(static_cast<Index>(pivots.size())) = l;
        pivots.push_back(pi);
        if (static_cast<Index>(pivots.size()) >= max_rank) {
            local_error = s.cwiseAbs().maxCoeff();
            // Rank-exhausted against min(rows, cols): residual is exact zero in
            // theory; report 0 there, keep the Schur max when chi_max binds.
            if (max_rank >= std::min(rows, cols)) local_error = 0.0;
            break;
        }
    }

    InterpolativeFactor f;
    f.rank = static_cast<Index>(pivots.size());
    f.pivots = pivots;
    f.local_error = local_error;
    if (f.rank == 0) {
        f.x = Eigen::MatrixXd::Zero(rows, 0);
        f.skeleton = Eigen::MatrixXd::Zero(0, cols);
        f.local_error = 0.0;
        return f;
    }

    Eigen::MatrixXd lhat = lcols.leftCols(f.rank); // rows x r
    Eigen::MatrixXd li(f.rank, f.rank);            // unit lower triangular in selection order
    for (Index t = 0; t < f.rank; ++t) li.row(t) = lhat.row(pivots[static_cast<std::size_t>(t)]);
    // x = lhat * li^{-1} via triangular solve: li^T x^T = lhat^T.
    Eigen::MatrixXd xt =
        li.transpose().triangularView<Eigen::UnitUpper>().solve(lhat.transpose());
    f.x = xt.transpose();
    // Exact identity at pivot rows (set, not computed).
    for (Index t = 0; t < f.rank; ++t) {
        f.x.row(pivots[static_cast<std::size_t>(t)]).setZero();
        f.x(pivots[static_cast<std::size_t>(t)], t) = 1.0;
    }
    f.skeleton.resize(f.rank, cols);
    for (Index t = 0; t < f.rank; ++t) f.skeleton.row(t) = m.row(pivots[static_cast<std::size_t>(t)]);
    return f;
}

Eigen::MatrixXd id_reconstruct(const InterpolativeFactor& f) {
    if (f.rank == 0) return Eigen::MatrixXd::Zero(f.x.rows(), f.skeleton.cols());
    return f.x * f.skeleton;
}

} // namespace tt
