#include "tt/rsi.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include "tt/interpolative.hpp"
#include "tt/sketch.hpp"

namespace tt {

namespace {

constexpr std::uint64_t kReseedStride = 0x9E3779B97F4A7C15ull;

std::int64_t now_ns() {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

struct RunInputs {
    std::vector<const TensorTrain*> uniq;  // distinct input tensors
    std::vector<std::size_t> which;        // original position -> uniq index
    std::function<double(double)> f;       // empty for plain products
};

void check_finite_map(const MatRM& g, Index iter) {
    for (Index r = 0; r < g.rows(); ++r)
        for (Index c = 0; c < g.cols(); ++c)
            if (!std::isfinite(g(r, c))) {
                std::ostringstream os;
                os << "rsi_map: non-finite map output at iteration " << iter
                   << ", matricization entry (" << r << ", " << c << ")";
                throw std::domain_error(os.str());
            }
}

// Contract tail cores js..n-1 of one input (head already re-interpolated, left
// bond chiG) into a flat row-major array of shape (chiG, d_js, .., d_{n-1}).
MatRM dense_tail(const std::vector<Core>& tail, Index js) {
    Index n = static_cast<Index>(tail.size());
    const Core& head = tail[static_cast<std::size_t>(js)];
    MatRM w = head.lmap(); // (chiG*d_js x chi)
    for (Index j = js + 1; j < n; ++j) {
        const Core& c = tail[static_cast<std::size_t>(j)];
        MatRM next = w * c.rmap();
        w = Eigen::Map<MatRM>(next.data(), next.rows() * c.phys, c.right);
    }
    // final bond is 1: (chiG * prod d x 1)
    return w;
}

struct RsiRun {
    const RunInputs& in;
    const RsiConfig& cfg;
    const std::vector<Eigen::MatrixXd>* omegas_override;
    std::uint64_t seed;

    RsiReport operator()() {
        const TensorTrain& first = *in.uniq.front();
        const Index n = first.order();
        const std::vector<Index> d = first.phys_dims();
        const Index d_max = *std::max_element(d.begin(), d.end());
        const Index k = rsi_sketch_dim(cfg, d_max);
        const std::size_t nu = in.uniq.size();

        RsiReport rep{TensorTrain(std::vector<Core>{Core(1, 1, 1), Core(1, 1, 1)}),
                      {}, {}, 0, 0, 0.0, 1, 0};
        for (const TensorTrain* t : in.uniq)
            rep.max_intermediate_bond = std::max(rep.max_intermediate_bond, t->max_bond());

        // Sketch bundles (precomputed backward sweep), shared Omegas by default.
        std::vector<SketchBundle> bundles(nu);
        if (n >= 3) {
            std::int64_t t0 = now_ns();
            std::vector<Eigen::MatrixXd> shared;
            if (omegas_override)
                shared = *omegas_override;
            else if (cfg.share_omegas)
                shared = make_omegas(d, k, seed);
            for (std::size_t i = 0; i < nu; ++i) {
                std::vector<Eigen::MatrixXd> own;
                if (!omegas_override && !cfg.share_omegas)
                    own = make_omegas(d, k,
                                      seed + (static_cast<std::uint64_t>(i) + 1) *
                                                 kReseedStride);
                const std::vector<Eigen::MatrixXd>& om = own.empty() ? shared : own;
                bundles[i] = make_sketch_bundle(*in.uniq[i], om, k);
                for (Index j = 2; j < n; ++j) {
                    const Core& c = in.uniq[i]->core(j);
                    rep.flops += 2.0 * c.left * c.phys * c.right * k // sketched core
                                 + 2.0 * c.left * c.right * k;       // KRP chain step
                }
            }
            rep.t_sketch_ns = now_ns() - t0;
        }

        std::int64_t t_iter0 = now_ns();

        // Per-unique-input mutable tails; entry js holds the re-interpolated head.
        std::vector<std::vector<Core>> tails(nu);
        for (std::size_t i = 0; i < nu; ++i) tails[i] = in.uniq[i]->cores();

        std::vector<Core> out(static_cast<std::size_t>(n));
        std::vector<std::vector<Index>> prev_multi{{}}; // pivot prefixes, chiG of them
        Index chi_g = 1;
        bool dense_mode = false;
        MatRM gdense;                   // (chiG * d_j) x (prod of remaining dims)
        std::vector<Index> gdense_dims; // remaining dims d_{j+1}..d_{n-1}

        auto build_dense = [&](Index j) {
            std::vector<MatRM> ds(nu);
            for (std::size_t i = 0; i < nu; ++i) {
                ds[i] = dense_tail(tails[i], j);
                const std::vector<Core>& tl = tails[i];
                double rows = static_cast<double>(chi_g) *
                              tl[static_cast<std::size_t>(j)].phys;
                for (Index jj = j + 1; jj < n; ++jj) {
                    const Core& c = tl[static_cast<std::size_t>(jj)];
                    rep.flops += 2.0 * rows * c.left * c.phys * c.right;
                    rows *= c.phys;
                }
            }
            MatRM g;
            if (in.f) {
                g = ds[0].unaryExpr(in.f);
                check_finite_map(g, j);
            } else {
                g = MatRM::Ones(ds[0].rows(), 1);
                for (std::size_t pos = 0; pos < in.which.size(); ++pos)
                    g = g.cwiseProduct(ds[in.which[pos]]);
                rep.flops += static_cast<double>(in.which.size()) * ds[0].rows();
            }
            // g is a column vector of length chiG * prod(d_j..d_{n-1});
            // reshape to (chiG*d_j) x rest.
            gdense_dims.assign(d.begin() + j + 1, d.end());
            Index rest = 1;
            for (Index dd : gdense_dims) rest *= dd;
            gdense = Eigen::Map<MatRM>(g.data(), g.size() / rest, rest);
        };

        Index j = 0;
        while (j <= n - 2) {
            if (!dense_mode && j < n - 2 && cfg.skip_sketch_auto) {
                double tailprod = 1.0;
                for (Index t = j + 2; t < n && tailprod <= k; ++t)
                    tailprod *= d[static_cast<std::size_t>(t)];
                if (tailprod <= static_cast<double>(k)) {
                    dense_mode = true;
                    build_dense(j);
                }
            }
            if (dense_mode || j == n - 2) {
                if (!dense_mode) {
                    dense_mode = true;
                    build_dense(j); // exact two-site final tail
                }
                // Successive IDs on the exact dense tail.
                while (j <= n - 2) {
                    Index dj = d[static_cast<std::size_t>(j)];
                    InterpolativeFactor id =
                        prrlu_row_id(gdense, cfg.chi_max, cfg.eps_id);
                    rep.flops += 3.0 * id.rank * gdense.rows() * gdense.cols();
                    if (id.rank == 0) {
                        // Exact tail is zero on all interpolated fibers: the
                        // output is the zero continuation, not a sketch failure.
                        for (Index jj = j; jj < n; ++jj)
                            out[static_cast<std::size_t>(jj)] =
                                Core(jj == j ? chi_g : 1, d[static_cast<std::size_t>(jj)], 1);
                        rep.trail.flat.push_back({});
                        rep.trail.multi.push_back({});
                        rep.iterations.push_back({0, 0.0, false});
                        j = n - 1;
                        break;
                    }
                    Core cj(chi_g, dj, id.rank);
                    cj.lmap() = id.x;
                    out[static_cast<std::size_t>(j)] = std::move(cj);
                    std::vector<std::vector<Index>> new_multi;
                    std::vector<Index> flat;
                    for (Index p : id.pivots) {
                        flat.push_back(p);
                        std::vector<Index> mi = prev_multi[static_cast<std::size_t>(p / dj)];
                        mi.push_back(p % dj);
                        new_multi.push_back(std::move(mi));
                    }
                    rep.trail.flat.push_back(std::move(flat));
                    rep.trail.multi.push_back(new_multi);
                    prev_multi = std::move(new_multi);
                    rep.iterations.push_back({id.rank, id.local_error, false});
                    rep.max_intermediate_bond = std::max(rep.max_intermediate_bond, id.rank);

                    if (j == n - 2) {
                        // Final core is the skeleton: exact product entries.
                        Core last(id.rank, d[static_cast<std::size_t>(n - 1)], 1);
                        for (Index t = 0; t < id.rank; ++t)
                            for (Index s = 0; s < last.phys; ++s)
                                last.at(t, s, 0) = id.skeleton(t, s);
                        out[static_cast<std::size_t>(n - 1)] = std::move(last);
                        j = n - 1;
                        break;
                    }
                    // Slice pivot rows; re-expose the next physical index.
                    Index dn = gdense_dims.front();
                    Index rest = gdense.cols() / dn;
                    MatRM next(id.rank * dn, rest);
                    for (Index t = 0; t < id.rank; ++t)
                        next.middleRows(t * dn, dn) =
                            Eigen::Map<const MatRM>(gdense.row(id.pivots[static_cast<std::size_t>(t)]).data(),
                                                    dn, rest);
                    gdense = std::move(next);
                    gdense_dims.erase(gdense_dims.begin());
                    chi_g = id.rank;
                    ++j;
                }
                continue;
            }

            // Sketched iteration at sites j, j+1 with sketch matrix S_{j+2}.
            Index dj = d[static_cast<std::size_t>(j)];
            Index dj1 = d[static_cast<std::size_t>(j + 1)];
            std::vector<MatRM> ti(nu);
            for (std::size_t i = 0; i < nu; ++i) {
                const Core& h = tails[i][static_cast<std::size_t>(j)];
                const Core& c = tails[i][static_cast<std::size_t>(j + 1)];
                const Eigen::MatrixXd& s =
                    bundles[i].sketch_mats[static_cast<std::size_t>(j + 2)];
                MatRM cp = c.lmap() * s; // (chiB*dj1) x k
                Eigen::Map<MatRM> cp_r(cp.data(), c.left, dj1 * bundles[i].k);
                ti[i] = h.lmap() * cp_r; // (chiG*dj) x (dj1*k)
                rep.flops += 2.0 * c.left * dj1 * c.right * k +
                             2.0 * h.left * dj * c.left * dj1 * k;
            }
            MatRM g;
            if (in.f) {
                g = ti[0].unaryExpr(in.f);
                check_finite_map(g, j);
            } else {
                g = MatRM::Ones(ti[0].rows(), ti[0].cols());
                for (std::size_t pos = 0; pos < in.which.size(); ++pos)
                    g = g.cwiseProduct(ti[in.which[pos]]);
                rep.flops += static_cast<double>(in.which.size()) * g.size();
            }
            InterpolativeFactor id = prrlu_row_id(g, cfg.chi_max, cfg.eps_id);
            rep.flops += 3.0 * id.rank * g.rows() * g.cols();
            if (id.rank == 0)
                throw DegenerateSketchError(
                    "rsi: sketched iteration produced rank 0 on nonzero input");
            Core cj(chi_g, dj, id.rank);
            cj.lmap() = id.x;
            out[static_cast<std::size_t>(j)] = std::move(cj);
            std::vector<std::vector<Index>> new_multi;
            std::vector<Index> flat;
            for (Index p : id.pivots) {
                flat.push_back(p);
                std::vector<Index> mi = prev_multi[static_cast<std::size_t>(p / dj)];
                mi.push_back(p % dj);
                new_multi.push_back(std::move(mi));
            }
            rep.trail.flat.push_back(std::move(flat));
            rep.trail.multi.push_back(new_multi);
            prev_multi = std::move(new_multi);
            rep.iterations.push_back({id.rank, id.local_error, true});
            rep.max_intermediate_bond = std::max(rep.max_intermediate_bond, id.rank);

            // Re-interpolation: slice the contracted two-site tails at pivots.
            for (std::size_t i = 0; i < nu; ++i) {
                const Core& h = tails[i][static_cast<std::size_t>(j)];
                const Core& c = tails[i][static_cast<std::size_t>(j + 1)];
                MatRM w = h.lmap() * c.rmap(); // (chiG*dj) x (dj1*chiC)
                rep.flops += 2.0 * h.left * dj * c.left * dj1 * c.right;
                Core head(id.rank, dj1, c.right);
                for (Index t = 0; t < id.rank; ++t)
                    head.lmap().middleRows(t * dj1, dj1) = Eigen::Map<const MatRM>(
                        w.row(id.pivots[static_cast<std::size_t>(t)]).data(), dj1, c.right);
                tails[i][static_cast<std::size_t>(j + 1)] = std::move(head);
            }
            chi_g = id.rank;
            ++j;
        }

        rep.t_iter_ns = now_ns() - t_iter0;
        rep.output = TensorTrain(std::move(out));
        rep.trail.validate_left_nesting();
        return rep;
    }
};

RsiReport run_with_retries(const RunInputs& in, const RsiConfig& cfg,
                           const std::vector<Eigen::MatrixXd>* omegas_override) {
    const TensorTrain& first = *in.uniq.front();
    for (const TensorTrain* t : in.uniq) {
        if (t->order() != first.order() || t->phys_dims() != first.phys_dims())
            throw std::invalid_argument("rsi: inputs must share order and phys dims");
    }
    if (cfg.chi_max < 1 || cfg.eps_id < 0 || cfg.oversample_p < 0)
        throw std::invalid_argument("rsi: invalid config");

    // A zero factor (or zero map target) short-circuits to the rank-1 zero TT.
    for (const TensorTrain* t : in.uniq)
        if (tt_inner(*t, *t) == 0.0) {
            RsiReport rep{tt_zero(first.phys_dims()), {}, {}, 0, 0, 0.0, 1, 0};
            if (in.f) {
                // map of zero: constant f(0) TT (rank 1)
                double v = in.f(0.0);
                TensorTrain z = tt_zero(first.phys_dims());
                for (Index j = 0; j < z.order(); ++j)
                    for (Index s = 0; s < z.core(j).phys; ++s)
                        z.core(j).at(0, s, 0) = (j == 0) ? v : 1.0;
                rep.output = std::move(z);
            }
            return rep;
        }

    int max_attempts = omegas_override ? 1 : 3;
    for (int attempt = 0;; ++attempt) {
        try {
            RsiRun run{in, cfg, omegas_override,
                       cfg.seed + static_cast<std::uint64_t>(attempt) * kReseedStride};
            RsiReport rep = run();
            rep.retries = attempt;
            return rep;
        } catch (const DegenerateSketchError&) {
            if (attempt + 1 >= max_attempts) throw;
        }
    }
}

} // namespace

Index rsi_sketch_dim(const RsiConfig& cfg, Index d_max) {
    return (cfg.chi_max + d_max - 1) / d_max + cfg.oversample_p;
}

void PivotTrail::validate_left_nesting() const {
    for (std::size_t it = 1; it < multi.size(); ++it) {
        std::set<std::vector<Index>> prev(multi[it - 1].begin(), multi[it - 1].end());
        for (const std::vector<Index>& mi : multi[it]) {
            std::vector<Index> prefix(mi.begin(), mi.end() - 1);
            if (!prev.count(prefix))
                throw std::logic_error("PivotTrail: left-nesting violated");
        }
    }
}

RsiReport rsi_hadamard(const std::vector<const TensorTrain*>& inputs, const RsiConfig& cfg,
                       const std::vector<Eigen::MatrixXd>* omegas_override) {
    if (inputs.size() < 2)
        throw std::invalid_argument("rsi_hadamard: need at least 2 inputs");
    RunInputs in;
    for (const TensorTrain* t : inputs) {
        std::size_t idx = 0;
        for (; idx < in.uniq.size(); ++idx)
            if (in.uniq[idx] == t) break;
        if (idx == in.uniq.size()) in.uniq.push_back(t);
        in.which.push_back(idx);
    }
    return run_with_retries(in, cfg, omegas_override);
}

RsiReport rsi_map(const TensorTrain& input, const std::function<double(double)>& f,
                  const RsiConfig& cfg,
                  const std::vector<Eigen::MatrixXd>* omegas_override) {
    if (!f) throw std::invalid_argument("rsi_map: empty function");
    RunInputs in;
    in.uniq.push_back(&input);
    in.which.push_back(0);
    in.f = f;
    return run_with_retries(in, cfg, omegas_override);
}

} // namespace tt
