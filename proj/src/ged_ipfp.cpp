#include <algorithm>
#include <cstdlib>

#include "bihyb/error.hpp"
#include "bihyb/ged.hpp"
#include "bihyb/kernels.hpp"

namespace bihyb {

namespace {

// Padded formulation. Rows: g1 nodes then one dummy per g2 node. Columns: g2
// nodes then one dummy per g1 node. Admissible entries are substitutions
// (i, j), deletions (i, n2 + i), insertions (n1 + j, j) and the dummy block.
//
// For a permutation X with real block R (n1 x n2) the edit cost is
//   <L, X> + e (|E1| + |E2|) - e <R, A1 R A2>
// which is the relaxed objective on the whole polytope.
class PaddedGed {
public:
    PaddedGed(const LabeledGraph& g1, const LabeledGraph& g2, const CostModel& c)
        : g1_(g1), g2_(g2), n1_(static_cast<std::size_t>(g1.node_count())),
          n2_(static_cast<std::size_t>(g2.node_count())), size_(n1_ + n2_), edge_(static_cast<double>(c.edge_indel)),
          linear_(size_, size_, 0.0), allowed_(size_ * size_, 0) {
        for (std::size_t i = 0; i < n1_; ++i) {
            for (std::size_t j = 0; j < n2_; ++j) {
                linear_(i, j) = static_cast<double>(
                    c.substitution(g1.label(static_cast<NodeId>(i)), g2.label(static_cast<NodeId>(j))));
                allowed_[i * size_ + j] = 1;
            }
            linear_(i, n2_ + i) = static_cast<double>(c.node_indel);
            allowed_[i * size_ + n2_ + i] = 1;
        }
        for (std::size_t j = 0; j < n2_; ++j) {
            linear_(n1_ + j, j) = static_cast<double>(c.node_indel);
            allowed_[(n1_ + j) * size_ + j] = 1;
            for (std::size_t i = 0; i < n1_; ++i) allowed_[(n1_ + j) * size_ + n2_ + i] = 1;
        }
        constant_ = edge_ * static_cast<double>(g1.edge_count() + g2.edge_count());

        // Worst-case magnitude of a gradient entry bounds what LSAP may see
        // on admissible entries; anything above it is never chosen.
        double max_linear = 0.0;
        for (double v : linear_.flat()) max_linear = std::max(max_linear, v);
        const double max_quad = 2.0 * edge_ * static_cast<double>(std::max<std::size_t>(1, size_ * size_));
        forbidden_ = 1.0 + (max_linear + max_quad) * static_cast<double>(size_ + 1);

        real_.assign(n1_ * n2_, 0.0);
        y_t_.assign(n2_ * n1_, 0.0);
        q_t_.assign(n2_ * n1_, 0.0);
    }

    std::size_t size() const { return size_; }
    bool allowed(std::size_t r, std::size_t c) const { return allowed_[r * size_ + c] != 0; }

    DenseMatrix uniform_start() const {
        // s on substitutions and the dummy block, 1 - n2 s on deletions,
        // 1 - n1 s on insertions: every row and column sums to one.
        DenseMatrix x(size_, size_, 0.0);
        const double s = 1.0 / static_cast<double>(std::max(n1_, n2_) + 1);
        for (std::size_t i = 0; i < n1_; ++i) {
            for (std::size_t j = 0; j < n2_; ++j) x(i, j) = s;
            x(i, n2_ + i) = 1.0 - static_cast<double>(n2_) * s;
        }
        for (std::size_t j = 0; j < n2_; ++j) {
            x(n1_ + j, j) = 1.0 - static_cast<double>(n1_) * s;
            for (std::size_t i = 0; i < n1_; ++i) x(n1_ + j, n2_ + i) = s;
        }
        return x;
    }

    /// <R, A1 R A2> for the real block R of x. Leaves (A1 R A2)^T in q_t_.
    double quadratic(const DenseMatrix& x) {
        for (std::size_t i = 0; i < n1_; ++i)
            std::copy_n(x.row(i).data(), n2_, real_.data() + i * n2_);
        // Y = A1 R, stored transposed: column i of Y^T is the sum of rows k of
        // R over g1 neighbours k of i.
        std::vector<double> y(n1_ * n2_, 0.0);
        for (std::size_t i = 0; i < n1_; ++i) {
            std::span<double> yi(y.data() + i * n2_, n2_);
            for (NodeId k : g1_.neighbors(static_cast<NodeId>(i))) {
                kernels::axpy(1.0, std::span<const double>(real_.data() + static_cast<std::size_t>(k) * n2_, n2_), yi);
            }
        }
        for (std::size_t i = 0; i < n1_; ++i)
            for (std::size_t j = 0; j < n2_; ++j) y_t_[j * n1_ + i] = y[i * n2_ + j];
        // Q^T = A2 Y^T.
        std::fill(q_t_.begin(), q_t_.end(), 0.0);
        for (std::size_t j = 0; j < n2_; ++j) {
            std::span<double> qj(q_t_.data() + j * n1_, n1_);
            for (NodeId l : g2_.neighbors(static_cast<NodeId>(j))) {
                kernels::axpy(1.0, std::span<const double>(y_t_.data() + static_cast<std::size_t>(l) * n1_, n1_), qj);
            }
        }
        // <R, Q> = <R^T, Q^T>
        double total = 0.0;
        std::vector<double> r_col(n1_);
        for (std::size_t j = 0; j < n2_; ++j) {
            for (std::size_t i = 0; i < n1_; ++i) r_col[i] = real_[i * n2_ + j];
            total += kernels::dot(r_col, std::span<const double>(q_t_.data() + j * n1_, n1_));
        }
        return total;
    }

    double objective(const DenseMatrix& x) {
        return kernels::dot(linear_.flat(), x.flat()) + constant_ - edge_ * quadratic(x);
    }

    /// Gradient at x; zero on inadmissible entries.
    DenseMatrix gradient(const DenseMatrix& x) {
        quadratic(x);
        DenseMatrix g = linear_;
        for (std::size_t i = 0; i < n1_; ++i)
            for (std::size_t j = 0; j < n2_; ++j) g(i, j) -= 2.0 * edge_ * q_t_[j * n1_ + i];
        return g;
    }

    /// LSAP on `scores` restricted to admissible entries.
    std::vector<int> best_vertex(const DenseMatrix& scores) const {
        DenseMatrix costs = scores;
        auto flat = costs.flat();
        for (std::size_t k = 0; k < flat.size(); ++k)
            if (!allowed_[k]) flat[k] = forbidden_;
        return hungarian_lsap(costs).col_of_row;
    }

    DenseMatrix vertex_matrix(const std::vector<int>& perm) const {
        DenseMatrix b(size_, size_, 0.0);
        for (std::size_t r = 0; r < size_; ++r) b(r, static_cast<std::size_t>(perm[r])) = 1.0;
        return b;
    }

    NodeMapping to_mapping(const std::vector<int>& perm) const {
        NodeMapping m;
        m.g2_size = static_cast<int>(n2_);
        m.target.assign(n1_, kEpsilon);
        for (std::size_t i = 0; i < n1_; ++i)
            if (static_cast<std::size_t>(perm[i]) < n2_) m.target[i] = perm[i];
        return m;
    }

    double edge_weight() const { return edge_; }

private:
    const LabeledGraph& g1_;
    const LabeledGraph& g2_;
    std::size_t n1_;
    std::size_t n2_;
    std::size_t size_;
    double edge_;
    DenseMatrix linear_;
    std::vector<char> allowed_;
    double constant_ = 0.0;
    double forbidden_ = 0.0;
    std::vector<double> real_;
    std::vector<double> y_t_;
    std::vector<double> q_t_;
};

}  // namespace

GedResult ipfp_ged(const LabeledGraph& g1, const LabeledGraph& g2, const CostModel& c, const IpfpOptions& opts,
                   IpfpTrace* trace) {
    if (opts.max_iters < 1) throw ContractError("ipfp_ged: max_iters must be >= 1");
    if (!(opts.tol > 0.0)) throw ContractError("ipfp_ged: tol must be > 0");

    PaddedGed problem(g1, g2, c);
    const std::size_t size = problem.size();
    DenseMatrix x = opts.init ? *opts.init : problem.uniform_start();
    if (x.rows() != size || x.cols() != size) throw ContractError("ipfp_ged: init has wrong shape");

    GedResult best;
    bool have_best = false;
    auto consider = [&](const std::vector<int>& perm) {
        NodeMapping m = problem.to_mapping(perm);
        const Cost cost = edit_cost(g1, g2, m, c);
        if (!have_best || cost < best.cost) {
            best.cost = cost;
            best.mapping = std::move(m);
            have_best = true;
        }
    };

    if (trace) {
        trace->relaxed_objective.assign(1, problem.objective(x));
        trace->iterations = 0;
    }
    // Every visited LSAP vertex is a feasible mapping; the cheapest one
    // competes with the rounded end point.
    std::vector<int> vertex;
    for (int it = 0; it < opts.max_iters && size > 0; ++it) {
        const DenseMatrix grad = problem.gradient(x);
        vertex = problem.best_vertex(grad);
        consider(vertex);
        const DenseMatrix b = problem.vertex_matrix(vertex);

        DenseMatrix d = b;
        kernels::axpy(-1.0, x.flat(), d.flat());
        const double slope = kernels::dot(grad.flat(), d.flat());
        if (!(slope < 0.0)) break;  // x already minimises the linearisation
        // f(x + t d) = f(x) + t slope + t^2 curvature
        const double curvature = -problem.edge_weight() * problem.quadratic(d);
        double step = 1.0;
        if (curvature > 0.0) step = std::min(1.0, -slope / (2.0 * curvature));
        const double predicted = -(step * slope + step * step * curvature);

        kernels::axpy(step, d.flat(), x.flat());
        if (trace) {
            trace->relaxed_objective.push_back(problem.objective(x));
            trace->iterations = it + 1;
        }
        if (predicted < opts.tol) break;
    }

    if (size > 0) {
        DenseMatrix negated = x;
        for (double& v : negated.flat()) v = -v;
        consider(problem.best_vertex(negated));
    } else {
        best.mapping.g2_size = 0;
        best.cost = 0;
    }
    return best;
}

}  // namespace bihyb
