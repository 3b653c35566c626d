#include "sinktrack/ot_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "scaling_detail.hpp"

namespace sinktrack {

using namespace detail;

namespace {

constexpr double kMassTolerance = 1e-12;

} // namespace

MassVector::MassVector(std::vector<double> weights) : weights_(std::move(weights)) {
    require(!weights_.empty(), "MassVector: empty");
    double total = 0.0;
    for (double w : weights_) {
        require(std::isfinite(w) && w >= 0.0, "MassVector: weights must be finite and non-negative");
        total += w;
    }
    require(std::abs(total - 1.0) <= kMassTolerance, "MassVector: weights must sum to 1");
}

MassVector MassVector::uniform(std::size_t d) {
    require(d > 0, "MassVector: empty");
    return MassVector(std::vector<double>(d, 1.0 / static_cast<double>(d)));
}

CostMatrix::CostMatrix(Matrix entries) : entries_(std::move(entries)) {
    require(entries_.rows() > 0 && entries_.square(), "CostMatrix: must be non-empty and square");
    for (double x : entries_.data()) {
        require(std::isfinite(x), "CostMatrix: non-finite entry");
        require(x >= 0.0, "CostMatrix: negative entry");
        max_ = std::max(max_, x);
    }
}

void SolverOptions::validate() const {
    require(lambda > 0.0 && std::isfinite(lambda), "SolverOptions: lambda must be positive");
    require(tolerance > 0.0, "SolverOptions: tolerance must be positive");
    require(max_iterations >= 1, "SolverOptions: max_iterations must be >= 1");
}

TransportPlan sinkhorn_plan(const CostMatrix& cost, const MassVector& r, const MassVector& c,
                            const SolverOptions& opts) {
    opts.validate();
    const std::size_t d = cost.size();
    require(r.size() == d && c.size() == d, "sinkhorn_plan: marginal length does not match cost");

    TransportPlan plan;
    if (d == 1) {
        plan.entries = Matrix(1, 1, 1.0);
        plan.converged = true;
        plan.marginal_residual = marginal_residual(plan.entries, r, c);
        return plan;
    }
    if (!opts.stabilized && opts.lambda * cost.max() > kUnstabilizedLimit)
        throw_underflow(opts.lambda, cost.max());

    const Exec ex = opts.exec;
    const Matrix& m = cost.entries();
    const std::vector<double> log_r = logs(r.weights()), log_c = logs(c.weights());

    // Absorbed log potentials and the multiplicative scalings on top of them.
    std::vector<double> f(d, 0.0), g(d, 0.0), u(d, 1.0), v(d, 1.0);
    std::vector<double> kv(d), ktu(d);
    Matrix kernel(d, d);

    // Exact log-domain row and column update from the current potentials.
    auto log_cycle = [&] {
        kernels::row_logsumexp(ex, m, opts.lambda, g, f);
        for (std::size_t i = 0; i < d; ++i) f[i] = log_r[i] - f[i];
        kernels::col_logsumexp(ex, m, opts.lambda, f, g);
        for (std::size_t j = 0; j < d; ++j) g[j] = log_c[j] - g[j];
    };
    auto absorb = [&] {
        detail::absorb(f, u);
        detail::absorb(g, v);
    };

    if (opts.stabilized) log_cycle();
    kernels::gibbs_kernel(ex, m, opts.lambda, f, g, kernel);

    int it = 0;
    for (;; ++it) {
        kernels::matvec(ex, kernel, v, kv);
        kernels::matvec_t(ex, kernel, u, ktu);
        double residual = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            residual += std::abs(u[i] * kv[i] - r[i]) + std::abs(v[i] * ktu[i] - c[i]);
        if (residual <= opts.tolerance) {
            plan.converged = true;
            break;
        }
        if (it == opts.max_iterations) break;

        bool ok = rescale(r.weights(), kv, u);
        if (ok) {
            kernels::matvec_t(ex, kernel, u, ktu);
            ok = rescale(c.weights(), ktu, v);
        }
        if (!ok) {
            if (!opts.stabilized) throw_underflow(opts.lambda, cost.max());
            // A slice of the stored kernel vanished: redo this cycle exactly in log space.
            absorb();
            log_cycle();
            kernels::gibbs_kernel(ex, m, opts.lambda, f, g, kernel);
        } else if (opts.stabilized && (needs_absorb(u) || needs_absorb(v))) {
            absorb();
            kernels::gibbs_kernel(ex, m, opts.lambda, f, g, kernel);
        }
    }

    plan.iterations = it;
    plan.entries = Matrix(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) plan.entries(i, j) = u[i] * kernel(i, j) * v[j];
    plan.marginal_residual = marginal_residual(plan.entries, r, c);
    return plan;
}

double transport_cost(const Matrix& plan, const CostMatrix& cost) {
    require(plan.rows() == cost.size() && plan.cols() == cost.size(),
            "transport_cost: plan and cost dimensions differ");
    double total = 0.0;
    const auto p = plan.data();
    const auto m = cost.entries().data();
    for (std::size_t x = 0; x < p.size(); ++x) total += p[x] * m[x];
    return total;
}

double marginal_residual(const Matrix& plan, const MassVector& r, const MassVector& c) {
    require(plan.rows() == r.size() && plan.cols() == c.size(),
            "marginal_residual: plan and marginal dimensions differ");
    double residual = 0.0;
    std::vector<double> col(plan.cols(), 0.0);
    for (std::size_t i = 0; i < plan.rows(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < plan.cols(); ++j) {
            row += plan(i, j);
            col[j] += plan(i, j);
        }
        residual += std::abs(row - r[i]);
    }
    for (std::size_t j = 0; j < plan.cols(); ++j) residual += std::abs(col[j] - c[j]);
    return residual;
}

Assignment exact_assignment_oracle(const CostMatrix& cost) {
    const std::size_t d = cost.size();
    require(d <= 10, "exact_assignment_oracle: d > 10 is too large to enumerate");
    Permutation perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    Assignment best{perm, std::numeric_limits<double>::infinity()};
    do {
        double total = 0.0;
        for (std::size_t i = 0; i < d; ++i) total += cost(i, perm[i]);
        const double value = total / static_cast<double>(d);
        if (value < best.cost) best = {perm, value};
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

Permutation row_argmax(const Matrix& m) {
    Permutation out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto row = m.row(i);
        out[i] = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    }
    return out;
}

} // namespace sinktrack
