#pragma once

// Entropic optimal transport between two discrete distributions of equal size.
//
// The regularized plan has the scaling form diag(u) * exp(-lambda * M) * diag(v)
// and is found by alternately rescaling rows and columns (Sinkhorn-Knopp).
// Larger lambda means weaker regularization.

#include <cstddef>
#include <span>
#include <vector>

#include "sinktrack/dense.hpp"
#include "sinktrack/kernels.hpp"

namespace sinktrack {

using Permutation = std::vector<std::size_t>;

/// Non-negative weights summing to one.
class MassVector {
public:
    explicit MassVector(std::vector<double> weights);
    static MassVector uniform(std::size_t d);

    std::size_t size() const noexcept { return weights_.size(); }
    double operator[](std::size_t i) const noexcept { return weights_[i]; }
    std::span<const double> weights() const noexcept { return weights_; }

private:
    std::vector<double> weights_;
};

/// Square matrix of finite, non-negative transport costs.
class CostMatrix {
public:
    explicit CostMatrix(Matrix entries);

    std::size_t size() const noexcept { return entries_.rows(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return entries_(i, j); }
    const Matrix& entries() const noexcept { return entries_; }
    double max() const noexcept { return max_; }

private:
    Matrix entries_;
    double max_ = 0.0;
};

struct SolverOptions {
    double lambda = 100.0;
    /// Bound on the summed L1 residual of all marginals.
    double tolerance = 1e-9;
    int max_iterations = 10000;
    /// Log-domain potentials with periodic absorption; required once lambda * max(M) > 500.
    bool stabilized = false;
    Exec exec = Exec::Parallel;

    void validate() const;
};

/// lambda * max cost above which the plain kernel exp(-lambda M) is refused.
inline constexpr double kUnstabilizedLimit = 500.0;

struct TransportPlan {
    Matrix entries;
    int iterations = 0;
    bool converged = false;
    double marginal_residual = 0.0;

    std::size_t size() const noexcept { return entries.rows(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return entries(i, j); }
};

/// Entropic-regularized plan between r and c under `cost`.
/// Throws InvalidArgument on shape mismatch and NumericError when the
/// unstabilized kernel would underflow.
TransportPlan sinkhorn_plan(const CostMatrix& cost, const MassVector& r, const MassVector& c,
                            const SolverOptions& opts);

/// Frobenius inner product <P, M>.
double transport_cost(const Matrix& plan, const CostMatrix& cost);
inline double transport_cost(const TransportPlan& plan, const CostMatrix& cost) {
    return transport_cost(plan.entries, cost);
}

/// |rowsums(P) - r|_1 + |colsums(P) - c|_1
double marginal_residual(const Matrix& plan, const MassVector& r, const MassVector& c);
inline double marginal_residual(const TransportPlan& plan, const MassVector& r, const MassVector& c) {
    return marginal_residual(plan.entries, r, c);
}

struct Assignment {
    Permutation permutation;
    double cost = 0.0;
};

/// Exhaustive minimizer of (1/d) sum_i m_{i, sigma(i)} over permutations.
/// Ties resolve to the lexicographically smallest permutation. Limited to d <= 10.
Assignment exact_assignment_oracle(const CostMatrix& cost);

/// Per-row index of the largest entry (first one on ties).
Permutation row_argmax(const Matrix& m);

} // namespace sinktrack
